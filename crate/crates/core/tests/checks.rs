use sl2c_core::checks::*;
use sl2c_core::diagram::{Family, LambdaFamily};
use sl2c_core::powexpr::SampleConfig;
use sl2c_core::quadrature::QuadConfig;
use sl2c_core::weyl::Sector;
use sl2c_core::{C64, I};

const SECTORS: [Sector; 2] = [Sector::Holo, Sector::Anti];

#[test]
fn intertwining_both_layers() {
    let cfg = SampleConfig::default();
    for fam in [LambdaFamily::Plain, LambdaFamily::Tilde] {
        for n in 2..=3 {
            for sector in SECTORS {
                let k = intertwining(fam, n, sector, &cfg).unwrap();
                assert!(k.passed(), "{k:?}");
            }
        }
    }
}

#[test]
fn baxter_difference_equations() {
    let cfg = SampleConfig::default();
    for fam in [Family::A, Family::B, Family::C, Family::D] {
        for n in 1..=3 {
            for sector in SECTORS {
                let k = baxter_natural(fam, n, sector, &cfg).unwrap();
                assert!(k.passed(), "{k:?}");
            }
        }
    }
}

#[test]
fn c_family_right_side_is_q_c() {
    let cfg = SampleConfig::default();
    for n in 1..=3 {
        let with_c = baxter_difference(Family::C, Family::C, n, Sector::Holo, &cfg).unwrap();
        let with_a = baxter_difference(Family::C, Family::A, n, Sector::Holo, &cfg).unwrap();
        assert!(with_c.passed());
        assert!(with_a.residual > 0.5, "{with_a:?}");
    }
}

#[test]
fn operator_star_triangle() {
    let r = stop_check(50, 42).unwrap();
    assert!(r.passed() && r.max_residual <= 1e-10, "{r:?}");
}

#[test]
fn rkk_forms_agree() {
    for eps in [1e-3, 0.3] {
        let r = twoform_check(50, 42, eps).unwrap();
        assert!(r.max_residual <= 1e-8, "{r:?}");
    }
}

#[test]
fn hamiltonian_forms() {
    let r = hkk_check(50, 42, 3, 4, 1e-10).unwrap();
    assert!(r.passed(), "{r:?}");
    let r = hkk_check(5, 7, 1, 3, 1e-6).unwrap();
    assert!(r.passed(), "{r:?}");
    let r = hkk_check(5, 7, 2, 3, 1e-6).unwrap();
    assert!(r.passed(), "{r:?}");
}

#[test]
fn psi_a_scaling_law() {
    let cfg = QuadConfig { tol: 1e-6, ..Default::default() };
    let r = psi_a_scaling(C64::new(1.3, 0.0), 2, 11, &cfg).unwrap();
    assert!(r.passed(), "{}", r.max_rel_err());
    let r = psi_a_scaling(0.8 * (0.6 * I).exp(), 1, 12, &cfg).unwrap();
    assert!(r.passed(), "{}", r.max_rel_err());
}

#[test]
fn psi_b_eigenvalue_equation() {
    let cfg = QuadConfig { tol: 1e-5, ..Default::default() };
    let r = psi_b_eigenvalue(3, 42, &cfg).unwrap();
    assert_eq!(r.draws.len(), 3);
    assert!(r.passed(), "{:?}", r.draws);
}

#[test]
#[ignore = "three nested oscillatory integrals per point; run with --ignored"]
fn psi_b_exchange_symmetry() {
    let cfg = QuadConfig { tol: 1e-4, max_cells: 4000, ..Default::default() };
    let r = exchange_symmetry(5, 42, &cfg).unwrap();
    assert!(r.passed(), "{:?}", r.draws);
}

#[test]
fn measure_assembly_agrees() {
    let draws = measure_agreement(3, 3, 42).unwrap();
    assert_eq!(draws.len(), 18);
    assert!(draws.iter().all(|d| d.rel_err < 1e-12));
}

#[test]
fn rule_soundness() {
    let cfg = QuadConfig::default();
    for kind in RuleKind::ALL {
        let draws = if kind == RuleKind::Star { 5 } else { 3 };
        let checks = check_rule(kind, draws, 42, &cfg).unwrap();
        assert_eq!(checks.len(), draws);
        for c in checks {
            assert!(c.passed(), "{c:?}");
        }
    }
}

#[test]
fn appendix_projection() {
    let cfg = QuadConfig { tol: 1e-6, ..Default::default() };
    let r = r1_projection_check(&[0, 1], 42, &cfg).unwrap();
    assert!(r.equals_chain_form);
    for d in &r.draws {
        assert!(d.rel_chain <= 1e-3, "{d:?}");
    }
}
