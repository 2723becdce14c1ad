use proptest::prelude::*;
use sl2c_core::checks::{measure_agreement, random_point};
use sl2c_core::diagram::MeasureFamily;
use sl2c_core::rng::Rng;
use sl2c_core::specialfn::{SepPoint, Spin, ZIndex};
use sl2c_core::spectral::*;
use sl2c_core::{C64, PI};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

fn pt(spin: Spin, seps: &[(i64, f64)]) -> SpectrumPoint {
    SpectrumPoint::new(seps.iter().map(|&(n, v)| SepPoint::new(n, v)).collect(), spin)
}

#[test]
fn measure_examples() {
    let one = pt(Spin::default(), &[(0, 0.4)]);
    assert!((measure(MeasureFamily::A, &one).unwrap() - 1.0 / (2.0 * PI * PI)).abs() < 1e-16);
    let two = pt(Spin::default(), &[(0, 0.0), (2, 0.0)]);
    assert!((measure(MeasureFamily::A, &two).unwrap() - 1.0 / (16.0 * PI.powi(6))).abs() < 1e-18);
    let b = pt(Spin::default(), &[(4, -0.3)]);
    assert!((measure(MeasureFamily::B, &b).unwrap() - 1.0 / (2.0 * PI.powi(6))).abs() < 1e-18);
}

#[test]
fn measure_matches_exchange_assembly() {
    for d in measure_agreement(3, 4, 21).unwrap() {
        assert!(d.rel_err < 1e-12, "{:?} N={}: {} vs {}", d.family, d.n, d.assembled, d.closed);
    }
}

#[test]
fn measure_symmetric_and_nonnegative() {
    let mut rng = Rng::new(5);
    for _ in 0..1000 {
        let n = rng.int(1, 4) as usize;
        let spin = Spin::new(rng.int(-2, 2), 0.1);
        let p = random_point(&mut rng, n, spin);
        for fam in [MeasureFamily::A, MeasureFamily::B] {
            let m = measure(fam, &p).unwrap();
            assert!(m >= 0.0);
            let mut q = p.clone();
            q.seps.reverse();
            q.seps.rotate_left(n / 2);
            assert!((measure(fam, &q).unwrap() - m).abs() <= 1e-14 * m.abs());
        }
    }
}

// 30-digit mpmath values of the Γ-quotient product.
#[test]
fn qd_matches_gamma_oracle() {
    let one = pt(Spin::new(0, 0.3), &[(0, 0.2)]);
    let q = baxter_eigenvalue_d((c(0.45, 0.0), c(0.45, 0.0)), &one).unwrap();
    assert!(rel(q, c(7.919_039_433_971_742, 9.757_176_069_982_044)) < 1e-12, "{q}");
    let two = pt(Spin::new(1, -0.15), &[(1, 0.4), (-3, -0.1)]);
    let q = baxter_eigenvalue_d((c(0.2, -0.25), c(0.2, 0.25)), &two).unwrap();
    assert!(rel(q, c(-39.262_420_291_298_25, -26.317_595_196_979_45)) < 1e-12, "{q}");
}

#[test]
fn qd_pole_is_reported() {
    let one = pt(Spin::new(0, 0.3), &[(0, 0.2)]);
    // u = −is makes s − iu vanish
    let spin = Spin::new(0, 0.3);
    let u = (spin.s() * c(0.0, -1.0), spin.s_bar() * c(0.0, -1.0));
    assert!(baxter_eigenvalue_d(u, &one).is_err());
}

#[test]
fn qd_conjugation_symmetry() {
    let mut rng = Rng::new(17);
    for _ in 0..50 {
        let spin = Spin::new(rng.int(-2, 2), rng.uniform(-0.5, 0.5));
        let n = rng.int(1, 3) as usize;
        let p = random_point(&mut rng, n, spin);
        let mut flipped = p.clone();
        for x in &mut flipped.seps {
            x.two_n = -x.two_n;
        }
        let nu = rng.uniform(-1.0, 1.0);
        let n_u = rng.int(-2, 2) as f64 + spin.two_ns as f64 / 2.0;
        let u = (c(nu, -n_u / 2.0), c(nu, n_u / 2.0));
        let uc = (u.0.conj(), u.1.conj());
        let a = baxter_eigenvalue_d(u, &p).unwrap().norm();
        let b = baxter_eigenvalue_d(uc, &flipped).unwrap().norm();
        assert!((a - b).abs() <= 1e-10 * a.max(b), "{a} vs {b}");
    }
}

#[test]
fn special_point_resolves_to_plus() {
    assert_eq!(resolve_special_point().unwrap(), 1);
}

#[test]
fn epsilon_slope_is_minus_i_energy() {
    let sign = resolve_special_point().unwrap();
    let mut rng = Rng::new(3);
    for n in 1..=3 {
        for _ in 0..5 {
            let spin = Spin::new(rng.int(-2, 2), rng.uniform(-0.5, 0.5));
            let p = random_point(&mut rng, n, spin);
            let e = energy(EnergyVariant::S, &p).unwrap();
            let slope = qd_log_slope(sign, &p, 1e-4).unwrap();
            assert!((slope - c(0.0, -e)).norm() < 1e-6, "N={n}: {slope} vs {e}");
            let q0 = normalized_qd(sign, &p, 1e-4).unwrap();
            assert!((q0 - c(1.0, -1e-4 * e)).norm() < 1e-6);
        }
    }
}

#[test]
fn energy_examples() {
    let z = pt(Spin::new(-2, 0.0), &[(0, 0.0)]);
    assert!(energy(EnergyVariant::S, &z).unwrap().abs() < 1e-10);
    for n in 1..=4 {
        let spin = Spin::new(1, 0.37);
        let p = pt(spin, &vec![(1, 0.37); n]);
        let want = -4.0 * n as f64 * core::f64::consts::LN_2;
        assert!((energy(EnergyVariant::S, &p).unwrap() - want).abs() < 1e-10);
    }
    // 30-digit mpmath
    let g = pt(Spin::new(2, 0.1), &[(0, 0.3), (4, -0.7)]);
    assert!((energy(EnergyVariant::S, &g).unwrap() - 1.105_635_044_432_187_7).abs() < 1e-12);
    assert!((energy(EnergyVariant::OneMinusS, &g).unwrap() - 2.475_321_844_855_905).abs() < 1e-12);
}

#[test]
fn energy_complex_form_is_real_and_equal() {
    let mut rng = Rng::new(8);
    for _ in 0..100 {
        let spin = Spin::new(rng.int(-3, 3), rng.uniform(-1.0, 1.0));
        let n = rng.int(1, 4) as usize;
        let p = random_point(&mut rng, n, spin);
        for v in [EnergyVariant::S, EnergyVariant::OneMinusS] {
            let e = energy(v, &p).unwrap();
            let ec = energy_complex(v, &p).unwrap();
            assert!(ec.im.abs() < 1e-12 && (ec.re - e).abs() < 1e-12);
        }
    }
}

#[test]
fn energy_pole_is_reported() {
    let p = pt(Spin::new(2, 0.2), &[(0, 0.2)]);
    assert!(energy(EnergyVariant::S, &p).is_err());
}

#[test]
fn pairwise_energy_examples() {
    let half = pairwise_energy(ConformalSpinPair::new(c(0.5, 0.0), c(0.5, 0.0))).unwrap();
    assert!((half - c(-8.0 * core::f64::consts::LN_2, 0.0)).norm() < 1e-12);
    let j = c(0.3, 0.1);
    let jb = c(0.7, 0.1);
    let v = pairwise_energy(ConformalSpinPair::new(j, jb)).unwrap();
    let w = pairwise_energy(ConformalSpinPair::new(1.0 - j, jb)).unwrap();
    assert!((v - w).norm() < 1e-12);
    assert!((v - c(-6.394_471_111_319_053, 0.0)).norm() < 1e-12);
}

#[test]
fn hamiltonian_form_one_against_form_three() {
    let a = ZIndex::new(c(0.42, -0.13), -1);
    let spin = Spin::new(1, 0.21);
    let f1 = pairwise_h_on_power(a, &spin, 1).unwrap();
    let f3 = pairwise_h_on_power(a, &spin, 3).unwrap();
    assert!(rel(f1, f3) < 1e-6);
    assert!(pairwise_h_on_power(a, &spin, 5).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn energy_permutation_invariant(ns in -2i64..=2, nus in -0.5f64..0.5,
                                    nus_k in proptest::collection::vec((-2i64..=2, -1.5f64..1.5), 1..5)) {
        let spin = Spin::new(ns, nus);
        let seps: Vec<(i64, f64)> = nus_k.iter().map(|&(n, v)| (2 * n + ns.rem_euclid(2), v)).collect();
        let p = pt(spin, &seps);
        let mut rev = seps.clone();
        rev.reverse();
        let q = pt(spin, &rev);
        for v in [EnergyVariant::S, EnergyVariant::OneMinusS] {
            if let (Ok(a), Ok(b)) = (energy(v, &p), energy(v, &q)) {
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
            }
        }
    }

    #[test]
    fn hamiltonian_forms_three_four(ns in -2i64..=2, nus in -0.5f64..0.5,
                                    re in -1.5f64..1.5, im in -0.6f64..0.6, m in -2i64..=2) {
        let spin = Spin::new(ns, nus);
        let a = ZIndex::new(c(re, im), m);
        if let (Ok(x), Ok(y)) = (pairwise_h_on_power(a, &spin, 3), pairwise_h_on_power(a, &spin, 4)) {
            prop_assert!((x - y).norm() <= 1e-10 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn pairwise_energy_reflection(jr in -2.0f64..2.0, ji in -1.0f64..1.0, d in -2i64..=2) {
        let j = c(jr, ji);
        let jb = j - d as f64;
        if let (Ok(a), Ok(b), Ok(e)) = (
            pairwise_energy(ConformalSpinPair::new(j, jb)),
            pairwise_energy(ConformalSpinPair::new(1.0 - j, jb)),
            pairwise_energy(ConformalSpinPair::new(j, 1.0 - jb)),
        ) {
            prop_assert!((a - b).norm() <= 1e-10 * (1.0 + a.norm()));
            prop_assert!((a - e).norm() <= 1e-10 * (1.0 + a.norm()));
        }
    }
}
