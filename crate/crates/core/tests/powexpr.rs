use proptest::prelude::*;
use sl2c_core::checks::{baxter_natural, intertwining};
use sl2c_core::diagram::{build_psi, Family, LambdaFamily};
use sl2c_core::powexpr::*;
use sl2c_core::quadrature::{integrate2d, Integrand, QuadConfig};
use sl2c_core::specialfn::{i_pow, ZIndex};
use sl2c_core::symbolic::{Affine, Binding, CRat, Poly, Sym, SymIndex};
use sl2c_core::weyl::{monodromy, s0, s_minus, s_plus, Sector, Site};
use sl2c_core::{C64, I};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn param(k: u8) -> SymIndex {
    SymIndex::new(Affine::sym(Sym::Param(k)), Affine::sym(Sym::ParamBar(k)))
}

fn bind_param(b: Binding, k: u8, idx: ZIndex) -> Binding {
    b.with_pair(Sym::Param(k), idx.alpha, idx.bar())
}

#[test]
fn evaluate_examples() {
    let e = PowExpr::power(Base::Single(0), SymIndex::int(1));
    assert_eq!(e.evaluate(&[c(2.0, 0.0)], &Binding::new()).unwrap(), c(4.0, 0.0));

    let a = c(0.3, 0.2);
    let z = c(-0.7, 1.1);
    let v = BoundExpr::power(Base::Single(0), ZIndex::new(a, 0)).eval_checked(&[z]).unwrap();
    let want = (a * 2.0 * z.norm().ln()).exp();
    assert!((v - want).norm() < 1e-14);

    let w = BoundExpr::wave(0, c(1.0, 0.0)).eval_checked(&[I]).unwrap();
    assert!((w - c(1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn evaluate_reports_singular_and_unbound() {
    let e = PowExpr::power(Base::Diff(0, 1), param(0));
    let b = bind_param(Binding::new(), 0, ZIndex::new(c(0.4, 0.0), 1));
    assert!(e.evaluate(&[c(0.5, 0.0), c(0.5, 0.0)], &b).is_err());
    assert!(e.evaluate(&[c(0.5, 0.0), c(0.1, 0.0)], &Binding::new()).is_err());
}

#[test]
fn diff_power_rule() {
    let e = PowExpr::power(Base::Single(0), param(0));
    let lowered = SymIndex::new(Affine::sym(Sym::Param(0)) + Affine::int(-1), Affine::sym(Sym::ParamBar(0)));
    let want = PowExpr::power(Base::Single(0), lowered).scale(&Poly::sym(Sym::Param(0)));
    assert_eq!(e.diff(0, Sector::Holo), want);
}

#[test]
fn diff_wave() {
    let w = PowExpr::wave(0, Affine::sym(Sym::P(0)));
    let want = w.scale(&Poly::sym(Sym::P(0)).scale(CRat::i()));
    assert_eq!(w.diff(0, Sector::Holo), want);
    let wb = w.scale(&Poly::sym(Sym::PBar(0)).scale(CRat::i()));
    assert_eq!(w.diff(0, Sector::Anti), wb);
}

#[test]
fn diff_product_rule_against_finite_differences() {
    let e = &PowExpr::power(Base::Diff(0, 1), param(0)) * &PowExpr::wave(0, Affine::sym(Sym::P(0)));
    let d = e.diff(0, Sector::Holo);
    assert_eq!(d.len(), 2);
    let p = c(0.8, -0.3);
    let b = bind_param(Binding::new(), 0, ZIndex::new(c(0.35, 0.2), 2)).with_pair(Sym::P(0), p, p.conj());
    let (f, df) = (e.bind(&b).unwrap(), d.bind(&b).unwrap());
    let z = [c(0.6, 0.4), c(-0.5, 0.1)];
    let h = 1e-5;
    let at = |dz: C64| f.eval(&[z[0] + dz, z[1]]);
    let dx = (at(c(h, 0.0)) - at(c(-h, 0.0))) / (2.0 * h);
    let dy = (at(c(0.0, h)) - at(c(0.0, -h))) / (2.0 * h);
    let fd = (dx - I * dy) / 2.0;
    let exact = df.eval(&z);
    assert!((fd - exact).norm() < 1e-8 * exact.norm(), "{fd} vs {exact}");
}

#[test]
fn weyl_b1_on_wave() {
    let b1 = monodromy(1, Sector::Holo, Sym::U).unwrap().get(0, 1).clone();
    let w = PowExpr::wave(0, Affine::sym(Sym::P(0)));
    assert_eq!(w.apply_weyl(&b1, |_| 0), w.scale(&Poly::sym(Sym::P(0))));
}

#[test]
fn weyl_a1_eigen_relation() {
    let a1 = monodromy(1, Sector::Holo, Sym::U).unwrap().get(0, 0).clone();
    let idx = SymIndex::new(
        Affine::isym(Sym::X(1)) - Affine::sym(Sym::S),
        Affine::isym(Sym::XBar(1)) - Affine::sym(Sym::SBar),
    );
    let e = PowExpr::power(Base::Single(0), idx);
    let want = e.scale(&(Poly::sym(Sym::U) - Poly::sym(Sym::X(1))));
    assert_eq!(e.apply_weyl(&a1, |_| 0), want);
}

#[test]
fn s0_on_constant() {
    let r = PowExpr::one().apply_weyl(&s0(Site::holo(1)), |_| 0);
    assert_eq!(r, PowExpr::scalar(Poly::sym(Sym::S)));
}

#[test]
fn inversion_of_constant() {
    let j = PowExpr::one().inversion_j(&[0, 1]).unwrap();
    let m2s = SymIndex::new(Affine::term(CRat::int(-2), Sym::S), Affine::term(CRat::int(-2), Sym::SBar));
    let want = &PowExpr::power(Base::Single(0), m2s.clone()) * &PowExpr::power(Base::Single(1), m2s);
    assert_eq!(j, want);
}

#[test]
fn inversion_is_involution() {
    let e = PowExpr::power(Base::Single(0), param(0));
    assert_eq!(e.inversion_j(&[0]).unwrap().inversion_j(&[0]).unwrap(), e);
    let w = &e * &PowExpr::wave(0, Affine::sym(Sym::P(0)));
    assert_eq!(w.inversion_j(&[0]).unwrap().inversion_j(&[0]).unwrap(), w);
}

#[test]
fn inversion_conjugates_raising_to_lowering() {
    let e = PowExpr::power(Base::Single(0), param(0));
    let b = bind_param(Binding::new().with_pair(Sym::S, c(0.5, 0.3), c(0.5, 0.3)), 0, ZIndex::new(c(0.21, -0.4), 1));
    let site = Site::holo(1);
    let lhs = e.inversion_j(&[0]).unwrap().apply_weyl(&s_plus(site), |_| 0).inversion_j(&[0]).unwrap();
    let rhs = e.apply_weyl(&s_minus(site), |_| 0);
    let cfg = SampleConfig { samples: 20, ..Default::default() };
    assert!(kernel_identity_residual(&lhs, &rhs, &b, &cfg).unwrap() <= 1e-10);
}

#[test]
fn inversion_rejects_mixed_difference() {
    let e = PowExpr::power(Base::Diff(0, 1), param(0));
    assert!(e.inversion_j(&[0]).is_err());
}

#[test]
fn frac_deriv_identity_and_wave() {
    let e = BoundExpr::power(Base::Single(0), ZIndex::new(c(0.3, 0.1), 1)).add(&BoundExpr::wave(0, c(0.4, 0.9)));
    let id = e.frac_deriv(0, ZIndex::new(c(0.0, 0.0), 0)).unwrap();
    let z = [c(0.7, -0.2)];
    assert!((id.eval(&z) - e.eval(&z)).norm() < 1e-15);

    let p = c(0.4, 0.9);
    let g = ZIndex::new(c(0.45, -0.2), -1);
    let w = BoundExpr::wave(0, p);
    let d = w.frac_deriv(0, g).unwrap();
    assert!((d.eval(&z) - pow_pair(p, g) * w.eval(&z)).norm() < 1e-14);
}

// [z]^{−α} = (i^{α−ᾱ} a(α)/π) ∫ d²q [q]^{α−1} e^{−i(qz+q̄z̄)}, so [i∂]^γ multiplies the
// integrand by [−q]^γ; the resulting integral is done by quadrature.
#[test]
fn frac_deriv_on_power_against_fourier_quadrature() {
    let alpha = ZIndex::new(c(0.7, 0.15), 1);
    let gamma = ZIndex::new(c(0.35, -0.1), 0);
    let z = c(0.6, -0.45);
    let ex = alpha.add(&gamma).shift(c(-1.0, 0.0));
    let local = (2.0 * ex.alpha.re) - ex.m as f64;
    let f = Integrand::new(move |q: C64| pow_pair(q, ex) * (-I * (q * z + q.conj() * z.conj())).exp(), vec![(c(0.0, 0.0), local)], -local)
        .oscillating(z.norm());
    let cfg = QuadConfig { tol: 1e-7, ..Default::default() };
    let integral = integrate2d(&f, &cfg).unwrap().value;
    let pref = i_pow(alpha.m) * sl2c_core::specialfn::a_of(alpha).unwrap() / sl2c_core::PI;
    let sign = if gamma.m % 2 == 0 { 1.0 } else { -1.0 };
    let oracle = pref * sign * integral;

    let e = BoundExpr::power(Base::Single(0), alpha.neg());
    let closed = e.frac_deriv(0, gamma).unwrap().eval(&[z]);
    assert!((closed - oracle).norm() < 1e-4 * closed.norm(), "{closed} vs {oracle}");
}

#[test]
fn frac_deriv_rejects_mixed_dependence() {
    let e = BoundExpr::power(Base::Diff(0, 1), ZIndex::new(c(0.3, 0.0), 0));
    assert!(e.frac_deriv(0, ZIndex::new(c(0.2, 0.0), 0)).is_err());
}

#[test]
fn residual_of_identical_sides_is_zero() {
    let e = &PowExpr::power(Base::Diff(0, 1), param(0)) * &PowExpr::power(Base::Single(1), param(1));
    let b = bind_param(bind_param(Binding::new(), 0, ZIndex::new(c(0.2, 0.3), 1)), 1, ZIndex::new(c(-0.4, 0.1), -2));
    assert_eq!(kernel_identity_residual(&e, &e, &b, &SampleConfig::default()).unwrap(), 0.0);
}

#[test]
fn baxter_and_intertwining_at_two_sites() {
    let cfg = SampleConfig::default();
    for sector in [Sector::Holo, Sector::Anti] {
        let d = baxter_natural(Family::D, 2, sector, &cfg).unwrap();
        assert!(d.residual <= 1e-10, "{d:?}");
        let b = intertwining(LambdaFamily::Plain, 2, sector, &cfg).unwrap();
        assert!(b.residual <= 1e-10, "{b:?}");
    }
}

#[test]
fn psi_a_single_site_scaling() {
    let d = build_psi(Family::A, 1, &[1]).unwrap();
    let e = d.to_powexpr().unwrap();
    let z = d.by_label("z1").unwrap() as usize;
    let s = (c(0.5, 0.23), c(-0.5, 0.23));
    let x = (c(0.31, -0.5), c(0.31, 0.5));
    let b = Binding::new().with_pair(Sym::S, s.0, s.1).with_pair(Sym::X(1), x.0, x.1);
    let idx = ZIndex::from_pair(I * x.0 - s.0, I * x.1 - s.1, 1e-12).unwrap();
    let lam = c(-0.8, 1.3);
    let mut pts = vec![c(0.0, 0.0); z + 1];
    pts[z] = c(0.4, 0.9);
    let base = e.evaluate(&pts, &b).unwrap();
    pts[z] *= lam;
    let scaled = e.evaluate(&pts, &b).unwrap();
    let want = pow_pair(lam, idx) * base;
    assert!((scaled - want).norm() < 1e-12 * want.norm());
}

fn small_index() -> impl Strategy<Value = SymIndex> {
    (-6i128..=6, -2i128..=2).prop_map(|(n, m)| SymIndex::numeric(CRat::frac(n, 4), m))
}

fn base() -> impl Strategy<Value = Base> {
    prop_oneof![
        (0u8..3).prop_map(Base::Single),
        (0u8..3).prop_map(Base::Neg),
        (0u8..3, 0u8..3).prop_filter("distinct", |(a, b)| a != b).prop_map(|(a, b)| Base::Diff(a, b)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn mixed_partials_commute(
        factors in proptest::collection::vec((base(), small_index()), 1..4),
        wave_var in 0u8..3,
        v1 in 0u8..3, v2 in 0u8..3,
        s1 in any::<bool>(), s2 in any::<bool>(),
    ) {
        let mut e = PowExpr::wave(wave_var, Affine::sym(Sym::P(0)));
        for (b, p) in factors {
            e = &e * &PowExpr::power(b, p);
        }
        let sec = |h: bool| if h { Sector::Holo } else { Sector::Anti };
        let a = e.diff(v1, sec(s1)).diff(v2, sec(s2));
        let b = e.diff(v2, sec(s2)).diff(v1, sec(s1));
        prop_assert_eq!(a, b);
    }
}
