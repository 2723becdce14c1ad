use sl2c_core::checks::kernel_binding;
use sl2c_core::diagram::{build_baxter, build_lambda, chain, Diagram, Family, LambdaFamily, VId, VKind, Wave};
use sl2c_core::powexpr::{pow_pair, BoundExpr};
use sl2c_core::quadrature::*;
use sl2c_core::specialfn::{a_of, i_pow, SepPoint, Spin, ZIndex};
use sl2c_core::symbolic::{Binding, CRat, Sym, SymIndex};
use sl2c_core::{Error, C64, I, PI};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn chain_diagram(a: SymIndex, b: SymIndex) -> (Diagram, [VId; 2], VId) {
    let mut d = Diagram::new();
    let z1 = d.add_vertex(VKind::External, "z1");
    let z2 = d.add_vertex(VKind::External, "z2");
    let w = d.add_vertex(VKind::Internal, "w");
    d.edge(w, z1, a);
    d.edge(z2, w, b);
    (d, [z1, z2], w)
}

#[test]
fn chain_integral_matches_closed_form() {
    let q = SymIndex::numeric(CRat::frac(3, 4), 0);
    let (d, [z1, z2], _) = chain_diagram(q.clone(), q);
    let ext = [(z1, c(0.0, 0.0)), (z2, c(1.0, 0.0))];
    let r = eval_diagram(&d, &ext, &Binding::new(), &QuadConfig::default()).unwrap();
    let (a, g) = (ZIndex::real(0.75, 0), ZIndex::real(0.5, 0));
    // γ − γ̄ = 0, [z₁ − z₂]^{−1/2} = 1 at z₁ − z₂ = −1
    let want = PI * a_of(a).unwrap() * a_of(a).unwrap() * a_of(g).unwrap() * pow_pair(c(-1.0, 0.0), ZIndex::real(-0.5, 0));
    assert!((r.value - want).norm() < 1e-4 * want.norm(), "{} vs {want}", r.value);
    assert_eq!(r.method, Method::Adaptive);
}

#[test]
fn fourier_pair_inverse_direction() {
    let alpha = ZIndex::real(1.2, 0);
    let z = c(1.0, 0.0);
    let e = alpha.shift(c(-1.0, 0.0));
    let local = 2.0 * e.alpha.re - e.m as f64;
    let f = Integrand::new(move |q: C64| pow_pair(q, e) * (-I * (q * z + q.conj() * z.conj())).exp(), vec![(c(0.0, 0.0), local)], -local)
        .oscillating(z.norm());
    let r = integrate2d(&f, &QuadConfig::default()).unwrap();
    let want = PI / (i_pow(alpha.m) * a_of(alpha).unwrap()) * pow_pair(z, alpha.neg());
    assert!((r.value - want).norm() < 1e-4 * want.norm(), "{} vs {want}", r.value);
}

#[test]
fn non_integrable_is_rejected() {
    let slow = Integrand::new(|w: C64| pow_pair(w, ZIndex::real(-0.4, 0)), vec![(c(0.0, 0.0), -0.8)], 0.8);
    assert!(matches!(integrate2d(&slow, &QuadConfig::default()), Err(Error::NonIntegrable(_))));
    let sharp = Integrand::new(|w: C64| pow_pair(w, ZIndex::real(-1.1, 0)), vec![(c(0.0, 0.0), -2.2)], 2.2);
    assert!(matches!(integrate2d(&sharp, &QuadConfig::default()), Err(Error::NonIntegrable(_))));
}

fn chain_integrand() -> Integrand<'static> {
    let (a, b) = (ZIndex::new(c(1.1, 0.1), 1), ZIndex::new(c(0.7, -0.2), 0));
    let z = [c(0.3, 0.2), c(-0.5, 0.4)];
    let sa = 2.0 * a.alpha.re - a.m as f64;
    let sb = 2.0 * b.alpha.re - b.m as f64;
    Integrand::new(
        move |w: C64| pow_pair(z[0] - w, a.neg()) * pow_pair(w - z[1], b.neg()),
        vec![(z[0], -sa), (z[1], -sb)],
        sa + sb,
    )
}

#[test]
fn monte_carlo_is_seed_deterministic() {
    let f = chain_integrand();
    let cfg = QuadConfig { method: Method::MonteCarlo, mc_samples: 200_000, seed: 9, ..Default::default() };
    let r1 = integrate2d(&f, &cfg).unwrap();
    let r2 = integrate2d(&f, &cfg).unwrap();
    assert_eq!(r1.value.re.to_bits(), r2.value.re.to_bits());
    assert_eq!(r1.value.im.to_bits(), r2.value.im.to_bits());
    assert_eq!(r1, r2);
    let r3 = integrate2d(&f, &QuadConfig { seed: 10, ..cfg }).unwrap();
    assert_ne!(r1.value, r3.value);
}

#[test]
fn adaptive_and_monte_carlo_agree() {
    let f = chain_integrand();
    let ad = integrate2d(&f, &QuadConfig { method: Method::Adaptive, ..Default::default() }).unwrap();
    let mc = integrate2d(&f, &QuadConfig { method: Method::MonteCarlo, mc_samples: 2_000_000, ..Default::default() }).unwrap();
    let bar = ad.error_estimate + mc.error_estimate;
    assert!((ad.value - mc.value).norm() <= bar, "{} vs {} (bar {bar})", ad.value, mc.value);
    assert!(mc.error_estimate < 0.05 * ad.value.norm());
}

#[test]
fn adaptive_matches_chain_rule_rewrite() {
    let a = SymIndex::numeric(CRat::new(sl2c_core::symbolic::Q::new(11, 10), sl2c_core::symbolic::Q::new(1, 10)), 1);
    let b = SymIndex::numeric(CRat::new(sl2c_core::symbolic::Q::new(7, 10), sl2c_core::symbolic::Q::new(-1, 5)), 0);
    let (d, [z1, z2], w) = chain_diagram(a, b);
    let after = chain(&d, w).unwrap();
    let ext = [(z1, c(0.3, 0.2)), (z2, c(-0.5, 0.4))];
    let l = eval_diagram(&d, &ext, &Binding::new(), &QuadConfig::default()).unwrap();
    let r = eval_diagram(&after, &ext, &Binding::new(), &QuadConfig::default()).unwrap();
    assert!((l.value - r.value).norm() < 1e-4 * r.value.norm());
}

#[test]
fn external_only_diagram_is_closed_form_evaluation() {
    let d = build_baxter(Family::D, 2).unwrap();
    let b = kernel_binding();
    let names = ["z1", "z2", "w1", "w2"];
    let pts = [c(0.3, 0.5), c(-0.6, 0.2), c(0.4, -0.7), c(1.1, 0.3)];
    let ext: Vec<(VId, C64)> = names.iter().zip(pts).map(|(n, z)| (d.by_label(n).unwrap(), z)).collect();
    let r = eval_diagram(&d, &ext, &b, &QuadConfig::default()).unwrap();
    let mut all = vec![c(0.0, 0.0); d.max_id() as usize + 1];
    for (v, z) in &ext {
        all[*v as usize] = *z;
    }
    let direct = d.to_powexpr().unwrap().evaluate(&all, &b).unwrap() * d.coeff.eval_regular(&b).unwrap();
    assert_eq!(r.value, direct);
    assert_eq!(r.error_estimate, 0.0);
}

#[test]
fn eval_diagram_needs_all_externals() {
    let d = build_baxter(Family::B, 1).unwrap();
    let z1 = d.by_label("z1").unwrap();
    assert!(matches!(
        eval_diagram(&d, &[(z1, c(0.5, 0.0))], &Binding::new(), &QuadConfig::default()),
        Err(Error::UnboundVariable(_))
    ));
}

fn wave_diagram(p: &str, spectator: bool) -> (Diagram, Vec<VId>) {
    let mut d = Diagram::new();
    let z = d.add_vertex(VKind::External, "z1");
    let m = d.add_vertex(VKind::MomExternal(0), p);
    d.wave(Wave::new(z, &[(m, 1)]));
    let mut vars = vec![z];
    if spectator {
        vars.push(d.add_vertex(VKind::External, "z2"));
    }
    (d, vars)
}

#[test]
fn inner_product_box_area_and_spectator() {
    let b = Binding::new().with_pair(Sym::P(0), c(0.7, -0.4), c(0.7, 0.4));
    let cfg = QuadConfig { mc_samples: 10_000, ..Default::default() };
    let (d, vars) = wave_diagram("p", false);
    let r = inner_product(&d, &d, &vars, Region::Box(1.5), &b, &cfg).unwrap();
    assert!((r.value - c(9.0, 0.0)).norm() < 1e-12);
    let (d2, vars2) = wave_diagram("p", true);
    let r2 = inner_product(&d2, &d2, &vars2, Region::Box(1.5), &b, &cfg).unwrap();
    assert!((r2.value - c(81.0, 0.0)).norm() < 1e-10);
}

#[test]
fn inner_product_rejects_internal_vertices() {
    let d = build_lambda(2, LambdaFamily::Plain, 1).unwrap();
    let z = d.by_label("z1").unwrap();
    assert!(inner_product(&d, &d, &[z], Region::Box(1.0), &Binding::new(), &QuadConfig::default()).is_err());
}

// ⟨[z]^{ix′−s}, [z]^{ix−s}⟩ over r0 < |z| < r1 reduces to
// 2π δ_{nn′} ∫_{r0}^{r1} dr/r · r^{2i(ν−ν′)}.
fn smeared(n: (i64, i64), nu: (f64, f64), r: (f64, f64)) -> C64 {
    if n.0 != n.1 {
        return c(0.0, 0.0);
    }
    let d = nu.0 - nu.1;
    let (l0, l1) = (r.0.ln(), r.1.ln());
    if d == 0.0 {
        return c(2.0 * PI * (l1 - l0), 0.0);
    }
    let prim = |l: f64| (c(0.0, 2.0 * d) * l).exp() / c(0.0, 2.0 * d);
    (prim(l1) - prim(l0)) * 2.0 * PI
}

#[test]
fn single_site_orthogonality_smoke() {
    let spin = Spin::new(0, 0.31);
    let f = build_lambda(1, LambdaFamily::Tilde, 2).unwrap();
    let g = build_lambda(1, LambdaFamily::Tilde, 1).unwrap();
    let z = g.by_label("z1").unwrap();
    let region = (0.1, 10.0);
    let cfg = QuadConfig { mc_samples: 400_000, seed: 3, ..Default::default() };
    for (n, nu) in [((0, 0), (0.2, 0.2)), ((2, 2), (0.2, -0.15)), ((0, 2), (0.2, 0.2))] {
        let b = Binding::new().with_spin(&spin).with_sep(1, &SepPoint::new(n.0, nu.0)).with_sep(2, &SepPoint::new(n.1, nu.1));
        let r = inner_product(&f, &g, &[z], Region::LogAnnulus(region.0, region.1), &b, &cfg).unwrap();
        let want = smeared(n, nu, region);
        assert!((r.value - want).norm() <= r.error_estimate + 1e-9, "{n:?} {nu:?}: {} vs {want} ± {}", r.value, r.error_estimate);
    }
}

#[test]
fn bound_expression_integration_over_one_variable() {
    let a = ZIndex::new(c(1.1, 0.1), 1);
    let b = ZIndex::new(c(0.7, -0.2), 0);
    let e = BoundExpr::power(sl2c_core::powexpr::Base::Diff(0, 2), a.neg()).mul_power(sl2c_core::powexpr::Base::Diff(2, 1), b.neg());
    let pts = [c(0.3, 0.2), c(-0.5, 0.4), c(0.0, 0.0)];
    let r = integrate_vars(&e, &pts, &[2], &QuadConfig::default()).unwrap();
    let direct = integrate2d(&chain_integrand(), &QuadConfig::default()).unwrap();
    assert!((r.value - direct.value).norm() < 1e-6 * direct.value.norm());
}
