//! Eigenfunction properties checked by quadrature on the integral representation.

use alloc::vec::Vec;

use crate::diagram::{build_psi, Diagram, Family, VKind};
use crate::powexpr::{pow_pair, sample_points, Var};
use crate::quadrature::{eval_diagram, integrate_vars, QuadConfig};
use crate::rng::Rng;
use crate::specialfn::ZIndex;
use crate::symbolic::{Binding, Sym};
use crate::weyl::{monodromy, Sector};
use crate::{c, Result, C64, I};

/// One evaluation point: expected and measured ratio.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenDraw {
    pub z: Vec<C64>,
    pub expected: C64,
    pub measured: C64,
    pub rel_err: f64,
    pub quad_err: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenCheck {
    pub name: &'static str,
    pub draws: Vec<EigenDraw>,
    pub tol: f64,
}

impl EigenCheck {
    pub fn max_rel_err(&self) -> f64 {
        self.draws.iter().map(|d| d.rel_err).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        !self.draws.is_empty() && self.max_rel_err() <= self.tol
    }
}

/// Spin with `Im ν_s = −0.2`, so that `B₂(u)` applied under the integral keeps the
/// integrand locally integrable, and real `x₁`.
fn psi_b_binding() -> (Binding, C64) {
    let (ns, nu_s) = (0.0, c(0.13, -0.2));
    let s = (c((1.0 + ns) / 2.0, 0.0) + I * nu_s, c((1.0 - ns) / 2.0, 0.0) + I * nu_s);
    let x = (c(0.37, 0.0), c(0.37, 0.0));
    let u = c(0.52, -0.31);
    let p = c(0.9, 0.45);
    let b = Binding::new()
        .with_pair(Sym::S, s.0, s.1)
        .with_pair(Sym::X(1), x.0, x.1)
        .with_pair(Sym::U, u, u.conj())
        .with_pair(Sym::P(0), p, p.conj());
    (b, p * (u - x.0))
}

/// Integrand of a diagram with its integrated vertices kept symbolic and constant
/// momentum prefactors dropped.
fn open_integrand(d: &Diagram) -> Result<(Diagram, Vec<Var>)> {
    let mut k = d.clone();
    let mut vars = Vec::new();
    for (id, v) in k.vertices.iter_mut() {
        if v.kind == VKind::Internal {
            v.kind = VKind::External;
            vars.push(*id);
        }
    }
    let moms: Vec<_> = k.ids_of(|v| v.is_momentum());
    k.edges.retain(|e| !moms.contains(&e.tail) && !moms.contains(&e.head));
    k.coeff = Default::default();
    Ok((k, vars))
}

/// `B₂(u)Ψ_B = p(u − x₁)Ψ_B` with `B₂` applied exactly to the integrand.
pub fn psi_b_eigenvalue(points: usize, seed: u64, cfg: &QuadConfig) -> Result<EigenCheck> {
    let d = build_psi(Family::B, 2, &[1])?;
    let (open, vars) = open_integrand(&d)?;
    let z = [open.by_label("z1")?, open.by_label("z2")?];
    let base = open.to_powexpr()?;
    let op = monodromy(2, Sector::Holo, Sym::U)?.get(0, 1).clone();
    let applied = base.apply_weyl(&op, |k| z[k as usize - 1]);
    let (b, expected) = psi_b_binding();
    let (fb, fa) = (base.bind(&b)?, applied.bind(&b)?);
    let nv = open.max_id() as usize + 1;
    let mut rng = Rng::new(seed);
    let mut draws = Vec::new();
    for _ in 0..points {
        let zs = sample_points(&mut rng, 2, 0.3, 1.2, 0.5);
        let mut pts = alloc::vec![c(0.0, 0.0); nv];
        pts[z[0] as usize] = zs[0];
        pts[z[1] as usize] = zs[1];
        let psi = integrate_vars(&fb, &pts, &vars, cfg)?;
        let bpsi = integrate_vars(&fa, &pts, &vars, cfg)?;
        let measured = bpsi.value / psi.value;
        draws.push(EigenDraw {
            z: zs,
            expected,
            measured,
            rel_err: (measured - expected).norm() / expected.norm(),
            quad_err: psi.error_estimate / psi.value.norm() + bpsi.error_estimate / bpsi.value.norm(),
        });
    }
    Ok(EigenCheck { name: "Psi_B N=2 eigenvalue of B_2(u)", draws, tol: 1e-3 })
}

/// `Ψ_A(x|λz) = λ^{−2s+i(x₁+x₂)} λ̄^{−2s̄+i(x̄₁+x̄₂)} Ψ_A(x|z)` at `N = 2`.
pub fn psi_a_scaling(lambda: C64, points: usize, seed: u64, cfg: &QuadConfig) -> Result<EigenCheck> {
    let d = build_psi(Family::A, 2, &[1, 2])?;
    let s = (c(0.5, 0.17), c(0.5, 0.17));
    let x1 = (c(0.29, -0.5), c(0.29, 0.5));
    let x2 = (c(-0.41, 0.0), c(-0.41, 0.0));
    let b = Binding::new().with_pair(Sym::S, s.0, s.1).with_pair(Sym::X(1), x1.0, x1.1).with_pair(Sym::X(2), x2.0, x2.1);
    let idx = ZIndex::from_pair(
        s.0 * -2.0 + I * (x1.0 + x2.0),
        s.1 * -2.0 + I * (x1.1 + x2.1),
        1e-9,
    )?;
    let expected = pow_pair(lambda, idx);
    let z = [d.by_label("z1")?, d.by_label("z2")?];
    let mut rng = Rng::new(seed);
    let mut draws = Vec::new();
    for _ in 0..points {
        let zs = sample_points(&mut rng, 2, 0.3, 1.2, 0.5);
        let at = |k: C64| [(z[0], zs[0] * k), (z[1], zs[1] * k)];
        let base = eval_diagram(&d, &at(c(1.0, 0.0)), &b, cfg)?;
        let scaled = eval_diagram(&d, &at(lambda), &b, cfg)?;
        let measured = scaled.value / base.value;
        draws.push(EigenDraw {
            z: zs,
            expected,
            measured,
            rel_err: (measured - expected).norm() / expected.norm(),
            quad_err: base.error_estimate / base.value.norm() + scaled.error_estimate / scaled.value.norm(),
        });
    }
    Ok(EigenCheck { name: "Psi_A N=2 scaling law", draws, tol: 1e-3 })
}

/// `Ψ_B` at `N = 3` built with `(x₁, x₂)` and with `(x₂, x₁)`: the two must agree.
pub fn exchange_symmetry(points: usize, seed: u64, cfg: &QuadConfig) -> Result<EigenCheck> {
    let fwd = build_psi(Family::B, 3, &[1, 2])?;
    let rev = build_psi(Family::B, 3, &[2, 1])?;
    let (b, _) = psi_b_binding();
    let x2 = (c(-0.45, 0.5), c(-0.45, -0.5));
    let b = b.with_pair(Sym::X(2), x2.0, x2.1);
    let zf = [fwd.by_label("z1")?, fwd.by_label("z2")?, fwd.by_label("z3")?];
    let zr = [rev.by_label("z1")?, rev.by_label("z2")?, rev.by_label("z3")?];
    let mut rng = Rng::new(seed);
    let mut draws = Vec::new();
    for _ in 0..points {
        let zs = sample_points(&mut rng, 3, 0.3, 1.2, 0.5);
        let at = |z: &[crate::diagram::VId; 3]| [(z[0], zs[0]), (z[1], zs[1]), (z[2], zs[2])];
        let a = eval_diagram(&fwd, &at(&zf), &b, cfg)?;
        let r = eval_diagram(&rev, &at(&zr), &b, cfg)?;
        draws.push(EigenDraw {
            z: zs,
            expected: r.value,
            measured: a.value,
            rel_err: (a.value - r.value).norm() / r.value.norm(),
            quad_err: a.error_estimate / a.value.norm() + r.error_estimate / r.value.norm(),
        });
    }
    Ok(EigenCheck { name: "Psi_B N=3 exchange symmetry", draws, tol: 1e-3 })
}
