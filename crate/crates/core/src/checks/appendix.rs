//! Projection identity of the factorizing operator `R^{(1)}`: its kernel integrated
//! over both inputs is the constant `A^{(1)}(u, v)`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::diagram::{a1_chain_form, a1_closed_form, r1_input, r1_projection_script, run_script, Atom, CoeffProduct};
use crate::powexpr::sample_points;
use crate::quadrature::{eval_diagram, QuadConfig};
use crate::rng::Rng;
use crate::specialfn::{a_of, ZIndex};
use crate::symbolic::{Affine, Binding, CRat, IntForm, Sym, SymIndex};
use crate::{c, Result, C64, I, PI};

/// One numeric draw at physical arguments `A = u₁−v₁`, `B = u₁−v₂` of a homogeneous
/// pair of sites with spin `(s, s̄)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionDraw {
    pub two_ns: i64,
    pub s: (C64, C64),
    pub a: (C64, C64),
    pub b: (C64, C64),
    pub quadrature: C64,
    pub quad_error: f64,
    pub printed: C64,
    pub chain: C64,
    pub rel_printed: f64,
    pub rel_chain: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionReport {
    /// Coefficient left by the chain-rule script.
    pub scripted: CoeffProduct,
    /// Scripted coefficient equals the chain form symbolically.
    pub equals_chain_form: bool,
    /// Scripted / printed as a sign exponent, before and after `B = A − i(1−2s)`.
    pub ratio_general: String,
    pub ratio_physical: IntForm,
    pub draws: Vec<ProjectionDraw>,
}

fn pair_index(h: C64, a: C64) -> Result<ZIndex> {
    ZIndex::from_pair(h, a, 1e-9)
}

/// `π (−1)^{i(v−v̄)} a(iv, 1−iu, 1+iu−iv)` evaluated directly.
pub fn a1_printed_value(a: (C64, C64), b: (C64, C64)) -> Result<C64> {
    let one = c(1.0, 0.0);
    let ib = pair_index(I * b.0, I * b.1)?;
    let x = pair_index(one - I * a.0, one - I * a.1)?;
    let g = pair_index(one + I * a.0 - I * b.0, one + I * a.1 - I * b.1)?;
    Ok(ib.sign() * PI * a_of(ib)? * a_of(x)? * a_of(g)?)
}

/// Chain-rule value: the printed form times `(−1)^{γ−γ̄}`, `γ = 1+iu−iv`.
pub fn a1_chain_value(a: (C64, C64), b: (C64, C64)) -> Result<C64> {
    let one = c(1.0, 0.0);
    let g = pair_index(one + I * a.0 - I * b.0, one + I * a.1 - I * b.1)?;
    Ok(a1_printed_value(a, b)? * g.sign())
}

/// `B = A − i(1−2s)` as an affine substitution for the symbol `v`.
fn physical_v() -> Affine {
    Affine::sym(Sym::U) - Affine::constant(CRat::i()) + Affine::term(CRat::imag(2), Sym::S)
}

fn draw(rng: &mut Rng, two_ns: i64, cfg: &QuadConfig) -> Result<ProjectionDraw> {
    let n_s = two_ns as f64 / 2.0;
    let nu_s = c(rng.uniform(-0.4, 0.4), rng.uniform(0.15, 0.25));
    let s = (c((1.0 + n_s) / 2.0, 0.0) + I * nu_s, c((1.0 - n_s) / 2.0, 0.0) + I * nu_s);
    let n_a = rng.int(-1, 1) as f64;
    let nu_a = c(rng.uniform(-0.4, 0.4), -rng.uniform(0.2, 0.35));
    let a = (nu_a - I * (n_a / 2.0), nu_a + I * (n_a / 2.0));
    let b = (a.0 - I * (c(1.0, 0.0) - s.0 * 2.0), a.1 - I * (c(1.0, 0.0) - s.1 * 2.0));
    let bind = Binding::new().with_pair(Sym::U, a.0, a.1).with_pair(Sym::V, b.0, b.1);
    let d = r1_input()?;
    let ids = [d.by_label("z1")?, d.by_label("z2")?];
    let pts = sample_points(rng, 2, 0.2, 1.2, 0.4);
    let q = eval_diagram(&d, &[(ids[0], pts[0]), (ids[1], pts[1])], &bind, cfg)?;
    let printed = a1_printed_value(a, b)?;
    let chain = a1_chain_value(a, b)?;
    Ok(ProjectionDraw {
        two_ns,
        s,
        a,
        b,
        quadrature: q.value,
        quad_error: q.error_estimate,
        printed,
        chain,
        rel_printed: (q.value - printed).norm() / printed.norm(),
        rel_chain: (q.value - chain).norm() / chain.norm(),
    })
}

/// Symbolic comparison plus quadrature at the given spins (`2n_s` values).
pub fn r1_projection_check(spins: &[i64], seed: u64, cfg: &QuadConfig) -> Result<ProjectionReport> {
    let run = run_script(&r1_input()?, &r1_projection_script())?;
    let scripted = run.diagram.coeff.clone();
    let equals_chain_form = scripted.same_as(&a1_chain_form()?);
    let printed = a1_closed_form()?;
    let ratio = scripted.mul(&printed.inverse()?).simplify();
    let gamma = SymIndex::from_holo(Affine::int(1) + Affine::isym(Sym::U) - Affine::isym(Sym::V));
    let phys = gamma.subst_pair(Sym::V, &physical_v());
    let ratio_physical = match CoeffProduct::sign_of(&phys)? {
        Atom::IPow(f) => f.reduce_mod4(),
        _ => IntForm::zero(),
    };
    let mut rng = Rng::new(seed);
    let draws = spins.iter().map(|&t| draw(&mut rng, t, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(ProjectionReport {
        scripted,
        equals_chain_form,
        ratio_general: alloc::format!("{ratio}"),
        ratio_physical,
        draws,
    })
}
