//! Rewrite scripts and the shipped derivations.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::rules::*;
use super::{build_factorized_r, build_lambda, Atom, CoeffProduct, Diagram, LambdaFamily, VKind, Wave};
use crate::symbolic::{Affine, Sym};
use crate::{Error, Result};

/// One rewrite step; vertices are addressed by label.
#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    Merge(String, String),
    Flip(String, String),
    Chain(String),
    DeltaReduce(String),
    Star(String),
    Cross(String, [String; 4]),
    Fourier(String),
    FourierExpand { tail: String, head: String, label: String },
    IntegrateWaves(String, Option<String>),
    IntegrateDelta(String),
    Mellin(String),
    Coincident { w: String, from: String, to: String },
    Tidy,
}

impl Step {
    pub fn name(&self) -> String {
        match self {
            Step::Merge(a, b) => format!("merge {a} {b}"),
            Step::Flip(a, b) => format!("flip {a} {b}"),
            Step::Chain(w) => format!("chain {w}"),
            Step::DeltaReduce(w) => format!("delta_reduce {w}"),
            Step::Star(w) => format!("star {w}"),
            Step::Cross(w, z) => format!("cross {w} {} {} {} {}", z[0], z[1], z[2], z[3]),
            Step::Fourier(w) => format!("fourier {w}"),
            Step::FourierExpand { tail, head, label } => format!("expand {tail} {head} -> {label}"),
            Step::IntegrateWaves(z, e) => match e {
                Some(q) => format!("waves {z} eliminating {q}"),
                None => format!("waves {z}"),
            },
            Step::IntegrateDelta(v) => format!("integrate_delta {v}"),
            Step::Mellin(v) => format!("mellin {v}"),
            Step::Coincident { w, from, to } => format!("limit {from}->{to} at {w}"),
            Step::Tidy => "tidy".into(),
        }
    }

    pub fn apply(&self, d: &Diagram) -> Result<Diagram> {
        let v = |l: &str| d.by_label(l);
        match self {
            Step::Merge(a, b) => merge_parallel(d, v(a)?, v(b)?),
            Step::Flip(a, b) => flip_edge(d, d.find_edge(a, b)?),
            Step::Chain(w) => chain(d, v(w)?),
            Step::DeltaReduce(w) => delta_reduce(d, v(w)?),
            Step::Star(w) => star_triangle(d, v(w)?),
            Step::Cross(w, z) => cross(d, v(w)?, [v(&z[0])?, v(&z[1])?, v(&z[2])?, v(&z[3])?]),
            Step::Fourier(w) => fourier(d, v(w)?),
            Step::FourierExpand { tail, head, label } => fourier_expand(d, d.find_edge(tail, head)?, label),
            Step::IntegrateWaves(z, e) => {
                let q = match e {
                    Some(q) => Some(v(q)?),
                    None => None,
                };
                integrate_waves(d, v(z)?, q)
            }
            Step::IntegrateDelta(x) => integrate_delta(d, v(x)?),
            Step::Mellin(x) => mellin_delta(d, v(x)?),
            Step::Coincident { w, from, to } => coincident_limit(d, v(w)?, v(from)?, v(to)?),
            Step::Tidy => Ok(d.tidy()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RewriteScript {
    pub name: String,
    pub steps: Vec<Step>,
}

/// Result of a script: the final diagram and one trace line per step.
#[derive(Clone, Debug)]
pub struct ScriptRun {
    pub diagram: Diagram,
    pub trace: Vec<String>,
}

pub fn run_script(d: &Diagram, script: &RewriteScript) -> Result<ScriptRun> {
    let mut cur = d.clone();
    let mut trace = Vec::new();
    for (index, step) in script.steps.iter().enumerate() {
        cur = step.apply(&cur).map_err(|e| Error::StepFailed { index, reason: format!("{}: {e}", step.name()) })?;
        trace.push(step.name());
    }
    cur.coeff = cur.coeff.simplify();
    Ok(ScriptRun { diagram: cur, trace })
}

fn s(x: &str) -> String {
    x.to_string()
}

/// `⟨Λ̃₁(x₂)|Λ̃₁(x₁)⟩`.
pub fn lambda1_input() -> Result<Diagram> {
    let l1 = build_lambda(1, LambdaFamily::Tilde, 1)?;
    let l2 = build_lambda(1, LambdaFamily::Tilde, 2)?;
    l2.adjoint()?.compose(&l1)
}

pub fn lambda1_script() -> RewriteScript {
    RewriteScript { name: "lambda1".into(), steps: alloc::vec![Step::Merge(s("0"), s("z1")), Step::Mellin(s("z1"))] }
}

/// `Λ₂†(x₂) Λ₂(x₁)`.
pub fn exchange2_input() -> Result<Diagram> {
    let a = build_lambda(2, LambdaFamily::Plain, 1)?;
    let b = build_lambda(2, LambdaFamily::Plain, 2)?;
    b.adjoint()?.compose(&a)
}

pub fn exchange2_script() -> RewriteScript {
    RewriteScript {
        name: "exchange2".into(),
        steps: alloc::vec![
            Step::Merge(s("z2"), s("z1")),
            Step::Chain(s("z1")),
            Step::Chain(s("z2")),
            Step::Merge(s("w1"), s("w1'")),
        ],
    }
}

/// `Λ₂†(x₂) Λ₂(x₁) e^{i(pz+p̄z̄)}`.
pub fn ll2_input() -> Result<Diagram> {
    let mut wave = Diagram::new();
    let z = wave.add_vertex(VKind::External, "z1");
    let p = wave.add_vertex(VKind::MomExternal(0), "p");
    wave.wave(Wave::new(z, &[(p, 1)]));
    wave.outputs = alloc::vec![z];
    let a = build_lambda(2, LambdaFamily::Plain, 1)?;
    let b = build_lambda(2, LambdaFamily::Plain, 2)?;
    b.adjoint()?.compose(&a.compose(&wave)?)
}

pub fn ll2_script() -> RewriteScript {
    RewriteScript {
        name: "ll2".into(),
        steps: alloc::vec![
            Step::Merge(s("z2"), s("z1")),
            Step::FourierExpand { tail: s("z1"), head: s("w1'"), label: s("q") },
            Step::Fourier(s("w1'")),
            Step::FourierExpand { tail: s("z1"), head: s("w1"), label: s("q'") },
            Step::FourierExpand { tail: s("z2"), head: s("w1"), label: s("q''") },
            Step::IntegrateWaves(s("z1"), Some(s("q'"))),
            Step::IntegrateWaves(s("z2"), Some(s("q''"))),
            Step::Merge(s("0"), s("q")),
            Step::Merge(s("q"), s("p")),
            Step::Mellin(s("q")),
        ],
    }
}

/// `R^{(1)}(u, v)` applied to the constant function.
pub fn r1_input() -> Result<Diagram> {
    build_factorized_r(1, &Affine::sym(Sym::U), &Affine::sym(Sym::V))
}

pub fn r1_projection_script() -> RewriteScript {
    RewriteScript {
        name: "appendixB_2Ra".into(),
        steps: alloc::vec![Step::Chain(s("w2")), Step::Merge(s("z1"), s("z2"))],
    }
}

/// Kernel of `R^{(1)}(u, v)` in the limit `z₁, z₂ → z`.
pub fn r1_limit_script() -> RewriteScript {
    RewriteScript {
        name: "appendixB_2Rb".into(),
        steps: alloc::vec![Step::Coincident { w: s("w2"), from: s("z1"), to: s("z2") }],
    }
}

/// Closed form `A^{(1)}(u,v) = π (−1)^{i(v−v̄)} a(iv, 1−iu, 1+iu−iv)` as printed.
pub fn a1_closed_form() -> Result<CoeffProduct> {
    let iu = Affine::isym(Sym::U);
    let iv = Affine::isym(Sym::V);
    let one = Affine::int(1);
    let idx = crate::symbolic::SymIndex::from_holo;
    let b = idx(iv.clone());
    Ok(CoeffProduct::one()
        .with(Atom::Pi(1))
        .with(CoeffProduct::sign_of(&b)?)
        .with(Atom::A(b))
        .with(Atom::A(idx(one.clone() - iu.clone())))
        .with(Atom::A(idx(one + iu - iv))))
}

/// Chain-rule value of the same projection: the printed form times `(−1)^{γ−γ̄}`,
/// `γ = 1+iu−iv`.
pub fn a1_chain_form() -> Result<CoeffProduct> {
    let g = crate::symbolic::SymIndex::from_holo(Affine::int(1) + Affine::isym(Sym::U) - Affine::isym(Sym::V));
    Ok(a1_closed_form()?.with(CoeffProduct::sign_of(&g)?))
}

/// Which family a measure is assembled for.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MeasureFamily {
    A,
    B,
}

/// `1/μ_S` assembled from the scripted exchange coefficient `α(x_j, x_k)` and the
/// terminal scalar products.
pub fn measure_from_exchange(n: usize, family: MeasureFamily) -> Result<CoeffProduct> {
    if n == 0 || n > 4 {
        return Err(Error::PreconditionFailed("measure assembly needs 1 ≤ N ≤ 4".into()));
    }
    let alpha = run_script(&exchange2_input()?, &exchange2_script())?.diagram.coeff.without_deltas();
    let (terminal, pairs_up_to, layers) = match family {
        MeasureFamily::A => {
            let t = run_script(&lambda1_input()?, &lambda1_script())?.diagram.coeff.without_deltas();
            (t, n, n)
        }
        MeasureFamily::B => {
            if n == 1 {
                return Ok(CoeffProduct::one().with(Atom::Pi(2)));
            }
            let t = run_script(&ll2_input()?, &ll2_script())?.diagram.coeff.without_deltas();
            (t, n - 1, n - 1)
        }
    };
    let mut out = CoeffProduct::one();
    for j in 1..=pairs_up_to {
        for k in j + 1..=pairs_up_to {
            // α(x₁, x₂) renamed to α(x_j, x_k) through fresh labels
            let r = alpha
                .rename(Sym::X(1), Sym::X(100 + j as u8))
                .rename(Sym::X(2), Sym::X(100 + k as u8))
                .rename(Sym::X(100 + j as u8), Sym::X(j as u8))
                .rename(Sym::X(100 + k as u8), Sym::X(k as u8));
            out = out.mul(&r);
        }
    }
    for _ in 0..layers {
        out = out.mul(&terminal);
    }
    if family == MeasureFamily::B {
        // ⟨e^{ip′z}|e^{ipz}⟩ = π² δ²(p − p′)
        out.push(Atom::Pi(2));
    }
    Ok(out.simplify())
}
