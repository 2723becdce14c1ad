//! Numerical soundness of the integration rules: both sides of each rewrite are
//! evaluated by quadrature at random admissible indices and external points.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::diagram::{self, Diagram, Edge, VId, VKind, Wave};
use crate::powexpr::sample_points;
use crate::quadrature::{eval_diagram, QuadConfig};
use crate::rng::Rng;
use crate::symbolic::{Binding, CRat, Q, Sym, SymIndex};
use crate::{c, Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleKind {
    Chain,
    Fourier,
    Star,
    Cross,
}

impl RuleKind {
    pub const ALL: [RuleKind; 4] = [RuleKind::Chain, RuleKind::Fourier, RuleKind::Star, RuleKind::Cross];

    pub fn name(self) -> &'static str {
        match self {
            RuleKind::Chain => "chain",
            RuleKind::Fourier => "fourier",
            RuleKind::Star => "star",
            RuleKind::Cross => "cross",
        }
    }

    pub fn parse(s: &str) -> Option<RuleKind> {
        RuleKind::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Acceptance threshold on the relative difference.
    pub fn tolerance(self) -> f64 {
        match self {
            RuleKind::Chain | RuleKind::Fourier => 1e-4,
            RuleKind::Star | RuleKind::Cross => 1e-3,
        }
    }
}

/// One draw: a diagram, its rewrite and where to evaluate them.
#[derive(Clone, Debug)]
pub struct RuleCase {
    pub kind: RuleKind,
    pub before: Diagram,
    pub after: Diagram,
    pub binding: Binding,
    pub externals: Vec<(VId, C64)>,
    pub indices: Vec<SymIndex>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RuleCheck {
    pub rule: RuleKind,
    pub draw: usize,
    pub params: String,
    pub lhs: C64,
    pub rhs: C64,
    pub rel_err: f64,
    /// Quadrature error estimates of both sides, relative to `|lhs|`.
    pub quad_err: f64,
}

impl RuleCheck {
    pub fn passed(&self) -> bool {
        self.rel_err <= self.rule.tolerance()
    }
}

fn q3(x: f64) -> Q {
    Q::new(libm::round(x * 1000.0) as i128, 1000)
}

/// Index `(α, α − m)` with `Re(α + ᾱ)` near `sum` and a small imaginary part.
fn draw_index(rng: &mut Rng, m: i128, sum: f64) -> SymIndex {
    let re = q3((sum + m as f64) / 2.0);
    let im = q3(rng.uniform(-0.3, 0.3));
    SymIndex::numeric(CRat::new(re, im), m)
}

/// `Re(α + ᾱ)` of a numeric index.
fn weight(i: &SymIndex) -> f64 {
    let b = Binding::new();
    i.holo.eval(&b).map(|h| h.re).unwrap_or(f64::NAN) + i.anti.eval(&b).map(|h| h.re).unwrap_or(f64::NAN)
}

fn in_open(x: f64, lo: f64, hi: f64) -> bool {
    x > lo && x < hi
}

fn ext(d: &mut Diagram, n: usize) -> Vec<VId> {
    (1..=n).map(|k| d.add_vertex(VKind::External, &format!("z{k}"))).collect()
}

fn place(rng: &mut Rng, zs: &[VId]) -> Vec<(VId, C64)> {
    let pts = sample_points(rng, zs.len(), 0.2, 1.2, 0.4);
    zs.iter().copied().zip(pts).collect()
}

/// A random admissible instance of `kind`.
pub fn rule_case(kind: RuleKind, rng: &mut Rng) -> Result<RuleCase> {
    let mut d = Diagram::new();
    let mut b = Binding::new();
    let (after, zs, indices) = match kind {
        RuleKind::Chain => {
            let z = ext(&mut d, 2);
            let w = d.add_vertex(VKind::Internal, "w");
            let ma = rng.int(-1, 1) as i128;
            let mb = rng.int(-1, 1) as i128;
            let a = { let t = rng.uniform(1.1, 1.6); draw_index(rng, ma, t) };
            let bi = { let t = rng.uniform(1.1, 1.6); draw_index(rng, mb, t) };
            d.edge(w, z[0], a.clone());
            d.edge(z[1], w, bi.clone());
            (diagram::chain(&d, w)?, z, alloc::vec![a, bi])
        }
        RuleKind::Fourier => {
            let z = ext(&mut d, 1);
            let w = d.add_vertex(VKind::Internal, "w");
            let p = d.add_vertex(VKind::MomExternal(0), "p");
            let m = rng.int(-2, 2) as i128;
            let a = { let t = rng.uniform(0.3, 1.6); draw_index(rng, m, t) };
            d.edge(z[0], w, a.clone());
            d.waves.push(Wave::new(w, &[(p, 1)]));
            let th = rng.uniform(0.0, 2.0 * crate::PI);
            let r = rng.uniform(0.7, 1.5);
            b.set(Sym::P(0), c(r * libm::cos(th), r * libm::sin(th)));
            (diagram::fourier(&d, w)?, z, alloc::vec![a])
        }
        RuleKind::Star => {
            let z = ext(&mut d, 3);
            let w = d.add_vertex(VKind::Internal, "w");
            let ms: [[i128; 3]; 4] = [[0, 0, 0], [1, -1, 0], [0, 1, -1], [-1, 0, 1]];
            let ix = loop {
                let m = ms[rng.int(0, 3) as usize];
                let r0 = rng.uniform(0.3, 0.9);
                let r1 = rng.uniform(0.3, 0.9);
                let r2 = 2.0 - r0 - r1;
                if !in_open(r2, 0.3, 0.9) {
                    continue;
                }
                let i0 = draw_index(rng, m[0], 2.0 * r0 - m[0] as f64);
                let i1 = draw_index(rng, m[1], 2.0 * r1 - m[1] as f64);
                let i2 = SymIndex::int(2) - i0.clone() - i1.clone();
                let all = [i0, i1, i2];
                if all.iter().all(|i| in_open(weight(i), 0.15, 1.85)) {
                    break all;
                }
            };
            d.edge(w, z[0], ix[0].clone());
            d.edge(z[1], w, ix[1].clone());
            d.edge(w, z[2], ix[2].clone());
            (diagram::star_triangle(&d, w)?, z, ix.to_vec())
        }
        RuleKind::Cross => {
            let z = ext(&mut d, 4);
            let w = d.add_vertex(VKind::Internal, "w");
            let ix = loop {
                let m: [i128; 3] = [rng.int(-1, 1) as i128, rng.int(-1, 1) as i128, rng.int(-1, 1) as i128];
                let al = { let t = rng.uniform(0.3, 1.7); draw_index(rng, m[0], t) };
                let alp = { let t = rng.uniform(0.3, 1.7); draw_index(rng, m[1], t) };
                let be = { let t = rng.uniform(0.3, 1.7); draw_index(rng, m[2], t) };
                let bep = al.clone() + be.clone() - alp.clone();
                let all = [al, alp, be, bep];
                if all.iter().all(|i| in_open(weight(i), 0.2, 1.8)) {
                    break all;
                }
            };
            let one = SymIndex::int(1);
            let [al, alp, be, bep] = ix.clone();
            d.edges.push(Edge::new(z[0], w, al));
            d.edges.push(Edge::new(w, z[1], one.clone() - alp));
            d.edges.push(Edge::new(z[2], w, be));
            d.edges.push(Edge::new(z[3], w, one - bep));
            (diagram::cross(&d, w, [z[0], z[1], z[2], z[3]])?, z, ix.to_vec())
        }
    };
    let externals = place(rng, &zs);
    Ok(RuleCase { kind, before: d, after, binding: b, externals, indices })
}

/// Evaluate both sides of one case.
pub fn check_case(case: &RuleCase, draw: usize, cfg: &QuadConfig) -> Result<RuleCheck> {
    let l = eval_diagram(&case.before, &case.externals, &case.binding, cfg)?;
    let r = eval_diagram(&case.after, &case.externals, &case.binding, cfg)?;
    let scale = l.value.norm();
    if !(scale > 0.0) {
        return Err(Error::PreconditionFailed("left side vanishes".into()));
    }
    let params = case.indices.iter().map(|i| format!("({i})")).collect::<Vec<_>>().join(" ");
    Ok(RuleCheck {
        rule: case.kind,
        draw,
        params,
        lhs: l.value,
        rhs: r.value,
        rel_err: (l.value - r.value).norm() / scale,
        quad_err: (l.error_estimate + r.error_estimate) / scale,
    })
}

/// `draws` random instances of `kind` from `seed`.
pub fn check_rule(kind: RuleKind, draws: usize, seed: u64, cfg: &QuadConfig) -> Result<Vec<RuleCheck>> {
    let mut rng = Rng::new(seed ^ (kind as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    (0..draws).map(|k| check_case(&rule_case(kind, &mut rng)?, k, cfg)).collect()
}
