//! Kernels of the eigenfunction and Baxter constructions.

use alloc::format;
use alloc::vec::Vec;

use super::{Atom, Diagram, VId, VKind, Wave, ANCHOR};
use crate::symbolic::{Affine, CRat, Sym, SymIndex};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LambdaFamily {
    Plain,
    /// `[z_N]^{ix−s} Λ_N`
    Tilde,
    /// `[z_1]^{−ix−s} Λ_N`
    Hat,
    /// `[z_1]^{−ix−s} [z_N]^{ix−s} Λ_N`
    Bar,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "A" | "a" => Some(Family::A),
            "B" | "b" => Some(Family::B),
            "C" | "c" => Some(Family::C),
            "D" | "d" => Some(Family::D),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
        }
    }
}

fn s() -> Affine {
    Affine::sym(Sym::S)
}

fn ix(k: u8) -> Affine {
    Affine::isym(Sym::X(k))
}

fn iu() -> Affine {
    Affine::isym(Sym::U)
}

fn one() -> Affine {
    Affine::int(1)
}

fn idx(h: Affine) -> SymIndex {
    SymIndex::from_holo(h)
}

/// `α = 1 − s − ix`
pub fn alpha_of(x: u8) -> SymIndex {
    idx(one() - s() - ix(x))
}

/// `β = 1 − s + ix`
pub fn beta_of(x: u8) -> SymIndex {
    idx(one() - s() + ix(x))
}

/// `γ = 2s − 1`
pub fn gamma_s() -> SymIndex {
    idx(s() * CRat::int(2) - one())
}

/// `r_N = (a(s+ix) a(s̄−ix̄))^{N−1}` as atoms.
pub fn r_norm(n: usize, x: u8) -> Vec<Atom> {
    let a1 = idx(s() + ix(x));
    let hb = Affine::sym(Sym::SBar) - Affine::isym(Sym::XBar(x));
    let a2 = SymIndex::new(hb, s() - ix(x));
    let mut out = Vec::new();
    for _ in 1..n {
        out.push(Atom::A(a1.clone()));
        out.push(Atom::A(a2.clone()));
    }
    out
}

/// `Λ_N(x)` mapping functions of `w_1..w_{N−1}` to functions of `z_1..z_N`.
pub fn build_lambda(n: usize, family: LambdaFamily, x: u8) -> Result<Diagram> {
    if n == 0 {
        return Err(Error::Arity("Λ_N needs N ≥ 1".into()));
    }
    let mut d = Diagram::new();
    let z: Vec<VId> = (1..=n).map(|k| d.add_vertex(VKind::External, &format!("z{k}"))).collect();
    let w: Vec<VId> = (1..n).map(|k| d.add_vertex(VKind::Internal, &format!("w{k}"))).collect();
    for k in 0..n - 1 {
        d.edge(z[k + 1], z[k], gamma_s());
        d.edge(z[k], w[k], alpha_of(x));
        d.edge(z[k + 1], w[k], beta_of(x));
    }
    for a in r_norm(n, x) {
        d.coeff.push(a);
    }
    let up = idx(s() - ix(x));
    let down = idx(s() + ix(x));
    match family {
        LambdaFamily::Plain => {}
        LambdaFamily::Tilde => {
            d.edge(ANCHOR, z[n - 1], up);
        }
        LambdaFamily::Hat => {
            d.edge(ANCHOR, z[0], down);
        }
        LambdaFamily::Bar => {
            d.edge(ANCHOR, z[0], down);
            d.edge(ANCHOR, z[n - 1], up);
        }
    }
    d.outputs = z;
    d.inputs = w;
    Ok(d)
}

/// Eigenfunction of the `A`, `B`, `C` or `D` family. `seps` lists the separated-variable
/// labels `x_k` in order; `B` and `C` use the momentum `p0`.
pub fn build_psi(family: Family, n: usize, seps: &[u8]) -> Result<Diagram> {
    match family {
        Family::A | Family::D => {
            if seps.len() != n || n == 0 {
                return Err(Error::Arity(format!("{} needs {n} separated variables", family.name())));
            }
        }
        Family::B | Family::C => {
            if seps.len() + 1 != n {
                return Err(Error::Arity(format!("{} needs {} separated variables", family.name(), n - 1)));
            }
        }
    }
    let d = match family {
        Family::A => {
            let mut acc = build_lambda(1, LambdaFamily::Tilde, seps[n - 1])?;
            for k in 2..=n {
                let l = build_lambda(k, LambdaFamily::Tilde, seps[n - k])?;
                acc = l.compose(&acc)?;
            }
            acc
        }
        Family::B => {
            let mut acc = Diagram::new();
            let z1 = acc.add_vertex(VKind::External, "z1");
            let p = acc.add_vertex(VKind::MomExternal(0), "p");
            acc.wave(Wave::new(z1, &[(p, 1)]));
            acc.outputs = alloc::vec![z1];
            for k in 2..=n {
                let l = build_lambda(k, LambdaFamily::Plain, seps[n - k])?;
                acc = l.compose(&acc)?;
            }
            if n > 1 {
                let p = acc.by_label("p")?;
                let h = CRat::frac(-(n as i128 - 1), 2);
                acc.edge(ANCHOR, p, SymIndex::new(Affine::constant(h), Affine::constant(h)));
            }
            acc
        }
        Family::D => build_psi(Family::A, n, seps)?.invert()?,
        Family::C => build_psi(Family::B, n, seps)?.invert()?,
    };
    Ok(d.tidy())
}

/// Kernel `Q_S(u)(z|w)` with `N` free `z` and `N` free `w`.
pub fn build_baxter(family: Family, n: usize) -> Result<Diagram> {
    if n == 0 {
        return Err(Error::Arity("Baxter kernel needs N ≥ 1".into()));
    }
    let mut d = Diagram::new();
    let z: Vec<VId> = (1..=n).map(|k| d.add_vertex(VKind::External, &format!("z{k}"))).collect();
    let w: Vec<VId> = (1..=n).map(|k| d.add_vertex(VKind::External, &format!("w{k}"))).collect();
    let minus = idx(s() + iu());
    let plus = idx(s() - iu());
    let line = idx(one() - s() * CRat::int(2));
    let wm = |k: usize| if k == 0 { ANCHOR } else { w[k - 1] };
    match family {
        Family::D | Family::C | Family::B => {
            let first = if family == Family::B { 2 } else { 1 };
            if family == Family::B {
                d.edge(w[0], z[0], plus.clone());
            }
            for k in first..=n {
                d.edge(wm(k - 1), z[k - 1], minus.clone());
                d.edge(w[k - 1], z[k - 1], plus.clone());
                d.edge(wm(k - 1), w[k - 1], line.clone());
            }
            if family == Family::C {
                d.edge(w[n - 1], ANCHOR, idx(one() - s() + iu()));
            }
        }
        Family::A => {
            let wp = |k: usize| if k == n + 1 { ANCHOR } else { w[k - 1] };
            for k in 1..=n {
                d.edge(w[k - 1], z[k - 1], minus.clone());
                d.edge(wp(k + 1), z[k - 1], plus.clone());
                d.edge(wp(k + 1), w[k - 1], line.clone());
            }
        }
    }
    d.outputs = z;
    Ok(d)
}

/// Factorizing operators `R^{(1)}(a, b)` and `R^{(2)}(a, b)` with holomorphic arguments.
pub fn build_factorized_r(which: u8, a: &Affine, b: &Affine) -> Result<Diagram> {
    let i = CRat::i();
    let mut d = Diagram::new();
    let z1 = d.add_vertex(VKind::External, "z1");
    let z2 = d.add_vertex(VKind::External, "z2");
    match which {
        1 => {
            let w2 = d.add_vertex(VKind::Internal, "w2");
            d.edge(z1, z2, idx((a.clone() - b.clone()) * i));
            d.edge(w2, z2, idx(one() - a.clone() * i));
            d.edge(w2, z1, idx(b.clone() * i));
            d.outputs = alloc::vec![z1, z2];
            d.inputs = alloc::vec![z1, w2];
        }
        2 => {
            let w1 = d.add_vertex(VKind::Internal, "w1");
            d.edge(z2, z1, idx((b.clone() - a.clone()) * i));
            d.edge(z1, w1, idx(one() - b.clone() * i));
            d.edge(z2, w1, idx(a.clone() * i));
            d.outputs = alloc::vec![z1, z2];
            d.inputs = alloc::vec![w1, z2];
        }
        _ => return Err(Error::PreconditionFailed(format!("no factorizing operator R^({which})"))),
    }
    Ok(d)
}

/// `P_{12}`: exchange the first two outputs.
pub fn permute12(d: &Diagram) -> Diagram {
    let mut out = d.clone();
    out.outputs.swap(0, 1);
    out
}

impl Diagram {
    /// Merge parallel edges and drop trivial ones; signs from reorientation go to the coefficient.
    pub fn tidy(&self) -> Diagram {
        let mut out = self.clone();
        out.combine_waves();
        let pairs: Vec<(VId, VId)> = {
            let mut v: Vec<(VId, VId)> =
                self.edges.iter().map(|e| (e.tail.min(e.head), e.tail.max(e.head))).collect();
            v.sort();
            v.dedup();
            v
        };
        for (a, b) in pairs {
            if let Ok(n) = super::rules::merge_parallel(&out, a, b) {
                out = n;
            }
        }
        out
    }
}
