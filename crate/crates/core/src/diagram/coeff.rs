//! Exact coefficient products and their simplification.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;


use super::VId;
use crate::specialfn::{a_of, i_pow};
use crate::symbolic::{Affine, Binding, CRat, IntForm, Sym, SymIndex};
use crate::{Result, C64, PI};

/// Distributional factor.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Delta {
    /// `δ²(z_a − z_b)` between two vertices.
    Point(VId, VId),
    /// `δ(x_a − x_b) = δ_{n_a n_b} δ(ν_a − ν_b)` between separated variables.
    Spectral(u8, u8),
}

/// One multiplicative atom.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Atom {
    /// `π^k`
    Pi(i32),
    /// `i^E`
    IPow(IntForm),
    /// `a(α)`
    A(SymIndex),
    /// `(affine)^k`
    Linear(Affine, i32),
    Delta(Delta),
    Num(CRat),
}

/// Product of atoms.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CoeffProduct {
    pub atoms: Vec<Atom>,
}

impl CoeffProduct {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn push(&mut self, a: Atom) -> &mut Self {
        self.atoms.push(a);
        self
    }

    pub fn with(mut self, a: Atom) -> Self {
        self.atoms.push(a);
        self
    }

    pub fn mul(&self, o: &CoeffProduct) -> CoeffProduct {
        let mut out = self.clone();
        out.atoms.extend(o.atoms.iter().cloned());
        out
    }

    /// `(−1)^{α−ᾱ}` as an atom.
    pub fn sign_of(idx: &SymIndex) -> Result<Atom> {
        Ok(Atom::IPow(IntForm::from_diff(&idx.diff())?.scale(2)))
    }

    /// `i^{α−ᾱ}` as an atom.
    pub fn ipow_of(idx: &SymIndex, k: i128) -> Result<Atom> {
        Ok(Atom::IPow(IntForm::from_diff(&idx.diff())?.scale(k)))
    }

    pub fn deltas(&self) -> impl Iterator<Item = &Delta> {
        self.atoms.iter().filter_map(|a| match a {
            Atom::Delta(d) => Some(d),
            _ => None,
        })
    }

    /// Numeric value of every atom except deltas.
    pub fn eval_regular(&self, b: &Binding) -> Result<C64> {
        let mut acc = C64::new(1.0, 0.0);
        for a in &self.atoms {
            acc *= match a {
                Atom::Pi(k) => C64::new(libm::pow(PI, *k as f64), 0.0),
                Atom::IPow(e) => i_pow(e.eval(b)?),
                Atom::A(idx) => a_of(idx.eval(b)?)?,
                Atom::Linear(l, k) => l.eval(b)?.powi(*k),
                Atom::Delta(_) => C64::new(1.0, 0.0),
                Atom::Num(c) => c.to_c64(),
            };
        }
        Ok(acc)
    }

    /// Complex conjugate under the physical reality conditions.
    pub fn conj(&self) -> CoeffProduct {
        let atoms = self
            .atoms
            .iter()
            .map(|a| match a {
                Atom::Pi(k) => Atom::Pi(*k),
                Atom::IPow(e) => Atom::IPow(e.scale(-1)),
                Atom::A(idx) => Atom::A(SymIndex::new(idx.holo.conj_phys(), idx.anti.conj_phys())),
                Atom::Linear(l, k) => Atom::Linear(l.conj_phys(), *k),
                Atom::Delta(d) => Atom::Delta(d.clone()),
                Atom::Num(c) => Atom::Num(c.conj()),
            })
            .collect();
        CoeffProduct { atoms }
    }

    /// Multiplicative inverse, using `a(α)^{−1} = a(1−ᾱ)`. Deltas have none.
    pub fn inverse(&self) -> Result<CoeffProduct> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| match a {
                Atom::Pi(k) => Ok(Atom::Pi(-k)),
                Atom::IPow(e) => Ok(Atom::IPow(e.scale(-1))),
                Atom::A(idx) => Ok(Atom::A(idx.one_minus_bar())),
                Atom::Linear(l, k) => Ok(Atom::Linear(l.clone(), -k)),
                Atom::Delta(_) => Err(crate::Error::OutOfClass("a delta has no inverse".into())),
                Atom::Num(c) => Ok(Atom::Num(CRat::one() / *c)),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CoeffProduct { atoms })
    }

    /// Substitute a symbol in all symbolic atoms.
    pub fn subst(&self, s: Sym, v: &Affine) -> CoeffProduct {
        let atoms = self
            .atoms
            .iter()
            .map(|a| match a {
                Atom::A(idx) => Atom::A(idx.subst(s, v)),
                Atom::Linear(l, k) => Atom::Linear(l.subst(s, v), *k),
                other => other.clone(),
            })
            .collect();
        CoeffProduct { atoms }
    }

    /// Rename a holomorphic symbol (and its partner) everywhere.
    pub fn rename(&self, from: Sym, to: Sym) -> CoeffProduct {
        let hf = Affine::sym(to);
        let af = Affine::sym(to.bar());
        let atoms = self
            .atoms
            .iter()
            .map(|a| match a {
                Atom::A(idx) => Atom::A(idx.subst(from, &hf).subst(from.bar(), &af)),
                Atom::Linear(l, k) => Atom::Linear(l.subst(from, &hf).subst(from.bar(), &af), *k),
                Atom::IPow(e) => Atom::IPow(e.rename(from, to)),
                other => other.clone(),
            })
            .collect();
        CoeffProduct { atoms }
    }

    /// Relabel vertex ids in delta atoms.
    pub fn relabel(&self, f: impl Fn(VId) -> VId) -> CoeffProduct {
        let atoms = self
            .atoms
            .iter()
            .map(|a| match a {
                Atom::Delta(Delta::Point(x, y)) => Atom::Delta(Delta::Point(f(*x), f(*y))),
                other => other.clone(),
            })
            .collect();
        CoeffProduct { atoms }
    }

    /// Canonical form: merged powers, reduced signs, `a`-identities applied.
    pub fn simplify(&self) -> CoeffProduct {
        let mut pi = 0i32;
        let mut num = CRat::one();
        let mut sign = IntForm::zero();
        let mut lin: BTreeMap<Affine, i32> = BTreeMap::new();
        let mut avec: Vec<SymIndex> = Vec::new();
        let mut deltas: Vec<Delta> = Vec::new();
        let mut pending: Vec<Atom> = self.atoms.clone();
        while let Some(a) = pending.pop() {
            match a {
                Atom::Pi(k) => pi += k,
                Atom::Num(c) => num = num * c,
                Atom::IPow(e) => sign = sign.add(&e),
                Atom::Linear(l, k) => {
                    if k == 0 {
                        continue;
                    }
                    if l.is_const() {
                        num = num * l.c0.pow(k);
                        continue;
                    }
                    let (c, m) = monic(&l);
                    num = num * c.pow(k);
                    *lin.entry(m).or_insert(0) += k;
                }
                Atom::Delta(d) => deltas.push(canonical_delta(d)),
                Atom::A(idx) => avec.push(idx),
            }
        }
        // pairwise a-identities
        let mut changed = true;
        while changed {
            changed = false;
            'outer: for i in 0..avec.len() {
                for j in 0..avec.len() {
                    if i == j {
                        continue;
                    }
                    if let Some(extra) = pair_identity(&avec[i], &avec[j]) {
                        let (hi, lo) = if i > j { (i, j) } else { (j, i) };
                        avec.remove(hi);
                        avec.remove(lo);
                        pending.extend(extra);
                        changed = true;
                        break 'outer;
                    }
                }
            }
            while let Some(a) = pending.pop() {
                match a {
                    Atom::IPow(e) => sign = sign.add(&e),
                    Atom::Num(c) => num = num * c,
                    Atom::Linear(l, k) => {
                        let (c, m) = monic(&l);
                        num = num * c.pow(k);
                        *lin.entry(m).or_insert(0) += k;
                    }
                    Atom::A(x) => avec.push(x),
                    _ => {}
                }
            }
        }
        // constant a-factors with integer arguments are exact
        let mut out = Vec::new();
        let sign = sign.reduce_mod4();
        if sign.terms.is_empty() {
            let k = sign.c0;
            if k.is_integer() {
                num = num * CRat::i_pow(*k.numer() as i64);
            } else {
                out.push(Atom::IPow(sign));
            }
        } else {
            out.push(Atom::IPow(sign));
        }
        if num.is_zero() {
            return CoeffProduct { atoms: alloc::vec![Atom::Num(num)] };
        }
        if num != CRat::one() {
            out.push(Atom::Num(num));
        }
        if pi != 0 {
            out.push(Atom::Pi(pi));
        }
        avec.sort();
        out.extend(avec.into_iter().map(Atom::A));
        out.extend(lin.into_iter().filter(|(_, k)| *k != 0).map(|(l, k)| Atom::Linear(l, k)));
        deltas.sort();
        out.extend(deltas.into_iter().map(Atom::Delta));
        out.sort();
        CoeffProduct { atoms: out }
    }

    /// Structural equality after simplification.
    pub fn same_as(&self, o: &CoeffProduct) -> bool {
        self.simplify() == o.simplify()
    }

    pub fn without_deltas(&self) -> CoeffProduct {
        CoeffProduct { atoms: self.atoms.iter().filter(|a| !matches!(a, Atom::Delta(_))).cloned().collect() }
    }
}

fn canonical_delta(d: Delta) -> Delta {
    match d {
        Delta::Point(a, b) => Delta::Point(a.min(b), a.max(b)),
        Delta::Spectral(a, b) => Delta::Spectral(a.min(b), a.max(b)),
    }
}

/// Split `l = c·m` with `m` having unit coefficient on its first symbol.
fn monic(l: &Affine) -> (CRat, Affine) {
    match l.terms.iter().next() {
        None => (l.c0, Affine::int(1)),
        Some((_, c)) => {
            let c = *c;
            let inv = CRat::one() / c;
            (c, l.scale(inv))
        }
    }
}

/// Integer constant `k` with `x = y + k` in both sectors.
fn int_offset(x: &SymIndex, y: &SymIndex) -> Option<i64> {
    let d = x.clone() - y.clone();
    if !d.is_const() || d.holo.c0 != d.anti.c0 || !d.holo.c0.is_real() || !d.holo.c0.re.is_integer() {
        return None;
    }
    Some(*d.holo.c0.re.numer() as i64)
}

/// `a(γ + k) / a(γ)` as atoms.
fn shift_ratio(g: &SymIndex, k: i64) -> Vec<Atom> {
    let mut out = Vec::new();
    if k > 0 {
        for j in 0..k {
            let gj = g.shift(CRat::int(j as i128));
            out.push(Atom::Num(CRat::int(-1)));
            out.push(Atom::Linear(gj.holo.clone(), -1));
            out.push(Atom::Linear(gj.anti.clone(), -1));
        }
    } else {
        for j in 1..=(-k) {
            let gj = g.shift(CRat::int(-(j as i128)));
            out.push(Atom::Num(CRat::int(-1)));
            out.push(Atom::Linear(gj.holo.clone(), 1));
            out.push(Atom::Linear(gj.anti.clone(), 1));
        }
    }
    out
}

/// Product rule for `a(x)a(y)` when `y` is `1−x̄` or `1−x` up to an integer shift.
fn pair_identity(x: &SymIndex, y: &SymIndex) -> Option<Vec<Atom>> {
    let inv = x.one_minus_bar();
    if let Some(k) = int_offset(y, &inv) {
        // a(x)a(1−x̄) = 1
        return Some(shift_ratio(&inv, k));
    }
    let refl = x.one_minus();
    if let Some(k) = int_offset(y, &refl) {
        // a(x)a(1−x) = (−1)^{x−x̄}
        let s = CoeffProduct::sign_of(x).ok()?;
        let mut v = shift_ratio(&refl, k);
        v.push(s);
        return Some(v);
    }
    None
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Delta::Point(a, b) => write!(f, "delta2(v{a},v{b})"),
            Delta::Spectral(a, b) => write!(f, "delta(x{a},x{b})"),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Pi(k) => write!(f, "pi^{k}"),
            Atom::IPow(e) => write!(f, "i^({e})"),
            Atom::A(i) => write!(f, "a({i})"),
            Atom::Linear(l, k) => write!(f, "({l})^{k}"),
            Atom::Delta(d) => write!(f, "{d}"),
            Atom::Num(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Display for CoeffProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return f.write_str("1");
        }
        for (k, a) in self.atoms.iter().enumerate() {
            if k > 0 {
                f.write_str(" * ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}
