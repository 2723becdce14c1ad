//! Exact Weyl algebra of polynomial differential operators over chain sites.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::symbolic::{CRat, Poly, Sym};
use crate::{Error, Result};

/// Default cap on the number of terms in a monodromy entry.
pub const DEFAULT_TERM_CAP: usize = 2_000_000;

/// Holomorphic or anti-holomorphic copy of a variable.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sector {
    Holo,
    Anti,
}

/// A site variable `z_k` or `z̄_k`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Site {
    pub k: u8,
    pub sector: Sector,
}

impl Site {
    pub fn holo(k: u8) -> Self {
        Site { k, sector: Sector::Holo }
    }

    pub fn anti(k: u8) -> Self {
        Site { k, sector: Sector::Anti }
    }
}

/// Normal-ordered monomial `∏ z_k^{a_k} ∂_k^{b_k}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct WMono(pub Vec<(Site, u32, u32)>);

impl WMono {
    pub fn one() -> Self {
        WMono(Vec::new())
    }

    fn get(&self, s: Site) -> (u32, u32) {
        self.0.iter().find(|t| t.0 == s).map_or((0, 0), |t| (t.1, t.2))
    }

    pub fn sites(&self) -> impl Iterator<Item = (Site, u32, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn max_d_degree(&self) -> u32 {
        self.0.iter().map(|t| t.2).sum()
    }
}

fn falling(c: u32, k: u32) -> i128 {
    (0..k).fold(1i128, |acc, j| acc * (c - j) as i128)
}

fn binom(n: u32, k: u32) -> i128 {
    falling(n, k) / falling(k, k)
}

/// `(z^a ∂^b)(z^c ∂^d) = Σ_k C(b,k) c!/(c−k)! z^{a+c−k} ∂^{b+d−k}`.
fn site_product(a: u32, b: u32, c: u32, d: u32) -> Vec<(u32, u32, i128)> {
    (0..=b.min(c)).map(|k| (a + c - k, b + d - k, binom(b, k) * falling(c, k))).collect()
}

/// Element of the Weyl algebra with polynomial coefficients in formal scalars.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct WeylElement {
    pub terms: BTreeMap<WMono, Poly>,
}

impl WeylElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(p: Poly) -> Self {
        let mut w = Self::zero();
        w.add_term(WMono::one(), p);
        w
    }

    pub fn one() -> Self {
        Self::scalar(Poly::one())
    }

    pub fn sym(s: Sym) -> Self {
        Self::scalar(Poly::sym(s))
    }

    pub fn constant(c: CRat) -> Self {
        Self::scalar(Poly::constant(c))
    }

    /// Multiplication operator `z`.
    pub fn z(s: Site) -> Self {
        Self::mono(s, 1, 0)
    }

    /// Derivative `∂`.
    pub fn d(s: Site) -> Self {
        Self::mono(s, 0, 1)
    }

    pub fn mono(s: Site, a: u32, b: u32) -> Self {
        let m = if a == 0 && b == 0 { WMono::one() } else { WMono(alloc::vec![(s, a, b)]) };
        let mut w = Self::zero();
        w.add_term(m, Poly::one());
        w
    }

    pub fn add_term(&mut self, m: WMono, p: Poly) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(p);
            }
            Entry::Occupied(mut o) => {
                let n = core::mem::take(o.get_mut()) + p;
                if n.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = n;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total number of scalar terms across all coefficients.
    pub fn size(&self) -> usize {
        self.terms.values().map(|p| p.len()).sum()
    }

    pub fn scale(&self, p: &Poly) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * p);
        }
        out
    }

    /// Normal-ordered product.
    pub fn mul(&self, o: &WeylElement) -> WeylElement {
        let mut out = WeylElement::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let coeff = c1 * c2;
                if coeff.is_zero() {
                    continue;
                }
                for (m, w) in mono_product(m1, m2) {
                    out.add_term(m, coeff.scale(CRat::int(w)));
                }
            }
        }
        out
    }

    pub fn commutator(&self, o: &WeylElement) -> WeylElement {
        self.mul(o) - o.mul(self)
    }

    /// Substitute a formal scalar in every coefficient.
    pub fn subst(&self, s: Sym, v: &Poly) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.subst(s, v));
        }
        out
    }

    /// Coefficient of `s^k` in the formal scalar `s`.
    pub fn coeff_of(&self, s: Sym, k: u32) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.coeff_of(s, k));
        }
        out
    }

    pub fn degree_in(&self, s: Sym) -> u32 {
        self.terms.values().map(|c| c.degree_in(s)).max().unwrap_or(0)
    }

    /// Formal transpose: `z ↦ z`, `∂ ↦ −∂`, order of factors reversed.
    pub fn transpose(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut t = WeylElement::scalar(c.clone());
            for (s, a, b) in m.sites() {
                // (z^a ∂^b)^T = (−∂)^b z^a
                let sign = if b % 2 == 0 { 1 } else { -1 };
                let piece = WeylElement::mono(s, 0, b).mul(&WeylElement::mono(s, a, 0));
                t = t.mul(&piece.scale(&Poly::int(sign)));
            }
            out = out + t;
        }
        out
    }

    /// Relabel sites through `f`.
    pub fn relabel(&self, f: impl Fn(Site) -> Site) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut t = WeylElement::scalar(c.clone());
            for (s, a, b) in m.sites() {
                t = t.mul(&WeylElement::mono(f(s), a, b));
            }
            out = out + t;
        }
        out
    }
}

fn mono_product(m1: &WMono, m2: &WMono) -> Vec<(WMono, i128)> {
    let mut sites: Vec<Site> = m1.0.iter().chain(m2.0.iter()).map(|t| t.0).collect();
    sites.sort();
    sites.dedup();
    let mut acc: Vec<(Vec<(Site, u32, u32)>, i128)> = alloc::vec![(Vec::new(), 1)];
    for s in sites {
        let (a, b) = m1.get(s);
        let (c, d) = m2.get(s);
        let opts = site_product(a, b, c, d);
        let mut next = Vec::with_capacity(acc.len() * opts.len());
        for (v, w) in &acc {
            for (z, dd, k) in &opts {
                let mut v2 = v.clone();
                if *z != 0 || *dd != 0 {
                    v2.push((s, *z, *dd));
                }
                next.push((v2, w * k));
            }
        }
        acc = next;
    }
    acc.into_iter().map(|(v, w)| (WMono(v), w)).collect()
}

impl Add for WeylElement {
    type Output = WeylElement;
    fn add(mut self, o: WeylElement) -> WeylElement {
        for (m, c) in o.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for WeylElement {
    type Output = WeylElement;
    fn sub(self, o: WeylElement) -> WeylElement {
        self + (-o)
    }
}

impl Neg for WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        self.scale(&Poly::int(-1))
    }
}

impl Mul for &WeylElement {
    type Output = WeylElement;
    fn mul(self, o: &WeylElement) -> WeylElement {
        WeylElement::mul(self, o)
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (s, a, b) in m.sites() {
                let bar = if s.sector == Sector::Anti { "b" } else { "" };
                if a > 0 {
                    write!(f, "*z{bar}{}^{a}", s.k)?;
                }
                if b > 0 {
                    write!(f, "*d{bar}{}^{b}", s.k)?;
                }
            }
        }
        Ok(())
    }
}

fn spin_sym(sector: Sector) -> Sym {
    match sector {
        Sector::Holo => Sym::S,
        Sector::Anti => Sym::SBar,
    }
}

/// Spectral symbol for a sector: `u` or `ū`.
pub fn spectral_sym(u: Sym, sector: Sector) -> Sym {
    match sector {
        Sector::Holo => u.holo(),
        Sector::Anti => u.holo().bar(),
    }
}

/// `S₀ = z∂ + s`.
pub fn s0(site: Site) -> WeylElement {
    WeylElement::mono(site, 1, 1) + WeylElement::sym(spin_sym(site.sector))
}

/// `S₋ = −∂`.
pub fn s_minus(site: Site) -> WeylElement {
    -WeylElement::d(site)
}

/// `S₊ = z²∂ + 2sz`.
pub fn s_plus(site: Site) -> WeylElement {
    WeylElement::mono(site, 2, 1) + WeylElement::z(site).scale(&Poly::sym(spin_sym(site.sector)).scale(CRat::int(2)))
}

/// Sum of a generator over sites `1..=n`.
pub fn total(n: u8, sector: Sector, g: fn(Site) -> WeylElement) -> WeylElement {
    (1..=n).fold(WeylElement::zero(), |acc, k| acc + g(Site { k, sector }))
}

/// 2×2 matrix of operators.
#[derive(Clone, PartialEq, Debug)]
pub struct OperatorMatrix2x2(pub [[WeylElement; 2]; 2]);

impl OperatorMatrix2x2 {
    pub fn mul(&self, o: &Self) -> Self {
        let e = |i: usize, j: usize| self.0[i][0].mul(&o.0[0][j]) + self.0[i][1].mul(&o.0[1][j]);
        OperatorMatrix2x2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn get(&self, i: usize, j: usize) -> &WeylElement {
        &self.0[i][j]
    }

    pub fn subst(&self, s: Sym, v: &Poly) -> Self {
        let f = |i: usize, j: usize| self.0[i][j].subst(s, v);
        OperatorMatrix2x2([[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]])
    }

    pub fn size(&self) -> usize {
        self.0.iter().flatten().map(|w| w.size()).sum()
    }
}

/// `L(u) = u + i(S₀, S₋; S₊, −S₀)` at one site.
pub fn lax(site: Site, u: Sym) -> OperatorMatrix2x2 {
    let uu = WeylElement::sym(spectral_sym(u, site.sector));
    let i = Poly::constant(CRat::i());
    OperatorMatrix2x2([
        [uu.clone() + s0(site).scale(&i), s_minus(site).scale(&i)],
        [s_plus(site).scale(&i), uu - s0(site).scale(&i)],
    ])
}

/// `T(u) = L₁(u)⋯L_N(u)` with a term cap.
pub fn monodromy_capped(n: u8, sector: Sector, u: Sym, cap: usize) -> Result<OperatorMatrix2x2> {
    let mut t = lax(Site { k: 1, sector }, u);
    for k in 2..=n {
        t = t.mul(&lax(Site { k, sector }, u));
        let size = t.size();
        if size > cap {
            return Err(Error::TermCap(size));
        }
    }
    Ok(t)
}

pub fn monodromy(n: u8, sector: Sector, u: Sym) -> Result<OperatorMatrix2x2> {
    monodromy_capped(n, sector, u, DEFAULT_TERM_CAP)
}

/// `R(u−v)T(u)T'(v) − T'(v)T(u)R(u−v)` with `R = (u−v) + iP`, as a 4×4 array
/// indexed by `(i k), (j l)`.
pub fn fcr_residual(n: u8, sector: Sector) -> Result<Vec<Vec<WeylElement>>> {
    let tu = monodromy(n, sector, Sym::U)?;
    let tv = monodromy(n, sector, Sym::V)?;
    let uv = Poly::sym(spectral_sym(Sym::U, sector)) - Poly::sym(spectral_sym(Sym::V, sector));
    let i = Poly::constant(CRat::i());
    let mut out = Vec::new();
    for ii in 0..2 {
        for k in 0..2 {
            let mut row = Vec::new();
            for j in 0..2 {
                for l in 0..2 {
                    let comm = tu.0[ii][j].commutator(&tv.0[k][l]).scale(&uv);
                    let swap = tu.0[k][j].mul(&tv.0[ii][l]) - tv.0[k][j].mul(&tu.0[ii][l]);
                    row.push(comm + swap.scale(&i));
                }
            }
            out.push(row);
        }
    }
    Ok(out)
}

/// Printable label for an entry of `T`.
pub fn entry_name(i: usize, j: usize) -> String {
    ["A", "B", "C", "D"][2 * i + j].into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_commutator() {
        let s = Site::holo(1);
        let p = WeylElement::d(s).mul(&WeylElement::z(s));
        assert_eq!(p, WeylElement::mono(s, 1, 1) + WeylElement::one());
    }

    #[test]
    fn euler_square() {
        let s = Site::holo(1);
        let e = WeylElement::mono(s, 1, 1);
        assert_eq!(e.mul(&e), WeylElement::mono(s, 2, 2) + e.clone());
    }
}
