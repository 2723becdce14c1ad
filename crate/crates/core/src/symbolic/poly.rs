use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use super::{Affine, Binding, CRat, Sym};
use crate::{Result, C64};

/// Monomial `∏ symᵢ^{kᵢ}`, sorted by symbol, no zero exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Mono(pub Vec<(Sym, u32)>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(s: Sym) -> Self {
        Mono(alloc::vec![(s, 1)])
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let (a, b) = (&self.0, &o.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                core::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                core::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                core::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Mono(out)
    }

    pub fn degree_in(&self, s: Sym) -> u32 {
        self.0.iter().find(|(t, _)| *t == s).map_or(0, |(_, k)| *k)
    }

    pub fn without(&self, s: Sym) -> Mono {
        Mono(self.0.iter().filter(|(t, _)| *t != s).copied().collect())
    }

    pub fn eval(&self, b: &Binding) -> Result<C64> {
        let mut acc = C64::new(1.0, 0.0);
        for (s, k) in &self.0 {
            acc *= b.get(*s)?.powu(*k);
        }
        Ok(acc)
    }
}

/// Multivariate polynomial over formal symbols with exact coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    pub terms: BTreeMap<Mono, CRat>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: CRat) -> Self {
        let mut p = Self::zero();
        p.add_term(Mono::one(), c);
        p
    }

    pub fn one() -> Self {
        Self::constant(CRat::one())
    }

    pub fn int(k: i128) -> Self {
        Self::constant(CRat::int(k))
    }

    pub fn sym(s: Sym) -> Self {
        let mut p = Self::zero();
        p.add_term(Mono::var(s), CRat::one());
        p
    }

    pub fn add_term(&mut self, m: Mono, c: CRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let n = *o.get() + c;
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

    pub fn scale(&self, k: CRat) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), *c * k)).collect() }
    }

    /// Constant term if the polynomial is a constant.
    pub fn as_const(&self) -> Option<CRat> {
        match self.terms.len() {
            0 => Some(CRat::zero()),
            1 => self.terms.get(&Mono::one()).copied(),
            _ => None,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Coefficient of `s^k` as a polynomial in the remaining symbols.
    pub fn coeff_of(&self, s: Sym, k: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.degree_in(s) == k {
                out.add_term(m.without(s), *c);
            }
        }
        out
    }

    pub fn degree_in(&self, s: Sym) -> u32 {
        self.terms.keys().map(|m| m.degree_in(s)).max().unwrap_or(0)
    }

    /// Substitute `s := value`.
    pub fn subst(&self, s: Sym, value: &Poly) -> Poly {
        let mut out = Poly::zero();
        let mut powers: Vec<Poly> = alloc::vec![Poly::one()];
        for (m, c) in &self.terms {
            let k = m.degree_in(s) as usize;
            while powers.len() <= k {
                let next = powers.last().map(|p| p * value).unwrap_or_default();
                powers.push(next);
            }
            let rest = Poly { terms: core::iter::once((m.without(s), *c)).collect() };
            out = out + &rest * &powers[k];
        }
        out
    }

    /// Barring of every symbol.
    pub fn bar(&self) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut mm = Mono::one();
            for (s, k) in &m.0 {
                for _ in 0..*k {
                    mm = mm.mul(&Mono::var(s.bar()));
                }
            }
            out.add_term(mm, *c);
        }
        out
    }

    /// Complex conjugation under the physical reality conditions.
    pub fn conj_phys(&self) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.conj());
            for (s, k) in &m.0 {
                let f = Poly::from(&Affine::sym(*s).conj_phys());
                t = &t * &f.pow(*k);
            }
            out = out + t;
        }
        out
    }

    pub fn eval(&self, b: &Binding) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            acc += c.to_c64() * m.eval(b)?;
        }
        Ok(acc)
    }

    pub fn syms(&self) -> Vec<Sym> {
        let mut v: Vec<Sym> = self.terms.keys().flat_map(|m| m.0.iter().map(|(s, _)| *s)).collect();
        v.sort();
        v.dedup();
        v
    }
}

impl From<&Affine> for Poly {
    fn from(a: &Affine) -> Self {
        let mut p = Poly::constant(a.c0);
        for (s, c) in &a.terms {
            p.add_term(Mono::var(*s), *c);
        }
        p
    }
}

impl From<CRat> for Poly {
    fn from(c: CRat) -> Self {
        Poly::constant(c)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, o: Poly) -> Poly {
        for (m, c) in o.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        self + (-o)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(CRat::int(-1))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), *c1 * *c2);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

impl fmt::Display for Poly {
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
            let mut parts: Vec<String> = Vec::new();
            if *c != CRat::one() || m.0.is_empty() {
                parts.push(alloc::format!("{c}"));
            }
            for (s, k) in &m.0 {
                if *k == 1 {
                    parts.push(s.name());
                } else {
                    parts.push(alloc::format!("{}^{}", s.name(), k));
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}
