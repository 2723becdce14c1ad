use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use super::{Binding, CRat, Sym, Q};
use crate::specialfn::ZIndex;
use crate::{Error, Result, C64};

/// `c₀ + Σ cᵢ·symᵢ` with exact complex-rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Affine {
    pub c0: CRat,
    pub terms: BTreeMap<Sym, CRat>,
}

impl Affine {
    pub fn constant(c0: CRat) -> Self {
        Affine { c0, terms: BTreeMap::new() }
    }

    pub fn int(k: i128) -> Self {
        Self::constant(CRat::int(k))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn sym(s: Sym) -> Self {
        Self::term(CRat::one(), s)
    }

    pub fn term(c: CRat, s: Sym) -> Self {
        let mut a = Self::zero();
        a.add_term(s, c);
        a
    }

    /// `i·sym`.
    pub fn isym(s: Sym) -> Self {
        Self::term(CRat::i(), s)
    }

    pub fn add_term(&mut self, s: Sym, c: CRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(s) {
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

    pub fn coeff(&self, s: Sym) -> CRat {
        self.terms.get(&s).copied().unwrap_or_else(CRat::zero)
    }

    pub fn is_const(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.c0.is_zero()
    }

    pub fn scale(&self, k: CRat) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Affine {
            c0: self.c0 * k,
            terms: self.terms.iter().map(|(s, c)| (*s, *c * k)).collect(),
        }
    }

    /// Replace each symbol by its partner, keeping coefficients.
    pub fn bar(&self) -> Self {
        let mut out = Self::constant(self.c0);
        for (s, c) in &self.terms {
            out.add_term(s.bar(), *c);
        }
        out
    }

    /// Complex conjugate under the physical reality conditions
    /// `conj(s) = 1 − s̄`, `conj(x) = x̄`, `conj(u) = ū`, ...
    pub fn conj_phys(&self) -> Self {
        let mut out = Self::constant(self.c0.conj());
        for (s, c) in &self.terms {
            let cc = c.conj();
            match s {
                Sym::S | Sym::SBar => {
                    out.c0 = out.c0 + cc;
                    out.add_term(s.bar(), -cc);
                }
                _ => out.add_term(s.bar(), cc),
            }
        }
        out
    }

    /// Substitute `sym := value`.
    pub fn subst(&self, s: Sym, value: &Affine) -> Self {
        match self.terms.get(&s) {
            None => self.clone(),
            Some(c) => {
                let mut out = self.clone();
                out.terms.remove(&s);
                out + value.scale(*c)
            }
        }
    }

    pub fn eval(&self, b: &Binding) -> Result<C64> {
        let mut acc = self.c0.to_c64();
        for (s, c) in &self.terms {
            acc += c.to_c64() * b.get(*s)?;
        }
        Ok(acc)
    }

    pub fn syms(&self) -> impl Iterator<Item = Sym> + '_ {
        self.terms.keys().copied()
    }

    /// Parses the `Display` form, e.g. `1 - s - i*x1`, `1/2*i*u + 2`.
    pub fn parse(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::PreconditionFailed("empty affine expression".into()));
        }
        let mut out = Affine::zero();
        let mut start = 0;
        let bytes = compact.as_bytes();
        let mut pieces = Vec::new();
        for i in 1..=bytes.len() {
            if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'/') {
                pieces.push(&compact[start..i]);
                start = i;
            }
        }
        for p in pieces {
            let (neg, body) = match p.as_bytes()[0] {
                b'-' => (true, &p[1..]),
                b'+' => (false, &p[1..]),
                _ => (false, p),
            };
            let mut c = if neg { CRat::int(-1) } else { CRat::one() };
            let mut sym = None;
            for f in body.split('*') {
                if f == "i" {
                    c = c * CRat::i();
                } else if let Some(s) = Sym::parse(f) {
                    if sym.replace(s).is_some() {
                        return Err(Error::PreconditionFailed(format!("nonlinear term `{p}`")));
                    }
                } else {
                    c = c * parse_rat(f)?;
                }
            }
            match sym {
                Some(s) => out.add_term(s, c),
                None => out.c0 = out.c0 + c,
            }
        }
        Ok(out)
    }
}

fn parse_rat(f: &str) -> Result<CRat> {
    let bad = || Error::PreconditionFailed(format!("bad coefficient `{f}`"));
    match f.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.parse().map_err(|_| bad())?;
            let d: i128 = d.parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(CRat::frac(n, d))
        }
        None => Ok(CRat::int(f.parse().map_err(|_| bad())?)),
    }
}

impl From<CRat> for Affine {
    fn from(c: CRat) -> Self {
        Affine::constant(c)
    }
}

impl From<Sym> for Affine {
    fn from(s: Sym) -> Self {
        Affine::sym(s)
    }
}

impl Add for Affine {
    type Output = Affine;
    fn add(mut self, o: Affine) -> Affine {
        self.c0 = self.c0 + o.c0;
        for (s, c) in o.terms {
            self.add_term(s, c);
        }
        self
    }
}

impl Sub for Affine {
    type Output = Affine;
    fn sub(self, o: Affine) -> Affine {
        self + (-o)
    }
}

impl Neg for Affine {
    type Output = Affine;
    fn neg(self) -> Affine {
        self.scale(CRat::int(-1))
    }
}

impl Mul<CRat> for Affine {
    type Output = Affine;
    fn mul(self, k: CRat) -> Affine {
        self.scale(k)
    }
}

fn write_part(f: &mut fmt::Formatter<'_>, first: &mut bool, q: Q, imag: bool, sym: Option<Sym>) -> fmt::Result {
    if q.is_zero() {
        return Ok(());
    }
    let neg = q.is_negative();
    let a = q.abs();
    if *first {
        if neg {
            f.write_str("-")?;
        }
    } else {
        f.write_str(if neg { " - " } else { " + " })?;
    }
    *first = false;
    let unit = a == Q::from_integer(1);
    let mut parts: Vec<String> = Vec::new();
    if !unit || (!imag && sym.is_none()) {
        parts.push(if a.is_integer() { format!("{}", a.numer()) } else { format!("{}/{}", a.numer(), a.denom()) });
    }
    if imag {
        parts.push("i".into());
    }
    if let Some(s) = sym {
        parts.push(s.name());
    }
    f.write_str(&parts.join("*"))
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        write_part(f, &mut first, self.c0.re, false, None)?;
        write_part(f, &mut first, self.c0.im, true, None)?;
        for (s, c) in &self.terms {
            write_part(f, &mut first, c.re, false, Some(*s))?;
            write_part(f, &mut first, c.im, true, Some(*s))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Symbolic exponent pair `(α, ᾱ)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct SymIndex {
    pub holo: Affine,
    pub anti: Affine,
}

impl SymIndex {
    pub fn new(holo: Affine, anti: Affine) -> Self {
        SymIndex { holo, anti }
    }

    /// `(h, h̄)` with the anti-holomorphic part obtained by barring every symbol.
    pub fn from_holo(h: Affine) -> Self {
        let anti = h.bar();
        SymIndex { holo: h, anti }
    }

    pub fn constant(c: CRat) -> Self {
        SymIndex { holo: Affine::constant(c), anti: Affine::constant(c) }
    }

    pub fn int(k: i128) -> Self {
        Self::constant(CRat::int(k))
    }

    /// Numeric pair `(α, α − m)` with rational `α`.
    pub fn numeric(alpha: CRat, m: i128) -> Self {
        SymIndex { holo: Affine::constant(alpha), anti: Affine::constant(alpha - CRat::int(m)) }
    }

    pub fn is_zero(&self) -> bool {
        self.holo.is_zero() && self.anti.is_zero()
    }

    /// `α − ᾱ` as an affine expression.
    pub fn diff(&self) -> Affine {
        self.holo.clone() - self.anti.clone()
    }

    pub fn eval(&self, b: &Binding) -> Result<ZIndex> {
        ZIndex::from_pair(self.holo.eval(b)?, self.anti.eval(b)?, 1e-9)
    }

    pub fn swapped(&self) -> Self {
        SymIndex { holo: self.anti.clone(), anti: self.holo.clone() }
    }

    pub fn shift(&self, k: CRat) -> Self {
        SymIndex { holo: self.holo.clone() + Affine::constant(k), anti: self.anti.clone() + Affine::constant(k) }
    }

    /// `(1 − ᾱ, 1 − α)`.
    pub fn one_minus_bar(&self) -> Self {
        SymIndex { holo: Affine::int(1) - self.anti.clone(), anti: Affine::int(1) - self.holo.clone() }
    }

    /// `(1 − α, 1 − ᾱ)`.
    pub fn one_minus(&self) -> Self {
        SymIndex { holo: Affine::int(1) - self.holo.clone(), anti: Affine::int(1) - self.anti.clone() }
    }

    pub fn scale(&self, k: CRat) -> Self {
        SymIndex { holo: self.holo.scale(k), anti: self.anti.scale(k) }
    }

    /// Index of the complex conjugate propagator: `conj([z]^{-α}) = [z]^{-(conj ᾱ, conj α)}`.
    pub fn adjoint(&self) -> Self {
        SymIndex { holo: self.anti.conj_phys(), anti: self.holo.conj_phys() }
    }

    pub fn subst(&self, s: Sym, v: &Affine) -> Self {
        SymIndex { holo: self.holo.subst(s, v), anti: self.anti.subst(s, v) }
    }

    /// Apply a substitution given for holomorphic symbols to both sectors via barring.
    pub fn subst_pair(&self, s: Sym, v: &Affine) -> Self {
        self.subst(s, v).subst(s.bar(), &v.bar())
    }

    pub fn is_const(&self) -> bool {
        self.holo.is_const() && self.anti.is_const()
    }

    pub fn syms(&self) -> impl Iterator<Item = Sym> + '_ {
        self.holo.syms().chain(self.anti.syms())
    }

    /// Parses `holo | anti`.
    pub fn parse(text: &str) -> Result<Self> {
        let (h, a) = text
            .split_once('|')
            .ok_or_else(|| Error::PreconditionFailed(format!("index `{text}` lacks `|`")))?;
        Ok(SymIndex { holo: Affine::parse(h)?, anti: Affine::parse(a)? })
    }
}

impl Add for SymIndex {
    type Output = SymIndex;
    fn add(self, o: SymIndex) -> SymIndex {
        SymIndex { holo: self.holo + o.holo, anti: self.anti + o.anti }
    }
}

impl Sub for SymIndex {
    type Output = SymIndex;
    fn sub(self, o: SymIndex) -> SymIndex {
        SymIndex { holo: self.holo - o.holo, anti: self.anti - o.anti }
    }
}

impl Neg for SymIndex {
    type Output = SymIndex;
    fn neg(self) -> SymIndex {
        SymIndex { holo: -self.holo, anti: -self.anti }
    }
}

impl fmt::Display for SymIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.holo, self.anti)
    }
}
