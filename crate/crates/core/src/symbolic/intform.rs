use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use super::{Affine, Binding, CRat, Sym, Q};
use crate::{Error, Result, C64};

/// Integer lattice coordinates for sign exponents.
///
/// `T = 2n_s`, `M(x) = n_x − n_s` for labels that share the parity of `n_s`,
/// and `Z(t) = n_t` for free integer labels.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Lat {
    T,
    M(Sym),
    Z(Sym),
}

impl Lat {
    fn name(&self) -> String {
        match self {
            Lat::T => "T".into(),
            Lat::M(s) => format!("M_{}", s.name()),
            Lat::Z(s) => format!("Z_{}", s.name()),
        }
    }
}

/// Integer-valued affine form `c₀ + Σ cᵢ·latᵢ`, used as the exponent of `i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct IntForm {
    pub c0: Q,
    pub terms: BTreeMap<Lat, Q>,
}

fn add_q(map: &mut BTreeMap<Lat, Q>, k: Lat, c: Q) {
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
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

fn real_q(c: CRat, what: &str) -> Result<Q> {
    if !c.is_real() {
        return Err(Error::OutOfClass(format!("sign exponent has a non-real coefficient on {what}")));
    }
    Ok(c.re)
}

impl IntForm {
    pub fn int(k: i128) -> Self {
        IntForm { c0: Q::from_integer(k), terms: BTreeMap::new() }
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    /// Lattice form of an index difference `α − ᾱ`.
    pub fn from_diff(d: &Affine) -> Result<Self> {
        let mut out = IntForm { c0: real_q(d.c0, "the constant")?, terms: BTreeMap::new() };
        let holos: Vec<Sym> = {
            let mut v: Vec<Sym> = d.syms().map(|s| s.holo()).collect();
            v.sort();
            v.dedup();
            v
        };
        for h in holos {
            let c = d.coeff(h);
            let cb = d.coeff(h.bar());
            if !(c + cb).is_zero() {
                return Err(Error::OutOfClass(format!(
                    "difference `{d}` depends on {} beyond its integer part",
                    h.name()
                )));
            }
            match h {
                Sym::S => add_q(&mut out.terms, Lat::T, real_q(c, "s")? / Q::from_integer(2)),
                Sym::X(_) | Sym::U | Sym::V => {
                    // c·(h − h̄) = −i c·n_h,  n_h = T/2 + M(h)
                    let k = real_q(c * (-CRat::i()), &h.name())?;
                    add_q(&mut out.terms, Lat::T, k / Q::from_integer(2));
                    add_q(&mut out.terms, Lat::M(h), k);
                }
                Sym::Eps => {
                    let k = real_q(c * (-CRat::i()), "e")?;
                    add_q(&mut out.terms, Lat::Z(h), k);
                }
                Sym::Param(_) => add_q(&mut out.terms, Lat::Z(h), real_q(c, &h.name())?),
                _ => {
                    return Err(Error::OutOfClass(format!(
                        "{} has no integer difference with its partner",
                        h.name()
                    )))
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, o: &IntForm) -> IntForm {
        let mut out = self.clone();
        out.c0 += o.c0;
        for (k, c) in &o.terms {
            add_q(&mut out.terms, *k, *c);
        }
        out
    }

    pub fn scale(&self, k: i128) -> IntForm {
        let q = Q::from_integer(k);
        let mut out = IntForm { c0: self.c0 * q, terms: BTreeMap::new() };
        for (l, c) in &self.terms {
            add_q(&mut out.terms, *l, *c * q);
        }
        out
    }

    /// Reduces integer coefficients modulo 4, valid for the exponent of `i`.
    pub fn reduce_mod4(&self) -> IntForm {
        let four = Q::from_integer(4);
        let red = |q: Q| if q.is_integer() { Q::from_integer(q.numer().rem_euclid(4)) } else { q };
        let mut out = IntForm { c0: red(self.c0), terms: BTreeMap::new() };
        for (l, c) in &self.terms {
            let r = red(*c);
            if !(r % four).is_zero() {
                add_q(&mut out.terms, *l, r);
            }
        }
        out
    }

    /// Renames a holomorphic label in the lattice coordinates.
    pub fn rename(&self, from: Sym, to: Sym) -> IntForm {
        let mut out = IntForm { c0: self.c0, terms: BTreeMap::new() };
        for (l, c) in &self.terms {
            let l2 = match *l {
                Lat::M(h) if h == from => Lat::M(to),
                Lat::Z(h) if h == from => Lat::Z(to),
                other => other,
            };
            add_q(&mut out.terms, l2, *c);
        }
        out
    }

    pub fn is_trivial(&self) -> bool {
        let r = self.reduce_mod4();
        r.terms.is_empty() && r.c0.is_zero()
    }

    fn lat_value(l: &Lat, b: &Binding) -> Result<f64> {
        let n_of = |h: Sym| -> Result<C64> {
            let d = b.get(h)? - b.get(h.bar())?;
            Ok(match h {
                Sym::S | Sym::Param(_) => d,
                _ => d * C64::new(0.0, 1.0),
            })
        };
        let v = match l {
            Lat::T => n_of(Sym::S)? * 2.0,
            Lat::M(h) => n_of(*h)? - n_of(Sym::S)?,
            Lat::Z(h) => n_of(*h)?,
        };
        let r = libm::round(v.re);
        if (v - r).norm() > 1e-9 {
            return Err(Error::NonIntegerDifference { re: v.re, im: v.im });
        }
        Ok(r)
    }

    /// Integer value at a binding.
    pub fn eval(&self, b: &Binding) -> Result<i64> {
        let mut acc = crate::symbolic::crat::q_f64(&self.c0);
        for (l, c) in &self.terms {
            acc += crate::symbolic::crat::q_f64(c) * Self::lat_value(l, b)?;
        }
        let r = libm::round(acc);
        if (acc - r).abs() > 1e-9 {
            return Err(Error::NonIntegerDifference { re: acc, im: 0.0 });
        }
        Ok(r as i64)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::PreconditionFailed(format!("bad sign exponent `{text}`"));
        let mut out = IntForm::zero();
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pieces = Vec::new();
        let mut start = 0;
        let by = compact.as_bytes();
        for i in 1..=by.len() {
            if i == by.len() || ((by[i] == b'+' || by[i] == b'-') && by[i - 1] != b'/') {
                pieces.push(&compact[start..i]);
                start = i;
            }
        }
        for p in pieces {
            let (neg, body) = match p.as_bytes().first() {
                Some(b'-') => (true, &p[1..]),
                Some(b'+') => (false, &p[1..]),
                _ => (false, p),
            };
            let mut c = Q::from_integer(if neg { -1 } else { 1 });
            let mut lat = None;
            for f in body.split('*') {
                if f == "T" {
                    lat = Some(Lat::T);
                } else if let Some(r) = f.strip_prefix("M_") {
                    lat = Some(Lat::M(Sym::parse(r).ok_or_else(bad)?));
                } else if let Some(r) = f.strip_prefix("Z_") {
                    lat = Some(Lat::Z(Sym::parse(r).ok_or_else(bad)?));
                } else if let Some((n, d)) = f.split_once('/') {
                    c *= Q::new(n.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?);
                } else {
                    c *= Q::from_integer(f.parse().map_err(|_| bad())?);
                }
            }
            match lat {
                Some(l) => add_q(&mut out.terms, l, c),
                None => out.c0 += c,
            }
        }
        Ok(out)
    }
}

impl fmt::Display for IntForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut put = |f: &mut fmt::Formatter<'_>, q: Q, name: Option<String>| -> fmt::Result {
            if q.is_zero() {
                return Ok(());
            }
            let neg = q.is_negative();
            let a = q.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let num = if a.is_integer() { format!("{}", a.numer()) } else { format!("{}/{}", a.numer(), a.denom()) };
            match name {
                Some(n) if a == Q::from_integer(1) => f.write_str(&n),
                Some(n) => write!(f, "{num}*{n}"),
                None => f.write_str(&num),
            }
        };
        for (l, c) in &self.terms {
            put(f, *c, Some(l.name()))?;
        }
        put(f, self.c0, None)?;
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
