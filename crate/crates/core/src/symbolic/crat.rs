use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::C64;

/// Exact rational.
pub type Q = Ratio<i128>;

/// Exact complex rational `re + i·im`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct CRat {
    pub re: Q,
    pub im: Q,
}

impl CRat {
    pub const fn new(re: Q, im: Q) -> Self {
        CRat { re, im }
    }

    pub fn int(k: i128) -> Self {
        CRat { re: Q::from_integer(k), im: Q::zero() }
    }

    pub fn frac(n: i128, d: i128) -> Self {
        CRat { re: Q::new(n, d), im: Q::zero() }
    }

    pub fn rat(q: Q) -> Self {
        CRat { re: q, im: Q::zero() }
    }

    pub fn i() -> Self {
        CRat { re: Q::zero(), im: Q::one() }
    }

    pub fn imag(k: i128) -> Self {
        CRat { re: Q::zero(), im: Q::from_integer(k) }
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        CRat { re: self.re, im: -self.im }
    }

    pub fn to_c64(&self) -> C64 {
        C64::new(q_f64(&self.re), q_f64(&self.im))
    }

    /// `i^k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => Self::int(-1),
            _ => -Self::i(),
        }
    }

    pub fn pow(&self, k: i32) -> Self {
        let mut acc = Self::one();
        let b = if k < 0 { Self::one() / *self } else { *self };
        for _ in 0..k.unsigned_abs() {
            acc = acc * b;
        }
        acc
    }
}

pub(crate) fn q_f64(q: &Q) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

impl Add for CRat {
    type Output = CRat;
    fn add(self, o: CRat) -> CRat {
        CRat { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for CRat {
    type Output = CRat;
    fn sub(self, o: CRat) -> CRat {
        CRat { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for CRat {
    type Output = CRat;
    fn mul(self, o: CRat) -> CRat {
        CRat { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

impl Div for CRat {
    type Output = CRat;
    fn div(self, o: CRat) -> CRat {
        let d = o.re * o.re + o.im * o.im;
        let n = self * o.conj();
        CRat { re: n.re / d, im: n.im / d }
    }
}

impl Neg for CRat {
    type Output = CRat;
    fn neg(self) -> CRat {
        CRat { re: -self.re, im: -self.im }
    }
}

fn fmt_q(q: &Q, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for CRat {
    /// `a`, `a*i` or `(a+b*i)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => fmt_q(&self.re, f),
            (true, false) => {
                fmt_q(&self.im, f)?;
                f.write_str("*i")
            }
            (false, false) => {
                f.write_str("(")?;
                fmt_q(&self.re, f)?;
                f.write_str(if self.im.is_negative() { "-" } else { "+" })?;
                fmt_q(&self.im.abs(), f)?;
                f.write_str("*i)")
            }
        }
    }
}
