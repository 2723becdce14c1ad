//! Complex Γ and ψ, the index pair algebra and the coefficient `a(α)`.

use crate::{c, Error, Result, C64, I, PI};

/// Refusal radius around nonpositive integers for Γ and ψ.
pub const GAMMA_POLE_TOL: f64 = 1e-12;
/// Exclusion radius used by identity checks and `a_of`.
pub const POLE_NEIGHBORHOOD: f64 = 1e-6;

const LANCZOS_G_SHIFT: f64 = 5.242_187_5;
const LANCZOS_SER0: f64 = 0.999_999_999_999_997_092;
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

/// Distance from `z` to the nearest nonpositive integer (infinite if Re z > 0.5).
pub fn pole_distance(z: C64) -> f64 {
    if z.re > 0.5 {
        return f64::INFINITY;
    }
    let k = libm::round(z.re).min(0.0);
    (z - c(k, 0.0)).norm()
}

fn check_pole(z: C64, tol: f64) -> Result<()> {
    if pole_distance(z) < tol {
        Err(Error::Pole { re: z.re, im: z.im })
    } else {
        Ok(())
    }
}

fn ln_gamma_right(z: C64) -> C64 {
    let mut y = z;
    let t = z + LANCZOS_G_SHIFT;
    let t = (z + 0.5) * t.ln() - t;
    let mut ser = c(LANCZOS_SER0, 0.0);
    for k in LANCZOS {
        y += 1.0;
        ser += k / y;
    }
    t + (ser * SQRT_2PI / z).ln()
}

/// `ln Γ(z)` on some branch; only `exp` of it is meaningful.
pub fn ln_gamma(z: C64) -> Result<C64> {
    check_pole(z, GAMMA_POLE_TOL)?;
    if z.re < 0.5 {
        // Γ(z) = π / (sin(πz) Γ(1−z))
        let s = (z * PI).sin();
        Ok(c(libm::log(PI), 0.0) - s.ln() - ln_gamma_right(1.0 - z))
    } else {
        Ok(ln_gamma_right(z))
    }
}

/// Complex Γ(z).
pub fn gamma(z: C64) -> Result<C64> {
    check_pole(z, GAMMA_POLE_TOL)?;
    if z.re < 0.5 {
        let s = (z * PI).sin();
        Ok(c(PI, 0.0) / (s * ln_gamma_right(1.0 - z).exp()))
    } else {
        Ok(ln_gamma_right(z).exp())
    }
}

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;

/// Complex digamma ψ(z) = Γ'(z)/Γ(z).
pub fn digamma(z: C64) -> Result<C64> {
    check_pole(z, GAMMA_POLE_TOL)?;
    if z.re < 0.5 {
        // ψ(z) = ψ(1−z) − π cot(πz)
        let w = z * PI;
        return Ok(digamma_right(1.0 - z) - PI * w.cos() / w.sin());
    }
    Ok(digamma_right(z))
}

fn digamma_right(mut z: C64) -> C64 {
    let mut acc = c(0.0, 0.0);
    while z.norm() < 12.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let w = 1.0 / (z * z);
    // Bernoulli tail B_2k / (2k)
    let tail = w
        * (1.0 / 12.0
            - w * (1.0 / 120.0
                - w * (1.0 / 252.0
                    - w * (1.0 / 240.0 - w * (1.0 / 132.0 - w * (691.0 / 32760.0 - w / 12.0))))));
    acc + z.ln() - 0.5 / z - tail
}

/// Propagator exponent pair `(α, ᾱ)` stored as `α` and the integer `m = α − ᾱ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZIndex {
    pub alpha: C64,
    pub m: i64,
}

impl ZIndex {
    pub fn new(alpha: C64, m: i64) -> Self {
        ZIndex { alpha, m }
    }

    pub fn real(alpha: f64, m: i64) -> Self {
        ZIndex { alpha: c(alpha, 0.0), m }
    }

    /// Build from both components, requiring an integer difference within `tol`.
    pub fn from_pair(alpha: C64, alpha_bar: C64, tol: f64) -> Result<Self> {
        let d = alpha - alpha_bar;
        let m = libm::round(d.re);
        if (d - c(m, 0.0)).norm() > tol {
            return Err(Error::NonIntegerDifference { re: d.re, im: d.im });
        }
        Ok(ZIndex { alpha, m: m as i64 })
    }

    pub fn bar(&self) -> C64 {
        self.alpha - self.m as f64
    }

    /// The swapped pair `(ᾱ, α)`.
    pub fn swapped(&self) -> Self {
        ZIndex { alpha: self.bar(), m: -self.m }
    }

    /// `(k + α, k + ᾱ)` for a scalar shift applied to both sectors.
    pub fn shift(&self, k: C64) -> Self {
        ZIndex { alpha: self.alpha + k, m: self.m }
    }

    /// `(1 − ᾱ, 1 − α)`, the partner in `a(α)a(1−ᾱ) = 1`.
    pub fn one_minus_bar(&self) -> Self {
        ZIndex { alpha: 1.0 - self.bar(), m: self.m }
    }

    /// `(1 − α, 1 − ᾱ)`.
    pub fn one_minus(&self) -> Self {
        ZIndex { alpha: 1.0 - self.alpha, m: -self.m }
    }

    pub fn neg(&self) -> Self {
        ZIndex { alpha: -self.alpha, m: -self.m }
    }

    pub fn add(&self, o: &ZIndex) -> Self {
        ZIndex { alpha: self.alpha + o.alpha, m: self.m + o.m }
    }

    pub fn sub(&self, o: &ZIndex) -> Self {
        ZIndex { alpha: self.alpha - o.alpha, m: self.m - o.m }
    }

    /// `(−1)^m`.
    pub fn sign(&self) -> f64 {
        if self.m.rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// `i^k` for an integer `k`.
pub fn i_pow(k: i64) -> C64 {
    match k.rem_euclid(4) {
        0 => c(1.0, 0.0),
        1 => I,
        2 => c(-1.0, 0.0),
        _ => -I,
    }
}

/// `a(α) = Γ(1−ᾱ)/Γ(α)`.
pub fn a_of(idx: ZIndex) -> Result<C64> {
    let num = 1.0 - idx.bar();
    check_pole(num, POLE_NEIGHBORHOOD)?;
    check_pole(idx.alpha, POLE_NEIGHBORHOOD)?;
    Ok((ln_gamma(num)? - ln_gamma(idx.alpha)?).exp())
}

/// `1/a(α) = Γ(α)/Γ(1−ᾱ)`, finite where `a` has a pole from `Γ(1−ᾱ)`.
pub fn a_inv(idx: ZIndex) -> Result<C64> {
    a_of(idx.one_minus_bar())
}

/// Product `a(α₁)a(α₂)…`.
pub fn a_prod(idx: &[ZIndex]) -> Result<C64> {
    let mut acc = c(1.0, 0.0);
    for i in idx {
        acc *= a_of(*i)?;
    }
    Ok(acc)
}

/// Outcome of evaluating the four `a(α)` identities at one index.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    /// `a(α)a(1−ᾱ) − 1`
    pub inverse: Option<f64>,
    /// `a(1+α)/a(α) + 1/(αᾱ)`
    pub shift: Option<f64>,
    /// `a(α)a(1−α) − (−1)^m`
    pub reflection: Option<f64>,
    /// `a(α) − (−1)^m a(ᾱ)`
    pub conjugate: Option<f64>,
}

impl IdentityReport {
    pub fn max_residual(&self) -> f64 {
        [self.inverse, self.shift, self.reflection, self.conjugate]
            .iter()
            .flatten()
            .fold(0.0, |a: f64, b| a.max(*b))
    }

    pub fn skipped(&self) -> usize {
        [self.inverse, self.shift, self.reflection, self.conjugate]
            .iter()
            .filter(|x| x.is_none())
            .count()
    }
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / (1.0f64).max(b.norm())
}

/// Evaluates the four `a(α)` identities; identities touching a pole neighborhood are skipped.
pub fn check_a_identities(idx: ZIndex) -> IdentityReport {
    let one = c(1.0, 0.0);
    let inverse = (|| Some(rel(a_of(idx).ok()? * a_of(idx.one_minus_bar()).ok()?, one)))();
    let shift = (|| {
        let lhs = a_of(idx.shift(one)).ok()? / a_of(idx).ok()?;
        let ab = idx.alpha * idx.bar();
        if ab.norm() < POLE_NEIGHBORHOOD {
            return None;
        }
        Some(rel(lhs, -1.0 / ab))
    })();
    let reflection =
        (|| Some(rel(a_of(idx).ok()? * a_of(idx.one_minus()).ok()?, c(idx.sign(), 0.0))))();
    let conjugate = (|| Some(rel(a_of(idx).ok()?, idx.sign() * a_of(idx.swapped()).ok()?)))();
    IdentityReport { inverse, shift, reflection, conjugate }
}

/// Representation labels: `s = (1+n_s)/2 + iν_s`, `s̄ = (1−n_s)/2 + iν_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spin {
    pub two_ns: i64,
    pub nu_s: f64,
}

impl Spin {
    pub fn new(two_ns: i64, nu_s: f64) -> Self {
        Spin { two_ns, nu_s }
    }

    pub fn n_s(&self) -> f64 {
        self.two_ns as f64 / 2.0
    }

    pub fn s(&self) -> C64 {
        c((1.0 + self.n_s()) / 2.0, self.nu_s)
    }

    pub fn s_bar(&self) -> C64 {
        c((1.0 - self.n_s()) / 2.0, self.nu_s)
    }

    /// The pair `(s, s̄)`; its difference is `n_s`, integer only for even `two_ns`.
    pub fn pair(&self) -> (C64, C64) {
        (self.s(), self.s_bar())
    }
}

impl Default for Spin {
    fn default() -> Self {
        Spin { two_ns: 0, nu_s: 0.3 }
    }
}

/// Separated variable `x = −in/2 + ν`, `x̄ = in/2 + ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SepPoint {
    pub two_n: i64,
    pub nu: f64,
}

impl SepPoint {
    pub fn new(two_n: i64, nu: f64) -> Self {
        SepPoint { two_n, nu }
    }

    pub fn n(&self) -> f64 {
        self.two_n as f64 / 2.0
    }

    pub fn x(&self) -> C64 {
        c(self.nu, -self.n() / 2.0)
    }

    pub fn x_bar(&self) -> C64 {
        c(self.nu, self.n() / 2.0)
    }

    /// `n ≡ n_s (mod 1)`.
    pub fn check_parity(&self, spin: &Spin) -> Result<()> {
        if (self.two_n - spin.two_ns).rem_euclid(2) != 0 {
            return Err(Error::Parity(alloc::format!(
                "2n = {} and 2n_s = {} differ by an odd number",
                self.two_n,
                spin.two_ns
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_small_values() {
        assert!((gamma(c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        assert!((gamma(c(3.0, 0.0)).unwrap() - 2.0).norm() < 1e-13);
        assert!((gamma(c(0.5, 0.0)).unwrap() - libm::sqrt(PI)).norm() < 1e-13);
        assert!(gamma(c(-2.0, 0.0)).is_err());
    }

    #[test]
    fn digamma_values() {
        assert!((digamma(c(1.0, 0.0)).unwrap() + EULER_GAMMA).norm() < 1e-13);
        let half = -EULER_GAMMA - 2.0 * core::f64::consts::LN_2;
        assert!((digamma(c(0.5, 0.0)).unwrap() - half).norm() < 1e-13);
    }

    #[test]
    fn a_basic() {
        assert!((a_of(ZIndex::real(0.5, 0)).unwrap() - 1.0).norm() < 1e-14);
        assert!((a_of(ZIndex::real(2.0, 2)).unwrap() - 1.0).norm() < 1e-14);
        let r = check_a_identities(ZIndex::new(c(0.3, 0.1), 1));
        assert_eq!(r.skipped(), 0);
        assert!(r.max_residual() < 1e-12, "{r:?}");
    }

    #[test]
    fn sep_parity() {
        let sp = Spin::new(1, 0.0);
        assert!(SepPoint::new(1, 0.2).check_parity(&sp).is_ok());
        assert!(SepPoint::new(2, 0.2).check_parity(&sp).is_err());
        let x = SepPoint::new(3, 0.7);
        assert_eq!(x.x().conj(), x.x_bar());
    }
}
