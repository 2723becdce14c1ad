//! Closed-form spectral data: Sklyanin measures, the eigenvalue of `Q_D`,
//! Hamiltonian energies and the pairwise Hamiltonian on two-site powers.

use alloc::vec::Vec;

use crate::diagram::{build_baxter, Family, MeasureFamily};
use crate::powexpr::frac_coeff;
use crate::specialfn::{a_of, digamma, SepPoint, Spin, ZIndex};
use crate::symbolic::{Affine, CRat, Sym};
use crate::{c, Error, Result, C64, I, PI};

/// Quantum numbers of one eigenfunction: `N` separated variables for A/D,
/// `N − 1` plus a momentum for B/C.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumPoint {
    pub seps: Vec<SepPoint>,
    pub momentum: Option<C64>,
    pub spin: Spin,
}

impl SpectrumPoint {
    pub fn new(seps: Vec<SepPoint>, spin: Spin) -> Self {
        SpectrumPoint { seps, momentum: None, spin }
    }

    pub fn with_momentum(seps: Vec<SepPoint>, p: C64, spin: Spin) -> Self {
        SpectrumPoint { seps, momentum: Some(p), spin }
    }

    /// Every `n_k` has the parity of `n_s`.
    pub fn check_parity(&self) -> Result<()> {
        self.seps.iter().try_for_each(|x| x.check_parity(&self.spin))
    }

    /// Number of sites for the given family.
    pub fn sites(&self, family: MeasureFamily) -> usize {
        match family {
            MeasureFamily::A => self.seps.len(),
            MeasureFamily::B => self.seps.len() + 1,
        }
    }
}

fn vandermonde(seps: &[SepPoint]) -> f64 {
    let mut acc = 1.0;
    for j in 0..seps.len() {
        for k in j + 1..seps.len() {
            let dn = seps[k].n() - seps[j].n();
            let dv = seps[k].nu - seps[j].nu;
            acc *= dv * dv + dn * dn / 4.0;
        }
    }
    acc
}

/// Sklyanin measure `μ_A` or `μ_B` in the real `(ν, n)` form.
pub fn measure(family: MeasureFamily, pt: &SpectrumPoint) -> Result<f64> {
    let n = pt.sites(family);
    if n == 0 {
        return Err(Error::Arity("measure needs at least one site".into()));
    }
    let base = libm::pow(2.0 * PI, -(n as f64)) * libm::pow(PI, -((n * n) as f64));
    let f = match family {
        MeasureFamily::A => 1.0,
        MeasureFamily::B => 2.0,
    };
    Ok(f * base * vandermonde(&pt.seps))
}

fn pair(h: C64, a: C64) -> Result<ZIndex> {
    ZIndex::from_pair(h, a, 1e-9)
}

/// `q_D(u, x) = π^N ∏_k a(1+iū−ix̄_k, s−iu, 1−s+ix_k)` with `u = (u, ū)`.
pub fn baxter_eigenvalue_d(u: (C64, C64), pt: &SpectrumPoint) -> Result<C64> {
    let (s, sb) = pt.spin.pair();
    let one = c(1.0, 0.0);
    let mut acc = c(1.0, 0.0);
    for x in &pt.seps {
        let (xh, xb) = (x.x(), x.x_bar());
        let f1 = pair(one + I * u.1 - I * xb, one + I * u.0 - I * xh)?;
        let f2 = pair(s - I * u.0, sb - I * u.1)?;
        let f3 = pair(one - s + I * xh, one - sb + I * xb)?;
        acc *= PI * a_of(f1)? * a_of(f2)? * a_of(f3)?;
    }
    Ok(acc)
}

/// Sign `σ` of the point `u = σ i(1−s) + ε` at which the explicit `Q_D` kernel
/// degenerates to `(π/iε)^N` times the identity.
///
/// Read off the kernel: at the right point the `[z_k − w_k]` propagator has index
/// `(1 − iε, 1 − iε̄)`, the delta-function representation.
pub fn resolve_special_point() -> Result<i8> {
    let d = build_baxter(Family::D, 1)?;
    let z = d.by_label("z1")?;
    let w = d.by_label("w1")?;
    let e = d
        .edges
        .iter()
        .find(|e| e.tail == w && e.head == z)
        .ok_or_else(|| Error::PreconditionFailed("Q_D kernel has no [z1 − w1] line".into()))?;
    let one_minus_s = Affine::int(1) - Affine::sym(Sym::S);
    let want = Affine::int(1) - Affine::isym(Sym::Eps);
    let mut found = Vec::new();
    for sign in [1i8, -1] {
        let u = one_minus_s.scale(CRat::imag(sign as i128)) + Affine::sym(Sym::Eps);
        let idx = e.index.subst_pair(Sym::U, &u);
        if idx.holo == want && idx.anti == want.bar() {
            found.push(sign);
        }
    }
    match found.as_slice() {
        [s] => Ok(*s),
        _ => Err(Error::PreconditionFailed("no unique special point".into())),
    }
}

/// `u = σ i(1−s) + ε`, `ū = σ i(1−s̄) + ε` for real `ε`.
pub fn special_point(sign: i8, spin: &Spin, eps: f64) -> (C64, C64) {
    let (s, sb) = spin.pair();
    let sg = sign as f64;
    (I * (1.0 - s) * sg + eps, I * (1.0 - sb) * sg + eps)
}

/// `(iε/π)^N q_D` at the special point shifted by `ε`.
pub fn normalized_qd(sign: i8, pt: &SpectrumPoint, eps: f64) -> Result<C64> {
    let q = baxter_eigenvalue_d(special_point(sign, &pt.spin, eps), pt)?;
    Ok((I * eps / PI).powi(pt.seps.len() as i32) * q)
}

/// Slope in `ε` of `log((iε/π)^N q_D)` at `ε = 0`: Richardson-extrapolated central
/// differences with steps `h` and `h/2`.
pub fn qd_log_slope(sign: i8, pt: &SpectrumPoint, h: f64) -> Result<C64> {
    let d = |h: f64| -> Result<C64> {
        let p = normalized_qd(sign, pt, h)?.ln();
        let m = normalized_qd(sign, pt, -h)?.ln();
        Ok((p - m) / (2.0 * h))
    };
    let d1 = d(h)?;
    let d2 = d(h / 2.0)?;
    Ok((d2 * 4.0 - d1) / 3.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnergyVariant {
    /// `E_N^s`, eigenvalue of `H_N`.
    S,
    /// `E_N^{1−s}`, eigenvalue of the twin Hamiltonian.
    OneMinusS,
}

impl EnergyVariant {
    pub fn name(self) -> &'static str {
        match self {
            EnergyVariant::S => "s",
            EnergyVariant::OneMinusS => "one_minus_s",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "s" => Some(EnergyVariant::S),
            "one_minus_s" | "1-s" => Some(EnergyVariant::OneMinusS),
            _ => None,
        }
    }
}

/// `2 Σ_k Re(ψ(½ + (n_k ∓ n_s)/2 + i(ν_k ∓ ν_s)) − ψ(1))`.
pub fn energy(variant: EnergyVariant, pt: &SpectrumPoint) -> Result<f64> {
    let sg = match variant {
        EnergyVariant::S => -1.0,
        EnergyVariant::OneMinusS => 1.0,
    };
    let psi1 = digamma(c(1.0, 0.0))?.re;
    let mut acc = 0.0;
    for x in &pt.seps {
        let arg = c(0.5 + (x.n() + sg * pt.spin.n_s()) / 2.0, x.nu + sg * pt.spin.nu_s);
        acc += 2.0 * (digamma(arg)?.re - psi1);
    }
    Ok(acc)
}

/// The same energy from the complex `(x, x̄)` form, without taking real parts.
pub fn energy_complex(variant: EnergyVariant, pt: &SpectrumPoint) -> Result<C64> {
    let (s, sb) = pt.spin.pair();
    let one = c(1.0, 0.0);
    let psi1 = digamma(one)?;
    let mut acc = c(0.0, 0.0);
    for x in &pt.seps {
        let (a, b) = match variant {
            EnergyVariant::S => (one - s + I * x.x(), sb - I * x.x_bar()),
            EnergyVariant::OneMinusS => (s + I * x.x(), one - sb - I * x.x_bar()),
        };
        acc += digamma(a)? + digamma(b)? - psi1 * 2.0;
    }
    Ok(acc)
}

/// Conformal spins `(J, J̄)` of a pair of neighbouring sites.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConformalSpinPair {
    pub j: C64,
    pub j_bar: C64,
}

impl ConformalSpinPair {
    pub fn new(j: C64, j_bar: C64) -> Self {
        ConformalSpinPair { j, j_bar }
    }
}

/// `ψ(J) + ψ(1−J) + ψ(J̄) + ψ(1−J̄) − 4ψ(1)`.
pub fn pairwise_energy(jp: ConformalSpinPair) -> Result<C64> {
    let one = c(1.0, 0.0);
    Ok(digamma(jp.j)? + digamma(one - jp.j)? + digamma(jp.j_bar)? + digamma(one - jp.j_bar)?
        - digamma(one)? * 4.0)
}

/// `(2s − 1, 2s̄ − 1)` as an index.
fn two_s_minus_one(spin: &Spin) -> ZIndex {
    ZIndex::new(spin.s() * 2.0 - 1.0, spin.two_ns)
}

/// `∂_c C(c, b)` at `c = 0` along the real symmetric direction `(c, c)`.
fn log_frac_coeff(b: ZIndex, h: f64) -> Result<C64> {
    let k = |t: f64| frac_coeff(ZIndex::real(t, 0), b);
    let d = |h: f64| -> Result<C64> { Ok((k(h)? - k(-h)?) / (2.0 * h)) };
    Ok((d(h / 2.0)? * 4.0 - d(h)?) / 3.0)
}

/// `∂_t C(γ, b + t)` at `t = 0`, shifting both sectors of `b`.
fn frac_coeff_shift_slope(gamma: ZIndex, b: ZIndex, h: f64) -> Result<C64> {
    let k = |t: f64| frac_coeff(gamma, b.shift(c(t, 0.0)));
    let d = |h: f64| -> Result<C64> { Ok((k(h)? - k(-h)?) / (2.0 * h)) };
    Ok((d(h / 2.0)? * 4.0 - d(h)?) / 3.0)
}

const LOG_STEP: f64 = 1e-3;

/// Eigenvalue of the pairwise Hamiltonian `H_{kk+1}` on `[z_k − z_{k+1}]^a`, in one
/// of its four written forms.
///
/// `z_{kk+1}∂_{k+1}` acts on the monomial as `−a`. Forms 1 and 2 contain
/// `ln[i∂]`, taken as the derivative of `[i∂]^c` at `c = 0` by finite differences.
pub fn pairwise_h_on_power(a: ZIndex, spin: &Spin, form: u8) -> Result<C64> {
    let (s, sb) = spin.pair();
    let one = c(1.0, 0.0);
    let psi1 = digamma(one)?;
    let (ah, ab) = (a.alpha, a.bar());
    match form {
        1 => {
            let b = a.add(&two_s_minus_one(spin));
            Ok(log_frac_coeff(b, LOG_STEP)? - psi1 * 2.0)
        }
        2 => {
            let g = two_s_minus_one(spin);
            let b = a.add(&g);
            let first = log_frac_coeff(a, LOG_STEP)?;
            let middle = frac_coeff(g.neg(), a)? * frac_coeff_shift_slope(g, b, LOG_STEP)?;
            Ok(first + middle - psi1 * 2.0)
        }
        3 => Ok(digamma(one - s * 2.0 - ah)? + digamma(sb * 2.0 + ab)? - psi1 * 2.0),
        4 => Ok(digamma(s * 2.0 + ah)? + digamma(one - sb * 2.0 - ab)? - psi1 * 2.0),
        _ => Err(Error::PreconditionFailed(alloc::format!("no Hamiltonian form {form}"))),
    }
}

/// Eigenvalue of `R_{kk+1}(ε)` on `[z_k − z_{k+1}]^a` for real `ε`, in one of the three
/// written forms: conjugated `[i∂]^{−iε}`, conjugated `[z]^{−iε}`, Γ-ratio.
pub fn r_eps_on_power(a: ZIndex, spin: &Spin, eps: f64, form: u8) -> Result<C64> {
    let (s, sb) = spin.pair();
    let one = c(1.0, 0.0);
    let ie = I * eps;
    let pre = PI * a_of(ZIndex::new(one - ie, 0))?;
    let g = two_s_minus_one(spin);
    let b = a.add(&g);
    let body = match form {
        1 => frac_coeff(ZIndex::new(-ie, 0), b)?,
        2 => frac_coeff(g.neg().add(&ZIndex::new(-ie, 0)), a)? * frac_coeff(g, b)?,
        3 => {
            let (ah, ab) = (a.alpha, a.bar());
            let anti = crate::specialfn::gamma(sb * 2.0 + ab)? / crate::specialfn::gamma(sb * 2.0 + ab + ie)?;
            let holo = crate::specialfn::gamma(one - s * 2.0 - ah - ie)? / crate::specialfn::gamma(one - s * 2.0 - ah)?;
            anti * holo
        }
        _ => return Err(Error::PreconditionFailed(alloc::format!("no R(ε) form {form}"))),
    };
    Ok(pre * body)
}
