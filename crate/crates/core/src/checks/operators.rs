//! Operator identities on power functions: the operator star-triangle relation,
//! the written forms of `R_{kk+1}(ε)` and of the pairwise Hamiltonian.

use alloc::string::String;
use alloc::vec::Vec;

use crate::powexpr::{sample_points, Base, BoundExpr};
use crate::rng::Rng;
use crate::specialfn::{Spin, ZIndex};
use crate::spectral::{pairwise_h_on_power, r_eps_on_power};
use crate::{c, Error, Result, C64};

/// Worst relative disagreement over a batch of random draws.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorCheck {
    pub name: String,
    pub draws: usize,
    pub max_residual: f64,
    pub tol: f64,
}

impl OperatorCheck {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tol
    }
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / (a.norm() + b.norm() + 1e-300)
}

fn random_index(rng: &mut Rng, re: (f64, f64), m: i64) -> ZIndex {
    let m = rng.int(-m, m);
    ZIndex::new(c(rng.uniform(re.0, re.1), rng.uniform(-0.6, 0.6)), m)
}

fn random_spin(rng: &mut Rng) -> Spin {
    Spin::new(rng.int(-2, 2), rng.uniform(-0.5, 0.5))
}

const Z: u8 = 0;

/// Apply `[z]^α [i∂]^{α+β} [z]^β` and `[i∂]^β [z]^{α+β} [i∂]^α` to `[z]^c` and compare
/// pointwise.
fn stop_residual(al: ZIndex, be: ZIndex, cc: ZIndex, pts: &[C64]) -> Result<f64> {
    let f = BoundExpr::power(Base::Single(Z), cc);
    let lhs = f.mul_power(Base::Single(Z), be).frac_deriv(Z, al.add(&be))?.mul_power(Base::Single(Z), al);
    let rhs = f.frac_deriv(Z, al)?.mul_power(Base::Single(Z), al.add(&be)).frac_deriv(Z, be)?;
    let mut worst: f64 = 0.0;
    for p in pts {
        let (l, r) = (lhs.eval_checked(&[*p])?, rhs.eval_checked(&[*p])?);
        if !(l.is_finite() && r.is_finite()) {
            return Err(Error::SingularPoint("non-finite operator value".into()));
        }
        worst = worst.max(rel(l, r));
    }
    Ok(worst)
}

/// Run `f` on `draws` successful draws, redrawing when a draw lands near a pole.
fn batch(draws: usize, seed: u64, mut f: impl FnMut(&mut Rng) -> Result<f64>) -> Result<f64> {
    let mut rng = Rng::new(seed);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    let mut misses = 0;
    while done < draws {
        match f(&mut rng) {
            Ok(r) => {
                worst = worst.max(r);
                done += 1;
            }
            Err(Error::Pole { .. }) | Err(Error::SkippedNearPole(_)) | Err(Error::SingularPoint(_)) => {
                misses += 1;
                if misses > 10 * draws {
                    return Err(Error::PreconditionFailed("too many draws near poles".into()));
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(worst)
}

/// Operator star-triangle relation on `[z]^c` at random admissible exponents.
pub fn stop_check(draws: usize, seed: u64) -> Result<OperatorCheck> {
    let max_residual = batch(draws, seed, |rng| {
        let al = random_index(rng, (-0.8, 0.8), 2);
        let be = random_index(rng, (-0.8, 0.8), 2);
        let cc = random_index(rng, (-1.2, 1.2), 2);
        let pts = sample_points(rng, 4, 0.3, 3.0, 0.0);
        let mut worst: f64 = 0.0;
        for p in pts {
            worst = worst.max(stop_residual(al, be, cc, &[p])?);
        }
        Ok(worst)
    })?;
    Ok(OperatorCheck { name: "operator star-triangle".into(), draws, max_residual, tol: 1e-10 })
}

/// The three forms of `R_{kk+1}(ε)` on `[z_{kk+1}]^a`, compared pairwise.
pub fn twoform_check(draws: usize, seed: u64, eps: f64) -> Result<OperatorCheck> {
    let max_residual = batch(draws, seed, |rng| {
        let spin = random_spin(rng);
        let a = random_index(rng, (-1.5, 1.5), 2);
        let v: Vec<C64> = (1..=3).map(|f| r_eps_on_power(a, &spin, eps, f)).collect::<Result<_>>()?;
        Ok(rel(v[0], v[2]).max(rel(v[1], v[2])))
    })?;
    Ok(OperatorCheck { name: alloc::format!("R(ε) forms at ε = {eps:e}"), draws, max_residual, tol: 1e-8 })
}

/// Pairwise Hamiltonian forms `p` and `q` on `[z_{kk+1}]^a`.
pub fn hkk_check(draws: usize, seed: u64, p: u8, q: u8, tol: f64) -> Result<OperatorCheck> {
    let max_residual = batch(draws, seed, |rng| {
        let spin = random_spin(rng);
        let a = random_index(rng, (-1.5, 1.5), 2);
        Ok(rel(pairwise_h_on_power(a, &spin, p)?, pairwise_h_on_power(a, &spin, q)?))
    })?;
    Ok(OperatorCheck { name: alloc::format!("H_kk+1 forms {p} and {q}"), draws, max_residual, tol })
}
