//! Sklyanin measures assembled from scripted exchange coefficients against the closed
//! product formulas.

use alloc::vec::Vec;

use crate::diagram::{measure_from_exchange, MeasureFamily};
use crate::rng::Rng;
use crate::specialfn::{SepPoint, Spin};
use crate::spectral::{measure, SpectrumPoint};
use crate::symbolic::Binding;
use crate::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureDraw {
    pub family: MeasureFamily,
    pub n: usize,
    pub point: SpectrumPoint,
    pub assembled: f64,
    pub closed: f64,
    pub rel_err: f64,
}

/// Random separated variables with the parity of `spin`.
pub fn random_point(rng: &mut Rng, len: usize, spin: Spin) -> SpectrumPoint {
    let seps = (0..len)
        .map(|_| SepPoint::new(2 * rng.int(-2, 2) + spin.two_ns.rem_euclid(2), rng.uniform(-1.5, 1.5)))
        .collect();
    SpectrumPoint::new(seps, spin)
}

/// `1 / (assembled 1/μ)` against `measure` at `draws` random points per `N ≤ max_n`.
pub fn measure_agreement(max_n: usize, draws: usize, seed: u64) -> Result<Vec<MeasureDraw>> {
    let mut rng = Rng::new(seed);
    let mut out = Vec::new();
    for family in [MeasureFamily::A, MeasureFamily::B] {
        for n in 1..=max_n {
            let inverse = measure_from_exchange(n, family)?;
            let len = match family {
                MeasureFamily::A => n,
                MeasureFamily::B => n - 1,
            };
            for _ in 0..draws {
                let spin = Spin::new(rng.int(-2, 2), rng.uniform(-0.5, 0.5));
                let point = random_point(&mut rng, len, spin);
                let b = point.seps.iter().enumerate().fold(Binding::new(), |b, (k, x)| b.with_sep(k as u8 + 1, x));
                let assembled = 1.0 / inverse.eval_regular(&b)?.re;
                let closed = measure(family, &point)?;
                out.push(MeasureDraw { family, n, point, assembled, closed, rel_err: (assembled - closed).abs() / closed.abs() });
            }
        }
    }
    Ok(out)
}
