//! Core algorithms for the SL(2,C) spin magnet workbench.
//!
//! Everything here is `no_std` with `alloc`; floating point goes through `libm`
//! so results are reproducible across platforms.

#![no_std]

extern crate alloc;

pub mod checks;
pub mod diagram;
pub mod error;
pub mod powexpr;
pub mod quadrature;
pub mod rng;
pub mod specialfn;
pub mod spectral;
pub mod symbolic;
pub mod weyl;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// `π` as used everywhere in this crate.
pub const PI: f64 = core::f64::consts::PI;

/// Imaginary unit.
pub const I: C64 = C64::new(0.0, 1.0);

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
