//! Exact symbolic scalars: complex rationals, formal symbols, affine exponents,
//! polynomial coefficients and integer-valued sign exponents.

mod affine;
mod crat;
mod intform;
mod poly;
mod sym;

pub use affine::{Affine, SymIndex};
pub use crat::{CRat, Q};
pub use intform::{IntForm, Lat};
pub use poly::{Mono, Poly};
pub use sym::{Binding, Sym};
