//! Exact scalars: big rationals and cyclotomic numbers.

mod cyclotomic;
mod rat;

pub use cyclotomic::{cyclotomic_poly, totient, CycContext, CycScalar, IntPoly};
pub use rat::{binomial, Rat};
