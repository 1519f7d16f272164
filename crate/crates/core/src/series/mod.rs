//! Polynomials in the descendant variables, Laurent objects in lambda^{1/h}, and Y-polynomials.

mod lambda;
mod poly;
mod ypoly;

pub use lambda::LambdaSeries;
pub use poly::{Monomial, Scalar, SparsePoly, VarId};
pub use ypoly::YPoly;
