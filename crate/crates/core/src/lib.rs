//! Exact-arithmetic topological recursion for the total descendant potential of the
//! A_N singularity, together with executable checks of the combinatorial identities
//! behind its W-constraint form.

pub mod combinatorics;
pub mod error;
pub mod exactnum;
pub mod genus0;
pub mod recursion;
pub mod rootsys;
pub mod sampling;
pub mod series;

pub use error::{Error, Result};
