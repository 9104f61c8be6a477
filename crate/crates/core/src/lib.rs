//! Exact decision procedures for monomial algebras attached to non-negative
//! integer matrices, clutters and graphs.
//!
//! Every theorem-based answer is paired with an independent brute-force route
//! and the two are compared before a verdict is returned.

pub mod algebras;
pub mod arith;
pub mod canonical;
pub mod clutters;
pub mod error;
pub mod hilbert;
pub mod polyhedra;
pub mod rounding;

pub use error::{Error, Result};
