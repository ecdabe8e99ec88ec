//! Finite-level computations for curve singularities in `k[[x1..xN]]`.
//!
//! Everything is exact: coefficients live in the rationals or a prime field, and
//! every power series is carried as a representative modulo a power of the
//! maximal ideal with the level stated explicitly.

pub mod branches;
pub mod deform;
pub mod error;
pub mod idealcalc;
pub mod motivic;
pub mod ringcore;
pub mod trunctower;

pub use error::{Error, Result};
pub use ringcore::{FieldSpec, Monomial, Scalar, TruncatedPoly};
