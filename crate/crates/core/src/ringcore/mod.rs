//! Exact coefficient fields, monomials, truncated polynomials and sparse linear algebra.

pub mod dsl;
pub mod field;
pub mod linalg;
pub mod monomial;
pub mod poly;

pub use field::{FieldKind, FieldSpec, Scalar};
pub use linalg::{echelon_span, kernel, DegreeSlice, Echelon, SparseVec};
pub use monomial::{binomial, Monomial, MonomialBasis};
pub use poly::TruncatedPoly;

/// Parses a DSL polynomial in `x1..xN` at the given level.
pub fn parse_poly(text: &str, ambient: usize, field: FieldSpec, level: u32) -> crate::Result<TruncatedPoly> {
    TruncatedPoly::parse(text, ambient, field, level)
}

/// Truncated product; errors on mismatched ambient, field or level.
pub fn mul_trunc(a: &TruncatedPoly, b: &TruncatedPoly) -> crate::Result<TruncatedPoly> {
    a.mul_trunc(b)
}

pub fn initial_form(f: &TruncatedPoly) -> crate::Result<TruncatedPoly> {
    f.initial_form()
}
