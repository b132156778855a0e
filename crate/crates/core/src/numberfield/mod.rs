//! Exact polynomial arithmetic over the integers and rationals, certified
//! root isolation, Mahler measure and structural predicates on an algebraic
//! number given by its defining polynomial.
//!
//! Irreducibility is not checked. Every quantity is attached to the
//! polynomial as given; [`AlgebraicContext::reducible`] is set when a rational
//! root or a proper reciprocal factor turns up along the way.

mod context;
mod field;
mod poly;
mod roots;

pub use context::{
    classify_roots, mahler_measure, power_sums, structural_flags, AlgebraicContext,
    Classification, Interval, RootClass, StructuralFlags, DEFAULT_MAHLER_WIDTH,
};
pub(crate) use context::{down, up};
pub use field::{power_residues, reduce_mod, FieldElement};
pub use poly::{IntPolynomial, QPoly};
pub(crate) use poly::rational_to_f64;
pub use roots::{isolate_roots, ComplexInterval, DEFAULT_TARGET_RADIUS};

/// Parses ascending integer coefficients into a normalized polynomial.
pub fn parse_polynomial(coeffs: &[i64]) -> crate::Result<IntPolynomial> {
    IntPolynomial::from_i64s(coeffs)
}
