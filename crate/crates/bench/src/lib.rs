//! Benchmark fixtures shared by the criterion benches.

use bce_core::{AlgebraicContext, IntPolynomial};

/// Polynomials used across benches, as ascending coefficients.
pub const GOLDEN: &[i64] = &[-1, 1, 1];
pub const DYADIC: &[i64] = &[-1, 2];
pub const MERCAT: &[i64] = &[1, 1, 1, -1, 1, 1, 1];

pub fn context(coeffs: &[i64]) -> AlgebraicContext {
    AlgebraicContext::new(IntPolynomial::from_i64s(coeffs).expect("valid polynomial")).expect("classifiable")
}
