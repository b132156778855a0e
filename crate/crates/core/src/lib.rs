//! Certified quantities attached to Bernoulli convolutions with an algebraic
//! parameter.
//!
//! The crate is organized bottom-up:
//!
//! * [`numberfield`]: integer polynomials, certified roots, Mahler measure and
//!   exact arithmetic in `Q[x]/(p)`.
//! * [`walk`]: exact enumeration of the law of `sum_{i<n} xi_i lambda^i`,
//!   Shannon entropy, support growth, freeness and separation.
//! * [`smoothedentropy`]: differential entropy of Gaussian-smoothed atomic
//!   laws, the gap functional `Phi` and the constant `c`.
//! * [`analysis`]: dimension brackets, the full-dimension test, singularity
//!   certificates and the support-growth comparison against `M^n`.
//!
//! All entropies are in bits.

// Range checks are written as `!(x > 0.0)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod numberfield;
pub mod smoothedentropy;
pub mod walk;

pub use error::{Error, Result};
pub use numberfield::{AlgebraicContext, FieldElement, IntPolynomial, Interval, RootClass};
pub use smoothedentropy::{CConstantCertificate, PhiCertificate};
pub use walk::{GrowthReport, StepDistribution, WalkLevel};
