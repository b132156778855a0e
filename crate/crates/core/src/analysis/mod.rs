//! Headline quantities assembled from the other modules: dimension brackets,
//! the full-dimension test, the strictness preconditions, the Fourier
//! singularity certificate and the support-growth comparison against `M^n`.

mod dimension;
mod fourier;
mod mercat;

pub use dimension::{
    designated_root, dimension_bracket, full_dimension_test, strictness_applicable, CProvenance,
    DimensionBracket, PUBLISHED_C,
};
pub use fourier::{fourier_certificate, SingularityCertificate};
pub use mercat::{affine_growth_alias, mercat_check, MercatCheck, SEMIGROUP_RATIO};
