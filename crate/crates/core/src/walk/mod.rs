//! Exact enumeration of the law of `sum_{i<n} xi_i lambda^i`.
//!
//! Support points are canonical residues in `Q[x]/(p)`, so two step
//! sequences collide exactly when their difference is divisible by `p`. The
//! law therefore does not depend on which root of `p` plays the role of
//! `lambda`, and enumeration works for any `p`. Only separation needs an
//! embedding, and it uses the roots inside the unit disk.

mod growth;
mod level;
pub mod oracle;
mod separation;
mod step;

pub use growth::{growth_sequences, is_free_up_to, Freeness, GrowthKind, GrowthReport, GrowthRow};
pub use level::{advance_level, level_at, shannon_entropy, WalkLevel, DEFAULT_BUDGET};
pub use oracle::{brute_force_oracle, default_gap, Cluster, OracleResult};
pub use separation::{embedding_roots, min_separation, Separation};
pub use step::StepDistribution;

/// Builds a step law from atoms and probabilities given as integer ratios.
pub fn make_step_distribution(
    atoms: &[(i64, i64)],
    probs: &[(i64, i64)],
) -> crate::Result<StepDistribution> {
    StepDistribution::from_ratios(atoms, probs)
}
