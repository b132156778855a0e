use thiserror::Error;

/// Errors raised by every module of the crate.
///
/// Variants fall into two groups: validation failures (bad input) and
/// computational failures (precision or memory ran out). [`Error::is_validation`]
/// tells them apart, which the CLI uses to choose an exit code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty coefficient list")]
    EmptyInput,
    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,
    #[error("polynomial must have degree at least 1")]
    ConstantPolynomial,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("root isolation did not reach the requested radius at {bits} bits")]
    PrecisionExhausted { bits: u32 },
    #[error("root {index} straddles the unit circle and cannot be classified")]
    AmbiguousCircleRoot { index: usize },

    #[error("probability {0} is not positive")]
    NonPositiveProbability(String),
    #[error("probabilities sum to {0}, not 1")]
    ProbabilitySumNotOne(String),
    #[error("duplicate atom {0}")]
    DuplicateAtom(String),
    #[error("a step law needs at least two atoms")]
    TooFewAtoms,
    #[error("atoms and probabilities differ in length ({atoms} vs {probs})")]
    LengthMismatch { atoms: usize, probs: usize },
    #[error("residue count {count} exceeds the memory budget {budget}")]
    MemoryBudgetExceeded { count: usize, budget: usize },
    #[error("no root of the polynomial lies strictly inside the unit disk")]
    NoContractingRoot,
    #[error("enumeration of {count} sequences is too large for the brute-force oracle")]
    OracleTooLarge { count: u128 },
    #[error("two clusters closer than ten times the gap threshold")]
    ClusterAmbiguity,

    #[error("adaptive quadrature did not converge (estimated error {estimate:e})")]
    QuadratureNonConvergence { estimate: f64 },

    #[error("no real root in the admissible range {range}")]
    NoRealRootInRange { range: &'static str },
    #[error("algebraic number is not a unit")]
    NotUnit,
    #[error("a Galois conjugate lies on the unit circle")]
    CircleRootPresent,
    #[error("the step law must be the fair coin on {{-1, +1}}")]
    NotFairCoin,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors caused by invalid input rather than by running out of
    /// precision or memory.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::PrecisionExhausted { .. }
                | Error::AmbiguousCircleRoot { .. }
                | Error::MemoryBudgetExceeded { .. }
                | Error::ClusterAmbiguity
                | Error::QuadratureNonConvergence { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
