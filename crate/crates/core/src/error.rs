use thiserror::Error;

/// Errors raised by the measure-theoretic operations.
///
/// Every variant has a stable short code (see [`Error::code`]) which the
/// command-line front end reports verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("element `{0}` appears in more than one block")]
    OverlappingBlocks(String),
    #[error("element `{0}` is not covered by any block")]
    UncoveredElement(String),
    #[error("block {0} is empty")]
    EmptyBlock(usize),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}` in ground set")]
    DuplicateElement(String),
    #[error("set `{0}` is not a union of atoms")]
    NotMeasurable(String),
    #[error("{what}: {atoms} atoms exceeds the exhaustive budget of {limit}")]
    ExplicitBudgetExceeded {
        what: &'static str,
        atoms: usize,
        limit: usize,
    },
    #[error("dimension mismatch: expected {expected} atoms, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid extended real {0}: must be a nonnegative number or \"inf\"")]
    InvalidValue(f64),
    #[error("invalid set function: {0}")]
    InvalidSetFunction(String),
    #[error("unknown operation `{0}`")]
    UnknownOperation(String),
    #[error("pseudo-multiplication axioms failed: {0}")]
    AxiomsFailed(String),
    #[error("not absolutely continuous: {0}")]
    NotAbsolutelyContinuous(String),
    #[error("not odot-absolutely continuous: {0}")]
    NotOdotAbsolutelyContinuous(String),
    #[error("set function is not null-additive: {0}")]
    NotNullAdditive(String),
    #[error("set function is not monotone: {0}")]
    NotMonotone(String),
    #[error("measure takes the value inf where a finite measure is required: {0}")]
    InfiniteValue(String),
    #[error("atom decomposition failed verification: {0}")]
    DecompositionVerificationFailed(String),
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
    #[error("integral evaluators disagree: {0}")]
    EvaluatorMismatch(String),
    #[error("|f - g| takes the value inf on atom {0}")]
    InfiniteDifference(usize),
    #[error("no density exists: {0}")]
    NoDensity(String),
    #[error("operation `{0}` is not an exact residual semigroup")]
    NonExactOperation(String),
    #[error("measures do not share null sets: {0}")]
    NotEssentialPair(String),
    #[error("associated-measure negligibility violated: {0}")]
    NegligibilityViolation(String),
    #[error("value `{0}` is not an element of the codomain space")]
    UnmappedValue(String),
    #[error("conditional expectation failed its defining property: {0}")]
    DefiningPropertyFailed(String),
    #[error("not a probability measure: {0}")]
    NotProbability(String),
    #[error("not a possibility measure: {0}")]
    NotPossibility(String),
    #[error("invalid sub-algebra: {0}")]
    InvalidSubAlgebra(String),
    #[error("invalid shape parameter p = {0}")]
    InvalidShape(f64),
    #[error("invalid truncation level epsilon = {0}")]
    InvalidTruncation(f64),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid model: {0}")]
    Model(String),
}

impl Error {
    /// Stable identifier of the variant, used in machine-readable reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::OverlappingBlocks(_) => "OverlappingBlocks",
            Error::UncoveredElement(_) => "UncoveredElement",
            Error::EmptyBlock(_) => "EmptyBlock",
            Error::UnknownElement(_) => "UnknownElement",
            Error::DuplicateElement(_) => "DuplicateElement",
            Error::NotMeasurable(_) => "NotMeasurable",
            Error::ExplicitBudgetExceeded { .. } => "ExplicitBudgetExceeded",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidValue(_) => "InvalidValue",
            Error::InvalidSetFunction(_) => "InvalidSetFunction",
            Error::UnknownOperation(_) => "UnknownOperation",
            Error::AxiomsFailed(_) => "AxiomsFailed",
            Error::NotAbsolutelyContinuous(_) => "NotAbsolutelyContinuous",
            Error::NotOdotAbsolutelyContinuous(_) => "NotOdotAbsolutelyContinuous",
            Error::NotNullAdditive(_) => "NotNullAdditive",
            Error::NotMonotone(_) => "NotMonotone",
            Error::InfiniteValue(_) => "InfiniteValue",
            Error::DecompositionVerificationFailed(_) => "DecompositionVerificationFailed",
            Error::OracleMismatch(_) => "OracleMismatch",
            Error::EvaluatorMismatch(_) => "EvaluatorMismatch",
            Error::InfiniteDifference(_) => "InfiniteDifference",
            Error::NoDensity(_) => "NoDensity",
            Error::NonExactOperation(_) => "NonExactOperation",
            Error::NotEssentialPair(_) => "NotEssentialPair",
            Error::NegligibilityViolation(_) => "NegligibilityViolation",
            Error::UnmappedValue(_) => "UnmappedValue",
            Error::DefiningPropertyFailed(_) => "DefiningPropertyFailed",
            Error::NotProbability(_) => "NotProbability",
            Error::NotPossibility(_) => "NotPossibility",
            Error::InvalidSubAlgebra(_) => "InvalidSubAlgebra",
            Error::InvalidShape(_) => "InvalidShape",
            Error::InvalidTruncation(_) => "InvalidTruncation",
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::Model(_) => "Model",
        }
    }

    /// Whether the error comes from malformed input rather than from the
    /// mathematics (the CLI maps these to a usage exit code).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::OverlappingBlocks(_)
                | Error::UncoveredElement(_)
                | Error::EmptyBlock(_)
                | Error::UnknownElement(_)
                | Error::DuplicateElement(_)
                | Error::NotMeasurable(_)
                | Error::DimensionMismatch { .. }
                | Error::InvalidValue(_)
                | Error::UnknownOperation(_)
                | Error::Model(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
