use thiserror::Error;

pub type Result<T> = std::result::Result<T, FusionError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FusionError {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("frame too large: {n} hypotheses (limit {max})")]
    FrameTooLarge { n: usize, max: usize },
    #[error("operands belong to different frames")]
    FrameMismatch,
    #[error("constraint would remove an existing empty-atom declaration")]
    NonMonotoneConstraint,
    #[error("degree undefined: both sets are empty")]
    UndefinedDegree,
    #[error("first set is not included in the second")]
    NotSubset,
    #[error("element is empty")]
    EmptyElement,
    #[error("invalid mass {0}")]
    InvalidMass(f64),
    #[error("total mass is zero")]
    ZeroTotalMass,
    #[error("reliability {0} outside [0,1]")]
    InvalidReliability(f64),
    #[error("not binary-coarsenable: {0}")]
    NotBinaryCoarsenable(String),
    #[error("total conflict: k12={}", trim_decimal(*k12))]
    TotalConflict { k12: f64 },
    #[error("total ignorance is empty under the model")]
    EmptyIgnorance,
    #[error("weights sum to {sum}, expected 1")]
    InvalidWeights { sum: f64 },
    #[error("parameter {name}={value} outside [{min}, {max}]")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("missing parameter `{0}`")]
    MissingParameter(&'static str),
    #[error("expected {expected} sources, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("degenerate consensus: dogmatic opinions not both Bayesian")]
    DegenerateConsensus,
    #[error("zero total mass after weighting")]
    ZeroTotalAfterWeighting,
    #[error("rule requires a Shafer (power-set) model")]
    NonShaferModel,
    #[error("focal element is not an interval")]
    NonIntervalFocal,
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("rule `{0}` is not conjunctive-based")]
    NotConjunctiveBased(String),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("scenario: {0}")]
    Scenario(String),
}

/// Formats with at most six decimals and no trailing zeros.
pub fn trim_decimal(value: f64) -> String {
    let text = format!("{value:.6}");
    let text = text.trim_end_matches('0').trim_end_matches('.');
    if text == "-0" {
        "0".to_string()
    } else {
        text.to_string()
    }
}
