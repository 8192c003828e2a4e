use thiserror::Error;

/// Everything that can go wrong while validating a scenario, building payoffs
/// or solving a game.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mixed scales: {0}")]
    MixedScale(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("label error: {0}")]
    Label(String),
    #[error("value out of range: {0}")]
    Range(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("empty interval operand")]
    EmptyOperand,
    #[error("scale not supported by this rule: {0}")]
    Scale(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("invalid search step: {0}")]
    Step(String),
    #[error("matrix too large for grid search: {0}")]
    Size(String),
}

impl Error {
    /// Stable name of the variant, used in machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MixedScale(_) => "MixedScaleError",
            Error::Dimension(_) => "DimensionError",
            Error::Label(_) => "LabelError",
            Error::Range(_) => "RangeError",
            Error::Degenerate(_) => "DegenerateError",
            Error::EmptyOperand => "EmptyOperandError",
            Error::Scale(_) => "ScaleError",
            Error::Config(_) => "ConfigError",
            Error::Index(_) => "IndexError",
            Error::Numerical(_) => "NumericalError",
            Error::Step(_) => "StepError",
            Error::Size(_) => "SizeError",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
