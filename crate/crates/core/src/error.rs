use thiserror::Error;

/// Every failure the library can report.
///
/// [`Error::token`] gives the stable machine-readable name printed by the CLI
/// and mapped to status codes by the C bindings.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("divisor could not be separated from zero within precision {budget}")]
    DivisorNotSeparatedFromZero { budget: u32 },
    #[error("operand could not be separated from zero within precision {budget}")]
    NotSeparatedFromZero { budget: u32 },
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("q*x straddles a half-integer at precision {budget}")]
    AmbiguousNearestInteger { budget: u32 },
    #[error("refinement budget exceeded (precision {budget})")]
    RefinementBudgetExceeded { budget: u32 },
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("distance to nearest integer is exactly zero")]
    ZeroDistance,
    #[error("no witness found for level {level} within budget")]
    WitnessSearchExhausted { level: u32 },
    #[error("map image collapsed: {0}")]
    ImageCollapse(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("no root of the polynomial in the y-interval: {0}")]
    NoRootInJ(String),
    #[error("polynomial slice is not certifiably monotone: {0}")]
    NonMonotoneSlice(String),
    #[error("iterate leaves its domain: {0}")]
    DomainEscape(String),
    #[error("relation does not make the combination constant")]
    InvalidRelation,
    #[error("minimal polynomial is zero")]
    ZeroP,
    #[error("composed polynomial is constant")]
    ConstantF,
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("certificate format error: {0}")]
    Format(String),
}

impl Error {
    pub fn token(&self) -> &'static str {
        match self {
            Error::DivisorNotSeparatedFromZero { .. } => "DivisorNotSeparatedFromZero",
            Error::NotSeparatedFromZero { .. } => "NotSeparatedFromZero",
            Error::DomainError(_) => "DomainError",
            Error::AmbiguousNearestInteger { .. } => "AmbiguousNearestInteger",
            Error::RefinementBudgetExceeded { .. } => "RefinementBudgetExceeded",
            Error::InvalidSchedule(_) => "InvalidSchedule",
            Error::ZeroDistance => "ZeroDistance",
            Error::WitnessSearchExhausted { .. } => "WitnessSearchExhausted",
            Error::ImageCollapse(_) => "ImageCollapse",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::NoRootInJ(_) => "NoRootInJ",
            Error::NonMonotoneSlice(_) => "NonMonotoneSlice",
            Error::DomainEscape(_) => "DomainEscape",
            Error::InvalidRelation => "InvalidRelation",
            Error::ZeroP => "ZeroP",
            Error::ConstantF => "ConstantF",
            Error::InvalidWitness(_) => "InvalidWitness",
            Error::Parse(_) => "ParseError",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Format(_) => "FormatError",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
