use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MsrsError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("polynomial division is not exact")]
    NotDivisible,
    #[error("division by the zero rational function")]
    DivisionByZeroFunction,
    #[error("template multiplicity {i} outside 1..={max}")]
    BadMultiplicity { i: u32, max: u32 },
    #[error("projection vanishes identically (template {template})")]
    IdenticallyZero { template: u32 },
    #[error("sign undecided at sigma = {at}")]
    Undecidable { at: String },
    #[error("could not certify template {template} solutions at sigma = {at}")]
    DegenerateSolution { template: u32, at: String },
    #[error("infinitely many template {template} solutions at sigma = {at}")]
    InfiniteSolutions { template: u32, at: String },
    #[error("adjacent isolating intervals touch")]
    EmptyGap,
    #[error("model validation failed: {0}")]
    Validation(String),
}

impl MsrsError {
    /// Stable snake_case tag for machine-readable output.
    pub fn kind(&self) -> &'static str {
        match self {
            MsrsError::Parse(_) => "parse",
            MsrsError::BadParameter(_) => "bad_parameter",
            MsrsError::NotDivisible => "not_divisible",
            MsrsError::DivisionByZeroFunction => "division_by_zero_function",
            MsrsError::BadMultiplicity { .. } => "bad_multiplicity",
            MsrsError::IdenticallyZero { .. } => "identically_zero",
            MsrsError::Undecidable { .. } => "undecidable",
            MsrsError::DegenerateSolution { .. } => "degenerate_solution",
            MsrsError::InfiniteSolutions { .. } => "infinite_solutions",
            MsrsError::EmptyGap => "empty_gap",
            MsrsError::Validation(_) => "validation",
        }
    }
}

pub type Result<T> = std::result::Result<T, MsrsError>;
