use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("invalid mixed strategy: {0}")]
    InvalidStrategy(String),

    #[error("payoff {value} at {location} lies outside [{low}, {high}]")]
    PayoffOutOfRange {
        value: String,
        location: String,
        low: String,
        high: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("player {player} is the output of more than one gadget")]
    DuplicateOutput { player: usize },

    #[error("inter-gadget wiring contains a cycle through gadget {gadget}")]
    CycleDetected { gadget: usize },

    #[error("block {block} of the imitator strategy has zero mass")]
    ZeroBlockMass { block: usize },

    #[error("search space of {size} exceeds the cap of {cap}")]
    CapExceeded { size: String, cap: String },

    #[error("no equilibrium found: {0}")]
    NoEquilibriumFound(String),

    #[error("estimated {estimate} players exceeds the budget of {budget}")]
    BudgetExceeded { estimate: String, budget: usize },

    #[error("mapping does not match the game or profile: {0}")]
    MappingMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
