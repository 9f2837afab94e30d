use thiserror::Error;

/// Errors raised by the evaluation layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument must be a positive integer, got {0}")]
    NonPositive(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("unknown function id `{0}`")]
    UnknownFunction(String),

    #[error("function `{0}` requires a parameter s")]
    MissingParameter(&'static str),

    #[error("parameter s = {s} outside the domain {domain}")]
    ParameterOutOfDomain { s: f64, domain: String },

    #[error("unknown case id `{0}`")]
    UnknownCase(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("function `{0}` is not multiplicative")]
    NotMultiplicative(String),

    #[error("table of {cells} cells exceeds the memory budget of {budget} cells")]
    BudgetExceeded { cells: u64, budget: u64 },

    #[error("exponential sum for c_{q}({n}) is {value}, not within 1e-4 of an integer")]
    NumericTrouble { q: u64, n: u64, value: f64 },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("table spot check failed at q = {q}, n = {n}")]
    SpotCheck { q: u64, n: u64 },

    #[error("malformed table dump: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
