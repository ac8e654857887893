use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("divisibility condition failed: {0}")]
    Divisibility(String),

    #[error("enumeration budget of {budget} exceeded ({what})")]
    BudgetExceeded { what: &'static str, budget: u64 },

    #[error("no simple hypergraph after {0} rejections")]
    RejectionLimit(u64),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("factorial argument is not a nonnegative integer: {0}")]
    NonIntegralFactorial(String),

    #[error("phi(0,0) = {origin} is not below phi at the stationary point = {stationary}")]
    BoundaryMaximum { origin: f64, stationary: f64 },

    #[error("numeric maximiser ({alpha}, {beta}) is {distance} away from the stationary point")]
    ArgmaxMismatch {
        alpha: f64,
        beta: f64,
        distance: f64,
    },

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
