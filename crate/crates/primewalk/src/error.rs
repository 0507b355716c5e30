use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The prime store does not reach far enough; carries a limit estimate.
    #[error("insufficient sieve: need {needed} primes, store has {have}; sieve to about {suggested_limit}")]
    InsufficientSieve {
        needed: usize,
        have: usize,
        suggested_limit: u64,
    },
    /// Request exceeds a configured resource bound.
    #[error("resource limit: {0}")]
    Resource(String),
    /// A statistic is undefined on the given data (zero variance, empty fit...).
    #[error("degenerate data: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code per the CLI contract: domain errors 2, resource errors 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Resource(_) => 3,
            _ => 2,
        }
    }
}
