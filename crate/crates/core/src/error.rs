use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be odd and at least {min}, got {value}")]
    BadModulus { value: BigUint, min: u32 },

    #[error("{what} must be odd, got {value}")]
    EvenArgument { what: &'static str, value: BigUint },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A proven identity failed to hold; always an implementation bug.
    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("register of {ell} qubits exceeds the simulator cap of {cap}")]
    CapExceeded { ell: u32, cap: u32 },

    #[error("factoring {0} exceeded the work budget")]
    WorkBudgetExceeded(BigUint),
}
