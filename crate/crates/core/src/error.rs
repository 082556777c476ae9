use thiserror::Error;

/// Errors raised by the computational modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("arithmetic overflow in {entry}: magnitude exceeds guard {guard}")]
    Overflow { entry: &'static str, guard: i64 },

    #[error("matrix ({a},{b};{c},{d}) has determinant {det}, expected 1")]
    Determinant { a: i64, b: i64, c: i64, d: i64, det: i128 },

    #[error("invalid group spec: {0}")]
    InvalidSpec(String),

    #[error("capacity exceeded: {what} reached the cap of {limit}")]
    Capacity { what: &'static str, limit: usize },

    #[error("invalid modulus {0}")]
    InvalidModulus(u64),

    #[error("matrix is not reducible: {0}")]
    NotReducible(&'static str),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("admissible set at prime {p} did not stabilize by power {power_bound}")]
    UnstablePrime { p: u64, power_bound: u32 },

    #[error("group looks elementary: {0}")]
    Elementary(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("infeasible parameters: constraint {constraint} violated ({detail})")]
    Infeasible { constraint: &'static str, detail: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
