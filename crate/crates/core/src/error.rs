use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A size-driven limit (sieve length, enumeration size, fiber cost) was exceeded.
    #[error("capacity exceeded: {what} = {requested} is above the limit {limit}")]
    Capacity {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("could not factor {0} within the trial-division/rho budget")]
    Unfactored(i128),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular curve: 4a^3 + 27b^2 = 0 for (a, b) = ({a}, {b})")]
    SingularCurve { a: i64, b: i64 },

    #[error("prime {p} is excluded: bad reduction or p < 5")]
    BadReduction { p: u64 },

    #[error("unknown builtin polynomial `{0}` (expected `koblitz` or `frobdisc`)")]
    UnknownBuiltin(String),

    #[error("{0} is not squarefree")]
    NotSquarefree(u64),

    #[error("matrix is not invertible modulo {0}")]
    NotInvertible(u64),

    #[error("character {character} is not defined modulo {modulus}")]
    InvalidCharacter { character: String, modulus: u64 },

    #[error("the curve family is empty")]
    EmptyFamily,
}

pub(crate) fn capacity(
    what: &'static str,
    requested: impl Into<u128>,
    limit: impl Into<u128>,
) -> Error {
    Error::Capacity {
        what,
        requested: requested.into(),
        limit: limit.into(),
    }
}
