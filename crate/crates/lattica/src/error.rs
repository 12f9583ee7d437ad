use thiserror::Error;

/// Errors produced by any lattica operation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} outside the supported range [2, 2^31 - 1]")]
    OutOfRange(u64),
    #[error("division by zero in Z_{0}")]
    DivisionByZero(u64),
    #[error("field mismatch: Z_{left} vs Z_{right}")]
    FieldMismatch { left: u64, right: u64 },
    #[error("lattice {m}x{n} too small, minimum is 3x3")]
    TooSmall { m: usize, n: usize },
    #[error("vector of length {len} does not fit a {m}x{n} lattice")]
    DimensionMismatch { len: usize, m: usize, n: usize },
    #[error("cell value {value} out of range for Z_{p}")]
    CellOutOfRange { value: u64, p: u64 },
    #[error("unknown boundary spec name `{0}`")]
    UnknownName(String),
    #[error("({i}, {j}) is not a cell of the one-cell frame")]
    NotAFrameCell { i: usize, j: usize },
    #[error("off-diagonal block is singular")]
    SingularX,
    #[error("matrix does not have the required block shape")]
    ShapeMismatch,
    #[error("closed form needs an odd characteristic")]
    EvenCharacteristic,
    #[error("no closed-form case covers these parameters")]
    CaseNotCovered,
    #[error("matrix is singular")]
    Singular,
    #[error("rule is not reversible")]
    NotReversible,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
