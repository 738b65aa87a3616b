use thiserror::Error;

/// Errors raised by the arithmetic, Drinfeld and experiment layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("q = {0} is not an odd prime power supported by the scalar tables")]
    UnsupportedFieldSize(u64),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("zero input where a nonzero value is required: {0}")]
    ZeroInput(&'static str),

    #[error("modulus {0} is not a monic irreducible polynomial")]
    NotIrreducible(String),

    #[error("arguments are not coprime: {0}")]
    NotCoprime(String),

    #[error("operands live over different residue fields")]
    FieldMismatch,

    #[error("{0} is not an imaginary discriminant")]
    NotImaginary(String),

    #[error("deg a = {deg_a} violates the strict bound deg a < x/2 for x = {x}")]
    TraceDegree { deg_a: usize, x: usize },

    #[error("u = {0} is inadmissible: -4u must be a nonsquare when deg p is even")]
    InadmissibleUnit(String),

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
