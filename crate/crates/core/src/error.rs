use thiserror::Error;

/// Errors produced by the numerical engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {0} is too close to the pole of zeta at s = 1")]
    PoleAtOne(String),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("local Euler factor at p = {prime} has modulus {modulus:e}")]
    FactorNearZero { prime: u64, modulus: f64 },
    #[error("singular input: {0}")]
    SingularInput(String),
    #[error("argument {0} sits on a pole 2*pi*i*k of z")]
    PoleAtLatticePoint(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("no data in input")]
    EmptyFile,
    #[error("non-finite result in {0}")]
    NonFinite(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
