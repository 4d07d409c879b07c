use std::fmt;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the domain of the function.
    Domain(String),
    /// Genuine pole of a gamma ratio.
    Pole(String),
    /// Series or integral diverges for these parameters.
    Divergence(String),
    /// Iterative method failed to converge within its budget.
    Convergence(String),
    /// Index outside a precomputed table.
    Range(String),
    /// Moment-existence constraint violated.
    Constraint(String),
    /// Array shapes disagree.
    Shape(String),
    /// Data-collection loop exceeded its frame cap.
    IterationCap(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "DomainError: {m}"),
            Error::Pole(m) => write!(f, "PoleError: {m}"),
            Error::Divergence(m) => write!(f, "DivergenceError: {m}"),
            Error::Convergence(m) => write!(f, "ConvergenceError: {m}"),
            Error::Range(m) => write!(f, "RangeError: {m}"),
            Error::Constraint(m) => write!(f, "ConstraintError: {m}"),
            Error::Shape(m) => write!(f, "ShapeError: {m}"),
            Error::IterationCap(m) => write!(f, "IterationCapError: {m}"),
        }
    }
}

impl std::error::Error for Error {}

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$kind(format!($($arg)*)))
    };
}
pub(crate) use bail;
