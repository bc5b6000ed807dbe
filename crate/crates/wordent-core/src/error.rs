use alloc::string::String;
use core::fmt;

/// Errors shared across the crate.
///
/// Budget-style failures (`Budget`, `PrecisionExhausted`) are recoverable:
/// callers may retry with larger limits. The remaining variants indicate
/// invalid inputs or mathematically degenerate requests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Alphabet size outside 2..=36, or a letter not below the size.
    BadAlphabet(String),
    /// Malformed expression or bound description.
    Parse(String),
    /// Evaluation left the function's domain (negative value, log of
    /// a non-positive number, division by zero, ...).
    Domain(String),
    /// A ceiling/floor/comparison stayed undecidable at the maximum
    /// working precision.
    PrecisionExhausted(String),
    /// A configured node/iteration/length budget was exceeded.
    Budget(String),
    /// Empty language or empty graph after pruning.
    EmptyLanguage,
    /// Operation requires an irreducible (strongly connected) system.
    Reducible,
    /// No sign change on the bisection interval.
    NoSignChange,
    /// A degenerate interval cover with no Moran root.
    DegenerateCover(String),
    /// Certificate search or verification failed; the payload says why.
    Certificate(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::BadAlphabet(s) => write!(f, "bad alphabet: {s}"),
            Error::Parse(s) => write!(f, "parse error: {s}"),
            Error::Domain(s) => write!(f, "domain error: {s}"),
            Error::PrecisionExhausted(s) => {
                write!(f, "undecidable at maximum precision: {s}")
            }
            Error::Budget(s) => write!(f, "budget exceeded: {s}"),
            Error::EmptyLanguage => write!(f, "empty language"),
            Error::Reducible => write!(f, "graph is not strongly connected"),
            Error::NoSignChange => write!(f, "no sign change on interval"),
            Error::DegenerateCover(s) => write!(f, "degenerate cover: {s}"),
            Error::Certificate(s) => write!(f, "certificate failure: {s}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
