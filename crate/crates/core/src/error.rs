use thiserror::Error;

/// Errors raised by parsing, validation and analysis.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("automaton must have at least one state")]
    NoStates,

    #[error("alphabet is empty")]
    EmptyAlphabet,

    #[error("duplicate letter `{0}`")]
    DuplicateLetter(String),

    #[error("invalid letter name `{0}`")]
    InvalidLetter(String),

    #[error("missing row for letter `{0}`")]
    MissingRow(String),

    #[error("row for unknown letter `{0}`")]
    UnknownLetter(String),

    #[error("row for letter `{letter}` has {found} entries, expected {expected}")]
    RowLength {
        letter: String,
        found: usize,
        expected: usize,
    },

    #[error("state out of range: {value} (state count {n}) in {context}")]
    StateOutOfRange {
        value: usize,
        n: usize,
        context: String,
    },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("complement is defined only for rank 2, got rank {0}")]
    RankNotTwo(usize),

    #[error("letter index {index} out of range for alphabet of size {size}")]
    LetterOutOfRange { index: usize, size: usize },

    #[error("monoid exceeds budget of {0} elements")]
    BudgetExceeded(usize),

    #[error("not a CSFA: {0}")]
    NotCsfa(String),

    #[error("no generator induces a circular permutation")]
    NoCircularLetter,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("theorem falsified: {0}")]
    Falsified(String),

    #[error("invalid family request: {0}")]
    InvalidFamily(String),

    #[error("sanity gate failed: {0}")]
    SanityGate(String),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
