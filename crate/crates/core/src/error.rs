use thiserror::Error;

/// Errors raised by the library. Line numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: malformed entry ({reason})")]
    MalformedLine { line: usize, reason: String },

    #[error("line {line}: count must be positive")]
    NonPositiveCount { line: usize },

    #[error("line {line}: duplicate word {word:?}")]
    DuplicateWord { line: usize, word: String },

    #[error("dictionary {name:?} has no entries")]
    EmptyDictionary { name: String },

    #[error("empty input")]
    EmptyInput,

    #[error("invalid word {0:?}: must be non-empty and free of tab and newline characters")]
    InvalidWord(String),

    #[error("duplicate dictionary name {0:?}")]
    DuplicateDictionaryName(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("weights are not on the probability simplex: {0}")]
    NotOnSimplex(String),

    #[error("non-finite value in input")]
    NonFinite,

    #[error("invalid guess history: {0}")]
    InvalidHistory(String),

    #[error("word {0:?} has already been guessed")]
    DuplicateGuess(String),

    #[error("{successes} successes exceed the {remaining} uncompromised users")]
    SuccessExceedsPopulation { successes: u64, remaining: u64 },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid descent configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
