use thiserror::Error;

/// Errors produced by the shaping codec and the experiment harnesses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet size {0} outside supported range 2..=36")]
    InvalidAlphabet(usize),

    #[error("symbol {symbol} at position {position} is not below alphabet size {h}")]
    InvalidSymbol {
        symbol: u8,
        position: usize,
        h: usize,
    },

    #[error("character {ch:?} at column {column} is not a valid symbol for alphabet size {h}")]
    InvalidCharacter { ch: char, column: usize, h: usize },

    #[error("expected length {expected}, got {actual}")]
    InvalidLength { expected: usize, actual: usize },

    #[error("empty sequence or composition")]
    Empty,

    #[error("{0}")]
    Domain(String),

    #[error("{what} needs {required}, over the budget of {budget}")]
    BudgetExceeded {
        what: &'static str,
        required: String,
        budget: u64,
    },

    #[error("sequence is not a member of the shaped set")]
    NotACodeword,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
