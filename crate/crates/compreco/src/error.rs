use std::fmt;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Alphabet construction rejected the symbol list.
    InvalidAlphabet(String),
    /// A string contained a character outside its alphabet.
    InvalidSymbol(char),
    /// A multiset failed structural validation; the message names the first
    /// violated condition.
    InvalidMultiset(String),
    /// Malformed text in a multiset or polynomial rendering.
    Parse(String),
    /// An index argument fell outside the valid range.
    OutOfRange(String),
    /// The operation is defined for two-symbol alphabets only.
    NonBinaryAlphabet,
    /// Two operands were built over different alphabets.
    AlphabetMismatch,
    /// Two operands that must have equal length did not.
    LengthMismatch { left: usize, right: usize },
    /// The polynomial is not the generating polynomial of any string.
    NotGenerating,
    /// The search finished without producing a single string.
    NoSolution,
    /// Construction parts were required to share one composition but did not.
    CompositionMismatch,
    /// The separator string must hold exactly one symbol between consecutive parts.
    SeparatorCount { parts: usize, separators: usize },
    /// The requested enumeration would exceed the configured cap.
    CapExceeded { required: u128, cap: u128 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidAlphabet(msg) => write!(f, "invalid alphabet: {msg}"),
            Error::InvalidSymbol(c) => write!(f, "symbol {c:?} is not in the alphabet"),
            Error::InvalidMultiset(msg) => write!(f, "invalid composition multiset: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::OutOfRange(msg) => write!(f, "out of range: {msg}"),
            Error::NonBinaryAlphabet => write!(f, "operation requires a two-symbol alphabet"),
            Error::AlphabetMismatch => write!(f, "operands use different alphabets"),
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::NotGenerating => write!(f, "polynomial does not generate any string"),
            Error::NoSolution => write!(f, "no string reproduces the multiset within budget"),
            Error::CompositionMismatch => write!(f, "parts do not share a single composition"),
            Error::SeparatorCount { parts, separators } => write!(
                f,
                "{parts} parts need {} separators, got {separators}",
                parts.saturating_sub(1)
            ),
            Error::CapExceeded { required, cap } => {
                write!(f, "enumeration of {required} items exceeds cap {cap}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
