//! Error type shared across the library.

use alloc::string::String;
use core::fmt;

/// Errors raised by pattern construction, codecs, alignment, and parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A symbol token was empty or contained whitespace.
    BadSymbol { text: String },
    /// A pattern had no symbols. Carries the index of the offending pattern.
    EmptyPattern { index: usize },
    /// A pattern's frequency was zero. Carries the index of the offending pattern.
    ZeroFrequency { index: usize },
    /// Two patterns in one store are identical. Carries the duplicate's index.
    DuplicatePattern { index: usize },
    /// A symbol was looked up that is not in the store alphabet.
    UnknownSymbol { text: String },
    /// A code symbol in a chunk-coded residual has no dictionary entry.
    UnknownCode { code: String },
    /// A sequence does not match a schema. Carries the first divergent position.
    SchemaMismatch { position: usize },
    /// A sequence matches a schema in more than one way. Carries the slot ids involved.
    AmbiguousMatch { slots: alloc::vec::Vec<String> },
    /// A slot choice referenced a slot id the schema does not have.
    UnknownSlot { slot: String },
    /// A slot choice index was out of range for the slot's fillers.
    FillerOutOfRange { slot: String, index: usize },
    /// Run-length stream violated an invariant (empty, zero count, mergeable runs).
    BadRunStream { reason: String },
    /// unary_to_base was given a mixed-symbol sequence.
    MixedUnarySymbols { first: String, other: String },
    /// unary_to_base was given a base below 2 or above 36.
    BadBase { base: u32 },
    /// No multiple alignment could be built for a code, so nothing decodes.
    NoDecode,
    /// Text input was empty after applying the ingestion policy.
    EmptyAfterStrip,
    /// A boundary position fell outside the valid open interval (0, len).
    BoundaryOutOfRange { position: usize, len: usize },
    /// A text format could not be parsed. Carries the 1-based line number.
    Parse { line: usize, reason: String },
    /// A parameter was outside its documented range.
    BadParameter { what: String },
    /// A hand-built alignment violated a structural invariant.
    BadAlignment { reason: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::BadSymbol { text } => write!(f, "bad symbol token: {text:?}"),
            Error::EmptyPattern { index } => write!(f, "pattern {index} is empty"),
            Error::ZeroFrequency { index } => write!(f, "pattern {index} has frequency 0"),
            Error::DuplicatePattern { index } => write!(f, "pattern {index} duplicates an earlier pattern"),
            Error::UnknownSymbol { text } => write!(f, "symbol {text:?} is not in the store alphabet"),
            Error::UnknownCode { code } => write!(f, "code {code:?} has no dictionary entry"),
            Error::SchemaMismatch { position } => {
                write!(f, "sequence diverges from schema at position {position}")
            }
            Error::AmbiguousMatch { slots } => {
                write!(f, "sequence matches schema ambiguously at slots {}", slots.join(", "))
            }
            Error::UnknownSlot { slot } => write!(f, "schema has no slot {slot:?}"),
            Error::FillerOutOfRange { slot, index } => {
                write!(f, "slot {slot:?} has no filler {index}")
            }
            Error::BadRunStream { reason } => write!(f, "bad run-length stream: {reason}"),
            Error::MixedUnarySymbols { first, other } => {
                write!(f, "unary sequence mixes {first:?} and {other:?}")
            }
            Error::BadBase { base } => write!(f, "base {base} out of range 2..=36"),
            Error::NoDecode => write!(f, "no alignment found; nothing decodes"),
            Error::EmptyAfterStrip => write!(f, "input empty after stripping non-letters"),
            Error::BoundaryOutOfRange { position, len } => {
                write!(f, "boundary {position} outside (0, {len})")
            }
            Error::Parse { line, reason } => write!(f, "parse error at line {line}: {reason}"),
            Error::BadParameter { what } => write!(f, "bad parameter: {what}"),
            Error::BadAlignment { reason } => write!(f, "bad alignment: {reason}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
