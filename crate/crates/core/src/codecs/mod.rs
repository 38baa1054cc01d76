//! Lossless codecs built on pattern unification.
//!
//! Three ways of replacing repeated patterns with one copy:
//!
//! - **chunking with codes** ([`chunk`]): a repeated subsequence is stored
//!   once in a dictionary under a fresh short code, and every occurrence is
//!   replaced by the code;
//! - **schema plus correction** ([`spc`]): a template with slots is stored
//!   once, and an instance is encoded as the template name plus the choice
//!   made at each slot;
//! - **run-length coding** ([`rle`]): consecutive copies of a unit collapse
//!   to one copy plus a repetition count.
//!
//! [`unary`] removes the redundancy of unary tallies by rewriting the count
//! in a higher base — the same idea applied to numerals.

pub mod chunk;
pub mod rle;
pub mod spc;
pub mod stream;
pub mod unary;

pub use chunk::{chunk_decode, chunk_encode, ChunkDictionary};
pub use rle::{rle_decode, rle_encode, RunLengthStream};
pub use spc::{spc_decode, spc_encode, Schema, SchemaElement, SlotChoice};
pub use stream::{EncodedStream, Payload};
pub use unary::unary_to_base;
