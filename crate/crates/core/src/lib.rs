//! Information compression by the matching and unification of patterns.
//!
//! Everything here works on one representation: ordered sequences of atomic
//! symbols. On top of that the crate provides
//!
//! - three lossless codecs built on pattern unification — chunking with
//!   codes, schema plus correction, and run-length coding ([`codecs`]);
//! - a multiple-alignment engine that parses, recognises, encodes, and
//!   decodes by maximising compression ([`align`]);
//! - unsupervised word-boundary discovery in unsegmented character streams
//!   ([`segment`]).
//!
//! The crate is `no_std` (with `alloc`); file handling, the command-line
//! front end, and threaded search live in the companion `icmup-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod align;
pub mod codecs;
pub mod error;
pub mod formats;
pub mod pattern;
pub mod segment;
pub mod store;
pub mod symbol;

pub use error::{Error, Result};
pub use pattern::{Pattern, PatternId};
pub use store::{build_store, CostMode, CostModel, PatternStore};
pub use symbol::{join_symbols, parse_symbols, Role, Symbol};
