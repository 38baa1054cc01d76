//! The measured output of a codec run.

use alloc::vec::Vec;

use crate::codecs::chunk::ChunkDictionary;
use crate::codecs::rle::RunLengthStream;
use crate::codecs::spc::SlotChoice;
use crate::symbol::Symbol;

/// Codec-specific encoded representation.
#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    /// Dictionary plus the residual code sequence.
    Chunk { dictionary: ChunkDictionary, residual: Vec<Symbol> },
    /// Schema name plus the slot choices.
    Spc { schema_name: Symbol, choices: Vec<SlotChoice> },
    /// The run list.
    Rle { runs: RunLengthStream },
}

impl Payload {
    pub fn codec_name(&self) -> &'static str {
        match self {
            Payload::Chunk { .. } => "chunk",
            Payload::Spc { .. } => "spc",
            Payload::Rle { .. } => "rle",
        }
    }
}

/// Encoded payload with its bit sizes, both measured under the same cost
/// model extended with any fresh code symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedStream {
    pub payload: Payload,
    pub original_bits: f64,
    pub encoded_bits: f64,
}

impl EncodedStream {
    /// encoded/original bit ratio; 1.0 for an empty original.
    pub fn ratio(&self) -> f64 {
        if self.original_bits == 0.0 {
            1.0
        } else {
            self.encoded_bits / self.original_bits
        }
    }
}
