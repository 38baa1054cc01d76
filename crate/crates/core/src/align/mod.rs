//! Multiple alignment by compression: parsing, recognition, encoding, and
//! decompression by compression, all driven by one staged beam search that
//! maximises the compression difference.

pub mod multi;
pub mod pairwise;
pub mod probability;
pub mod render;
pub mod search;

pub use multi::{
    derive_encoding, score_alignment, AlignmentScore, Cell, Encoding, MultipleAlignment,
};
pub use pairwise::{align_pairwise, PairwiseAlignment};
pub use probability::{alignment_probabilities, probabilities_from_cds};
pub use render::{render_alignment, structured_record};
pub use search::{
    build_alignments, build_alignments_with, decode_encoding, decode_encoding_with,
    BuiltAlignment, DecodeOutput, SearchParams, SerialExecutor, StageExecutor,
};
