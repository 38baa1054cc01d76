//! Chunking with codes: repeated subsequences are stored once in a
//! dictionary under a fresh short code, and every occurrence in the text is
//! replaced by that code.
//!
//! Candidate selection is greedy: at each round the repeated subsequence
//! with the greatest immediate bit saving is adopted, ties broken by longer
//! chunk and then leftmost first occurrence, until no candidate saves bits.
//! Occurrences are counted and replaced leftmost-first without overlap.
//! Codes minted in later rounds may appear inside later chunks, so decoding
//! expands dictionary entries last to first.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::codecs::stream::{EncodedStream, Payload};
use crate::error::{Error, Result};
use crate::store::CostModel;
use crate::symbol::Symbol;

/// Ordered dictionary of `(code, chunk)` entries.
///
/// Codes share a prefix chosen to be absent from the source alphabet, so a
/// decoder can tell codes from source symbols. Entry order is adoption
/// order: a chunk may contain codes of earlier entries only.
#[derive(Debug, Clone, PartialEq)]
pub struct ChunkDictionary {
    code_prefix: String,
    entries: Vec<(Symbol, Vec<Symbol>)>,
}

impl ChunkDictionary {
    /// Validates and builds a dictionary from parts (used when reading the
    /// serialized form; the encoder builds its dictionary internally).
    pub fn new(code_prefix: String, entries: Vec<(Symbol, Vec<Symbol>)>) -> Result<Self> {
        let mut codes: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, (code, chunk)) in entries.iter().enumerate() {
            if !code.text().starts_with(code_prefix.as_str()) {
                return Err(Error::UnknownCode { code: code.text().to_string() });
            }
            if codes.insert(code.text(), i).is_some() {
                return Err(Error::UnknownCode { code: code.text().to_string() });
            }
            if chunk.len() < 2 {
                return Err(Error::BadParameter {
                    what: format!("chunk for {} shorter than 2 symbols", code.text()),
                });
            }
        }
        // A chunk may reference earlier codes only.
        for (i, (_, chunk)) in entries.iter().enumerate() {
            for sym in chunk {
                if let Some(&j) = codes.get(sym.text()) {
                    if j >= i {
                        return Err(Error::BadParameter {
                            what: format!("chunk {i} references code {} of entry {j}", sym.text()),
                        });
                    }
                }
            }
        }
        Ok(ChunkDictionary { code_prefix, entries })
    }

    pub fn code_prefix(&self) -> &str {
        &self.code_prefix
    }

    pub fn entries(&self) -> &[(Symbol, Vec<Symbol>)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn looks_like_code(&self, text: &str) -> bool {
        text.starts_with(self.code_prefix.as_str())
    }
}

/// Picks a code prefix no source symbol starts with: `%C`, `%%C`, ...
fn fresh_code_prefix(seq: &[Symbol]) -> String {
    let mut prefix = String::from("%C");
    loop {
        if !seq.iter().any(|s| s.text().starts_with(prefix.as_str())) {
            return prefix;
        }
        prefix.insert(0, '%');
    }
}

struct Candidate {
    chunk: Vec<Symbol>,
    /// Leftmost-greedy non-overlapping occurrence starts.
    starts: Vec<usize>,
    saving: f64,
    first: usize,
}

/// All repeated subsequences worth considering, with their bit savings.
///
/// Exposed so tests can compare the greedy choice against an exhaustive
/// enumeration on concrete documents.
pub fn chunk_candidates(
    seq: &[Symbol],
    min_len: usize,
    min_occurrences: usize,
    cost: &CostModel,
) -> Vec<(Vec<Symbol>, usize, f64)> {
    let mut out = Vec::new();
    let n = seq.len();
    let max_len = n / min_occurrences.max(1);
    for len in min_len..=max_len.max(0) {
        if len > n {
            break;
        }
        // Group identical windows by first occurrence.
        let mut groups: BTreeMap<Vec<&str>, Vec<usize>> = BTreeMap::new();
        for start in 0..=(n - len) {
            let key: Vec<&str> = seq[start..start + len].iter().map(|s| s.text()).collect();
            groups.entry(key).or_default().push(start);
        }
        for (_, positions) in groups {
            let starts = greedy_non_overlapping(&positions, len);
            if starts.len() < min_occurrences {
                continue;
            }
            let chunk: Vec<Symbol> = seq[starts[0]..starts[0] + len].to_vec();
            let saving = chunk_saving(&chunk, starts.len(), cost);
            out.push((chunk, starts.len(), saving));
        }
    }
    out
}

fn greedy_non_overlapping(positions: &[usize], len: usize) -> Vec<usize> {
    let mut starts = Vec::new();
    let mut next_free = 0usize;
    for &p in positions {
        if p >= next_free {
            starts.push(p);
            next_free = p + len;
        }
    }
    starts
}

/// Bit saving from adopting `chunk` at `k` occurrences: the occurrences are
/// replaced by a fresh code, and one dictionary entry (code + chunk + one
/// separator) is added.
fn chunk_saving(chunk: &[Symbol], k: usize, cost: &CostModel) -> f64 {
    let chunk_bits = cost.sequence_cost(chunk);
    let code_bits = cost.fresh_cost();
    (k as f64) * chunk_bits - (k as f64) * code_bits - (chunk_bits + 2.0 * code_bits)
}

fn best_candidate(
    seq: &[Symbol],
    min_len: usize,
    min_occurrences: usize,
    cost: &CostModel,
) -> Option<Candidate> {
    let n = seq.len();
    let max_len = n / min_occurrences.max(1);
    let mut best: Option<Candidate> = None;
    for len in min_len..=max_len.max(0) {
        if len > n {
            break;
        }
        let mut groups: BTreeMap<Vec<&str>, Vec<usize>> = BTreeMap::new();
        for start in 0..=(n - len) {
            let key: Vec<&str> = seq[start..start + len].iter().map(|s| s.text()).collect();
            groups.entry(key).or_default().push(start);
        }
        for (_, positions) in groups {
            let starts = greedy_non_overlapping(&positions, len);
            if starts.len() < min_occurrences {
                continue;
            }
            let chunk: Vec<Symbol> = seq[starts[0]..starts[0] + len].to_vec();
            let saving = chunk_saving(&chunk, starts.len(), cost);
            if saving <= 0.0 {
                continue;
            }
            let first = starts[0];
            let better = match &best {
                None => true,
                Some(b) => {
                    saving > b.saving
                        || (saving == b.saving
                            && (chunk.len() > b.chunk.len()
                                || (chunk.len() == b.chunk.len() && first < b.first)))
                }
            };
            if better {
                best = Some(Candidate { chunk, starts, saving, first });
            }
        }
    }
    best
}

/// Greedy iterated chunking. See the module docs for the procedure.
pub fn chunk_encode(
    seq: &[Symbol],
    min_len: usize,
    min_occurrences: usize,
    cost: &CostModel,
) -> Result<EncodedStream> {
    if seq.is_empty() {
        return Err(Error::BadParameter { what: "chunk_encode: empty sequence".into() });
    }
    if min_len < 2 {
        return Err(Error::BadParameter { what: "chunk_encode: min_len must be >= 2".into() });
    }
    if min_occurrences < 2 {
        return Err(Error::BadParameter {
            what: "chunk_encode: min_occurrences must be >= 2".into(),
        });
    }

    let original_bits = cost.sequence_cost(seq);
    let code_prefix = fresh_code_prefix(seq);
    let mut residual: Vec<Symbol> = seq.to_vec();
    let mut entries: Vec<(Symbol, Vec<Symbol>)> = Vec::new();

    while let Some(cand) = best_candidate(&residual, min_len, min_occurrences, cost) {
        let code = Symbol::new(&format!("{}{}", code_prefix, entries.len() + 1))
            .expect("minted code is a valid token");
        let mut next = Vec::with_capacity(residual.len());
        let mut i = 0usize;
        let mut starts = cand.starts.iter().peekable();
        while i < residual.len() {
            if starts.peek() == Some(&&i) {
                next.push(code.clone());
                i += cand.chunk.len();
                starts.next();
            } else {
                next.push(residual[i].clone());
                i += 1;
            }
        }
        residual = next;
        entries.push((code, cand.chunk));
    }

    let dictionary = ChunkDictionary { code_prefix, entries };
    let encoded_bits = chunk_encoded_bits(&dictionary, &residual, cost);
    Ok(EncodedStream {
        payload: Payload::Chunk { dictionary, residual },
        original_bits,
        encoded_bits,
    })
}

/// Dictionary bits (code + chunk + one separator per entry) plus residual bits.
pub fn chunk_encoded_bits(dict: &ChunkDictionary, residual: &[Symbol], cost: &CostModel) -> f64 {
    let dict_bits: f64 = dict
        .entries
        .iter()
        .map(|(_, chunk)| cost.sequence_cost(chunk) + 2.0 * cost.fresh_cost())
        .sum();
    dict_bits + cost.sequence_cost(residual)
}

/// Expands a chunk-coded payload back to the original sequence.
pub fn chunk_decode(dict: &ChunkDictionary, residual: &[Symbol]) -> Result<Vec<Symbol>> {
    for sym in residual {
        if dict.looks_like_code(sym.text())
            && !dict.entries.iter().any(|(c, _)| c.text() == sym.text())
        {
            return Err(Error::UnknownCode { code: sym.text().to_string() });
        }
    }
    let mut seq: Vec<Symbol> = residual.to_vec();
    for (code, chunk) in dict.entries.iter().rev() {
        let mut next = Vec::with_capacity(seq.len());
        for sym in &seq {
            if sym.text() == code.text() {
                next.extend(chunk.iter().cloned());
            } else {
                next.push(sym.clone());
            }
        }
        seq = next;
    }
    Ok(seq)
}
