//! Unsupervised discovery of word boundaries in unsegmented symbol streams.
//!
//! The algorithm is pair-at-a-time agglomeration: count adjacent symbol
//! pairs over the current stream, adopt the pair whose unification saves
//! the most bits, rewrite the stream with a fresh chunk id, and repeat.
//! Longer chunks emerge by composition. Word boundaries are the edges of
//! the top-level tokens left in the final stream.
//!
//! A candidate pair occurring `k` times (non-overlapping) gains
//! `(k-1) * cost(pair)` bits from unifying the copies and pays one lexicon
//! entry: the two constituents, one fresh id, and one separator. Adoption
//! requires the gain to exceed `min_gain`. Ties break to the pair occurring
//! earliest in the stream, then lexically.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::store::CostModel;
use crate::symbol::Symbol;

/// Character handling for text ingestion.
#[derive(Debug, Clone, Copy)]
pub struct CharPolicy {
    /// Lowercase every retained character.
    pub lowercase: bool,
}

impl Default for CharPolicy {
    fn default() -> Self {
        CharPolicy { lowercase: true }
    }
}

/// An unsegmented stream, one symbol per retained character.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub stream: Vec<Symbol>,
    pub provenance: String,
}

/// Strips spaces, digits, and punctuation from raw text and lowers case
/// (under the default policy), keeping one symbol per letter.
pub fn ingest_text(raw: &str, policy: CharPolicy, provenance: &str) -> Result<Corpus> {
    let mut stream = Vec::new();
    for c in raw.chars() {
        if !c.is_alphabetic() {
            continue;
        }
        if policy.lowercase {
            for lc in c.to_lowercase() {
                stream.push(Symbol::from_char(lc)?);
            }
        } else {
            stream.push(Symbol::from_char(c)?);
        }
    }
    if stream.is_empty() {
        return Err(Error::EmptyAfterStrip);
    }
    Ok(Corpus { stream, provenance: provenance.to_string() })
}

/// One adopted unification.
#[derive(Debug, Clone)]
pub struct LexiconEntry {
    /// The fresh chunk id that replaced the pair in the stream.
    pub id: Symbol,
    /// The two constituents that were unified (may themselves be chunk ids).
    pub pair: (Symbol, Symbol),
    /// The chunk spelled out over the base alphabet.
    pub expansion: Vec<Symbol>,
    /// Non-overlapping occurrences replaced at adoption time.
    pub frequency: u32,
    /// The adoption criterion value for this entry.
    pub gain: f64,
    /// True bit saving accumulated up to and including this adoption.
    pub cumulative_saving: f64,
}

/// Chunk entries in adoption order.
#[derive(Debug, Clone, Default)]
pub struct ChunkLexicon {
    pub entries: Vec<LexiconEntry>,
}

impl ChunkLexicon {
    /// Lexicon cost: per entry, the two constituents plus a fresh id and a
    /// separator.
    pub fn bits(&self, cost: &CostModel) -> f64 {
        self.entries
            .iter()
            .map(|e| {
                cost.symbol_cost(e.pair.0.text())
                    + cost.symbol_cost(e.pair.1.text())
                    + 2.0 * cost.fresh_cost()
            })
            .sum()
    }

    /// The base-alphabet expansions adopted, in order.
    pub fn expansions(&self) -> impl Iterator<Item = &[Symbol]> {
        self.entries.iter().map(|e| e.expansion.as_slice())
    }
}

/// The outcome of a segmentation run.
#[derive(Debug, Clone)]
pub struct SegmentationResult {
    /// Cut positions in the original stream, strictly inside `(0, len)`.
    pub boundaries: BTreeSet<usize>,
    pub lexicon: ChunkLexicon,
    /// Original bits minus final stream bits minus lexicon bits.
    pub total_saving: f64,
    /// The rewritten stream of top-level tokens.
    pub final_stream: Vec<Symbol>,
}

/// Adjacent-pair statistics: non-overlapping counts plus first occurrence.
///
/// Counting may be sharded; shard results merge additively, so the outcome
/// is independent of `shards`. Pairs of two equal symbols are corrected
/// from run lengths (a run of length `L` holds `floor(L/2)` non-overlapping
/// copies).
pub fn count_adjacent_pairs(
    stream: &[Symbol],
    shards: usize,
) -> BTreeMap<(String, String), (u32, usize)> {
    let mut raw: BTreeMap<(String, String), (u32, usize)> = BTreeMap::new();
    if stream.len() < 2 {
        return raw;
    }
    let positions = stream.len() - 1;
    let shards = shards.max(1).min(positions);
    let chunk = positions.div_ceil(shards);
    for shard in 0..shards {
        let start = shard * chunk;
        let end = ((shard + 1) * chunk).min(positions);
        for p in start..end {
            let key = (stream[p].text().to_string(), stream[p + 1].text().to_string());
            let entry = raw.entry(key).or_insert((0, p));
            entry.0 += 1;
            entry.1 = entry.1.min(p);
        }
    }
    // Same-symbol pairs: leftmost-greedy non-overlap within each run.
    let mut corrected: BTreeMap<String, u32> = BTreeMap::new();
    let mut i = 0usize;
    while i < stream.len() {
        let mut j = i + 1;
        while j < stream.len() && stream[j].text() == stream[i].text() {
            j += 1;
        }
        let run = j - i;
        if run >= 2 {
            *corrected.entry(stream[i].text().to_string()).or_insert(0) += (run / 2) as u32;
        }
        i = j;
    }
    for (text, k) in corrected {
        if let Some(entry) = raw.get_mut(&(text.clone(), text)) {
            entry.0 = k;
        }
    }
    raw
}

/// Runs pair agglomeration. See the module docs for the procedure.
pub fn discover_chunks(
    corpus: &Corpus,
    cost: &CostModel,
    max_iter: usize,
    min_gain: f64,
) -> SegmentationResult {
    discover_chunks_sharded(corpus, cost, max_iter, min_gain, 1)
}

/// [`discover_chunks`] with explicit shard count for the counting pass.
/// Results are identical for every shard count.
pub fn discover_chunks_sharded(
    corpus: &Corpus,
    cost: &CostModel,
    max_iter: usize,
    min_gain: f64,
    shards: usize,
) -> SegmentationResult {
    let original_bits = cost.sequence_cost(&corpus.stream);
    let mut stream: Vec<Symbol> = corpus.stream.clone();
    let mut lexicon = ChunkLexicon::default();
    let mut expansions: BTreeMap<String, Vec<Symbol>> = BTreeMap::new();

    let id_prefix = fresh_id_prefix(&corpus.stream);

    for _ in 0..max_iter {
        let counts = count_adjacent_pairs(&stream, shards);
        let mut best: Option<(f64, usize, (String, String), u32)> = None;
        for ((a, b), (k, first)) in &counts {
            if *k < 2 {
                continue;
            }
            let pair_bits = cost.symbol_cost(a) + cost.symbol_cost(b);
            let overhead = pair_bits + 2.0 * cost.fresh_cost();
            let gain = (f64::from(*k) - 1.0) * pair_bits - overhead;
            if gain <= min_gain {
                continue;
            }
            let candidate = (gain, *first, (a.clone(), b.clone()), *k);
            let better = match &best {
                None => true,
                Some((bg, bf, bp, _)) => {
                    gain > *bg
                        || (gain == *bg && (*first < *bf || (*first == *bf && candidate.2 < *bp)))
                }
            };
            if better {
                best = Some(candidate);
            }
        }
        let Some((gain, _, (a, b), k)) = best else { break };

        let id = Symbol::new(&format!("{}{}", id_prefix, lexicon.entries.len() + 1))
            .expect("minted id is a valid token");
        let mut next = Vec::with_capacity(stream.len());
        let mut replaced = 0u32;
        let mut i = 0usize;
        while i < stream.len() {
            if i + 1 < stream.len() && stream[i].text() == a && stream[i + 1].text() == b {
                next.push(id.clone());
                replaced += 1;
                i += 2;
            } else {
                next.push(stream[i].clone());
                i += 1;
            }
        }
        debug_assert_eq!(replaced, k);
        stream = next;

        let mut expansion = expand_token(&a, &expansions);
        expansion.extend(expand_token(&b, &expansions));
        expansions.insert(id.text().to_string(), expansion.clone());

        let pair = (
            Symbol::new(&a).expect("existing token"),
            Symbol::new(&b).expect("existing token"),
        );
        lexicon.entries.push(LexiconEntry {
            id,
            pair,
            expansion,
            frequency: replaced,
            gain,
            cumulative_saving: 0.0, // filled below
        });
        let saving_now =
            original_bits - cost.sequence_cost(&stream) - lexicon.bits(cost);
        lexicon.entries.last_mut().expect("just pushed").cumulative_saving = saving_now;
    }

    // Boundaries are the edges of chunk tokens; stray base symbols between
    // chunks do not cut on their own.
    let mut boundaries = BTreeSet::new();
    let mut pos = 0usize;
    for tok in &stream {
        let span = expansions.get(tok.text()).map_or(1, Vec::len);
        let is_chunk = expansions.contains_key(tok.text());
        if is_chunk {
            for edge in [pos, pos + span] {
                if edge > 0 && edge < corpus.stream.len() {
                    boundaries.insert(edge);
                }
            }
        }
        pos += span;
    }

    let total_saving = original_bits - cost.sequence_cost(&stream) - lexicon.bits(cost);
    SegmentationResult { boundaries, lexicon, total_saving, final_stream: stream }
}

fn fresh_id_prefix(stream: &[Symbol]) -> String {
    let mut prefix = String::from("%W");
    loop {
        if !stream.iter().any(|s| s.text().starts_with(prefix.as_str())) {
            return prefix;
        }
        prefix.insert(0, '%');
    }
}

fn expand_token(text: &str, expansions: &BTreeMap<String, Vec<Symbol>>) -> Vec<Symbol> {
    expansions
        .get(text)
        .cloned()
        .unwrap_or_else(|| alloc::vec![Symbol::new(text).expect("existing token")])
}

/// Expands a token stream through the lexicon back to base symbols.
pub fn expand_stream(stream: &[Symbol], lexicon: &ChunkLexicon) -> Vec<Symbol> {
    let mut expansions: BTreeMap<String, Vec<Symbol>> = BTreeMap::new();
    for e in &lexicon.entries {
        expansions.insert(e.id.text().to_string(), e.expansion.clone());
    }
    let mut out = Vec::new();
    for tok in stream {
        out.extend(expand_token(tok.text(), &expansions));
    }
    out
}

/// Boundary precision, recall, and F1 against a gold cut set.
///
/// An empty predicted set scores precision 1 by convention (no false
/// positives), and symmetrically for an empty gold set; F1 is 0 whenever
/// either side has nothing to agree on.
pub fn score_segmentation(
    predicted: &BTreeSet<usize>,
    gold: &BTreeSet<usize>,
    stream_len: usize,
) -> Result<(f64, f64, f64)> {
    for &b in predicted.iter().chain(gold) {
        if b == 0 || b >= stream_len {
            return Err(Error::BoundaryOutOfRange { position: b, len: stream_len });
        }
    }
    let hits = predicted.intersection(gold).count() as f64;
    let precision = if predicted.is_empty() { 1.0 } else { hits / predicted.len() as f64 };
    let recall = if gold.is_empty() { 1.0 } else { hits / gold.len() as f64 };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok((precision, recall, f1))
}

/// Gold boundaries from spaced text: cut positions fall wherever the spaced
/// form separates retained characters.
pub fn gold_boundaries(spaced: &str, policy: CharPolicy) -> Result<(BTreeSet<usize>, usize)> {
    let mut boundaries = BTreeSet::new();
    let mut pos = 0usize;
    let mut pending_break = false;
    for c in spaced.chars() {
        if c.is_alphabetic() {
            if pending_break && pos > 0 {
                boundaries.insert(pos);
            }
            pending_break = false;
            if policy.lowercase {
                pos += c.to_lowercase().count();
            } else {
                pos += 1;
            }
        } else {
            pending_break = true;
        }
    }
    if pos == 0 {
        return Err(Error::EmptyAfterStrip);
    }
    Ok((boundaries, pos))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::CostModel;
    use alloc::vec;

    fn corpus_of(text: &str) -> Corpus {
        ingest_text(text, CharPolicy::default(), "test").unwrap()
    }

    fn uniform_for(c: &Corpus) -> CostModel {
        CostModel::uniform_over(c.stream.iter().map(|s| s.text().into()))
    }

    #[test]
    fn ingest_strips_and_lowercases() {
        let c = corpus_of("On our website!");
        let texts: Vec<&str> = c.stream.iter().map(|s| s.text()).collect();
        assert_eq!(texts, vec!["o", "n", "o", "u", "r", "w", "e", "b", "s", "i", "t", "e"]);
    }

    #[test]
    fn ingest_rejects_all_punctuation() {
        assert_eq!(
            ingest_text("42 !?", CharPolicy::default(), "x").unwrap_err(),
            Error::EmptyAfterStrip
        );
    }

    #[test]
    fn mixed_case_equals_lowercase_twin() {
        let a = corpus_of("TheCat");
        let b = corpus_of("thecat");
        assert_eq!(a.stream, b.stream);
    }

    #[test]
    fn distinct_symbols_discover_nothing() {
        let c = corpus_of("abcdefg");
        let cost = uniform_for(&c);
        let r = discover_chunks(&c, &cost, 50, 0.0);
        assert!(r.lexicon.entries.is_empty());
        assert!(r.boundaries.is_empty());
        assert_eq!(r.total_saving, 0.0);
    }

    #[test]
    fn pair_counts_are_shard_independent() {
        let c = corpus_of("abababaabbbaba");
        for shards in [1usize, 2, 3, 5, 8] {
            assert_eq!(count_adjacent_pairs(&c.stream, shards), count_adjacent_pairs(&c.stream, 1));
        }
    }

    #[test]
    fn same_symbol_runs_count_non_overlapping() {
        let c = corpus_of("aaaa b aaa");
        let counts = count_adjacent_pairs(&c.stream, 1);
        // "aaaa" holds 2, "aaa" holds 1.
        assert_eq!(counts[&("a".to_string(), "a".to_string())].0, 3);
    }

    #[test]
    fn segmentation_is_lossless() {
        let c = corpus_of(&"the cat ".repeat(12));
        let cost = uniform_for(&c);
        let r = discover_chunks(&c, &cost, 100, 0.0);
        assert_eq!(expand_stream(&r.final_stream, &r.lexicon), c.stream);
    }

    #[test]
    fn gain_accounting_recomputes() {
        let c = corpus_of(&"ask the cat ".repeat(9));
        let cost = uniform_for(&c);
        let r = discover_chunks(&c, &cost, 100, 0.0);
        let recomputed = cost.sequence_cost(&c.stream)
            - cost.sequence_cost(&r.final_stream)
            - r.lexicon.bits(&cost);
        assert!((r.total_saving - recomputed).abs() < 1e-9);
        for e in &r.lexicon.entries {
            assert!(e.gain > 0.0);
        }
    }

    #[test]
    fn determinism_same_inputs_same_outputs() {
        let c = corpus_of(&"wild west wind ".repeat(8));
        let cost = uniform_for(&c);
        let a = discover_chunks(&c, &cost, 100, 0.0);
        let b = discover_chunks(&c, &cost, 100, 0.0);
        assert_eq!(a.boundaries, b.boundaries);
        assert_eq!(a.final_stream, b.final_stream);
        let d = discover_chunks_sharded(&c, &cost, 100, 0.0, 4);
        assert_eq!(a.boundaries, d.boundaries);
        assert_eq!(a.final_stream, d.final_stream);
    }

    #[test]
    fn doubling_never_decreases_saving() {
        let text = "the cat sat on the mat ".repeat(6);
        let single = corpus_of(&text);
        let double = corpus_of(&text.repeat(2));
        let cost = uniform_for(&double);
        let s1 = discover_chunks(&single, &cost, 200, 0.0).total_saving;
        let s2 = discover_chunks(&double, &cost, 200, 0.0).total_saving;
        assert!(s2 >= s1, "saving fell from {s1} to {s2} on doubling");
    }

    #[test]
    fn scoring_conventions() {
        let gold: BTreeSet<usize> = vec![3, 6].into_iter().collect();
        let empty = BTreeSet::new();
        assert_eq!(score_segmentation(&empty, &gold, 9).unwrap(), (1.0, 0.0, 0.0));
        assert_eq!(score_segmentation(&gold, &gold, 9).unwrap(), (1.0, 1.0, 1.0));
        let pred: BTreeSet<usize> = vec![3, 5].into_iter().collect();
        let (p, r, f1) = score_segmentation(&pred, &gold, 9).unwrap();
        assert_eq!((p, r), (0.5, 0.5));
        assert!((f1 - 0.5).abs() < 1e-12);
        assert!(score_segmentation(&vec![9].into_iter().collect(), &gold, 9).is_err());
    }

    #[test]
    fn gold_boundaries_from_spaced_text() {
        let (gold, len) = gold_boundaries("the cat, sat", CharPolicy::default()).unwrap();
        assert_eq!(len, 9);
        assert_eq!(gold, vec![3, 6].into_iter().collect());
    }
}
