//! Line-oriented text formats. Everything here maps between strings and
//! library values; reading and writing files is the CLI crate's job.
//!
//! # Pattern files
//!
//! One pattern per line: an optional `frequency<TAB>` prefix, then
//! whitespace-separated symbol texts. Lines starting with `%` are comments,
//! blank lines are skipped. A missing frequency defaults to 1.
//!
//! ```text
//! % toy grammar
//! NP 2 A #A N #N #NP
//! 3<TAB>D 11 a #D
//! ```
//!
//! # Store serialization
//!
//! A header `%store <mode> <alphabet-size>` followed by `freq<TAB>symbols`
//! pattern lines. The header doubles as a comment, so a serialized store is
//! also readable as a plain pattern file.
//!
//! # Schema files
//!
//! A `schema <Name>` line, then one element per line: `fixed <symbol>` or
//! `slot <id> <filler> | <filler> | ...` where each filler is a symbol
//! sequence.
//!
//! # Sequence files
//!
//! Whitespace-separated symbols; `%` comments and blank lines skipped; all
//! remaining lines concatenate into one sequence.
//!
//! # Encoded streams
//!
//! A `%icmup-stream <codec>` header, `original-bits`/`encoded-bits` lines
//! (full-precision, round-trip exact), then the codec section: a `prefix`
//! line, dictionary `code` lines and one `residual` line for chunking;
//! `run` lines for run-length coding; or a `schema` line plus `choice`
//! lines for schema-plus-correction. Output is byte-identical for identical
//! inputs.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::codecs::{
    ChunkDictionary, EncodedStream, Payload, RunLengthStream, Schema, SchemaElement, SlotChoice,
};
use crate::error::{Error, Result};
use crate::store::{build_store, CostMode, PatternStore};
use crate::symbol::{join_symbols, parse_symbols, Symbol};

/// A pattern-file line: symbols plus frequency.
pub type PatternRow = (Vec<Symbol>, u32);

fn is_comment(line: &str) -> bool {
    line.trim_start().starts_with('%')
}

fn parse_err(line_no: usize, reason: impl core::fmt::Display) -> Error {
    Error::Parse { line: line_no, reason: reason.to_string() }
}

/// Parses pattern-file text into `(symbols, frequency)` rows.
pub fn parse_pattern_text(text: &str) -> Result<Vec<PatternRow>> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        if raw.trim().is_empty() || is_comment(raw) {
            continue;
        }
        let (freq, rest) = match raw.split_once('\t') {
            Some((prefix, rest))
                if !prefix.is_empty() && prefix.chars().all(|c| c.is_ascii_digit()) =>
            {
                let f: u32 = prefix
                    .parse()
                    .map_err(|e| parse_err(line_no, format!("bad frequency: {e}")))?;
                (f, rest)
            }
            _ => (1, raw),
        };
        if freq == 0 {
            return Err(parse_err(line_no, "frequency must be >= 1"));
        }
        let symbols =
            parse_symbols(rest).map_err(|e| parse_err(line_no, format!("bad symbol: {e}")))?;
        if symbols.is_empty() {
            return Err(parse_err(line_no, "no symbols on pattern line"));
        }
        rows.push((symbols, freq));
    }
    Ok(rows)
}

/// Parses pattern-file text straight into a store.
pub fn parse_store_patterns(text: &str, mode: CostMode) -> Result<PatternStore> {
    build_store(parse_pattern_text(text)?, mode)
}

/// Serializes a store: header plus one pattern line per stored pattern.
pub fn serialize_store(store: &PatternStore) -> String {
    let mut out = format!(
        "%store {} {}\n",
        store.cost_model().mode().name(),
        store.alphabet().len()
    );
    for p in store.patterns() {
        out.push_str(&format!("{}\t{}\n", p.frequency(), join_symbols(p.symbols())));
    }
    out
}

/// Reads a serialized store back, checking the header against the rebuilt
/// alphabet.
pub fn parse_store(text: &str) -> Result<PatternStore> {
    let header = text
        .lines()
        .enumerate()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| parse_err(1, "empty store"))?;
    let (header_line_no, header_text) = (header.0 + 1, header.1.trim());
    let mut parts = header_text.split_whitespace();
    if parts.next() != Some("%store") {
        return Err(parse_err(header_line_no, "expected %store header"));
    }
    let mode = parts
        .next()
        .and_then(CostMode::parse)
        .ok_or_else(|| parse_err(header_line_no, "bad cost mode"))?;
    let declared: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| parse_err(header_line_no, "bad alphabet size"))?;
    let store = parse_store_patterns(text, mode)?;
    if store.alphabet().len() != declared {
        return Err(parse_err(
            header_line_no,
            format!("alphabet size {} != declared {}", store.alphabet().len(), declared),
        ));
    }
    Ok(store)
}

/// Parses a whitespace-separated symbol sequence with `%` comments.
pub fn parse_sequence_text(text: &str) -> Result<Vec<Symbol>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() || is_comment(raw) {
            continue;
        }
        let syms = parse_symbols(raw).map_err(|e| parse_err(i + 1, format!("bad symbol: {e}")))?;
        out.extend(syms);
    }
    Ok(out)
}

/// Serializes a schema.
pub fn serialize_schema(schema: &Schema) -> String {
    let mut out = format!("schema {}\n", schema.name());
    for el in schema.elements() {
        match el {
            SchemaElement::Fixed(sym) => out.push_str(&format!("fixed {sym}\n")),
            SchemaElement::Slot { id, fillers } => {
                let body: Vec<String> = fillers.iter().map(|f| join_symbols(f)).collect();
                out.push_str(&format!("slot {id} {}\n", body.join(" | ")));
            }
        }
    }
    out
}

/// Parses a schema file.
pub fn parse_schema(text: &str) -> Result<Schema> {
    let mut name: Option<Symbol> = None;
    let mut elements = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || is_comment(line) {
            continue;
        }
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match head {
            "schema" => {
                if name.is_some() {
                    return Err(parse_err(line_no, "duplicate schema line"));
                }
                name = Some(
                    Symbol::new(rest.trim())
                        .map_err(|e| parse_err(line_no, format!("bad schema name: {e}")))?,
                );
            }
            "fixed" => {
                let sym = Symbol::new(rest.trim())
                    .map_err(|e| parse_err(line_no, format!("bad symbol: {e}")))?;
                elements.push(SchemaElement::Fixed(sym));
            }
            "slot" => {
                let (id, body) = rest
                    .trim()
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| parse_err(line_no, "slot needs an id and fillers"))?;
                let mut fillers = Vec::new();
                for alt in body.split('|') {
                    let f = parse_symbols(alt)
                        .map_err(|e| parse_err(line_no, format!("bad filler: {e}")))?;
                    if f.is_empty() {
                        return Err(parse_err(line_no, "empty filler"));
                    }
                    fillers.push(f);
                }
                elements.push(SchemaElement::Slot { id: id.to_string(), fillers });
            }
            other => return Err(parse_err(line_no, format!("unknown schema line {other:?}"))),
        }
    }
    let name = name.ok_or_else(|| parse_err(1, "missing schema line"))?;
    Schema::new(name, elements).map_err(|e| parse_err(1, e))
}

/// Serializes an encoded stream. Bits use full-precision formatting so the
/// parse below reproduces them exactly.
pub fn serialize_stream(stream: &EncodedStream) -> String {
    let mut out = format!("%icmup-stream {}\n", stream.payload.codec_name());
    out.push_str(&format!("original-bits {:?}\n", stream.original_bits));
    out.push_str(&format!("encoded-bits {:?}\n", stream.encoded_bits));
    match &stream.payload {
        Payload::Chunk { dictionary, residual } => {
            out.push_str(&format!("prefix {}\n", dictionary.code_prefix()));
            for (code, chunk) in dictionary.entries() {
                out.push_str(&format!("code {}\t{}\n", code, join_symbols(chunk)));
            }
            out.push_str(&format!("residual {}\n", join_symbols(residual)));
        }
        Payload::Spc { schema_name, choices } => {
            out.push_str(&format!("schema {schema_name}\n"));
            for c in choices {
                out.push_str(&format!("choice {} {}\n", c.slot, c.index));
            }
        }
        Payload::Rle { runs } => {
            for (unit, count) in runs.runs() {
                out.push_str(&format!("run {count}\t{}\n", join_symbols(unit)));
            }
        }
    }
    out
}

/// Parses an encoded stream back.
pub fn parse_stream(text: &str) -> Result<EncodedStream> {
    let mut lines = text.lines().enumerate();

    let (_, header) = lines
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| parse_err(1, "empty stream"))?;
    let codec = header
        .strip_prefix("%icmup-stream ")
        .ok_or_else(|| parse_err(1, "expected %icmup-stream header"))?
        .trim()
        .to_string();

    let mut original_bits: Option<f64> = None;
    let mut encoded_bits: Option<f64> = None;
    let mut prefix: Option<String> = None;
    let mut codes: Vec<(Symbol, Vec<Symbol>)> = Vec::new();
    let mut residual: Option<Vec<Symbol>> = None;
    let mut schema_name: Option<Symbol> = None;
    let mut choices: Vec<SlotChoice> = Vec::new();
    let mut runs: Vec<(Vec<Symbol>, u32)> = Vec::new();

    for (i, raw) in lines {
        let line_no = i + 1;
        let line = raw.trim_end();
        if line.trim().is_empty() {
            continue;
        }
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match head {
            "original-bits" => {
                original_bits = Some(rest.trim().parse().map_err(|e| parse_err(line_no, e))?)
            }
            "encoded-bits" => {
                encoded_bits = Some(rest.trim().parse().map_err(|e| parse_err(line_no, e))?)
            }
            "prefix" => prefix = Some(rest.trim().to_string()),
            "code" => {
                let (code, chunk) = rest
                    .split_once('\t')
                    .ok_or_else(|| parse_err(line_no, "code line needs a tab"))?;
                codes.push((
                    Symbol::new(code.trim()).map_err(|e| parse_err(line_no, e))?,
                    parse_symbols(chunk).map_err(|e| parse_err(line_no, e))?,
                ));
            }
            "residual" => {
                residual = Some(parse_symbols(rest).map_err(|e| parse_err(line_no, e))?)
            }
            "schema" => {
                schema_name = Some(Symbol::new(rest.trim()).map_err(|e| parse_err(line_no, e))?)
            }
            "choice" => {
                let (slot, idx) = rest
                    .trim()
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| parse_err(line_no, "choice needs a slot and an index"))?;
                let index: usize = idx.trim().parse().map_err(|e| parse_err(line_no, e))?;
                choices.push(SlotChoice { slot: slot.to_string(), index });
            }
            "run" => {
                let (count, unit) = rest
                    .split_once('\t')
                    .ok_or_else(|| parse_err(line_no, "run line needs a tab"))?;
                let count: u32 = count.trim().parse().map_err(|e| parse_err(line_no, e))?;
                runs.push((parse_symbols(unit).map_err(|e| parse_err(line_no, e))?, count));
            }
            other => return Err(parse_err(line_no, format!("unknown stream line {other:?}"))),
        }
    }

    let original_bits = original_bits.ok_or_else(|| parse_err(1, "missing original-bits"))?;
    let encoded_bits = encoded_bits.ok_or_else(|| parse_err(1, "missing encoded-bits"))?;
    let payload = match codec.as_str() {
        "chunk" => {
            let dictionary = ChunkDictionary::new(
                prefix.ok_or_else(|| parse_err(1, "missing prefix line"))?,
                codes,
            )?;
            let residual = residual.ok_or_else(|| parse_err(1, "missing residual line"))?;
            for sym in &residual {
                if sym.text().starts_with(dictionary.code_prefix())
                    && !dictionary.entries().iter().any(|(c, _)| c.text() == sym.text())
                {
                    return Err(Error::UnknownCode { code: sym.text().to_string() });
                }
            }
            Payload::Chunk { dictionary, residual }
        }
        "spc" => Payload::Spc {
            schema_name: schema_name.ok_or_else(|| parse_err(1, "missing schema line"))?,
            choices,
        },
        "rle" => Payload::Rle { runs: RunLengthStream::new(runs)? },
        other => return Err(parse_err(1, format!("unknown codec {other:?}"))),
    };
    Ok(EncodedStream { payload, original_bits, encoded_bits })
}
