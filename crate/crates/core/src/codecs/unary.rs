//! Redundancy removal from unary numbers: a tally of n identical symbols is
//! rewritten as the numeral for n in a higher base.

use alloc::string::{String, ToString};

use crate::error::{Error, Result};
use crate::symbol::Symbol;

const DIGITS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// Renders the length of a run of identical symbols in `base` (2..=36).
pub fn unary_to_base(seq: &[Symbol], base: u32) -> Result<String> {
    if !(2..=36).contains(&base) {
        return Err(Error::BadBase { base });
    }
    if seq.is_empty() {
        return Err(Error::BadParameter { what: "unary_to_base: empty sequence".into() });
    }
    let first = &seq[0];
    if let Some(other) = seq.iter().find(|s| s.text() != first.text()) {
        return Err(Error::MixedUnarySymbols {
            first: first.text().to_string(),
            other: other.text().to_string(),
        });
    }
    let mut n = seq.len();
    let mut digits = alloc::vec::Vec::new();
    while n > 0 {
        digits.push(DIGITS[n % base as usize]);
        n /= base as usize;
    }
    digits.reverse();
    Ok(String::from_utf8(digits).expect("digits are ascii"))
}
