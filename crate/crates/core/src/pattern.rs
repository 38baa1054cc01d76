//! Patterns: ordered symbol sequences with a frequency of occurrence.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::symbol::{Symbol, BOUNDARY_SIGIL};

/// Identifier of a pattern within one store (its insertion index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PatternId(pub u32);

impl fmt::Display for PatternId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An ordered one-dimensional symbol sequence with a positive frequency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    id: PatternId,
    symbols: Vec<Symbol>,
    frequency: u32,
}

impl Pattern {
    pub(crate) fn new(id: PatternId, symbols: Vec<Symbol>, frequency: u32) -> Self {
        debug_assert!(!symbols.is_empty());
        debug_assert!(frequency >= 1);
        Pattern { id, symbols, frequency }
    }

    pub fn id(&self) -> PatternId {
        self.id
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn frequency(&self) -> u32 {
        self.frequency
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// The class name when this pattern follows the class-marker convention
    /// `<Class> <Discriminator> <contents...> #<Class>`, else `None`.
    pub fn class_name(&self) -> Option<&str> {
        if self.symbols.len() < 3 {
            return None;
        }
        let first = self.symbols[0].text();
        let last = self.symbols[self.symbols.len() - 1].text();
        if first.starts_with(BOUNDARY_SIGIL) {
            return None;
        }
        if last.len() == first.len() + 1
            && last.starts_with(BOUNDARY_SIGIL)
            && &last[1..] == first
        {
            Some(first)
        } else {
            None
        }
    }

    /// A short printable label: `<first-symbol> <second-symbol>` for class
    /// patterns, otherwise the first symbol.
    pub fn label(&self) -> String {
        if self.class_name().is_some() {
            let mut s = String::new();
            s.push_str(self.symbols[0].text());
            s.push(' ');
            s.push_str(self.symbols[1].text());
            s
        } else {
            String::from(self.symbols[0].text())
        }
    }

    pub(crate) fn symbols_mut(&mut self) -> &mut [Symbol] {
        &mut self.symbols
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::symbol::join_symbols(&self.symbols))
    }
}
