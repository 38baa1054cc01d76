//! Atomic symbols: the indivisible unit of matching.
//!
//! A symbol is a token of text. Two symbols are equal exactly when their
//! texts are equal; the role a symbol plays (content, identification,
//! boundary) is context derived from the store that holds its pattern, so
//! roles never take part in equality or hashing.

use alloc::string::{String, ToString};
use core::fmt;

use crate::error::{Error, Result};

/// Sigil that starts every boundary symbol, e.g. `#NP`.
pub const BOUNDARY_SIGIL: char = '#';

/// The part a symbol plays inside its pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Role {
    /// Substance: the symbols an input is made of.
    Content,
    /// Identification: class names, discriminators, chunk codes.
    Id,
    /// A `#`-prefixed closer that ends a pattern's contents.
    Boundary,
}

/// An atomic token with a derived role.
#[derive(Debug, Clone)]
pub struct Symbol {
    text: String,
    role: Role,
}

impl Symbol {
    /// Builds a symbol, validating the token and deriving the boundary role
    /// from the sigil. Non-boundary symbols start as [`Role::Content`];
    /// stores promote identification symbols when patterns are built.
    pub fn new(text: &str) -> Result<Self> {
        if text.is_empty() || text.chars().any(char::is_whitespace) {
            return Err(Error::BadSymbol { text: text.to_string() });
        }
        let role = if text.starts_with(BOUNDARY_SIGIL) {
            Role::Boundary
        } else {
            Role::Content
        };
        Ok(Symbol { text: text.to_string(), role })
    }

    /// Builds a symbol from a single character (used by text ingestion).
    pub fn from_char(c: char) -> Result<Self> {
        let mut buf = [0u8; 4];
        Symbol::new(c.encode_utf8(&mut buf))
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn is_boundary(&self) -> bool {
        self.role == Role::Boundary
    }

    pub fn is_id(&self) -> bool {
        self.role == Role::Id
    }

    pub fn is_content(&self) -> bool {
        self.role == Role::Content
    }

    /// True for symbols that identify rather than carry substance.
    pub fn is_service(&self) -> bool {
        self.role != Role::Content
    }

    pub(crate) fn set_role(&mut self, role: Role) {
        // The boundary role is fixed by the sigil.
        if self.role != Role::Boundary {
            self.role = role;
        }
    }
}

/// Equality is exact equality of text; roles are context, not identity.
impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for Symbol {}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.text.cmp(&other.text)
    }
}

impl core::hash::Hash for Symbol {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.text.hash(state);
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// Parses a whitespace-separated token string into symbols.
pub fn parse_symbols(s: &str) -> Result<alloc::vec::Vec<Symbol>> {
    s.split_whitespace().map(Symbol::new).collect()
}

/// Renders a symbol sequence as space-joined text.
pub fn join_symbols(syms: &[Symbol]) -> String {
    let mut out = String::new();
    for (i, s) in syms.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(s.text());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_whitespace() {
        assert!(Symbol::new("").is_err());
        assert!(Symbol::new("a b").is_err());
        assert!(Symbol::new("a\t").is_err());
    }

    #[test]
    fn boundary_role_from_sigil() {
        assert_eq!(Symbol::new("#NP").unwrap().role(), Role::Boundary);
        assert_eq!(Symbol::new("NP").unwrap().role(), Role::Content);
    }

    #[test]
    fn equality_ignores_role() {
        let a = Symbol::new("x").unwrap();
        let mut b = Symbol::new("x").unwrap();
        b.set_role(Role::Id);
        assert_eq!(a, b);
    }

    #[test]
    fn parse_and_join_round_trip() {
        let syms = parse_symbols("NP 2 A #A").unwrap();
        assert_eq!(join_symbols(&syms), "NP 2 A #A");
    }
}
