//! Schema plus correction: a stored template with slots. An instance is
//! encoded as the template's name plus the filler chosen at each slot.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::store::CostModel;
use crate::symbol::Symbol;

/// One element of a schema: a fixed symbol or a slot with permitted fillers.
#[derive(Debug, Clone, PartialEq)]
pub enum SchemaElement {
    Fixed(Symbol),
    Slot { id: String, fillers: Vec<Vec<Symbol>> },
}

/// A named template. Slot ids are unique and every slot has at least one
/// permitted filler.
#[derive(Debug, Clone, PartialEq)]
pub struct Schema {
    name: Symbol,
    elements: Vec<SchemaElement>,
}

impl Schema {
    pub fn new(name: Symbol, elements: Vec<SchemaElement>) -> Result<Self> {
        let mut ids = BTreeSet::new();
        for el in &elements {
            if let SchemaElement::Slot { id, fillers } = el {
                if !ids.insert(id.clone()) {
                    return Err(Error::BadParameter { what: alloc::format!("duplicate slot id {id}") });
                }
                if fillers.is_empty() {
                    return Err(Error::BadParameter { what: alloc::format!("slot {id} has no fillers") });
                }
                if fillers.iter().any(Vec::is_empty) {
                    return Err(Error::BadParameter { what: alloc::format!("slot {id} has an empty filler") });
                }
            }
        }
        Ok(Schema { name, elements })
    }

    pub fn name(&self) -> &Symbol {
        &self.name
    }

    pub fn elements(&self) -> &[SchemaElement] {
        &self.elements
    }

    pub fn slots(&self) -> impl Iterator<Item = (&str, &[Vec<Symbol>])> {
        self.elements.iter().filter_map(|el| match el {
            SchemaElement::Slot { id, fillers } => Some((id.as_str(), fillers.as_slice())),
            SchemaElement::Fixed(_) => None,
        })
    }

    /// Bits to encode one instance: the schema name plus, per slot, the
    /// choice among that slot's fillers rounded up to a whole bit. A slot
    /// with one permitted filler contributes 0 bits.
    pub fn instance_bits(&self, cost: &CostModel) -> f64 {
        let mut bits = cost.symbol_cost(self.name.text());
        for (_, fillers) in self.slots() {
            bits += ceil_log2(fillers.len());
        }
        bits
    }
}

fn ceil_log2(n: usize) -> f64 {
    debug_assert!(n >= 1);
    let mut bits = 0u32;
    let mut capacity = 1usize;
    while capacity < n {
        capacity *= 2;
        bits += 1;
    }
    f64::from(bits)
}

/// The filler picked at one slot. Indices are 1-based, matching the
/// `(3)(5)(1)` way of writing menu choices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotChoice {
    pub slot: String,
    pub index: usize,
}

/// Matches `seq` against the schema and returns the choice made at each
/// slot, in slot order.
///
/// Fixed elements must match literally and each slot consumes exactly one
/// permitted filler. A sequence that matches in more than one way is an
/// error naming the slots where the parses diverge; a sequence that does
/// not match reports the first divergent position.
pub fn spc_encode(seq: &[Symbol], schema: &Schema) -> Result<Vec<SlotChoice>> {
    let mut parses: Vec<Vec<SlotChoice>> = Vec::new();
    let mut furthest = 0usize;
    match_elements(schema.elements(), seq, 0, &mut Vec::new(), &mut parses, &mut furthest);
    match parses.len() {
        0 => Err(Error::SchemaMismatch { position: furthest }),
        1 => Ok(parses.pop().expect("one parse")),
        _ => {
            let a = &parses[0];
            let b = &parses[1];
            let slots: Vec<String> = a
                .iter()
                .zip(b.iter())
                .filter(|(x, y)| x != y)
                .map(|(x, _)| x.slot.clone())
                .collect();
            Err(Error::AmbiguousMatch { slots })
        }
    }
}

fn match_elements(
    elements: &[SchemaElement],
    seq: &[Symbol],
    pos: usize,
    chosen: &mut Vec<SlotChoice>,
    parses: &mut Vec<Vec<SlotChoice>>,
    furthest: &mut usize,
) {
    if parses.len() >= 2 {
        return;
    }
    *furthest = (*furthest).max(pos);
    let Some((first, rest)) = elements.split_first() else {
        if pos == seq.len() {
            parses.push(chosen.clone());
        }
        return;
    };
    match first {
        SchemaElement::Fixed(sym) => {
            if seq.get(pos).map(Symbol::text) == Some(sym.text()) {
                match_elements(rest, seq, pos + 1, chosen, parses, furthest);
            }
        }
        SchemaElement::Slot { id, fillers } => {
            for (i, filler) in fillers.iter().enumerate() {
                let end = pos + filler.len();
                if end <= seq.len() && seq[pos..end] == filler[..] {
                    chosen.push(SlotChoice { slot: id.clone(), index: i + 1 });
                    match_elements(rest, seq, end, chosen, parses, furthest);
                    chosen.pop();
                }
            }
        }
    }
}

/// Expands slot choices back into the full sequence.
pub fn spc_decode(schema: &Schema, choices: &[SlotChoice]) -> Result<Vec<Symbol>> {
    for c in choices {
        if !schema.slots().any(|(id, _)| id == c.slot) {
            return Err(Error::UnknownSlot { slot: c.slot.clone() });
        }
    }
    let mut out = Vec::new();
    for el in schema.elements() {
        match el {
            SchemaElement::Fixed(sym) => out.push(sym.clone()),
            SchemaElement::Slot { id, fillers } => {
                let choice = choices
                    .iter()
                    .find(|c| c.slot == *id)
                    .ok_or_else(|| Error::UnknownSlot { slot: id.to_string() })?;
                if choice.index == 0 || choice.index > fillers.len() {
                    return Err(Error::FillerOutOfRange { slot: id.clone(), index: choice.index });
                }
                out.extend(fillers[choice.index - 1].iter().cloned());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::parse_symbols;

    fn menu() -> Schema {
        // Six-course form: Appetiser (S) sorbet (M) (P) coffee-and-mints.
        let fillers = |names: &[&str]| -> Vec<Vec<Symbol>> {
            names.iter().map(|n| parse_symbols(n).unwrap()).collect()
        };
        Schema::new(
            Symbol::new("Menu1").unwrap(),
            alloc::vec![
                SchemaElement::Fixed(Symbol::new("Appetiser").unwrap()),
                SchemaElement::Slot {
                    id: "S".into(),
                    fillers: fillers(&["soup", "prawns", "melon", "pate"]),
                },
                SchemaElement::Fixed(Symbol::new("sorbet").unwrap()),
                SchemaElement::Slot {
                    id: "M".into(),
                    fillers: fillers(&["beef", "chicken", "salmon", "risotto", "lamb", "venison"]),
                },
                SchemaElement::Slot {
                    id: "P".into(),
                    fillers: fillers(&["trifle", "cheesecake", "gateau"]),
                },
                SchemaElement::Fixed(Symbol::new("coffee-and-mints").unwrap()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn menu_choices_3_5_1() {
        let seq = parse_symbols("Appetiser melon sorbet lamb trifle coffee-and-mints").unwrap();
        let choices = spc_encode(&seq, &menu()).unwrap();
        assert_eq!(
            choices,
            alloc::vec![
                SlotChoice { slot: "S".into(), index: 3 },
                SlotChoice { slot: "M".into(), index: 5 },
                SlotChoice { slot: "P".into(), index: 1 },
            ]
        );
        assert_eq!(spc_decode(&menu(), &choices).unwrap(), seq);
    }

    #[test]
    fn zero_slot_schema() {
        let schema = Schema::new(
            Symbol::new("Fixed").unwrap(),
            alloc::vec![
                SchemaElement::Fixed(Symbol::new("a").unwrap()),
                SchemaElement::Fixed(Symbol::new("b").unwrap()),
            ],
        )
        .unwrap();
        let seq = parse_symbols("a b").unwrap();
        assert_eq!(spc_encode(&seq, &schema).unwrap(), alloc::vec![]);
        assert_eq!(spc_decode(&schema, &[]).unwrap(), seq);
    }

    #[test]
    fn single_filler_slot_contributes_zero_bits() {
        let schema = Schema::new(
            Symbol::new("T").unwrap(),
            alloc::vec![SchemaElement::Slot {
                id: "only".into(),
                fillers: alloc::vec![parse_symbols("x y").unwrap()],
            }],
        )
        .unwrap();
        let cost = CostModel::uniform_over(["T".into(), "x".into(), "y".into()]);
        // log2(3) for the name, 0 for the slot.
        assert!((schema.instance_bits(&cost) - libm::log2(3.0)).abs() < 1e-12);
    }

    #[test]
    fn mismatch_reports_first_divergence() {
        let seq = parse_symbols("Appetiser melon sorbet pizza trifle coffee-and-mints").unwrap();
        let err = spc_encode(&seq, &menu()).unwrap_err();
        assert_eq!(err, Error::SchemaMismatch { position: 3 });
    }

    #[test]
    fn ambiguity_lists_slots() {
        // Two slots of one-or-two `x`s: "x x x" parses as (1,2) or (2,1).
        let fillers = alloc::vec![parse_symbols("x").unwrap(), parse_symbols("x x").unwrap()];
        let schema = Schema::new(
            Symbol::new("Amb").unwrap(),
            alloc::vec![
                SchemaElement::Slot { id: "a".into(), fillers: fillers.clone() },
                SchemaElement::Slot { id: "b".into(), fillers },
            ],
        )
        .unwrap();
        let seq = parse_symbols("x x x").unwrap();
        match spc_encode(&seq, &schema).unwrap_err() {
            Error::AmbiguousMatch { slots } => {
                assert!(slots.contains(&"a".to_string()) || slots.contains(&"b".to_string()));
            }
            other => panic!("expected ambiguity, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_filler_errors() {
        let err = spc_decode(&menu(), &[
            SlotChoice { slot: "S".into(), index: 9 },
            SlotChoice { slot: "M".into(), index: 1 },
            SlotChoice { slot: "P".into(), index: 1 },
        ])
        .unwrap_err();
        assert_eq!(err, Error::FillerOutOfRange { slot: "S".into(), index: 9 });
    }

    #[test]
    fn menu_bits_whole_bit_rounding() {
        let cost = CostModel::uniform_over(["Menu1".into()]);
        // 4 fillers -> 2 bits, 6 -> 3 bits, 3 -> 2 bits, plus the name.
        let bits = menu().instance_bits(&cost);
        assert_eq!(bits, cost.symbol_cost("Menu1") + 2.0 + 3.0 + 2.0);
    }
}
