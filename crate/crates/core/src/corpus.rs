//! Named formulas of the equivalential calculus: the fourteen shortest single
//! axioms, the bases, the formulas shown too weak and the 7-symbol theorems
//! with the 2-property.
//!
//! Formulas without an established name carry positional ids: `L1`–`L3`
//! (Łukasiewicz's three, in listing order), `M1`–`M7` (Meredith's seven),
//! `K1` (Kalman's) and `S7-01`–`S7-15` (the 7-symbol theorems, sorted by text).

use std::collections::BTreeSet;
use std::sync::LazyLock;

use thiserror::Error;

use crate::formula::{enumerate_two_property_theorems, parse_formula, Formula};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    ShortestAxiom,
    TooWeak,
    FormerlyOpen,
    BasisMember,
    SevenSymbolTarget,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::ShortestAxiom => "shortest_axiom",
            Tag::TooWeak => "too_weak",
            Tag::FormerlyOpen => "formerly_open",
            Tag::BasisMember => "basis_member",
            Tag::SevenSymbolTarget => "seven_symbol_target",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedFormula {
    pub name: String,
    pub formula: Formula,
    pub tags: BTreeSet<Tag>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no corpus formula named {0:?}")]
pub struct UnknownName(pub String);

use Tag::*;

const LISTED: &[(&str, &str, &[Tag])] = &[
    ("L1", "e(e(x,y),e(e(z,y),e(x,z)))", &[ShortestAxiom]),
    ("L2", "e(e(x,y),e(e(x,z),e(z,y)))", &[ShortestAxiom]),
    ("L3", "e(e(x,y),e(e(z,x),e(y,z)))", &[ShortestAxiom]),
    ("M1", "e(e(e(x,y),z),e(y,e(z,x)))", &[ShortestAxiom]),
    ("M2", "e(x,e(e(y,e(x,z)),e(z,y)))", &[ShortestAxiom]),
    ("M3", "e(e(x,e(y,z)),e(z,e(x,y)))", &[ShortestAxiom]),
    ("M4", "e(e(x,y),e(z,e(e(y,z),x)))", &[ShortestAxiom]),
    ("M5", "e(e(x,y),e(z,e(e(z,y),x)))", &[ShortestAxiom]),
    ("M6", "e(e(e(x,e(y,z)),z),e(y,x))", &[ShortestAxiom]),
    ("M7", "e(e(e(x,e(y,z)),y),e(z,x))", &[ShortestAxiom]),
    ("K1", "e(x,e(e(y,e(z,x)),e(z,y)))", &[ShortestAxiom]),
    (
        "XJL",
        "e(x,e(y,e(e(e(z,y),x),z)))",
        &[TooWeak, FormerlyOpen],
    ),
    (
        "XKE",
        "e(x,e(y,e(e(x,e(z,y)),z)))",
        &[TooWeak, FormerlyOpen],
    ),
    (
        "XAK",
        "e(x,e(e(e(e(y,z),x),z),y))",
        &[TooWeak, FormerlyOpen],
    ),
    (
        "BXO",
        "e(e(e(e(x,e(y,z)),z),y),x)",
        &[TooWeak, FormerlyOpen],
    ),
    (
        "XHK",
        "e(x,e(e(y,z),e(e(x,z),y)))",
        &[ShortestAxiom, FormerlyOpen],
    ),
    (
        "XHN",
        "e(x,e(e(y,z),e(e(z,x),y)))",
        &[ShortestAxiom, FormerlyOpen],
    ),
    (
        "XCB",
        "e(x,e(e(e(x,y),e(z,y)),z))",
        &[ShortestAxiom, FormerlyOpen],
    ),
    ("reflexivity", "e(x,x)", &[BasisMember]),
    ("transitivity", "e(e(x,y),e(e(y,z),e(x,z)))", &[BasisMember]),
    ("symmetry", "e(e(x,y),e(y,x))", &[BasisMember]),
];

static CORPUS: LazyLock<Vec<NamedFormula>> = LazyLock::new(|| {
    let mut entries: Vec<NamedFormula> = LISTED
        .iter()
        .map(|(name, text, tags)| NamedFormula {
            name: (*name).to_string(),
            formula: parse_formula(text)
                .expect("corpus formula")
                .canonical_rename(),
            tags: tags.iter().copied().collect(),
        })
        .collect();
    for (i, formula) in enumerate_two_property_theorems(7).into_iter().enumerate() {
        match entries.iter_mut().find(|e| e.formula == formula) {
            Some(existing) => {
                existing.tags.insert(SevenSymbolTarget);
            }
            None => entries.push(NamedFormula {
                name: format!("S7-{:02}", i + 1),
                formula,
                tags: [SevenSymbolTarget].into_iter().collect(),
            }),
        }
    }
    entries
});

/// Every entry, in listing order.
pub fn all() -> &'static [NamedFormula] {
    &CORPUS
}

pub fn get(name: &str) -> Result<&'static NamedFormula, UnknownName> {
    CORPUS
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| UnknownName(name.to_string()))
}

fn tagged(tag: Tag) -> Vec<&'static NamedFormula> {
    CORPUS.iter().filter(|e| e.tags.contains(&tag)).collect()
}

/// The fourteen shortest single axioms, in listing order (XCB last).
pub fn shortest_axioms() -> Vec<&'static NamedFormula> {
    tagged(ShortestAxiom)
}

/// Transitivity and symmetry.
pub fn two_basis() -> Vec<&'static NamedFormula> {
    ["transitivity", "symmetry"]
        .iter()
        .map(|n| get(n).unwrap())
        .collect()
}

/// Reflexivity, transitivity and symmetry.
pub fn three_basis() -> Vec<&'static NamedFormula> {
    ["reflexivity", "transitivity", "symmetry"]
        .iter()
        .map(|n| get(n).unwrap())
        .collect()
}

/// The fifteen 7-symbol theorems with the 2-property.
pub fn seven_symbol_targets() -> Vec<&'static NamedFormula> {
    let mut targets = tagged(SevenSymbolTarget);
    targets.sort_by_key(|e| e.formula.to_string());
    targets
}
