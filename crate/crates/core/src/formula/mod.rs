//! Object-level formulas: variables and applications of fixed-arity symbols.
//!
//! A [`Formula`] is stored flat, in prefix order, one packed [`Node`] per
//! symbol occurrence. Symbol count is the slice length, structural equality is
//! slice equality and a canonically renamed formula doubles as its own
//! variance key.

mod enumerate;
mod names;
mod syntax;

use std::fmt;

use rustc_hash::FxHashMap;
use thiserror::Error;

pub use enumerate::{enumerate_ec_theorems, enumerate_two_property_theorems};
pub use names::canonical_name;
pub use syntax::{parse_formula, FormulaParser, ParseError};

pub(crate) use names::MAX_ARITY;

/// One packed symbol occurrence.
///
/// Bit 31 distinguishes compounds from variables. Compounds keep their arity
/// in bits 24..31 and the symbol id in the low 24 bits; variables use the low
/// 31 bits for their id.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Node(u32);

const FUN_BIT: u32 = 1 << 31;

impl Node {
    pub(crate) const E: Node = Node(FUN_BIT | (2 << 24));

    #[inline]
    pub(crate) const fn var(id: u32) -> Node {
        debug_assert!(id < FUN_BIT);
        Node(id)
    }

    #[inline]
    pub(crate) const fn fun(symbol: u32, arity: u8) -> Node {
        Node(FUN_BIT | ((arity as u32) << 24) | symbol)
    }

    #[inline]
    pub(crate) const fn is_var(self) -> bool {
        self.0 & FUN_BIT == 0
    }

    #[inline]
    pub(crate) const fn var_id(self) -> u32 {
        self.0
    }

    /// Number of arguments; zero for variables.
    #[inline]
    pub(crate) const fn arity(self) -> usize {
        if self.is_var() {
            0
        } else {
            ((self.0 >> 24) & 0x7f) as usize
        }
    }

    #[inline]
    pub(crate) const fn symbol_id(self) -> u32 {
        self.0 & 0x00ff_ffff
    }

    #[inline]
    pub(crate) const fn raw(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_var() {
            write!(f, "{}", names::var_name(self.var_id()))
        } else {
            write!(
                f,
                "{}/{}",
                names::symbol_name(self.symbol_id()),
                self.arity()
            )
        }
    }
}

/// A sentential variable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    /// The variable spelled `name`.
    pub fn named(name: &str) -> Var {
        Var(names::var_id(name))
    }

    /// The `index`-th variable of the sequence `x, y, z, u, v, w, v6, v7, ...`.
    pub fn canonical(index: u32) -> Var {
        assert!(
            index < names::EXTRA_VAR_BASE,
            "canonical index out of range"
        );
        Var(index)
    }

    /// Position in the canonical sequence, if the name belongs to it.
    pub fn canonical_index(self) -> Option<u32> {
        (self.0 < names::EXTRA_VAR_BASE).then_some(self.0)
    }

    pub fn name(self) -> String {
        names::var_name(self.0)
    }

    pub(crate) fn from_id(id: u32) -> Var {
        Var(id)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A function symbol; identity is the pair (name, arity).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Node);

impl Symbol {
    /// The binary equivalence connective `e`.
    pub const E: Symbol = Symbol(Node::E);

    pub fn new(name: &str, arity: usize) -> Result<Symbol, FormulaError> {
        if arity > MAX_ARITY {
            return Err(FormulaError::ArityTooLarge(arity));
        }
        let id = names::symbol_id(name, arity as u8);
        Ok(Symbol(Node::fun(id, arity as u8)))
    }

    pub fn name(self) -> String {
        names::symbol_name(self.0.symbol_id())
    }

    pub fn arity(self) -> usize {
        self.0.arity()
    }

    pub fn is_e(self) -> bool {
        self == Symbol::E
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name(), self.arity())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("symbol {symbol} takes {expected} argument(s), {found} given")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("arity {0} exceeds the supported maximum of {MAX_ARITY}")]
    ArityTooLarge(usize),
    #[error("symbol {0} is not part of the equivalential calculus")]
    ForeignSymbol(String),
}

/// A formula tree, stored in prefix order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Formula {
    nodes: Vec<Node>,
}

/// Shape of the root of a formula.
#[derive(Debug, Clone, Copy)]
pub enum View<'a> {
    Var(Var),
    Compound(Symbol, Args<'a>),
}

/// A borrowed subformula.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Term<'a> {
    nodes: &'a [Node],
}

/// Iterator over the arguments of a compound.
#[derive(Debug, Clone, Copy)]
pub struct Args<'a> {
    rest: &'a [Node],
    remaining: usize,
}

impl<'a> Iterator for Args<'a> {
    type Item = Term<'a>;

    fn next(&mut self) -> Option<Term<'a>> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let end = term_end(self.rest, 0);
        let (head, tail) = self.rest.split_at(end);
        self.rest = tail;
        Some(Term { nodes: head })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

impl ExactSizeIterator for Args<'_> {}

impl<'a> Term<'a> {
    pub fn view(self) -> View<'a> {
        let head = self.nodes[0];
        if head.is_var() {
            View::Var(Var(head.var_id()))
        } else {
            View::Compound(
                Symbol(head),
                Args {
                    rest: &self.nodes[1..],
                    remaining: head.arity(),
                },
            )
        }
    }

    pub fn symbol_count(self) -> usize {
        self.nodes.len()
    }

    pub fn to_formula(self) -> Formula {
        Formula {
            nodes: self.nodes.to_vec(),
        }
    }

    pub(crate) fn nodes(self) -> &'a [Node] {
        self.nodes
    }
}

impl fmt::Debug for Term<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Formula {
    pub fn var(v: Var) -> Formula {
        Formula {
            nodes: vec![Node::var(v.0)],
        }
    }

    /// `e(left, right)`.
    pub fn e(left: Formula, right: Formula) -> Formula {
        let mut nodes = Vec::with_capacity(1 + left.nodes.len() + right.nodes.len());
        nodes.push(Node::E);
        nodes.extend_from_slice(&left.nodes);
        nodes.extend_from_slice(&right.nodes);
        Formula { nodes }
    }

    pub fn compound<I>(head: Symbol, args: I) -> Result<Formula, FormulaError>
    where
        I: IntoIterator<Item = Formula>,
    {
        let mut nodes = vec![head.0];
        let mut found = 0;
        for arg in args {
            nodes.extend_from_slice(&arg.nodes);
            found += 1;
        }
        if found != head.arity() {
            return Err(FormulaError::ArityMismatch {
                symbol: head.name(),
                expected: head.arity(),
                found,
            });
        }
        Ok(Formula { nodes })
    }

    pub(crate) fn from_nodes(nodes: Vec<Node>) -> Formula {
        debug_assert_eq!(term_end(&nodes, 0), nodes.len());
        Formula { nodes }
    }

    pub(crate) fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn as_term(&self) -> Term<'_> {
        Term { nodes: &self.nodes }
    }

    pub fn view(&self) -> View<'_> {
        self.as_term().view()
    }

    /// Occurrences of variables plus occurrences of compound heads.
    pub fn symbol_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_var(&self) -> bool {
        self.nodes[0].is_var()
    }

    /// Variables in order of first occurrence.
    pub fn vars(&self) -> Vec<Var> {
        let mut seen = Vec::new();
        for n in self.nodes.iter().filter(|n| n.is_var()) {
            let v = Var(n.var_id());
            if !seen.contains(&v) {
                seen.push(v);
            }
        }
        seen
    }

    pub fn distinct_var_count(&self) -> usize {
        var_counts(&self.nodes).len()
    }

    /// Every variable present occurs exactly twice.
    pub fn two_property(&self) -> bool {
        var_counts(&self.nodes).values().all(|&c| c == 2)
    }

    /// Theoremhood in the equivalential calculus: every variable occurs an
    /// even number of times. Only defined over `e` and variables.
    pub fn is_ec_theorem(&self) -> Result<bool, FormulaError> {
        if let Some(foreign) = self.nodes.iter().find(|n| !n.is_var() && **n != Node::E) {
            return Err(FormulaError::ForeignSymbol(names::symbol_name(
                foreign.symbol_id(),
            )));
        }
        Ok(var_counts(&self.nodes).values().all(|&c| c % 2 == 0))
    }

    /// Renames variables to `x, y, z, u, v, w, v6, ...` in order of first
    /// occurrence.
    pub fn canonical_rename(&self) -> Formula {
        if self.is_canonical() {
            return self.clone();
        }
        Formula {
            nodes: canonicalize(&self.nodes),
        }
    }

    pub fn is_canonical(&self) -> bool {
        is_canonical(&self.nodes)
    }

    /// Equality up to an injective renaming of variables.
    pub fn is_variant(&self, other: &Formula) -> bool {
        is_variant_slice(&self.nodes, &other.nodes)
    }

    /// Some subformula (the whole formula included) is a variant of `pattern`.
    pub fn contains_variant_subformula(&self, pattern: &Formula) -> bool {
        contains_variant(&self.nodes, &pattern.nodes)
    }

    /// All subformulas in prefix order, the formula itself first.
    pub fn subformulas(&self) -> impl Iterator<Item = Term<'_>> + '_ {
        (0..self.nodes.len()).map(move |i| Term {
            nodes: &self.nodes[i..term_end(&self.nodes, i)],
        })
    }

    /// Some proper subformula has the shape `e(t,t)`.
    pub fn has_proper_reflexive_subformula(&self) -> bool {
        has_proper_reflexive(&self.nodes)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Var> for Formula {
    fn from(v: Var) -> Formula {
        Formula::var(v)
    }
}

/// Index one past the subterm starting at `start`.
#[inline]
pub(crate) fn term_end(nodes: &[Node], start: usize) -> usize {
    let mut pending = 1usize;
    let mut i = start;
    while pending > 0 {
        pending = pending - 1 + nodes[i].arity();
        i += 1;
    }
    i
}

/// For each position, the index one past the subterm starting there.
pub(crate) fn subterm_ends(nodes: &[Node]) -> Vec<u32> {
    let mut ends = vec![0u32; nodes.len()];
    for i in (0..nodes.len()).rev() {
        let mut j = i + 1;
        for _ in 0..nodes[i].arity() {
            j = ends[j] as usize;
        }
        ends[i] = j as u32;
    }
    ends
}

fn var_counts(nodes: &[Node]) -> FxHashMap<u32, usize> {
    let mut counts = FxHashMap::default();
    for n in nodes.iter().filter(|n| n.is_var()) {
        *counts.entry(n.var_id()).or_insert(0) += 1;
    }
    counts
}

pub(crate) fn is_canonical(nodes: &[Node]) -> bool {
    let mut next = 0u32;
    for n in nodes.iter().filter(|n| n.is_var()) {
        match n.var_id() {
            id if id == next => next += 1,
            id if id < next => {}
            _ => return false,
        }
    }
    true
}

pub(crate) fn canonicalize(nodes: &[Node]) -> Vec<Node> {
    let mut map: FxHashMap<u32, u32> = FxHashMap::default();
    nodes
        .iter()
        .map(|&n| {
            if n.is_var() {
                let next = map.len() as u32;
                Node::var(*map.entry(n.var_id()).or_insert(next))
            } else {
                n
            }
        })
        .collect()
}

/// Bijective-renaming check over two prefix slices.
pub(crate) fn is_variant_slice(a: &[Node], b: &[Node]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut forward: Vec<(u32, u32)> = Vec::new();
    let mut backward: Vec<(u32, u32)> = Vec::new();
    for (&x, &y) in a.iter().zip(b) {
        match (x.is_var(), y.is_var()) {
            (true, true) => {
                let (vx, vy) = (x.var_id(), y.var_id());
                match (
                    forward.iter().find(|p| p.0 == vx),
                    backward.iter().find(|p| p.0 == vy),
                ) {
                    (None, None) => {
                        forward.push((vx, vy));
                        backward.push((vy, vx));
                    }
                    (Some(f), Some(_)) if f.1 == vy => {}
                    _ => return false,
                }
            }
            (false, false) if x == y => {}
            _ => return false,
        }
    }
    true
}

pub(crate) fn contains_variant(nodes: &[Node], pattern: &[Node]) -> bool {
    let len = pattern.len();
    (0..nodes.len()).any(|i| {
        nodes.len() - i >= len
            && (nodes[i] == pattern[0] || nodes[i].is_var() && pattern[0].is_var())
            && term_end(nodes, i) == i + len
            && is_variant_slice(&nodes[i..i + len], pattern)
    })
}

pub(crate) fn has_proper_reflexive(nodes: &[Node]) -> bool {
    let ends = subterm_ends(nodes);
    (1..nodes.len()).any(|i| {
        if nodes[i] != Node::E {
            return false;
        }
        let mid = ends[i + 1] as usize;
        let end = ends[i] as usize;
        nodes[i + 1..mid] == nodes[mid..end]
    })
}
