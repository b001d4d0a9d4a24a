//! Process-wide interning of variable and symbol names.
//!
//! Variables whose names belong to the canonical sequence
//! `x, y, z, u, v, w, v6, v7, ...` are identified with their position in
//! that sequence, so a canonically renamed formula carries its printed names
//! for free. Every other variable name is interned above [`EXTRA_VAR_BASE`].

use std::collections::HashMap;
use std::sync::{LazyLock, RwLock};

const FIRST_SIX: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

/// First id handed out to variable names outside the canonical sequence.
pub(crate) const EXTRA_VAR_BASE: u32 = 1 << 30;

/// Largest arity a symbol may have (it is packed into seven bits).
pub(crate) const MAX_ARITY: usize = 127;

/// Largest symbol id (it is packed into 24 bits).
const MAX_SYMBOL_ID: u32 = (1 << 24) - 1;

#[derive(Default)]
struct VarTable {
    by_name: HashMap<String, u32>,
    names: Vec<String>,
}

struct SymbolTable {
    by_key: HashMap<(String, u8), u32>,
    entries: Vec<(String, u8)>,
}

static VARS: LazyLock<RwLock<VarTable>> = LazyLock::new(Default::default);

static SYMBOLS: LazyLock<RwLock<SymbolTable>> = LazyLock::new(|| {
    let mut table = SymbolTable {
        by_key: HashMap::new(),
        entries: Vec::new(),
    };
    // `e` is always symbol 0.
    table.by_key.insert(("e".to_string(), 2), 0);
    table.entries.push(("e".to_string(), 2));
    RwLock::new(table)
});

/// Name of the `index`-th canonical variable.
pub fn canonical_name(index: u32) -> String {
    match FIRST_SIX.get(index as usize) {
        Some(name) => (*name).to_string(),
        None => format!("v{index}"),
    }
}

/// Inverse of [`canonical_name`].
pub(crate) fn canonical_index(name: &str) -> Option<u32> {
    if let Some(i) = FIRST_SIX.iter().position(|n| *n == name) {
        return Some(i as u32);
    }
    let digits = name.strip_prefix('v')?;
    if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let index: u32 = digits.parse().ok()?;
    (6..EXTRA_VAR_BASE).contains(&index).then_some(index)
}

pub(crate) fn var_id(name: &str) -> u32 {
    if let Some(index) = canonical_index(name) {
        return index;
    }
    if let Some(&id) = VARS.read().unwrap().by_name.get(name) {
        return id;
    }
    let mut table = VARS.write().unwrap();
    if let Some(&id) = table.by_name.get(name) {
        return id;
    }
    let id = EXTRA_VAR_BASE + table.names.len() as u32;
    table.names.push(name.to_string());
    table.by_name.insert(name.to_string(), id);
    id
}

pub(crate) fn var_name(id: u32) -> String {
    if id < EXTRA_VAR_BASE {
        canonical_name(id)
    } else {
        VARS.read().unwrap().names[(id - EXTRA_VAR_BASE) as usize].clone()
    }
}

pub(crate) fn symbol_id(name: &str, arity: u8) -> u32 {
    let key = (name.to_string(), arity);
    if let Some(&id) = SYMBOLS.read().unwrap().by_key.get(&key) {
        return id;
    }
    let mut table = SYMBOLS.write().unwrap();
    if let Some(&id) = table.by_key.get(&key) {
        return id;
    }
    let id = table.entries.len() as u32;
    assert!(id <= MAX_SYMBOL_ID, "symbol table exhausted");
    table.entries.push(key.clone());
    table.by_key.insert(key, id);
    id
}

pub(crate) fn symbol_name(id: u32) -> String {
    SYMBOLS.read().unwrap().entries[id as usize].0.clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_names_follow_listing_convention() {
        let names: Vec<_> = (0..10).map(canonical_name).collect();
        assert_eq!(
            names,
            ["x", "y", "z", "u", "v", "w", "v6", "v7", "v8", "v9"]
        );
        for i in 0..200 {
            assert_eq!(canonical_index(&canonical_name(i)), Some(i));
        }
    }

    #[test]
    fn non_canonical_v_names_are_interned() {
        for name in ["v0", "v5", "v06", "v", "vx"] {
            let id = var_id(name);
            assert_eq!(var_name(id), name);
        }
        assert_eq!(var_id("v"), 4);
        assert!(var_id("v3") >= EXTRA_VAR_BASE);
        assert_eq!(var_id("a"), var_id("a"));
    }

    #[test]
    fn e_is_symbol_zero() {
        assert_eq!(symbol_id("e", 2), 0);
        assert_ne!(symbol_id("e", 3), 0);
        assert_eq!(symbol_name(0), "e");
    }
}
