use std::collections::{BTreeMap, BTreeSet};

use super::SelectionMode;

/// Clauses kept but not yet given.
#[derive(Debug, Clone)]
pub(crate) struct Agenda {
    by_weight: BTreeSet<(u32, u32)>,
    by_id: BTreeMap<u32, u32>,
    mode: SelectionMode,
    cycle: u32,
}

impl Agenda {
    pub(crate) fn new(mode: SelectionMode) -> Agenda {
        Agenda {
            by_weight: BTreeSet::new(),
            by_id: BTreeMap::new(),
            mode,
            cycle: 0,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.by_id.len()
    }

    pub(crate) fn push(&mut self, id: u32, weight: u32) {
        self.by_weight.insert((weight, id));
        self.by_id.insert(id, weight);
    }

    pub(crate) fn remove(&mut self, id: u32) -> bool {
        match self.by_id.remove(&id) {
            Some(weight) => self.by_weight.remove(&(weight, id)),
            None => false,
        }
    }

    /// Next given clause: `n` picks by lowest weight (then lowest id), one by
    /// lowest id, repeating. Breadth-first mode always takes the lowest id.
    pub(crate) fn pop(&mut self) -> Option<u32> {
        let by_weight = match self.mode {
            SelectionMode::BreadthFirst => false,
            SelectionMode::Ratio(n) => {
                let pick = self.cycle < n;
                self.cycle = if self.cycle >= n { 0 } else { self.cycle + 1 };
                pick
            }
        };
        if by_weight {
            let (_, id) = self.by_weight.pop_first()?;
            self.by_id.remove(&id);
            Some(id)
        } else {
            let (id, weight) = self.by_id.pop_first()?;
            self.by_weight.remove(&(weight, id));
            Some(id)
        }
    }
}
