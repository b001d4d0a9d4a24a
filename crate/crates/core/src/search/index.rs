//! Discrimination tree over prefix-ordered formulas.
//!
//! Every variable is stored as the same wildcard, so retrieval returns a
//! superset of the true answers; callers confirm each candidate by matching.

use crate::formula::Node;

const STAR: u32 = 0;

#[inline]
fn key_of(n: Node) -> u32 {
    if n.is_var() {
        STAR
    } else {
        n.raw()
    }
}

#[inline]
fn key_arity(key: u32) -> usize {
    if key & (1 << 31) == 0 {
        0
    } else {
        ((key >> 24) & 0x7f) as usize
    }
}

#[derive(Default, Debug)]
struct TrieNode {
    children: Vec<(u32, u32)>,
    entries: Vec<u32>,
}

#[derive(Debug)]
pub(crate) struct DiscriminationTree {
    nodes: Vec<TrieNode>,
    len: usize,
}

impl Default for DiscriminationTree {
    fn default() -> Self {
        DiscriminationTree {
            nodes: vec![TrieNode::default()],
            len: 0,
        }
    }
}

impl DiscriminationTree {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    #[cfg(test)]
    pub(crate) fn len(&self) -> usize {
        self.len
    }

    fn child(&self, at: usize, key: u32) -> Option<usize> {
        self.nodes[at]
            .children
            .iter()
            .find(|c| c.0 == key)
            .map(|c| c.1 as usize)
    }

    pub(crate) fn insert(&mut self, term: &[Node], id: u32) {
        let mut at = 0usize;
        for &n in term {
            let key = key_of(n);
            at = match self.child(at, key) {
                Some(next) => next,
                None => {
                    let next = self.nodes.len();
                    self.nodes.push(TrieNode::default());
                    self.nodes[at].children.push((key, next as u32));
                    next
                }
            };
        }
        self.nodes[at].entries.push(id);
        self.len += 1;
    }

    /// Removes one entry; returns whether it was present.
    pub(crate) fn remove(&mut self, term: &[Node], id: u32) -> bool {
        let mut at = 0usize;
        for &n in term {
            match self.child(at, key_of(n)) {
                Some(next) => at = next,
                None => return false,
            }
        }
        let entries = &mut self.nodes[at].entries;
        match entries.iter().position(|&e| e == id) {
            Some(i) => {
                entries.remove(i);
                self.len -= 1;
                true
            }
            None => false,
        }
    }

    /// Entries that may be generalizations of `query` (may subsume it).
    /// `ends` is the subterm table of `query`.
    pub(crate) fn generalizations(&self, query: &[Node], ends: &[u32], out: &mut Vec<u32>) {
        out.clear();
        self.generalize_from(0, query, ends, 0, out);
    }

    fn generalize_from(
        &self,
        at: usize,
        query: &[Node],
        ends: &[u32],
        pos: usize,
        out: &mut Vec<u32>,
    ) {
        if pos == query.len() {
            out.extend_from_slice(&self.nodes[at].entries);
            return;
        }
        let qkey = key_of(query[pos]);
        for &(key, child) in &self.nodes[at].children {
            if key == STAR {
                self.generalize_from(child as usize, query, ends, ends[pos] as usize, out);
            } else if key == qkey {
                self.generalize_from(child as usize, query, ends, pos + 1, out);
            }
        }
    }

    /// Entries that may be instances of `query` (may be subsumed by it).
    pub(crate) fn instances(&self, query: &[Node], out: &mut Vec<u32>) {
        out.clear();
        self.instances_from(0, query, 0, out);
    }

    fn instances_from(&self, at: usize, query: &[Node], pos: usize, out: &mut Vec<u32>) {
        if pos == query.len() {
            out.extend_from_slice(&self.nodes[at].entries);
            return;
        }
        let qkey = key_of(query[pos]);
        if qkey == STAR {
            let mut after = Vec::new();
            self.skip_term(at, 1, &mut after);
            for next in after {
                self.instances_from(next, query, pos + 1, out);
            }
        } else if let Some(child) = self.child(at, qkey) {
            self.instances_from(child, query, pos + 1, out);
        }
    }

    /// Trie positions reached after consuming `pending` complete terms.
    fn skip_term(&self, at: usize, pending: usize, out: &mut Vec<usize>) {
        for &(key, child) in &self.nodes[at].children {
            let left = pending - 1 + key_arity(key);
            if left == 0 {
                out.push(child as usize);
            } else {
                self.skip_term(child as usize, left, out);
            }
        }
    }
}
