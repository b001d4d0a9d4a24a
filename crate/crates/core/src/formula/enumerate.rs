use super::{Formula, Node};

/// All `e`-formulas of `symbol_count` symbols in which every variable occurs
/// exactly twice, canonically renamed, one per variance class, sorted by text.
///
/// A formula with `k` leaves has `2k - 1` symbols and needs `k` even, so the
/// result is empty unless `symbol_count ≡ 3 (mod 4)`.
pub fn enumerate_two_property_theorems(symbol_count: usize) -> Vec<Formula> {
    build(symbol_count, pairings)
}

/// All `e`-formulas of `symbol_count` symbols in which every variable occurs
/// an even number of times, in the same form as
/// [`enumerate_two_property_theorems`].
pub fn enumerate_ec_theorems(symbol_count: usize) -> Vec<Formula> {
    build(symbol_count, even_labelings)
}

fn build(symbol_count: usize, labelings: fn(usize) -> Vec<Vec<u32>>) -> Vec<Formula> {
    if symbol_count.is_multiple_of(2) {
        return Vec::new();
    }
    let leaves = symbol_count.div_ceil(2);
    if !leaves.is_multiple_of(2) {
        return Vec::new();
    }
    let shapes = tree_shapes(leaves);
    let labelings = labelings(leaves);
    let mut out: Vec<Formula> = Vec::with_capacity(shapes.len() * labelings.len());
    for shape in &shapes {
        for labels in &labelings {
            let mut next_leaf = labels.iter();
            let nodes = shape
                .iter()
                .map(|&is_e| {
                    if is_e {
                        Node::E
                    } else {
                        Node::var(*next_leaf.next().unwrap())
                    }
                })
                .collect();
            out.push(Formula::from_nodes(nodes));
        }
    }
    let mut keyed: Vec<(String, Formula)> = out.into_iter().map(|f| (f.to_string(), f)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, f)| f).collect()
}

/// Binary tree shapes with `leaves` leaves, in prefix order (`true` = `e`).
fn tree_shapes(leaves: usize) -> Vec<Vec<bool>> {
    if leaves == 1 {
        return vec![vec![false]];
    }
    let mut shapes = Vec::new();
    for left in 1..leaves {
        let lefts = tree_shapes(left);
        let rights = tree_shapes(leaves - left);
        for l in &lefts {
            for r in &rights {
                let mut shape = Vec::with_capacity(2 * leaves - 1);
                shape.push(true);
                shape.extend_from_slice(l);
                shape.extend_from_slice(r);
                shapes.push(shape);
            }
        }
    }
    shapes
}

/// Leaf labelings in which every label occurs twice and labels are numbered
/// by first occurrence.
fn pairings(leaves: usize) -> Vec<Vec<u32>> {
    fn extend(slots: &mut [Option<u32>], next: u32, out: &mut Vec<Vec<u32>>) {
        let Some(first) = slots.iter().position(Option::is_none) else {
            out.push(slots.iter().map(|s| s.unwrap()).collect());
            return;
        };
        slots[first] = Some(next);
        for partner in first + 1..slots.len() {
            if slots[partner].is_none() {
                slots[partner] = Some(next);
                extend(slots, next + 1, out);
                slots[partner] = None;
            }
        }
        slots[first] = None;
    }
    let mut out = Vec::new();
    if leaves.is_multiple_of(2) {
        extend(&mut vec![None; leaves], 0, &mut out);
    }
    out
}

/// Restricted growth strings (labels numbered by first occurrence) in which
/// every label occurs an even number of times.
fn even_labelings(leaves: usize) -> Vec<Vec<u32>> {
    fn extend(
        prefix: &mut Vec<u32>,
        counts: &mut Vec<usize>,
        leaves: usize,
        out: &mut Vec<Vec<u32>>,
    ) {
        let left = leaves - prefix.len();
        let odd = counts.iter().filter(|&&c| c % 2 == 1).count();
        if odd > left {
            return;
        }
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for label in 0..=counts.len() {
            if label == counts.len() {
                counts.push(0);
            }
            counts[label] += 1;
            prefix.push(label as u32);
            extend(prefix, counts, leaves, out);
            prefix.pop();
            counts[label] -= 1;
            if counts[label] == 0 {
                counts.pop();
            }
        }
    }
    let mut out = Vec::new();
    if leaves.is_multiple_of(2) {
        extend(
            &mut Vec::with_capacity(leaves),
            &mut Vec::new(),
            leaves,
            &mut out,
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use std::collections::BTreeSet;

    /// Every labeling of the leaves by `k` variables, kept when it has the
    /// 2-property, deduplicated by canonical form.
    fn brute_force(symbol_count: usize) -> BTreeSet<Formula> {
        brute_force_by(symbol_count, |f| f.two_property())
    }

    fn brute_force_by(symbol_count: usize, keep: impl Fn(&Formula) -> bool) -> BTreeSet<Formula> {
        let leaves = symbol_count.div_ceil(2);
        let mut out = BTreeSet::new();
        for shape in tree_shapes(leaves) {
            let total = (leaves as u64).pow(leaves as u32);
            for code in 0..total {
                let mut c = code;
                let labels: Vec<u32> = (0..leaves)
                    .map(|_| {
                        let l = (c % leaves as u64) as u32;
                        c /= leaves as u64;
                        l
                    })
                    .collect();
                let mut it = labels.iter();
                let nodes = shape
                    .iter()
                    .map(|&e| {
                        if e {
                            Node::E
                        } else {
                            Node::var(*it.next().unwrap())
                        }
                    })
                    .collect();
                let f = Formula::from_nodes(nodes);
                if keep(&f) {
                    out.insert(f.canonical_rename());
                }
            }
        }
        out
    }

    fn catalan(n: u64) -> u64 {
        (0..n).fold(1, |c, i| c * 2 * (2 * i + 1) / (i + 2))
    }

    fn double_factorial(n: u64) -> u64 {
        (1..=n).rev().step_by(2).product::<u64>().max(1)
    }

    #[test]
    fn matches_brute_force() {
        for n in [1, 3, 5, 7, 9, 11] {
            let fast: BTreeSet<Formula> = enumerate_two_property_theorems(n).into_iter().collect();
            assert_eq!(fast, brute_force(n), "n = {n}");
        }
    }

    #[test]
    fn even_occurrences_match_brute_force() {
        for n in [1, 3, 5, 7, 9, 11] {
            let fast: BTreeSet<Formula> = enumerate_ec_theorems(n).into_iter().collect();
            let slow = brute_force_by(n, |f| f.is_ec_theorem() == Ok(true));
            assert_eq!(fast, slow, "n = {n}");
        }
        // 5 shapes times (3 pairings + 1 all-equal labeling)
        assert_eq!(enumerate_ec_theorems(7).len(), 20);
        // 42 shapes times (15 + 15 + 1)
        assert_eq!(enumerate_ec_theorems(11).len(), 1302);
    }

    #[test]
    fn count_is_shapes_times_pairings() {
        for n in [3usize, 5, 7] {
            let leaves = n.div_ceil(2) as u64;
            let pairings = if leaves.is_multiple_of(2) {
                double_factorial(leaves - 1)
            } else {
                0
            };
            let expected = catalan(leaves - 1) * pairings;
            assert_eq!(brute_force(n).len() as u64, expected);
            assert_eq!(enumerate_two_property_theorems(n).len() as u64, expected);
        }
    }

    #[test]
    fn known_counts() {
        assert_eq!(
            enumerate_two_property_theorems(3),
            vec![parse_formula("e(x,x)").unwrap()]
        );
        assert!(enumerate_two_property_theorems(5).is_empty());
        assert!(enumerate_two_property_theorems(8).is_empty());
        assert_eq!(enumerate_two_property_theorems(7).len(), 15);
        assert_eq!(enumerate_two_property_theorems(11).len(), 630);
    }

    #[test]
    fn output_is_sorted_canonical_and_theorems() {
        let all = enumerate_two_property_theorems(11);
        let texts: Vec<String> = all.iter().map(|f| f.to_string()).collect();
        let mut sorted = texts.clone();
        sorted.sort();
        assert_eq!(texts, sorted);
        for f in &all {
            assert!(f.is_canonical());
            assert!(f.two_property());
            assert_eq!(f.is_ec_theorem(), Ok(true));
        }
        let xcb = parse_formula("e(x,e(e(e(x,y),e(z,y)),z))").unwrap();
        assert!(all.contains(&xcb));
    }
}
