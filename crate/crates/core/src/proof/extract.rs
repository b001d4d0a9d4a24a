use std::collections::BTreeMap;

use thiserror::Error;

use super::{Proof, ProofStep, ProofTarget, StepKind};
use crate::formula::Formula;

/// Read access to a store of derived formulas.
pub trait Derivations {
    fn formula(&self, id: u32) -> Option<&Formula>;
    /// `None` for an unknown id, `Some(None)` for an input.
    fn parents(&self, id: u32) -> Option<Option<(u32, u32)>>;
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("clause {0} is not in the store")]
    Dangling(u32),
    #[error("derivation of clause {0} is cyclic")]
    Cycle(u32),
}

/// Collects every step the targets depend on. Steps keep their store ids
/// when those are already in dependency order; otherwise all steps are
/// renumbered from 1 in a dependency-respecting order.
pub fn extract_proof(
    store: &impl Derivations,
    targets: &[ProofTarget],
) -> Result<Proof, ExtractError> {
    // Post-order DFS, children visited lowest id first.
    let mut order: Vec<u32> = Vec::new();
    let mut state: BTreeMap<u32, bool> = BTreeMap::new(); // false: open, true: done
    let mut roots: Vec<u32> = targets.iter().map(|t| t.step).collect();
    roots.sort_unstable();
    roots.dedup();
    for root in roots {
        let mut stack = vec![(root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if expanded {
                state.insert(id, true);
                order.push(id);
                continue;
            }
            match state.get(&id) {
                Some(true) => continue,
                Some(false) => return Err(ExtractError::Cycle(id)),
                None => {}
            }
            let parents = store.parents(id).ok_or(ExtractError::Dangling(id))?;
            state.insert(id, false);
            stack.push((id, true));
            if let Some((major, minor)) = parents {
                let (lo, hi) = if major <= minor {
                    (major, minor)
                } else {
                    (minor, major)
                };
                for p in [hi, lo] {
                    if state.get(&p) == Some(&false) {
                        return Err(ExtractError::Cycle(p));
                    }
                    if !state.contains_key(&p) {
                        stack.push((p, false));
                    }
                }
            }
        }
    }

    let ordered = order.iter().all(|&id| match store.parents(id) {
        Some(Some((a, b))) => a < id && b < id,
        _ => true,
    });
    let renumber: BTreeMap<u32, u32> = if ordered {
        order.sort_unstable();
        order.iter().map(|&id| (id, id)).collect()
    } else {
        order
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, i as u32 + 1))
            .collect()
    };

    let steps = order
        .iter()
        .map(|&id| {
            let formula = store.formula(id).ok_or(ExtractError::Dangling(id))?.clone();
            let kind = match store.parents(id).flatten() {
                None => StepKind::Axiom,
                Some((major, minor)) => StepKind::Cd {
                    major: renumber[&major],
                    minor: renumber[&minor],
                },
            };
            Ok(ProofStep {
                id: renumber[&id],
                kind,
                formula,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Proof {
        steps,
        targets: targets
            .iter()
            .map(|t| ProofTarget {
                step: renumber[&t.step],
                ..t.clone()
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::unify::condensed_detach;

    struct Store(BTreeMap<u32, (Formula, Option<(u32, u32)>)>);

    impl Derivations for Store {
        fn formula(&self, id: u32) -> Option<&Formula> {
            self.0.get(&id).map(|e| &e.0)
        }
        fn parents(&self, id: u32) -> Option<Option<(u32, u32)>> {
            self.0.get(&id).map(|e| e.1)
        }
    }

    fn store(parents_of_4: (u32, u32)) -> Store {
        let xcb = parse_formula("e(x,e(e(e(x,y),e(z,y)),z))").unwrap();
        let a = condensed_detach(&xcb, &xcb).unwrap();
        let b = condensed_detach(&a, &xcb).unwrap();
        let mut m = BTreeMap::new();
        m.insert(1, (xcb.clone(), None));
        m.insert(2, (a, Some((1, 1))));
        m.insert(3, (parse_formula("e(x,x)").unwrap(), None));
        m.insert(4, (b, Some(parents_of_4)));
        Store(m)
    }

    fn target(step: u32) -> ProofTarget {
        ProofTarget {
            name: "t".into(),
            step,
            formula: None,
        }
    }

    #[test]
    fn prunes_and_keeps_ids() {
        let p = extract_proof(&store((2, 1)), &[target(4)]).unwrap();
        assert_eq!(
            p.steps.iter().map(|s| s.id).collect::<Vec<_>>(),
            vec![1, 2, 4]
        );
        assert_eq!(p.verify().unwrap().length, 2);
    }

    #[test]
    fn axiom_target_has_no_steps() {
        let p = extract_proof(&store((2, 1)), &[target(3)]).unwrap();
        assert_eq!(p.length(), 0);
        assert_eq!(p.steps.len(), 1);
    }

    #[test]
    fn repointed_parents_are_renumbered() {
        // Step 2 re-pointed to depend on a later clause 5 (same formula as 1).
        let mut s = store((2, 1));
        let xcb = s.0[&1].0.clone();
        s.0.insert(5, (xcb, None));
        s.0.get_mut(&2).unwrap().1 = Some((5, 5));
        let p = extract_proof(&s, &[target(4)]).unwrap();
        assert_eq!(
            p.steps.iter().map(|s| s.id).collect::<Vec<_>>(),
            vec![1, 2, 3, 4]
        );
        assert_eq!(p.targets[0].step, 4);
        assert_eq!(p.verify().unwrap().length, 2);
    }

    #[test]
    fn dangling_and_cyclic_stores() {
        assert_eq!(
            extract_proof(&store((2, 9)), &[target(4)]),
            Err(ExtractError::Dangling(9))
        );
        let mut s = store((2, 1));
        s.0.get_mut(&2).unwrap().1 = Some((4, 1));
        assert!(matches!(
            extract_proof(&s, &[target(4)]),
            Err(ExtractError::Cycle(_))
        ));
    }
}
