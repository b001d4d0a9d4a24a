//! Exhaustive condensed-detachment closure by levels.

use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::formula::{contains_variant, Formula, Node};
use crate::par::{map_init, Parallelism};
use crate::unify::{Detached, Engine, Prepared};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("a census needs at least one level")]
    NoLevels,
    #[error("census store exceeded {0} formulas")]
    TooManyFormulas(usize),
}

#[derive(Debug, Clone, Default)]
pub struct CensusOptions {
    pub parallelism: Parallelism,
    /// Abort once the total number of stored formulas would exceed this.
    pub max_formulas: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct CensusLevel {
    /// Formulas first obtained at this level, canonical, sorted by size then
    /// structure.
    pub formulas: Vec<Formula>,
    /// Members of `formulas` with no subformula that is a variant of the
    /// pattern.
    pub exceptions: Vec<Formula>,
}

#[derive(Debug, Clone)]
pub struct Census {
    /// Index 0 holds the seeds.
    pub levels: Vec<CensusLevel>,
}

impl Census {
    /// Number of new formulas at each level, seeds excluded.
    pub fn counts(&self) -> Vec<usize> {
        self.levels[1..].iter().map(|l| l.formulas.len()).collect()
    }

    /// New formulas over levels `1..=k`.
    pub fn cumulative(&self, k: usize) -> usize {
        self.levels[1..=k].iter().map(|l| l.formulas.len()).sum()
    }

    pub fn all_formulas(&self) -> impl Iterator<Item = &Formula> {
        self.levels.iter().flat_map(|l| l.formulas.iter())
    }
}

/// Census from a single seed; see [`level_closure`].
pub fn level_census(
    seed: &Formula,
    levels: usize,
    pattern: Option<&Formula>,
    options: &CensusOptions,
) -> Result<Census, CensusError> {
    level_closure(std::slice::from_ref(seed), levels, pattern, options)
}

/// Level `k+1` holds every conclusion of a pair with at least one premiss at
/// level `k`, in either role, that is not a variant of anything already
/// stored. No size cap and no subsumption.
pub fn level_closure(
    seeds: &[Formula],
    levels: usize,
    pattern: Option<&Formula>,
    options: &CensusOptions,
) -> Result<Census, CensusError> {
    if levels == 0 {
        return Err(CensusError::NoLevels);
    }
    let pattern = pattern.map(|p| p.canonical_rename());
    let mut seen: FxHashSet<Vec<Node>> = FxHashSet::default();
    let mut level0 = Vec::new();
    for s in seeds {
        let s = s.canonical_rename();
        if seen.insert(s.nodes().to_vec()) {
            level0.push(s);
        }
    }
    let mut prepared: Vec<Prepared> = level0.iter().map(Prepared::new).collect();
    let mut out = vec![CensusLevel {
        exceptions: exceptions(&level0, pattern.as_ref(), options.parallelism),
        formulas: level0,
    }];
    let mut frontier = 0..prepared.len();

    for _ in 0..levels {
        let older = &prepared[..frontier.start];
        let current = &prepared[frontier.clone()];
        let units: Vec<usize> = (0..current.len()).collect();
        let produced = map_init(&units, options.parallelism, Engine::new, |engine, &i| {
            let a = &current[i];
            let mut local: FxHashSet<Vec<Node>> = FxHashSet::default();
            let mut keep = |d: Detached| {
                if let Detached::Conclusion(nodes) = d {
                    if !seen.contains(&nodes) {
                        local.insert(nodes);
                    }
                }
            };
            for b in older {
                if a.is_conditional() {
                    keep(engine.detach(a, b, usize::MAX));
                }
                if b.is_conditional() {
                    keep(engine.detach(b, a, usize::MAX));
                }
            }
            if a.is_conditional() {
                for b in current {
                    keep(engine.detach(a, b, usize::MAX));
                }
            }
            local
        });
        let mut fresh: Vec<Vec<Node>> = Vec::new();
        for set in produced {
            for nodes in set {
                if seen.insert(nodes.clone()) {
                    fresh.push(nodes);
                }
            }
        }
        if let Some(max) = options.max_formulas {
            if seen.len() > max {
                return Err(CensusError::TooManyFormulas(max));
            }
        }
        fresh.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let start = prepared.len();
        prepared.extend(fresh.iter().map(|n| Prepared::from_canonical(n.clone())));
        frontier = start..prepared.len();
        let formulas: Vec<Formula> = fresh.into_iter().map(Formula::from_nodes).collect();
        out.push(CensusLevel {
            exceptions: exceptions(&formulas, pattern.as_ref(), options.parallelism),
            formulas,
        });
    }
    Ok(Census { levels: out })
}

fn exceptions(formulas: &[Formula], pattern: Option<&Formula>, mode: Parallelism) -> Vec<Formula> {
    let Some(pattern) = pattern else {
        return Vec::new();
    };
    map_init(
        formulas,
        mode,
        || (),
        |_, f| (!contains_variant(f.nodes(), pattern.nodes())).then(|| f.clone()),
    )
    .into_iter()
    .flatten()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn f(text: &str) -> Formula {
        parse_formula(text).unwrap()
    }

    const XCB: &str = "e(x,e(e(e(x,y),e(z,y)),z))";

    #[test]
    fn reflexivity_closes_immediately() {
        let c = level_census(&f("e(x,x)"), 1, None, &CensusOptions::default()).unwrap();
        assert_eq!(c.counts(), vec![0]);
    }

    #[test]
    fn first_levels_from_xcb() {
        let c = level_census(&f(XCB), 2, Some(&f(XCB)), &CensusOptions::default()).unwrap();
        assert_eq!(
            c.levels[1].formulas,
            vec![f("e(e(e(e(x,e(e(e(x,y),e(z,y)),z)),u),e(v,u)),v)")]
        );
        assert!(c.levels.iter().all(|l| l.exceptions.is_empty()));
        assert_eq!(c.levels[0].formulas.len(), 1);
    }

    #[test]
    fn no_levels_is_an_error() {
        assert_eq!(
            level_census(&f(XCB), 0, None, &CensusOptions::default()).unwrap_err(),
            CensusError::NoLevels
        );
    }

    #[test]
    fn modes_agree_and_prefixes_are_stable() {
        let seq = CensusOptions {
            parallelism: Parallelism::Sequential,
            ..CensusOptions::default()
        };
        let par = CensusOptions {
            parallelism: Parallelism::Parallel,
            ..CensusOptions::default()
        };
        let a = level_census(&f(XCB), 4, None, &seq).unwrap();
        let b = level_census(&f(XCB), 4, None, &par).unwrap();
        let short = level_census(&f(XCB), 3, None, &seq).unwrap();
        for k in 0..=4 {
            assert_eq!(a.levels[k].formulas, b.levels[k].formulas);
        }
        for k in 0..=3 {
            assert_eq!(a.levels[k].formulas, short.levels[k].formulas);
        }
    }

    #[test]
    fn store_limit() {
        let opts = CensusOptions {
            max_formulas: Some(3),
            ..CensusOptions::default()
        };
        assert_eq!(
            level_census(&f(XCB), 5, None, &opts).unwrap_err(),
            CensusError::TooManyFormulas(3)
        );
    }
}
