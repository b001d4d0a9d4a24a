//! Proof objects: DAGs of condensed-detachment steps, an independent checker,
//! a text format, extraction from a search and a shortening loop.

mod extract;
mod shorten;
mod text;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::formula::Formula;
use crate::unify::{condensed_detach, subsumes};

pub use extract::{extract_proof, Derivations, ExtractError};
pub use shorten::{shorten, ShortenBudget, ShortenError, ShortenReport};
pub use text::{parse_proof, render, ProofParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    Axiom,
    Cd { major: u32, minor: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    pub id: u32,
    pub kind: StepKind,
    pub formula: Formula,
}

/// A named goal and the step claimed to establish it. When `formula` is
/// present the step must be a variant of it or subsume it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTarget {
    pub name: String,
    pub step: u32,
    pub formula: Option<Formula>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Proof {
    pub steps: Vec<ProofStep>,
    pub targets: Vec<ProofTarget>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ProofMetrics {
    pub length: usize,
    pub level: usize,
    pub max_weight: usize,
    pub max_distinct_vars: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("step {0} does not follow from its premisses")]
    StepMismatch(u32),
    #[error("step {0} refers to a missing or later step")]
    BadReference(u32),
    #[error("step id {0} is used twice")]
    DuplicateStep(u32),
    #[error("target {0} is not established by its step")]
    TargetUnproved(String),
}

impl Proof {
    pub fn step(&self, id: u32) -> Option<&ProofStep> {
        self.steps.iter().find(|s| s.id == id)
    }

    pub fn target(&self, name: &str) -> Option<&ProofTarget> {
        self.targets.iter().find(|t| t.name == name)
    }

    pub fn axioms(&self) -> impl Iterator<Item = &ProofStep> {
        self.steps.iter().filter(|s| s.kind == StepKind::Axiom)
    }

    /// Number of condensed-detachment steps.
    pub fn length(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| s.kind != StepKind::Axiom)
            .count()
    }

    /// Ids of `root` and everything it depends on.
    pub fn ancestors(&self, root: u32) -> BTreeSet<u32> {
        let by_id: BTreeMap<u32, &ProofStep> = self.steps.iter().map(|s| (s.id, s)).collect();
        let mut seen = BTreeSet::new();
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            if let Some(StepKind::Cd { major, minor }) = by_id.get(&id).map(|s| s.kind) {
                stack.push(major);
                stack.push(minor);
            }
        }
        seen
    }

    /// Condensed-detachment steps needed for one target alone.
    pub fn length_for(&self, target: &str) -> Option<usize> {
        let t = self.target(target)?;
        let ancestors = self.ancestors(t.step);
        Some(
            self.steps
                .iter()
                .filter(|s| s.kind != StepKind::Axiom && ancestors.contains(&s.id))
                .count(),
        )
    }

    /// Drops deduced steps no target depends on.
    pub fn pruned(&self) -> Proof {
        let mut needed = BTreeSet::new();
        for t in &self.targets {
            needed.extend(self.ancestors(t.step));
        }
        Proof {
            steps: self
                .steps
                .iter()
                .filter(|s| s.kind == StepKind::Axiom || needed.contains(&s.id))
                .cloned()
                .collect(),
            targets: self.targets.clone(),
        }
    }

    /// Recomputes every step and target and returns the proof's metrics.
    /// Uses nothing beyond formula operations and condensed detachment.
    pub fn verify(&self) -> Result<ProofMetrics, VerifyError> {
        verify(self)
    }
}

pub fn verify(p: &Proof) -> Result<ProofMetrics, VerifyError> {
    let mut levels: BTreeMap<u32, usize> = BTreeMap::new();
    let mut formulas: BTreeMap<u32, &Formula> = BTreeMap::new();
    let mut metrics = ProofMetrics::default();
    for step in &p.steps {
        if formulas.contains_key(&step.id) {
            return Err(VerifyError::DuplicateStep(step.id));
        }
        let level = match step.kind {
            StepKind::Axiom => 0,
            StepKind::Cd { major, minor } => {
                if major >= step.id || minor >= step.id {
                    return Err(VerifyError::BadReference(step.id));
                }
                let (Some(maj), Some(min)) = (formulas.get(&major), formulas.get(&minor)) else {
                    return Err(VerifyError::BadReference(step.id));
                };
                match condensed_detach(maj, min) {
                    Ok(c) if c.is_variant(&step.formula) => {}
                    _ => return Err(VerifyError::StepMismatch(step.id)),
                }
                metrics.length += 1;
                metrics.max_weight = metrics.max_weight.max(step.formula.symbol_count());
                metrics.max_distinct_vars = metrics
                    .max_distinct_vars
                    .max(step.formula.distinct_var_count());
                1 + levels[&major].max(levels[&minor])
            }
        };
        metrics.level = metrics.level.max(level);
        levels.insert(step.id, level);
        formulas.insert(step.id, &step.formula);
    }
    for t in &p.targets {
        let Some(f) = formulas.get(&t.step) else {
            return Err(VerifyError::TargetUnproved(t.name.clone()));
        };
        if let Some(goal) = &t.formula {
            if !subsumes(f, goal) {
                return Err(VerifyError::TargetUnproved(t.name.clone()));
            }
        }
    }
    Ok(metrics)
}

impl std::fmt::Display for ProofMetrics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "length={} level={} max_weight={} max_vars={}",
            self.length, self.level, self.max_weight, self.max_distinct_vars
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn f(text: &str) -> Formula {
        parse_formula(text).unwrap()
    }

    fn tiny() -> Proof {
        let sym = f("e(e(x,y),e(y,x))");
        let trans = f("e(e(x,y),e(e(y,z),e(x,z)))");
        let s3 = condensed_detach(&trans, &sym).unwrap();
        let s4 = condensed_detach(&s3, &sym).unwrap();
        Proof {
            steps: vec![
                ProofStep {
                    id: 1,
                    kind: StepKind::Axiom,
                    formula: sym,
                },
                ProofStep {
                    id: 2,
                    kind: StepKind::Axiom,
                    formula: trans,
                },
                ProofStep {
                    id: 3,
                    kind: StepKind::Cd { major: 2, minor: 1 },
                    formula: s3,
                },
                ProofStep {
                    id: 4,
                    kind: StepKind::Cd { major: 3, minor: 1 },
                    formula: s4,
                },
            ],
            targets: vec![ProofTarget {
                name: "r".into(),
                step: 4,
                formula: Some(f("e(e(x,y),e(x,y))")),
            }],
        }
    }

    #[test]
    fn small_proof_verifies() {
        let p = tiny();
        let m = p.verify().unwrap();
        assert_eq!(m.length, 2);
        assert_eq!(m.level, 2);
        assert_eq!(p.length_for("r"), Some(2));
        assert_eq!(p.step(4).unwrap().formula.to_string(), "e(e(x,y),e(x,y))");
    }

    #[test]
    fn tampering_is_caught() {
        let mut p = tiny();
        p.steps[2].formula = f("e(x,x)");
        assert_eq!(p.verify(), Err(VerifyError::StepMismatch(3)));

        let mut p = tiny();
        p.steps[3].kind = StepKind::Cd { major: 3, minor: 9 };
        assert_eq!(p.verify(), Err(VerifyError::BadReference(4)));

        let mut p = tiny();
        p.targets[0].formula = Some(f("e(e(x,y),e(y,x))"));
        assert_eq!(p.verify(), Err(VerifyError::TargetUnproved("r".into())));

        let mut p = tiny();
        p.steps[1].id = 1;
        assert_eq!(p.verify(), Err(VerifyError::DuplicateStep(1)));
    }

    #[test]
    fn pruning_keeps_axioms_and_ancestors() {
        let mut p = tiny();
        p.targets[0].step = 3;
        p.targets[0].formula = None;
        let q = p.pruned();
        assert_eq!(q.steps.len(), 3);
        assert_eq!(q.length(), 1);
    }
}
