use thiserror::Error;

use super::{Proof, StepKind, VerifyError};
use crate::par::Parallelism;
use crate::search::{replay_with_blocking, saturate, Hint, SearchConfig, SearchError, TargetSet};

#[derive(Debug, Clone)]
pub struct ShortenBudget {
    /// Maximum number of improvement rounds.
    pub rounds: usize,
    /// Also try blocking each step in turn when the guided rerun finds
    /// nothing shorter.
    pub replay: bool,
    pub parallelism: Parallelism,
}

impl Default for ShortenBudget {
    fn default() -> Self {
        ShortenBudget {
            rounds: 8,
            replay: true,
            parallelism: Parallelism::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ShortenReport {
    pub proof: Proof,
    /// Length after each adopted improvement, starting with the input's.
    pub lengths: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShortenError {
    #[error("input proof does not verify: {0}")]
    Unverified(#[from] VerifyError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// Repeatedly reruns the search with the current proof's steps as hints and
/// ancestor subsumption on, then with each step blocked in turn, adopting
/// any strictly shorter verified proof.
pub fn shorten(
    p: &Proof,
    targets: &TargetSet,
    config: &SearchConfig,
    budget: &ShortenBudget,
) -> Result<ShortenReport, ShortenError> {
    p.verify()?;
    let mut current = p.pruned();
    let mut lengths = vec![current.length()];
    let sos: Vec<_> = current.axioms().map(|s| s.formula.clone()).collect();
    let mut base = config.clone();
    base.ancestor_subsumption = true;

    for _ in 0..budget.rounds {
        let length = current.length();
        let mut guided = base.clone();
        guided.hints = current
            .steps
            .iter()
            .filter(|s| s.kind != StepKind::Axiom)
            .map(|s| Hint {
                formula: s.formula.clone(),
                value: 1,
            })
            .collect();
        let mut best = saturate(&sos, guided, targets)?
            .joint_proof
            .filter(|q| q.verify().is_ok() && q.length() < length);
        if best.is_none() && budget.replay {
            best = replay_with_blocking(&current, &base, targets, budget.parallelism)?
                .into_iter()
                .filter(|r| r.shorter)
                .filter_map(|r| r.outcome.joint_proof)
                .min_by_key(Proof::length);
        }
        match best {
            Some(q) => {
                lengths.push(q.length());
                current = q;
            }
            None => break,
        }
    }
    Ok(ShortenReport {
        proof: current,
        lengths,
    })
}
