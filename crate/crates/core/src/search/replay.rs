use super::{saturate, Hint, SearchConfig, SearchError, SearchOutcome, TargetSet};
use crate::par::{map_init, Parallelism};
use crate::proof::{Proof, StepKind};

#[derive(Debug, Clone)]
pub struct ReplayOutcome {
    pub blocked_step: u32,
    pub outcome: SearchOutcome,
    /// The run closed every target with fewer steps than the replayed proof.
    pub shorter: bool,
}

impl ReplayOutcome {
    pub fn length(&self) -> Option<usize> {
        self.outcome.joint_proof.as_ref().map(Proof::length)
    }
}

/// One search per deduced step of `p`, with that step's formula blocked and
/// every step of `p` as a hint of value 1. The input configuration's other
/// settings apply to every run.
pub fn replay_with_blocking(
    p: &Proof,
    config: &SearchConfig,
    targets: &TargetSet,
    parallelism: Parallelism,
) -> Result<Vec<ReplayOutcome>, SearchError> {
    let sos: Vec<_> = p.axioms().map(|s| s.formula.clone()).collect();
    if sos.is_empty() {
        return Err(SearchError::EmptySos);
    }
    config.validate()?;
    let mut base = config.clone();
    base.hints.extend(
        p.steps
            .iter()
            .filter(|s| s.kind != StepKind::Axiom)
            .map(|s| Hint {
                formula: s.formula.clone(),
                value: 1,
            }),
    );
    let blocked: Vec<_> = p
        .steps
        .iter()
        .filter(|s| s.kind != StepKind::Axiom)
        .collect();
    let length = p.length();
    Ok(map_init(
        &blocked,
        parallelism,
        || (),
        |_, step| {
            let mut config = base.clone();
            config.blocked.push(step.formula.clone());
            let outcome = saturate(&sos, config, targets).expect("inputs checked above");
            let shorter = outcome
                .joint_proof
                .as_ref()
                .is_some_and(|q| q.verify().is_ok() && q.length() < length);
            ReplayOutcome {
                blocked_step: step.id,
                outcome,
                shorter,
            }
        },
    ))
}
