use std::time::Duration;

use thiserror::Error;

use crate::formula::Formula;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionMode {
    /// `n` picks by weight, then one by age.
    Ratio(u32),
    BreadthFirst,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hint {
    pub formula: Formula,
    pub value: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Limits {
    pub max_given: Option<usize>,
    pub max_kept: Option<usize>,
    pub wall_clock: Option<Duration>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub mode: SelectionMode,
    pub max_weight: u32,
    pub term_avoidance: bool,
    pub ancestor_subsumption: bool,
    pub blocked: Vec<Formula>,
    pub hints: Vec<Hint>,
    pub max_distinct_vars: Option<usize>,
    pub limits: Limits,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mode: SelectionMode::Ratio(2),
            max_weight: 48,
            term_avoidance: false,
            ancestor_subsumption: false,
            blocked: Vec::new(),
            hints: Vec::new(),
            max_distinct_vars: None,
            limits: Limits::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("pick-given ratio must be at least 1")]
    ZeroRatio,
    #[error("max_weight must be at least 3, got {0}")]
    MaxWeightTooSmall(u32),
    #[error("hint values must be positive")]
    ZeroHintValue,
    #[error("max_distinct_vars must be positive")]
    ZeroVarCap,
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.mode == SelectionMode::Ratio(0) {
            return Err(ConfigError::ZeroRatio);
        }
        if self.max_weight < 3 {
            return Err(ConfigError::MaxWeightTooSmall(self.max_weight));
        }
        if self.hints.iter().any(|h| h.value == 0) {
            return Err(ConfigError::ZeroHintValue);
        }
        if self.max_distinct_vars == Some(0) {
            return Err(ConfigError::ZeroVarCap);
        }
        Ok(())
    }

    /// Every formula as a hint with the same value.
    pub fn with_hints<'a>(
        mut self,
        formulas: impl IntoIterator<Item = &'a Formula>,
        value: u32,
    ) -> Self {
        self.hints.extend(formulas.into_iter().map(|f| Hint {
            formula: f.clone(),
            value,
        }));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedTarget {
    pub name: String,
    pub formula: Formula,
}

impl NamedTarget {
    pub fn new(name: impl Into<String>, formula: &Formula) -> Self {
        NamedTarget {
            name: name.into(),
            formula: formula.canonical_rename(),
        }
    }
}

/// Closes once every member has been proved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conjunction {
    pub name: String,
    pub members: Vec<NamedTarget>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TargetSet {
    pub units: Vec<NamedTarget>,
    pub conjunctions: Vec<Conjunction>,
}

impl TargetSet {
    pub fn unit(name: impl Into<String>, formula: &Formula) -> Self {
        TargetSet {
            units: vec![NamedTarget::new(name, formula)],
            conjunctions: Vec::new(),
        }
    }

    pub fn conjunction<'a>(
        name: impl Into<String>,
        members: impl IntoIterator<Item = (&'a str, &'a Formula)>,
    ) -> Self {
        TargetSet {
            units: Vec::new(),
            conjunctions: vec![Conjunction {
                name: name.into(),
                members: members
                    .into_iter()
                    .map(|(n, f)| NamedTarget::new(n, f))
                    .collect(),
            }],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty() && self.conjunctions.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert_eq!(SearchConfig::default().validate(), Ok(()));
        let bad = SearchConfig {
            mode: SelectionMode::Ratio(0),
            ..SearchConfig::default()
        };
        assert_eq!(bad.validate(), Err(ConfigError::ZeroRatio));
        let bad = SearchConfig {
            max_weight: 2,
            ..SearchConfig::default()
        };
        assert_eq!(bad.validate(), Err(ConfigError::MaxWeightTooSmall(2)));
    }
}
