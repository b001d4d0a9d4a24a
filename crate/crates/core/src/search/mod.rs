//! Given-clause saturation with condensed detachment, and level census.

mod agenda;
mod census;
mod config;
mod index;
mod problem;
mod replay;
mod saturate;

pub use census::{level_census, level_closure, Census, CensusError, CensusLevel, CensusOptions};
pub use config::{
    ConfigError, Conjunction, Hint, Limits, NamedTarget, SearchConfig, SelectionMode, TargetSet,
};
pub use problem::{parse_mode, parse_problem, parse_switch, Problem, ProblemError};
pub use replay::{replay_with_blocking, ReplayOutcome};
pub use saturate::{
    saturate, ClauseRecord, DiscardReason, Processed, Search, SearchError, SearchOutcome,
    SearchStats, Termination,
};
