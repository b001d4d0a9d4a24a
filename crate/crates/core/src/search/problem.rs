//! Problem files.
//!
//! ```text
//! [sos]
//! @XCB
//! [hints value=1]
//! e(e(x,y),e(y,x))
//! [basis-target two_basis]
//! transitivity: e(e(x,y),e(e(y,z),e(x,z)))
//! symmetry: @symmetry
//! [params]
//! mode = ratio:2
//! max_weight = 48
//! ```
//!
//! `@name` stands for a corpus formula. Target lines may carry a `name:`
//! prefix. `%` starts a comment line.

use std::time::Duration;

use thiserror::Error;

use super::{Conjunction, Hint, NamedTarget, SearchConfig, SelectionMode, TargetSet};
use crate::corpus;
use crate::formula::{Formula, FormulaParser, ParseError};

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub sos: Vec<Formula>,
    pub config: SearchConfig,
    pub targets: TargetSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("line {line}: unknown section header {header:?}")]
    UnknownSection { line: usize, header: String },
    #[error("line {line}: content outside any section")]
    OutsideSection { line: usize },
    #[error("line {line}: bad formula: {source}")]
    Formula {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("line {line}: unknown corpus formula {name:?}")]
    UnknownFormula { line: usize, name: String },
    #[error("line {line}: unknown parameter {key:?}")]
    UnknownParam { line: usize, key: String },
    #[error("line {line}: bad value {value:?} for {key}")]
    BadValue {
        line: usize,
        key: String,
        value: String,
    },
    #[error("the problem has no [sos] formulas")]
    EmptySos,
}

enum Section {
    Sos,
    Hints(u32),
    Targets,
    Basis(usize),
    Blocked,
    Params,
}

pub fn parse_problem(text: &str) -> Result<Problem, ProblemError> {
    let mut problem = Problem {
        sos: Vec::new(),
        config: SearchConfig::default(),
        targets: TargetSet::default(),
    };
    let mut parser = FormulaParser::new();
    let mut section: Option<Section> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        if let Some(header) = trimmed.strip_prefix('[').and_then(|h| h.strip_suffix(']')) {
            section = Some(open_section(header.trim(), line, &mut problem.targets)?);
            continue;
        }
        let Some(current) = &section else {
            return Err(ProblemError::OutsideSection { line });
        };
        match *current {
            Section::Params => param(trimmed, line, &mut problem.config)?,
            Section::Sos => problem.sos.push(formula(trimmed, line, &mut parser)?),
            Section::Blocked => problem
                .config
                .blocked
                .push(formula(trimmed, line, &mut parser)?),
            Section::Hints(value) => problem.config.hints.push(Hint {
                formula: formula(trimmed, line, &mut parser)?,
                value,
            }),
            Section::Targets => {
                let t = named(trimmed, line, &mut parser)?;
                problem.targets.units.push(t);
            }
            Section::Basis(k) => {
                let t = named(trimmed, line, &mut parser)?;
                problem.targets.conjunctions[k].members.push(t);
            }
        }
    }
    if problem.sos.is_empty() {
        return Err(ProblemError::EmptySos);
    }
    Ok(problem)
}

fn open_section(
    header: &str,
    line: usize,
    targets: &mut TargetSet,
) -> Result<Section, ProblemError> {
    let unknown = || ProblemError::UnknownSection {
        line,
        header: header.to_string(),
    };
    let mut words = header.split_whitespace();
    let section = match (words.next(), words.next(), words.next()) {
        (Some("sos"), None, _) => Section::Sos,
        (Some("targets"), None, _) => Section::Targets,
        (Some("blocked"), None, _) => Section::Blocked,
        (Some("params"), None, _) => Section::Params,
        (Some("hints"), None, _) => Section::Hints(1),
        (Some("hints"), Some(arg), None) => {
            let value = arg
                .strip_prefix("value=")
                .and_then(|v| v.parse::<u32>().ok())
                .filter(|&v| v > 0)
                .ok_or_else(unknown)?;
            Section::Hints(value)
        }
        (Some("basis-target"), Some(name), None) => {
            targets.conjunctions.push(Conjunction {
                name: name.to_string(),
                members: Vec::new(),
            });
            Section::Basis(targets.conjunctions.len() - 1)
        }
        _ => return Err(unknown()),
    };
    Ok(section)
}

fn formula(text: &str, line: usize, parser: &mut FormulaParser) -> Result<Formula, ProblemError> {
    if let Some(name) = text.strip_prefix('@') {
        return corpus::get(name.trim())
            .map(|e| e.formula.clone())
            .map_err(|_| ProblemError::UnknownFormula {
                line,
                name: name.trim().to_string(),
            });
    }
    parser
        .parse(text)
        .map_err(|source| ProblemError::Formula { line, source })
}

fn named(text: &str, line: usize, parser: &mut FormulaParser) -> Result<NamedTarget, ProblemError> {
    match text.split_once(':') {
        Some((name, rest)) => Ok(NamedTarget::new(
            name.trim(),
            &formula(rest.trim(), line, parser)?,
        )),
        None => {
            let f = formula(text, line, parser)?;
            let name = match text.strip_prefix('@') {
                Some(n) => n.trim().to_string(),
                None => f.canonical_rename().to_string(),
            };
            Ok(NamedTarget::new(name, &f))
        }
    }
}

fn param(text: &str, line: usize, config: &mut SearchConfig) -> Result<(), ProblemError> {
    let (key, value) = text
        .split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .ok_or_else(|| ProblemError::UnknownParam {
            line,
            key: text.to_string(),
        })?;
    let bad = || ProblemError::BadValue {
        line,
        key: key.to_string(),
        value: value.to_string(),
    };
    let positive = || value.parse::<u64>().ok().filter(|&n| n > 0).ok_or_else(bad);
    match key {
        "mode" => config.mode = parse_mode(value).ok_or_else(bad)?,
        "max_weight" => config.max_weight = u32::try_from(positive()?).map_err(|_| bad())?,
        "term_avoidance" => config.term_avoidance = parse_switch(value).ok_or_else(bad)?,
        "ancestor_subsumption" => {
            config.ancestor_subsumption = parse_switch(value).ok_or_else(bad)?
        }
        "max_distinct_vars" => config.max_distinct_vars = Some(positive()? as usize),
        "max_given" => config.limits.max_given = Some(positive()? as usize),
        "max_kept" => config.limits.max_kept = Some(positive()? as usize),
        "wall_clock_secs" => config.limits.wall_clock = Some(Duration::from_secs(positive()?)),
        _ => {
            return Err(ProblemError::UnknownParam {
                line,
                key: key.to_string(),
            })
        }
    }
    Ok(())
}

/// `ratio:<n>` or `bfs`.
pub fn parse_mode(text: &str) -> Option<SelectionMode> {
    match text {
        "bfs" => Some(SelectionMode::BreadthFirst),
        _ => text
            .strip_prefix("ratio:")?
            .parse::<u32>()
            .ok()
            .filter(|&n| n > 0)
            .map(SelectionMode::Ratio),
    }
}

/// `on` or `off`.
pub fn parse_switch(text: &str) -> Option<bool> {
    match text {
        "on" => Some(true),
        "off" => Some(false),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    const SAMPLE: &str = "\
% sample
[sos]
@XCB
[hints value=2]
e(e(x,y),e(y,x))
[targets]
refl: e(x,x)
e(e(e(x,y),x),y)
[basis-target two]
@transitivity
sym: P(e(e(a,b),e(b,a))).
[blocked]
e(e(x,y),e(x,y))
[params]
mode = bfs
max_weight = 31
term_avoidance = on
ancestor_subsumption = off
max_distinct_vars = 12
max_given = 100
max_kept = 1000
wall_clock_secs = 60
";

    #[test]
    fn parses_every_section() {
        let p = parse_problem(SAMPLE).unwrap();
        assert_eq!(p.sos, vec![corpus::get("XCB").unwrap().formula.clone()]);
        assert_eq!(p.config.hints.len(), 1);
        assert_eq!(p.config.hints[0].value, 2);
        assert_eq!(p.targets.units[0].name, "refl");
        assert_eq!(p.targets.units[1].name, "e(e(e(x,y),x),y)");
        let basis = &p.targets.conjunctions[0];
        assert_eq!(basis.name, "two");
        assert_eq!(basis.members[0].name, "transitivity");
        assert_eq!(
            basis.members[1].formula,
            parse_formula("e(e(x,y),e(y,x))").unwrap()
        );
        assert_eq!(p.config.blocked.len(), 1);
        assert_eq!(p.config.mode, SelectionMode::BreadthFirst);
        assert_eq!(p.config.max_weight, 31);
        assert!(p.config.term_avoidance);
        assert!(!p.config.ancestor_subsumption);
        assert_eq!(p.config.max_distinct_vars, Some(12));
        assert_eq!(p.config.limits.max_given, Some(100));
        assert_eq!(p.config.limits.max_kept, Some(1000));
        assert_eq!(p.config.limits.wall_clock, Some(Duration::from_secs(60)));
    }

    #[test]
    fn errors_carry_lines() {
        assert_eq!(
            parse_problem("e(x,x)"),
            Err(ProblemError::OutsideSection { line: 1 })
        );
        assert!(matches!(
            parse_problem("[sos]\n@XCB\n[lemmas]"),
            Err(ProblemError::UnknownSection { line: 3, .. })
        ));
        assert!(matches!(
            parse_problem("[sos]\ne(x,x\n"),
            Err(ProblemError::Formula { line: 2, .. })
        ));
        assert!(matches!(
            parse_problem("[sos]\n@XCB\n[params]\nmode = ratio:0"),
            Err(ProblemError::BadValue { line: 4, .. })
        ));
        assert!(matches!(
            parse_problem("[sos]\n@XCB\n[params]\ncolour = red"),
            Err(ProblemError::UnknownParam { line: 4, .. })
        ));
        assert!(matches!(
            parse_problem("[sos]\n@nope"),
            Err(ProblemError::UnknownFormula { line: 2, .. })
        ));
        assert_eq!(parse_problem("[sos]\n"), Err(ProblemError::EmptySos));
    }

    #[test]
    fn modes_and_switches() {
        assert_eq!(parse_mode("ratio:3"), Some(SelectionMode::Ratio(3)));
        assert_eq!(parse_mode("ratio:"), None);
        assert_eq!(parse_mode("dfs"), None);
        assert_eq!(parse_switch("on"), Some(true));
        assert_eq!(parse_switch("yes"), None);
    }
}
