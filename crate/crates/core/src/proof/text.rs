//! Line format for proofs.
//!
//! ```text
//! 1 [axiom] P(e(x,e(e(e(x,y),e(z,y)),z))).
//! 2 [cd,1,1] P(e(e(e(e(x,e(e(e(x,y),e(z,y)),z)),u),e(v,u)),v)).
//! target lemma 2 P(e(e(e(e(x,e(e(e(x,y),e(z,y)),z)),u),e(v,u)),v)).
//! ```
//!
//! Justifications `[]` and `[hyper,<nucleus>,<major>,<minor>]` are accepted
//! on input. A statement may span several lines and ends with a period;
//! lines starting with `%` are comments.

use std::collections::BTreeSet;
use std::fmt::Write;

use thiserror::Error;

use super::{Proof, ProofStep, ProofTarget, StepKind};
use crate::formula::{FormulaParser, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofParseError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: bad formula: {source}")]
    Formula {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("line {line}: step id {id} is used twice")]
    IdReuse { line: usize, id: u32 },
    #[error("line {line}: step {id} refers to step {reference}, which is not earlier")]
    ForwardReference {
        line: usize,
        id: u32,
        reference: u32,
    },
    #[error("line {line}: step {reference} is not defined")]
    UnknownReference { line: usize, reference: u32 },
    #[error("line {line}: statement is not terminated by a period")]
    Unterminated { line: usize },
}

pub fn render(p: &Proof) -> String {
    let mut out = String::new();
    for s in &p.steps {
        match s.kind {
            StepKind::Axiom => writeln!(out, "{} [axiom] P({}).", s.id, s.formula),
            StepKind::Cd { major, minor } => {
                writeln!(out, "{} [cd,{},{}] P({}).", s.id, major, minor, s.formula)
            }
        }
        .unwrap();
    }
    for t in &p.targets {
        match &t.formula {
            Some(f) => writeln!(out, "target {} {} P({}).", t.name, t.step, f),
            None => writeln!(out, "target {} {}.", t.name, t.step),
        }
        .unwrap();
    }
    match p.verify() {
        Ok(m) => writeln!(out, "% {m}").unwrap(),
        Err(e) => writeln!(out, "% unverified: {e}").unwrap(),
    }
    out
}

pub fn parse_proof(text: &str) -> Result<Proof, ProofParseError> {
    let mut proof = Proof::default();
    let mut parser = FormulaParser::new();
    let mut ids = BTreeSet::new();
    let mut pending = String::new();
    let mut start = 0;
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if pending.is_empty() && (trimmed.is_empty() || trimmed.starts_with('%')) {
            continue;
        }
        if pending.is_empty() {
            start = i + 1;
        } else {
            pending.push(' ');
        }
        pending.push_str(trimmed);
        if trimmed.ends_with('.') {
            statement(&pending, start, &mut parser, &mut ids, &mut proof)?;
            pending.clear();
        }
    }
    if !pending.is_empty() {
        return Err(ProofParseError::Unterminated { line: start });
    }
    Ok(proof)
}

fn malformed(line: usize, reason: impl Into<String>) -> ProofParseError {
    ProofParseError::Malformed {
        line,
        reason: reason.into(),
    }
}

fn number(text: &str, line: usize) -> Result<u32, ProofParseError> {
    match text.trim().parse::<u32>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(malformed(
            line,
            format!("expected a positive step id, found {text:?}"),
        )),
    }
}

fn check_reference(
    id: u32,
    reference: u32,
    line: usize,
    ids: &BTreeSet<u32>,
) -> Result<(), ProofParseError> {
    if reference >= id {
        Err(ProofParseError::ForwardReference {
            line,
            id,
            reference,
        })
    } else if !ids.contains(&reference) {
        Err(ProofParseError::UnknownReference { line, reference })
    } else {
        Ok(())
    }
}

fn statement(
    text: &str,
    line: usize,
    parser: &mut FormulaParser,
    ids: &mut BTreeSet<u32>,
    proof: &mut Proof,
) -> Result<(), ProofParseError> {
    let formula = |parser: &mut FormulaParser, t: &str| {
        parser
            .parse(t)
            .map_err(|source| ProofParseError::Formula { line, source })
    };

    if let Some(rest) = text.strip_prefix("target ") {
        let rest = rest.trim_start();
        let (name, rest) = rest
            .split_once(char::is_whitespace)
            .ok_or_else(|| malformed(line, "target needs a name and a step id"))?;
        let rest = rest.trim_start();
        let (step, formula_text) = match rest.split_once(char::is_whitespace) {
            Some((step, f)) => (step, Some(f)),
            None => (rest.trim_end_matches('.'), None),
        };
        let step = number(step, line)?;
        if !ids.contains(&step) {
            return Err(ProofParseError::UnknownReference {
                line,
                reference: step,
            });
        }
        let formula = formula_text.map(|t| formula(parser, t)).transpose()?;
        proof.targets.push(ProofTarget {
            name: name.to_string(),
            step,
            formula: formula.map(|f| f.canonical_rename()),
        });
        return Ok(());
    }

    let open = text
        .find('[')
        .ok_or_else(|| malformed(line, "missing justification"))?;
    let close = text[open..]
        .find(']')
        .map(|c| open + c)
        .ok_or_else(|| malformed(line, "unclosed justification"))?;
    let id = number(&text[..open], line)?;
    let fields: Vec<&str> = text[open + 1..close].split(',').map(str::trim).collect();
    let kind = match fields.as_slice() {
        [""] | ["axiom"] => StepKind::Axiom,
        ["cd", major, minor] | ["hyper", _, major, minor] => {
            let major = number(major, line)?;
            let minor = number(minor, line)?;
            StepKind::Cd { major, minor }
        }
        _ => {
            return Err(malformed(
                line,
                format!("unknown justification [{}]", &text[open + 1..close]),
            ))
        }
    };
    if !ids.insert(id) {
        return Err(ProofParseError::IdReuse { line, id });
    }
    if let StepKind::Cd { major, minor } = kind {
        check_reference(id, major, line, ids)?;
        check_reference(id, minor, line, ids)?;
    }
    let formula = formula(parser, &text[close + 1..])?;
    proof.steps.push(ProofStep { id, kind, formula });
    Ok(())
}
