//! Text syntax: `e(x,e(y,x))`, optionally wrapped as `P(...)` with a trailing
//! period. Lowercase identifiers not followed by `(` are variables; any other
//! bare identifier is a constant.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::{names, Formula, Node, Term, MAX_ARITY};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty formula")]
    Empty,
    #[error("unbalanced parentheses at offset {0}")]
    Unbalanced(usize),
    #[error("empty argument at offset {0}")]
    EmptyArgument(usize),
    #[error("unexpected character {1:?} at offset {0}")]
    UnexpectedChar(usize, char),
    #[error("trailing input at offset {0}")]
    TrailingGarbage(usize),
    #[error("symbol {symbol} used with arity {found}, previously {expected}")]
    ArityConflict {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("symbol {0} has more than {MAX_ARITY} arguments")]
    ArityTooLarge(String),
}

/// Parses formulas while enforcing one arity per symbol name across every
/// formula it reads.
#[derive(Debug, Default, Clone)]
pub struct FormulaParser {
    arities: HashMap<String, usize>,
}

/// Parses a single formula.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    FormulaParser::new().parse(text)
}

impl FormulaParser {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(&mut self, text: &str) -> Result<Formula, ParseError> {
        let mut cursor = Cursor {
            text: text.as_bytes(),
            pos: 0,
        };
        cursor.skip_ws();
        if cursor.at_end() {
            return Err(ParseError::Empty);
        }
        let wrapped = cursor.peek_wrapper();
        if wrapped {
            cursor.pos += 1;
            cursor.skip_ws();
            cursor.expect_open()?;
        }
        let mut nodes = Vec::new();
        self.term(&mut cursor, &mut nodes)?;
        cursor.skip_ws();
        if wrapped {
            match cursor.peek() {
                Some(b')') => cursor.pos += 1,
                None | Some(b'.') => return Err(ParseError::Unbalanced(cursor.pos)),
                Some(_) => return Err(ParseError::TrailingGarbage(cursor.pos)),
            }
            cursor.skip_ws();
        }
        if cursor.peek() == Some(b'.') {
            cursor.pos += 1;
            cursor.skip_ws();
        }
        match cursor.peek() {
            None => Ok(Formula::from_nodes(nodes)),
            Some(b')') => Err(ParseError::Unbalanced(cursor.pos)),
            Some(_) => Err(ParseError::TrailingGarbage(cursor.pos)),
        }
    }

    fn term(&mut self, cursor: &mut Cursor<'_>, nodes: &mut Vec<Node>) -> Result<(), ParseError> {
        cursor.skip_ws();
        let start = cursor.pos;
        let ident = match cursor.ident() {
            Some(ident) => ident,
            None => {
                return Err(match cursor.peek() {
                    Some(b',') | Some(b')') => ParseError::EmptyArgument(start),
                    Some(b'(') => ParseError::UnexpectedChar(start, '('),
                    Some(c) => ParseError::UnexpectedChar(start, c as char),
                    None => ParseError::Unbalanced(start),
                })
            }
        };
        cursor.skip_ws();
        if cursor.peek() != Some(b'(') {
            if ident.as_bytes()[0].is_ascii_lowercase() {
                nodes.push(Node::var(names::var_id(ident)));
            } else {
                let id = self.symbol(ident, 0)?;
                nodes.push(Node::fun(id, 0));
            }
            return Ok(());
        }
        cursor.pos += 1;
        let head_at = nodes.len();
        nodes.push(Node::var(0));
        let mut arity = 0usize;
        loop {
            self.term(cursor, nodes)?;
            arity += 1;
            cursor.skip_ws();
            match cursor.peek() {
                Some(b',') => cursor.pos += 1,
                Some(b')') => {
                    cursor.pos += 1;
                    break;
                }
                None => return Err(ParseError::Unbalanced(cursor.pos)),
                Some(c) => return Err(ParseError::UnexpectedChar(cursor.pos, c as char)),
            }
        }
        let id = self.symbol(ident, arity)?;
        nodes[head_at] = Node::fun(id, arity as u8);
        Ok(())
    }

    fn symbol(&mut self, name: &str, arity: usize) -> Result<u32, ParseError> {
        if arity > MAX_ARITY {
            return Err(ParseError::ArityTooLarge(name.to_string()));
        }
        match self.arities.get(name) {
            Some(&expected) if expected != arity => {
                return Err(ParseError::ArityConflict {
                    symbol: name.to_string(),
                    expected,
                    found: arity,
                })
            }
            Some(_) => {}
            None => {
                self.arities.insert(name.to_string(), arity);
            }
        }
        Ok(names::symbol_id(name, arity as u8))
    }
}

struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_' || c == b'$')
        {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.text[start..self.pos]).unwrap())
    }

    /// `P` followed (after optional blanks) by `(`.
    fn peek_wrapper(&self) -> bool {
        if self.peek() != Some(b'P') {
            return false;
        }
        let rest = &self.text[self.pos + 1..];
        rest.iter().find(|c| !c.is_ascii_whitespace()) == Some(&b'(')
    }

    fn expect_open(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(ParseError::UnexpectedChar(self.pos, c as char)),
            None => Err(ParseError::Unbalanced(self.pos)),
        }
    }
}

fn write_nodes(f: &mut fmt::Formatter<'_>, nodes: &[Node]) -> fmt::Result {
    // Remaining argument count for each open compound.
    let mut open: Vec<usize> = Vec::new();
    for &node in nodes {
        if node.is_var() {
            f.write_str(&names::var_name(node.var_id()))?;
        } else {
            f.write_str(&names::symbol_name(node.symbol_id()))?;
            if node.arity() > 0 {
                f.write_str("(")?;
                open.push(node.arity());
                continue;
            }
        }
        while let Some(top) = open.last_mut() {
            *top -= 1;
            if *top == 0 {
                open.pop();
                f.write_str(")")?;
            } else {
                f.write_str(",")?;
                break;
            }
        }
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_nodes(f, self.nodes())
    }
}

impl fmt::Display for Term<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_nodes(f, self.nodes())
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}
