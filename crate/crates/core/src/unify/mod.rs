//! Substitutions, most general unifiers, one-way matching and condensed
//! detachment.

mod engine;

use std::collections::BTreeMap;
use std::fmt;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::formula::{Formula, Node, Var};

pub(crate) use engine::{match_nodes, Detached, Engine, Prepared};

/// A finite map from variables to formulas, applied simultaneously.
///
/// Substitutions returned by [`mgu`] are idempotent: no bound variable occurs
/// in any value.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<Var, Formula>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    /// Adds or replaces one binding.
    pub fn bind(&mut self, var: Var, value: Formula) -> &mut Self {
        self.bindings.insert(var, value);
        self
    }

    pub fn get(&self, var: Var) -> Option<&Formula> {
        self.bindings.get(&var)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &Formula)> {
        self.bindings.iter().map(|(v, f)| (*v, f))
    }

    pub fn apply(&self, f: &Formula) -> Formula {
        apply(self, f)
    }

    /// No bound variable occurs in any binding's value.
    pub fn is_idempotent(&self) -> bool {
        self.bindings.values().all(|value| {
            value
                .nodes()
                .iter()
                .all(|n| !n.is_var() || !self.bindings.contains_key(&Var::from_id(n.var_id())))
        })
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, value)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}↦{value}")?;
        }
        f.write_str("}")
    }
}

impl FromIterator<(Var, Formula)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Var, Formula)>>(iter: I) -> Self {
        Substitution {
            bindings: iter.into_iter().collect(),
        }
    }
}

/// Simultaneous replacement of every bound variable by its image.
pub fn apply(sub: &Substitution, f: &Formula) -> Formula {
    if sub.is_empty() {
        return f.clone();
    }
    let mut out = Vec::with_capacity(f.symbol_count());
    for &n in f.nodes() {
        match n
            .is_var()
            .then(|| sub.get(Var::from_id(n.var_id())))
            .flatten()
        {
            Some(value) => out.extend_from_slice(value.nodes()),
            None => out.push(n),
        }
    }
    Formula::from_nodes(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum UnifyError {
    #[error("the formulas are not unifiable")]
    NotUnifiable,
}

/// Most general unifier of `a` and `b`, with occurs check. Variables shared
/// by the two formulas are the same variable.
pub fn mgu(a: &Formula, b: &Formula) -> Result<Substitution, UnifyError> {
    let mut dense: FxHashMap<u32, u32> = FxHashMap::default();
    let mut original: Vec<u32> = Vec::new();
    let mut renumber = |nodes: &[Node]| -> Vec<Node> {
        nodes
            .iter()
            .map(|&n| {
                if n.is_var() {
                    let id = *dense.entry(n.var_id()).or_insert_with(|| {
                        original.push(n.var_id());
                        original.len() as u32 - 1
                    });
                    Node::var(id)
                } else {
                    n
                }
            })
            .collect()
    };
    let da = renumber(a.nodes());
    let db = renumber(b.nodes());
    let values = Engine::new()
        .mgu_dense(&da, &db, &original)
        .ok_or(UnifyError::NotUnifiable)?;
    Ok(values
        .into_iter()
        .enumerate()
        .filter_map(|(g, value)| {
            value.map(|nodes| (Var::from_id(original[g]), Formula::from_nodes(nodes)))
        })
        .collect())
}

/// Substitution over the variables of `general` turning it into `specific`,
/// or `None` when `specific` is not an instance of `general`.
///
/// Identity bindings are reported too, so every variable of `general`
/// appears in the result.
pub fn match_onto(general: &Formula, specific: &Formula) -> Option<Substitution> {
    let mut bindings = Vec::new();
    if !match_nodes(general.nodes(), specific.nodes(), None, &mut bindings) {
        return None;
    }
    Some(
        bindings
            .into_iter()
            .map(|(v, s, e)| {
                (
                    Var::from_id(v),
                    Formula::from_nodes(specific.nodes()[s as usize..e as usize].to_vec()),
                )
            })
            .collect(),
    )
}

/// `general` subsumes `specific`: the latter is an instance of the former.
pub fn subsumes(general: &Formula, specific: &Formula) -> bool {
    match_nodes(general.nodes(), specific.nodes(), None, &mut Vec::new())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum CdError {
    #[error("major premiss is not of the form e(s,t)")]
    MajorNotConditional,
    #[error("antecedent of the major premiss does not unify with the minor premiss")]
    NotUnifiable,
}

/// Condensed detachment: from `e(s,t)` and `r`, with the premisses renamed
/// apart, the instance of `t` under the most general unifier of `s` and `r`.
/// The conclusion is canonically renamed.
pub fn condensed_detach(major: &Formula, minor: &Formula) -> Result<Formula, CdError> {
    let major = Prepared::new(major);
    if !major.is_conditional() {
        return Err(CdError::MajorNotConditional);
    }
    let minor = Prepared::new(minor);
    match Engine::new().detach(&major, &minor, usize::MAX) {
        Detached::Conclusion(nodes) => Ok(Formula::from_nodes(nodes)),
        Detached::NotUnifiable => Err(CdError::NotUnifiable),
        Detached::TooLarge => unreachable!("no size limit was set"),
    }
}

/// Symbol count of the most general common instance of the major's
/// antecedent and the (renamed-apart) minor.
pub fn common_instance_size(major: &Formula, minor: &Formula) -> Result<usize, CdError> {
    let major = Prepared::new(major);
    if !major.is_conditional() {
        return Err(CdError::MajorNotConditional);
    }
    let minor = Prepared::new(minor);
    Engine::new()
        .common_instance_size(&major, &minor)
        .ok_or(CdError::NotUnifiable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn f(text: &str) -> Formula {
        parse_formula(text).unwrap()
    }

    fn var(name: &str) -> Var {
        Var::named(name)
    }

    const XCB: &str = "e(x,e(e(e(x,y),e(z,y)),z))";
    const CLAUSE_115: &str = "e(e(e(e(e(x,e(y,e(e(e(e(e(z,e(e(e(z,u),e(v,u)),v)),e(e(w,e(e(e(w,v6),e(v7,v6)),v7)),y)),v8),e(v9,v8)),v9))),x),v10),e(v11,v10)),v11)";
    const CLAUSE_119: &str = "e(e(e(e(e(e(x,e(e(y,e(e(e(y,z),e(u,z)),u)),x)),e(v,e(e(e(v,w),e(v6,w)),v6))),v7),v8),e(v7,v8)),e(v9,e(e(e(v9,v10),e(v11,v10)),v11)))";

    #[test]
    fn apply_examples() {
        let mut sub = Substitution::new();
        sub.bind(var("x"), f("e(a,b)"));
        assert_eq!(apply(&sub, &f("e(x,x)")), f("e(e(a,b),e(a,b))"));
        assert_eq!(apply(&Substitution::new(), &f(XCB)), f(XCB));
        let sub: Substitution = [(var("x"), f("z"))].into_iter().collect();
        assert_eq!(sub.apply(&f("e(x,y)")), f("e(z,y)"));
        // Simultaneous, not sequential.
        let swap: Substitution = [(var("x"), f("y")), (var("y"), f("x"))]
            .into_iter()
            .collect();
        assert_eq!(swap.apply(&f("e(x,y)")), f("e(y,x)"));
    }

    #[test]
    fn mgu_examples() {
        let sub = mgu(&f("x"), &f("e(y,z)")).unwrap();
        assert_eq!(sub, [(var("x"), f("e(y,z)"))].into_iter().collect());
        assert_eq!(mgu(&f("x"), &f("e(x,y)")), Err(UnifyError::NotUnifiable));
        let a = f("e(x,e(y,x))");
        let b = f("e(e(a,b),z)");
        let sub = mgu(&a, &b).unwrap();
        let expected: Substitution = [(var("x"), f("e(a,b)")), (var("z"), f("e(y,e(a,b))"))]
            .into_iter()
            .collect();
        assert_eq!(sub, expected);
        assert_eq!(sub.apply(&a), f("e(e(a,b),e(y,e(a,b)))"));
        assert_eq!(sub.apply(&b), sub.apply(&a));
        assert!(sub.is_idempotent());
    }

    #[test]
    fn mgu_resolves_chains() {
        let a = f("e(x,e(y,z))");
        let b = f("e(y,e(z,e(w,w)))");
        let sub = mgu(&a, &b).unwrap();
        assert!(sub.is_idempotent());
        assert_eq!(sub.apply(&a), sub.apply(&b));
        assert_eq!(sub.apply(&a), f("e(e(w,w),e(e(w,w),e(w,w)))"));
        assert_eq!(mgu(&f("e(x,y)"), &f("f(x)")), Err(UnifyError::NotUnifiable));
        assert_eq!(
            mgu(&f("e(x,x)"), &f("e(y,e(y,z))")),
            Err(UnifyError::NotUnifiable)
        );
    }

    #[test]
    fn match_onto_examples() {
        let sub = match_onto(&f("e(x,x)"), &f("e(e(y,y),e(y,y))")).unwrap();
        assert_eq!(sub, [(var("x"), f("e(y,y)"))].into_iter().collect());
        let sub = match_onto(&f("e(x,y)"), &f("e(x,x)")).unwrap();
        assert_eq!(
            sub,
            [(var("x"), f("x")), (var("y"), f("x"))]
                .into_iter()
                .collect()
        );
        assert_eq!(match_onto(&f("e(e(x,y),z)"), &f("e(u,v)")), None);
        assert_eq!(match_onto(&f("e(x,x)"), &f("e(x,y)")), None);
        assert!(subsumes(&f("x"), &f(XCB)));
        assert!(!subsumes(&f(XCB), &f("x")));
    }

    #[test]
    fn condensed_detach_examples() {
        let xcb = f(XCB);
        assert_eq!(
            condensed_detach(&xcb, &xcb).unwrap().to_string(),
            "e(e(e(e(x,e(e(e(x,y),e(z,y)),z)),u),e(v,u)),v)"
        );
        for g in ["e(y,y)", XCB, "e(e(b,a),e(a,b))", "q"] {
            assert_eq!(
                condensed_detach(&f("e(x,x)"), &f(g)).unwrap(),
                f(g).canonical_rename()
            );
        }
        assert_eq!(
            condensed_detach(&f(CLAUSE_115), &f(CLAUSE_119))
                .unwrap()
                .to_string(),
            "e(e(e(x,e(y,e(e(e(y,z),e(u,z)),u))),v),e(x,v))"
        );
    }

    #[test]
    fn condensed_detach_errors() {
        assert_eq!(
            condensed_detach(&f("x"), &f("x")),
            Err(CdError::MajorNotConditional)
        );
        assert_eq!(
            condensed_detach(&f("i(x,x)"), &f("x")),
            Err(CdError::MajorNotConditional)
        );
        assert_eq!(
            condensed_detach(&f("e(e(x,x),y)"), &f("e(x,e(x,y))")),
            Err(CdError::NotUnifiable)
        );
    }

    #[test]
    fn premisses_are_standardized_apart() {
        // Without renaming apart, x would have to unify with e(x,x).
        assert_eq!(
            condensed_detach(&f("e(x,x)"), &f("e(x,x)")).unwrap(),
            f("e(x,x)")
        );
        let major = f("e(e(x,y),e(y,x))");
        assert_eq!(
            condensed_detach(&major, &f("e(y,x)")).unwrap(),
            f("e(y,x)").canonical_rename()
        );
    }

    #[test]
    fn common_instance_examples() {
        assert_eq!(
            common_instance_size(&f(CLAUSE_115), &f(CLAUSE_119)),
            Ok(2919)
        );
        assert_eq!(common_instance_size(&f("e(x,x)"), &f("e(y,y)")), Ok(3));
        assert_eq!(common_instance_size(&f(XCB), &f(XCB)), Ok(11));
        assert_eq!(
            common_instance_size(&f("x"), &f("x")),
            Err(CdError::MajorNotConditional)
        );
    }
}
