//! Flat-term unification with triangular bindings.
//!
//! Two prefix-ordered terms ("sides") are unified in place: a binding maps a
//! variable to a position in one of the sides, and nothing is copied until a
//! result is built. Variables of side 1 are offset past those of side 0, which
//! is how premisses are standardized apart.

use crate::formula::{canonicalize, is_canonical, subterm_ends, Formula, Node};

/// A canonical formula together with its subterm table.
#[derive(Debug, Clone)]
pub(crate) struct Prepared {
    pub(crate) nodes: Vec<Node>,
    pub(crate) ends: Vec<u32>,
    pub(crate) vars: u32,
}

impl Prepared {
    pub(crate) fn new(f: &Formula) -> Prepared {
        let nodes = if is_canonical(f.nodes()) {
            f.nodes().to_vec()
        } else {
            canonicalize(f.nodes())
        };
        Prepared::from_canonical(nodes)
    }

    pub(crate) fn from_canonical(nodes: Vec<Node>) -> Prepared {
        debug_assert!(is_canonical(&nodes));
        let ends = subterm_ends(&nodes);
        let vars = nodes
            .iter()
            .filter(|n| n.is_var())
            .map(|n| n.var_id() + 1)
            .max()
            .unwrap_or(0);
        Prepared { nodes, ends, vars }
    }

    pub(crate) fn is_conditional(&self) -> bool {
        self.nodes[0] == Node::E
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
struct TRef(u32);

const UNBOUND: u32 = u32::MAX;

impl TRef {
    #[inline]
    fn new(side: usize, pos: usize) -> TRef {
        TRef(((side as u32) << 31) | pos as u32)
    }

    #[inline]
    fn side(self) -> usize {
        (self.0 >> 31) as usize
    }

    #[inline]
    fn pos(self) -> usize {
        (self.0 & 0x7fff_ffff) as usize
    }
}

/// Result of one condensed-detachment attempt.
#[derive(Debug, PartialEq, Eq)]
pub(crate) enum Detached {
    Conclusion(Vec<Node>),
    NotUnifiable,
    /// The conclusion would exceed the caller's size limit.
    TooLarge,
}

/// How variables are written when a bound term is materialized.
enum Naming<'n> {
    /// First-occurrence renaming across everything built since the last reset.
    Canonical,
    /// Dense id to original variable id.
    Original(&'n [u32]),
}

/// Reusable scratch space; one per thread.
#[derive(Default)]
pub(crate) struct Engine {
    bindings: Vec<u32>,
    stamps: Vec<u32>,
    epoch: u32,
    pairs: Vec<(TRef, TRef)>,
    walk: Vec<TRef>,
    rename: Vec<u32>,
    renamed: u32,
}

struct Sides<'s> {
    nodes: [&'s [Node]; 2],
    ends: [&'s [u32]; 2],
    offsets: [u32; 2],
}

impl Sides<'_> {
    #[inline]
    fn node(&self, t: TRef) -> Node {
        self.nodes[t.side()][t.pos()]
    }

    #[inline]
    fn gid(&self, t: TRef, n: Node) -> usize {
        (n.var_id() + self.offsets[t.side()]) as usize
    }

    #[inline]
    fn children(&self, t: TRef, arity: usize, mut f: impl FnMut(TRef)) {
        let side = t.side();
        let mut p = t.pos() + 1;
        for _ in 0..arity {
            f(TRef::new(side, p));
            p = self.ends[side][p] as usize;
        }
    }
}

impl Engine {
    pub(crate) fn new() -> Engine {
        Engine::default()
    }

    fn reset(&mut self, vars: usize) {
        self.bindings.clear();
        self.bindings.resize(vars, UNBOUND);
        if self.stamps.len() < vars {
            self.stamps.resize(vars, 0);
        }
        self.rename.clear();
        self.rename.resize(vars, UNBOUND);
        self.renamed = 0;
    }

    #[inline]
    fn deref(&self, sides: &Sides<'_>, mut t: TRef) -> (TRef, Node) {
        loop {
            let n = sides.node(t);
            if !n.is_var() {
                return (t, n);
            }
            match self.bindings[sides.gid(t, n)] {
                UNBOUND => return (t, n),
                b => t = TRef(b),
            }
        }
    }

    fn next_epoch(&mut self) -> u32 {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamps.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.epoch
    }

    /// Does variable `var` occur in `t` under the current bindings?
    fn occurs(&mut self, sides: &Sides<'_>, var: usize, t: TRef) -> bool {
        let epoch = self.next_epoch();
        self.walk.clear();
        self.walk.push(t);
        while let Some(t) = self.walk.pop() {
            let n = sides.node(t);
            if n.is_var() {
                let g = sides.gid(t, n);
                if g == var {
                    return true;
                }
                let b = self.bindings[g];
                if b != UNBOUND && self.stamps[g] != epoch {
                    self.stamps[g] = epoch;
                    self.walk.push(TRef(b));
                }
            } else {
                let walk = &mut self.walk;
                sides.children(t, n.arity(), |c| walk.push(c));
            }
        }
        false
    }

    fn unify(&mut self, sides: &Sides<'_>, a: TRef, b: TRef) -> bool {
        self.pairs.clear();
        self.pairs.push((a, b));
        while let Some((a, b)) = self.pairs.pop() {
            let (a, na) = self.deref(sides, a);
            let (b, nb) = self.deref(sides, b);
            match (na.is_var(), nb.is_var()) {
                (true, true) => {
                    let (ga, gb) = (sides.gid(a, na), sides.gid(b, nb));
                    if ga != gb {
                        self.bindings[ga] = b.0;
                    }
                }
                (true, false) => {
                    let ga = sides.gid(a, na);
                    if self.occurs(sides, ga, b) {
                        return false;
                    }
                    self.bindings[ga] = b.0;
                }
                (false, true) => {
                    let gb = sides.gid(b, nb);
                    if self.occurs(sides, gb, a) {
                        return false;
                    }
                    self.bindings[gb] = a.0;
                }
                (false, false) => {
                    if na != nb {
                        return false;
                    }
                    let arity = na.arity();
                    let (sa, sb) = (a.side(), b.side());
                    let (mut pa, mut pb) = (a.pos() + 1, b.pos() + 1);
                    for _ in 0..arity {
                        self.pairs.push((TRef::new(sa, pa), TRef::new(sb, pb)));
                        pa = sides.ends[sa][pa] as usize;
                        pb = sides.ends[sb][pb] as usize;
                    }
                }
            }
        }
        true
    }

    /// Writes the fully instantiated term at `root` onto `out`. Returns false
    /// once `out` would grow past `limit`.
    fn build(
        &mut self,
        sides: &Sides<'_>,
        root: TRef,
        naming: &Naming<'_>,
        out: &mut Vec<Node>,
        limit: usize,
    ) -> bool {
        self.walk.clear();
        self.walk.push(root);
        while let Some(t) = self.walk.pop() {
            let (t, n) = self.deref(sides, t);
            if out.len() >= limit {
                return false;
            }
            if n.is_var() {
                let g = sides.gid(t, n);
                let id = match naming {
                    Naming::Canonical => {
                        if self.rename[g] == UNBOUND {
                            self.rename[g] = self.renamed;
                            self.renamed += 1;
                        }
                        self.rename[g]
                    }
                    Naming::Original(map) => map[g],
                };
                out.push(Node::var(id));
            } else {
                out.push(n);
                let start = self.walk.len();
                let walk = &mut self.walk;
                sides.children(t, n.arity(), |c| walk.push(c));
                self.walk[start..].reverse();
            }
        }
        true
    }

    /// Condensed detachment over prepared premisses. `limit` caps the size of
    /// the conclusion.
    pub(crate) fn detach(&mut self, major: &Prepared, minor: &Prepared, limit: usize) -> Detached {
        debug_assert!(major.is_conditional());
        let sides = Sides {
            nodes: [&major.nodes, &minor.nodes],
            ends: [&major.ends, &minor.ends],
            offsets: [0, major.vars],
        };
        self.reset((major.vars + minor.vars) as usize);
        if !self.unify(&sides, TRef::new(0, 1), TRef::new(1, 0)) {
            return Detached::NotUnifiable;
        }
        let consequent = TRef::new(0, major.ends[1] as usize);
        let mut out = Vec::new();
        if self.build(&sides, consequent, &Naming::Canonical, &mut out, limit) {
            Detached::Conclusion(out)
        } else {
            Detached::TooLarge
        }
    }

    /// Size of the unified antecedent/minor instance, or `None` when the
    /// antecedent and minor do not unify.
    pub(crate) fn common_instance_size(
        &mut self,
        major: &Prepared,
        minor: &Prepared,
    ) -> Option<usize> {
        let sides = Sides {
            nodes: [&major.nodes, &minor.nodes],
            ends: [&major.ends, &minor.ends],
            offsets: [0, major.vars],
        };
        self.reset((major.vars + minor.vars) as usize);
        if !self.unify(&sides, TRef::new(0, 1), TRef::new(1, 0)) {
            return None;
        }
        Some(self.instance_size(&sides, TRef::new(0, 1)))
    }

    /// Size of the instantiated term at `root`, memoized per bound variable so
    /// shared bindings are not re-walked.
    fn instance_size(&mut self, sides: &Sides<'_>, root: TRef) -> usize {
        let mut memo: Vec<Option<usize>> = vec![None; self.bindings.len()];
        fn size(
            engine: &Engine,
            sides: &Sides<'_>,
            t: TRef,
            memo: &mut Vec<Option<usize>>,
        ) -> usize {
            let n = sides.node(t);
            if n.is_var() {
                let g = sides.gid(t, n);
                match engine.bindings[g] {
                    UNBOUND => 1,
                    b => {
                        if let Some(s) = memo[g] {
                            return s;
                        }
                        let s = size(engine, sides, TRef(b), memo);
                        memo[g] = Some(s);
                        s
                    }
                }
            } else {
                let mut total = 1;
                sides.children(t, n.arity(), |c| total += size(engine, sides, c, memo));
                total
            }
        }
        size(self, sides, root, &mut memo)
    }

    /// General most general unifier of two dense-numbered terms sharing one
    /// variable space. `original` maps dense ids back to variable ids.
    /// Returns, per dense variable, its resolved value (if bound).
    pub(crate) fn mgu_dense(
        &mut self,
        a: &[Node],
        b: &[Node],
        original: &[u32],
    ) -> Option<Vec<Option<Vec<Node>>>> {
        let ends_a = subterm_ends(a);
        let ends_b = subterm_ends(b);
        let sides = Sides {
            nodes: [a, b],
            ends: [&ends_a, &ends_b],
            offsets: [0, 0],
        };
        self.reset(original.len());
        if !self.unify(&sides, TRef::new(0, 0), TRef::new(1, 0)) {
            return None;
        }
        // Locate one occurrence of every variable so it can be dereferenced.
        let mut occurrence: Vec<Option<TRef>> = vec![None; original.len()];
        for (side, nodes) in [a, b].into_iter().enumerate() {
            for (pos, n) in nodes.iter().enumerate() {
                if n.is_var() && occurrence[n.var_id() as usize].is_none() {
                    occurrence[n.var_id() as usize] = Some(TRef::new(side, pos));
                }
            }
        }
        let naming = Naming::Original(original);
        let values = occurrence
            .into_iter()
            .enumerate()
            .map(|(g, occ)| {
                let occ = occ?;
                if self.bindings[g] == UNBOUND {
                    return None;
                }
                let mut out = Vec::new();
                self.build(&sides, occ, &naming, &mut out, usize::MAX);
                Some(out)
            })
            .collect();
        Some(values)
    }
}

/// One-way matching: bindings for variables of `general` such that it
/// becomes `specific`. `specific_ends` may be supplied to avoid rescanning.
/// Bindings are `(variable id, start, end)` into `specific`.
pub(crate) fn match_nodes(
    general: &[Node],
    specific: &[Node],
    specific_ends: Option<&[u32]>,
    bindings: &mut Vec<(u32, u32, u32)>,
) -> bool {
    bindings.clear();
    if general.len() > specific.len() {
        return false;
    }
    let mut j = 0usize;
    for &g in general {
        if g.is_var() {
            let end = match specific_ends {
                Some(ends) => ends[j] as usize,
                None => crate::formula::term_end(specific, j),
            };
            let id = g.var_id();
            match bindings.iter().find(|b| b.0 == id) {
                Some(&(_, s, e)) => {
                    if specific[s as usize..e as usize] != specific[j..end] {
                        return false;
                    }
                }
                None => bindings.push((id, j as u32, end as u32)),
            }
            j = end;
        } else {
            if j >= specific.len() || specific[j] != g {
                return false;
            }
            j += 1;
        }
    }
    true
}
