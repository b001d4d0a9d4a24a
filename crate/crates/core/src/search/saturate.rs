use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rustc_hash::FxHashSet;
use thiserror::Error;

use super::agenda::Agenda;
use super::index::DiscriminationTree;
use super::{ConfigError, SearchConfig, TargetSet};
use crate::formula::{has_proper_reflexive, subterm_ends, Formula, Node};
use crate::proof::{extract_proof, Derivations, Proof, ProofTarget};
use crate::unify::{match_nodes, Detached, Engine, Prepared};

/// A retained formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseRecord {
    pub id: u32,
    pub formula: Formula,
    /// Effective weight: symbol count, or the value of the matched hint.
    pub weight: u32,
    pub level: u32,
    pub parents: Option<(u32, u32)>,
    /// Distinct deduced ancestors, itself included; 0 for inputs.
    pub derivation_length: u32,
    pub hint_matched: Option<usize>,
    /// Cleared when a later clause subsumes this one.
    pub active: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiscardReason {
    Blocked,
    TermAvoidance,
    TooManyVars,
    Weight,
    Subsumed,
    /// A variant already kept took over this clause's shorter derivation.
    AncestorReplaced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Processed {
    Kept(u32),
    Discarded(DiscardReason),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub given: usize,
    pub generated: usize,
    pub kept: usize,
    pub blocked: usize,
    pub term_avoidance: usize,
    pub too_many_vars: usize,
    pub weight: usize,
    pub subsumed: usize,
    pub ancestor_replaced: usize,
    pub back_subsumed: usize,
}

impl SearchStats {
    pub fn discarded(&self) -> usize {
        self.blocked
            + self.term_avoidance
            + self.too_many_vars
            + self.weight
            + self.subsumed
            + self.ancestor_replaced
    }

    fn count(&mut self, reason: DiscardReason) {
        *match reason {
            DiscardReason::Blocked => &mut self.blocked,
            DiscardReason::TermAvoidance => &mut self.term_avoidance,
            DiscardReason::TooManyVars => &mut self.too_many_vars,
            DiscardReason::Weight => &mut self.weight,
            DiscardReason::Subsumed => &mut self.subsumed,
            DiscardReason::AncestorReplaced => &mut self.ancestor_replaced,
        } += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    AllTargetsProved,
    AgendaExhausted,
    GivenLimit,
    KeptLimit,
    WallClock,
}

impl Termination {
    pub fn is_resource_limit(self) -> bool {
        matches!(
            self,
            Termination::GivenLimit | Termination::KeptLimit | Termination::WallClock
        )
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// One proof per closed unit target and per closed conjunction.
    pub proofs: BTreeMap<String, Proof>,
    /// All targets together, steps shared; present once every target closed.
    pub joint_proof: Option<Proof>,
    pub stats: SearchStats,
    /// Kept clauses by level, inputs at index 0.
    pub per_level_census: Vec<usize>,
    pub termination: Termination,
    pub elapsed: Duration,
}

impl SearchOutcome {
    pub fn proved_all(&self) -> bool {
        self.termination == Termination::AllTargetsProved
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("the set of support is empty")]
    EmptySos,
    #[error(transparent)]
    Config(#[from] ConfigError),
}

struct Goal {
    name: String,
    nodes: Vec<Node>,
    formula: Formula,
    proved_by: Option<u32>,
    /// Member of a conjunction; reported only through it.
    member: bool,
}

struct Group {
    name: String,
    members: Vec<usize>,
    closed: bool,
}

/// State of one given-clause run.
pub struct Search {
    config: SearchConfig,
    records: Vec<ClauseRecord>,
    prepared: Vec<Option<Prepared>>,
    given: Vec<u32>,
    agenda: Agenda,
    index: DiscriminationTree,
    hints: Vec<(Vec<Node>, u32)>,
    hint_index: DiscriminationTree,
    blocked: FxHashSet<Vec<Node>>,
    size_limit: usize,
    engine: Engine,
    goals: Vec<Goal>,
    groups: Vec<Group>,
    open_goals: usize,
    proofs: BTreeMap<String, Proof>,
    stats: SearchStats,
    per_level: Vec<usize>,
    candidates: Vec<u32>,
    bindings: Vec<(u32, u32, u32)>,
    marks: Vec<u32>,
    epoch: u32,
    started: Instant,
}

/// Runs the given-clause loop to completion or to a limit.
pub fn saturate(
    sos: &[Formula],
    config: SearchConfig,
    targets: &TargetSet,
) -> Result<SearchOutcome, SearchError> {
    let mut search = Search::new(sos, config, targets)?;
    Ok(search.run())
}

impl Search {
    pub fn new(
        sos: &[Formula],
        config: SearchConfig,
        targets: &TargetSet,
    ) -> Result<Search, SearchError> {
        config.validate()?;
        if sos.is_empty() {
            return Err(SearchError::EmptySos);
        }
        let hints: Vec<(Vec<Node>, u32)> = config
            .hints
            .iter()
            .map(|h| (h.formula.canonical_rename().nodes().to_vec(), h.value))
            .collect();
        let mut hint_index = DiscriminationTree::new();
        for (i, (nodes, _)) in hints.iter().enumerate() {
            hint_index.insert(nodes, i as u32);
        }
        let size_limit = hints
            .iter()
            .map(|(n, _)| n.len())
            .chain([config.max_weight as usize])
            .max()
            .unwrap();
        let blocked = config
            .blocked
            .iter()
            .map(|f| f.canonical_rename().nodes().to_vec())
            .collect();

        let goal = |name: &str, formula: &Formula, member: bool| {
            let formula = formula.canonical_rename();
            Goal {
                name: name.to_string(),
                nodes: formula.nodes().to_vec(),
                formula,
                proved_by: None,
                member,
            }
        };
        let mut goals: Vec<Goal> = targets
            .units
            .iter()
            .map(|t| goal(&t.name, &t.formula, false))
            .collect();
        let mut groups = Vec::new();
        for c in &targets.conjunctions {
            let start = goals.len();
            goals.extend(c.members.iter().map(|t| goal(&t.name, &t.formula, true)));
            groups.push(Group {
                name: c.name.clone(),
                members: (start..goals.len()).collect(),
                closed: false,
            });
        }

        let mut search = Search {
            agenda: Agenda::new(config.mode),
            config,
            records: Vec::new(),
            prepared: Vec::new(),
            given: Vec::new(),
            index: DiscriminationTree::new(),
            hints,
            hint_index,
            blocked,
            size_limit,
            engine: Engine::new(),
            open_goals: targets.units.len() + groups.len(),
            goals,
            groups,
            proofs: BTreeMap::new(),
            stats: SearchStats::default(),
            per_level: Vec::new(),
            candidates: Vec::new(),
            bindings: Vec::new(),
            marks: Vec::new(),
            epoch: 0,
            started: Instant::now(),
        };
        let mut seen = FxHashSet::default();
        for f in sos {
            let f = f.canonical_rename();
            if !seen.insert(f.nodes().to_vec()) {
                continue;
            }
            let (weight, hint) = search
                .hint_weight(f.nodes())
                .unwrap_or((f.symbol_count() as u32, None));
            search.keep(f, weight, hint, None, 0, 0);
        }
        Ok(search)
    }

    pub fn config(&self) -> &SearchConfig {
        &self.config
    }

    /// Records in id order; id `n` is at index `n - 1`.
    pub fn records(&self) -> &[ClauseRecord] {
        &self.records
    }

    pub fn record(&self, id: u32) -> Option<&ClauseRecord> {
        id.checked_sub(1).and_then(|i| self.records.get(i as usize))
    }

    pub fn stats(&self) -> &SearchStats {
        &self.stats
    }

    /// Clauses kept but not yet given.
    pub fn agenda_len(&self) -> usize {
        self.agenda.len()
    }

    /// Ids of given clauses in selection order.
    pub fn given(&self) -> &[u32] {
        &self.given
    }

    fn done(&self) -> bool {
        !self.goals.is_empty() && self.open_goals == 0
    }

    pub fn run(&mut self) -> SearchOutcome {
        let termination = self.run_loop();
        self.outcome(termination)
    }

    fn run_loop(&mut self) -> Termination {
        loop {
            if self.done() {
                return Termination::AllTargetsProved;
            }
            if let Some(t) = self.limit_hit() {
                return t;
            }
            if self
                .config
                .limits
                .max_given
                .is_some_and(|m| self.stats.given >= m)
            {
                return Termination::GivenLimit;
            }
            let Some(id) = self.select_given() else {
                return Termination::AgendaExhausted;
            };
            if let Some(t) = self.infer(id) {
                return t;
            }
        }
    }

    fn limit_hit(&self) -> Option<Termination> {
        let limits = &self.config.limits;
        if limits.max_kept.is_some_and(|m| self.stats.kept >= m) {
            return Some(Termination::KeptLimit);
        }
        if limits
            .wall_clock
            .is_some_and(|w| self.started.elapsed() >= w)
        {
            return Some(Termination::WallClock);
        }
        None
    }

    /// Takes the next clause off the agenda and makes it available for
    /// inference.
    pub fn select_given(&mut self) -> Option<u32> {
        let id = self.agenda.pop()?;
        self.stats.given += 1;
        let formula = &self.records[id as usize - 1].formula;
        self.prepared[id as usize - 1] = Some(Prepared::from_canonical(formula.nodes().to_vec()));
        Some(id)
    }

    /// All conclusions between `id` and every given clause, itself included,
    /// in both roles.
    fn infer(&mut self, id: u32) -> Option<Termination> {
        self.given.push(id);
        let g = self.prepared[id as usize - 1].clone()?;
        let mut pairs = 0usize;
        for j in 0..self.given.len() {
            let h = self.given[j];
            if self.prepared[h as usize - 1].is_none() {
                continue;
            }
            let attempt = |this: &mut Search, major_first: bool| -> Option<Termination> {
                let other = this.prepared[h as usize - 1].as_ref()?;
                let (major, minor, parents) = if major_first {
                    (&g, other, (id, h))
                } else {
                    (other, &g, (h, id))
                };
                if !major.is_conditional() {
                    return None;
                }
                match this.engine.detach(major, minor, this.size_limit) {
                    Detached::NotUnifiable => None,
                    Detached::TooLarge => {
                        this.stats.generated += 1;
                        this.stats.weight += 1;
                        None
                    }
                    Detached::Conclusion(nodes) => {
                        this.process_nodes(nodes, parents);
                        if this.done() {
                            return Some(Termination::AllTargetsProved);
                        }
                        None
                    }
                }
            };
            if let Some(t) = attempt(self, true) {
                return Some(t);
            }
            if h != id {
                if let Some(t) = attempt(self, false) {
                    return Some(t);
                }
            }
            pairs += 1;
            if pairs.is_multiple_of(256) {
                if let Some(t) = self.limit_hit() {
                    return Some(t);
                }
            }
        }
        self.limit_hit()
    }

    /// Passes a new conclusion through the retention pipeline.
    pub fn process_new(&mut self, formula: &Formula, parents: (u32, u32)) -> Processed {
        self.process_nodes(formula.canonical_rename().nodes().to_vec(), parents)
    }

    fn process_nodes(&mut self, nodes: Vec<Node>, parents: (u32, u32)) -> Processed {
        self.stats.generated += 1;
        match self.screen(&nodes, parents) {
            Ok((weight, hint)) => {
                let level = 1 + self.level_of(parents.0).max(self.level_of(parents.1));
                let length = self.derivation_length_from(parents);
                let id = self.keep(
                    Formula::from_nodes(nodes),
                    weight,
                    hint,
                    Some(parents),
                    level,
                    length,
                );
                Processed::Kept(id)
            }
            Err(reason) => {
                self.stats.count(reason);
                Processed::Discarded(reason)
            }
        }
    }

    /// Stages before retention: blocking, term avoidance, variable cap,
    /// hints, weight, forward subsumption.
    fn screen(
        &mut self,
        nodes: &[Node],
        parents: (u32, u32),
    ) -> Result<(u32, Option<usize>), DiscardReason> {
        if !self.blocked.is_empty() && self.blocked.contains(nodes) {
            return Err(DiscardReason::Blocked);
        }
        if self.config.term_avoidance && has_proper_reflexive(nodes) {
            return Err(DiscardReason::TermAvoidance);
        }
        if let Some(cap) = self.config.max_distinct_vars {
            let vars = nodes
                .iter()
                .filter(|n| n.is_var())
                .map(|n| n.var_id() + 1)
                .max()
                .unwrap_or(0);
            if vars as usize > cap {
                return Err(DiscardReason::TooManyVars);
            }
        }
        let (weight, hint) = self
            .hint_weight(nodes)
            .unwrap_or((nodes.len() as u32, None));
        if weight > self.config.max_weight {
            return Err(DiscardReason::Weight);
        }

        let ends = subterm_ends(nodes);
        self.index
            .generalizations(nodes, &ends, &mut self.candidates);
        self.candidates.sort_unstable();
        let mut subsumed = false;
        let mut variant = None;
        for &c in &self.candidates {
            let g = self.records[c as usize - 1].formula.nodes();
            if g == nodes {
                variant = Some(c);
                subsumed = true;
                break;
            }
            if !subsumed && match_nodes(g, nodes, Some(&ends), &mut self.bindings) {
                subsumed = true;
                if !self.config.ancestor_subsumption {
                    break;
                }
            }
        }
        if !subsumed {
            return Ok((weight, hint));
        }
        if let (true, Some(g)) = (self.config.ancestor_subsumption, variant) {
            let record = &self.records[g as usize - 1];
            if record.parents.is_some() {
                let old = self.derivation_length(g);
                let new = self.derivation_length_from(parents);
                if new < old {
                    let level = 1 + self.level_of(parents.0).max(self.level_of(parents.1));
                    let record = &mut self.records[g as usize - 1];
                    record.parents = Some(parents);
                    record.derivation_length = new;
                    record.level = level;
                    return Err(DiscardReason::AncestorReplaced);
                }
            }
        }
        Err(DiscardReason::Subsumed)
    }

    /// Lowest hint value among hints the clause is a variant of or subsumes.
    fn hint_weight(&mut self, nodes: &[Node]) -> Option<(u32, Option<usize>)> {
        if self.hints.is_empty() {
            return None;
        }
        self.hint_index.instances(nodes, &mut self.candidates);
        let mut best: Option<(u32, usize)> = None;
        for &h in &self.candidates {
            let (hint, value) = &self.hints[h as usize];
            if match_nodes(nodes, hint, None, &mut self.bindings)
                && best.is_none_or(|(v, i)| (*value, h as usize) < (v, i))
            {
                best = Some((*value, h as usize));
            }
        }
        best.map(|(v, i)| (v, Some(i)))
    }

    fn keep(
        &mut self,
        formula: Formula,
        weight: u32,
        hint: Option<usize>,
        parents: Option<(u32, u32)>,
        level: u32,
        derivation_length: u32,
    ) -> u32 {
        let id = self.records.len() as u32 + 1;
        self.index.insert(formula.nodes(), id);
        self.agenda.push(id, weight);
        if parents.is_some() {
            self.stats.kept += 1;
        }
        if self.per_level.len() <= level as usize {
            self.per_level.resize(level as usize + 1, 0);
        }
        self.per_level[level as usize] += 1;
        self.records.push(ClauseRecord {
            id,
            formula,
            weight,
            level,
            parents,
            derivation_length,
            hint_matched: hint,
            active: true,
        });
        self.prepared.push(None);
        if parents.is_some() {
            self.back_subsume(id);
        }
        self.check_goals(id);
        id
    }

    fn back_subsume(&mut self, id: u32) {
        let nodes = self.records[id as usize - 1].formula.nodes().to_vec();
        self.index.instances(&nodes, &mut self.candidates);
        let mut victims: Vec<u32> = Vec::new();
        for &c in &self.candidates {
            if c != id
                && match_nodes(
                    &nodes,
                    self.records[c as usize - 1].formula.nodes(),
                    None,
                    &mut self.bindings,
                )
            {
                victims.push(c);
            }
        }
        victims.sort_unstable();
        for v in victims {
            let record = &mut self.records[v as usize - 1];
            record.active = false;
            self.index.remove(record.formula.nodes(), v);
            self.agenda.remove(v);
            self.prepared[v as usize - 1] = None;
            self.stats.back_subsumed += 1;
        }
    }

    fn check_goals(&mut self, id: u32) {
        let nodes = self.records[id as usize - 1].formula.nodes();
        let mut newly = Vec::new();
        for (i, goal) in self.goals.iter_mut().enumerate() {
            if goal.proved_by.is_none() && match_nodes(nodes, &goal.nodes, None, &mut self.bindings)
            {
                goal.proved_by = Some(id);
                newly.push(i);
            }
        }
        for i in newly {
            if !self.goals[i].member {
                self.open_goals -= 1;
                let target = self.goal_target(i);
                let proof =
                    extract_proof(self, &[target]).expect("retained derivations are complete");
                self.proofs.insert(self.goals[i].name.clone(), proof);
            }
        }
        for g in 0..self.groups.len() {
            let group = &self.groups[g];
            if group.closed
                || !group
                    .members
                    .iter()
                    .all(|&m| self.goals[m].proved_by.is_some())
            {
                continue;
            }
            let targets: Vec<ProofTarget> =
                group.members.iter().map(|&m| self.goal_target(m)).collect();
            let proof = extract_proof(self, &targets).expect("retained derivations are complete");
            self.proofs.insert(group.name.clone(), proof);
            self.groups[g].closed = true;
            self.open_goals -= 1;
        }
    }

    fn goal_target(&self, i: usize) -> ProofTarget {
        let goal = &self.goals[i];
        ProofTarget {
            name: goal.name.clone(),
            step: goal.proved_by.expect("goal is proved"),
            formula: Some(goal.formula.clone()),
        }
    }

    fn level_of(&self, id: u32) -> u32 {
        self.records[id as usize - 1].level
    }

    fn next_epoch(&mut self) -> u32 {
        self.marks.resize(self.records.len() + 1, 0);
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.marks.iter_mut().for_each(|m| *m = 0);
            self.epoch = 1;
        }
        self.epoch
    }

    /// Distinct deduced clauses among `roots` and their ancestors.
    fn count_deduced(&mut self, roots: &[u32]) -> u32 {
        let epoch = self.next_epoch();
        let mut stack: Vec<u32> = roots.to_vec();
        let mut count = 0;
        while let Some(id) = stack.pop() {
            if self.marks[id as usize] == epoch {
                continue;
            }
            self.marks[id as usize] = epoch;
            if let Some((a, b)) = self.records[id as usize - 1].parents {
                count += 1;
                stack.push(a);
                stack.push(b);
            }
        }
        count
    }

    fn derivation_length_from(&mut self, parents: (u32, u32)) -> u32 {
        1 + self.count_deduced(&[parents.0, parents.1])
    }

    /// Current derivation length of a retained clause, following parent
    /// links as they are now.
    pub fn derivation_length(&mut self, id: u32) -> u32 {
        self.count_deduced(&[id])
    }

    fn outcome(&mut self, termination: Termination) -> SearchOutcome {
        let joint_proof = (termination == Termination::AllTargetsProved).then(|| {
            let targets: Vec<ProofTarget> =
                (0..self.goals.len()).map(|i| self.goal_target(i)).collect();
            extract_proof(self, &targets).expect("retained derivations are complete")
        });
        SearchOutcome {
            proofs: self.proofs.clone(),
            joint_proof,
            stats: self.stats.clone(),
            per_level_census: self.per_level.clone(),
            termination,
            elapsed: self.started.elapsed(),
        }
    }
}

impl Derivations for Search {
    fn formula(&self, id: u32) -> Option<&Formula> {
        self.record(id).map(|r| &r.formula)
    }

    fn parents(&self, id: u32) -> Option<Option<(u32, u32)>> {
        self.record(id).map(|r| r.parents)
    }
}
