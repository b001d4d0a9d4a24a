//! Acceptance report: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary so every criterion is reported even when an
//! earlier one fails. The exit status is zero unless `ACCEPTANCE_STRICT` is
//! set, in which case any FAIL makes it non-zero.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use detach::formula::{enumerate_two_property_theorems, View};
use detach::proof::{parse_proof, render, Proof, StepKind};
use detach::search::{
    level_census, level_closure, parse_problem, saturate, CensusOptions, Problem,
};
use detach::unify::subsumes;
use detach::{
    apply, common_instance_size, condensed_detach, corpus, match_onto, mgu, parse_formula, Formula,
    Var,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", name].iter().collect();
    std::fs::read_to_string(p).unwrap()
}

fn problem(name: &str) -> Problem {
    parse_problem(&data(name)).unwrap()
}

fn golden() -> Proof {
    parse_proof(&data("xcb25.proof")).unwrap()
}

fn xcb() -> Formula {
    corpus::get("XCB").unwrap().formula.clone()
}

fn within(elapsed: Duration, budget: Duration) -> bool {
    elapsed <= budget
}

fn golden_proof() -> Verdict {
    let started = Instant::now();
    let m = match golden().verify() {
        Ok(m) => m,
        Err(e) => return verdict(false, format!("does not verify: {e}")),
    };
    let elapsed = started.elapsed();
    let exact = (m.length, m.level, m.max_weight, m.max_distinct_vars) == (25, 19, 47, 12);
    verdict(
        exact && within(elapsed, Duration::from_secs(1)),
        format!("{m} in {elapsed:.2?} (want length=25 level=19 max_weight=47 max_vars=12)"),
    )
}

fn cd_reproduction() -> Verdict {
    let started = Instant::now();
    let p = golden();
    let step = |id| p.step(id).unwrap().formula.clone();
    let x = xcb();
    let first = condensed_detach(&x, &x).is_ok_and(|c| c.is_variant(&step(105)));
    let second = condensed_detach(&step(115), &step(119)).is_ok_and(|c| c.is_variant(&step(120)));
    let size = common_instance_size(&step(115), &step(119));
    let elapsed = started.elapsed();
    verdict(
        first && second && size == Ok(2919) && within(elapsed, Duration::from_secs(1)),
        format!("XCB·XCB~105: {first}, 115·119~120: {second}, common instance size {size:?} (want 2919) in {elapsed:.2?}"),
    )
}

fn enumeration_counts() -> Verdict {
    let started = Instant::now();
    let seven = enumerate_two_property_theorems(7).len();
    let eleven = enumerate_two_property_theorems(11).len();
    let elapsed = started.elapsed();
    verdict(
        seven == 15 && eleven == 630 && within(elapsed, Duration::from_secs(1)),
        format!("7 symbols: {seven} (want 15), 11 symbols: {eleven} (want 630) in {elapsed:.2?}"),
    )
}

fn census() -> Verdict {
    let started = Instant::now();
    let x = xcb();
    let c = match level_census(&x, 6, Some(&x), &CensusOptions::default()) {
        Ok(c) => c,
        Err(e) => return verdict(false, e.to_string()),
    };
    let elapsed = started.elapsed();
    let early_exceptions: usize = c.levels[1..=5].iter().map(|l| l.exceptions.len()).sum();
    let six = &c.levels[6];
    let reflexive_pair = parse_formula("e(e(x,y),e(x,y))").unwrap();
    let exception_ok = six.exceptions.len() == 1 && six.exceptions[0].is_variant(&reflexive_pair);
    let exceptions: Vec<String> = six.exceptions.iter().map(|f| f.to_string()).collect();
    verdict(
        c.cumulative(5) == 1494
            && early_exceptions == 0
            && six.formulas.len() == 319_493
            && exception_ok
            && within(elapsed, Duration::from_secs(600)),
        format!(
            "levels 1-5: {} new, {early_exceptions} exceptions; level 6: {} new, exceptions [{}] in {elapsed:.2?} (variance-only dedup)",
            c.cumulative(5),
            six.formulas.len(),
            exceptions.join(", ")
        ),
    )
}

fn guided_search() -> Verdict {
    let started = Instant::now();
    let p = problem("guided_basis.problem");
    let out = saturate(&p.sos, p.config.clone(), &p.targets).unwrap();
    let elapsed = started.elapsed();
    let Some(joint) = out.joint_proof else {
        return verdict(
            false,
            format!("no proof, {:?} after {elapsed:.2?}", out.termination),
        );
    };
    let members_closed = ["transitivity", "symmetry"]
        .iter()
        .all(|n| joint.target(n).is_some());
    match joint.verify() {
        Ok(m) => verdict(
            members_closed && m.length <= 42 && within(elapsed, Duration::from_secs(600)),
            format!(
                "joint {m}; transitivity {} and symmetry {} steps alone; {} kept in {elapsed:.2?} (want length <= 42)",
                joint.length_for("transitivity").unwrap_or(0),
                joint.length_for("symmetry").unwrap_or(0),
                out.stats.kept
            ),
        ),
        Err(e) => verdict(false, format!("proof does not verify: {e}")),
    }
}

fn bfs_run(name: &str) -> Result<(usize, usize, Duration), String> {
    let started = Instant::now();
    let p = problem(name);
    let out = saturate(&p.sos, p.config.clone(), &p.targets).unwrap();
    let elapsed = started.elapsed();
    let joint = out.joint_proof.ok_or_else(|| {
        format!(
            "{name}: no proof, {:?} after {elapsed:.2?}",
            out.termination
        )
    })?;
    let m = joint.verify().map_err(|e| format!("{name}: {e}"))?;
    if elapsed > Duration::from_secs(3600) {
        return Err(format!("{name}: over budget at {elapsed:.2?}"));
    }
    Ok((m.length, m.level, elapsed))
}

fn breadth_first_reflexivity() -> Verdict {
    let report = |r: &Result<(usize, usize, Duration), String>, cap: u32, expected: usize| match r {
        Ok((length, level, t)) => {
            format!("cap {cap}: length {length} level {level} in {t:.2?} (expected {expected})")
        }
        Err(e) => e.clone(),
    };
    let narrow = bfs_run("bfs_reflexivity_31.problem");
    let wide = bfs_run("bfs_reflexivity_35.problem");
    let pass =
        matches!(narrow, Ok((l, _, _)) if l <= 17) && matches!(wide, Ok((l, _, _)) if l <= 17);
    verdict(
        pass,
        format!(
            "{}; {}; both must be <= 17",
            report(&narrow, 31, 17),
            report(&wide, 35, 11)
        ),
    )
}

fn store(levels: usize) -> Vec<Formula> {
    let c = level_census(&xcb(), levels, None, &CensusOptions::default()).unwrap();
    c.all_formulas().cloned().collect()
}

/// Replaces random subterms of `f` by fresh variables.
fn generalize(f: &Formula, rng: &mut ChaCha8Rng, fresh: &mut u32) -> Formula {
    if rng.gen_bool(0.15) {
        *fresh += 1;
        return Formula::var(Var::canonical(*fresh));
    }
    match f.view() {
        View::Var(_) => f.clone(),
        View::Compound(_, mut args) => {
            let l = args.next().unwrap().to_formula();
            let r = args.next().unwrap().to_formula();
            let l = generalize(&l, rng, fresh);
            let r = generalize(&r, rng, fresh);
            Formula::e(l, r)
        }
    }
}

fn property_suites() -> Verdict {
    let started = Instant::now();
    let formulas = store(5);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    // (a) CD over the census store
    let mut defined = 0;
    let mut cd_bad = 0;
    for _ in 0..10_000 {
        let major = &formulas[rng.gen_range(0..formulas.len())];
        let minor = &formulas[rng.gen_range(0..formulas.len())];
        if let Ok(c) = condensed_detach(major, minor) {
            defined += 1;
            if !(c.two_property() && c.is_ec_theorem() == Ok(true)) {
                cd_bad += 1;
            }
        }
    }

    // (b) mgu on pairs built to be unifiable
    let mut mgu_bad = 0;
    for _ in 0..10_000 {
        let t = &formulas[rng.gen_range(0..formulas.len())];
        let mut fresh = 1000;
        let a = generalize(t, &mut rng, &mut fresh);
        let b = generalize(t, &mut rng, &mut fresh);
        let ok = match mgu(&a, &b) {
            Ok(s) => {
                let common = apply(&s, &a);
                s.is_idempotent() && common == apply(&s, &b) && match_onto(&common, t).is_some()
            }
            Err(_) => false,
        };
        if !ok {
            mgu_bad += 1;
        }
    }

    // (c) tampered golden proofs
    let tampered = tamperings(&golden(), 100);
    let accepted = tampered.iter().filter(|p| p.verify().is_ok()).count();

    // (d) determinism of repeated runs
    let p = problem("guided_basis.problem");
    let runs: Vec<String> = (0..2)
        .map(|_| {
            let out = saturate(&p.sos, p.config.clone(), &p.targets).unwrap();
            out.proofs.values().map(render).collect()
        })
        .collect();
    let deterministic = runs[0] == runs[1] && !runs[0].is_empty();

    let elapsed = started.elapsed();
    verdict(
        cd_bad == 0 && mgu_bad == 0 && tampered.len() == 100 && accepted == 0 && deterministic,
        format!(
            "(a) {defined} defined CD results, {cd_bad} bad; (b) {mgu_bad} bad unifiers of 10000; \
             (c) {accepted} of {} tampered proofs accepted; (d) identical reruns: {deterministic}; {elapsed:.2?}",
            tampered.len()
        ),
    )
}

/// Whether every step follows and every target holds, checked without the
/// library's verifier.
fn independently_valid(p: &Proof) -> bool {
    let mut seen: Vec<(u32, &Formula)> = Vec::new();
    for s in &p.steps {
        if seen.iter().any(|(id, _)| *id == s.id) {
            return false;
        }
        if let StepKind::Cd { major, minor } = s.kind {
            let find = |id| seen.iter().find(|(i, _)| *i == id).map(|(_, f)| *f);
            let (Some(a), Some(b)) = (find(major), find(minor)) else {
                return false;
            };
            if !condensed_detach(a, b).is_ok_and(|c| c.is_variant(&s.formula)) {
                return false;
            }
        }
        seen.push((s.id, &s.formula));
    }
    p.targets
        .iter()
        .all(|t| match seen.iter().find(|(id, _)| *id == t.step) {
            Some((_, f)) => t.formula.as_ref().is_none_or(|g| subsumes(f, g)),
            None => false,
        })
}

/// Up to `count` distinct proofs, each differing from `p` in one step and
/// each invalid by the independent check.
fn tamperings(p: &Proof, count: usize) -> Vec<Proof> {
    let cd: Vec<usize> = (0..p.steps.len())
        .filter(|&i| p.steps[i].kind != StepKind::Axiom)
        .collect();
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut keep = |q: Proof, out: &mut Vec<Proof>| {
        if out.len() < count && !independently_valid(&q) && seen.insert(render(&q)) {
            out.push(q);
        }
    };
    for &i in &cd {
        let StepKind::Cd { major, minor } = p.steps[i].kind else {
            unreachable!()
        };
        let earlier: Vec<u32> = p.steps[..i].iter().map(|s| s.id).collect();
        let mut q = p.clone();
        q.steps[i].kind = StepKind::Cd {
            major: minor,
            minor: major,
        };
        keep(q, &mut out);
        for &other in earlier.iter().rev().filter(|&&o| o != major).take(1) {
            let mut q = p.clone();
            q.steps[i].kind = StepKind::Cd {
                major: other,
                minor,
            };
            keep(q, &mut out);
        }
        for &other in earlier.iter().rev().filter(|&&o| o != minor).take(1) {
            let mut q = p.clone();
            q.steps[i].kind = StepKind::Cd {
                major,
                minor: other,
            };
            keep(q, &mut out);
        }
        let mut q = p.clone();
        q.steps[i].formula =
            Formula::e(q.steps[i].formula.clone(), Formula::var(Var::canonical(0)));
        keep(q, &mut out);
        let mut q = p.clone();
        q.steps[i].kind = StepKind::Cd {
            major,
            minor: p.steps[i].id,
        };
        keep(q, &mut out);
    }
    out
}

fn dependence() -> Verdict {
    let started = Instant::now();
    let basis: Vec<Formula> = corpus::two_basis()
        .iter()
        .map(|e| e.formula.clone())
        .collect();
    let reflexivity = corpus::get("reflexivity").unwrap().formula.clone();
    let closure = match level_closure(&basis, 3, None, &CensusOptions::default()) {
        Ok(c) => c,
        Err(e) => return verdict(false, e.to_string()),
    };
    let hit = closure
        .levels
        .iter()
        .position(|l| l.formulas.iter().any(|f| subsumes(f, &reflexivity)));
    let elapsed = started.elapsed();
    verdict(
        hit.is_some() && within(elapsed, Duration::from_secs(1)),
        format!(
            "reflexivity first subsumed at level {} of 3 ({} formulas) in {elapsed:.2?}",
            hit.map_or("none".to_string(), |l| l.to_string()),
            closure.all_formulas().count()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("golden proof verification", golden_proof),
        ("condensed detachment reproduction", cd_reproduction),
        ("enumeration counts", enumeration_counts),
        ("level census", census),
        ("guided proof search", guided_search),
        ("breadth-first reflexivity", breadth_first_reflexivity),
        ("property suites", property_suites),
        ("dependence of reflexivity", dependence),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        println!(
            "criterion {}: {} {name}: {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
        if !v.pass {
            failed.push(i + 1);
        }
    }
    println!(
        "acceptance: {} of {} passed",
        criteria.len() - failed.len(),
        criteria.len()
    );
    if !failed.is_empty() && std::env::var_os("ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
