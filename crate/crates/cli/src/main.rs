use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use detach::formula::{
    enumerate_ec_theorems, enumerate_two_property_theorems, parse_formula, Formula,
};
use detach::par::{with_jobs, Parallelism};
use detach::proof::{parse_proof, render, shorten, ShortenBudget};
use detach::search::{
    level_census, parse_mode, parse_problem, parse_switch, saturate, CensusOptions, Problem,
    SearchConfig, SearchOutcome, SelectionMode, Termination,
};
use detach::{common_instance_size, condensed_detach, corpus};

const NOT_FOUND: u8 = 1;
const RESOURCE_LIMIT: u8 = 2;
const INPUT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(
    name = "detach",
    version,
    about = "Condensed-detachment prover for the equivalential calculus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the search described by a problem file.
    Prove {
        problem: PathBuf,
        /// Write one proof file per closed target into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Verify a proof file and print its metrics.
    Check { proof: PathBuf },
    /// Look for a shorter proof of the problem's targets.
    Shorten {
        proof: PathBuf,
        problem: PathBuf,
        /// Maximum improvement rounds.
        #[arg(long, default_value_t = 8)]
        rounds: usize,
        /// Skip the blocking replays.
        #[arg(long)]
        no_replay: bool,
        /// Write the resulting proof here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// List every theorem with the given symbol count.
    Enumerate {
        n: usize,
        /// Only formulas in which every variable occurs exactly twice.
        #[arg(long)]
        two_property: bool,
    },
    /// Count the condensed-detachment closure of a seed level by level.
    Census {
        /// Corpus name, formula, or file whose first formula line is the seed.
        seed: String,
        #[arg(long)]
        levels: usize,
        /// Report new formulas with no subformula that is a variant of this.
        #[arg(long)]
        pattern: Option<String>,
        /// Worker threads (0 for all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Also print every formula of the last level.
        #[arg(long)]
        list: bool,
    },
    /// One condensed-detachment step.
    Cd { major: String, minor: String },
    /// Inspect the built-in formula corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Print name, tags and formula of every entry.
    List,
}

#[derive(Args, Default)]
struct Overrides {
    /// `ratio:<n>` or `bfs`.
    #[arg(long, value_parser = mode_arg)]
    mode: Option<SelectionMode>,
    #[arg(long)]
    max_weight: Option<u32>,
    /// `on` or `off`.
    #[arg(long, value_parser = switch_arg)]
    term_avoidance: Option<bool>,
    /// `on` or `off`.
    #[arg(long, value_parser = switch_arg)]
    ancestor_subsumption: Option<bool>,
    #[arg(long)]
    max_vars: Option<usize>,
    /// Worker threads for parallel stages (0 for all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    limit_given: Option<usize>,
    #[arg(long)]
    limit_secs: Option<u64>,
}

fn mode_arg(s: &str) -> Result<SelectionMode, String> {
    parse_mode(s).ok_or_else(|| format!("expected ratio:<n> or bfs, got {s:?}"))
}

fn switch_arg(s: &str) -> Result<bool, String> {
    parse_switch(s).ok_or_else(|| format!("expected on or off, got {s:?}"))
}

impl Overrides {
    fn apply(&self, config: &mut SearchConfig) {
        if let Some(m) = self.mode {
            config.mode = m;
        }
        if let Some(w) = self.max_weight {
            config.max_weight = w;
        }
        if let Some(t) = self.term_avoidance {
            config.term_avoidance = t;
        }
        if let Some(a) = self.ancestor_subsumption {
            config.ancestor_subsumption = a;
        }
        if let Some(v) = self.max_vars {
            config.max_distinct_vars = Some(v);
        }
        if let Some(g) = self.limit_given {
            config.limits.max_given = Some(g);
        }
        if let Some(s) = self.limit_secs {
            config.limits.wall_clock = Some(Duration::from_secs(s));
        }
    }
}

/// A failure with its exit status.
struct Failure(u8, String);

impl Failure {
    fn input(msg: impl std::fmt::Display) -> Failure {
        Failure(INPUT_ERROR, msg.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Prove {
            problem,
            out,
            overrides,
        } => prove(&problem, out.as_deref(), &overrides),
        Command::Check { proof } => check(&proof),
        Command::Shorten {
            proof,
            problem,
            rounds,
            no_replay,
            out,
            overrides,
        } => shorten_cmd(
            &proof,
            &problem,
            rounds,
            !no_replay,
            out.as_deref(),
            &overrides,
        ),
        Command::Enumerate { n, two_property } => {
            let formulas = if two_property {
                enumerate_two_property_theorems(n)
            } else {
                enumerate_ec_theorems(n)
            };
            let mut text = String::new();
            for f in &formulas {
                writeln!(text, "{f}").unwrap();
            }
            writeln!(text, "count: {}", formulas.len()).unwrap();
            emit(&text);
            Ok(0)
        }
        Command::Census {
            seed,
            levels,
            pattern,
            jobs,
            list,
        } => census(&seed, levels, pattern.as_deref(), jobs, list),
        Command::Cd { major, minor } => cd(&major, &minor),
        Command::Corpus {
            action: CorpusAction::List,
        } => {
            let mut text = String::new();
            for e in corpus::all() {
                let tags: Vec<&str> = e.tags.iter().map(|t| t.as_str()).collect();
                writeln!(text, "{}\t{}\t{}", e.name, tags.join(","), e.formula).unwrap();
            }
            emit(&text);
            Ok(0)
        }
    }
}

/// Writes to standard output, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_problem(path: &Path, overrides: &Overrides) -> Result<Problem, Failure> {
    let mut problem = parse_problem(&read(path)?)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    overrides.apply(&mut problem.config);
    problem.config.validate().map_err(Failure::input)?;
    Ok(problem)
}

/// Corpus name first, then formula text.
fn formula_arg(text: &str) -> Result<Formula, Failure> {
    if let Ok(e) = corpus::get(text) {
        return Ok(e.formula.clone());
    }
    parse_formula(text).map_err(|e| Failure::input(format!("{text:?}: {e}")))
}

fn exit_for(termination: Termination) -> u8 {
    match termination {
        Termination::AllTargetsProved => 0,
        t if t.is_resource_limit() => RESOURCE_LIMIT,
        _ => NOT_FOUND,
    }
}

fn termination_name(t: Termination) -> &'static str {
    match t {
        Termination::AllTargetsProved => "all-targets-proved",
        Termination::AgendaExhausted => "agenda-exhausted",
        Termination::GivenLimit => "given-limit",
        Termination::KeptLimit => "kept-limit",
        Termination::WallClock => "wall-clock",
    }
}

fn file_name(target: &str) -> String {
    let safe: String = target
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    format!("{safe}.proof")
}

fn prove(path: &Path, out: Option<&Path>, overrides: &Overrides) -> Result<u8, Failure> {
    let problem = load_problem(path, overrides)?;
    let outcome = with_jobs(overrides.jobs, || {
        saturate(&problem.sos, problem.config.clone(), &problem.targets)
    })
    .map_err(Failure::input)?;
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
    }
    let mut text = String::new();
    for (name, proof) in &outcome.proofs {
        let metrics = proof
            .verify()
            .map_err(|e| Failure(NOT_FOUND, format!("internal: {name}: {e}")))?;
        match out {
            Some(dir) => {
                let file = dir.join(file_name(name));
                fs::write(&file, render(proof))
                    .map_err(|e| Failure::input(format!("{}: {e}", file.display())))?;
                writeln!(text, "proved {name}: {metrics} -> {}", file.display()).unwrap();
            }
            None => {
                writeln!(text, "proved {name}: {metrics}").unwrap();
                text.push_str(&render(proof));
            }
        }
    }
    stats_block(&mut text, &outcome);
    emit(&text);
    Ok(exit_for(outcome.termination))
}

fn stats_block(text: &mut String, outcome: &SearchOutcome) {
    let s = &outcome.stats;
    writeln!(
        text,
        "given={} generated={} kept={} discarded={} (weight={} subsumed={} term_avoidance={} too_many_vars={} blocked={} ancestor_replaced={}) back_subsumed={}",
        s.given,
        s.generated,
        s.kept,
        s.discarded(),
        s.weight,
        s.subsumed,
        s.term_avoidance,
        s.too_many_vars,
        s.blocked,
        s.ancestor_replaced,
        s.back_subsumed
    )
    .unwrap();
    let levels: Vec<String> = outcome
        .per_level_census
        .iter()
        .map(|n| n.to_string())
        .collect();
    writeln!(text, "kept per level: {}", levels.join(" ")).unwrap();
    writeln!(
        text,
        "termination: {}",
        termination_name(outcome.termination)
    )
    .unwrap();
    writeln!(text, "% wall time {:.3}s", outcome.elapsed.as_secs_f64()).unwrap();
}

fn check(path: &Path) -> Result<u8, Failure> {
    let proof = parse_proof(&read(path)?)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    match proof.verify() {
        Ok(m) => {
            emit(&format!("verified: {m}\n"));
            Ok(0)
        }
        Err(e) => Err(Failure(NOT_FOUND, e.to_string())),
    }
}

fn shorten_cmd(
    proof_path: &Path,
    problem_path: &Path,
    rounds: usize,
    replay: bool,
    out: Option<&Path>,
    overrides: &Overrides,
) -> Result<u8, Failure> {
    let proof = parse_proof(&read(proof_path)?)
        .map_err(|e| Failure::input(format!("{}: {e}", proof_path.display())))?;
    let problem = load_problem(problem_path, overrides)?;
    let budget = ShortenBudget {
        rounds,
        replay,
        parallelism: Parallelism::default(),
    };
    let report = with_jobs(overrides.jobs, || {
        shorten(&proof, &problem.targets, &problem.config, &budget)
    })
    .map_err(|e| Failure(NOT_FOUND, e.to_string()))?;
    let lengths: Vec<String> = report.lengths.iter().map(|n| n.to_string()).collect();
    let rendered = render(&report.proof);
    match out {
        Some(file) => {
            fs::write(file, &rendered)
                .map_err(|e| Failure::input(format!("{}: {e}", file.display())))?;
        }
        None => emit(&rendered),
    }
    emit(&format!("lengths: {}\n", lengths.join(" -> ")));
    Ok(0)
}

fn census(
    seed: &str,
    levels: usize,
    pattern: Option<&str>,
    jobs: usize,
    list: bool,
) -> Result<u8, Failure> {
    let seed = if Path::new(seed).is_file() {
        let text = read(Path::new(seed))?;
        let line = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('%'))
            .ok_or_else(|| Failure::input(format!("{seed}: no formula")))?;
        formula_arg(line)?
    } else {
        formula_arg(seed)?
    };
    let pattern = pattern.map(formula_arg).transpose()?;
    let started = Instant::now();
    let census = with_jobs(jobs, || {
        level_census(&seed, levels, pattern.as_ref(), &CensusOptions::default())
    })
    .map_err(|e| Failure(RESOURCE_LIMIT, e.to_string()))?;
    let mut text = String::new();
    let mut cumulative = 0;
    for (k, level) in census.levels.iter().enumerate() {
        if k > 0 {
            cumulative += level.formulas.len();
        }
        writeln!(
            text,
            "level {k}: {} new, cumulative {cumulative}, exceptions {}",
            level.formulas.len(),
            level.exceptions.len()
        )
        .unwrap();
        for e in &level.exceptions {
            writeln!(text, "  exception: {e}").unwrap();
        }
    }
    if list {
        for f in &census.levels.last().unwrap().formulas {
            writeln!(text, "{f}").unwrap();
        }
    }
    writeln!(text, "% wall time {:.3}s", started.elapsed().as_secs_f64()).unwrap();
    emit(&text);
    Ok(0)
}

fn cd(major: &str, minor: &str) -> Result<u8, Failure> {
    let major = formula_arg(major)?;
    let minor = formula_arg(minor)?;
    match condensed_detach(&major, &minor) {
        Ok(conclusion) => {
            let size = common_instance_size(&major, &minor).expect("unifiable pair");
            emit(&format!("{conclusion}\ncommon instance size: {size}\n"));
            Ok(0)
        }
        Err(e) => Err(Failure(NOT_FOUND, e.to_string())),
    }
}
