use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use higherlim::bounds::{tree_strategy, vanishing_bounds};
use higherlim::diagram::{random_instance, ModuleDiagram, RandomParams, ReplacementReport, Shape};
use higherlim::exactla::{Field, FieldSpec, PrimeField, Rationals};
use higherlim::instance::InstanceFile;
use higherlim::oracle::oracle_higher_limits;
use higherlim::verify::{verify, Outcome, VerifyOptions};
use higherlim::Error;

#[derive(Parser)]
#[command(name = "higherlim", version, about = "Exact higher limits of functors on finite posets")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Higher limits of the functor in FILE.
    Compute {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Fibrant)]
        method: Method,
        /// Compute over the elements strictly below ELEM instead.
        #[arg(long, value_name = "ELEM")]
        at: Option<String>,
        /// Only truncate at elements of degree at most M.
        #[arg(long, value_name = "M")]
        cutoff: Option<usize>,
    },
    /// Labels of the poset in FILE.
    Label {
        file: PathBuf,
        /// Write the Hasse diagram in DOT format.
        #[arg(long, value_name = "OUT")]
        dot: Option<PathBuf>,
    },
    /// Vanishing bounds for the poset in FILE.
    Bounds {
        file: PathBuf,
        /// Number of sampled maximal trees; 1 uses the deterministic scan.
        #[arg(long, default_value_t = 16)]
        tree_trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Randomized differential testing of every invariant.
    Check {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        gen: GenArgs,
        /// Fixed field; by default trials rotate through Q, Fp:2 and Fp:5.
        #[arg(long)]
        field: Option<FieldSpec>,
    },
    /// Write a random instance file.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Fibrant,
    Oracle,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ShapeArg {
    Layered,
    Tree,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long, default_value_t = 12)]
    max_elements: usize,
    #[arg(long, default_value_t = 3)]
    max_dim: usize,
    /// Indicator summands attempted per functor.
    #[arg(long, default_value_t = 5)]
    atoms: usize,
    #[arg(long, default_value_t = 5)]
    max_layers: usize,
    #[arg(long, value_enum, default_value_t = ShapeArg::Layered)]
    shape: ShapeArg,
}

impl GenArgs {
    fn params(&self) -> RandomParams {
        RandomParams {
            max_elements: self.max_elements,
            max_dim: self.max_dim,
            atoms: self.atoms,
            max_layers: self.max_layers,
            shape: match self.shape {
                ShapeArg::Layered => Shape::Layered,
                ShapeArg::Tree => Shape::Tree,
            },
            conjugate: true,
        }
    }
}

/// Failures, split by exit code.
enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Calls a generic body with the concrete field named by a spec.
macro_rules! with_field {
    ($spec:expr, |$field:ident| $body:expr) => {
        match $spec {
            FieldSpec::Rationals => {
                let $field = &Rationals;
                $body
            }
            FieldSpec::Prime(p) => {
                let $field = &PrimeField::new(p)?;
                $body
            }
        }
    };
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(&cli, &mut out);
    print!("{out}");
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> CliResult<InstanceFile> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    InstanceFile::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli, out: &mut String) -> CliResult<()> {
    match &cli.command {
        Command::Compute { file, method, at, cutoff } => {
            let inst = load(file)?;
            with_field!(inst.field_spec(), |field| compute(cli.json, out, &inst.diagram(field)?, *method, at.as_deref(), *cutoff))
        }
        Command::Label { file, dot } => {
            let poset = load(file)?.poset()?;
            let labels = poset.labelling();
            if cli.json {
                let map: serde_json::Map<String, Value> =
                    (0..poset.len()).map(|p| (poset.id(p).to_string(), json!(labels.label(p)))).collect();
                push_json(out, &json!({ "labels": map, "sup_b": labels.sup() }));
            } else {
                for p in 0..poset.len() {
                    let _ = writeln!(out, "{}: B={} d={}", poset.id(p), labels.label(p), poset.degree(p));
                }
                let _ = writeln!(out, "sup B = {}", labels.sup());
            }
            if let Some(path) = dot {
                let tree = poset.maximal_tree(tree_strategy(1, 0));
                write_file(path, &poset.to_dot(Some(&tree)))?;
            }
            Ok(())
        }
        Command::Bounds { file, tree_trials, seed } => {
            let inst = load(file)?;
            with_field!(inst.field_spec(), |field| bounds(cli.json, out, &inst, &inst.diagram(field)?, *tree_trials, *seed))
        }
        Command::Check { trials, seed, gen, field } => check(cli.json, out, *trials, *seed, &gen.params(), *field),
        Command::Random { seed, gen, field, output } => {
            let text = with_field!(*field, |f| InstanceFile::from_diagram(&random_instance(f, *seed, &gen.params())).to_json());
            match output {
                Some(path) => write_file(path, &format!("{text}\n")),
                None => {
                    out.push_str(&text);
                    out.push('\n');
                    Ok(())
                }
            }
        }
    }
}

fn push_json(out: &mut String, v: &Value) {
    out.push_str(&serde_json::to_string_pretty(v).expect("json values serialize"));
    out.push('\n');
}

fn fmt_dims(h: &[usize]) -> String {
    if h.is_empty() {
        return "H^*=0".into();
    }
    h.iter().enumerate().map(|(k, d)| format!("H^{k}={d}")).collect::<Vec<_>>().join(" ")
}

fn compute<F: Field>(
    json: bool,
    out: &mut String,
    f: &ModuleDiagram<F>,
    method: Method,
    at: Option<&str>,
    cutoff: Option<usize>,
) -> CliResult<()> {
    let at_index = at.map(|id| f.poset().index_of(id)).transpose()?;
    if let (Some(m), Some(l)) = (cutoff, f.poset().length()) {
        if m > l {
            return Err(Failure::Input(format!("cutoff {m} exceeds the length {l}")));
        }
    }
    let mut report: Option<ReplacementReport> = None;
    let fibrant = if method != Method::Oracle {
        let rf = f.fibrant_replacement(cutoff)?;
        report = Some(rf.report());
        Some(match at_index {
            Some(p) => rf.limit_below(p).limit().cohomology_dims(),
            None => rf.higher_limits()?,
        })
    } else {
        None
    };
    let oracle = if method != Method::Fibrant { Some(oracle_higher_limits(f, at)?) } else { None };
    if let (Some(a), Some(b)) = (&fibrant, &oracle) {
        if a != b {
            return Err(Failure::Internal(format!("fibrant route gives {a:?}, oracle gives {b:?}")));
        }
    }
    let h = fibrant.or(oracle).expect("some backend ran");

    if json {
        push_json(
            out,
            &json!({
                "field": f.field().spec(),
                "at": at,
                "cutoff": cutoff,
                "higher_limits": h,
                "backends_agree": (method == Method::Both).then_some(true),
                "replacement": report,
            }),
        );
        return Ok(());
    }
    let suffix = if method == Method::Both { "; backends agree" } else { "" };
    let _ = writeln!(out, "{}{suffix}", fmt_dims(&h));
    if let Some(r) = report {
        let _ = writeln!(out, "{:<12} {:<11} {:<10} {:<7} matching ranks", "element", "case", "dims", "height");
        for e in &r.elements {
            let height = e.height.map_or("-".to_string(), |h| h.to_string());
            let _ = writeln!(
                out,
                "{:<12} {:<11} {:<10} {:<7} {:?}",
                e.id,
                e.case.to_string(),
                format!("{:?}", e.dims),
                height,
                e.matching_ranks
            );
        }
    }
    Ok(())
}

fn bounds<F: Field>(
    json: bool,
    out: &mut String,
    inst: &InstanceFile,
    f: &ModuleDiagram<F>,
    trials: usize,
    seed: u64,
) -> CliResult<()> {
    let mut report = vanishing_bounds(f.poset(), tree_strategy(trials, seed));
    if inst.functor.is_some() {
        report = report.with_heights(&f.fibrant_replacement(None)?);
    }
    if json {
        push_json(out, &serde_json::to_value(&report).expect("reports serialize"));
        return Ok(());
    }
    let opt = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
    let _ = writeln!(out, "sup B       {}", report.sup_b);
    let _ = writeln!(out, "length      {}", opt(report.max_degree));
    let _ = writeln!(out, "2#D+1       {} (D = {:?}, {} covers removed)", report.tree_bound, report.degree_set, report.removed_covers);
    if let Some(h) = report.realized_height {
        let _ = writeln!(out, "height(RF)  {}", opt(h));
    }
    let _ = writeln!(out, "H^k = 0 for k > {}", report.vanishing_degree());
    Ok(())
}

fn trial_field(fixed: Option<FieldSpec>, i: usize) -> FieldSpec {
    fixed.unwrap_or([FieldSpec::Rationals, FieldSpec::Prime(2), FieldSpec::Prime(5)][i % 3])
}

fn check(
    json: bool,
    out: &mut String,
    trials: usize,
    seed: u64,
    params: &RandomParams,
    field: Option<FieldSpec>,
) -> CliResult<()> {
    if let Some(FieldSpec::Prime(p)) = field {
        PrimeField::new(p)?;
    }
    let opts = VerifyOptions::default();
    let results: Vec<(u64, FieldSpec, Result<Outcome, Error>)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i as u64);
            let spec = trial_field(field, i);
            let one = || -> Result<Outcome, Error> {
                with_field!(spec, |f| verify(&random_instance(f, s, params), &opts))
            };
            (s, spec, one())
        })
        .collect();

    let mut failing = Vec::new();
    let mut lines = Vec::new();
    for (s, spec, r) in &results {
        match r {
            Ok(o) if o.passed() => {}
            Ok(o) => {
                failing.push(*s);
                for v in o.failures() {
                    lines.push(format!("seed {s} ({spec}): {}: {}", v.property, v.failure.as_deref().unwrap_or("")));
                }
            }
            Err(e) => {
                failing.push(*s);
                lines.push(format!("seed {s} ({spec}): {e}"));
            }
        }
    }
    let passed = trials - failing.len();
    if json {
        push_json(out, &json!({ "trials": trials, "passed": passed, "failing_seeds": failing, "failures": lines }));
    } else {
        for l in &lines {
            let _ = writeln!(out, "FAIL {l}");
        }
        let _ = writeln!(out, "{passed}/{trials} trials passed");
        if !failing.is_empty() {
            let _ = writeln!(out, "failing seeds: {failing:?}");
        }
    }
    if failing.is_empty() {
        Ok(())
    } else {
        Err(Failure::Internal(format!("{} of {trials} trials failed", failing.len())))
    }
}
