//! Command-line entry point. Data goes to stdout (JSON or CSV), diagnostics
//! to stderr. Exit codes: 0 success, 1 domain error, 2 indeterminate primary
//! result, 3 I/O or parse error.

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ramsey_lab::arrow::{arrow_decide, min_mono_copies, typed_arrow_decide, Decision};
use ramsey_lab::balance::{solve_balanced_weights, WeightFunction};
use ramsey_lab::density::{d2, is_strictly_2_balanced, m2, m2_asym, max_density};
use ramsey_lab::family::{check_asymmetric_balanced, check_condition_iv, enumerate_members, generic_members};
use ramsey_lab::graph::{enumerate_copies, Graph};
use ramsey_lab::jsonio::{
    arrow_result_json, balance_certificate_json, balance_verdict_json, density_report_json,
    family_member_json, graph_json, min_mono_json, parse_graph_spec, suen_report_json,
    tail_report_json, typed_graph_json, JsonError,
};
use ramsey_lab::moments::{exact_variance_typed_copies, expected_typed_copies, upper_tail_bound};
use ramsey_lab::ratio::{format_ratio, parse_ratio, Rational};
use ramsey_lab::sample::{sample_coupled, TypedModelParams};
use ramsey_lab::suen::suen_bound;
use ramsey_lab::sweep::{cells_to_csv, sweep, SweepSpec, TypedSweepConfig};
use ramsey_lab::typed::TypedGraph;

const DEFAULT_BUDGET: u64 = 1 << 22;

#[derive(Parser)]
#[command(name = "ramsey-lab", version, about = "Desk-scale laboratory for asymmetric Ramsey properties of random graphs")]
struct Cli {
    /// Worker threads (default: available parallelism). Output is identical
    /// for every value.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// 2-densities, maximizers, and the maximum subgraph density of a graph.
    Density(DensityArgs),
    /// Solve for (w, F)-balanced edge weights of a pattern.
    Weights(WeightsArgs),
    /// Decide G -> (F1, ..., Fr), or the exhaustive mono-copy minimum.
    Arrow(ArrowArgs),
    /// Decide the typed arrow on a typed host.
    TypedArrow(TypedArrowArgs),
    /// Draw one G(n, p, w) sample (optionally with its coupled G(n, p)).
    Sample(SampleArgs),
    /// Exact moments and tail bounds of the typed copy-count statistic.
    Moments(MomentsArgs),
    /// Suen-style bound for the all-copies family in K_n.
    Suen(SuenArgs),
    /// Monte Carlo threshold sweep over the (n, C) grid.
    Sweep(SweepArgs),
    /// Attachment-family construction and balancedness checks.
    Family(FamilyArgs),
}

#[derive(Args)]
struct DensityArgs {
    /// Graph, as graph6 or @file JSON.
    #[arg(long)]
    graph: String,
    /// Second graph: adds the asymmetric density m2(graph, f2).
    #[arg(long)]
    f2: Option<String>,
}

#[derive(Args)]
struct WeightsArgs {
    /// The pattern H.
    #[arg(long)]
    pattern: String,
    /// The second target F.
    #[arg(long)]
    target: String,
}

#[derive(Args)]
struct ArrowArgs {
    /// Host graph; omit together with --complete for a K_n host.
    #[arg(long, required_unless_present = "complete")]
    host: Option<String>,
    /// Complete host K_n (enables --min-mono).
    #[arg(long, conflicts_with = "host")]
    complete: Option<usize>,
    /// Comma-separated targets F1,...,Fr.
    #[arg(long, value_delimiter = ',')]
    targets: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Report the exhaustive minimum total monochromatic copy count instead
    /// of deciding the arrow (requires --complete).
    #[arg(long, requires = "complete")]
    min_mono: bool,
    /// Colouring-enumeration cap for --min-mono.
    #[arg(long, default_value_t = 1 << 26)]
    cap: u64,
}

#[derive(Args)]
struct TypedArrowArgs {
    /// Typed host as @file JSON with "types" and "pattern".
    #[arg(long)]
    host: String,
    /// Targets for colours 2..; may be empty.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    targets: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    pattern: String,
    /// Comma-separated rational weights "1,6/5,..." (default all 1).
    #[arg(long, value_delimiter = ',')]
    weights: Vec<String>,
    /// Solve weights from this second target instead of taking them flat.
    #[arg(long, conflicts_with = "weights")]
    solve_target: Option<String>,
    #[arg(long, env = "RAMSEY_SEED", default_value_t = 0)]
    seed: u64,
    /// Also emit the coupled G(n, p) sample.
    #[arg(long)]
    coupled: bool,
}

#[derive(Args)]
struct MomentsArgs {
    /// The typed statistic I: @file JSON with "types" and "pattern", or a
    /// graph6 string taken as a full identity-typed pattern copy.
    #[arg(long)]
    i: String,
    #[arg(long)]
    n: u64,
    /// Edge probability as an exact rational, e.g. "3/10".
    #[arg(long)]
    p: String,
    #[arg(long, value_delimiter = ',')]
    weights: Vec<String>,
}

#[derive(Args)]
struct SuenArgs {
    #[arg(long)]
    pattern: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long, value_delimiter = ',')]
    weights: Vec<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',')]
    targets: Vec<String>,
    /// Comma-separated vertex counts.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// C grid: comma list "0.5,1,2" or range "lo:hi:step".
    #[arg(long = "C", visible_alias = "c-grid")]
    c: String,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, env = "RAMSEY_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Typed sweep: colour 1 constrained by typed copies of --pattern.
    #[arg(long, requires = "pattern")]
    typed: bool,
    #[arg(long)]
    pattern: Option<String>,
    /// Weights for the typed model (default: solved against the first
    /// target, falling back to all 1).
    #[arg(long, value_delimiter = ',')]
    weights: Vec<String>,
    /// Output format.
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long)]
    f1: String,
    #[arg(long)]
    f2: String,
    #[arg(long, default_value_t = 8)]
    vcap: usize,
    /// Emit generic members only.
    #[arg(long)]
    generic: bool,
    /// Run the asymmetric-balancedness verdict.
    #[arg(long)]
    check_balance: bool,
    /// Check the deterministic density/arrow condition on this host.
    #[arg(long)]
    condition_iv: Option<String>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

enum CliError {
    /// Precondition / domain violations: exit 1.
    Domain(String),
    /// I/O or parse problems: exit 3.
    Parse(String),
}

impl From<JsonError> for CliError {
    fn from(e: JsonError) -> Self {
        CliError::Parse(e.to_string())
    }
}

macro_rules! domain_from {
    ($($ty:ty),*) => {$(
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::Domain(e.to_string())
            }
        }
    )*};
}
domain_from!(
    ramsey_lab::density::DensityError,
    ramsey_lab::balance::BalanceError,
    ramsey_lab::arrow::ArrowError,
    ramsey_lab::sample::SampleError,
    ramsey_lab::moments::MomentsError,
    ramsey_lab::suen::SuenError,
    ramsey_lab::sweep::SweepError,
    ramsey_lab::family::FamilyError
);

fn load_graph(spec: &str) -> Result<Graph, CliError> {
    Ok(parse_graph_spec(spec)?.graph)
}

fn load_graphs(specs: &[String]) -> Result<Vec<Graph>, CliError> {
    specs.iter().map(|s| load_graph(s)).collect()
}

fn parse_weights(specs: &[String], edges: usize) -> Result<WeightFunction, CliError> {
    if specs.is_empty() {
        return Ok(WeightFunction::uniform(edges));
    }
    let weights: Vec<Rational> = specs
        .iter()
        .map(|s| parse_ratio(s).map_err(|e| CliError::Parse(e.to_string())))
        .collect::<Result<_, _>>()?;
    Ok(WeightFunction::new(weights)?)
}

fn parse_c_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Parse(format!("bad C grid {spec:?}"));
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo: f64 = parts[0].parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].parse().map_err(|_| bad())?;
        let step: f64 = parts[2].parse().map_err(|_| bad())?;
        if !(step > 0.0 && hi >= lo) {
            return Err(bad());
        }
        let mut out = Vec::new();
        let mut k = 0u32;
        loop {
            let c = lo + step * k as f64;
            if c > hi + step * 1e-9 {
                break;
            }
            out.push(c);
            k += 1;
        }
        Ok(out)
    } else {
        spec.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    if let Some(jobs) = cli.jobs {
        // Ignore failure: a pool may already be installed (e.g. in tests).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match cli.command {
        Command::Density(args) => {
            let g = load_graph(&args.graph)?;
            let m2_report = m2(&g)?;
            let mut out = json!({
                "d2": format_ratio(&d2(&g)?),
                "m2": format_ratio(&m2_report.value),
                "m2_report": density_report_json(&m2_report),
                "max_density": density_report_json(&max_density(&g)?),
                "strictly_2_balanced": is_strictly_2_balanced(&g)?,
            });
            if let Some(f2_spec) = args.f2 {
                let f2 = load_graph(&f2_spec)?;
                out.as_object_mut()
                    .unwrap()
                    .insert("m2_asym".into(), density_report_json(&m2_asym(&g, &f2)?));
            }
            println!("{out}");
            Ok(0)
        }
        Command::Weights(args) => {
            let h = load_graph(&args.pattern)?;
            let f = load_graph(&args.target)?;
            let cert = solve_balanced_weights(&h, &f)?;
            println!("{}", balance_certificate_json(&cert));
            Ok(0)
        }
        Command::Arrow(args) => {
            let targets = load_graphs(&args.targets)?;
            if args.min_mono {
                let n = args.complete.expect("clap enforces --complete with --min-mono");
                let report = min_mono_copies(n, &targets, args.cap)?;
                println!("{}", min_mono_json(&report));
                return Ok(0);
            }
            let host = match (&args.host, args.complete) {
                (Some(spec), _) => load_graph(spec)?,
                (None, Some(n)) => Graph::complete(n),
                (None, None) => unreachable!("clap enforces host or complete"),
            };
            let result = arrow_decide(&host, &targets, args.budget)?;
            println!("{}", arrow_result_json(&result));
            Ok(if matches!(result.decision, Decision::Indeterminate { .. }) { 2 } else { 0 })
        }
        Command::TypedArrow(args) => {
            let host = parse_graph_spec(&args.host)?.into_typed()?;
            let targets = load_graphs(&args.targets)?;
            let result = typed_arrow_decide(&host, &targets, args.budget)?;
            println!("{}", arrow_result_json(&result));
            Ok(if matches!(result.decision, Decision::Indeterminate { .. }) { 2 } else { 0 })
        }
        Command::Sample(args) => {
            let pattern = load_graph(&args.pattern)?;
            let weights = match &args.solve_target {
                Some(spec) => solve_balanced_weights(&pattern, &load_graph(spec)?)?.weightfn,
                None => parse_weights(&args.weights, pattern.edge_count())?,
            };
            let params =
                TypedModelParams { n: args.n, p: args.p, pattern, weights, seed: args.seed };
            let (typed, plain) = sample_coupled(&params)?;
            let mut out = typed_graph_json(&typed);
            if args.coupled {
                out.as_object_mut().unwrap().insert("coupled".into(), graph_json(&plain));
            }
            println!("{out}");
            Ok(0)
        }
        Command::Moments(args) => {
            let input = parse_graph_spec(&args.i)?;
            let i = if input.types.is_some() {
                input.into_typed()?
            } else {
                TypedGraph::pattern_as_typed(&input.graph)
            };
            let p = parse_ratio(&args.p).map_err(|e| CliError::Parse(e.to_string()))?;
            let w = parse_weights(&args.weights, i.pattern().edge_count())?;
            let expectation = expected_typed_copies(&i, args.n, &p, &w)?;
            let variance = exact_variance_typed_copies(&i, args.n, &p, &w).ok();
            let tail = upper_tail_bound(&i, args.n, &p, &w).ok();
            let out = json!({
                "expectation": format_ratio(&expectation),
                "variance": variance.as_ref().map(format_ratio),
                "tail": tail.as_ref().map(tail_report_json),
            });
            println!("{out}");
            Ok(0)
        }
        Command::Suen(args) => {
            let pattern = load_graph(&args.pattern)?;
            let w = parse_weights(&args.weights, pattern.edge_count())?;
            let host = Graph::complete(args.n);
            let copies = enumerate_copies(&pattern, &host);
            let report = suen_bound(&pattern, &copies, args.p, &w)?;
            println!("{}", suen_report_json(&report));
            Ok(0)
        }
        Command::Sweep(args) => {
            let targets = load_graphs(&args.targets)?;
            let typed = if args.typed {
                let pattern = load_graph(args.pattern.as_ref().expect("clap enforces --pattern"))?;
                let weights = if args.weights.is_empty() {
                    match targets.first() {
                        Some(f2) => match solve_balanced_weights(&pattern, f2) {
                            Ok(cert) => cert.weightfn,
                            Err(_) => WeightFunction::uniform(pattern.edge_count()),
                        },
                        None => WeightFunction::uniform(pattern.edge_count()),
                    }
                } else {
                    parse_weights(&args.weights, pattern.edge_count())?
                };
                Some(TypedSweepConfig { pattern, weights })
            } else {
                None
            };
            let spec = SweepSpec {
                targets,
                n_values: args.n,
                c_values: parse_c_grid(&args.c)?,
                trials: args.trials,
                master_seed: args.seed,
                budget: args.budget,
                typed,
            };
            let cells = sweep(&spec)?;
            if args.format == "json" {
                println!("{}", serde_json::to_string(&cells).expect("cells serialize"));
            } else {
                print!("{}", cells_to_csv(&cells));
            }
            let unusable = cells.iter().filter(|c| c.unusable).count();
            if unusable > 0 {
                eprintln!("warning: {unusable} cell(s) exceed the indeterminate tolerance");
            }
            Ok(0)
        }
        Command::Family(args) => {
            let f1 = load_graph(&args.f1)?;
            let f2 = load_graph(&args.f2)?;
            let members = if args.generic {
                generic_members(&f1, &f2)?
            } else {
                enumerate_members(&f1, &f2, args.vcap)?
            };
            let mut out = json!({
                "members": members.iter().map(family_member_json).collect::<Vec<_>>(),
            });
            if args.check_balance {
                let verdict = check_asymmetric_balanced(&f1, &f2, args.vcap)?;
                out.as_object_mut().unwrap().insert("verdict".into(), balance_verdict_json(&verdict));
            }
            let mut exit = 0;
            if let Some(host_spec) = args.condition_iv {
                let host = load_graph(&host_spec)?;
                let holds = check_condition_iv(&host, &f1, &f2, args.budget)?;
                out.as_object_mut().unwrap().insert("condition_iv".into(), json!(holds));
                if holds.is_none() {
                    exit = 2;
                }
            }
            println!("{out}");
            Ok(exit)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::from(0);
            }
            eprintln!("{e}");
            return ExitCode::from(3);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
