//! `symgap`: analyze, construct and decompose finite functions, and run
//! censuses and verification suites over symmetric functions.

mod render;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use symgap::{
    construct_gap2_ternary, construct_gap_n, construct_linear, expand, extract_decomposition, orbit_sum, recompose,
    Error, FiniteFunction, FunctionDocument, GapNSpec, LinearSpec, RunOptions, SymmetricSpec, TernaryGap2Spec,
};

#[derive(Parser, Debug)]
#[command(name = "symgap", version, about = "Essential arity gap and subfunction analysis of k-valued functions")]
struct Cli {
    /// Report format; `json` is the stable contract.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,

    /// Write the report to this file instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report the variable structure of a function document.
    Analyze {
        /// Function document; standard input when absent or `-`.
        input: Option<PathBuf>,
    },
    /// Build a function from a constructor spec document.
    Construct {
        kind: ConstructKind,
        /// Spec document; standard input when absent or `-`.
        spec: Option<PathBuf>,
    },
    /// Split a symmetric gap-2 function into its `(g, h)` parts.
    Decompose {
        /// Function document; standard input when absent or `-`.
        input: Option<PathBuf>,
    },
    /// Count symmetric functions by essential arity and gap.
    Census {
        k: usize,
        n: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run a named verification suite.
    Verify {
        /// Suite name; `list` prints the registered suites.
        suite: String,
        k: Option<usize>,
        n: Option<usize>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ConstructKind {
    GapN,
    Gap2Ternary,
    Linear,
    OrbitSum,
    Recompose,
    Symmetric,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    workers: Option<usize>,

    /// Seed for sampling mode.
    #[arg(long)]
    seed: Option<u64>,

    /// Draw this many uniform random specs instead of enumerating.
    #[arg(long, requires = "seed")]
    sample: Option<u64>,

    /// Raise the exhaustive budget, to N candidates or without limit.
    #[arg(long, value_name = "N", num_args = 0..=1)]
    budget_override: Option<Option<u64>>,
}

impl RunArgs {
    fn options(&self) -> RunOptions {
        let opts = match self.sample {
            Some(count) => RunOptions::sampled(count, self.seed.expect("clap enforces --seed")),
            None => RunOptions::exhaustive(),
        };
        let workers = self.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        let opts = opts.with_workers(workers);
        match self.budget_override {
            Some(Some(budget)) => opts.with_budget(budget as u128),
            Some(None) => opts.with_budget(u128::MAX),
            None => opts,
        }
    }
}

#[derive(Deserialize)]
struct GapNInput {
    k: usize,
    n: usize,
    #[serde(flatten)]
    spec: GapNSpec,
}

#[derive(Deserialize)]
struct TernaryInput {
    k: usize,
    #[serde(flatten)]
    spec: TernaryGap2Spec,
}

#[derive(Deserialize)]
struct LinearInput {
    k: usize,
    #[serde(flatten)]
    spec: LinearSpec,
}

#[derive(Deserialize)]
struct OrbitSumInput {
    k: usize,
    n: usize,
    alpha: Vec<u8>,
}

#[derive(Deserialize)]
struct RecomposeInput {
    g: FiniteFunction,
    h: FiniteFunction,
}

#[derive(Serialize)]
struct DecompositionOutput {
    g: FunctionDocument,
    h: FunctionDocument,
}

/// Exit status 1: the input is well formed but the operation or a check failed.
const FAILURE: u8 = 1;
/// Exit status 2: bad usage or a malformed document.
const USAGE: u8 = 2;

struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn usage(error: impl Into<anyhow::Error>) -> Self {
        Self { code: USAGE, error: error.into() }
    }

    fn domain(error: impl Into<anyhow::Error>) -> Self {
        Self { code: FAILURE, error: error.into() }
    }

    /// Library errors split by whether the caller or the mathematics is at fault.
    fn from_library(error: Error) -> Self {
        match error {
            Error::OverBudget { .. } | Error::UnknownSuite(_) | Error::Domain(_) => Self::usage(error),
            _ => Self::domain(error),
        }
    }
}

struct Outcome {
    report: String,
    passed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(cli.output.as_deref(), &outcome.report) {
                eprintln!("error: {e:#}");
                return ExitCode::from(USAGE);
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(FAILURE)
            }
        }
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn emit(path: Option<&Path>, report: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, report).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(report.as_bytes()).context("writing standard output"),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Analyze { input } => {
            let f: FiniteFunction = read_document(input.as_deref())?;
            let report = render::AnalyzeReport::of(&f);
            Ok(Outcome { report: render_with(json, &report, render::analyze_text)?, passed: true })
        }
        Command::Construct { kind, spec } => {
            let f = construct(*kind, spec.as_deref())?;
            let doc = FunctionDocument::from(&f);
            Ok(Outcome { report: render_with(json, &doc, |_| render::function_text(&f))?, passed: true })
        }
        Command::Decompose { input } => {
            let f: FiniteFunction = read_document(input.as_deref())?;
            let pair = extract_decomposition(&f).map_err(Failure::from_library)?;
            let back = recompose(&pair.g, &pair.h).map_err(Failure::from_library)?;
            if back != f {
                return Err(Failure::domain(anyhow!("recomposed (g, h) does not reproduce the input")));
            }
            let out = DecompositionOutput { g: (&pair.g).into(), h: (&pair.h).into() };
            let text = |_: &DecompositionOutput| {
                format!("g:\n{}h:\n{}", render::function_text(&pair.g), render::function_text(&pair.h))
            };
            Ok(Outcome { report: render_with(json, &out, text)?, passed: true })
        }
        Command::Census { k, n, run } => {
            let census = symgap::census(*k, *n, &run.options()).map_err(Failure::from_library)?;
            Ok(Outcome { report: render_with(json, &census, render::census_text)?, passed: true })
        }
        Command::Verify { suite, k, n, run } => {
            if suite == "list" {
                let names: Vec<_> =
                    symgap::SUITES.iter().map(|(name, summary)| render::SuiteEntry { name, summary }).collect();
                return Ok(Outcome { report: render_with(json, &names, |e| render::suites_text(e))?, passed: true });
            }
            let (Some(k), Some(n)) = (k, n) else {
                return Err(Failure::usage(anyhow!("verify needs a suite name, k and n")));
            };
            let report = symgap::run_suite(suite, *k, *n, &run.options()).map_err(Failure::from_library)?;
            Ok(Outcome { passed: report.passed, report: render_with(json, &report, render::suite_text)? })
        }
    }
}

fn construct(kind: ConstructKind, spec: Option<&Path>) -> Result<FiniteFunction, Failure> {
    let built = match kind {
        ConstructKind::GapN => {
            let input: GapNInput = read_document(spec)?;
            construct_gap_n(input.k, input.n, &input.spec)
        }
        ConstructKind::Gap2Ternary => {
            let input: TernaryInput = read_document(spec)?;
            construct_gap2_ternary(input.k, &input.spec)
        }
        ConstructKind::Linear => {
            let input: LinearInput = read_document(spec)?;
            construct_linear(input.k, &input.spec)
        }
        ConstructKind::OrbitSum => {
            let input: OrbitSumInput = read_document(spec)?;
            orbit_sum(input.n, &input.alpha, input.k)
        }
        ConstructKind::Recompose => {
            let input: RecomposeInput = read_document(spec)?;
            recompose(&input.g, &input.h)
        }
        ConstructKind::Symmetric => {
            let input: SymmetricSpec = read_document(spec)?;
            expand(&input)
        }
    };
    built.map_err(Failure::domain)
}

fn read_document<T: DeserializeOwned>(path: Option<&Path>) -> Result<T, Failure> {
    let (source, text) = match path {
        Some(p) if p != Path::new("-") => {
            let text =
                fs::read_to_string(p).with_context(|| format!("reading {}", p.display())).map_err(Failure::usage)?;
            (p.display().to_string(), text)
        }
        _ => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text).context("reading standard input").map_err(Failure::usage)?;
            ("standard input".to_string(), text)
        }
    };
    serde_json::from_str(&text).with_context(|| format!("malformed document in {source}")).map_err(Failure::usage)
}

fn render_with<T: Serialize>(json: bool, value: &T, text: impl FnOnce(&T) -> String) -> Result<String, Failure> {
    if json {
        let mut s = serde_json::to_string_pretty(value).map_err(Failure::domain)?;
        s.push('\n');
        Ok(s)
    } else {
        Ok(text(value))
    }
}
