use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qdyson::dyson::{verify_dyson, verify_q_dyson, DysonSpec};
use qdyson::error::SpecError;
use qdyson::firstlayer::{verify_first_layer, verify_j_independence, LayerSpec};
use qdyson::kadell::{evaluate_kadell_q, reproduce_counterexample, verify_kadell};
use qdyson::maintheorem::{verify_main, JSemantics, PairedLayer};
use qdyson::report::VerificationReport;
use qdyson::sweep::{run_sweep, Identity, Outcome, SweepConfig};

const OK: u8 = 0;
const FAILED: u8 = 1;
const USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "qdyson", version, about = "Exact verifier for Dyson-type constant-term identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check one instance of an identity.
    Verify(VerifyArgs),
    /// Check every instance of a parameter grid.
    Sweep(SweepArgs),
    /// Recompute the counterexample to the q-analogous conjecture.
    Counterexample {
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// One of qdyson, dyson, firstlayer, firstlayer-q1, kadell, kadell-q, main.
    identity: Identity,
    #[arg(long)]
    n: usize,
    /// Comma-separated a_0,...,a_n.
    #[arg(long, value_parser = parse_list::<u32>)]
    a: List<u32>,
    #[arg(long = "I", value_parser = parse_list::<usize>, default_value = "")]
    i: List<usize>,
    #[arg(long = "J", value_parser = parse_list::<usize>, default_value = "")]
    j: List<usize>,
    #[arg(long, default_value = "multiset")]
    semantics: JSemantics,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    identity: Identity,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    amax: u32,
    /// Layer sizes: `HI` or `LO..HI` (inclusive).
    #[arg(long, value_parser = parse_m_range)]
    m: Option<(Option<usize>, usize)>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random instances for the `lemmas` suite.
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long, default_value = "multiset")]
    semantics: JSemantics,
    /// Write one JSON report per line, then the summary object.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Print a line for every instance, not only failures.
    #[arg(long)]
    verbose: bool,
}

#[derive(Clone, Debug)]
struct List<T>(Vec<T>);

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<List<T>, String>
where
    T::Err: std::fmt::Display,
{
    let s = s.trim();
    if s.is_empty() {
        return Ok(List(Vec::new()));
    }
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(List)
}

fn parse_m_range(s: &str) -> Result<(Option<usize>, usize), String> {
    let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    match s.split_once("..") {
        Some((lo, hi)) => Ok((Some(num(lo)?), num(hi.trim_start_matches('='))?)),
        None => Ok((None, num(s)?)),
    }
}

fn write_lines(path: &Path, lines: impl IntoIterator<Item = String>) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for line in lines {
        writeln!(out, "{line}")?;
    }
    out.flush()
}

fn run_verify(args: VerifyArgs) -> Result<VerificationReport, SpecError> {
    let layer = || LayerSpec::new(args.n, args.i.0.clone(), args.j.0.clone());
    match args.identity {
        Identity::QDyson => Ok(verify_q_dyson(&DysonSpec::with_n(args.n, args.a.0.clone())?)),
        Identity::Dyson => Ok(verify_dyson(&DysonSpec::with_n(args.n, args.a.0.clone())?)),
        Identity::FirstLayer => verify_first_layer(&layer()?, &args.a.0),
        Identity::FirstLayerQ1 => verify_j_independence(args.n, &args.i.0, &args.a.0),
        Identity::Kadell => verify_kadell(&layer()?, &args.a.0),
        Identity::KadellQ => evaluate_kadell_q(&layer()?, &args.a.0),
        Identity::Main => verify_main(&PairedLayer::new(layer()?), &args.a.0, args.semantics),
        Identity::Lemmas => Err(SpecError::Precondition(
            "the lemma suite only runs as a sweep".into(),
        )),
    }
}

fn cmd_verify(args: VerifyArgs) -> u8 {
    let json = args.json.clone();
    let report = match run_verify(args) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return USAGE;
        }
    };
    println!("{}", report.summary_line());
    println!("  lhs = {}", report.lhs);
    println!("  rhs = {}", report.rhs);
    if let Some(path) = json {
        if let Err(e) = write_lines(&path, [report.to_json()]) {
            eprintln!("error: writing {}: {e}", path.display());
            return USAGE;
        }
    }
    if report.holds {
        OK
    } else {
        FAILED
    }
}

fn cmd_sweep(args: SweepArgs) -> u8 {
    let (m_min, m_max) = match args.m {
        Some((lo, hi)) => (lo, Some(hi)),
        None => (None, None),
    };
    let cfg = SweepConfig {
        identity: args.identity,
        n: args.n,
        amax: args.amax,
        m_min,
        m_max,
        jobs: args.jobs,
        seed: args.seed,
        semantics: args.semantics,
        samples: args.samples,
    };
    let result = match run_sweep(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return USAGE;
        }
    };
    for o in &result.outcomes {
        match o {
            Outcome::Checked(r) if args.verbose || !r.holds => println!("{}", r.summary_line()),
            Outcome::Rejected { params, reason } if args.verbose => {
                println!("{} n={} a={:?} I={:?} J={:?}: REJECTED ({reason})", cfg.identity, params.n, params.a, params.i, params.j)
            }
            _ => {}
        }
    }
    let summary = serde_json::to_string(&result.summary).expect("summary serializes");
    println!("{summary}");
    if let Some(path) = args.json {
        let lines = result
            .reports()
            .map(VerificationReport::to_json)
            .chain(std::iter::once(summary));
        if let Err(e) = write_lines(&path, lines) {
            eprintln!("error: writing {}: {e}", path.display());
            return USAGE;
        }
    }
    if result.all_hold() {
        OK
    } else {
        FAILED
    }
}

fn cmd_counterexample(json: Option<PathBuf>) -> u8 {
    let report = reproduce_counterexample();
    let extra = &report.params.extra;
    let matches = extra.get("matches_expected").and_then(|v| v.as_bool()) == Some(true);
    println!("q-analogue of Kadell's identity at n=2, a=(1,1,1), I={{0}}, J={{1}}");
    println!("  lhs = {} = {}", extra["lhs_factored"].as_str().unwrap_or(""), report.lhs);
    println!("  rhs = {} = {}", extra["rhs_factored"].as_str().unwrap_or(""), report.rhs);
    let confirmed = matches && !report.holds;
    if confirmed {
        println!("verdict: identity fails as expected (lhs != rhs)");
    } else {
        println!("verdict: UNEXPECTED (holds={}, matches_expected={matches})", report.holds);
    }
    if let Some(path) = json {
        if let Err(e) = write_lines(&path, [report.to_json()]) {
            eprintln!("error: writing {}: {e}", path.display());
            return USAGE;
        }
    }
    if confirmed {
        OK
    } else {
        FAILED
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Counterexample { json } => cmd_counterexample(json),
    };
    ExitCode::from(code)
}
