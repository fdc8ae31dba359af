use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use pcqe::backend::Backend;
use pcqe::corpus::{self, Example};
use pcqe::parse::{parse_atom, parse_formula};
use pcqe::pipeline::{decide_job, qe, QeJob};
use pcqe::problem::ProblemFile;
use pcqe::real::parse_real;
use pcqe::reinterpret::NfStyle;
use pcqe::sample::{equivalent, DEFAULT_SEED};
use pcqe::vs::vs_eliminate;
use pcqe::Error;

const EXIT_USER: u8 = 1;
const EXIT_BACKEND: u8 = 2;
const EXIT_FALSE: u8 = 3;
const CORPUS_POINTS: usize = 1000;
const CORPUS_TIMEOUT_SECS: u64 = 120;

#[derive(Parser)]
#[command(name = "pcqe", version, about = "Quantifier elimination over the complex numbers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eliminate the quantifiers of a problem file (or standard input).
    Solve {
        path: Option<PathBuf>,
        #[command(flatten)]
        opts: Opts,
    },
    /// Decide a sentence; exits with status 3 when it is false.
    Decide {
        path: Option<PathBuf>,
        #[command(flatten)]
        opts: Opts,
    },
    /// Run the bundled examples and check them against their expected results.
    Corpus {
        /// Only run examples whose key contains this text.
        filter: Option<String>,
        #[command(flatten)]
        opts: Opts,
        /// Number of random points for the equivalence check.
        #[arg(long, default_value_t = CORPUS_POINTS)]
        points: usize,
    },
    /// Eliminate a real formula read from standard input with the builtin
    /// method. Speaks the external backend protocol.
    RealQe,
}

#[derive(Args, Clone, Debug)]
struct Opts {
    /// Output normal form: conjugate or cartesian.
    #[arg(long)]
    nf: Option<NfStyle>,
    /// `builtin` or `exec:<cmd>`.
    #[arg(long)]
    backend: Option<Backend>,
    /// An atom assumed to hold; may be repeated.
    #[arg(long = "assume", value_name = "ATOM")]
    assume: Vec<String>,
    /// Treat ordering atoms with non-real sides as false.
    #[arg(long)]
    lenient: bool,
    /// Print a JSON report.
    #[arg(long)]
    json: bool,
    /// Time limit in seconds.
    #[arg(long)]
    timeout: Option<u64>,
    /// Seed for the sampling oracle.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Serialize)]
struct RunReport {
    result: String,
    wall_seconds: f64,
    backend: String,
    backend_calls: usize,
    nf_used: String,
}

#[derive(Serialize)]
struct CorpusRow {
    key: String,
    title: String,
    required: bool,
    status: String,
    seconds: f64,
    result: String,
    points: usize,
}

fn exit_code(e: &Error) -> u8 {
    if e.is_backend_failure() || matches!(e, Error::IncompleteSimplification(_)) {
        EXIT_BACKEND
    } else {
        EXIT_USER
    }
}

fn read_input(path: Option<&PathBuf>) -> Result<String, String> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| format!("stdin: {e}"))?;
            Ok(s)
        }
    }
}

/// Builds the job from the file, with command-line flags taking precedence.
fn build_job(text: &str, opts: &Opts) -> pcqe::Result<QeJob> {
    let file = ProblemFile::parse(text)?;
    let mut atoms = file.assumptions()?;
    for a in &opts.assume {
        atoms.push(parse_atom(a)?);
    }
    let mut job = QeJob::new(file.formula()?)
        .assume(atoms)
        .backend(opts.backend.clone().or(file.backend).unwrap_or_default())
        .output_nf(opts.nf.or(file.nf).unwrap_or_default())
        .lenient(opts.lenient || file.lenient.unwrap_or(false));
    job.timeout = opts.timeout.map(Duration::from_secs);
    Ok(job)
}

/// Runs `f` on a worker thread, giving up after `limit`.
fn with_limit<T: Send + 'static>(
    limit: Option<Duration>,
    f: impl FnOnce() -> pcqe::Result<T> + Send + 'static,
) -> pcqe::Result<T> {
    let Some(limit) = limit else { return f() };
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let _ = tx.send(f());
    });
    rx.recv_timeout(limit)
        .unwrap_or(Err(Error::Timeout(limit.as_secs())))
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code(e))
}

fn cmd_solve(path: Option<PathBuf>, opts: Opts, decide: bool) -> ExitCode {
    let text = match read_input(path.as_ref()) {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USER);
        }
    };
    let job = match build_job(&text, &opts) {
        Ok(j) => j,
        Err(e) => return fail(&e),
    };
    let limit = job.timeout;
    let outcome = with_limit(limit, move || {
        let mut job = job;
        let r = if decide {
            decide_job(&mut job).map(|b| b.to_string())
        } else {
            qe(&mut job).map(|f| f.to_string())
        };
        r.map(|s| (s, job))
    });
    let (result, job) = match outcome {
        Ok(x) => x,
        Err(e) => return fail(&e),
    };
    if opts.json {
        let report = RunReport {
            result: result.clone(),
            wall_seconds: job.stats.wall_seconds.max(0.0),
            backend: job.backend.name(),
            backend_calls: job.stats.backend_calls,
            nf_used: job.output_nf.name().into(),
        };
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable report"));
    } else {
        println!("{result}");
    }
    if decide && result == "false" {
        ExitCode::from(EXIT_FALSE)
    } else {
        ExitCode::SUCCESS
    }
}

fn run_example(e: &Example, opts: &Opts, points: usize) -> CorpusRow {
    let mut row = CorpusRow {
        key: e.key.clone(),
        title: e.title.clone(),
        required: e.required,
        status: String::new(),
        seconds: 0.0,
        result: String::new(),
        points: 0,
    };
    let assumptions: pcqe::Result<Vec<_>> = e.assumptions.iter().map(|a| parse_atom(a)).collect();
    let setup = assumptions.and_then(|a| Ok((parse_formula(&e.formula)?, parse_formula(&e.expected)?, a)));
    let (input, expected, assumptions) = match setup {
        Ok(x) => x,
        Err(err) => {
            row.status = "error".into();
            row.result = err.to_string();
            return row;
        }
    };
    let mut job = QeJob::new(input)
        .assume(assumptions.clone())
        .backend(opts.backend.clone().unwrap_or_default())
        .output_nf(opts.nf.unwrap_or(e.nf))
        .lenient(opts.lenient);
    let limit = Duration::from_secs(opts.timeout.unwrap_or(CORPUS_TIMEOUT_SECS));
    job.timeout = Some(limit);
    let start = Instant::now();
    let outcome = with_limit(Some(limit), move || qe(&mut job));
    row.seconds = start.elapsed().as_secs_f64();
    let out = match outcome {
        Ok(f) => f,
        Err(err) => {
            row.status = match err {
                Error::Timeout(_) => "timeout",
                _ => "error",
            }
            .into();
            row.result = err.to_string();
            return row;
        }
    };
    row.result = out.to_string();
    match equivalent(&out, &expected, &assumptions, points, opts.seed) {
        Ok(eq) => {
            row.points = eq.points;
            row.status = if eq.holds() { "pass" } else { "FAIL" }.into();
            if let Some(cx) = eq.counterexample {
                let at: Vec<String> = cx.iter().map(|(k, v)| format!("{k} = {v}")).collect();
                row.result = format!("{} (differs at {})", row.result, at.join(", "));
            }
        }
        Err(err) => {
            row.status = "error".into();
            row.result = format!("{} ({err})", row.result);
        }
    }
    row
}

fn cmd_corpus(filter: Option<String>, opts: Opts, points: usize) -> ExitCode {
    let examples = corpus::select(filter.as_deref());
    let rows: Vec<CorpusRow> = examples
        .par_iter()
        .map(|e| run_example(e, &opts, points))
        .collect();
    let failed = rows
        .iter()
        .filter(|r| r.required && r.status != "pass")
        .count();
    if opts.json {
        println!("{}", serde_json::to_string_pretty(&rows).expect("serializable rows"));
    } else {
        println!("{:<18} {:<8} {:>9}  result", "example", "status", "seconds");
        for r in &rows {
            let status = if r.required { r.status.clone() } else { format!("{}*", r.status) };
            println!("{:<18} {:<8} {:>9.3}  {}", r.key, status, r.seconds, r.result);
        }
        if rows.iter().any(|r| !r.required) {
            println!("* optional example");
        }
        println!("{} run, {} failed", rows.len(), failed);
    }
    if rows.is_empty() || failed > 0 {
        ExitCode::from(EXIT_USER)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_real_qe() -> ExitCode {
    let text = match read_input(None) {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USER);
        }
    };
    match parse_real(&text).and_then(|psi| vs_eliminate(&psi)) {
        Ok(r) => {
            println!("{r}");
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Solve { path, opts } => cmd_solve(path, opts, false),
        Command::Decide { path, opts } => cmd_solve(path, opts, true),
        Command::Corpus { filter, opts, points } => cmd_corpus(filter, opts, points),
        Command::RealQe => cmd_real_qe(),
    }
}
