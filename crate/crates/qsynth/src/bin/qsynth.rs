//! Thin command-line front end over the qsynth library.

use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use qsynth::error::Error;
use qsynth::gates::{builtin_gateset, gateset_from_json, GateSet};
use qsynth::generators::QubitOrder;
use qsynth::harness::{bench_to_csv, rb_to_csv, run_bench, run_rb, BenchConfig, Suite};
use qsynth::io::{unitary_from_json, ResultJson};
use qsynth::qsweep::InstantiationConfig;
use qsynth::result::{synthesize, Engine};

#[derive(Parser)]
#[command(name = "qsynth", version, about = "Single-qudit synthesis toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose one unitary from a JSON file.
    Synth {
        /// Input unitary JSON file.
        #[arg(long)]
        input: PathBuf,
        /// Engine: cbc, rbr, qsweep, or unguided.
        #[arg(long, default_value = "qsweep")]
        method: String,
        /// Gateset name (sqrtx-virtualz, full-u2, rx-virtualz) or a path to
        /// a gateset JSON file.
        #[arg(long, default_value = "sqrtx-virtualz")]
        gateset: String,
        /// Final distance tolerance for numerical engines.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path for the result JSON (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark suite across engines on identical instances.
    Bench {
        /// Suite: haar, clifford, or two-qubit.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Comma-separated engines.
        #[arg(long, default_value = "cbc,rbr,qsweep")]
        engines: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "sqrtx-virtualz")]
        gateset: String,
        /// Numerical tolerance override.
        #[arg(long)]
        tol: Option<f64>,
        /// Per-instance engine timeout in seconds.
        #[arg(long, default_value_t = 60.0)]
        timeout: f64,
        /// Two-qubit basis ordering: high (|q1 q0> -> 2q1+q0) or low.
        #[arg(long, default_value = "high")]
        qubit_order: String,
        /// Output report path (.csv or .json decides the format; stdout CSV
        /// when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate and decompose randomized-benchmarking sequences.
    Rb {
        /// Qudit dimension, 3 or 4.
        #[arg(long)]
        dim: usize,
        /// Comma-separated sequence depths.
        #[arg(long, default_value = "2,4,8")]
        depths: String,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value = "qsweep")]
        engine: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "sqrtx-virtualz")]
        gateset: String,
        #[arg(long, default_value_t = 60.0)]
        timeout: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let code = exit_code_for(&err);
            eprintln!(
                "{}",
                serde_json::json!({ "error": err.to_string(), "code": code })
            );
            ExitCode::from(code)
        }
    }
}

/// Exit codes: 2 parse error, 3 non-unitary input, 4 synthesis failure.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse(_) | Error::UnknownGateset(_) => 2,
        Error::NotUnitary { .. } | Error::NotSquare { .. } | Error::DimensionTooSmall(_) => 3,
        Error::InstantiationFailure { .. }
        | Error::VerificationFailure { .. }
        | Error::Timeout(_)
        | Error::DegenerateRow { .. }
        | Error::InconsistentRow { .. }
        | Error::UnsupportedDimension { .. }
        | Error::UnsupportedGateset(_) => 4,
        _ => 1,
    }
}

fn load_gateset(spec: &str) -> Result<GateSet, Error> {
    if Path::new(spec).exists() {
        let text = std::fs::read_to_string(spec)?;
        gateset_from_json(&text)
    } else {
        builtin_gateset(spec)
    }
}

fn parse_engines(spec: &str) -> Result<Vec<Engine>, Error> {
    spec.split(',')
        .map(|s| s.trim().parse::<Engine>())
        .collect()
}

fn write_or_print(out: Option<&PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(Error::from),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Synth {
            input,
            method,
            gateset,
            tol,
            seed,
            out,
        } => {
            let engine: Engine = method.parse()?;
            let gs = load_gateset(&gateset)?;
            let text = std::fs::read_to_string(&input)?;
            let target = unitary_from_json(&text, 1e-10)?;
            let cfg = InstantiationConfig {
                eps_final: tol,
                eps_elem: (tol * 1e-2).min(1e-10),
                seed,
                deadline: Some(Duration::from_secs(600)),
                ..Default::default()
            };
            let result = synthesize(&target, engine, &gs, &cfg)?;
            let json = serde_json::to_string_pretty(&ResultJson::from_result(&result))
                .expect("serializable");
            write_or_print(out.as_ref(), &json)
        }
        Command::Bench {
            suite,
            dim,
            count,
            engines,
            seed,
            gateset,
            tol,
            timeout,
            qubit_order,
            out,
        } => {
            let cfg = BenchConfig {
                suite: suite.parse::<Suite>()?,
                dim,
                count,
                engines: parse_engines(&engines)?,
                seed,
                tol,
                timeout_secs: timeout,
                qubit_order: match qubit_order.as_str() {
                    "high" => QubitOrder::HighFirst,
                    "low" => QubitOrder::LowFirst,
                    other => {
                        return Err(Error::Parse(format!("unknown qubit order {other:?}")))
                    }
                },
            };
            let gs = load_gateset(&gateset)?;
            let report = run_bench(&cfg, &gs)?;
            let is_json = out
                .as_ref()
                .map(|p| p.extension().map(|e| e == "json").unwrap_or(false))
                .unwrap_or(false);
            let content = if is_json {
                serde_json::to_string_pretty(&report).expect("serializable")
            } else {
                bench_to_csv(&report)
            };
            write_or_print(out.as_ref(), &content)
        }
        Command::Rb {
            dim,
            depths,
            samples,
            engine,
            seed,
            gateset,
            timeout,
            out,
        } => {
            let engine: Engine = engine.parse()?;
            let gs = load_gateset(&gateset)?;
            let depths: Vec<usize> = depths
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|e| Error::Parse(format!("bad depth {s:?}: {e}")))
                })
                .collect::<Result<_, _>>()?;
            let report = run_rb(dim, &depths, samples, engine, &gs, seed, timeout)?;
            let is_json = out
                .as_ref()
                .map(|p| p.extension().map(|e| e == "json").unwrap_or(false))
                .unwrap_or(false);
            let content = if is_json {
                serde_json::to_string_pretty(&report).expect("serializable")
            } else {
                rb_to_csv(&report)
            };
            write_or_print(out.as_ref(), &content)
        }
    }
}
