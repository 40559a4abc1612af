//! Benchmark orchestration and report generation: the haar/clifford/
//! two-qubit suites and the randomized-benchmarking runner, with CSV and
//! JSON writers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::str::FromStr;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::gates::GateSet;
use crate::generators::{
    haar_or_clifford_instances, two_qubit_suite_ordered, QubitOrder, TWO_QUBIT_GATE_NAMES,
};
use crate::io::fmt_f64;
use crate::qsweep::InstantiationConfig;
use crate::result::{synthesize, Engine};
use crate::unitary::UnitaryMatrix;

/// Which benchmark suite to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Haar,
    Clifford,
    TwoQubit,
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Suite::Haar => "haar",
            Suite::Clifford => "clifford",
            Suite::TwoQubit => "two-qubit",
        };
        f.write_str(s)
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "haar" => Ok(Suite::Haar),
            "clifford" => Ok(Suite::Clifford),
            "two-qubit" => Ok(Suite::TwoQubit),
            other => Err(Error::Parse(format!("unknown suite {other:?}"))),
        }
    }
}

/// Settings for one bench invocation.
#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub suite: Suite,
    pub dim: usize,
    pub count: usize,
    pub engines: Vec<Engine>,
    pub seed: u64,
    /// Overrides the numerical engines' final tolerance when set.
    pub tol: Option<f64>,
    /// Per-instance engine budget in seconds.
    pub timeout_secs: f64,
    pub qubit_order: QubitOrder,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            suite: Suite::Haar,
            dim: 4,
            count: 10,
            engines: vec![Engine::Cbc, Engine::Rbr, Engine::Qsweep],
            seed: 0,
            tol: None,
            timeout_secs: 60.0,
            qubit_order: QubitOrder::HighFirst,
        }
    }
}

/// One row of a bench report. `status` is "ok", "failed", or "timeout".
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchRow {
    pub suite: String,
    pub dim: usize,
    pub instance: String,
    pub engine: Engine,
    pub pulses: u32,
    pub factors: u32,
    pub distance: f64,
    pub time_s: f64,
    pub status: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EngineAggregate {
    pub engine: Engine,
    pub mean_pulses: f64,
    pub mean_time_s: f64,
    pub ok_rows: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchReport {
    pub suite: String,
    pub dim: usize,
    pub seed: u64,
    pub rows: Vec<BenchRow>,
    pub aggregates: Vec<EngineAggregate>,
}

/// Thread pool capped by `QSYNTH_THREADS` (default: available cores).
fn worker_pool() -> rayon::ThreadPool {
    let threads = std::env::var("QSYNTH_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

fn instantiation_config(cfg: &BenchConfig, seed: u64) -> InstantiationConfig {
    let mut ic = InstantiationConfig {
        seed,
        deadline: Some(Duration::from_secs_f64(cfg.timeout_secs)),
        ..Default::default()
    };
    if let Some(tol) = cfg.tol {
        ic.eps_final = tol;
        ic.eps_elem = (tol * 1e-2).min(1e-10);
    }
    ic
}

/// Runs every requested engine on identical instances and assembles the
/// report. Rows are ordered by (instance, engine); aggregates are the
/// arithmetic means over ok rows per engine.
pub fn run_bench(cfg: &BenchConfig, gateset: &GateSet) -> Result<BenchReport> {
    let instances: Vec<(String, UnitaryMatrix)> = match cfg.suite {
        Suite::TwoQubit => {
            if cfg.dim != 4 {
                return Err(Error::UnsupportedDimension {
                    dim: cfg.dim,
                    reason: "the two-qubit suite forces dim 4".into(),
                });
            }
            let mut suite = two_qubit_suite_ordered(cfg.qubit_order);
            TWO_QUBIT_GATE_NAMES
                .iter()
                .map(|name| (name.to_string(), suite.remove(*name).expect("suite gate")))
                .collect()
        }
        Suite::Haar | Suite::Clifford => {
            haar_or_clifford_instances(cfg.suite == Suite::Clifford, cfg.dim, cfg.count, cfg.seed)?
        }
    };

    // One derived seed per (instance, engine) task keeps runs reproducible
    // regardless of worker scheduling.
    let mut master = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut tasks = Vec::new();
    for (idx, (name, u)) in instances.iter().enumerate() {
        for &engine in &cfg.engines {
            tasks.push((idx, name.clone(), u.clone(), engine, master.random::<u64>()));
        }
    }

    let pool = worker_pool();
    let rows: Vec<(usize, usize, BenchRow)> = pool.install(|| {
        use rayon::prelude::*;
        tasks
            .par_iter()
            .map(|(idx, name, u, engine, task_seed)| {
                let ic = instantiation_config(cfg, *task_seed);
                let row = match synthesize(u, *engine, gateset, &ic) {
                    Ok(res) => BenchRow {
                        suite: cfg.suite.to_string(),
                        dim: cfg.dim,
                        instance: name.clone(),
                        engine: *engine,
                        pulses: res.pulse_count,
                        factors: res.factor_count,
                        distance: res.final_distance,
                        time_s: res.wall_time,
                        status: "ok".into(),
                    },
                    Err(Error::Timeout(_)) => failed_row(cfg, name, *engine, "timeout"),
                    Err(_) => failed_row(cfg, name, *engine, "failed"),
                };
                let engine_idx = cfg.engines.iter().position(|e| e == engine).unwrap();
                (*idx, engine_idx, row)
            })
            .collect()
    });

    let mut rows = rows;
    rows.sort_by_key(|(i, e, _)| (*i, *e));
    let rows: Vec<BenchRow> = rows.into_iter().map(|(_, _, r)| r).collect();

    let aggregates = aggregate(&rows, &cfg.engines);
    Ok(BenchReport {
        suite: cfg.suite.to_string(),
        dim: cfg.dim,
        seed: cfg.seed,
        rows,
        aggregates,
    })
}

fn failed_row(cfg: &BenchConfig, name: &str, engine: Engine, status: &str) -> BenchRow {
    BenchRow {
        suite: cfg.suite.to_string(),
        dim: cfg.dim,
        instance: name.to_string(),
        engine,
        pulses: 0,
        factors: 0,
        distance: f64::NAN,
        time_s: 0.0,
        status: status.into(),
    }
}

fn aggregate(rows: &[BenchRow], engines: &[Engine]) -> Vec<EngineAggregate> {
    engines
        .iter()
        .map(|&engine| {
            let ok: Vec<&BenchRow> = rows
                .iter()
                .filter(|r| r.engine == engine && r.status == "ok")
                .collect();
            let n = ok.len().max(1) as f64;
            EngineAggregate {
                engine,
                mean_pulses: ok.iter().map(|r| r.pulses as f64).sum::<f64>() / n,
                mean_time_s: ok.iter().map(|r| r.time_s).sum::<f64>() / n,
                ok_rows: ok.len(),
            }
        })
        .collect()
}

/// Fixed CSV schema: suite,dim,instance,engine,pulses,factors,distance,time_s,status.
pub fn bench_to_csv(report: &BenchReport) -> String {
    let mut out = String::from("suite,dim,instance,engine,pulses,factors,distance,time_s,status\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.suite,
            r.dim,
            r.instance,
            r.engine,
            r.pulses,
            r.factors,
            fmt_f64(r.distance),
            fmt_f64(r.time_s),
            r.status
        ));
    }
    out
}

/// One randomized-benchmarking row: a (depth, sample) pair decomposed with
/// one engine.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RbRow {
    pub dim: usize,
    pub depth: usize,
    pub sample: usize,
    pub engine: Engine,
    pub cliffords: usize,
    pub total_pulses: u32,
    pub pulses_per_clifford: f64,
    pub distance_to_identity: f64,
    pub time_s: f64,
    pub status: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RbReport {
    pub dim: usize,
    pub engine: Engine,
    pub seed: u64,
    pub rows: Vec<RbRow>,
    pub mean_pulses_per_clifford: f64,
}

/// Generates sequences per (depth, sample), decomposes them with the chosen
/// engine, and reports composed identity distances and pulse totals.
pub fn run_rb(
    dim: usize,
    depths: &[usize],
    samples: usize,
    engine: Engine,
    gateset: &GateSet,
    seed: u64,
    timeout_secs: f64,
) -> Result<RbReport> {
    use crate::generators::{rb_sequence, rb_verify};

    if dim != 3 && dim != 4 {
        return Err(Error::UnsupportedDimension {
            dim,
            reason: "rb runs support d in {3, 4}".into(),
        });
    }
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut specs = Vec::new();
    for &depth in depths {
        for sample in 0..samples {
            specs.push((depth, sample, master.random::<u64>(), master.random::<u64>()));
        }
    }

    let pool = worker_pool();
    let rows: Vec<RbRow> = pool.install(|| {
        use rayon::prelude::*;
        specs
            .par_iter()
            .map(|(depth, sample, seq_seed, task_seed)| {
                let ic = InstantiationConfig {
                    seed: *task_seed,
                    deadline: Some(Duration::from_secs_f64(timeout_secs)),
                    ..Default::default()
                };
                let started = std::time::Instant::now();
                let outcome = rb_sequence(dim, *depth, *seq_seed)
                    .and_then(|seq| rb_verify(&seq, engine, gateset, &ic));
                let time_s = started.elapsed().as_secs_f64();
                match outcome {
                    Ok(report) => RbRow {
                        dim,
                        depth: *depth,
                        sample: *sample,
                        engine,
                        cliffords: *depth,
                        total_pulses: report.total_pulses,
                        pulses_per_clifford: report.total_pulses as f64 / (*depth + 1) as f64,
                        distance_to_identity: report.distance_to_identity,
                        time_s,
                        status: "ok".into(),
                    },
                    Err(e) => RbRow {
                        dim,
                        depth: *depth,
                        sample: *sample,
                        engine,
                        cliffords: *depth,
                        total_pulses: 0,
                        pulses_per_clifford: f64::NAN,
                        distance_to_identity: f64::NAN,
                        time_s,
                        status: if matches!(e, Error::Timeout(_)) {
                            "timeout".into()
                        } else {
                            "failed".into()
                        },
                    },
                }
            })
            .collect()
    });

    let mut rows = rows;
    rows.sort_by_key(|r| (r.depth, r.sample));
    let ok: Vec<&RbRow> = rows.iter().filter(|r| r.status == "ok").collect();
    let mean = if ok.is_empty() {
        f64::NAN
    } else {
        ok.iter().map(|r| r.pulses_per_clifford).sum::<f64>() / ok.len() as f64
    };
    Ok(RbReport {
        dim,
        engine,
        seed,
        rows,
        mean_pulses_per_clifford: mean,
    })
}

/// CSV schema: dim,depth,sample,engine,cliffords,total_pulses,pulses_per_clifford,distance,time_s,status.
pub fn rb_to_csv(report: &RbReport) -> String {
    let mut out = String::from(
        "dim,depth,sample,engine,cliffords,total_pulses,pulses_per_clifford,distance,time_s,status\n",
    );
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.dim,
            r.depth,
            r.sample,
            r.engine,
            r.cliffords,
            r.total_pulses,
            fmt_f64(r.pulses_per_clifford),
            fmt_f64(r.distance_to_identity),
            fmt_f64(r.time_s),
            r.status
        ));
    }
    out
}
