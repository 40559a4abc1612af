//! The shared synthesis result type and the engine dispatcher.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::elim::{cbc_synthesize, factors_to_circuit, rbr_synthesize};
use crate::error::{Error, Result};
use crate::gates::{Circuit, GateSet};
use crate::qsweep::{sweep, unguided_baseline, InstantiationConfig};
use crate::unitary::{distance, UnitaryMatrix};

/// Distance bound re-verified for the exact analytical engines.
pub const ANALYTIC_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Cbc,
    Rbr,
    Qsweep,
    Unguided,
}

impl Engine {
    pub const ALL: [Engine; 4] = [Engine::Cbc, Engine::Rbr, Engine::Qsweep, Engine::Unguided];
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Engine::Cbc => "cbc",
            Engine::Rbr => "rbr",
            Engine::Qsweep => "qsweep",
            Engine::Unguided => "unguided",
        };
        f.write_str(s)
    }
}

impl FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cbc" => Ok(Engine::Cbc),
            "rbr" => Ok(Engine::Rbr),
            "qsweep" => Ok(Engine::Qsweep),
            "unguided" => Ok(Engine::Unguided),
            other => Err(Error::Parse(format!("unknown engine {other:?}"))),
        }
    }
}

/// The output of one synthesis run. `final_distance` is recomputed from the
/// circuit with the independent metric, never taken from engine-internal
/// cost values; `residual_phase` is the global phase with
/// `target = e^{i·residual_phase} · circuit`.
#[derive(Clone, Debug)]
pub struct SynthesisResult {
    pub circuit: Circuit,
    pub engine: Engine,
    pub pulse_count: u32,
    pub factor_count: u32,
    pub final_distance: f64,
    pub residual_phase: f64,
    /// Seconds around the engine call only.
    pub wall_time: f64,
    /// Structure-search instantiations, for the numerical engines.
    pub node_expansions: Option<u64>,
}

/// Runs the chosen engine and re-verifies the result. Numerical engines are
/// held to `cfg.eps_final`; analytical engines to [`ANALYTIC_TOL`]. An
/// out-of-tolerance circuit is reported as an error, never returned.
pub fn synthesize(
    target: &UnitaryMatrix,
    engine: Engine,
    gateset: &GateSet,
    cfg: &InstantiationConfig,
) -> Result<SynthesisResult> {
    let start = Instant::now();
    let (circuit, phase, factor_count, node_expansions) = match engine {
        Engine::Cbc => {
            let elim = cbc_synthesize(target)?;
            let n = elim.factors.len() as u32;
            let (c, p) = factors_to_circuit(&elim, gateset)?;
            (c, p, n, None)
        }
        Engine::Rbr => {
            let elim = rbr_synthesize(target)?;
            let n = elim.factors.len() as u32;
            let (c, p) = factors_to_circuit(&elim, gateset)?;
            (c, p, n, None)
        }
        Engine::Qsweep => {
            let out = sweep(target, gateset, cfg)?;
            (
                out.circuit,
                out.global_phase,
                out.factor_steps,
                Some(out.node_expansions),
            )
        }
        Engine::Unguided => {
            let out = unguided_baseline(target, gateset, cfg)?;
            (
                out.circuit,
                out.global_phase,
                out.factor_steps,
                Some(out.node_expansions),
            )
        }
    };
    let wall_time = start.elapsed().as_secs_f64();

    let final_distance = distance(&circuit.unitary(), target)?;
    let tol = match engine {
        Engine::Cbc | Engine::Rbr => ANALYTIC_TOL,
        Engine::Qsweep | Engine::Unguided => cfg.eps_final,
    };
    if final_distance > tol {
        return Err(Error::VerificationFailure {
            distance: final_distance,
            tol,
        });
    }
    Ok(SynthesisResult {
        pulse_count: circuit.pulse_count(),
        circuit,
        engine,
        factor_count,
        final_distance,
        residual_phase: phase,
        wall_time,
        node_expansions,
    })
}
