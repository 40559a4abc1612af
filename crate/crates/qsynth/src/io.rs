//! File formats: unitary JSON, circuit JSON, and result JSON, plus the CSV
//! float formatting shared by the report writers.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{Circuit, GateKind};
use crate::result::{Engine, SynthesisResult};
use crate::unitary::UnitaryMatrix;

/// Unitary JSON: `{"dim": d, "matrix": [[[re, im], ...], ...]}`, row-major.
#[derive(Serialize, Deserialize)]
pub struct UnitaryJson {
    pub dim: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl UnitaryJson {
    pub fn from_unitary(u: &UnitaryMatrix) -> Self {
        let d = u.dim();
        let matrix = (0..d)
            .map(|r| (0..d).map(|c| [u.get(r, c).re, u.get(r, c).im]).collect())
            .collect();
        UnitaryJson { dim: d, matrix }
    }

    /// Validates shape and unitarity (at `tol`) before constructing.
    pub fn into_unitary(self, tol: f64) -> Result<UnitaryMatrix> {
        if self.matrix.len() != self.dim || self.matrix.iter().any(|r| r.len() != self.dim) {
            return Err(Error::Parse(format!(
                "matrix shape does not match dim {}",
                self.dim
            )));
        }
        let mut m = Array2::zeros((self.dim, self.dim));
        for (r, row) in self.matrix.iter().enumerate() {
            for (c, [re, im]) in row.iter().enumerate() {
                m[[r, c]] = Complex64::new(*re, *im);
            }
        }
        UnitaryMatrix::with_tolerance(m, tol)
    }
}

/// Serializes a unitary to its JSON string form.
pub fn unitary_to_json(u: &UnitaryMatrix) -> String {
    serde_json::to_string_pretty(&UnitaryJson::from_unitary(u)).expect("serializable")
}

/// Parses unitary JSON, validating unitarity at `tol`.
pub fn unitary_from_json(json: &str, tol: f64) -> Result<UnitaryMatrix> {
    let parsed: UnitaryJson =
        serde_json::from_str(json).map_err(|e| Error::Parse(format!("unitary json: {e}")))?;
    parsed.into_unitary(tol)
}

#[derive(Serialize, Deserialize)]
pub struct GateJson {
    pub kind: GateKind,
    pub subspace: usize,
}

/// Circuit JSON: gate list plus the flat parameter vector; parameter
/// offsets are implied by gate order.
#[derive(Serialize, Deserialize)]
pub struct CircuitJson {
    pub dim: usize,
    pub gates: Vec<GateJson>,
    pub params: Vec<f64>,
}

impl CircuitJson {
    pub fn from_circuit(c: &Circuit) -> Self {
        CircuitJson {
            dim: c.dim(),
            gates: c
                .gates()
                .iter()
                .map(|g| GateJson {
                    kind: g.kind,
                    subspace: g.subspace,
                })
                .collect(),
            params: c.params().to_vec(),
        }
    }

    pub fn into_circuit(self) -> Result<Circuit> {
        let expected: usize = self.gates.iter().map(|g| g.kind.param_count()).sum();
        if expected != self.params.len() {
            return Err(Error::InvalidCircuit(format!(
                "expected {expected} params, got {}",
                self.params.len()
            )));
        }
        let mut c = Circuit::new(self.dim);
        let mut offset = 0;
        for g in self.gates {
            if g.subspace + 1 >= self.dim {
                return Err(Error::InvalidCircuit(format!(
                    "subspace {} out of range for dim {}",
                    g.subspace, self.dim
                )));
            }
            let n = g.kind.param_count();
            c.push(g.kind, g.subspace, &self.params[offset..offset + n]);
            offset += n;
        }
        Ok(c)
    }
}

/// Result JSON written by the synth command.
#[derive(Serialize, Deserialize)]
pub struct ResultJson {
    pub engine: Engine,
    pub dim: usize,
    pub pulse_count: u32,
    pub factor_count: u32,
    pub final_distance: f64,
    pub residual_phase: f64,
    pub wall_time: f64,
    pub node_expansions: Option<u64>,
    pub circuit: CircuitJson,
}

impl ResultJson {
    pub fn from_result(r: &SynthesisResult) -> Self {
        ResultJson {
            engine: r.engine,
            dim: r.circuit.dim(),
            pulse_count: r.pulse_count,
            factor_count: r.factor_count,
            final_distance: r.final_distance,
            residual_phase: r.residual_phase,
            wall_time: r.wall_time,
            node_expansions: r.node_expansions,
            circuit: CircuitJson::from_circuit(&r.circuit),
        }
    }
}

/// Formats a double with 17 significant digits so the decimal form
/// round-trips exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
