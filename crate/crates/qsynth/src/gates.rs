//! Executable subspace gatesets and circuits over them: templates with pulse
//! costs, circuit evaluation with analytic gradients, and the ZXZXZ
//! conversion of arbitrary 2x2 blocks into virtual-Z + sqrt-X pulse form.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::unitary::{
    apply_block_left, apply_block_right, rx, rz, sqrt_x, Block, UnitaryMatrix,
};

/// A parameterized two-level gate template.
///
/// Pulse costs follow the hardware model: virtual Z rotations are frame
/// updates (cost 0), sqrt-X and Rx are single pulses, a full U(2) block is
/// realized with two pulses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    /// Virtual Z rotation `diag(e^{-iθ/2}, e^{iθ/2})`; 1 parameter, 0 pulses.
    #[serde(rename = "z")]
    VirtualZ,
    /// Fixed sqrt-X pulse; 0 parameters, 1 pulse.
    #[serde(rename = "sx")]
    SqrtX,
    /// Arbitrary-angle X rotation pulse; 1 parameter, 1 pulse.
    #[serde(rename = "rx")]
    RxPulse,
    /// Three-parameter U(2) block U(θ, φ, λ); 3 parameters, 2 pulses.
    #[serde(rename = "u2")]
    FullU2,
}

impl GateKind {
    pub fn param_count(&self) -> usize {
        match self {
            GateKind::VirtualZ => 1,
            GateKind::SqrtX => 0,
            GateKind::RxPulse => 1,
            GateKind::FullU2 => 3,
        }
    }

    pub fn pulse_cost(&self) -> u32 {
        match self {
            GateKind::VirtualZ => 0,
            GateKind::SqrtX => 1,
            GateKind::RxPulse => 1,
            GateKind::FullU2 => 2,
        }
    }

    /// The 2x2 unitary for the given parameter slice.
    pub fn unitary(&self, params: &[f64]) -> Block {
        match self {
            GateKind::VirtualZ => rz(params[0]),
            GateKind::SqrtX => sqrt_x(),
            GateKind::RxPulse => rx(params[0]),
            GateKind::FullU2 => u3(params[0], params[1], params[2]),
        }
    }

    /// Partial derivatives of the 2x2 unitary, one block per parameter.
    pub fn gradient(&self, params: &[f64]) -> Vec<Block> {
        let i = Complex64::new(0.0, 1.0);
        match self {
            GateKind::VirtualZ => {
                let t = params[0];
                let z = Complex64::new(0.0, 0.0);
                vec![Block([
                    [-0.5 * i * Complex64::from_polar(1.0, -t / 2.0), z],
                    [z, 0.5 * i * Complex64::from_polar(1.0, t / 2.0)],
                ])]
            }
            GateKind::SqrtX => vec![],
            GateKind::RxPulse => {
                let t = params[0];
                let dc = Complex64::new(-0.5 * (t / 2.0).sin(), 0.0);
                let ds = Complex64::new(0.0, -0.5 * (t / 2.0).cos());
                vec![Block([[dc, ds], [ds, dc]])]
            }
            GateKind::FullU2 => {
                let (th, ph, lm) = (params[0], params[1], params[2]);
                let (c, s) = ((th / 2.0).cos(), (th / 2.0).sin());
                let eph = Complex64::from_polar(1.0, ph);
                let elm = Complex64::from_polar(1.0, lm);
                let epl = Complex64::from_polar(1.0, ph + lm);
                let z = Complex64::new(0.0, 0.0);
                let d_th = Block([
                    [Complex64::new(-0.5 * s, 0.0), -elm * 0.5 * c],
                    [eph * 0.5 * c, epl * Complex64::new(-0.5 * s, 0.0)],
                ]);
                let d_ph = Block([[z, z], [i * eph * s, i * epl * c]]);
                let d_lm = Block([[z, -i * elm * s], [z, i * epl * c]]);
                vec![d_th, d_ph, d_lm]
            }
        }
    }
}

/// `U(θ,φ,λ)` in the cos/sin half-angle form.
pub fn u3(theta: f64, phi: f64, lambda: f64) -> Block {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = Complex64::new((theta / 2.0).sin(), 0.0);
    Block([
        [c, -Complex64::from_polar(1.0, lambda) * s],
        [
            Complex64::from_polar(1.0, phi) * s,
            Complex64::from_polar(1.0, phi + lambda) * c,
        ],
    ])
}

/// One gate in a circuit: a template bound to a subspace, with its
/// parameters located at `param_offset` in the circuit's flat vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateInstance {
    pub kind: GateKind,
    pub subspace: usize,
    pub param_offset: usize,
}

/// An ordered sequence of subspace gates over a shared parameter vector.
///
/// Gates apply to states left-to-right in list order, so the circuit matrix
/// is `(last gate) ··· (first gate)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    dim: usize,
    gates: Vec<GateInstance>,
    params: Vec<f64>,
}

impl Circuit {
    pub fn new(dim: usize) -> Self {
        Circuit {
            dim,
            gates: Vec::new(),
            params: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gates(&self) -> &[GateInstance] {
        &self.gates
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn set_params(&mut self, params: &[f64]) {
        assert_eq!(params.len(), self.params.len());
        self.params.copy_from_slice(params);
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    /// Appends a gate; `init` must match the template's parameter count.
    pub fn push(&mut self, kind: GateKind, subspace: usize, init: &[f64]) {
        assert_eq!(init.len(), kind.param_count());
        assert!(subspace + 1 < self.dim, "subspace out of range");
        self.gates.push(GateInstance {
            kind,
            subspace,
            param_offset: self.params.len(),
        });
        self.params.extend_from_slice(init);
    }

    /// Removes the most recently appended `n` gates and their parameters.
    pub(crate) fn truncate_gates(&mut self, n_gates: usize) {
        let keep = self.gates.len() - n_gates;
        let param_keep = self
            .gates
            .get(keep)
            .map(|g| g.param_offset)
            .unwrap_or(self.params.len());
        self.gates.truncate(keep);
        self.params.truncate(param_keep);
    }

    pub fn pulse_count(&self) -> u32 {
        self.gates.iter().map(|g| g.kind.pulse_cost()).sum()
    }

    fn block_of(&self, g: &GateInstance) -> Block {
        let p = &self.params[g.param_offset..g.param_offset + g.kind.param_count()];
        g.kind.unitary(p)
    }

    /// Evaluates the circuit to a unitary matrix. Empty circuit -> identity.
    pub fn unitary(&self) -> UnitaryMatrix {
        let mut m = Array2::eye(self.dim);
        for g in &self.gates {
            apply_block_left(&mut m, g.subspace, &self.block_of(g));
        }
        UnitaryMatrix::from_product(m)
    }

    /// Analytic gradient: the k-th output is the elementwise derivative of
    /// the circuit unitary with respect to `params[k]`.
    pub fn gradient(&self) -> Vec<Array2<Complex64>> {
        let m = self.gates.len();
        // Prefix products P_i = g_i ··· g_1 (P_0 = I).
        let mut prefixes: Vec<Array2<Complex64>> = Vec::with_capacity(m + 1);
        prefixes.push(Array2::eye(self.dim));
        for g in &self.gates {
            let mut next = prefixes.last().unwrap().clone();
            apply_block_left(&mut next, g.subspace, &self.block_of(g));
            prefixes.push(next);
        }
        let mut grads: Vec<Array2<Complex64>> = vec![Array2::zeros((0, 0)); self.params.len()];
        // Suffix S_i = g_m ··· g_{i+1}, built downward.
        let mut suffix: Array2<Complex64> = Array2::eye(self.dim);
        for i in (0..m).rev() {
            let g = &self.gates[i];
            let p = &self.params[g.param_offset..g.param_offset + g.kind.param_count()];
            for (k, dblock) in g.kind.gradient(p).iter().enumerate() {
                // suffix · emb'(dblock) · prefix_{i}: the embedded derivative
                // is zero outside the block, so only two columns of suffix
                // and two rows of the prefix contribute.
                let j = g.subspace;
                let pre = &prefixes[i];
                let mut out = Array2::zeros((self.dim, self.dim));
                for a in 0..self.dim {
                    let sa0 = suffix[[a, j]];
                    let sa1 = suffix[[a, j + 1]];
                    let f0 = sa0 * dblock.0[0][0] + sa1 * dblock.0[1][0];
                    let f1 = sa0 * dblock.0[0][1] + sa1 * dblock.0[1][1];
                    for b in 0..self.dim {
                        out[[a, b]] = f0 * pre[[j, b]] + f1 * pre[[j + 1, b]];
                    }
                }
                grads[g.param_offset + k] = out;
            }
            // Fold gate i into the suffix: S_{i-1} = S_i · g_i.
            apply_block_right(&mut suffix, g.subspace, &self.block_of(g));
        }
        grads
    }
}

/// Decomposes a 2x2 unitary into `e^{i·phase}·Rz(θ1)·√X·Rz(θ2)·√X·Rz(θ3)`,
/// always exactly two pulses.
pub fn zxzxz_decompose(b: &Block) -> Result<(f64, f64, f64, f64)> {
    let dev = b.unitarity_deviation();
    if dev > 1e-11 {
        return Err(Error::NotUnitary {
            deviation: dev,
            tol: 1e-11,
        });
    }
    let (theta, phi, lambda, delta) = u3_extract(b);
    // Verified identity: e^{i(φ+λ+π)/2}·Rz(φ)·√X·Rz(π−θ)·√X·Rz(λ+π) = U(θ,φ,λ).
    let t1 = phi;
    let t2 = PI - theta;
    let t3 = lambda + PI;
    let phase = delta + (phi + lambda + PI) / 2.0;
    Ok((t1, t2, t3, phase))
}

/// Writes `B = e^{iδ}·U(θ,φ,λ)`; returns (θ, φ, λ, δ).
pub fn u3_extract(b: &Block) -> (f64, f64, f64, f64) {
    let b00 = b.0[0][0];
    let b01 = b.0[0][1];
    let b10 = b.0[1][0];
    let b11 = b.0[1][1];
    let c = b00.norm();
    let s = b10.norm();
    let theta = 2.0 * s.atan2(c);
    if c >= s {
        let delta = b00.arg();
        if s < 1e-15 {
            // Diagonal block: only φ+λ is determined.
            let phi = b11.arg() - delta;
            (theta, phi, 0.0, delta)
        } else {
            let phi = b10.arg() - delta;
            let lambda = (-b01).arg() - delta;
            (theta, phi, lambda, delta)
        }
    } else {
        // Off-diagonal dominated: gauge δ from B10.
        if c < 1e-15 {
            let phi = b10.arg();
            let lambda = (-b01).arg();
            (theta, phi, lambda, 0.0)
        } else {
            let delta = b00.arg();
            let phi = b10.arg() - delta;
            let lambda = (-b01).arg() - delta;
            (theta, phi, lambda, delta)
        }
    }
}

/// Reconstructs `e^{i·phase}·Rz(θ1)·√X·Rz(θ2)·√X·Rz(θ3)`.
pub fn zxzxz_reconstruct(t1: f64, t2: f64, t3: f64, phase: f64) -> Block {
    let m = rz(t1).mul(&sqrt_x()).mul(&rz(t2)).mul(&sqrt_x()).mul(&rz(t3));
    let p = Complex64::from_polar(1.0, phase);
    Block([
        [m.0[0][0] * p, m.0[0][1] * p],
        [m.0[1][0] * p, m.0[1][1] * p],
    ])
}

/// Which named gate family a gateset was built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateSetName {
    SqrtxVirtualZ,
    FullU2,
    RxVirtualZ,
    Custom,
}

/// The allowed gate templates per subspace, plus the universality bound K:
/// the maximum number of pulses sufficient for an arbitrary U(2) (up to
/// phase) in one subspace. The ZXZXZ identity certifies K = 2 for the
/// default virtual-Z + sqrt-X set.
#[derive(Clone, Debug)]
pub struct GateSet {
    name: GateSetName,
    /// `per_subspace[j]` lists templates allowed on levels (j, j+1).
    /// Uniform builtin sets keep a single entry replicated on demand.
    per_subspace: PerSubspace,
    universality_bound: u32,
}

#[derive(Clone, Debug)]
enum PerSubspace {
    Uniform(Vec<GateKind>),
    Explicit(Vec<Vec<GateKind>>),
}

impl GateSet {
    pub fn name(&self) -> GateSetName {
        self.name
    }

    pub fn universality_bound(&self) -> u32 {
        self.universality_bound
    }

    /// Templates allowed on subspace `j`.
    pub fn templates_for(&self, j: usize) -> &[GateKind] {
        match &self.per_subspace {
            PerSubspace::Uniform(kinds) => kinds,
            PerSubspace::Explicit(lists) => lists.get(j).map(|v| v.as_slice()).unwrap_or(&[]),
        }
    }

    /// The escalation structure appending exactly `k` pulses on subspace
    /// `j`, or None when the subspace's templates cannot spend `k` pulses.
    ///
    /// For virtual-Z sets the k-pulse structure is Z, then (pulse, Z)
    /// repeated k times; for full-U2 only k = 2 exists (one block).
    pub fn step_structure(&self, j: usize, k: u32) -> Option<Vec<GateKind>> {
        let kinds = self.templates_for(j);
        let has = |g: GateKind| kinds.contains(&g);
        if has(GateKind::VirtualZ) && (has(GateKind::SqrtX) || has(GateKind::RxPulse)) {
            let pulse = if has(GateKind::SqrtX) {
                GateKind::SqrtX
            } else {
                GateKind::RxPulse
            };
            let mut out = vec![GateKind::VirtualZ];
            for _ in 0..k {
                out.push(pulse);
                out.push(GateKind::VirtualZ);
            }
            Some(out)
        } else if has(GateKind::FullU2) {
            if k == 2 {
                Some(vec![GateKind::FullU2])
            } else {
                None
            }
        } else {
            None
        }
    }
}

/// Builds one of the named gatesets. All three carry universality bound 2.
pub fn builtin_gateset(name: &str) -> Result<GateSet> {
    match name {
        "sqrtx-virtualz" => Ok(GateSet {
            name: GateSetName::SqrtxVirtualZ,
            per_subspace: PerSubspace::Uniform(vec![GateKind::VirtualZ, GateKind::SqrtX]),
            universality_bound: 2,
        }),
        "full-u2" => Ok(GateSet {
            name: GateSetName::FullU2,
            per_subspace: PerSubspace::Uniform(vec![GateKind::FullU2]),
            universality_bound: 2,
        }),
        "rx-virtualz" => Ok(GateSet {
            name: GateSetName::RxVirtualZ,
            per_subspace: PerSubspace::Uniform(vec![GateKind::VirtualZ, GateKind::RxPulse]),
            universality_bound: 2,
        }),
        other => Err(Error::UnknownGateset(other.to_string())),
    }
}

/// Gateset config JSON: either `{"name": "sqrtx-virtualz"}` or the explicit
/// per-subspace form.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub enum GateSetConfig {
    Named {
        name: String,
    },
    Explicit {
        subspaces: Vec<SubspaceConfig>,
        universality_bound: u32,
    },
}

#[derive(Serialize, Deserialize)]
pub struct SubspaceConfig {
    pub j: usize,
    pub gates: Vec<GateKind>,
}

impl GateSetConfig {
    pub fn build(&self) -> Result<GateSet> {
        match self {
            GateSetConfig::Named { name } => builtin_gateset(name),
            GateSetConfig::Explicit {
                subspaces,
                universality_bound,
            } => {
                if *universality_bound < 1 {
                    return Err(Error::Parse(
                        "universality_bound must be at least 1".into(),
                    ));
                }
                let max_j = subspaces.iter().map(|s| s.j).max().unwrap_or(0);
                let mut lists = vec![Vec::new(); max_j + 1];
                for s in subspaces {
                    lists[s.j] = s.gates.clone();
                }
                Ok(GateSet {
                    name: GateSetName::Custom,
                    per_subspace: PerSubspace::Explicit(lists),
                    universality_bound: *universality_bound,
                })
            }
        }
    }
}

/// Parses a gateset from a JSON string.
pub fn gateset_from_json(json: &str) -> Result<GateSet> {
    let cfg: GateSetConfig =
        serde_json::from_str(json).map_err(|e| Error::Parse(format!("gateset json: {e}")))?;
    cfg.build()
}
