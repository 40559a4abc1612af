//! Guided numerical synthesis: eliminates target-matrix elements row-by-row
//! with a per-subspace structure search and full-circuit parameter
//! re-instantiation, producing pulse-optimal circuits for any universal
//! subspace gateset.
//!
//! The working product is `V(θ) = U · C(θ)†` where C is the circuit built
//! so far: appending a gate to the circuit right-multiplies V by the gate's
//! inverse, so eliminations act on V exactly like analytical factors while
//! the circuit itself converges to U (up to one recorded global phase).

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use crate::elim::{diag_to_rz_layer, rbr_factor, EliminationPlan};
use crate::error::{Error, Result};
use crate::gates::{Circuit, GateInstance, GateKind, GateSet, GateSetName};
use crate::optimize::{bfgs, MinimizeOptions, MinimizeOutcome};
use crate::unitary::{apply_block_left, apply_block_right, distance, UnitaryMatrix};

/// Numerical instantiation settings.
#[derive(Clone, Debug)]
pub struct InstantiationConfig {
    /// Per-element success threshold; a step is accepted when the sweep
    /// cost drops below `eps_elem² · (number of active terms)`.
    pub eps_elem: f64,
    /// Final distance tolerance, re-verified independently of the
    /// optimizer's own cost report.
    pub eps_final: f64,
    /// Random restarts per structure candidate.
    pub restarts: usize,
    /// Iteration cap per solve.
    pub max_iters: usize,
    /// Max pulses per elimination step; defaults to the gateset's
    /// universality bound.
    pub k_max: Option<u32>,
    /// Seed for restart draws.
    pub seed: u64,
    /// Cooperative wall-clock budget for one synthesis call.
    pub deadline: Option<Duration>,
    /// Structure-search budget for the unguided baseline.
    pub max_expansions: u64,
}

impl Default for InstantiationConfig {
    fn default() -> Self {
        InstantiationConfig {
            eps_elem: 1e-10,
            eps_final: 1e-8,
            restarts: 4,
            max_iters: 200,
            k_max: None,
            seed: 0,
            deadline: None,
            max_expansions: 1 << 14,
        }
    }
}

/// Running record of an elimination in progress: the immutable target, the
/// circuit built so far, and the constraint sets that have been committed.
#[derive(Clone, Debug)]
pub struct EliminationState<'a> {
    target: &'a UnitaryMatrix,
    pub circuit: Circuit,
    zeroed: Vec<(usize, usize)>,
    completed_rows: Vec<usize>,
}

impl<'a> EliminationState<'a> {
    pub fn new(target: &'a UnitaryMatrix) -> Self {
        EliminationState {
            target,
            circuit: Circuit::new(target.dim()),
            zeroed: Vec::new(),
            completed_rows: Vec::new(),
        }
    }

    pub fn target(&self) -> &'a UnitaryMatrix {
        self.target
    }

    pub fn zeroed(&self) -> &[(usize, usize)] {
        &self.zeroed
    }

    pub fn completed_rows(&self) -> &[usize] {
        &self.completed_rows
    }

    /// The working product `U · C†` at the circuit's current parameters.
    pub fn working_matrix(&self) -> Array2<Complex64> {
        working_product(self.target.entries(), &self.circuit, self.circuit.params())
    }

    fn step_terms(&self, candidate: (usize, usize)) -> (Vec<(usize, usize)>, Vec<usize>) {
        let mut zero = self.zeroed.clone();
        zero.push(candidate);
        let mut diag = self.completed_rows.clone();
        if candidate.1 + 1 == candidate.0 {
            diag.push(candidate.0);
        }
        (zero, diag)
    }
}

fn working_product(u: &Array2<Complex64>, circuit: &Circuit, params: &[f64]) -> Array2<Complex64> {
    let mut v = u.clone();
    for g in circuit.gates() {
        let p = &params[g.param_offset..g.param_offset + g.kind.param_count()];
        apply_block_right(&mut v, g.subspace, &g.kind.unitary(p).adjoint());
    }
    v
}

/// The sweep cost at the given parameters: squared magnitudes of every
/// committed zero target plus the candidate, and squared deviations of the
/// diagonal-one terms of every completed row (including the candidate's row
/// when the candidate is its last sub-diagonal element).
pub fn sweep_cost(state: &EliminationState, candidate: (usize, usize), params: &[f64]) -> f64 {
    let (zero, diag) = state.step_terms(candidate);
    let v = working_product(state.target().entries(), &state.circuit, params);
    cost_of(&v, &zero, &diag)
}

/// As [`sweep_cost`], also returning the analytic gradient.
pub fn sweep_cost_gradient(
    state: &EliminationState,
    candidate: (usize, usize),
    params: &[f64],
) -> (f64, Vec<f64>) {
    let (zero, diag) = state.step_terms(candidate);
    let mut eval = CostEval::new(state.target().entries(), &state.circuit, zero, diag);
    let mut grad = vec![0.0; params.len()];
    let cost = eval.eval(params, Some(&mut grad));
    (cost, grad)
}

fn cost_of(v: &Array2<Complex64>, zero: &[(usize, usize)], diag: &[usize]) -> f64 {
    let mut cost = 0.0;
    for &(r, c) in zero {
        cost += v[[r, c]].norm_sqr();
    }
    for &r in diag {
        cost += (v[[r, r]] - Complex64::new(1.0, 0.0)).norm_sqr();
    }
    cost
}

/// Fast evaluator for the sweep cost and its gradient: keeps prefix
/// products of `U·g_1†···g_i†` and contracts each parameter's embedded
/// derivative only at the active term positions.
struct CostEval<'a> {
    u: &'a Array2<Complex64>,
    dim: usize,
    gates: Vec<GateInstance>,
    zero: Vec<(usize, usize)>,
    diag: Vec<usize>,
    prefixes: Vec<Array2<Complex64>>,
}

impl<'a> CostEval<'a> {
    fn new(
        u: &'a Array2<Complex64>,
        circuit: &Circuit,
        zero: Vec<(usize, usize)>,
        diag: Vec<usize>,
    ) -> Self {
        CostEval {
            u,
            dim: u.nrows(),
            gates: circuit.gates().to_vec(),
            zero,
            diag,
            prefixes: Vec::new(),
        }
    }

    fn eval(&mut self, params: &[f64], grad: Option<&mut [f64]>) -> f64 {
        let m = self.gates.len();
        if grad.is_none() {
            // Cost-only probe: a single forward pass.
            let mut v = self.u.clone();
            for g in &self.gates {
                let p = &params[g.param_offset..g.param_offset + g.kind.param_count()];
                apply_block_right(&mut v, g.subspace, &g.kind.unitary(p).adjoint());
            }
            return cost_of(&v, &self.zero, &self.diag);
        }
        let grad = grad.unwrap();

        // Forward pass, keeping every prefix P_i = U·g_1†···g_i†.
        self.prefixes.clear();
        self.prefixes.reserve(m + 1);
        self.prefixes.push(self.u.clone());
        for g in &self.gates {
            let p = &params[g.param_offset..g.param_offset + g.kind.param_count()];
            let mut next = self.prefixes.last().unwrap().clone();
            apply_block_right(&mut next, g.subspace, &g.kind.unitary(p).adjoint());
            self.prefixes.push(next);
        }
        let v = &self.prefixes[m];
        let cost = cost_of(v, &self.zero, &self.diag);

        // Residual conjugates: d|f|²/dθ = 2·Re(conj(f)·df/dθ).
        let zero_res: Vec<Complex64> = self.zero.iter().map(|&(r, c)| v[[r, c]].conj()).collect();
        let diag_res: Vec<Complex64> = self
            .diag
            .iter()
            .map(|&r| (v[[r, r]] - Complex64::new(1.0, 0.0)).conj())
            .collect();

        // Backward pass with the rolling suffix S_i = g_{i+1}†···g_m†.
        let mut suffix: Array2<Complex64> = Array2::eye(self.dim);
        for gi in (0..m).rev() {
            let g = self.gates[gi];
            let j = g.subspace;
            let p = &params[g.param_offset..g.param_offset + g.kind.param_count()];
            let dblocks = g.kind.gradient(p);
            let pre = &self.prefixes[gi];
            for (k, db) in dblocks.iter().enumerate() {
                // Derivative of the inverse block.
                let da = db.adjoint();
                let mut acc = 0.0;
                let mut term = |row: usize, col: usize, res: Complex64| {
                    let a = pre[[row, j]];
                    let b = pre[[row, j + 1]];
                    let pd0 = a * da.0[0][0] + b * da.0[1][0];
                    let pd1 = a * da.0[0][1] + b * da.0[1][1];
                    let dv = pd0 * suffix[[j, col]] + pd1 * suffix[[j + 1, col]];
                    acc += 2.0 * (res * dv).re;
                };
                for (t, &(r, c)) in self.zero.iter().enumerate() {
                    term(r, c, zero_res[t]);
                }
                for (t, &r) in self.diag.iter().enumerate() {
                    term(r, r, diag_res[t]);
                }
                grad[g.param_offset + k] = acc;
            }
            let block = g.kind.unitary(p).adjoint();
            apply_block_left(&mut suffix, j, &block);
        }
        cost
    }
}

/// Outcome of a sweep or unguided search, before timing and verification.
#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub circuit: Circuit,
    pub global_phase: f64,
    /// Elimination steps that consumed at least one pulse.
    pub factor_steps: u32,
    pub node_expansions: u64,
}

/// Appends `structure` on `subspace` and jointly re-instantiates all
/// circuit parameters against the step's terms. On success the state
/// advances (gates kept, parameters updated) and the achieved cost is
/// returned; on failure the appended gates are rolled back.
pub fn instantiate(
    state: &mut EliminationState,
    candidate: (usize, usize),
    structure: &[GateKind],
    subspace: usize,
    cfg: &InstantiationConfig,
    rng: &mut ChaCha8Rng,
    analytic_start: Option<Vec<f64>>,
) -> Option<f64> {
    let (zero, diag) = state.step_terms(candidate);
    let threshold = cfg.eps_elem * cfg.eps_elem * (zero.len() + diag.len()) as f64;

    let n_before = state.circuit.param_count();
    for kind in structure {
        let zeros = vec![0.0; kind.param_count()];
        state.circuit.push(*kind, subspace, &zeros);
    }
    let n = state.circuit.param_count();
    let n_new = n - n_before;

    let mut eval = CostEval::new(state.target().entries(), &state.circuit, zero, diag);
    let opts = MinimizeOptions {
        max_iters: cfg.max_iters,
        target_cost: threshold,
        grad_tol: 1e-13,
    };

    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(cfg.restarts + 2);
    if let Some(analytic) = analytic_start {
        debug_assert_eq!(analytic.len(), n_new);
        let mut x = state.circuit.params().to_vec();
        x[n_before..].copy_from_slice(&analytic);
        starts.push(x);
    }
    // Warm start: keep committed parameters, zero-initialize the new ones.
    starts.push(state.circuit.params().to_vec());
    for _ in 0..cfg.restarts {
        starts.push((0..n).map(|_| rng.random_range(-PI..PI)).collect());
    }

    let mut best: Option<MinimizeOutcome> = None;
    for x0 in starts {
        let out = bfgs(&mut |x, g| eval.eval(x, g), &x0, &opts);
        let better = best.as_ref().map(|b| out.cost < b.cost).unwrap_or(true);
        if better {
            best = Some(out);
        }
        if best.as_ref().unwrap().cost < threshold {
            break;
        }
    }
    let best = best.unwrap();
    if best.cost < threshold {
        state.circuit.set_params(&best.x);
        state.zeroed.push(candidate);
        if candidate.1 + 1 == candidate.0 {
            state.completed_rows.push(candidate.0);
        }
        Some(best.cost)
    } else {
        state.circuit.truncate_gates(structure.len());
        None
    }
}

/// Parameters that exactly reproduce the analytical elimination factor for
/// the current working row, expressed in the gateset's k = 2 structure.
/// Plugging them in attains the step cost floor, so instantiation failure
/// at k = K with a universal gateset indicates an optimizer bug rather than
/// infeasibility.
fn analytic_feasible_params(
    gateset: &GateSet,
    v: &Array2<Complex64>,
    target: (usize, usize),
) -> Option<Vec<f64>> {
    let (r, c) = target;
    let d = v.nrows();
    let row: Vec<Complex64> = (0..d).map(|i| v[[r, i]]).collect();
    let (alpha, beta, gamma) = rbr_factor(&row, c).ok()?;
    match gateset.name() {
        GateSetName::SqrtxVirtualZ => {
            // Structure [Z, SX, Z, SX, Z]: appended block Z(p2)·SX·Z(p1)·SX·Z(p0)
            // equals the inverse of i·E·Rz(-π), which zeroes the target and
            // leaves the remainder real and positive.
            Some(vec![alpha + PI, PI - beta, gamma + PI])
        }
        GateSetName::RxVirtualZ => {
            // Structure [Z, RX, Z, RX, Z]: params [p0, rx1, p1, rx2, p2] with
            // block Z(p2)·Rx(rx2)·Z(p1)·Rx(rx1)·Z(p0) = E†.
            Some(vec![0.0, 0.0, alpha - PI / 2.0, beta, gamma + PI / 2.0])
        }
        GateSetName::FullU2 => {
            // One U(2) block equal to W† with W the SU(2)-gauge factor whose
            // leading entry is real, so the U3 extraction is exact.
            let x = row[c];
            let y = row[c + 1];
            let others: f64 = row
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != c && *i != c + 1)
                .map(|(_, z)| z.norm_sqr())
                .sum();
            let s = (1.0 - others).max(0.0).sqrt();
            if s <= 1e-14 {
                return None;
            }
            let psi = if y.norm() == 0.0 { 0.0 } else { -y.arg() };
            let rot = Complex64::from_polar(1.0, psi);
            let w = crate::unitary::Block([
                [rot * y / s, x.conj() / s],
                [-rot * x / s, y.conj() / s],
            ]);
            let (th, ph, lm, _delta) = crate::gates::u3_extract(&w.adjoint());
            Some(vec![th, ph, lm])
        }
        GateSetName::Custom => None,
    }
}

/// Guided synthesis: follows the row-by-row plan, appending gates only in
/// the subspace of the current target, escalating the pulse budget
/// k = 0, 1, ..., k_max per step, and re-instantiating every circuit
/// parameter jointly at each step. Residual diagonal phases are absorbed
/// into a trailing zero-cost virtual-Z layer and one recorded global phase.
pub fn sweep(
    target: &UnitaryMatrix,
    gateset: &GateSet,
    cfg: &InstantiationConfig,
) -> Result<SweepOutcome> {
    let d = target.dim();
    let k_max = cfg.k_max.unwrap_or(gateset.universality_bound());
    let mut state = EliminationState::new(target);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut expansions: u64 = 0;
    let mut factor_steps = 0u32;
    let started = Instant::now();

    for &(r, c) in EliminationPlan::row_by_row(d).targets() {
        if let Some(limit) = cfg.deadline {
            if started.elapsed() > limit {
                return Err(Error::Timeout(format!(
                    "sweep exceeded {:.1}s at target ({r},{c})",
                    limit.as_secs_f64()
                )));
            }
        }
        // Skip when the candidate (and its row term, if closing) already
        // meet the threshold: zero gates appended, the visit still counts.
        let current_cost = sweep_cost(&state, (r, c), state.circuit.params());
        let (zero, diag) = state.step_terms((r, c));
        let threshold = cfg.eps_elem * cfg.eps_elem * (zero.len() + diag.len()) as f64;
        if current_cost < threshold {
            state.zeroed.push((r, c));
            if c + 1 == r {
                state.completed_rows.push(r);
            }
            continue;
        }

        let mut success = false;
        for k in 0..=k_max {
            let Some(structure) = gateset.step_structure(c, k) else {
                continue;
            };
            expansions += 1;
            let analytic = if k == k_max {
                analytic_feasible_params(gateset, &state.working_matrix(), (r, c))
            } else {
                None
            };
            if instantiate(&mut state, (r, c), &structure, c, cfg, &mut rng, analytic).is_some() {
                if k > 0 {
                    factor_steps += 1;
                }
                success = true;
                break;
            }
        }
        if !success {
            return Err(Error::InstantiationFailure {
                row: r,
                col: c,
                k_max,
                restarts: cfg.restarts,
            });
        }
    }

    debug_assert_eq!(state.zeroed.len(), d * (d - 1) / 2);

    // Align the leftover diagonal phases with free virtual-Z gates so the
    // circuit matches the target up to one global phase.
    let v = state.working_matrix();
    let phases: Vec<f64> = (0..d).map(|i| v[[i, i]].arg()).collect();
    let mut global_phase = 0.0;
    if phases.iter().any(|p| p.abs() >= 1e-14) {
        let (angles, g) = diag_to_rz_layer(&phases);
        for (j, t) in angles.iter().enumerate() {
            if t.abs() >= 1e-14 {
                state.circuit.push(GateKind::VirtualZ, j, &[*t]);
            }
        }
        global_phase = g;
    }

    let final_distance = distance(&state.circuit.unitary(), target)?;
    if final_distance > cfg.eps_final {
        return Err(Error::VerificationFailure {
            distance: final_distance,
            tol: cfg.eps_final,
        });
    }
    Ok(SweepOutcome {
        circuit: state.circuit,
        global_phase,
        factor_steps,
        node_expansions: expansions,
    })
}

/// Unguided ablation baseline: breadth-first search over pulse structures
/// spanning all subspaces at once, instantiating each candidate against the
/// full phase-invariant distance. Restricted to d <= 3; the branching
/// factor grows too fast beyond that for an ablation harness.
pub fn unguided_baseline(
    target: &UnitaryMatrix,
    gateset: &GateSet,
    cfg: &InstantiationConfig,
) -> Result<SweepOutcome> {
    let d = target.dim();
    if d > 3 {
        return Err(Error::UnsupportedDimension {
            dim: d,
            reason: "unguided baseline is an ablation limited to d <= 3".into(),
        });
    }
    let pulse_kind = match gateset.name() {
        GateSetName::SqrtxVirtualZ => GateKind::SqrtX,
        GateSetName::RxVirtualZ => GateKind::RxPulse,
        _ => {
            return Err(Error::UnsupportedGateset(
                "unguided baseline requires a virtual-Z pulse gateset".into(),
            ))
        }
    };
    let subspaces = d - 1;
    let max_pulses = d * (d - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut expansions: u64 = 0;
    let started = Instant::now();

    for p in 0..=max_pulses {
        // All subspace sequences of length p, in lexicographic order.
        let mut seq = vec![0usize; p];
        loop {
            if let Some(limit) = cfg.deadline {
                if started.elapsed() > limit {
                    return Err(Error::Timeout(format!(
                        "unguided search exceeded {:.1}s",
                        limit.as_secs_f64()
                    )));
                }
            }
            if expansions >= cfg.max_expansions {
                return Err(Error::Timeout(format!(
                    "unguided search exceeded {} node expansions",
                    cfg.max_expansions
                )));
            }
            expansions += 1;

            let mut circuit = Circuit::new(d);
            let push_z_layer = |circuit: &mut Circuit| {
                for j in 0..subspaces {
                    circuit.push(GateKind::VirtualZ, j, &[0.0]);
                }
            };
            push_z_layer(&mut circuit);
            for &s in &seq {
                circuit.push(pulse_kind, s, &[0.0][..pulse_kind.param_count()]);
                push_z_layer(&mut circuit);
            }

            if let Some(outcome) = instantiate_full_distance(target, &mut circuit, cfg, &mut rng) {
                let verified = distance(&circuit.unitary(), target)?;
                if verified <= cfg.eps_final {
                    return Ok(SweepOutcome {
                        circuit,
                        global_phase: outcome,
                        factor_steps: 0,
                        node_expansions: expansions,
                    });
                }
            }

            // Advance the sequence odometer.
            let mut idx = p;
            loop {
                if idx == 0 {
                    break;
                }
                idx -= 1;
                seq[idx] += 1;
                if seq[idx] < subspaces {
                    break;
                }
                seq[idx] = 0;
                if idx == 0 {
                    idx = usize::MAX;
                    break;
                }
            }
            if p == 0 || idx == usize::MAX {
                break;
            }
        }
    }
    Err(Error::Timeout(
        "unguided search exhausted all structures without meeting tolerance".into(),
    ))
}

/// Minimizes the full phase-invariant distance over the circuit parameters.
/// Returns the residual global phase on success.
fn instantiate_full_distance(
    target: &UnitaryMatrix,
    circuit: &mut Circuit,
    cfg: &InstantiationConfig,
    rng: &mut ChaCha8Rng,
) -> Option<f64> {
    let d = target.dim();
    let n = circuit.param_count();
    let u = target.entries();
    let gates = circuit.gates().to_vec();

    let mut eval = |params: &[f64], grad: Option<&mut [f64]>| -> f64 {
        // V = U·C†; distance = 1 - |Tr V| / d.
        match grad {
            None => {
                let v = working_product_gates(u, &gates, params);
                let tr: Complex64 = (0..d).map(|i| v[[i, i]]).sum();
                1.0 - tr.norm() / d as f64
            }
            Some(grad) => {
                let m = gates.len();
                let mut prefixes = Vec::with_capacity(m + 1);
                prefixes.push(u.clone());
                for g in &gates {
                    let p = &params[g.param_offset..g.param_offset + g.kind.param_count()];
                    let mut next: Array2<Complex64> = prefixes.last().unwrap().clone();
                    apply_block_right(&mut next, g.subspace, &g.kind.unitary(p).adjoint());
                    prefixes.push(next);
                }
                let v = &prefixes[m];
                let tr: Complex64 = (0..d).map(|i| v[[i, i]]).sum();
                let tnorm = tr.norm();
                let cost = 1.0 - tnorm / d as f64;
                let scale = if tnorm > 1e-30 {
                    tr.conj() / (tnorm * d as f64)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                let mut suffix: Array2<Complex64> = Array2::eye(d);
                for gi in (0..m).rev() {
                    let g = gates[gi];
                    let j = g.subspace;
                    let p = &params[g.param_offset..g.param_offset + g.kind.param_count()];
                    let pre = &prefixes[gi];
                    for (k, db) in g.kind.gradient(p).iter().enumerate() {
                        let da = db.adjoint();
                        // d(Tr V) = Tr(P·emb(da)·S): contract on the block.
                        let mut dtr = Complex64::new(0.0, 0.0);
                        for (bi, brow) in [j, j + 1].into_iter().enumerate() {
                            for (bj, bcol) in [j, j + 1].into_iter().enumerate() {
                                // (S·P)[bcol-ish]: Tr(P D S) = Σ D[u][v]·(S·P)[v,u]
                                let mut sp = Complex64::new(0.0, 0.0);
                                for a in 0..d {
                                    sp += suffix[[bcol, a]] * pre[[a, brow]];
                                }
                                dtr += da.0[bi][bj] * sp;
                            }
                        }
                        grad[g.param_offset + k] = -(scale * dtr).re;
                    }
                    let block = g.kind.unitary(p).adjoint();
                    apply_block_left(&mut suffix, j, &block);
                }
                cost
            }
        }
    };

    let opts = MinimizeOptions {
        max_iters: cfg.max_iters,
        target_cost: cfg.eps_final * 0.5,
        grad_tol: 1e-13,
    };
    let mut starts: Vec<Vec<f64>> = vec![vec![0.0; n]];
    for _ in 0..cfg.restarts {
        starts.push((0..n).map(|_| rng.random_range(-PI..PI)).collect());
    }
    for x0 in starts {
        let out = bfgs(&mut eval, &x0, &opts);
        if out.cost <= cfg.eps_final * 0.5 {
            circuit.set_params(&out.x);
            // Residual global phase from the trace of U·C†.
            let v = working_product_gates(u, &gates, &out.x);
            let tr: Complex64 = (0..d).map(|i| v[[i, i]]).sum();
            return Some(tr.arg());
        }
    }
    None
}

fn working_product_gates(
    u: &Array2<Complex64>,
    gates: &[GateInstance],
    params: &[f64],
) -> Array2<Complex64> {
    let mut v = u.clone();
    for g in gates {
        let p = &params[g.param_offset..g.param_offset + g.kind.param_count()];
        apply_block_right(&mut v, g.subspace, &g.kind.unitary(p).adjoint());
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elim::{factors_to_circuit, rbr_synthesize};
    use crate::gates::builtin_gateset;
    use crate::generators::two_qubit_suite;
    use crate::unitary::{embed_u2, haar_random, sqrt_x};
    use rand::SeedableRng;

    fn cfg() -> InstantiationConfig {
        InstantiationConfig::default()
    }

    #[test]
    fn sweep_cost_on_identity_with_empty_circuit_is_zero() {
        let u = UnitaryMatrix::identity(4);
        let state = EliminationState::new(&u);
        assert_eq!(sweep_cost(&state, (3, 0), &[]), 0.0);
    }

    #[test]
    fn sweep_cost_gradient_matches_finite_differences() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for trial in 0..10 {
            let d = 2 + trial % 3;
            let u = haar_random(d, &mut rng);
            let mut state = EliminationState::new(&u);
            // A few gates on the first target's subspace.
            state.circuit.push(GateKind::VirtualZ, 0, &[0.3]);
            state.circuit.push(GateKind::SqrtX, 0, &[]);
            state.circuit.push(GateKind::VirtualZ, 0, &[-0.8]);
            if d > 2 {
                state.circuit.push(GateKind::FullU2, 1, &[0.4, 0.1, -0.2]);
            }
            let params = state.circuit.params().to_vec();
            let candidate = (d - 1, 0);
            let (_, grad) = sweep_cost_gradient(&state, candidate, &params);
            for k in 0..params.len() {
                let mut pp = params.clone();
                let h = 1e-6;
                pp[k] += h;
                let up = sweep_cost(&state, candidate, &pp);
                pp[k] -= 2.0 * h;
                let dn = sweep_cost(&state, candidate, &pp);
                let fd = (up - dn) / (2.0 * h);
                assert!(
                    (grad[k] - fd).abs() < 1e-6,
                    "trial {trial} param {k}: analytic {} fd {fd}",
                    grad[k]
                );
            }
        }
    }

    #[test]
    fn sweep_cost_gradient_matches_circuit_gradient_assembly() {
        // Independent assembly through the public circuit gradient.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let u = haar_random(3, &mut rng);
        let mut state = EliminationState::new(&u);
        state.circuit.push(GateKind::VirtualZ, 0, &[0.9]);
        state.circuit.push(GateKind::SqrtX, 0, &[]);
        state.circuit.push(GateKind::VirtualZ, 0, &[0.2]);
        let params = state.circuit.params().to_vec();
        let candidate = (2, 0);
        let (_, fast) = sweep_cost_gradient(&state, candidate, &params);

        let grads = state.circuit.gradient();
        let v = state.working_matrix();
        let c = state.circuit.unitary();
        let (zero, diag) = state.step_terms(candidate);
        for k in 0..params.len() {
            // dV = U·(dC)†; with V = U·C† = V·C·(dC)† ... assemble directly:
            // dV = U · d(C†) and d(C†) = (dC)†.
            let dc = &grads[k];
            let mut slow = 0.0;
            for &(r, cc) in &zero {
                // dV[r,cc] = Σ_a U[r,a]·conj(dC[cc,a])
                let mut dv = Complex64::new(0.0, 0.0);
                for a in 0..3 {
                    dv += u.get(r, a) * dc[[cc, a]].conj();
                }
                slow += 2.0 * (v[[r, cc]].conj() * dv).re;
            }
            for &r in &diag {
                let mut dv = Complex64::new(0.0, 0.0);
                for a in 0..3 {
                    dv += u.get(r, a) * dc[[r, a]].conj();
                }
                slow += 2.0 * ((v[[r, r]] - Complex64::new(1.0, 0.0)).conj() * dv).re;
            }
            assert!(
                (fast[k] - slow).abs() < 1e-10,
                "param {k}: fast {} slow {slow}",
                fast[k]
            );
        }
        let _ = c;
    }

    #[test]
    fn analytic_feasible_point_attains_the_cost_floor() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(43);
        for name in ["sqrtx-virtualz", "rx-virtualz", "full-u2"] {
            let gs = builtin_gateset(name).unwrap();
            for d in [3usize, 4] {
                let u = haar_random(d, &mut rng);
                let state = EliminationState::new(&u);
                let target = (d - 1, 0);
                let structure = gs.step_structure(0, 2).unwrap();
                let params = analytic_feasible_params(&gs, &state.working_matrix(), target)
                    .expect("feasible point");
                let mut probe = state.clone();
                for kind in &structure {
                    probe.circuit.push(*kind, 0, &vec![0.0; kind.param_count()]);
                }
                let mut full = probe.circuit.params().to_vec();
                let off = full.len() - params.len();
                full[off..].copy_from_slice(&params);
                let cost = sweep_cost(&probe, target, &full);
                assert!(cost < 1e-20, "{name} d={d}: cost {cost}");
            }
        }
    }

    #[test]
    fn analytic_point_from_rbr_conversion_is_feasible() {
        // The full analytic circuit (factors converted to gateset form)
        // satisfies every zero target at once and leaves a uniform
        // diagonal, i.e. the target times one global phase.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(44);
        let u = haar_random(4, &mut rng);
        let gs = builtin_gateset("sqrtx-virtualz").unwrap();
        let elim = rbr_synthesize(&u).unwrap();
        let (circuit, phase) = factors_to_circuit(&elim, &gs).unwrap();
        let mut state = EliminationState::new(&u);
        state.circuit = circuit;
        let v = state.working_matrix();
        let zero: Vec<(usize, usize)> = EliminationPlan::row_by_row(4)
            .targets()
            .to_vec();
        let cost = cost_of(&v, &zero, &[]);
        assert!(cost < 1e-20, "cost {cost}");
        let expect = Complex64::from_polar(1.0, phase);
        for i in 0..4 {
            assert!((v[[i, i]] - expect).norm() < 1e-11);
        }
    }

    #[test]
    fn sweep_identity_returns_empty_circuit() {
        let u = UnitaryMatrix::identity(4);
        let gs = builtin_gateset("sqrtx-virtualz").unwrap();
        let out = sweep(&u, &gs, &cfg()).unwrap();
        assert_eq!(out.circuit.pulse_count(), 0);
        assert_eq!(out.circuit.gates().len(), 0);
        assert_eq!(distance(&out.circuit.unitary(), &u).unwrap(), 0.0);
    }

    #[test]
    fn sweep_single_sqrt_x_embedding_costs_one_pulse() {
        let u = embed_u2(3, 0, &sqrt_x()).unwrap();
        let gs = builtin_gateset("sqrtx-virtualz").unwrap();
        let out = sweep(&u, &gs, &cfg()).unwrap();
        assert_eq!(out.circuit.pulse_count(), 1, "expected a single pulse");
        assert!(distance(&out.circuit.unitary(), &u).unwrap() < 1e-8);
    }

    #[test]
    fn sweep_haar_d4_uses_twelve_pulses() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(45);
        let gs = builtin_gateset("sqrtx-virtualz").unwrap();
        for _ in 0..3 {
            let u = haar_random(4, &mut rng);
            let out = sweep(&u, &gs, &cfg()).unwrap();
            assert_eq!(out.circuit.pulse_count(), 12);
            assert!(distance(&out.circuit.unitary(), &u).unwrap() < 1e-8);
        }
    }

    #[test]
    fn sweep_cnot_as_ququart_needs_at_most_two_pulses() {
        let cnot = two_qubit_suite().remove("cnot").unwrap();
        let gs = builtin_gateset("sqrtx-virtualz").unwrap();
        let out = sweep(&cnot, &gs, &cfg()).unwrap();
        assert!(out.circuit.pulse_count() <= 2, "pulses {}", out.circuit.pulse_count());
        assert!(distance(&out.circuit.unitary(), &cnot).unwrap() < 1e-8);
    }

    #[test]
    fn sweep_respects_subspace_bound_per_step() {
        // Gates appended for column j act only on subspace (j, j+1); with
        // the trailing alignment layer the circuit still only contains
        // subspaces seen by the plan.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(46);
        let u = haar_random(4, &mut rng);
        let gs = builtin_gateset("sqrtx-virtualz").unwrap();
        let out = sweep(&u, &gs, &cfg()).unwrap();
        for g in out.circuit.gates() {
            assert!(g.subspace < 3);
        }
    }

    #[test]
    fn sweep_works_with_rx_and_u2_gatesets() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(47);
        let u = haar_random(3, &mut rng);
        for name in ["rx-virtualz", "full-u2"] {
            let gs = builtin_gateset(name).unwrap();
            let out = sweep(&u, &gs, &cfg()).unwrap();
            assert!(
                distance(&out.circuit.unitary(), &u).unwrap() < 1e-8,
                "{name}"
            );
        }
    }

    #[test]
    fn sweep_restartless_still_succeeds_via_safety_net() {
        // With zero random restarts the warm start plus the analytic
        // feasible point must carry every step.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(48);
        let gs = builtin_gateset("sqrtx-virtualz").unwrap();
        let mut config = cfg();
        config.restarts = 0;
        for d in 2..=5 {
            let u = haar_random(d, &mut rng);
            let out = sweep(&u, &gs, &config).unwrap();
            assert!(distance(&out.circuit.unitary(), &u).unwrap() < 1e-8, "d={d}");
        }
    }

    #[test]
    fn sweep_is_deterministic_per_seed() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(49);
        let u = haar_random(3, &mut rng);
        let gs = builtin_gateset("sqrtx-virtualz").unwrap();
        let a = sweep(&u, &gs, &cfg()).unwrap();
        let b = sweep(&u, &gs, &cfg()).unwrap();
        assert_eq!(a.circuit.params(), b.circuit.params());
        assert_eq!(a.node_expansions, b.node_expansions);
    }

    #[test]
    fn instantiate_with_empty_structure_succeeds_on_satisfied_step() {
        let u = UnitaryMatrix::identity(3);
        let mut state = EliminationState::new(&u);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(50);
        let got = instantiate(&mut state, (2, 0), &[], 0, &cfg(), &mut rng, None);
        assert!(got.is_some());
        assert_eq!(state.zeroed(), &[(2, 0)]);
    }

    #[test]
    fn unguided_identity_is_zero_pulses() {
        let u = UnitaryMatrix::identity(2);
        let gs = builtin_gateset("sqrtx-virtualz").unwrap();
        let out = unguided_baseline(&u, &gs, &cfg()).unwrap();
        assert_eq!(out.circuit.pulse_count(), 0);
    }

    #[test]
    fn unguided_haar_d2_meets_tolerance_within_two_pulses() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(51);
        let gs = builtin_gateset("sqrtx-virtualz").unwrap();
        let u = haar_random(2, &mut rng);
        let out = unguided_baseline(&u, &gs, &cfg()).unwrap();
        assert!(out.circuit.pulse_count() <= 2);
        assert!(distance(&out.circuit.unitary(), &u).unwrap() < 1e-8);
    }

    #[test]
    fn unguided_rejects_large_dimensions() {
        let u = UnitaryMatrix::identity(4);
        let gs = builtin_gateset("sqrtx-virtualz").unwrap();
        assert!(matches!(
            unguided_baseline(&u, &gs, &cfg()),
            Err(Error::UnsupportedDimension { .. })
        ));
    }

    #[test]
    fn guided_expands_fewer_nodes_than_unguided() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(52);
        let gs = builtin_gateset("sqrtx-virtualz").unwrap();
        let u = haar_random(3, &mut rng);
        let guided = sweep(&u, &gs, &cfg()).unwrap();
        let unguided = unguided_baseline(&u, &gs, &cfg()).unwrap();
        assert!(
            guided.node_expansions < unguided.node_expansions,
            "guided {} vs unguided {}",
            guided.node_expansions,
            unguided.node_expansions
        );
    }
}
