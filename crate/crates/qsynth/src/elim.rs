//! Analytical synthesis by Givens-style elimination: the column-by-column
//! baseline and the adaptive row-by-row method with zero-skipping.
//!
//! Row-by-row zeroes strictly-lower-triangular elements one row at a time,
//! bottom row first, moving left to right; each factor acts on the column
//! pair of the target and is applied on the right of the working matrix.
//! Column-by-column mirrors the construction on the transpose: factors act
//! on row pairs and apply on the left, sweeping each column bottom-up. This
//! flip is what moves the interaction load between low and high levels.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::{u3_extract, zxzxz_decompose, Circuit, GateKind, GateSet, GateSetName};
use crate::unitary::{apply_block_left, apply_block_right, ry, rz, Block, UnitaryMatrix};

/// Elements at or below this magnitude are treated as already zero by the
/// adaptive row-by-row engine.
pub const SKIP_TOL: f64 = 1e-12;

/// Remainder norms at or below this are too degenerate to define a factor.
pub const DEGENERACY_TOL: f64 = 1e-14;

/// Band above 1 within which |y/s| is clamped; larger violations indicate
/// non-unitary drift in the caller's matrix.
pub const CLAMP_BAND: f64 = 1e-12;

/// Which side of the target the elimination factors multiply on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorSide {
    /// `U · E_1 ··· E_m = D` (row-by-row).
    Right,
    /// `F_m ··· F_1 · U = D` (column-by-column).
    Left,
}

/// The ordered zeroing targets of an elimination engine.
#[derive(Clone, Debug)]
pub struct EliminationPlan {
    targets: Vec<(usize, usize)>,
}

impl EliminationPlan {
    /// Rows from d-1 down to 1; within row r, columns 0..r-1 left to right.
    /// The factor for column c acts on subspace (c, c+1).
    pub fn row_by_row(dim: usize) -> Self {
        let mut targets = Vec::with_capacity(dim * (dim - 1) / 2);
        for r in (1..dim).rev() {
            for c in 0..r {
                targets.push((r, c));
            }
        }
        EliminationPlan { targets }
    }

    /// Columns 0..d-2 left to right; within column c, rows d-1 down to c+1.
    /// The factor for row r acts on subspace (r-1, r).
    pub fn column_by_column(dim: usize) -> Self {
        let mut targets = Vec::with_capacity(dim * (dim - 1) / 2);
        for c in 0..dim - 1 {
            for r in ((c + 1)..dim).rev() {
                targets.push((r, c));
            }
        }
        EliminationPlan { targets }
    }

    pub fn targets(&self) -> &[(usize, usize)] {
        &self.targets
    }
}

/// One elimination factor: an embedded two-level block with its ZYZ-style
/// angles and the index it zeroed.
#[derive(Clone, Copy, Debug)]
pub struct FactorRecord {
    pub subspace: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub zeroed: (usize, usize),
}

impl FactorRecord {
    /// The embedded 2x2 block for these angles.
    pub fn block(&self) -> Block {
        factor_block(self.alpha, self.beta, self.gamma)
    }
}

/// The block parameterization consistent with the factor angle formulas:
/// `B(α,β,γ) = Rz(-α)·Ry(-β)·Rz(-γ)`. Right-multiplying a row pair (x, y)
/// by it produces (0, s) with s real and nonnegative.
pub fn factor_block(alpha: f64, beta: f64, gamma: f64) -> Block {
    rz(-alpha).mul(&ry(-beta)).mul(&rz(-gamma))
}

/// Principal argument in (-π, π], with phase(0) defined as 0. Negative
/// zero imaginary parts are normalized so negative reals map to +π.
fn phase_or_zero(z: Complex64) -> f64 {
    if z.norm() == 0.0 {
        0.0
    } else {
        let im = if z.im == 0.0 { 0.0 } else { z.im };
        im.atan2(z.re)
    }
}

/// Factor angles zeroing the element at `col` of the active row.
///
/// With x the element at `col`, y the element at `col+1`, and a_i the other
/// row elements: `s = sqrt(1 - Σ|a_i|²)`, `α = phase(y/s) - phase(-x/s)`,
/// `γ = phase(y/s) + phase(-x/s)`, `β = -2·arccos|y/s|`. Applying the
/// embedded block on the right of the target zeroes (row, col).
pub fn rbr_factor(row: &[Complex64], col: usize) -> Result<(f64, f64, f64)> {
    let x = row[col];
    let y = row[col + 1];
    let others: f64 = row
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != col && *i != col + 1)
        .map(|(_, z)| z.norm_sqr())
        .sum();
    let s = (1.0 - others).max(0.0).sqrt();
    if s <= DEGENERACY_TOL {
        return Err(Error::DegenerateRow { s });
    }
    let ratio = y.norm() / s;
    if ratio > 1.0 + CLAMP_BAND {
        return Err(Error::InconsistentRow { ratio });
    }
    let ratio = ratio.min(1.0);
    let ph_y = phase_or_zero(y / s);
    let ph_mx = phase_or_zero(-x / s);
    Ok((ph_y - ph_mx, -2.0 * ratio.acos(), ph_y + ph_mx))
}

/// Mirror of [`rbr_factor`] for column elimination: zeroes the element at
/// `row` of the active column against the element above it. The block is
/// applied on the left, acting on rows (row-1, row).
///
/// Degenerate remainders (both pair elements negligible) yield the identity
/// factor rather than an error: the column engine is structural and emits a
/// factor for every plan target.
pub fn cbc_factor(col: &[Complex64], row: usize) -> Result<(f64, f64, f64)> {
    let x = col[row];
    let y = col[row - 1];
    let others: f64 = col
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != row && *i != row - 1)
        .map(|(_, z)| z.norm_sqr())
        .sum();
    let s = (1.0 - others).max(0.0).sqrt();
    if s <= DEGENERACY_TOL {
        return Ok((0.0, 0.0, 0.0));
    }
    let ratio = y.norm() / s;
    if ratio > 1.0 + CLAMP_BAND {
        return Err(Error::InconsistentRow { ratio });
    }
    let ratio = ratio.min(1.0);
    let ph_y = phase_or_zero(y / s);
    let ph_mx = phase_or_zero(-x / s);
    Ok((-ph_y - ph_mx, -2.0 * ratio.acos(), -ph_y + ph_mx))
}

/// The outcome of an analytical elimination: the emitted factors in
/// application order and the residual diagonal left on the working matrix.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub dim: usize,
    pub side: FactorSide,
    pub factors: Vec<FactorRecord>,
    /// Phases of the diagonal remaining after all factors: for the generic
    /// no-skip case this is a single phase at the plan's terminal level.
    pub residual_phases: Vec<f64>,
}

impl Elimination {
    /// The residual phase at the plan's terminal level (level 0 for
    /// row-by-row, level d-1 for column-by-column). Under zero-skipping
    /// other levels may hold phases too; see `residual_phases`.
    pub fn residual_phase(&self) -> f64 {
        match self.side {
            FactorSide::Right => self.residual_phases[0],
            FactorSide::Left => self.residual_phases[self.dim - 1],
        }
    }

    /// Applies the recorded factors to `u` in application order, returning
    /// the working matrix they leave behind (diagonal on success).
    pub fn apply_factors(&self, u: &UnitaryMatrix) -> Array2<Complex64> {
        let mut v = u.entries().clone();
        for f in &self.factors {
            match self.side {
                FactorSide::Right => apply_block_right(&mut v, f.subspace, &f.block()),
                FactorSide::Left => apply_block_left(&mut v, f.subspace, &f.block()),
            }
        }
        v
    }
}

/// Adaptive row-by-row elimination. Elements already below [`SKIP_TOL`] are
/// skipped with no factor emitted, so the factor count is at most
/// d(d-1)/2 and drops on structured inputs.
pub fn rbr_synthesize(u: &UnitaryMatrix) -> Result<Elimination> {
    let d = u.dim();
    let mut v = u.entries().clone();
    let mut factors = Vec::new();
    for &(r, c) in EliminationPlan::row_by_row(d).targets() {
        if v[[r, c]].norm() < SKIP_TOL {
            continue;
        }
        let row: Vec<Complex64> = (0..d).map(|i| v[[r, i]]).collect();
        let (alpha, beta, gamma) = rbr_factor(&row, c)?;
        apply_block_right(&mut v, c, &factor_block(alpha, beta, gamma));
        factors.push(FactorRecord {
            subspace: c,
            alpha,
            beta,
            gamma,
            zeroed: (r, c),
        });
    }
    let residual_phases = (0..d).map(|i| v[[i, i]].arg()).collect();
    Ok(Elimination {
        dim: d,
        side: FactorSide::Right,
        factors,
        residual_phases,
    })
}

/// Structural column-by-column elimination: one factor per plan target,
/// always d(d-1)/2 factors regardless of input sparsity, matching the
/// non-adaptive baseline's constant pulse counts. Targets whose column pair
/// is degenerate contribute identity factors.
pub fn cbc_synthesize(u: &UnitaryMatrix) -> Result<Elimination> {
    let d = u.dim();
    let mut v = u.entries().clone();
    let mut factors = Vec::new();
    for &(r, c) in EliminationPlan::column_by_column(d).targets() {
        let col: Vec<Complex64> = (0..d).map(|i| v[[i, c]]).collect();
        let (alpha, beta, gamma) = cbc_factor(&col, r)?;
        apply_block_left(&mut v, r - 1, &factor_block(alpha, beta, gamma));
        factors.push(FactorRecord {
            subspace: r - 1,
            alpha,
            beta,
            gamma,
            zeroed: (r, c),
        });
    }
    let residual_phases = (0..d).map(|i| v[[i, i]].arg()).collect();
    Ok(Elimination {
        dim: d,
        side: FactorSide::Left,
        factors,
        residual_phases,
    })
}

/// Solves `diag(e^{iψ_0}, ..., e^{iψ_{d-1}}) = e^{ig} · Π_j emb(Rz(t_j))`
/// exactly: returns the layer angles and the global phase g.
pub(crate) fn diag_to_rz_layer(phases: &[f64]) -> (Vec<f64>, f64) {
    let d = phases.len();
    let g = phases.iter().sum::<f64>() / d as f64;
    let mut t = vec![0.0; d - 1];
    t[0] = -2.0 * (phases[0] - g);
    for i in 1..d - 1 {
        t[i] = t[i - 1] - 2.0 * (phases[i] - g);
    }
    (t, g)
}

/// Converts elimination factors to an executable circuit over the given
/// gateset, absorbing residual diagonal phases into zero-cost virtual-Z
/// gates and one recorded global phase, so that
/// `target = e^{i·phase} · circuit_unitary(result)`.
///
/// Each factor costs exactly two pulses (one full-U2 block or its ZXZXZ
/// expansion); virtual-Z layers cost nothing.
pub fn factors_to_circuit(elim: &Elimination, gateset: &GateSet) -> Result<(Circuit, f64)> {
    match gateset.name() {
        GateSetName::SqrtxVirtualZ | GateSetName::FullU2 => {}
        _ => {
            return Err(Error::UnsupportedGateset(
                "factor conversion supports sqrtx-virtualz and full-u2".into(),
            ))
        }
    }
    let d = elim.dim;
    let mut circuit = Circuit::new(d);
    let mut global_phase = 0.0;

    // Blocks in circuit order (first-applied first), with inverted blocks:
    // Right: U = D·E_m†···E_1†  -> [E_1†, ..., E_m†], diagonal applied last.
    // Left:  U = F_1†···F_m†·D  -> diagonal first, then [F_m†, ..., F_1†].
    let blocks: Vec<(usize, Block)> = match elim.side {
        FactorSide::Right => elim
            .factors
            .iter()
            .map(|f| (f.subspace, f.block().adjoint()))
            .collect(),
        FactorSide::Left => elim
            .factors
            .iter()
            .rev()
            .map(|f| (f.subspace, f.block().adjoint()))
            .collect(),
    };

    if elim.side == FactorSide::Left {
        global_phase += emit_rz_layer(&mut circuit, &elim.residual_phases);
    }

    // Block phases cannot stay on the embedded factors (a phased block is
    // not a phased matrix), so they are pushed leftward through the product
    // as a running diagonal, conjugating each later block on the way.
    let mut running: Vec<Complex64> = vec![Complex64::new(1.0, 0.0); d];
    for (j, raw) in blocks {
        let dj = running[j];
        let dj1 = running[j + 1];
        let conj = Block([
            [dj.conj() * raw.0[0][0] * dj, dj.conj() * raw.0[0][1] * dj1],
            [dj1.conj() * raw.0[1][0] * dj, dj1.conj() * raw.0[1][1] * dj1],
        ]);
        let delta = match gateset.name() {
            GateSetName::SqrtxVirtualZ => {
                let (t1, t2, t3, phase) = zxzxz_decompose(&conj)?;
                circuit.push(GateKind::VirtualZ, j, &[t3]);
                circuit.push(GateKind::SqrtX, j, &[]);
                circuit.push(GateKind::VirtualZ, j, &[t2]);
                circuit.push(GateKind::SqrtX, j, &[]);
                circuit.push(GateKind::VirtualZ, j, &[t1]);
                phase
            }
            GateSetName::FullU2 => {
                let (th, ph, lm, delta) = u3_extract(&conj);
                circuit.push(GateKind::FullU2, j, &[th, ph, lm]);
                delta
            }
            _ => unreachable!(),
        };
        let rot = Complex64::from_polar(1.0, delta);
        running[j] *= rot;
        running[j + 1] *= rot;
    }

    // Whatever diagonal is left lands at the end of the circuit.
    let mut final_phases: Vec<f64> = running.iter().map(|z| z.arg()).collect();
    if elim.side == FactorSide::Right {
        for (i, p) in elim.residual_phases.iter().enumerate() {
            final_phases[i] += p;
        }
    }
    global_phase += emit_rz_layer(&mut circuit, &final_phases);

    Ok((circuit, global_phase))
}

/// Emits virtual-Z gates realizing the diagonal with the given phases (up to
/// the returned global phase); zero-angle gates are omitted.
pub(crate) fn emit_rz_layer(circuit: &mut Circuit, phases: &[f64]) -> f64 {
    if phases.iter().all(|p| p.abs() < 1e-14) {
        return 0.0;
    }
    let (angles, g) = diag_to_rz_layer(phases);
    for (j, t) in angles.iter().enumerate() {
        if t.abs() >= 1e-14 {
            circuit.push(GateKind::VirtualZ, j, &[*t]);
        }
    }
    g
}
