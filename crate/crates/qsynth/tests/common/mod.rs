//! Shared checks used by both the acceptance suite and the standalone
//! property suites.

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use qsynth::elim::{factor_block, rbr_factor, EliminationPlan, SKIP_TOL};
use qsynth::gates::{zxzxz_decompose, zxzxz_reconstruct, Circuit, GateKind};
use qsynth::generators::{is_clifford, random_clifford, weyl_x, weyl_z, DEFAULT_CLIFFORD_WORD_LEN};
use qsynth::unitary::haar_random;

pub fn haar_block(rng: &mut ChaCha8Rng) -> qsynth::unitary::Block {
    let u = haar_random(2, rng);
    qsynth::unitary::Block([
        [u.get(0, 0), u.get(0, 1)],
        [u.get(1, 0), u.get(1, 1)],
    ])
}

/// Analytic circuit gradients against central finite differences
/// (step 1e-6, max deviation 1e-6) on random circuits.
pub fn check_gradient_finite_difference(trials: usize, seed: u64) -> f64 {
    let kinds = [
        GateKind::VirtualZ,
        GateKind::SqrtX,
        GateKind::RxPulse,
        GateKind::FullU2,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for trial in 0..trials {
        let dim = 2 + trial % 3;
        let len = 1 + (trial * 5) % 12;
        let mut c = Circuit::new(dim);
        for _ in 0..len {
            let kind = kinds[rng.random_range(0..kinds.len())];
            let j = rng.random_range(0..dim - 1);
            let params: Vec<f64> = (0..kind.param_count())
                .map(|_| rng.random_range(-PI..PI))
                .collect();
            c.push(kind, j, &params);
        }
        let grads = c.gradient();
        for (k, gk) in grads.iter().enumerate() {
            let fd = finite_difference(&c, k, 1e-6);
            for r in 0..dim {
                for cc in 0..dim {
                    worst = worst.max((gk[[r, cc]] - fd[[r, cc]]).norm());
                }
            }
        }
    }
    assert!(worst < 1e-6, "gradient vs finite difference: {worst}");
    worst
}

fn finite_difference(c: &Circuit, k: usize, step: f64) -> Array2<Complex64> {
    let mut plus = c.clone();
    let mut minus = c.clone();
    let mut p = c.params().to_vec();
    p[k] += step;
    plus.set_params(&p);
    p[k] -= 2.0 * step;
    minus.set_params(&p);
    let up = plus.unitary();
    let um = minus.unitary();
    let mut out = Array2::zeros((c.dim(), c.dim()));
    for r in 0..c.dim() {
        for cc in 0..c.dim() {
            out[[r, cc]] = (up.get(r, cc) - um.get(r, cc)) / Complex64::new(2.0 * step, 0.0);
        }
    }
    out
}

/// Elimination monotonicity (zeroed entries stay below 1e-12) and the
/// row-completion side effect (mirror column < 1e-11, diagonal magnitude
/// within 1e-11 of one) along the row-by-row plan.
pub fn check_elimination_invariants(samples: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for d in 2..=5 {
        for _ in 0..samples {
            let u = haar_random(d, &mut rng);
            let mut v = u.entries().clone();
            let mut done: Vec<(usize, usize)> = Vec::new();
            for &(r, c) in EliminationPlan::row_by_row(d).targets() {
                if v[[r, c]].norm() >= SKIP_TOL {
                    let row: Vec<Complex64> = (0..d).map(|i| v[[r, i]]).collect();
                    let (a, b, g) = rbr_factor(&row, c).unwrap();
                    apply_right(&mut v, c, &factor_block(a, b, g));
                }
                done.push((r, c));
                for &(pr, pc) in &done {
                    assert!(v[[pr, pc]].norm() < 1e-12, "monotonicity at ({pr},{pc})");
                }
                if c + 1 == r {
                    for i in 0..r {
                        assert!(v[[i, r]].norm() < 1e-11, "column mirror at ({i},{r})");
                    }
                    assert!((v[[r, r]].norm() - 1.0).abs() < 1e-11, "diagonal at {r}");
                }
            }
        }
    }
}

fn apply_right(
    a: &mut Array2<Complex64>,
    j: usize,
    b: &qsynth::unitary::Block,
) {
    let n = a.nrows();
    for r in 0..n {
        let x = a[[r, j]];
        let y = a[[r, j + 1]];
        a[[r, j]] = x * b.0[0][0] + y * b.0[1][0];
        a[[r, j + 1]] = x * b.0[0][1] + y * b.0[1][1];
    }
}

/// ZXZXZ reconstruction below 1e-12 over Haar-sampled 2x2 blocks.
pub fn check_zxzxz_reconstruction(samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let b = haar_block(&mut rng);
        let (t1, t2, t3, ph) = zxzxz_decompose(&b).unwrap();
        let rec = zxzxz_reconstruct(t1, t2, t3, ph);
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((rec.0[r][c] - b.0[r][c]).norm());
            }
        }
    }
    assert!(worst < 1e-12, "zxzxz reconstruction: {worst}");
    worst
}

/// Weyl commutation ZX = ωXZ below 1e-13 for d in 2..=6.
pub fn check_weyl_commutation() -> f64 {
    let mut worst: f64 = 0.0;
    for d in 2..=6 {
        let omega = Complex64::from_polar(1.0, 2.0 * PI / d as f64);
        let zx = weyl_z(d).matmul(&weyl_x(d)).unwrap();
        let xz = weyl_x(d).matmul(&weyl_z(d)).unwrap();
        for r in 0..d {
            for c in 0..d {
                worst = worst.max((zx.get(r, c) - omega * xz.get(r, c)).norm());
            }
        }
    }
    assert!(worst < 1e-13, "weyl commutation: {worst}");
    worst
}

/// Every sampled Clifford passes the membership test at 1e-10.
pub fn check_clifford_membership(samples_per_dim: usize, seed: u64) {
    for d in 2..=6 {
        for i in 0..samples_per_dim {
            let u = random_clifford(d, DEFAULT_CLIFFORD_WORD_LEN, seed + i as u64).unwrap();
            assert!(is_clifford(&u, 1e-10), "d={d} sample {i}");
        }
    }
}
