//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured numbers. Run with `--nocapture` to see the lines:
//!
//! ```bash
//! cargo test -p qsynth --test acceptance -- --nocapture
//! ```

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

use qsynth::generators::{
    haar_or_clifford_instances, rb_sequence, rb_verify, two_qubit_suite, TWO_QUBIT_GATE_NAMES,
};
use qsynth::unitary::distance;
use qsynth::{builtin_gateset, haar_random, synthesize, Engine, InstantiationConfig};

fn cfg(seed: u64) -> InstantiationConfig {
    InstantiationConfig {
        seed,
        ..Default::default()
    }
}

fn gateset() -> qsynth::GateSet {
    builtin_gateset("sqrtx-virtualz").unwrap()
}

#[test]
fn criterion_01_haar_quality_parity() {
    // 100 Haar unitaries at each d in {2,3,4}: cbc, rbr, and qsweep all
    // yield exactly d(d-1) pulses with final distance below 1e-8.
    let started = Instant::now();
    let gs = gateset();
    for dim in [2usize, 3, 4] {
        let expected = (dim * (dim - 1)) as u32;
        let instances = haar_or_clifford_instances(false, dim, 100, 100 + dim as u64).unwrap();
        for (name, u) in &instances {
            for engine in [Engine::Cbc, Engine::Rbr, Engine::Qsweep] {
                let res = synthesize(u, engine, &gs, &cfg(17)).unwrap();
                assert_eq!(
                    res.pulse_count, expected,
                    "d={dim} {engine} instance {name}: {} pulses",
                    res.pulse_count
                );
                assert!(
                    res.final_distance < 1e-8,
                    "d={dim} {engine} instance {name}: distance {}",
                    res.final_distance
                );
            }
        }
    }
    println!(
        "PASS criterion 1 (haar quality parity): 300 unitaries x 3 engines, \
         pulses = d(d-1) exactly, distances < 1e-8, {:.1}s total",
        started.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_02_cbc_two_qubit_baseline() {
    // CBC yields 12 pulses on all nine suite gates, under 50 ms each.
    let gs = gateset();
    let suite = two_qubit_suite();
    let mut worst_time = 0.0f64;
    for name in TWO_QUBIT_GATE_NAMES {
        let res = synthesize(&suite[name], Engine::Cbc, &gs, &cfg(2)).unwrap();
        assert_eq!(res.pulse_count, 12, "{name}: {} pulses", res.pulse_count);
        assert!(
            res.wall_time < 0.050,
            "{name}: {:.1} ms per instance",
            res.wall_time * 1e3
        );
        worst_time = worst_time.max(res.wall_time);
    }
    println!(
        "PASS criterion 2 (cbc baseline): 12 pulses on all nine gates, \
         worst instance {:.2} ms < 50 ms",
        worst_time * 1e3
    );
}

#[test]
fn criterion_03_qsweep_two_qubit_quality() {
    // QSweep mean pulses over the suite <= 4.5 with every distance < 1e-8.
    let gs = gateset();
    let suite = two_qubit_suite();
    let mut total = 0u32;
    for name in TWO_QUBIT_GATE_NAMES {
        let res = synthesize(&suite[name], Engine::Qsweep, &gs, &cfg(3)).unwrap();
        assert!(
            res.final_distance < 1e-8,
            "{name}: distance {}",
            res.final_distance
        );
        total += res.pulse_count;
    }
    let mean = total as f64 / 9.0;
    assert!(mean <= 4.5, "suite mean {mean} pulses exceeds 4.5");
    let flag = if mean > 4.1 {
        " [flag: mean in (4.1, 4.5], suite-composition deviation]"
    } else {
        ""
    };
    println!(
        "PASS criterion 3 (qsweep two-qubit quality): mean {mean:.2} pulses <= 4.5, \
         all distances < 1e-8{flag}"
    );
}

#[test]
fn criterion_04_rbr_adaptivity() {
    // RBR yields <= 6 pulses on at least six of the nine suite gates and
    // never exceeds 12.
    let gs = gateset();
    let suite = two_qubit_suite();
    let mut at_most_six = 0;
    let mut counts = Vec::new();
    for name in TWO_QUBIT_GATE_NAMES {
        let res = synthesize(&suite[name], Engine::Rbr, &gs, &cfg(4)).unwrap();
        assert!(res.pulse_count <= 12, "{name}: {} pulses", res.pulse_count);
        if res.pulse_count <= 6 {
            at_most_six += 1;
        }
        counts.push((name, res.pulse_count));
    }
    assert!(
        at_most_six >= 6,
        "only {at_most_six} of nine gates at <= 6 pulses: {counts:?}"
    );
    println!(
        "PASS criterion 4 (rbr adaptivity): {at_most_six}/9 gates at <= 6 pulses, \
         max 12 never exceeded"
    );
}

#[test]
fn criterion_05_clifford_dominance() {
    // On 100 sampled Cliffords at each d in {2,3,4}: qsweep <= rbr <= cbc
    // pulses instance-wise, and qsweep's mean is strictly below cbc's at
    // d in {3,4}.
    let gs = gateset();
    for dim in [2usize, 3, 4] {
        let instances = haar_or_clifford_instances(true, dim, 100, 500 + dim as u64).unwrap();
        let mut mean_qsweep = 0.0;
        let mut mean_cbc = 0.0;
        for (name, u) in &instances {
            let qsweep = synthesize(u, Engine::Qsweep, &gs, &cfg(5)).unwrap();
            let rbr = synthesize(u, Engine::Rbr, &gs, &cfg(5)).unwrap();
            let cbc = synthesize(u, Engine::Cbc, &gs, &cfg(5)).unwrap();
            assert!(
                qsweep.pulse_count <= rbr.pulse_count,
                "d={dim} instance {name}: qsweep {} > rbr {}",
                qsweep.pulse_count,
                rbr.pulse_count
            );
            assert!(
                rbr.pulse_count <= cbc.pulse_count,
                "d={dim} instance {name}: rbr {} > cbc {}",
                rbr.pulse_count,
                cbc.pulse_count
            );
            mean_qsweep += qsweep.pulse_count as f64 / 100.0;
            mean_cbc += cbc.pulse_count as f64 / 100.0;
        }
        if dim >= 3 {
            assert!(
                mean_qsweep < mean_cbc,
                "d={dim}: qsweep mean {mean_qsweep} not strictly below cbc mean {mean_cbc}"
            );
        }
        println!(
            "  criterion 5 detail: d={dim} mean pulses qsweep {mean_qsweep:.2} vs cbc {mean_cbc:.2}"
        );
    }
    println!(
        "PASS criterion 5 (clifford dominance): qsweep <= rbr <= cbc instance-wise \
         on 300 Cliffords; strict mean improvement at d in {{3,4}}"
    );
}

#[test]
fn criterion_06_tolerance_contract() {
    // Every qsweep result re-verifies distance <= 1e-8 via the independent
    // metric; analytical engines re-verify <= 1e-10. Checked over a mixed
    // corpus, recomputing distances from the circuits directly.
    let gs = gateset();
    let mut checked = 0;
    let mut corpus = Vec::new();
    for dim in [2usize, 3, 4] {
        corpus.extend(haar_or_clifford_instances(false, dim, 10, 600 + dim as u64).unwrap());
        corpus.extend(haar_or_clifford_instances(true, dim, 10, 700 + dim as u64).unwrap());
    }
    let suite = two_qubit_suite();
    for name in TWO_QUBIT_GATE_NAMES {
        corpus.push((name.to_string(), suite[name].clone()));
    }
    for (name, u) in &corpus {
        let res = synthesize(u, Engine::Qsweep, &gs, &cfg(6)).unwrap();
        let recomputed = distance(&res.circuit.unitary(), u).unwrap();
        assert!(recomputed <= 1e-8, "qsweep {name}: {recomputed}");
        for engine in [Engine::Cbc, Engine::Rbr] {
            let res = synthesize(u, engine, &gs, &cfg(6)).unwrap();
            let recomputed = distance(&res.circuit.unitary(), u).unwrap();
            assert!(recomputed <= 1e-10, "{engine} {name}: {recomputed}");
        }
        checked += 1;
    }
    println!(
        "PASS criterion 6 (tolerance contract): {checked} targets re-verified \
         independently, qsweep <= 1e-8, analytic <= 1e-10"
    );
}

#[test]
fn criterion_07_desk_scale_runtime() {
    // QSweep per-unitary wall time under 10 s at d=4 and 30 s at d=5,
    // across 20 Haar samples each.
    let gs = gateset();
    let mut worst = [0.0f64; 2];
    for (slot, (dim, bound)) in [(4usize, 10.0f64), (5, 30.0)].into_iter().enumerate() {
        let instances = haar_or_clifford_instances(false, dim, 20, 800 + dim as u64).unwrap();
        for (name, u) in &instances {
            let res = synthesize(u, Engine::Qsweep, &gs, &cfg(7)).unwrap();
            assert!(
                res.wall_time < bound,
                "d={dim} instance {name}: {:.2}s exceeds {bound}s",
                res.wall_time
            );
            worst[slot] = worst[slot].max(res.wall_time);
        }
    }
    println!(
        "PASS criterion 7 (desk-scale runtime): worst qsweep wall time \
         {:.3}s at d=4 (<10s), {:.3}s at d=5 (<30s), 20 Haar samples each",
        worst[0], worst[1]
    );
}

#[test]
fn criterion_08_guided_vs_unguided() {
    // On 10 Haar d=3 targets the guided sweep expands strictly fewer
    // structure-search nodes than the unguided baseline; both meet
    // tolerance.
    let gs = gateset();
    let instances = haar_or_clifford_instances(false, 3, 10, 900).unwrap();
    let mut guided_total = 0u64;
    let mut unguided_total = 0u64;
    for (name, u) in &instances {
        let guided = synthesize(u, Engine::Qsweep, &gs, &cfg(8)).unwrap();
        let unguided = synthesize(u, Engine::Unguided, &gs, &cfg(8)).unwrap();
        assert!(guided.final_distance < 1e-8);
        assert!(unguided.final_distance < 1e-8);
        let g = guided.node_expansions.unwrap();
        let ug = unguided.node_expansions.unwrap();
        assert!(
            g < ug,
            "instance {name}: guided {g} expansions not below unguided {ug}"
        );
        guided_total += g;
        unguided_total += ug;
    }
    println!(
        "PASS criterion 8 (guided vs unguided): {guided_total} guided vs \
         {unguided_total} unguided node expansions over 10 qutrit targets"
    );
}

#[test]
fn criterion_09_rb_identity_closure() {
    // For d=3, depths {2,4,8}, 5 samples each: qsweep-decomposed sequences
    // compose to identity within (depth+1)·1e-8.
    let gs = gateset();
    let mut master = ChaCha8Rng::seed_from_u64(909);
    let mut worst_ratio = 0.0f64;
    for depth in [2usize, 4, 8] {
        for _ in 0..5 {
            let seq = rb_sequence(3, depth, master.random()).unwrap();
            let report = rb_verify(&seq, Engine::Qsweep, &gs, &cfg(9)).unwrap();
            let bound = (depth + 1) as f64 * 1e-8;
            assert!(
                report.distance_to_identity < bound,
                "depth {depth}: composed distance {} exceeds {bound}",
                report.distance_to_identity
            );
            worst_ratio = worst_ratio.max(report.distance_to_identity / bound);
        }
    }
    println!(
        "PASS criterion 9 (rb identity closure): 15 sequences, worst composed \
         distance at {:.1}% of the (depth+1)*1e-8 bound",
        worst_ratio * 100.0
    );
}

#[test]
fn criterion_10_property_suites() {
    // Runnable standalone as tests/properties.rs; exercised here at
    // acceptance scale.
    let grad = common::check_gradient_finite_difference(50, 1001);
    common::check_elimination_invariants(10, 1002);
    let zxzxz = common::check_zxzxz_reconstruction(1000, 1003);
    let weyl = common::check_weyl_commutation();
    common::check_clifford_membership(20, 1004);
    println!(
        "PASS criterion 10 (property suites): gradient-vs-fd {grad:.1e} < 1e-6, \
         elimination invariants hold, zxzxz worst {zxzxz:.1e} < 1e-12 over 1000 samples, \
         weyl commutation {weyl:.1e} < 1e-13, all sampled cliffords pass membership"
    );
}

#[test]
fn determinism_identical_seeds_reproduce_results() {
    // Identical seeds and flags produce identical numeric results.
    let gs = gateset();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let u = haar_random(4, &mut rng);
    let a = synthesize(&u, Engine::Qsweep, &gs, &cfg(123)).unwrap();
    let b = synthesize(&u, Engine::Qsweep, &gs, &cfg(123)).unwrap();
    assert_eq!(a.pulse_count, b.pulse_count);
    assert_eq!(a.circuit.params(), b.circuit.params());
    assert_eq!(a.final_distance, b.final_distance);
}
