//! Synthesize the nine standard two-qubit gates as single-ququart
//! operations and tabulate pulse counts per engine.
//!
//! ```bash
//! cargo run --release -p qsynth --example two_qubit_suite
//! ```

use qsynth::generators::{two_qubit_suite, TWO_QUBIT_GATE_NAMES};
use qsynth::{builtin_gateset, synthesize, Engine, InstantiationConfig};

fn main() {
    let gateset = builtin_gateset("sqrtx-virtualz").unwrap();
    let cfg = InstantiationConfig::default();
    let suite = two_qubit_suite();

    println!(
        "{:<12} {:>6} {:>6} {:>8}",
        "gate", "cbc", "rbr", "qsweep"
    );
    let mut totals = [0u32; 3];
    for name in TWO_QUBIT_GATE_NAMES {
        let target = &suite[name];
        let mut pulses = [0u32; 3];
        for (i, engine) in [Engine::Cbc, Engine::Rbr, Engine::Qsweep].into_iter().enumerate() {
            let res = synthesize(target, engine, &gateset, &cfg).unwrap();
            pulses[i] = res.pulse_count;
            totals[i] += res.pulse_count;
        }
        println!(
            "{:<12} {:>6} {:>6} {:>8}",
            name, pulses[0], pulses[1], pulses[2]
        );
    }
    println!(
        "{:<12} {:>6.1} {:>6.1} {:>8.1}   (mean)",
        "",
        totals[0] as f64 / 9.0,
        totals[1] as f64 / 9.0,
        totals[2] as f64 / 9.0
    );
}
