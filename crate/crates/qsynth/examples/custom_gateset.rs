//! Configure gatesets from JSON and synthesize against a non-default pulse
//! family (arbitrary-angle X rotations instead of fixed sqrt-X).
//!
//! ```bash
//! cargo run --release -p qsynth --example custom_gateset
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qsynth::gates::gateset_from_json;
use qsynth::{haar_random, synthesize, Engine, InstantiationConfig};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let target = haar_random(3, &mut rng);
    let cfg = InstantiationConfig::default();

    // Named form.
    let named = gateset_from_json(r#"{"name": "rx-virtualz"}"#).unwrap();
    let res = synthesize(&target, Engine::Qsweep, &named, &cfg).unwrap();
    println!(
        "rx-virtualz (named):   {} pulses, distance {:.2e}",
        res.pulse_count, res.final_distance
    );

    // Explicit per-subspace form: mixed families are allowed.
    let explicit = gateset_from_json(
        r#"{
            "subspaces": [
                {"j": 0, "gates": ["z", "sx"]},
                {"j": 1, "gates": ["z", "rx"]}
            ],
            "universality_bound": 2
        }"#,
    )
    .unwrap();
    let res = synthesize(&target, Engine::Qsweep, &explicit, &cfg).unwrap();
    println!(
        "mixed sx/rx (explicit): {} pulses, distance {:.2e}",
        res.pulse_count, res.final_distance
    );
    for gate in res.circuit.gates().iter().take(6) {
        println!("  {:?} on subspace {}", gate.kind, gate.subspace);
    }
    println!("  ...");
}
