//! Compare the guided sweep against the all-at-once structure search on
//! qutrit targets: same tolerances, very different search effort.
//!
//! ```bash
//! cargo run --release -p qsynth --example guided_vs_unguided
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qsynth::{builtin_gateset, haar_random, synthesize, Engine, InstantiationConfig};

fn main() {
    let gateset = builtin_gateset("sqrtx-virtualz").unwrap();
    let cfg = InstantiationConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(99);

    println!(
        "{:<8} {:>16} {:>18} {:>10} {:>10}",
        "target", "guided expands", "unguided expands", "g pulses", "u pulses"
    );
    for i in 0..5 {
        let target = haar_random(3, &mut rng);
        let guided = synthesize(&target, Engine::Qsweep, &gateset, &cfg).unwrap();
        let unguided = synthesize(&target, Engine::Unguided, &gateset, &cfg).unwrap();
        println!(
            "{:<8} {:>16} {:>18} {:>10} {:>10}",
            format!("haar-{i}"),
            guided.node_expansions.unwrap(),
            unguided.node_expansions.unwrap(),
            guided.pulse_count,
            unguided.pulse_count
        );
    }
    println!("\nBounding the search to one subspace per elimination keeps the guided");
    println!("expansion count linear in the number of targets; the all-at-once search");
    println!("pays for every subspace sequence up to the required depth.");
}
