//! Export the two-qubit benchmark gates to unitary JSON files and read one
//! back, the same format the `qsynth synth` command consumes.
//!
//! ```bash
//! cargo run --release -p qsynth --example export_suite
//! ```

use qsynth::generators::{two_qubit_suite, TWO_QUBIT_GATE_NAMES};
use qsynth::io::{unitary_from_json, unitary_to_json};
use qsynth::unitary::distance;

fn main() {
    let dir = std::env::temp_dir().join("qsynth-suite");
    std::fs::create_dir_all(&dir).unwrap();
    let suite = two_qubit_suite();

    for name in TWO_QUBIT_GATE_NAMES {
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, unitary_to_json(&suite[name])).unwrap();
        println!("wrote {}", path.display());
    }

    // Round-trip one of them through the parser the CLI uses.
    let text = std::fs::read_to_string(dir.join("cnot.json")).unwrap();
    let cnot = unitary_from_json(&text, 1e-10).unwrap();
    let err = distance(&cnot, &suite["cnot"]).unwrap();
    println!("\ncnot.json round-trip distance: {err:.3e}");
    println!("try: qsynth synth --input {}/cnot.json --method rbr", dir.display());
}
