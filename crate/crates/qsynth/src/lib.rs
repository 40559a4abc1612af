//! qsynth: single-qudit unitary synthesis for subspace gatesets.
//!
//! Decomposes arbitrary d-level unitaries (d = 2..6) into executable
//! circuits of two-level subspace gates, minimizing physical pulse count:
//!
//! - [`elim::cbc_synthesize`] — structural column-by-column elimination,
//!   the constant-count analytical baseline;
//! - [`elim::rbr_synthesize`] — adaptive row-by-row elimination with
//!   zero-skipping, favoring the low, less error-prone subspaces;
//! - [`qsweep::sweep`] — guided numerical synthesis that eliminates
//!   elements row-by-row with a per-subspace structure search and full
//!   re-instantiation, for any universal subspace gateset;
//! - [`qsweep::unguided_baseline`] — the all-at-once search ablation.
//!
//! Start with [`synthesize`] for a uniform interface over all engines, or
//! browse `examples/` for one runnable program per capability:
//!
//! ```bash
//! cargo run --release -p qsynth --example synth_engines       # engines side by side
//! cargo run --release -p qsynth --example two_qubit_suite     # pulse-count table
//! cargo run --release -p qsynth --example custom_gateset      # gateset JSON config
//! cargo run --release -p qsynth --example rb_closure          # RB identity closure
//! cargo run --release -p qsynth --example guided_vs_unguided  # search-effort ablation
//! cargo run --release -p qsynth --example export_suite        # unitary JSON files
//! ```
//!
//! The `qsynth` binary exposes the same functionality as `synth`, `bench`,
//! and `rb` subcommands.

pub mod elim;
pub mod error;
pub mod gates;
pub mod generators;
pub mod harness;
pub mod io;
pub mod optimize;
pub mod qsweep;
pub mod result;
pub mod unitary;

pub use error::{Error, Result};
pub use gates::{builtin_gateset, Circuit, GateKind, GateSet};
pub use qsweep::InstantiationConfig;
pub use result::{synthesize, Engine, SynthesisResult};
pub use unitary::{distance, haar_random, UnitaryMatrix};
