//! Benchmark generators and validators: Weyl-Heisenberg operators, Clifford
//! membership testing and sampling, the two-qubit-as-ququart suite, and
//! noiseless randomized-benchmarking sequences.

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::qsweep::InstantiationConfig;
use crate::result::{synthesize, Engine, SynthesisResult};
use crate::gates::GateSet;
use crate::unitary::{distance, haar_random, UnitaryMatrix};

/// The shift operator: `X|n> = |n+1 mod d>`.
pub fn weyl_x(d: usize) -> UnitaryMatrix {
    let mut m = Array2::zeros((d, d));
    for n in 0..d {
        m[[(n + 1) % d, n]] = Complex64::new(1.0, 0.0);
    }
    UnitaryMatrix::from_product(m)
}

/// The clock operator: `Z|n> = ω^n |n>` with `ω = e^{2πi/d}`.
pub fn weyl_z(d: usize) -> UnitaryMatrix {
    let mut m = Array2::zeros((d, d));
    for n in 0..d {
        m[[n, n]] = Complex64::from_polar(1.0, 2.0 * PI * n as f64 / d as f64);
    }
    UnitaryMatrix::from_product(m)
}

/// A Weyl-Heisenberg basis element `W_{x,z} = X^x Z^z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub x: usize,
    pub z: usize,
}

/// The matrix of `W_{x,z}`: entry `[(n+x) mod d, n] = ω^{nz}`.
pub fn weyl_element(d: usize, w: WeylElement) -> UnitaryMatrix {
    let mut m = Array2::zeros((d, d));
    for n in 0..d {
        m[[(n + w.x) % d, n]] = Complex64::from_polar(1.0, 2.0 * PI * (n * w.z) as f64 / d as f64);
    }
    UnitaryMatrix::from_product(m)
}

/// The discrete Fourier gate `F_{jk} = ω^{jk} / sqrt(d)`.
pub fn fourier(d: usize) -> UnitaryMatrix {
    let mut m = Array2::zeros((d, d));
    let norm = 1.0 / (d as f64).sqrt();
    for j in 0..d {
        for k in 0..d {
            m[[j, k]] = Complex64::from_polar(norm, 2.0 * PI * (j * k) as f64 / d as f64);
        }
    }
    UnitaryMatrix::from_product(m)
}

/// The generalized phase gate: `diag(ω^{n(n-1)/2})` for odd d and
/// `diag(τ^{n²})` with `τ = e^{iπ(d+1)/d}` for even d (τ² = ω).
pub fn phase_gate(d: usize) -> UnitaryMatrix {
    let mut m = Array2::zeros((d, d));
    for n in 0..d {
        let arg = if d % 2 == 1 {
            2.0 * PI * (n * n.saturating_sub(1) / 2) as f64 / d as f64
        } else {
            PI * (d + 1) as f64 * (n * n) as f64 / d as f64
        };
        m[[n, n]] = Complex64::from_polar(1.0, arg);
    }
    UnitaryMatrix::from_product(m)
}

/// True iff `U·X·U†` and `U·Z·U†` are each a phase times some Weyl element
/// within `tol`. Checking the two generators suffices since they generate
/// the whole basis.
pub fn is_clifford(u: &UnitaryMatrix, tol: f64) -> bool {
    let d = u.dim();
    for gen in [weyl_x(d), weyl_z(d)] {
        let conj = u
            .matmul(&gen)
            .and_then(|m| m.matmul(&u.adjoint()))
            .expect("dims match");
        if !matches_weyl_up_to_phase(&conj, tol) {
            return false;
        }
    }
    true
}

fn matches_weyl_up_to_phase(a: &UnitaryMatrix, tol: f64) -> bool {
    let d = a.dim();
    for x in 0..d {
        for z in 0..d {
            let w = weyl_element(d, WeylElement { x, z });
            // Phase from the entry where W has unit magnitude (its first
            // column's only nonzero is at row x).
            let lambda = a.get(x, 0) * w.get(x, 0).conj();
            if (lambda.norm() - 1.0).abs() > tol {
                continue;
            }
            let mut dev: f64 = 0.0;
            for r in 0..d {
                for c in 0..d {
                    dev = dev.max((a.get(r, c) - lambda * w.get(r, c)).norm());
                }
            }
            if dev <= tol {
                return true;
            }
        }
    }
    false
}

/// One Clifford generator label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CliffordGen {
    Fourier,
    Phase,
    X,
    Z,
}

impl CliffordGen {
    pub fn matrix(&self, d: usize) -> UnitaryMatrix {
        match self {
            CliffordGen::Fourier => fourier(d),
            CliffordGen::Phase => phase_gate(d),
            CliffordGen::X => weyl_x(d),
            CliffordGen::Z => weyl_z(d),
        }
    }
}

const GEN_SET: [CliffordGen; 4] = [
    CliffordGen::Fourier,
    CliffordGen::Phase,
    CliffordGen::X,
    CliffordGen::Z,
];

/// Verifies every generator passes [`is_clifford`] for this dimension.
/// Run before sampling so a bad phase-gate convention fails loudly.
fn check_generators(d: usize) -> Result<()> {
    for gen in GEN_SET {
        if !is_clifford(&gen.matrix(d), 1e-10) {
            return Err(Error::GeneratorSelfCheck {
                dim: d,
                which: format!("{gen:?}"),
            });
        }
    }
    Ok(())
}

/// Product of the generator word, left factor applied last:
/// `word = [g_1, ..., g_L]` gives `g_L ··· g_1`.
pub fn clifford_from_word(d: usize, word: &[CliffordGen]) -> Result<UnitaryMatrix> {
    check_generators(d)?;
    let mut u = UnitaryMatrix::identity(d);
    for gen in word {
        u = gen.matrix(d).matmul(&u)?;
    }
    Ok(u)
}

/// Random Clifford as a length-`word_length` product of generators drawn
/// uniformly from {F, S, X, Z}. Word sampling is deterministic per seed but
/// not uniform over the Clifford group.
pub fn random_clifford(d: usize, word_length: usize, seed: u64) -> Result<UnitaryMatrix> {
    if !(2..=6).contains(&d) {
        return Err(Error::UnsupportedDimension {
            dim: d,
            reason: "clifford sampling supports d in 2..=6".into(),
        });
    }
    if word_length < 1 {
        return Err(Error::Parse("word_length must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let word: Vec<CliffordGen> = (0..word_length)
        .map(|_| GEN_SET[rng.random_range(0..GEN_SET.len())])
        .collect();
    let u = clifford_from_word(d, &word)?;
    debug_assert!(is_clifford(&u, 1e-10));
    Ok(u)
}

/// Default generator-word length used by the benchmark suites.
pub const DEFAULT_CLIFFORD_WORD_LEN: usize = 20;

/// Basis ordering for the two-qubit-as-ququart conversion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum QubitOrder {
    /// `|q1 q0> -> level 2·q1 + q0` (default).
    #[default]
    HighFirst,
    /// The alternative `|q0 q1> -> level 2·q0 + q1`.
    LowFirst,
}

/// Canonical ordering of the nine suite gates for reports.
pub const TWO_QUBIT_GATE_NAMES: [&str; 9] = [
    "cnot",
    "cz",
    "cy",
    "ch",
    "swap",
    "iswap",
    "sqrt_swap",
    "sqrt_iswap",
    "xx_half_pi",
];

/// Nine standard two-qubit gates as single-ququart unitaries under the
/// default `|q1 q0> -> 2·q1 + q0` ordering.
pub fn two_qubit_suite() -> BTreeMap<String, UnitaryMatrix> {
    two_qubit_suite_ordered(QubitOrder::HighFirst)
}

/// As [`two_qubit_suite`] with an explicit basis ordering.
pub fn two_qubit_suite_ordered(order: QubitOrder) -> BTreeMap<String, UnitaryMatrix> {
    let o = Complex64::new(1.0, 0.0);
    let z = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let half_p = Complex64::new(0.5, 0.5);
    let half_m = Complex64::new(0.5, -0.5);
    let i_h = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
    let mi_h = Complex64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2);

    let mut suite = BTreeMap::new();
    let mut put = |name: &str, rows: [[Complex64; 4]; 4]| {
        let mut m = Array2::zeros((4, 4));
        for r in 0..4 {
            for c in 0..4 {
                m[[r, c]] = rows[r][c];
            }
        }
        let m = match order {
            QubitOrder::HighFirst => m,
            QubitOrder::LowFirst => {
                // Relabel |q1 q0> -> |q0 q1>: permute levels 1 <-> 2.
                let perm = [0usize, 2, 1, 3];
                let mut p = Array2::zeros((4, 4));
                for r in 0..4 {
                    for c in 0..4 {
                        p[[perm[r], perm[c]]] = m[[r, c]];
                    }
                }
                p
            }
        };
        suite.insert(name.to_string(), UnitaryMatrix::from_product(m));
    };

    // Control on q1, target on q0 throughout.
    put(
        "cnot",
        [
            [o, z, z, z],
            [z, o, z, z],
            [z, z, z, o],
            [z, z, o, z],
        ],
    );
    put(
        "cz",
        [
            [o, z, z, z],
            [z, o, z, z],
            [z, z, o, z],
            [z, z, z, -o],
        ],
    );
    put(
        "cy",
        [
            [o, z, z, z],
            [z, o, z, z],
            [z, z, z, -i],
            [z, z, i, z],
        ],
    );
    put(
        "ch",
        [
            [o, z, z, z],
            [z, o, z, z],
            [z, z, h, h],
            [z, z, h, -h],
        ],
    );
    put(
        "swap",
        [
            [o, z, z, z],
            [z, z, o, z],
            [z, o, z, z],
            [z, z, z, o],
        ],
    );
    put(
        "iswap",
        [
            [o, z, z, z],
            [z, z, i, z],
            [z, i, z, z],
            [z, z, z, o],
        ],
    );
    put(
        "sqrt_swap",
        [
            [o, z, z, z],
            [z, half_p, half_m, z],
            [z, half_m, half_p, z],
            [z, z, z, o],
        ],
    );
    put(
        "sqrt_iswap",
        [
            [o, z, z, z],
            [z, h, i_h, z],
            [z, i_h, h, z],
            [z, z, z, o],
        ],
    );
    // R_XX(π/2) = exp(-i π/4 · X⊗X).
    put(
        "xx_half_pi",
        [
            [h, z, z, mi_h],
            [z, h, mi_h, z],
            [z, mi_h, h, z],
            [mi_h, z, z, h],
        ],
    );
    suite
}

/// Deterministic named instance list for the haar and clifford bench
/// suites; every engine in one bench run consumes these same matrices.
pub fn haar_or_clifford_instances(
    clifford: bool,
    dim: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<(String, UnitaryMatrix)>> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let s: u64 = master.random();
        let u = if clifford {
            random_clifford(dim, DEFAULT_CLIFFORD_WORD_LEN, s)?
        } else {
            haar_random(dim, &mut ChaCha8Rng::seed_from_u64(s))
        };
        out.push((i.to_string(), u));
    }
    Ok(out)
}

/// A randomized-benchmarking sequence: sampled Cliffords plus the inverse
/// of their product, so the whole circuit composes to the identity.
#[derive(Clone, Debug)]
pub struct RBSequence {
    pub dim: usize,
    pub depth: usize,
    pub cliffords: Vec<UnitaryMatrix>,
    pub inverse: UnitaryMatrix,
}

/// Samples `depth` Cliffords and computes the closing inverse
/// `(C_m ··· C_1)†`.
pub fn rb_sequence(d: usize, depth: usize, seed: u64) -> Result<RBSequence> {
    if d != 3 && d != 4 {
        return Err(Error::UnsupportedDimension {
            dim: d,
            reason: "rb sequences are generated for d in {3, 4}".into(),
        });
    }
    if depth < 1 {
        return Err(Error::Parse("rb depth must be at least 1".into()));
    }
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut cliffords = Vec::with_capacity(depth);
    let mut product = UnitaryMatrix::identity(d);
    for _ in 0..depth {
        let c = random_clifford(d, DEFAULT_CLIFFORD_WORD_LEN, master.random())?;
        product = c.matmul(&product)?;
        cliffords.push(c);
    }
    let inverse = product.adjoint();
    debug_assert!(
        distance(&inverse.matmul(&product).unwrap(), &UnitaryMatrix::identity(d)).unwrap() < 1e-10
    );
    Ok(RBSequence {
        dim: d,
        depth,
        cliffords,
        inverse,
    })
}

/// Result of decomposing every element of an RB sequence and composing the
/// synthesized circuits back together.
#[derive(Clone, Debug)]
pub struct RbVerifyReport {
    pub distance_to_identity: f64,
    pub total_pulses: u32,
    pub results: Vec<SynthesisResult>,
}

/// Decomposes each Clifford and the inverse with the chosen engine, composes
/// the resulting circuit unitaries, and reports the distance to identity and
/// the total pulse count. The composed distance is bounded by
/// `(depth + 1) · tol` when every decomposition meets `tol`.
pub fn rb_verify(
    seq: &RBSequence,
    engine: Engine,
    gateset: &GateSet,
    cfg: &InstantiationConfig,
) -> Result<RbVerifyReport> {
    let mut composed = UnitaryMatrix::identity(seq.dim);
    let mut total_pulses = 0;
    let mut results = Vec::with_capacity(seq.depth + 1);
    for u in seq.cliffords.iter().chain(std::iter::once(&seq.inverse)) {
        let res = synthesize(u, engine, gateset, cfg)?;
        composed = res.circuit.unitary().matmul(&composed)?;
        total_pulses += res.pulse_count;
        results.push(res);
    }
    let distance_to_identity = distance(&composed, &UnitaryMatrix::identity(seq.dim))?;
    Ok(RbVerifyReport {
        distance_to_identity,
        total_pulses,
        results,
    })
}
