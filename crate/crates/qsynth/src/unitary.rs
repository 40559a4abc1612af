//! Dense complex matrix foundation: unitary validation, the phase-invariant
//! distance metric, Haar sampling, and two-level subspace embedding.

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Tolerance used to certify unitarity at construction.
pub const UNITARITY_TOL: f64 = 1e-12;

/// A 2x2 complex matrix, the building block of every subspace operation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Block(pub [[Complex64; 2]; 2]);

impl Block {
    pub fn identity() -> Self {
        let o = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        Block([[o, z], [z, o]])
    }

    pub fn adjoint(&self) -> Self {
        Block([
            [self.0[0][0].conj(), self.0[1][0].conj()],
            [self.0[0][1].conj(), self.0[1][1].conj()],
        ])
    }

    pub fn mul(&self, rhs: &Block) -> Self {
        let a = &self.0;
        let b = &rhs.0;
        Block([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Max elementwise deviation of `B†B` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let mut dev: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                let target = if r == c {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                dev = dev.max((p.0[r][c] - target).norm());
            }
        }
        dev
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }
}

/// Z-rotation `diag(e^{-iθ/2}, e^{iθ/2})`.
pub fn rz(theta: f64) -> Block {
    let z = Complex64::new(0.0, 0.0);
    Block([
        [Complex64::from_polar(1.0, -theta / 2.0), z],
        [z, Complex64::from_polar(1.0, theta / 2.0)],
    ])
}

/// Y-rotation with real entries.
pub fn ry(theta: f64) -> Block {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = Complex64::new((theta / 2.0).sin(), 0.0);
    Block([[c, -s], [s, c]])
}

/// X-rotation `exp(-iθX/2)`.
pub fn rx(theta: f64) -> Block {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let ms = Complex64::new(0.0, -(theta / 2.0).sin());
    Block([[c, ms], [ms, c]])
}

/// The square-root-of-X pulse: `√X·√X = X`.
pub fn sqrt_x() -> Block {
    let p = Complex64::new(0.5, 0.5);
    let m = Complex64::new(0.5, -0.5);
    Block([[p, m], [m, p]])
}

/// A d-dimensional unitary matrix, certified at construction.
///
/// Entries are immutable after construction; the type is safe to share
/// across threads.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Array2<Complex64>,
}

/// Returns true iff `max |(M†M - I)_{ij}| <= tol`.
///
/// Errors on non-square input.
pub fn is_unitary(m: &Array2<Complex64>, tol: f64) -> Result<bool> {
    let (rows, cols) = m.dim();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    Ok(unitarity_deviation(m) <= tol)
}

/// Max elementwise deviation of `M†M` from the identity. Assumes square input.
pub fn unitarity_deviation(m: &Array2<Complex64>) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            // (M†M)_{ij} = Σ_k conj(M_{ki}) M_{kj}
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += m[[k, i]].conj() * m[[k, j]];
            }
            let target = if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            dev = dev.max((acc - target).norm());
        }
    }
    dev
}

impl UnitaryMatrix {
    /// Certifies unitarity at [`UNITARITY_TOL`] and dimension >= 2.
    pub fn new(entries: Array2<Complex64>) -> Result<Self> {
        Self::with_tolerance(entries, UNITARITY_TOL)
    }

    /// As [`UnitaryMatrix::new`], with a caller-controlled tolerance.
    pub fn with_tolerance(entries: Array2<Complex64>, tol: f64) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows < 2 {
            return Err(Error::DimensionTooSmall(rows));
        }
        let deviation = unitarity_deviation(&entries);
        if deviation > tol {
            return Err(Error::NotUnitary { deviation, tol });
        }
        Ok(UnitaryMatrix { dim: rows, entries })
    }

    /// Internal constructor for products of certified unitaries.
    pub(crate) fn from_product(entries: Array2<Complex64>) -> Self {
        debug_assert!(unitarity_deviation(&entries) <= 1e-10);
        let dim = entries.nrows();
        UnitaryMatrix { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        UnitaryMatrix {
            dim,
            entries: Array2::eye(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[[row, col]]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Array2::zeros((self.dim, self.dim));
        for r in 0..self.dim {
            for c in 0..self.dim {
                out[[c, r]] = self.entries[[r, c]].conj();
            }
        }
        UnitaryMatrix {
            dim: self.dim,
            entries: out,
        }
    }

    /// Matrix product `self · rhs`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        Ok(UnitaryMatrix {
            dim: self.dim,
            entries: self.entries.dot(&rhs.entries),
        })
    }
}

/// Phase-invariant distance `1 - |Tr(U†V)| / d`.
///
/// Zero iff `U = e^{iφ}V`; symmetric in its arguments.
pub fn distance(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    let d = u.dim();
    let mut tr = Complex64::new(0.0, 0.0);
    for i in 0..d {
        for k in 0..d {
            tr += u.entries[[k, i]].conj() * v.entries[[k, i]];
        }
    }
    // Clamp tiny negative values from rounding when U ≈ e^{iφ}V.
    Ok((1.0 - tr.norm() / d as f64).max(0.0))
}

/// Haar-distributed random unitary via a complex Ginibre matrix and QR with
/// the diagonal phase of R corrected (Mezzadri construction).
pub fn haar_random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> UnitaryMatrix {
    assert!(dim >= 2, "haar_random requires dim >= 2");
    let mut g = Array2::zeros((dim, dim));
    for r in 0..dim {
        for c in 0..dim {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            g[[r, c]] = Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2;
        }
    }
    let (mut q, r) = qr_householder(&g);
    // Fix the gauge: multiply column j by r_jj / |r_jj|.
    for j in 0..dim {
        let rjj = r[[j, j]];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[[i, j]] *= phase;
        }
    }
    UnitaryMatrix::from_product(q)
}

/// Householder QR for small dense complex matrices. Returns (Q, R) with
/// `A = Q·R` and Q unitary.
fn qr_householder(a: &Array2<Complex64>) -> (Array2<Complex64>, Array2<Complex64>) {
    let n = a.nrows();
    let mut r = a.clone();
    let mut q: Array2<Complex64> = Array2::eye(n);
    for k in 0..n {
        // Build the reflector for column k below the diagonal.
        let mut norm_x = 0.0;
        for i in k..n {
            norm_x += r[[i, k]].norm_sqr();
        }
        let norm_x = norm_x.sqrt();
        if norm_x < 1e-300 {
            continue;
        }
        let xk = r[[k, k]];
        let alpha = if xk.norm() > 0.0 {
            -(xk / xk.norm()) * norm_x
        } else {
            Complex64::new(-norm_x, 0.0)
        };
        let mut v: Vec<Complex64> = (k..n).map(|i| r[[i, k]]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 < 1e-300 {
            continue;
        }
        // R <- (I - 2 v v† / |v|²) R, applied to columns k..n.
        for j in k..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in k..n {
                dot += v[i - k].conj() * r[[i, j]];
            }
            let f = 2.0 * dot / vnorm2;
            for i in k..n {
                let vi = v[i - k];
                r[[i, j]] -= f * vi;
            }
        }
        // Q <- Q (I - 2 v v† / |v|²)  (accumulate reflectors on the right).
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for j in k..n {
                dot += q[[i, j]] * v[j - k];
            }
            let f = 2.0 * dot / vnorm2;
            for j in k..n {
                q[[i, j]] -= f * v[j - k].conj();
            }
        }
    }
    (q, r)
}

/// Identity matrix with `B` embedded in rows/columns `(j, j+1)`.
pub fn embed_u2(dim: usize, j: usize, b: &Block) -> Result<UnitaryMatrix> {
    if j + 1 >= dim {
        return Err(Error::SubspaceOutOfRange { j, dim });
    }
    let dev = b.unitarity_deviation();
    if dev > UNITARITY_TOL {
        return Err(Error::NotUnitary {
            deviation: dev,
            tol: UNITARITY_TOL,
        });
    }
    let mut m = Array2::eye(dim);
    m[[j, j]] = b.0[0][0];
    m[[j, j + 1]] = b.0[0][1];
    m[[j + 1, j]] = b.0[1][0];
    m[[j + 1, j + 1]] = b.0[1][1];
    Ok(UnitaryMatrix { dim, entries: m })
}

/// In-place right multiplication `A <- A · emb(j, B)`: mixes columns j, j+1.
pub(crate) fn apply_block_right(a: &mut Array2<Complex64>, j: usize, b: &Block) {
    let n = a.nrows();
    for r in 0..n {
        let x = a[[r, j]];
        let y = a[[r, j + 1]];
        a[[r, j]] = x * b.0[0][0] + y * b.0[1][0];
        a[[r, j + 1]] = x * b.0[0][1] + y * b.0[1][1];
    }
}

/// In-place left multiplication `A <- emb(j, B) · A`: mixes rows j, j+1.
pub(crate) fn apply_block_left(a: &mut Array2<Complex64>, j: usize, b: &Block) {
    let n = a.ncols();
    for c in 0..n {
        let x = a[[j, c]];
        let y = a[[j + 1, c]];
        a[[j, c]] = b.0[0][0] * x + b.0[0][1] * y;
        a[[j + 1, c]] = b.0[1][0] * x + b.0[1][1] * y;
    }
}
