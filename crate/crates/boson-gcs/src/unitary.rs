//! Haar-random unitaries, the Hermitian beam-splitting phase matrix and
//! fractional matrix powers.
//!
//! All matrix functions of a unitary `U` run through one eigendecomposition
//! `U = V diag(e^{i theta_j}) V^H` with principal phases `theta_j` in
//! `(-pi, pi]`. Since `U` is normal, the commuting Hermitian pair
//! `cos = (U + U^H)/2`, `sin = (U - U^H)/(2i)` is diagonalized jointly, which
//! keeps the eigenbasis orthonormal even for degenerate spectra (identity,
//! permutations, self-adjoint unitaries).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::eigen::hermitian_eigen;
use crate::error::{Error, Result};
use crate::numeric::{hermiticity_defect, unitarity_defect};

/// Default tolerance for unitarity and Hermiticity defects.
pub const DEFAULT_UNITARITY_TOL: f64 = 1e-10;

/// Tolerance used when grouping nearly equal cosine eigenvalues.
const COS_CLUSTER_TOL: f64 = 1e-8;

/// A dense M x M unitary matrix.
#[derive(Clone, Debug)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: DMatrix<Complex64>,
}

impl UnitaryMatrix {
    /// Validates unitarity within the default tolerance.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        Self::with_tolerance(entries, DEFAULT_UNITARITY_TOL)
    }

    pub fn with_tolerance(entries: DMatrix<Complex64>, tol: f64) -> Result<Self> {
        if entries.nrows() == 0 || entries.nrows() != entries.ncols() {
            return Err(Error::InvalidDimension(format!(
                "expected a square matrix with dim >= 1, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let defect = unitarity_defect(&entries);
        if defect > tol {
            return Err(Error::NotUnitary { defect, tol });
        }
        Ok(Self {
            dim: entries.nrows(),
            entries,
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension("dim = 0".into()));
        }
        Ok(Self {
            dim,
            entries: DMatrix::identity(dim, dim),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.entries
    }

    /// The transpose, which is itself unitary.
    pub fn transposed(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.transpose(),
        }
    }

    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.entries)
    }
}

/// The Hermitian matrix of beam-splitting phases, with eigenvalues on the
/// principal branch `(-pi, pi]`. Satisfies `exp(-i Phi) = U^H`.
#[derive(Clone, Debug)]
pub struct HermitianPhaseMatrix {
    dim: usize,
    entries: DMatrix<Complex64>,
}

impl HermitianPhaseMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.entries)
    }
}

/// Draw an M x M matrix from the Haar measure: fill with independent standard
/// complex Gaussians, QR-factorize, and fix the phase ambiguity with
/// `diag(r_ii / |r_ii|)`. Deterministic for a fixed `(dim, seed)` pair.
pub fn haar_unitary(dim: usize, seed: u64) -> Result<UnitaryMatrix> {
    if dim == 0 {
        return Err(Error::InvalidDimension(
            "haar_unitary requires dim >= 1".into(),
        ));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut data = Vec::with_capacity(dim * dim);
    for _ in 0..dim * dim {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        data.push(Complex64::new(re * scale, im * scale));
    }
    let ginibre = DMatrix::from_row_slice(dim, dim, &data);
    let qr = ginibre.qr();
    let r = qr.r();
    let mut q = qr.q();
    for i in 0..dim {
        let d = r[(i, i)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for k in 0..dim {
            q[(k, i)] *= phase;
        }
    }
    Ok(UnitaryMatrix { dim, entries: q })
}

/// Eigendecomposition `U = V diag(e^{i theta_j}) V^H` of a unitary matrix,
/// reusable for phase matrices and arbitrary fractional powers.
#[derive(Clone, Debug)]
pub struct UnitaryEigen {
    dim: usize,
    vectors: DMatrix<Complex64>,
    phases: Vec<f64>,
}

impl UnitaryEigen {
    pub fn new(u: &UnitaryMatrix) -> Self {
        let (vectors, phases) = eigendecompose_unitary(u.matrix());
        Self {
            dim: u.dim(),
            vectors,
            phases,
        }
    }

    /// Principal eigenphases in `(-pi, pi]`, in ascending-cosine order.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// `U^t = V diag(e^{i t theta_j}) V^H`.
    pub fn power(&self, t: f64) -> DMatrix<Complex64> {
        self.apply(|theta| Complex64::from_polar(1.0, t * theta))
    }

    /// `Phi = V diag(theta_j) V^H`, so that `exp(-i Phi) = U^H`.
    pub fn phase_matrix(&self) -> DMatrix<Complex64> {
        let phi = self.apply(|theta| Complex64::new(theta, 0.0));
        (&phi + phi.adjoint()).map(|z| z * 0.5)
    }

    fn apply(&self, f: impl Fn(f64) -> Complex64) -> DMatrix<Complex64> {
        let mut scaled = self.vectors.clone();
        for (j, &theta) in self.phases.iter().enumerate() {
            let fj = f(theta);
            for i in 0..self.dim {
                scaled[(i, j)] *= fj;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

/// `Phi = i ln U^H` on the principal branch; `exp(-i Phi)` reproduces `U^H`.
pub fn phase_matrix(u: &UnitaryMatrix) -> Result<HermitianPhaseMatrix> {
    let defect = u.unitarity_defect();
    if defect > 1e-8 {
        return Err(Error::NotUnitary { defect, tol: 1e-8 });
    }
    let entries = UnitaryEigen::new(u).phase_matrix();
    Ok(HermitianPhaseMatrix {
        dim: u.dim(),
        entries,
    })
}

/// `U^t` for `t` in `[0, 1]` via the principal eigenphases.
pub fn fractional_power(u: &UnitaryMatrix, t: f64) -> Result<UnitaryMatrix> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange(format!(
            "fractional power exponent t = {t} not in [0, 1]"
        )));
    }
    let entries = UnitaryEigen::new(u).power(t);
    Ok(UnitaryMatrix {
        dim: u.dim(),
        entries,
    })
}

/// Joint diagonalization of the commuting Hermitian pair
/// `(U + U^H)/2` and `(U - U^H)/(2i)`.
fn eigendecompose_unitary(u: &DMatrix<Complex64>) -> (DMatrix<Complex64>, Vec<f64>) {
    let n = u.nrows();
    let adj = u.adjoint();
    let cos_part = (u + &adj).map(|z| z * 0.5);
    let sin_part = (u - &adj).map(|z| z * Complex64::new(0.0, -0.5));

    let eig = hermitian_eigen(&cos_part);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.values[i].partial_cmp(&eig.values[j]).unwrap());

    let mut vectors = DMatrix::<Complex64>::zeros(n, n);
    let mut cos_vals = DVector::<f64>::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.vectors.column(src));
        cos_vals[dst] = eig.values[src];
    }

    // Refine clusters of nearly equal cosines: diagonalizing the compressed
    // sine part separates +theta from -theta without leaving the cluster's
    // invariant subspace.
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && cos_vals[end] - cos_vals[end - 1] <= COS_CLUSTER_TOL {
            end += 1;
        }
        if end - start > 1 {
            let block = vectors.columns(start, end - start).into_owned();
            let compressed = block.adjoint() * &sin_part * &block;
            let herm = (&compressed + compressed.adjoint()).map(|z| z * 0.5);
            let sub = hermitian_eigen(&herm);
            let rotated = block * sub.vectors;
            for (off, col) in rotated.column_iter().enumerate() {
                vectors.set_column(start + off, &col);
            }
        }
        start = end;
    }

    // Rayleigh quotients give the eigenphases; off-diagonal residues are at
    // the level of genuine near-degeneracies only.
    let compressed = vectors.adjoint() * u * &vectors;
    let phases = (0..n)
        .map(|j| {
            let theta = compressed[(j, j)].arg();
            if theta <= -std::f64::consts::PI + 1e-12 {
                std::f64::consts::PI
            } else {
                theta
            }
        })
        .collect();
    (vectors, phases)
}
