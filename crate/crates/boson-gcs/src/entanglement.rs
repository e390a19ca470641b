//! Bipartite entanglement of a coherent-state ensemble from overlap matrices
//! alone.
//!
//! Splitting the modes at `M_L` block-diagonalizes the reduced density
//! operator by right-side particle number `n`. Every block is coupled to the
//! `N x N` Gram data of the truncated parameter rows, so traces of powers and
//! the full nonzero spectrum come from `N x N` matrices instead of Fock-space
//! dimensions: with `C^(n)[j,k] = A_j^* A_k (O_R[j,k])^n` and
//! `G^(n)[j,k] = (O_L[j,k])^{S-n}`,
//!
//! `Tr rho_L^alpha = sum_n binom(S,n)^alpha Tr[(G^(n) C^(n)T)^alpha]`
//!
//! and the nonzero spectrum of block `n` equals that of
//! `binom(S,n) G^(n) C^(n)T`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::eigen::hermitian_eigen;
use crate::error::{Error, Result};
use crate::fock::occupation_lists;
use crate::gcs::{coefficient_unchecked, GCSEnsemble};
use crate::numeric::{binomial, cpowi};
use crate::unitary::UnitaryMatrix;

/// Cap on the left Fock dimension materialized by [`block_density_matrix`].
pub const MAX_BLOCK_DIM: usize = 5000;
/// Cap on the particle number accepted by the sign-vector purity sum.
pub const MAX_CLOSED_FORM_PARTICLES: u32 = 8;

/// Overlap matrices of the parameter rows restricted to the two sides of a
/// cut: `O_L[j,k] = sum_{i <= M_L} xi_ji^* xi_ki` and `O_R` its complement.
#[derive(Clone, Debug)]
pub struct BipartitionContext {
    split: usize,
    o_left: DMatrix<Complex64>,
    o_right: DMatrix<Complex64>,
}

impl BipartitionContext {
    pub fn split(&self) -> usize {
        self.split
    }

    pub fn o_left(&self) -> &DMatrix<Complex64> {
        &self.o_left
    }

    pub fn o_right(&self) -> &DMatrix<Complex64> {
        &self.o_right
    }

    /// The same cut with left and right roles exchanged; running any trace
    /// through it yields the right-subsystem quantities.
    pub fn swapped(&self) -> Self {
        Self {
            split: self.split,
            o_left: self.o_right.clone(),
            o_right: self.o_left.clone(),
        }
    }
}

/// Gram matrices of the truncated parameter rows on both sides of the cut.
pub fn partition_overlaps(ens: &GCSEnsemble, m_l: usize) -> Result<BipartitionContext> {
    let m = ens.modes();
    if m_l > m {
        return Err(Error::OutOfRange(format!("cut {m_l} beyond {m} modes")));
    }
    let params = ens.params();
    let left = params.columns(0, m_l).into_owned();
    let right = params.columns(m_l, m - m_l).into_owned();
    let o_left = left.conjugate() * left.transpose();
    let o_right = right.conjugate() * right.transpose();
    Ok(BipartitionContext {
        split: m_l,
        o_left,
        o_right,
    })
}

/// `C^(n)` and `G^(n)` for one right-side particle number.
fn block_factors(
    ctx: &BipartitionContext,
    amplitudes: &[Complex64],
    s: u32,
    n: u32,
) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let nn = amplitudes.len();
    let c = DMatrix::from_fn(nn, nn, |j, k| {
        amplitudes[j].conj() * amplitudes[k] * cpowi(ctx.o_right[(j, k)], n)
    });
    let g = DMatrix::from_fn(nn, nn, |j, k| cpowi(ctx.o_left[(j, k)], s - n));
    (c, g)
}

fn check_alpha(alpha: u32) -> Result<()> {
    if alpha < 2 {
        return Err(Error::UnsupportedAlpha(alpha));
    }
    Ok(())
}

fn real_part_checked(value: Complex64, what: &str) -> Result<f64> {
    let scale = value.re.abs().max(1.0);
    if value.im.abs() > 1e-9 * scale {
        return Err(Error::Numerical(format!(
            "{what} has imaginary residue {:.3e}",
            value.im
        )));
    }
    Ok(value.re)
}

/// `Tr rho_L`, which is 1 for a normalized ensemble; exposed for validation.
pub fn reduced_trace(ctx: &BipartitionContext, amplitudes: &[Complex64], s: u32) -> Result<f64> {
    let mut total = Complex64::default();
    for n in 0..=s {
        let (c, g) = block_factors(ctx, amplitudes, s, n);
        total += (g * c.transpose()).trace() * binomial(s, n);
    }
    real_part_checked(total, "reduced trace")
}

/// `Tr rho_L^alpha` for integer `alpha >= 2` via traces of powers of the
/// `N x N` Gram-coupled block matrices.
pub fn renyi_trace(
    ctx: &BipartitionContext,
    amplitudes: &[Complex64],
    s: u32,
    alpha: u32,
) -> Result<f64> {
    check_alpha(alpha)?;
    let mut total = Complex64::default();
    for n in 0..=s {
        let (c, g) = block_factors(ctx, amplitudes, s, n);
        let t = g * c.transpose();
        let mut power = t.clone();
        for _ in 1..alpha {
            power *= &t;
        }
        total += power.trace() * binomial(s, n).powi(alpha as i32);
    }
    real_part_checked(total, "Renyi trace")
}

/// Literal nested multiplicity sums for `alpha` in {2, 3}; the slow form the
/// matrix-trace reorganization is checked against.
pub fn renyi_trace_literal(
    ctx: &BipartitionContext,
    amplitudes: &[Complex64],
    s: u32,
    alpha: u32,
) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha > 3 {
        return Err(Error::UnsupportedAlpha(alpha));
    }
    let nn = amplitudes.len();
    let mut total = Complex64::default();
    for n in 0..=s {
        let (c, g) = block_factors(ctx, amplitudes, s, n);
        let mut acc = Complex64::default();
        if alpha == 2 {
            for k in 0..nn {
                for j in 0..nn {
                    for kp in 0..nn {
                        for jp in 0..nn {
                            acc += c[(j, k)] * c[(jp, kp)] * g[(j, kp)] * g[(jp, k)];
                        }
                    }
                }
            }
        } else {
            for k1 in 0..nn {
                for j1 in 0..nn {
                    for k2 in 0..nn {
                        for j2 in 0..nn {
                            for k3 in 0..nn {
                                for j3 in 0..nn {
                                    acc += c[(j1, k1)]
                                        * c[(j2, k2)]
                                        * c[(j3, k3)]
                                        * g[(j1, k2)]
                                        * g[(j2, k3)]
                                        * g[(j3, k1)];
                                }
                            }
                        }
                    }
                }
            }
        }
        total += acc * binomial(s, n).powi(alpha as i32);
    }
    real_part_checked(total, "literal Renyi trace")
}

/// `S_alpha = ln(Tr rho^alpha) / (1 - alpha)`; trace overshoot up to 1e-9 is
/// clipped to 1.
pub fn renyi_entropy(trace_value: f64, alpha: u32) -> Result<f64> {
    check_alpha(alpha)?;
    if trace_value <= 0.0 {
        return Err(Error::Numerical(format!(
            "Renyi trace {trace_value:.3e} is not positive; the state is numerically degenerate"
        )));
    }
    if trace_value > 1.0 + 1e-9 {
        return Err(Error::Numerical(format!(
            "Renyi trace {trace_value} exceeds 1 beyond tolerance"
        )));
    }
    let clipped = trace_value.min(1.0);
    let entropy = clipped.ln() / (1.0 - alpha as f64);
    // ln(1)/(1 - alpha) is -0.0; keep the sign out of serialized output
    Ok(if entropy == 0.0 { 0.0 } else { entropy })
}

/// Von Neumann entropy `-sum lambda ln lambda` over all block spectra.
///
/// The nonzero spectrum of block `n` is that of `binom(S,n) G^(n) C^(n)T`,
/// computed through the Hermitian similarity `L^H C^T L` with `G = L L^H`,
/// so eigenvalues come out exactly real.
pub fn von_neumann_entropy(
    ctx: &BipartitionContext,
    amplitudes: &[Complex64],
    s: u32,
) -> Result<f64> {
    let mut entropy = 0.0;
    for n in 0..=s {
        let (c, g) = block_factors(ctx, amplitudes, s, n);
        let binom = binomial(s, n);
        if ((&g * c.transpose()).trace() * binom).norm() < 1e-14 {
            continue;
        }
        let gram_eig = hermitian_eigen(&g);
        let mut sqrt_factor = gram_eig.vectors.clone();
        for (j, &lambda) in gram_eig.values.iter().enumerate() {
            let root = lambda.max(0.0).sqrt();
            for i in 0..sqrt_factor.nrows() {
                sqrt_factor[(i, j)] *= root;
            }
        }
        let coupled = sqrt_factor.adjoint() * c.transpose() * &sqrt_factor;
        let herm = (&coupled + coupled.adjoint()).map(|z| z * 0.5);
        let eig = hermitian_eigen(&herm);
        for &lambda in eig.values.iter() {
            let scaled = lambda * binom;
            if scaled < -1e-9 {
                return Err(Error::Numerical(format!(
                    "block {n} eigenvalue {scaled:.3e} below -1e-9"
                )));
            }
            if scaled > 0.0 {
                entropy -= scaled * scaled.ln();
            }
        }
    }
    Ok(entropy)
}

/// Materialize block `n` of the reduced density matrix in the left Fock
/// basis; validation only.
pub fn block_density_matrix(ens: &GCSEnsemble, m_l: usize, n: u32) -> Result<DMatrix<Complex64>> {
    let s = ens.particles();
    if n > s {
        return Err(Error::OutOfRange(format!(
            "block {n} beyond particle count {s}"
        )));
    }
    let ctx = partition_overlaps(ens, m_l)?;
    let predicted = if m_l == 0 {
        if n == s {
            1.0
        } else {
            0.0
        }
    } else {
        binomial(m_l as u32 + (s - n) - 1, s - n)
    };
    if predicted > MAX_BLOCK_DIM as f64 {
        return Err(Error::SizeGuard(format!(
            "left Fock dimension {predicted:.0} exceeds {MAX_BLOCK_DIM}"
        )));
    }
    let left_basis = occupation_lists(s - n, m_l);
    let dim = left_basis.len();
    let nn = ens.multiplicity();
    let params = ens.params();
    // W[p, k] = <left_p | S - n, truncated xi_k>
    let w = DMatrix::from_fn(dim, nn, |p, k| {
        coefficient_unchecked(&left_basis[p], s - n, |i| params[(k, i)])
    });
    let (c, _) = block_factors(&ctx, ens.amplitudes(), s, n);
    let rho = &w * c.transpose() * w.adjoint();
    Ok(rho.map(|z| z * binomial(s, n)))
}

/// Hermitian `S x S` Gram matrices of the truncated unitary columns on each
/// side of the cut; they sum to the identity.
#[derive(Clone, Debug)]
pub struct LambdaMatrices {
    pub left: DMatrix<Complex64>,
    pub right: DMatrix<Complex64>,
}

pub fn lambda_matrices(u: &UnitaryMatrix, s: u32, m_l: usize) -> Result<LambdaMatrices> {
    let m = u.dim();
    if s as usize > m {
        return Err(Error::ParticleMismatch(format!(
            "{s} particles need at least {s} of {m} modes"
        )));
    }
    if m_l > m {
        return Err(Error::OutOfRange(format!("cut {m_l} beyond {m} modes")));
    }
    let truncated = u.matrix().rows(0, s as usize).into_owned();
    let left = truncated.columns(0, m_l).into_owned();
    let right = truncated.columns(m_l, m - m_l).into_owned();
    Ok(LambdaMatrices {
        left: &left * left.adjoint(),
        right: &right * right.adjoint(),
    })
}

/// Purity `Tr rho_L^2` of the evolved single-occupancy state directly from
/// the unitary's entries: a quadruple sign-vector sum over the `2^{S-1}`
/// non-redundant expansion terms with the `Lambda_L/R` Gram matrices.
/// Cost grows as `2^{4(S-1)}`.
pub fn purity_closed_form(u: &UnitaryMatrix, s: u32, m_l: usize) -> Result<f64> {
    if s == 0 {
        return Err(Error::EmptyExpansion);
    }
    if s > MAX_CLOSED_FORM_PARTICLES {
        return Err(Error::SizeGuard(format!(
            "closed-form purity capped at S = {MAX_CLOSED_FORM_PARTICLES}, got {s}"
        )));
    }
    let lambdas = lambda_matrices(u, s, m_l)?;
    let n_terms = 1usize << (s - 1);

    // sign vectors in the same bit order as the reduced expansion
    let signs: Vec<Vec<f64>> = (0..n_terms)
        .map(|k| {
            let mut x = vec![1.0f64; s as usize];
            for (i, xi) in x.iter_mut().enumerate().skip(1) {
                if (k >> (s as usize - 1 - i)) & 1 == 1 {
                    *xi = -1.0;
                }
            }
            x
        })
        .collect();
    let parity: Vec<f64> = (0..n_terms)
        .map(|k| {
            if (k as u32).count_ones().is_multiple_of(2) {
                1.0
            } else {
                -1.0
            }
        })
        .collect();

    let bilinear = |mat: &DMatrix<Complex64>, a: &[f64], b: &[f64]| -> Complex64 {
        let mut acc = Complex64::default();
        for p in 0..a.len() {
            for q in 0..b.len() {
                acc += mat[(p, q)] * (a[p] * b[q]);
            }
        }
        acc
    };
    let p_left = DMatrix::from_fn(n_terms, n_terms, |k, j| {
        bilinear(&lambdas.left, &signs[k], &signs[j])
    });
    let p_right = DMatrix::from_fn(n_terms, n_terms, |k, j| {
        bilinear(&lambdas.right, &signs[k], &signs[j])
    });

    let weights: Vec<f64> = (0..=s)
        .map(|n| {
            let d = crate::numeric::factorial(s - n) * crate::numeric::factorial(n);
            1.0 / (d * d)
        })
        .collect();

    let mut total = Complex64::default();
    for k in 0..n_terms {
        for j in 0..n_terms {
            let sig_kj = parity[k] * parity[j];
            for kp in 0..n_terms {
                for jp in 0..n_terms {
                    let sign = sig_kj * parity[kp] * parity[jp];
                    let a = p_left[(kp, j)] * p_left[(k, jp)];
                    let b = p_right[(k, j)] * p_right[(kp, jp)];
                    let mut inner = Complex64::default();
                    for (n, &wn) in weights.iter().enumerate() {
                        inner += cpowi(a, s - n as u32) * cpowi(b, n as u32) * wn;
                    }
                    total += inner * sign;
                }
            }
        }
    }
    let purity = total * 0.5f64.powi(4 * (s as i32 - 1));
    real_part_checked(purity, "closed-form purity")
}
