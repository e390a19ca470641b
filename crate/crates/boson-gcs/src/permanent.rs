//! Matrix permanents (permutation-sum, Ryser, Glynn) and the boson-sampling
//! amplitude utilities built on them.
//!
//! All three algorithms accept arbitrary square complex matrices. The
//! permutation sum is the independent oracle (factorial cost, hard-capped);
//! Ryser and Glynn run in `O(n 2^n)` with Gray-code updates and a
//! compensated outer accumulator.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gcs::{kan_expand_single_occupancy, reconstruct_amplitude, FockState};
use crate::numeric::{factorial, CompensatedSum, MAX_PARTICLES};
use crate::unitary::UnitaryMatrix;

/// Largest size accepted by the permutation-sum oracle.
pub const MAX_NAIVE_DIM: usize = 10;
/// Largest size accepted by the `O(n 2^n)` algorithms.
pub const MAX_EXP_DIM: usize = 30;

/// Input/output occupation pair defining a boson-sampling amplitude.
/// Input occupations are 0/1 (collision-free sources); output occupations
/// are arbitrary non-negative integers with the same total.
#[derive(Clone, Debug)]
pub struct SubmatrixSpec {
    input: Vec<u32>,
    output: Vec<u32>,
}

impl SubmatrixSpec {
    pub fn new(input: Vec<u32>, output: Vec<u32>) -> Result<Self> {
        if input.iter().any(|&n| n > 1) {
            return Err(Error::ParticleMismatch(
                "input occupations must be 0 or 1".into(),
            ));
        }
        let s_in: u32 = input.iter().sum();
        let s_out: u32 = output.iter().sum();
        if s_in != s_out {
            return Err(Error::ParticleMismatch(format!(
                "input holds {s_in} particles, output {s_out}"
            )));
        }
        Ok(Self { input, output })
    }

    pub fn particles(&self) -> u32 {
        self.input.iter().sum()
    }

    pub fn input(&self) -> &[u32] {
        &self.input
    }

    pub fn output(&self) -> &[u32] {
        &self.output
    }

    /// True when every output mode holds at most one particle.
    pub fn collision_free(&self) -> bool {
        self.output.iter().all(|&m| m <= 1)
    }
}

/// S x S submatrix with `output_k` copies of row `k` and `input_k` copies of
/// column `k` (rows indexed by output modes, columns by input modes).
pub fn submatrix(u: &DMatrix<Complex64>, spec: &SubmatrixSpec) -> Result<DMatrix<Complex64>> {
    if spec.input.len() != u.ncols() || spec.output.len() != u.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "occupation vectors of lengths {}/{} vs {}x{} matrix",
            spec.input.len(),
            spec.output.len(),
            u.nrows(),
            u.ncols()
        )));
    }
    let s = spec.particles() as usize;
    let rows: Vec<usize> = spec
        .output
        .iter()
        .enumerate()
        .flat_map(|(k, &mk)| std::iter::repeat_n(k, mk as usize))
        .collect();
    let cols: Vec<usize> = spec
        .input
        .iter()
        .enumerate()
        .flat_map(|(k, &nk)| std::iter::repeat_n(k, nk as usize))
        .collect();
    Ok(DMatrix::from_fn(s, s, |a, b| u[(rows[a], cols[b])]))
}

fn check_square(a: &DMatrix<Complex64>, cap: usize, what: &str) -> Result<usize> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "permanent of a {}x{} matrix",
            a.nrows(),
            a.ncols()
        )));
    }
    if n > cap {
        return Err(Error::SizeGuard(format!(
            "{what} capped at n = {cap}, got {n}"
        )));
    }
    Ok(n)
}

/// Permutation-sum definition; the oracle for the fast algorithms.
pub fn permanent_naive(a: &DMatrix<Complex64>) -> Result<Complex64> {
    let n = check_square(a, MAX_NAIVE_DIM, "permutation sum")?;
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    // Heap's algorithm over column permutations
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    let product = |p: &[usize]| -> Complex64 { (0..n).map(|i| a[(i, p[i])]).product() };
    let mut acc = product(&perm);
    let mut i = 0;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            acc += product(&perm);
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Ok(acc)
}

/// Ryser's inclusion-exclusion over column subsets, Gray-code order.
pub fn permanent_ryser(a: &DMatrix<Complex64>) -> Result<Complex64> {
    let n = check_square(a, MAX_EXP_DIM, "Ryser")?;
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut row_sums = vec![Complex64::default(); n];
    let mut acc = CompensatedSum::new();
    let mut subset_size = 0u32;
    let total = 1u64 << n;
    for k in 1..total {
        let gray = k ^ (k >> 1);
        let prev_gray = (k - 1) ^ ((k - 1) >> 1);
        let flipped = (gray ^ prev_gray).trailing_zeros() as usize;
        if gray >> flipped & 1 == 1 {
            subset_size += 1;
            for (i, rs) in row_sums.iter_mut().enumerate() {
                *rs += a[(i, flipped)];
            }
        } else {
            subset_size -= 1;
            for (i, rs) in row_sums.iter_mut().enumerate() {
                *rs -= a[(i, flipped)];
            }
        }
        let sign = if (n as u32 - subset_size).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        let prod: Complex64 = row_sums.iter().product();
        acc.add(prod * sign);
    }
    Ok(acc.value())
}

/// Glynn's formula: `2^{1-n}` times the sign-vector sum over `x` in
/// `{-1,+1}^n` with `x_1 = +1` fixed, Gray-code updates of the column dots.
pub fn permanent_glynn(a: &DMatrix<Complex64>) -> Result<Complex64> {
    let n = check_square(a, MAX_EXP_DIM, "Glynn")?;
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    // column dot products for x = (+1, ..., +1)
    let mut dots: Vec<Complex64> = (0..n).map(|j| a.column(j).iter().sum()).collect();
    let mut sign = 1.0f64;
    let mut acc = CompensatedSum::new();
    acc.add(dots.iter().product());
    let total = 1u64 << (n - 1);
    let mut x = vec![1.0f64; n];
    for k in 1..total {
        let gray = k ^ (k >> 1);
        let prev_gray = (k - 1) ^ ((k - 1) >> 1);
        // bit b toggles sign of row b + 1 (row 0 pinned at +1)
        let row = (gray ^ prev_gray).trailing_zeros() as usize + 1;
        x[row] = -x[row];
        sign = -sign;
        for (j, dot) in dots.iter_mut().enumerate() {
            *dot += a[(row, j)] * (2.0 * x[row]);
        }
        let prod: Complex64 = dots.iter().product();
        acc.add(prod * sign);
    }
    Ok(acc.value() * 2f64.powi(1 - n as i32))
}

/// Permanent through the coherent-state route: expand `|1...1>` over
/// `2^{n-1}` states, push the parameter rows through the matrix, and project
/// back onto `|1...1>`. Unitarity is not required by the algebra.
pub fn permanent_via_gcs(a: &DMatrix<Complex64>) -> Result<Complex64> {
    let n = check_square(a, MAX_PARTICLES as usize, "coherent-state projection")?;
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let ens = kan_expand_single_occupancy(n as u32, n)?;
    let pushed = ens.apply_matrix(a)?;
    let target = FockState::single_occupancy(n as u32, n)?;
    reconstruct_amplitude(&pushed, &target)
}

/// `P(C) = |per(U_nm)|^2 / prod m_k!` for the configuration described by
/// `spec`. The multiplicity factor reduces to 1 in the collision-free case.
pub fn output_probability(u: &UnitaryMatrix, spec: &SubmatrixSpec) -> Result<f64> {
    let sub = submatrix(u.matrix(), spec)?;
    let per = permanent_glynn(&sub)?;
    let norm: f64 = spec.output.iter().map(|&mk| factorial(mk)).product();
    Ok(per.norm_sqr() / norm)
}
