//! Exact finite expansion of Fock states over generalized (SU(M)) coherent
//! states and their evolution under a mode unitary.
//!
//! A GCS with parameter vector `xi` (unit norm) is
//! `|S, xi> = (S!)^{-1/2} (sum_i xi_i a_i^dag)^S |0>`. A Fock state
//! `|s_1..s_M>` expands exactly over `prod (s_i + 1)` such states via the
//! monomial sign expansion; for singly occupied modes the redundancy-free
//! form needs only `2^{S-1}` terms. Evolution leaves the amplitudes constant
//! and maps the parameter matrix by one right-multiplication.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{binomial, cpowi, factorial, MAX_PARTICLES};
use crate::unitary::UnitaryMatrix;

/// Occupation-number vector `(s_1, ..., s_M)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FockState {
    occ: Vec<u32>,
}

impl FockState {
    pub fn new(occ: Vec<u32>) -> Result<Self> {
        if occ.is_empty() {
            return Err(Error::InvalidDimension(
                "Fock state needs at least one mode".into(),
            ));
        }
        Ok(Self { occ })
    }

    /// `|1...1 0...0>` with the first `s` of `m` modes singly occupied.
    pub fn single_occupancy(s: u32, m: usize) -> Result<Self> {
        if s as usize > m {
            return Err(Error::ParticleMismatch(format!(
                "cannot occupy {s} modes out of {m}"
            )));
        }
        let mut occ = vec![0u32; m.max(1)];
        for slot in occ.iter_mut().take(s as usize) {
            *slot = 1;
        }
        Self::new(occ)
    }

    pub fn occupations(&self) -> &[u32] {
        &self.occ
    }

    pub fn modes(&self) -> usize {
        self.occ.len()
    }

    /// Total particle count `S`.
    pub fn particles(&self) -> u32 {
        self.occ.iter().sum()
    }
}

/// Finite ensemble `sum_k A_k |S, xi_k>` representing an `S`-particle state.
///
/// Rows of `params` are the parameter vectors `xi_k`; they have unit norm for
/// every ensemble produced by the expansion constructors and stay unit-norm
/// under unitary evolution.
#[derive(Clone, Debug)]
pub struct GCSEnsemble {
    particles: u32,
    amplitudes: Vec<Complex64>,
    params: DMatrix<Complex64>,
}

impl GCSEnsemble {
    pub fn from_parts(
        particles: u32,
        amplitudes: Vec<Complex64>,
        params: DMatrix<Complex64>,
    ) -> Result<Self> {
        if amplitudes.len() != params.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes vs {} parameter rows",
                amplitudes.len(),
                params.nrows()
            )));
        }
        if params.ncols() == 0 {
            return Err(Error::InvalidDimension(
                "ensemble needs at least one mode".into(),
            ));
        }
        Ok(Self {
            particles,
            amplitudes,
            params,
        })
    }

    pub fn particles(&self) -> u32 {
        self.particles
    }

    pub fn modes(&self) -> usize {
        self.params.ncols()
    }

    /// Multiplicity `N` of the expansion.
    pub fn multiplicity(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn params(&self) -> &DMatrix<Complex64> {
        &self.params
    }

    /// Gram matrix of the parameter rows raised to the `S`-th power:
    /// entry `(j, k)` is `(xi_j^* . xi_k)^S`.
    pub fn gram(&self) -> DMatrix<Complex64> {
        let n = self.multiplicity();
        let raw = self.params.conjugate() * self.params.transpose();
        DMatrix::from_fn(n, n, |j, k| cpowi(raw[(j, k)], self.particles))
    }

    /// `<Psi|Psi>` from amplitudes and overlaps; 1 for a normalized state.
    pub fn norm_sqr(&self) -> f64 {
        let gram = self.gram();
        let mut acc = Complex64::default();
        for j in 0..self.multiplicity() {
            for k in 0..self.multiplicity() {
                acc += self.amplitudes[j].conj() * self.amplitudes[k] * gram[(j, k)];
            }
        }
        acc.re
    }

    /// Parameter rows times an arbitrary square matrix. Row norms are only
    /// preserved when `m` is unitary; used by the permanent projection, which
    /// feeds general complex matrices through the same algebra.
    pub fn apply_matrix(&self, m: &DMatrix<Complex64>) -> Result<GCSEnsemble> {
        if m.nrows() != self.modes() || m.ncols() != m.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "ensemble over {} modes vs {}x{} matrix",
                self.modes(),
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(GCSEnsemble {
            particles: self.particles,
            amplitudes: self.amplitudes.clone(),
            params: &self.params * m,
        })
    }
}

fn guard_particles(s: u32) -> Result<()> {
    if s > MAX_PARTICLES {
        return Err(Error::SizeGuard(format!(
            "particle number {s} exceeds the supported maximum {MAX_PARTICLES}"
        )));
    }
    Ok(())
}

/// Exact expansion of an arbitrary Fock state over `prod (s_i + 1)` coherent
/// states (index vectors with identically vanishing direction are dropped;
/// their amplitude is exactly zero).
pub fn kan_expand_general(fock: &FockState) -> Result<GCSEnsemble> {
    let s = fock.occupations();
    let total: u32 = fock.particles();
    if total == 0 {
        return Err(Error::EmptyExpansion);
    }
    guard_particles(total)?;
    let m = fock.modes();

    let prefactor =
        1.0 / s.iter().map(|&si| factorial(si)).product::<f64>().sqrt() / factorial(total).sqrt();

    let mut amplitudes = Vec::new();
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    let mut nu = vec![0u32; m];
    loop {
        let mut h = vec![0.0f64; m];
        let mut h2 = 0.0f64;
        let mut nu_sum = 0u32;
        let mut binom_prod = 1.0f64;
        for i in 0..m {
            h[i] = s[i] as f64 / 2.0 - nu[i] as f64;
            h2 += h[i] * h[i];
            nu_sum += nu[i];
            binom_prod *= binomial(s[i], nu[i]);
        }
        if h2 > 0.0 {
            let sign = if nu_sum.is_multiple_of(2) { 1.0 } else { -1.0 };
            let amp = prefactor * sign * binom_prod * h2.sqrt().powi(total as i32);
            let inv_norm = 1.0 / h2.sqrt();
            amplitudes.push(Complex64::new(amp, 0.0));
            rows.push(
                h.iter()
                    .map(|&hi| Complex64::new(hi * inv_norm, 0.0))
                    .collect(),
            );
        }

        // lexicographic odometer over 0..=s_i, last index fastest
        let mut pos = m;
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            if nu[pos] < s[pos] {
                nu[pos] += 1;
                break;
            }
            nu[pos] = 0;
        }
        if nu.iter().all(|&v| v == 0) {
            break;
        }
    }

    let n = amplitudes.len();
    let params = DMatrix::from_fn(n, m, |k, i| rows[k][i]);
    GCSEnsemble::from_parts(total, amplitudes, params)
}

/// Redundancy-free `2^{S-1}`-term expansion of `|1...1 0...0>` (first `s` of
/// `m` modes singly occupied). Term `k` maps to the `(S-1)`-bit pattern of
/// `k` read as `(nu_2 ... nu_S)`, most significant bit first.
pub fn kan_expand_single_occupancy(s: u32, m: usize) -> Result<GCSEnsemble> {
    if s == 0 {
        return Err(Error::EmptyExpansion);
    }
    guard_particles(s)?;
    if s as usize > m {
        return Err(Error::ParticleMismatch(format!(
            "{s} singly occupied modes do not fit in {m} modes"
        )));
    }
    let n = 1usize << (s - 1);
    let magnitude = 2.0 * (s as f64 / 4.0).sqrt().powi(s as i32) / factorial(s).sqrt();
    let inv_sqrt_s = 1.0 / (s as f64).sqrt();

    let mut amplitudes = Vec::with_capacity(n);
    let mut params = DMatrix::<Complex64>::zeros(n, m);
    for k in 0..n {
        let sign = if (k as u32).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        amplitudes.push(Complex64::new(sign * magnitude, 0.0));
        params[(k, 0)] = Complex64::new(inv_sqrt_s, 0.0);
        for i in 1..s as usize {
            let bit = (k >> (s as usize - 1 - i)) & 1;
            let x = if bit == 0 { 1.0 } else { -1.0 };
            params[(k, i)] = Complex64::new(x * inv_sqrt_s, 0.0);
        }
    }
    GCSEnsemble::from_parts(s, amplitudes, params)
}

/// `(xi_j^* . xi_k)^S`, conjugate-linear in the first argument. Inputs need
/// not be normalized (the partition machinery feeds truncated vectors).
pub fn gcs_overlap(s: u32, xi_j: &[Complex64], xi_k: &[Complex64]) -> Result<Complex64> {
    if xi_j.len() != xi_k.len() {
        return Err(Error::DimensionMismatch(format!(
            "overlap of vectors with lengths {} and {}",
            xi_j.len(),
            xi_k.len()
        )));
    }
    let inner: Complex64 = xi_j.iter().zip(xi_k).map(|(a, b)| a.conj() * b).sum();
    Ok(cpowi(inner, s))
}

/// `<n_1..n_M | S, xi> = sqrt(S!/prod n_i!) prod xi_i^{n_i}`; for
/// unnormalized `xi` this is the coefficient of the unnormalized state.
pub fn fock_coefficient(fock: &FockState, s: u32, xi: &[Complex64]) -> Result<Complex64> {
    if fock.modes() != xi.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} occupations vs {} parameters",
            fock.modes(),
            xi.len()
        )));
    }
    if fock.particles() != s {
        return Err(Error::ParticleMismatch(format!(
            "occupations sum to {} but S = {s}",
            fock.particles()
        )));
    }
    guard_particles(s)?;
    Ok(coefficient_unchecked(fock.occupations(), s, |i| xi[i]))
}

pub(crate) fn coefficient_unchecked(
    occ: &[u32],
    s: u32,
    xi: impl Fn(usize) -> Complex64,
) -> Complex64 {
    let mut denom = 1.0f64;
    let mut prod = Complex64::new(1.0, 0.0);
    for (i, &ni) in occ.iter().enumerate() {
        denom *= factorial(ni);
        if ni > 0 {
            prod *= cpowi(xi(i), ni);
        }
    }
    (factorial(s) / denom).sqrt() * prod
}

/// Unitary evolution: amplitudes unchanged, parameter rows right-multiplied
/// by the circuit matrix.
pub fn evolve(ens: &GCSEnsemble, u: &UnitaryMatrix) -> Result<GCSEnsemble> {
    if u.dim() != ens.modes() {
        return Err(Error::DimensionMismatch(format!(
            "ensemble over {} modes vs {}-dim unitary",
            ens.modes(),
            u.dim()
        )));
    }
    ens.apply_matrix(u.matrix())
}

/// `<fock|Psi> = sum_k A_k <fock|S, xi_k>`.
pub fn reconstruct_amplitude(ens: &GCSEnsemble, fock: &FockState) -> Result<Complex64> {
    if fock.particles() != ens.particles() {
        return Err(Error::ParticleMismatch(format!(
            "state has {} particles, ensemble has {}",
            fock.particles(),
            ens.particles()
        )));
    }
    if fock.modes() != ens.modes() {
        return Err(Error::DimensionMismatch(format!(
            "state over {} modes, ensemble over {}",
            fock.modes(),
            ens.modes()
        )));
    }
    let occ = fock.occupations();
    let mut acc = Complex64::default();
    for k in 0..ens.multiplicity() {
        acc +=
            ens.amplitudes[k] * coefficient_unchecked(occ, ens.particles, |i| ens.params[(k, i)]);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::enumerate_basis;
    use crate::unitary::haar_unitary;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn expand_one_particle_reconstructs() {
        let f = FockState::new(vec![1]).unwrap();
        let ens = kan_expand_general(&f).unwrap();
        assert_eq!(ens.multiplicity(), 2);
        let amp = reconstruct_amplitude(&ens, &f).unwrap();
        assert_abs_diff_eq!(amp.re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(amp.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn expand_two_stacked_particles() {
        let f = FockState::new(vec![2]).unwrap();
        let ens = kan_expand_general(&f).unwrap();
        // nu = 1 has h = 0 and is dropped
        assert_eq!(ens.multiplicity(), 2);
        for k in 0..2 {
            assert_abs_diff_eq!(ens.amplitudes()[k].re, 0.5, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(ens.params()[(0, 0)].re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ens.params()[(1, 0)].re, -1.0, epsilon = 1e-12);
        let amp = reconstruct_amplitude(&ens, &f).unwrap();
        assert_abs_diff_eq!(amp.re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn expand_one_one_matches_reduced_form() {
        let f = FockState::new(vec![1, 1]).unwrap();
        let general = kan_expand_general(&f).unwrap();
        let reduced = kan_expand_single_occupancy(2, 2).unwrap();
        let r = 0.5f64.sqrt();
        assert_abs_diff_eq!(reduced.amplitudes()[0].re, r, epsilon = 1e-12);
        assert_abs_diff_eq!(reduced.amplitudes()[1].re, -r, epsilon = 1e-12);
        assert_abs_diff_eq!(reduced.params()[(0, 0)].re, r, epsilon = 1e-12);
        assert_abs_diff_eq!(reduced.params()[(1, 1)].re, -r, epsilon = 1e-12);
        for g in enumerate_basis(2, 2).unwrap().states() {
            let a = reconstruct_amplitude(&general, g).unwrap();
            let b = reconstruct_amplitude(&reduced, g).unwrap();
            assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn expand_zero_particles_rejected() {
        let f = FockState::new(vec![0, 0]).unwrap();
        assert!(matches!(kan_expand_general(&f), Err(Error::EmptyExpansion)));
    }

    #[test]
    fn single_occupancy_one_particle() {
        let ens = kan_expand_single_occupancy(1, 3).unwrap();
        assert_eq!(ens.multiplicity(), 1);
        assert_abs_diff_eq!(ens.amplitudes()[0].re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ens.params()[(0, 0)].re, 1.0, epsilon = 1e-12);
        assert_eq!(ens.params()[(0, 1)], Complex64::default());
    }

    #[test]
    fn single_occupancy_three_particles() {
        let ens = kan_expand_single_occupancy(3, 9).unwrap();
        assert_eq!(ens.multiplicity(), 4);
        assert_abs_diff_eq!(ens.norm_sqr(), 1.0, epsilon = 1e-12);
        let f = FockState::single_occupancy(3, 9).unwrap();
        let amp = reconstruct_amplitude(&ens, &f).unwrap();
        assert_abs_diff_eq!(amp.re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(amp.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn single_occupancy_rejects_overfill() {
        assert!(matches!(
            kan_expand_single_occupancy(4, 3),
            Err(Error::ParticleMismatch(_))
        ));
    }

    #[test]
    fn overlap_basics() {
        let xi = [c(0.6, 0.0), c(0.0, 0.8)];
        let v = gcs_overlap(5, &xi, &xi).unwrap();
        assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-12);

        let a = [c(1.0, 0.0), c(1.0, 0.0)].map(|z| z * 0.5f64.sqrt());
        let b = [c(1.0, 0.0), c(-1.0, 0.0)].map(|z| z * 0.5f64.sqrt());
        let v = gcs_overlap(2, &a, &b).unwrap();
        assert!(v.norm() <= 1e-12);

        let a = [c(1.0, 0.0), c(0.0, 0.0)];
        let b = [c(0.6, 0.0), c(0.8, 0.0)];
        let v = gcs_overlap(3, &a, &b).unwrap();
        assert_abs_diff_eq!(v.re, 0.216, epsilon = 1e-15);

        assert!(gcs_overlap(2, &a, &[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn coefficient_basics() {
        let f = FockState::new(vec![3, 0]).unwrap();
        let xi = [c(1.0, 0.0), c(0.0, 0.0)];
        assert_abs_diff_eq!(
            fock_coefficient(&f, 3, &xi).unwrap().re,
            1.0,
            epsilon = 1e-12
        );

        let f = FockState::new(vec![1, 1]).unwrap();
        let xi = [c(0.3, 0.1), c(-0.2, 0.5)];
        let got = fock_coefficient(&f, 2, &xi).unwrap();
        let want = 2.0f64.sqrt() * xi[0] * xi[1];
        assert!((got - want).norm() <= 1e-15);

        assert!(matches!(
            fock_coefficient(&f, 3, &xi),
            Err(Error::ParticleMismatch(_))
        ));
    }

    #[test]
    fn coefficient_completeness_sum() {
        // random unit vector: sum of |<n|S,xi>|^2 over the basis is 1
        let u = haar_unitary(3, 99).unwrap();
        let xi: Vec<Complex64> = (0..3).map(|i| u.matrix()[(i, 0)]).collect();
        let basis = enumerate_basis(3, 3).unwrap();
        assert_eq!(basis.len(), 10);
        let total: f64 = basis
            .states()
            .iter()
            .map(|g| fock_coefficient(g, 3, &xi).unwrap().norm_sqr())
            .sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn evolve_identity_and_swap() {
        let ens = kan_expand_single_occupancy(2, 3).unwrap();
        let id = UnitaryMatrix::identity(3).unwrap();
        let same = evolve(&ens, &id).unwrap();
        assert_eq!(same.params(), ens.params());

        let mut swap = DMatrix::<Complex64>::identity(3, 3);
        swap.swap_rows(0, 1);
        let swap = UnitaryMatrix::new(swap).unwrap();
        let out = evolve(&ens, &swap).unwrap();
        for k in 0..ens.multiplicity() {
            assert_eq!(out.params()[(k, 0)], ens.params()[(k, 1)]);
            assert_eq!(out.params()[(k, 1)], ens.params()[(k, 0)]);
            assert_eq!(out.params()[(k, 2)], ens.params()[(k, 2)]);
        }
    }

    #[test]
    fn evolve_conserves_norm_and_row_norms() {
        let ens = kan_expand_single_occupancy(3, 6).unwrap();
        let u = haar_unitary(6, 17).unwrap();
        let out = evolve(&ens, &u).unwrap();
        assert_abs_diff_eq!(out.norm_sqr(), 1.0, epsilon = 1e-10);
        for k in 0..out.multiplicity() {
            let row_norm: f64 = (0..6).map(|i| out.params()[(k, i)].norm_sqr()).sum();
            assert_abs_diff_eq!(row_norm, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn evolve_dimension_mismatch() {
        let ens = kan_expand_single_occupancy(2, 3).unwrap();
        let u = haar_unitary(4, 0).unwrap();
        assert!(matches!(evolve(&ens, &u), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn reconstruct_unevolved_is_kronecker_delta() {
        let ens = kan_expand_single_occupancy(3, 5).unwrap();
        let input = FockState::single_occupancy(3, 5).unwrap();
        for g in enumerate_basis(3, 5).unwrap().states() {
            let amp = reconstruct_amplitude(&ens, g).unwrap();
            let want = if *g == input { 1.0 } else { 0.0 };
            assert!(
                (amp - Complex64::new(want, 0.0)).norm() <= 1e-12,
                "state {:?}",
                g.occupations()
            );
        }
    }

    #[test]
    fn general_expansion_exact_small() {
        for m in 1..=3usize {
            for s_total in 1..=3u32 {
                for f in enumerate_basis(s_total, m).unwrap().states() {
                    let ens = kan_expand_general(f).unwrap();
                    for g in enumerate_basis(s_total, m).unwrap().states() {
                        let amp = reconstruct_amplitude(&ens, g).unwrap();
                        let want = if g == f { 1.0 } else { 0.0 };
                        assert!(
                            (amp - Complex64::new(want, 0.0)).norm() <= 1e-12,
                            "f={:?} g={:?} amp={amp}",
                            f.occupations(),
                            g.occupations()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn path_equivalence_general_vs_reduced() {
        for (s, m) in [(2u32, 4usize), (3, 5), (4, 4)] {
            let f = FockState::single_occupancy(s, m).unwrap();
            let general = kan_expand_general(&f).unwrap();
            let reduced = kan_expand_single_occupancy(s, m).unwrap();
            assert_eq!(general.multiplicity(), 1 << s);
            assert_eq!(reduced.multiplicity(), 1 << (s - 1));
            let u = haar_unitary(m, 5).unwrap();
            let g_ev = evolve(&general, &u).unwrap();
            let r_ev = evolve(&reduced, &u).unwrap();
            for g in enumerate_basis(s, m).unwrap().states() {
                let a = reconstruct_amplitude(&g_ev, g).unwrap();
                let b = reconstruct_amplitude(&r_ev, g).unwrap();
                assert!((a - b).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn permutation_covariance() {
        let s = 3u32;
        let m = 5usize;
        let ens = kan_expand_single_occupancy(s, m).unwrap();
        let u = haar_unitary(m, 31).unwrap();
        let evolved = evolve(&ens, &u).unwrap();

        // cyclic shift permutation
        let mut p = DMatrix::<Complex64>::zeros(m, m);
        for i in 0..m {
            p[(i, (i + 1) % m)] = Complex64::new(1.0, 0.0);
        }
        let perm = UnitaryMatrix::new(p.clone()).unwrap();
        let shifted = evolve(&evolved, &perm).unwrap();

        for g in enumerate_basis(s, m).unwrap().states() {
            // permuted occupations: mode i of the permuted state holds what
            // mode sigma(i) held, with sigma read off the matrix action
            let occ = g.occupations();
            let mut permuted = vec![0u32; m];
            for i in 0..m {
                for j in 0..m {
                    if p[(j, i)].re == 1.0 {
                        permuted[j] = occ[i];
                    }
                }
            }
            let lhs = reconstruct_amplitude(&shifted, g).unwrap();
            let rhs = reconstruct_amplitude(&evolved, &FockState::new(permuted).unwrap()).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12);
        }
    }

    proptest! {
        #[test]
        fn self_overlap_of_unit_vector_is_one(seed in 0u64..500, s in 1u32..6) {
            let u = haar_unitary(4, seed).unwrap();
            let xi: Vec<Complex64> = (0..4).map(|i| u.matrix()[(i, 0)]).collect();
            let v = gcs_overlap(s, &xi, &xi).unwrap();
            prop_assert!((v - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
        }

        #[test]
        fn kan_norm_is_one(s in 1u32..7) {
            let ens = kan_expand_single_occupancy(s, s as usize + 2).unwrap();
            prop_assert!((ens.norm_sqr() - 1.0).abs() <= 1e-10);
        }
    }
}
