//! Brute-force Fock-space reference path. Everything here works on the full
//! `binom(M+S-1, S)`-dimensional basis and is intended for small systems
//! only; it shares no state-representation code with the coherent-state path
//! it validates.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::eigen::hermitian_eigen;
use crate::error::{Error, Result};
use crate::gcs::FockState;
use crate::unitary::{phase_matrix, UnitaryMatrix};

/// Hard cap on the Fock-space dimension handled by this module.
pub const MAX_BASIS_DIM: usize = 200_000;

/// All occupation vectors of `s` particles on `m` modes, descending
/// lexicographic order, with the inverse index map.
#[derive(Clone, Debug)]
pub struct FockBasis {
    particles: u32,
    modes: usize,
    states: Vec<FockState>,
    index: HashMap<Vec<u32>, usize>,
}

impl FockBasis {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn particles(&self) -> u32 {
        self.particles
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn states(&self) -> &[FockState] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &FockState {
        &self.states[i]
    }

    pub fn index_of(&self, f: &FockState) -> Option<usize> {
        self.index.get(f.occupations()).copied()
    }
}

/// Occupation lists over possibly zero modes; used for one-sided cuts.
pub(crate) fn occupation_lists(s: u32, m: usize) -> Vec<Vec<u32>> {
    if m == 0 {
        return if s == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut prefix = vec![0u32; m];
    fn rec(prefix: &mut Vec<u32>, pos: usize, rem: u32, m: usize, out: &mut Vec<Vec<u32>>) {
        if pos == m - 1 {
            prefix[pos] = rem;
            out.push(prefix.clone());
            return;
        }
        for k in (0..=rem).rev() {
            prefix[pos] = k;
            rec(prefix, pos + 1, rem - k, m, out);
        }
    }
    rec(&mut prefix, 0, s, m, &mut out);
    out
}

fn basis_dim(s: u32, m: usize) -> f64 {
    crate::numeric::binomial((m as u32).saturating_add(s).saturating_sub(1), s)
}

/// Deterministic enumeration of the `s`-particle sector over `m` modes.
pub fn enumerate_basis(s: u32, m: usize) -> Result<FockBasis> {
    if m == 0 {
        return Err(Error::InvalidDimension(
            "basis needs at least one mode".into(),
        ));
    }
    let dim = basis_dim(s, m);
    if dim > MAX_BASIS_DIM as f64 {
        return Err(Error::SizeGuard(format!(
            "Fock dimension {dim:.0} exceeds the cap {MAX_BASIS_DIM}"
        )));
    }
    let lists = occupation_lists(s, m);
    let mut states = Vec::with_capacity(lists.len());
    let mut index = HashMap::with_capacity(lists.len());
    for (i, occ) in lists.into_iter().enumerate() {
        index.insert(occ.clone(), i);
        states.push(FockState::new(occ)?);
    }
    Ok(FockBasis {
        particles: s,
        modes: m,
        states,
        index,
    })
}

/// A state vector over a [`FockBasis`].
#[derive(Clone, Debug)]
pub struct FockStateVector {
    pub basis: FockBasis,
    pub amplitudes: DVector<Complex64>,
}

impl FockStateVector {
    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn amplitude_of(&self, f: &FockState) -> Option<Complex64> {
        self.basis.index_of(f).map(|i| self.amplitudes[i])
    }
}

/// Second-quantized one-particle operator `sum_ij phi_ij a_i^dag a_j` in the
/// `s`-particle sector.
fn lift_one_particle(phi: &DMatrix<Complex64>, basis: &FockBasis) -> DMatrix<Complex64> {
    let d = basis.len();
    let m = basis.modes();
    let mut h = DMatrix::<Complex64>::zeros(d, d);
    for (col, state) in basis.states().iter().enumerate() {
        let occ = state.occupations();
        for j in 0..m {
            if occ[j] == 0 {
                continue;
            }
            for i in 0..m {
                if i == j {
                    h[(col, col)] += phi[(i, i)] * occ[i] as f64;
                } else {
                    let mut moved = occ.to_vec();
                    moved[j] -= 1;
                    moved[i] += 1;
                    let row = basis.index[&moved];
                    let amp = ((occ[j] as f64) * (occ[i] as f64 + 1.0)).sqrt();
                    h[(row, col)] += phi[(i, j)] * amp;
                }
            }
        }
    }
    h
}

/// Evolve a Fock basis state by `exp(-i H t)` where `H` is the beam-splitting
/// Hamiltonian lifted to the full particle sector. The one-particle matrix is
/// oriented so that the induced map on creation operators is
/// `a_i^dag -> sum_j U_ij a_j^dag`, matching the coherent-state evolution.
pub fn evolve_fock(u: &UnitaryMatrix, input: &FockState, t: f64) -> Result<FockStateVector> {
    if u.dim() != input.modes() {
        return Err(Error::DimensionMismatch(format!(
            "{}-mode state vs {}-dim unitary",
            input.modes(),
            u.dim()
        )));
    }
    let s = input.particles();
    let basis = enumerate_basis(s, input.modes())?;
    let phi = phase_matrix(u)?;
    let phi_evo = -phi.matrix().transpose();
    let h = lift_one_particle(&phi_evo, &basis);

    let eig = hermitian_eigen(&h);
    let start = basis
        .index_of(input)
        .ok_or_else(|| Error::ParticleMismatch("input state not in basis".into()))?;
    // psi = V exp(-i w t) V^H e_start
    let mut scaled = eig.vectors.adjoint().column(start).into_owned();
    for (k, c) in scaled.iter_mut().enumerate() {
        *c *= Complex64::from_polar(1.0, -eig.values[k] * t);
    }
    let amplitudes = &eig.vectors * scaled;
    Ok(FockStateVector { basis, amplitudes })
}

/// Partial trace over the right modes. Block `n` (0..=S) holds the sector
/// with `n` particles on the right and `S - n` on the left; empty sectors
/// come back as 0 x 0 matrices so indexing by `n` stays stable.
pub fn reduced_density(state: &FockStateVector, m_l: usize) -> Result<Vec<DMatrix<Complex64>>> {
    let s = state.basis.particles();
    let m = state.basis.modes();
    if m_l > m {
        return Err(Error::OutOfRange(format!("cut {m_l} beyond {m} modes")));
    }
    let mut blocks = Vec::with_capacity(s as usize + 1);
    for n in 0..=s {
        let left = occupation_lists(s - n, m_l);
        let right = occupation_lists(n, m - m_l);
        let dl = left.len();
        let mut rho = DMatrix::<Complex64>::zeros(dl, dl);
        for (a, la) in left.iter().enumerate() {
            for (b, lb) in left.iter().enumerate() {
                let mut acc = Complex64::default();
                for r in &right {
                    let mut full_a = la.clone();
                    full_a.extend_from_slice(r);
                    let mut full_b = lb.clone();
                    full_b.extend_from_slice(r);
                    let ia = state.basis.index[&full_a];
                    let ib = state.basis.index[&full_b];
                    acc += state.amplitudes[ia] * state.amplitudes[ib].conj();
                }
                rho[(a, b)] = acc;
            }
        }
        blocks.push(rho);
    }
    Ok(blocks)
}

/// Entropies from an eigendecomposition of the reduced blocks.
#[derive(Clone, Debug)]
pub struct OracleEntropies {
    pub von_neumann: f64,
    pub renyi: Vec<(u32, f64)>,
}

pub fn oracle_entropies(blocks: &[DMatrix<Complex64>], alphas: &[u32]) -> Result<OracleEntropies> {
    let mut eigenvalues = Vec::new();
    for block in blocks {
        if block.nrows() == 0 {
            continue;
        }
        let eig = hermitian_eigen(block);
        for &lambda in eig.values.iter() {
            if lambda < -1e-8 {
                return Err(Error::Numerical(format!(
                    "reduced density block has eigenvalue {lambda:.3e} < -1e-8"
                )));
            }
            eigenvalues.push(lambda.max(0.0));
        }
    }
    let von_neumann = -eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| l * l.ln())
        .sum::<f64>();
    let renyi = alphas
        .iter()
        .map(|&alpha| {
            let trace: f64 = eigenvalues.iter().map(|&l| l.powi(alpha as i32)).sum();
            (alpha, trace.ln() / (1.0 - alpha as f64))
        })
        .collect();
    Ok(OracleEntropies { von_neumann, renyi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcs::{evolve, kan_expand_single_occupancy, reconstruct_amplitude};
    use crate::permanent::permanent_naive;
    use crate::unitary::haar_unitary;
    use approx::assert_abs_diff_eq;

    #[test]
    fn basis_order_matches_convention() {
        let b = enumerate_basis(1, 3).unwrap();
        let occs: Vec<_> = b
            .states()
            .iter()
            .map(|s| s.occupations().to_vec())
            .collect();
        assert_eq!(occs, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);

        let b = enumerate_basis(2, 2).unwrap();
        let occs: Vec<_> = b
            .states()
            .iter()
            .map(|s| s.occupations().to_vec())
            .collect();
        assert_eq!(occs, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn basis_dimension_and_roundtrip() {
        let b = enumerate_basis(3, 5).unwrap();
        assert_eq!(b.len(), 35);
        for (i, s) in b.states().iter().enumerate() {
            assert_eq!(b.index_of(s), Some(i));
        }
    }

    #[test]
    fn basis_guard_trips() {
        assert!(matches!(enumerate_basis(10, 30), Err(Error::SizeGuard(_))));
    }

    #[test]
    fn identity_evolution_fixes_input() {
        let u = UnitaryMatrix::identity(3).unwrap();
        let input = FockState::new(vec![1, 2, 0]).unwrap();
        for &t in &[0.0, 0.3, 1.0] {
            let out = evolve_fock(&u, &input, t).unwrap();
            let amp = out.amplitude_of(&input).unwrap();
            assert!((amp - Complex64::new(1.0, 0.0)).norm() <= 1e-12, "t={t}");
        }
    }

    #[test]
    fn hong_ou_mandel_suppression() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(s, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(-s, 0.0),
            ],
        );
        let u = UnitaryMatrix::new(m.clone()).unwrap();
        let input = FockState::new(vec![1, 1]).unwrap();
        let out = evolve_fock(&u, &input, 1.0).unwrap();
        let amp = out.amplitude_of(&input).unwrap();
        let per = permanent_naive(&m).unwrap();
        assert!(per.norm() <= 1e-12);
        assert!(amp.norm() <= 1e-9);
    }

    #[test]
    fn evolution_is_norm_preserving() {
        let u = haar_unitary(4, 3).unwrap();
        let input = FockState::new(vec![1, 1, 0, 0]).unwrap();
        for &t in &[0.25, 0.5, 1.0] {
            let out = evolve_fock(&u, &input, t).unwrap();
            assert_abs_diff_eq!(out.norm(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn matches_coherent_state_path() {
        let u = haar_unitary(4, 12).unwrap();
        let ens = kan_expand_single_occupancy(2, 4).unwrap();
        let evolved = evolve(&ens, &u).unwrap();
        let input = FockState::single_occupancy(2, 4).unwrap();
        let out = evolve_fock(&u, &input, 1.0).unwrap();
        for (i, g) in out.basis.states().iter().enumerate() {
            let gcs_amp = reconstruct_amplitude(&evolved, g).unwrap();
            assert!(
                (gcs_amp - out.amplitudes[i]).norm() <= 1e-9,
                "state {:?}",
                g.occupations()
            );
        }
    }

    #[test]
    fn product_state_has_unit_purity() {
        let u = UnitaryMatrix::identity(4).unwrap();
        let input = FockState::new(vec![1, 1, 0, 0]).unwrap();
        let out = evolve_fock(&u, &input, 1.0).unwrap();
        let blocks = reduced_density(&out, 2).unwrap();
        let trace: f64 = blocks.iter().map(|b| b.trace().re).sum();
        let purity: f64 = blocks.iter().map(|b| (b * b).trace().re).sum();
        assert_abs_diff_eq!(trace, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(purity, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn block_traces_sum_to_one() {
        let u = haar_unitary(4, 8).unwrap();
        let input = FockState::new(vec![1, 1, 0, 0]).unwrap();
        let out = evolve_fock(&u, &input, 1.0).unwrap();
        for m_l in 0..=4 {
            let blocks = reduced_density(&out, m_l).unwrap();
            let trace: f64 = blocks.iter().map(|b| b.trace().re).sum();
            assert_abs_diff_eq!(trace, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn reduced_blocks_match_gram_materialization() {
        // partial trace of the brute-force state vs the overlap-built blocks
        let s = 2u32;
        let m = 4usize;
        let u = haar_unitary(m, 19).unwrap();
        let ens = kan_expand_single_occupancy(s, m).unwrap();
        let evolved = evolve(&ens, &u).unwrap();
        let input = FockState::single_occupancy(s, m).unwrap();
        let state = evolve_fock(&u, &input, 1.0).unwrap();
        for m_l in 0..=m {
            let oracle_blocks = reduced_density(&state, m_l).unwrap();
            for n in 0..=s {
                let gram_block =
                    crate::entanglement::block_density_matrix(&evolved, m_l, n).unwrap();
                let oracle = &oracle_blocks[n as usize];
                assert_eq!(gram_block.shape(), oracle.shape(), "m_l={m_l} n={n}");
                let dev = (&gram_block - oracle)
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0f64, f64::max);
                assert!(dev <= 1e-8, "m_l={m_l} n={n}: {dev:.3e}");
            }
        }
    }

    #[test]
    fn entropies_of_simple_spectra() {
        let rank1 = vec![DMatrix::from_row_slice(1, 1, &[Complex64::new(1.0, 0.0)])];
        let e = oracle_entropies(&rank1, &[2, 3]).unwrap();
        assert!(e.von_neumann.abs() <= 1e-12);
        for (_, v) in e.renyi {
            assert!(v.abs() <= 1e-12);
        }

        let mixed = vec![DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.5, 0.0),
                Complex64::default(),
                Complex64::default(),
                Complex64::new(0.5, 0.0),
            ],
        )];
        let e = oracle_entropies(&mixed, &[2]).unwrap();
        assert_abs_diff_eq!(e.von_neumann, 2.0f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(e.renyi[0].1, 2.0f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn negative_eigenvalue_rejected() {
        let bad = vec![DMatrix::from_row_slice(1, 1, &[Complex64::new(-1e-3, 0.0)])];
        assert!(matches!(
            oracle_entropies(&bad, &[2]),
            Err(Error::Numerical(_))
        ));
    }
}
