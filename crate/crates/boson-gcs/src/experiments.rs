//! Batch experiment drivers: entropy sweeps over bipartition, Renyi index,
//! mode number and evolution depth, averaged over seeded Haar realizations.
//!
//! Determinism contract: a fixed `(config, seed)` pair produces byte-identical
//! CSV output. Realizations derive their seeds from the master seed with a
//! SplitMix64 step, are computed independently (possibly in parallel), and
//! are reduced in realization-index order, so results do not depend on the
//! worker count.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entanglement::{
    partition_overlaps, purity_closed_form, renyi_entropy, renyi_trace, renyi_trace_literal,
    von_neumann_entropy,
};
use crate::error::{Error, Result};
use crate::fock::{enumerate_basis, evolve_fock, oracle_entropies, reduced_density};
use crate::gcs::{
    evolve, kan_expand_general, kan_expand_single_occupancy, reconstruct_amplitude, FockState,
    GCSEnsemble,
};
use crate::numeric::MAX_PARTICLES;
use crate::permanent::{permanent_glynn, permanent_naive, permanent_ryser, permanent_via_gcs};
use crate::unitary::{fractional_power, haar_unitary, UnitaryEigen, UnitaryMatrix};

/// SplitMix64 mixing step; realization `r` of master seed `s` uses
/// `mix64(s + (r + 1) * GOLDEN)`, i.e. position `r + 1` of the SplitMix64
/// stream started at `s`.
pub fn mix_seed(master: u64, realization: u64) -> u64 {
    const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut z = master.wrapping_add(GOLDEN.wrapping_mul(realization.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    PageCurve,
    AlphaSweep,
    ModeSaturation,
    Buildup,
    Asymmetric,
    Permanent,
    Validate,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::PageCurve => "page-curve",
            Self::AlphaSweep => "alpha-sweep",
            Self::ModeSaturation => "mode-saturation",
            Self::Buildup => "buildup",
            Self::Asymmetric => "asymmetric",
            Self::Permanent => "permanent",
            Self::Validate => "validate",
        }
    }
}

/// Which bipartition points to evaluate.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CutSpec {
    Keyword(String),
    List(Vec<usize>),
}

impl CutSpec {
    fn resolve(&self, m: usize) -> Result<Vec<usize>> {
        match self {
            CutSpec::Keyword(word) if word == "all" => Ok((0..=m).collect()),
            CutSpec::Keyword(word) => Err(Error::Config(format!(
                "unknown cuts keyword {word:?}; expected \"all\""
            ))),
            CutSpec::List(cuts) => {
                for &c in cuts {
                    if c > m {
                        return Err(Error::Config(format!("cut {c} beyond {m} modes")));
                    }
                }
                Ok(cuts.clone())
            }
        }
    }
}

/// On-disk experiment configuration; keys are kebab-case and unknown keys
/// are rejected.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub experiment: Option<ExperimentKind>,
    pub particles: Option<u32>,
    pub modes: Option<usize>,
    pub mode_list: Option<Vec<usize>>,
    pub alphas: Option<Vec<u32>>,
    pub time: Option<f64>,
    pub time_list: Option<Vec<f64>>,
    pub cuts: Option<CutSpec>,
    pub realizations: Option<u32>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub unitarity_tol: Option<f64>,
    pub force_identity: Option<bool>,
    pub timings: Option<bool>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Fill desk-scale defaults and validate against an experiment kind.
    pub fn resolve(&self, kind: ExperimentKind) -> Result<ResolvedConfig> {
        if let Some(stated) = self.experiment {
            if stated != kind {
                return Err(Error::Config(format!(
                    "config is for experiment {:?} but {:?} was requested",
                    stated.name(),
                    kind.name()
                )));
            }
        }
        let particles = self.particles.unwrap_or(4);
        let realizations = self.realizations.unwrap_or(20);
        let seed = self.seed.unwrap_or(1);
        let alphas = self.alphas.clone().unwrap_or_else(|| match kind {
            ExperimentKind::AlphaSweep => vec![2, 3, 4],
            _ => vec![2],
        });

        let modes: Vec<usize> = match kind {
            ExperimentKind::ModeSaturation => self
                .mode_list
                .clone()
                .unwrap_or_else(|| vec![9, 16, 36, 64]),
            _ => {
                if self.mode_list.is_some() {
                    return Err(Error::Config(
                        "mode-list is only valid for mode-saturation".into(),
                    ));
                }
                vec![self.modes.unwrap_or(match kind {
                    ExperimentKind::Asymmetric => 40,
                    _ => 50,
                })]
            }
        };

        let times: Vec<f64> = match kind {
            ExperimentKind::Buildup => self
                .time_list
                .clone()
                .unwrap_or_else(|| (0..=10).map(|k| k as f64 / 10.0).collect()),
            ExperimentKind::Asymmetric => {
                if let Some(list) = self.time_list.clone() {
                    list
                } else {
                    vec![self.time.unwrap_or(0.1)]
                }
            }
            _ => {
                if self.time_list.is_some() {
                    return Err(Error::Config(
                        "time-list is only valid for buildup and asymmetric".into(),
                    ));
                }
                vec![self.time.unwrap_or(1.0)]
            }
        };

        let cuts = match kind {
            ExperimentKind::PageCurve | ExperimentKind::AlphaSweep | ExperimentKind::Asymmetric => {
                self.cuts
                    .clone()
                    .unwrap_or_else(|| CutSpec::Keyword("all".into()))
            }
            ExperimentKind::ModeSaturation => {
                if self.cuts.is_some() {
                    return Err(Error::Config(
                        "cuts cannot be overridden for mode-saturation (equal partition)".into(),
                    ));
                }
                CutSpec::Keyword("equal".into())
            }
            _ => {
                if self.cuts.is_some() {
                    return Err(Error::Config(
                        "cuts cannot be overridden for buildup (maximum over all cuts)".into(),
                    ));
                }
                CutSpec::Keyword("all".into())
            }
        };

        let resolved = ResolvedConfig {
            kind,
            particles,
            modes,
            alphas,
            times,
            cuts,
            realizations,
            seed,
            out: self.out.clone(),
            unitarity_tol: self
                .unitarity_tol
                .unwrap_or(crate::unitary::DEFAULT_UNITARITY_TOL),
            force_identity: self.force_identity.unwrap_or(false),
            timings: self.timings.unwrap_or(false),
        };
        resolved.validate()?;
        Ok(resolved)
    }
}

/// A fully validated experiment description.
#[derive(Clone, Debug)]
pub struct ResolvedConfig {
    pub kind: ExperimentKind,
    pub particles: u32,
    pub modes: Vec<usize>,
    pub alphas: Vec<u32>,
    pub times: Vec<f64>,
    pub cuts: CutSpec,
    pub realizations: u32,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub unitarity_tol: f64,
    pub force_identity: bool,
    pub timings: bool,
}

impl ResolvedConfig {
    fn validate(&self) -> Result<()> {
        if self.particles == 0 {
            return Err(Error::Config("particles must be >= 1".into()));
        }
        if self.particles > MAX_PARTICLES {
            return Err(Error::Config(format!(
                "particles = {} exceeds the supported maximum {MAX_PARTICLES}",
                self.particles
            )));
        }
        if self.modes.is_empty() {
            return Err(Error::Config("at least one mode count is required".into()));
        }
        for &m in &self.modes {
            if (self.particles as usize) > m {
                return Err(Error::Config(format!(
                    "particles = {} do not fit in {m} modes",
                    self.particles
                )));
            }
        }
        if self.alphas.is_empty() {
            return Err(Error::Config("alphas must not be empty".into()));
        }
        for &a in &self.alphas {
            if a < 2 {
                return Err(Error::Config(format!(
                    "alpha = {a} unsupported (need >= 2)"
                )));
            }
        }
        if self.realizations == 0 {
            return Err(Error::Config("realizations must be >= 1".into()));
        }
        for &t in &self.times {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::Config(format!("time {t} outside [0, 1]")));
            }
        }
        if let CutSpec::List(_) = self.cuts {
            for &m in &self.modes {
                self.cuts.resolve(m)?;
            }
        }
        Ok(())
    }

    fn cuts_for(&self, m: usize) -> Result<Vec<usize>> {
        match &self.cuts {
            CutSpec::Keyword(w) if w == "equal" => Ok(vec![m / 2]),
            other => other.resolve(m),
        }
    }
}

/// One averaged measurement: the unit of CSV/JSON output.
#[derive(Clone, Debug, Serialize)]
pub struct EntropyRecord {
    pub experiment: String,
    pub s: u32,
    pub m: usize,
    pub m_l: usize,
    pub alpha: u32,
    pub t: f64,
    pub realizations: u32,
    pub entropy_mean: f64,
    pub entropy_stderr: f64,
    pub wall_time_s: f64,
}

/// Per-realization entropies for one mode count, indexed
/// `[realization][time][cut][alpha]`.
fn sweep_entropies(
    cfg: &ResolvedConfig,
    m: usize,
    cuts: &[usize],
) -> Result<Vec<Vec<Vec<Vec<f64>>>>> {
    let base = kan_expand_single_occupancy(cfg.particles, m)?;
    let needs_eigen = cfg.times.iter().any(|&t| t != 1.0);
    (0..cfg.realizations as u64)
        .into_par_iter()
        .map(|r| {
            let u = if cfg.force_identity {
                UnitaryMatrix::identity(m)?
            } else {
                let sampled = haar_unitary(m, mix_seed(cfg.seed, r))?;
                UnitaryMatrix::with_tolerance(sampled.into_matrix(), cfg.unitarity_tol)?
            };
            let eigen = if needs_eigen {
                Some(UnitaryEigen::new(&u))
            } else {
                None
            };
            let mut per_time = Vec::with_capacity(cfg.times.len());
            for &t in &cfg.times {
                let evolved = if t == 1.0 {
                    evolve(&base, &u)?
                } else {
                    base.apply_matrix(&eigen.as_ref().expect("eigen prepared").power(t))?
                };
                let mut per_cut = Vec::with_capacity(cuts.len());
                for &cut in cuts {
                    let ctx = partition_overlaps(&evolved, cut)?;
                    let mut per_alpha = Vec::with_capacity(cfg.alphas.len());
                    for &alpha in &cfg.alphas {
                        let trace = renyi_trace(&ctx, evolved.amplitudes(), cfg.particles, alpha)?;
                        per_alpha.push(renyi_entropy(trace, alpha)?);
                    }
                    per_cut.push(per_alpha);
                }
                per_time.push(per_cut);
            }
            Ok(per_time)
        })
        .collect()
}

fn mean_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Run any of the entropy experiments; records come back in deterministic
/// sweep order.
pub fn run_experiment(cfg: &ResolvedConfig) -> Result<Vec<EntropyRecord>> {
    match cfg.kind {
        ExperimentKind::Permanent | ExperimentKind::Validate => Err(Error::Config(format!(
            "{} is not an entropy sweep",
            cfg.kind.name()
        ))),
        _ => {
            let start = Instant::now();
            let mut records = Vec::new();
            for &m in &cfg.modes {
                let cuts = cfg.cuts_for(m)?;
                let values = sweep_entropies(cfg, m, &cuts)?;
                for (ti, &t) in cfg.times.iter().enumerate() {
                    for (ai, &alpha) in cfg.alphas.iter().enumerate() {
                        let mut per_cut = Vec::with_capacity(cuts.len());
                        for (ci, &cut) in cuts.iter().enumerate() {
                            let samples: Vec<f64> =
                                values.iter().map(|per_real| per_real[ti][ci][ai]).collect();
                            let (mean, stderr) = mean_stderr(&samples);
                            if mean < -1e-9 {
                                return Err(Error::Numerical(format!(
                                    "negative mean entropy {mean:.3e} at M={m} cut={cut}"
                                )));
                            }
                            per_cut.push(EntropyRecord {
                                experiment: cfg.kind.name().to_string(),
                                s: cfg.particles,
                                m,
                                m_l: cut,
                                alpha,
                                t,
                                realizations: cfg.realizations,
                                entropy_mean: mean,
                                entropy_stderr: stderr,
                                wall_time_s: 0.0,
                            });
                        }
                        if cfg.kind == ExperimentKind::Buildup {
                            // the figure-of-merit is the maximum of the
                            // averaged curve over subsystem sizes; the
                            // record keeps the cut where it is attained
                            let best = per_cut
                                .into_iter()
                                .max_by(|a, b| {
                                    a.entropy_mean
                                        .partial_cmp(&b.entropy_mean)
                                        .unwrap()
                                        .then(b.m_l.cmp(&a.m_l))
                                })
                                .expect("at least one cut");
                            records.push(best);
                        } else {
                            records.extend(per_cut);
                        }
                    }
                }
            }
            if cfg.timings {
                let elapsed = start.elapsed().as_secs_f64();
                for rec in &mut records {
                    rec.wall_time_s = elapsed;
                }
            }
            Ok(records)
        }
    }
}

/// Floating-point CSV formatting: 12 significant digits, scientific.
fn fmt_float(v: f64) -> String {
    format!("{v:.11e}")
}

pub fn write_csv<W: Write>(records: &[EntropyRecord], mut w: W) -> Result<()> {
    writeln!(
        w,
        "experiment,S,M,M_L,alpha,t,realizations,entropy_mean,entropy_stderr,wall_time_s"
    )?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            r.experiment,
            r.s,
            r.m,
            r.m_l,
            r.alpha,
            fmt_float(r.t),
            r.realizations,
            fmt_float(r.entropy_mean),
            fmt_float(r.entropy_stderr),
            fmt_float(r.wall_time_s),
        )?;
    }
    Ok(())
}

pub fn write_json<W: Write>(records: &[EntropyRecord], w: W) -> Result<()> {
    serde_json::to_writer_pretty(w, records).map_err(|e| Error::Config(e.to_string()))
}

// ---------------------------------------------------------------------------
// JSON schemas for matrices and ensembles
// ---------------------------------------------------------------------------

/// Row-major complex matrix as `[re, im]` pairs.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

pub fn matrix_to_json(m: &DMatrix<Complex64>) -> MatrixJson {
    let dim = m.nrows();
    let mut entries = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..m.ncols() {
            entries.push([m[(i, j)].re, m[(i, j)].im]);
        }
    }
    MatrixJson { dim, entries }
}

pub fn matrix_from_json(json: &MatrixJson) -> Result<DMatrix<Complex64>> {
    if json.entries.len() != json.dim * json.dim {
        return Err(Error::Config(format!(
            "matrix JSON: dim {} needs {} entries, found {}",
            json.dim,
            json.dim * json.dim,
            json.entries.len()
        )));
    }
    Ok(DMatrix::from_fn(json.dim, json.dim, |i, j| {
        let [re, im] = json.entries[i * json.dim + j];
        Complex64::new(re, im)
    }))
}

/// Amplitudes and parameter rows of an ensemble as `[re, im]` pairs.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleJson {
    pub particles: u32,
    pub modes: usize,
    pub amplitudes: Vec<[f64; 2]>,
    pub params: Vec<Vec<[f64; 2]>>,
}

pub fn ensemble_to_json(ens: &GCSEnsemble) -> EnsembleJson {
    EnsembleJson {
        particles: ens.particles(),
        modes: ens.modes(),
        amplitudes: ens.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        params: (0..ens.multiplicity())
            .map(|k| {
                (0..ens.modes())
                    .map(|i| {
                        let z = ens.params()[(k, i)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect(),
    }
}

pub fn ensemble_from_json(json: &EnsembleJson) -> Result<GCSEnsemble> {
    let n = json.amplitudes.len();
    if json.params.len() != n || json.params.iter().any(|row| row.len() != json.modes) {
        return Err(Error::Config("ensemble JSON: inconsistent shapes".into()));
    }
    let amplitudes = json
        .amplitudes
        .iter()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    let params = DMatrix::from_fn(n, json.modes, |k, i| {
        let [re, im] = json.params[k][i];
        Complex64::new(re, im)
    });
    GCSEnsemble::from_parts(json.particles, amplitudes, params)
}

// ---------------------------------------------------------------------------
// Validation suite
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub seconds: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub suites: Vec<SuiteReport>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }
}

fn random_complex_matrix(n: usize, seed: u64) -> DMatrix<Complex64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

fn scaled_dev(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

/// Run every cross-check suite. `inject_fault` scales one expansion
/// amplitude by `1 + 1e-3`, which must trip the reconstruction suite.
pub fn run_validate(seed: u64, inject_fault: bool) -> Result<ValidationReport> {
    let mut suites = Vec::new();

    let mut suite = |name: &str, tolerance: f64, dev: Result<f64>, start: Instant| -> Result<()> {
        let max_deviation = dev?;
        suites.push(SuiteReport {
            name: name.to_string(),
            max_deviation,
            tolerance,
            seconds: start.elapsed().as_secs_f64(),
            passed: max_deviation <= tolerance,
        });
        Ok(())
    };

    // three-way permanent agreement
    let start = Instant::now();
    let dev = (|| {
        let mut worst = 0.0f64;
        for (i, n) in (2..=7).cycle().take(60).enumerate() {
            let a = random_complex_matrix(n, mix_seed(seed, i as u64));
            let naive = permanent_naive(&a)?;
            let ryser = permanent_ryser(&a)?;
            let glynn = permanent_glynn(&a)?;
            worst = worst
                .max(scaled_dev(naive, ryser))
                .max(scaled_dev(naive, glynn))
                .max(scaled_dev(ryser, glynn));
        }
        Ok(worst)
    })();
    suite("permanent-threeway", 1e-10, dev, start)?;

    // coherent-state projection identity
    let start = Instant::now();
    let dev = (|| {
        let mut worst = 0.0f64;
        for (i, n) in (2..=6).cycle().take(20).enumerate() {
            let a = random_complex_matrix(n, mix_seed(seed ^ 0xA5A5, i as u64));
            worst = worst.max(scaled_dev(permanent_via_gcs(&a)?, permanent_glynn(&a)?));
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let hom = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(s, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(-s, 0.0),
            ],
        );
        worst = worst.max(permanent_via_gcs(&hom)?.norm() / 1e-3);
        Ok(worst)
    })();
    suite("glynn-projection", 1e-9, dev, start)?;

    // exact reconstruction of every small Fock state
    let start = Instant::now();
    let dev = (|| {
        let mut worst = 0.0f64;
        for m in 1..=4usize {
            for s in 1..=3u32 {
                for f in enumerate_basis(s, m)?.states() {
                    let mut ens = kan_expand_general(f)?;
                    if inject_fault {
                        let mut amps = ens.amplitudes().to_vec();
                        amps[0] *= 1.0 + 1e-3;
                        ens = GCSEnsemble::from_parts(s, amps, ens.params().clone())?;
                    }
                    for g in enumerate_basis(s, m)?.states() {
                        let want = if g == f { 1.0 } else { 0.0 };
                        let got = reconstruct_amplitude(&ens, g)?;
                        worst = worst.max((got - Complex64::new(want, 0.0)).norm());
                    }
                }
            }
        }
        for s in 1..=5u32 {
            let m = s as usize + 2;
            let ens = kan_expand_single_occupancy(s, m)?;
            let f = FockState::single_occupancy(s, m)?;
            for g in enumerate_basis(s, m)?.states() {
                let want = if *g == f { 1.0 } else { 0.0 };
                let got = reconstruct_amplitude(&ens, g)?;
                worst = worst.max((got - Complex64::new(want, 0.0)).norm());
            }
        }
        Ok(worst)
    })();
    suite("kan-reconstruction", 1e-12, dev, start)?;

    // coherent-state path vs Fock-space path
    let start = Instant::now();
    let dev = (|| {
        let mut worst = 0.0f64;
        for (s, m) in [(2u32, 4usize), (3, 5)] {
            for trial in 0..3u64 {
                let u = haar_unitary(m, mix_seed(seed ^ 0x5C5C, trial))?;
                let base = kan_expand_single_occupancy(s, m)?;
                let input = FockState::single_occupancy(s, m)?;
                for &t in &[0.0, 0.5, 1.0] {
                    let w = fractional_power(&u, t)?;
                    let evolved = evolve(&base, &w)?;
                    let oracle = evolve_fock(&u, &input, t)?;
                    for (i, g) in oracle.basis.states().iter().enumerate() {
                        let amp = reconstruct_amplitude(&evolved, g)?;
                        worst = worst.max((amp - oracle.amplitudes[i]).norm());
                    }
                }
            }
        }
        Ok(worst)
    })();
    suite("cross-representation", 1e-9, dev, start)?;

    // entropy equivalence against the Fock partial trace
    let start = Instant::now();
    let dev = (|| {
        let mut worst = 0.0f64;
        for (s, m) in [(2u32, 4usize), (3, 5)] {
            let u = haar_unitary(m, mix_seed(seed ^ 0x3D3D, (s + m as u32) as u64))?;
            let base = kan_expand_single_occupancy(s, m)?;
            let evolved = evolve(&base, &u)?;
            let input = FockState::single_occupancy(s, m)?;
            let oracle_state = evolve_fock(&u, &input, 1.0)?;
            for m_l in 0..=m {
                let ctx = partition_overlaps(&evolved, m_l)?;
                let blocks = reduced_density(&oracle_state, m_l)?;
                let oracle = oracle_entropies(&blocks, &[2, 3])?;
                for (idx, &alpha) in [2u32, 3].iter().enumerate() {
                    let trace = renyi_trace(&ctx, evolved.amplitudes(), s, alpha)?;
                    let entropy = renyi_entropy(trace, alpha)?;
                    worst = worst.max((entropy - oracle.renyi[idx].1).abs());
                }
                let svn = von_neumann_entropy(&ctx, evolved.amplitudes(), s)?;
                worst = worst.max((svn - oracle.von_neumann).abs());
            }
        }
        Ok(worst)
    })();
    suite("entropy-oracle", 1e-8, dev, start)?;

    // matrix-trace form vs literal nested sums
    let start = Instant::now();
    let dev = (|| {
        let mut worst = 0.0f64;
        for (s, m) in [(2u32, 4usize), (3, 6), (4, 6)] {
            let u = haar_unitary(m, mix_seed(seed ^ 0x77AA, (s + m as u32) as u64))?;
            let evolved = evolve(&kan_expand_single_occupancy(s, m)?, &u)?;
            for m_l in [0, m / 2, m] {
                let ctx = partition_overlaps(&evolved, m_l)?;
                for alpha in [2u32, 3] {
                    let fast = renyi_trace(&ctx, evolved.amplitudes(), s, alpha)?;
                    let literal = renyi_trace_literal(&ctx, evolved.amplitudes(), s, alpha)?;
                    worst = worst.max((fast - literal).abs());
                }
            }
        }
        Ok(worst)
    })();
    suite("literal-multiplicity-sum", 1e-10, dev, start)?;

    // closed-form purity from the unitary entries
    let start = Instant::now();
    let dev = (|| {
        let mut worst = 0.0f64;
        for (s, m) in [(3u32, 6usize), (4, 8)] {
            let u = haar_unitary(m, mix_seed(seed ^ 0x1234, (s + m as u32) as u64))?;
            let evolved = evolve(&kan_expand_single_occupancy(s, m)?, &u)?;
            for m_l in 0..=m {
                let ctx = partition_overlaps(&evolved, m_l)?;
                let overlap = renyi_trace(&ctx, evolved.amplitudes(), s, 2)?;
                let closed = purity_closed_form(&u, s, m_l)?;
                worst = worst.max((overlap - closed).abs());
            }
        }
        Ok(worst)
    })();
    suite("purity-closed-form", 1e-8, dev, start)?;

    Ok(ValidationReport { suites })
}
