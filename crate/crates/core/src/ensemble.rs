//! Monte Carlo over static-disorder realizations and the statistics built on top.
//!
//! Realization `i` draws from its own ChaCha8 stream seeded with
//! [`stream_seed`]`(master_seed, i)`, so results do not depend on how the work
//! is split across threads. Aggregation always runs in index order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chain::{ideal_phase, realize_disorder, transfer_outcome, ChainSpec, DisorderSpec};
use crate::error::{QstError, Result};
use crate::fidelity::{
    fidelity_avg, min_from_coefficients, FidelityCoefficients, CLASSICAL_THRESHOLD,
    DEGENERACY_THRESHOLD,
};
use crate::histogram::Histogram;

pub const DEFAULT_REALIZATIONS: usize = 1000;
pub const DEFAULT_BIN_WIDTH: f64 = 0.01;
pub const DEFAULT_EPSILON: f64 = 1e-2;
/// Input weights singled out in the histogram panels.
pub const FEATURED_BETA2: [f64; 5] = [1.0, 0.8, 0.6, 0.5, 0.4];

/// `{0, 0.1, …, 1.0}`; it already contains every featured weight.
pub fn default_beta2_grid() -> Vec<f64> {
    let mut grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    for b in FEATURED_BETA2 {
        if !grid.contains(&b) {
            grid.push(b);
        }
    }
    grid.sort_by(f64::total_cmp);
    grid
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of realization `index`: the `(index + 1)`-th output of a SplitMix64
/// generator started at `master_seed`.
pub fn stream_seed(master_seed: u64, index: usize) -> u64 {
    mix64(master_seed.wrapping_add((index as u64).wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

pub fn realization_stream(master_seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(master_seed, index))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleConfig {
    pub chain: ChainSpec,
    pub noise: DisorderSpec,
    pub realizations: usize,
    pub beta2_grid: Vec<f64>,
    pub master_seed: u64,
    pub histogram_bin_width: f64,
    /// Tolerance of the `p ≈ F_min` window.
    pub epsilon: f64,
}

impl EnsembleConfig {
    pub fn new(chain: ChainSpec, noise: DisorderSpec) -> Self {
        Self {
            chain,
            noise,
            realizations: DEFAULT_REALIZATIONS,
            beta2_grid: default_beta2_grid(),
            master_seed: 0,
            histogram_bin_width: DEFAULT_BIN_WIDTH,
            epsilon: DEFAULT_EPSILON,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(QstError::domain("need at least one realization"));
        }
        if let Some(b) = self.beta2_grid.iter().find(|b| !(0.0..=1.0).contains(*b)) {
            return Err(QstError::domain(format!(
                "beta2 grid value {b} outside [0, 1]"
            )));
        }
        if !(self.epsilon > 0.0) {
            return Err(QstError::domain(format!(
                "epsilon must be > 0, got {}",
                self.epsilon
            )));
        }
        Histogram::empty(self.histogram_bin_width)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealizationRecord {
    pub index: usize,
    pub p: f64,
    pub delta_phi: f64,
    pub f_avg: f64,
    /// `F_ψ` for each entry of the configured `beta2_grid`.
    pub f_psi: Vec<f64>,
    pub f_min: f64,
}

impl RealizationRecord {
    /// Evaluate every fidelity for a given `(p, Δφ)`.
    pub fn from_transfer(index: usize, p: f64, delta_phi: f64, beta2_grid: &[f64]) -> Result<Self> {
        let c = FidelityCoefficients::new(p, delta_phi)?;
        Ok(Self {
            index,
            p,
            delta_phi,
            f_avg: fidelity_avg(p, delta_phi)?,
            f_psi: beta2_grid.iter().map(|&x| c.eval(x)).collect(),
            f_min: min_from_coefficients(&c, delta_phi).f_min,
        })
    }

    fn coefficients(&self) -> FidelityCoefficients {
        FidelityCoefficients::new(self.p, self.delta_phi)
            .expect("records hold p in [0, 1] and finite phases")
    }
}

fn simulate_one(config: &EnsembleConfig, phi0: f64, index: usize) -> Result<RealizationRecord> {
    let seed = stream_seed(config.master_seed, index);
    let mut stream = ChaCha8Rng::seed_from_u64(seed);
    let h = realize_disorder(&config.chain, &config.noise, &mut stream);
    let outcome = transfer_outcome(&h, config.chain.readout_time(), phi0).map_err(|e| {
        QstError::Realization {
            index,
            seed,
            source: Box::new(e),
        }
    })?;
    RealizationRecord::from_transfer(index, outcome.p, outcome.delta_phi, &config.beta2_grid)
}

/// Simulate every realization on the current rayon pool; records come back in index order.
pub fn run_ensemble(config: &EnsembleConfig) -> Result<Vec<RealizationRecord>> {
    config.validate()?;
    let phi0 = ideal_phase(&config.chain)?;
    let results: Vec<Result<RealizationRecord>> = (0..config.realizations)
        .into_par_iter()
        .map(|i| simulate_one(config, phi0, i))
        .collect();
    // Report the lowest failing index, whatever the scheduling was.
    results.into_iter().collect()
}

/// [`run_ensemble`] on a dedicated pool of `workers` threads.
pub fn run_ensemble_with_workers(
    config: &EnsembleConfig,
    workers: usize,
) -> Result<Vec<RealizationRecord>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| QstError::ThreadPool(e.to_string()))?;
    pool.install(|| run_ensemble(config))
}

/// Sample mean and standard deviation (`M − 1` denominator; 0 for a single sample).
pub fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let (n, sum) = values
        .clone()
        .fold((0usize, 0.0), |(n, s), v| (n + 1, s + v));
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = sum / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1) as f64).sqrt())
}

fn fraction(records: &[RealizationRecord], pred: impl Fn(&RealizationRecord) -> bool) -> f64 {
    records.iter().filter(|r| pred(r)).count() as f64 / records.len() as f64
}

/// Where the ensemble-mean `⟨F_ψ⟩(x)` drops below a reference fidelity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    /// Root `B^(c)` in `[0, 1]`, the smaller one if there are two.
    pub root: Option<f64>,
    /// `1 − root`, or 0 without a root.
    pub delta: f64,
    /// Two distinct roots fell inside `[0, 1]`.
    pub multiple_roots: bool,
}

impl Crossing {
    fn from_roots(roots: &[f64]) -> Self {
        match roots.first() {
            Some(&r) => Self {
                root: Some(r),
                delta: 1.0 - r,
                multiple_roots: roots.len() > 1,
            },
            None => Self {
                root: None,
                delta: 0.0,
                multiple_roots: false,
            },
        }
    }
}

/// Crossings of `⟨F_ψ⟩` with `⟨F̄⟩` (index 0) and with the classical threshold (index 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaIntervals {
    pub against_average: Crossing,
    pub against_classical: Crossing,
}

impl DeltaIntervals {
    pub fn delta_0(&self) -> f64 {
        self.against_average.delta
    }

    pub fn delta_1(&self) -> f64 {
        self.against_classical.delta
    }
}

/// Distinct real roots of `a x² + b x + c` inside `[0, 1]`, ascending.
///
/// A polynomial whose coefficients are all negligible is treated as having
/// no crossing.
fn unit_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let tiny = DEGENERACY_THRESHOLD;
    let mut roots = Vec::with_capacity(2);
    if a.abs() <= tiny {
        if b.abs() > tiny {
            roots.push(-c / b);
        }
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc >= 0.0 {
            let q = -0.5 * (b + b.signum() * disc.sqrt());
            if q != 0.0 {
                roots.push(q / a);
                roots.push(c / q);
            } else {
                // b = 0 and c = 0
                roots.push(0.0);
            }
        }
    }
    roots.retain(|x| (0.0..=1.0).contains(x));
    roots.sort_by(f64::total_cmp);
    roots.dedup();
    roots
}

/// Solve `1 + ⟨c₁⟩x + ⟨c₂⟩x² = reference` for both references.
pub fn crossings_from_means(mean_c1: f64, mean_c2: f64, mean_f_avg: f64) -> DeltaIntervals {
    DeltaIntervals {
        against_average: Crossing::from_roots(&unit_roots(mean_c2, mean_c1, 1.0 - mean_f_avg)),
        against_classical: Crossing::from_roots(&unit_roots(
            mean_c2,
            mean_c1,
            1.0 - CLASSICAL_THRESHOLD,
        )),
    }
}

/// `Δ₀`, `Δ₁` from the ensemble means of `c₁`, `c₂` and `F̄`.
pub fn delta_intervals(records: &[RealizationRecord]) -> Result<DeltaIntervals> {
    if records.is_empty() {
        return Err(QstError::domain("delta intervals need at least one record"));
    }
    let m = records.len() as f64;
    let (mut c1, mut c2, mut f_avg) = (0.0, 0.0, 0.0);
    for r in records {
        let c = r.coefficients();
        c1 += c.c1;
        c2 += c.c2;
        f_avg += r.f_avg;
    }
    Ok(crossings_from_means(c1 / m, c2 / m, f_avg / m))
}

fn check_epsilon(records: &[RealizationRecord], epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0) {
        return Err(QstError::domain(format!(
            "epsilon must be > 0, got {epsilon}"
        )));
    }
    if records.is_empty() {
        return Err(QstError::domain(
            "probability window needs at least one record",
        ));
    }
    Ok(())
}

/// Fraction of records with `p > ½` and `|p − F_min| < ε`.
pub fn prob_window(records: &[RealizationRecord], epsilon: f64) -> Result<f64> {
    check_epsilon(records, epsilon)?;
    Ok(fraction(records, |r| {
        r.p > 0.5 && (r.p - r.f_min).abs() < epsilon
    }))
}

/// Fraction of records with `p > ½` and `|F̄ − F_min| < ε`.
pub fn prob_window_average(records: &[RealizationRecord], epsilon: f64) -> Result<f64> {
    check_epsilon(records, epsilon)?;
    Ok(fraction(records, |r| {
        r.p > 0.5 && (r.f_avg - r.f_min).abs() < epsilon
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    /// `F_ψ` at a given `|β|²`.
    InputFidelity(f64),
    AverageFidelity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackedHistogram {
    pub quantity: Quantity,
    pub histogram: Histogram,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    pub realizations: usize,
    pub mean_p: f64,
    pub std_p: f64,
    pub mean_f_avg: f64,
    pub std_f_avg: f64,
    pub fail_prob_f_avg: f64,
    pub beta2_grid: Vec<f64>,
    pub mean_f_psi: Vec<f64>,
    pub std_f_psi: Vec<f64>,
    pub fail_prob_f_psi: Vec<f64>,
    pub mean_f_min: f64,
    pub std_f_min: f64,
    /// One histogram per `beta2_grid` entry, then one for `F̄`.
    pub histograms: Vec<TrackedHistogram>,
    pub deltas: DeltaIntervals,
    pub epsilon: f64,
    pub prob_window: f64,
    pub prob_window_average: f64,
}

impl EnsembleStats {
    pub fn delta_0(&self) -> f64 {
        self.deltas.delta_0()
    }

    pub fn delta_1(&self) -> f64 {
        self.deltas.delta_1()
    }
}

/// Means, standard deviations, failure probabilities (fidelity below 2/3),
/// histograms, crossing intervals and the probability window.
pub fn aggregate(records: &[RealizationRecord], config: &EnsembleConfig) -> Result<EnsembleStats> {
    if records.is_empty() {
        return Err(QstError::domain("cannot aggregate an empty record list"));
    }
    let grid = &config.beta2_grid;
    if let Some(r) = records.iter().find(|r| r.f_psi.len() != grid.len()) {
        return Err(QstError::domain(format!(
            "record {} has {} input fidelities for a grid of {}",
            r.index,
            r.f_psi.len(),
            grid.len()
        )));
    }

    let (mean_p, std_p) = mean_std(records.iter().map(|r| r.p));
    let (mean_f_avg, std_f_avg) = mean_std(records.iter().map(|r| r.f_avg));
    let (mean_f_min, std_f_min) = mean_std(records.iter().map(|r| r.f_min));

    let mut mean_f_psi = Vec::with_capacity(grid.len());
    let mut std_f_psi = Vec::with_capacity(grid.len());
    let mut fail_prob_f_psi = Vec::with_capacity(grid.len());
    let mut histograms = Vec::with_capacity(grid.len() + 1);
    for (j, &beta2) in grid.iter().enumerate() {
        let (m, s) = mean_std(records.iter().map(|r| r.f_psi[j]));
        mean_f_psi.push(m);
        std_f_psi.push(s);
        fail_prob_f_psi.push(fraction(records, |r| r.f_psi[j] < CLASSICAL_THRESHOLD));
        let mut h = Histogram::empty(config.histogram_bin_width)?;
        for r in records {
            h.add(r.f_psi[j])?;
        }
        histograms.push(TrackedHistogram {
            quantity: Quantity::InputFidelity(beta2),
            histogram: h,
        });
    }
    let mut h = Histogram::empty(config.histogram_bin_width)?;
    for r in records {
        h.add(r.f_avg)?;
    }
    histograms.push(TrackedHistogram {
        quantity: Quantity::AverageFidelity,
        histogram: h,
    });

    Ok(EnsembleStats {
        realizations: records.len(),
        mean_p,
        std_p,
        mean_f_avg,
        std_f_avg,
        fail_prob_f_avg: fraction(records, |r| r.f_avg < CLASSICAL_THRESHOLD),
        beta2_grid: grid.clone(),
        mean_f_psi,
        std_f_psi,
        fail_prob_f_psi,
        mean_f_min,
        std_f_min,
        histograms,
        deltas: delta_intervals(records)?,
        epsilon: config.epsilon,
        prob_window: prob_window(records, config.epsilon)?,
        prob_window_average: prob_window_average(records, config.epsilon)?,
    })
}

/// Run and aggregate in one go.
pub fn simulate(config: &EnsembleConfig) -> Result<(Vec<RealizationRecord>, EnsembleStats)> {
    let records = run_ensemble(config)?;
    let stats = aggregate(&records, config)?;
    Ok((records, stats))
}
