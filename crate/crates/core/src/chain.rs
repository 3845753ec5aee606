//! Dimensionless single-excitation Hamiltonian of an XX chain with
//! perfect-transfer couplings, static disorder, and end-to-end propagation.
//!
//! Units: all energies and couplings are divided by the largest coupling
//! `J_max`, so the ideal profile peaks at exactly 1 and times are measured in
//! units of `1/J_max`. Evolution is `U(t) = exp(-i H t)` with `H` having
//! `-(ε + η_k)` on the diagonal and `+J_k (1 + ξ_k)` off the diagonal.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{QstError, Result};
use crate::tridiag;

/// Tolerance on |A_N(τ)| below which the zero-disorder chain is declared broken.
pub const IDEAL_AMPLITUDE_TOLERANCE: f64 = 1e-8;

/// Map an angle onto `(-π, π]`.
pub fn wrap_phase(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

fn check_sites(n_sites: usize) -> Result<()> {
    if n_sites < 2 {
        return Err(QstError::InvalidChain { n_sites });
    }
    Ok(())
}

fn central_product(n_sites: usize) -> f64 {
    let k = n_sites / 2;
    (k * (n_sites - k)) as f64
}

/// Normalized perfect-transfer couplings `√(k(N−k)) / √(k*(N−k*))`, `k* = ⌊N/2⌋`.
pub fn pst_couplings(n_sites: usize) -> Result<Vec<f64>> {
    check_sites(n_sites)?;
    let norm = central_product(n_sites).sqrt();
    Ok((1..n_sites)
        .map(|k| ((k * (n_sites - k)) as f64).sqrt() / norm)
        .collect())
}

/// Perfect-transfer time in units of `1/J_max`: `(π/2) √(k*(N−k*))`.
pub fn transfer_time(n_sites: usize) -> Result<f64> {
    check_sites(n_sites)?;
    Ok(FRAC_PI_2 * central_product(n_sites).sqrt())
}

/// A disorder-free chain: site count, base energy, coupling profile and the
/// time at which the state is read out.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    n_sites: usize,
    base_energy: f64,
    couplings: Vec<f64>,
    readout_time: f64,
}

impl ChainSpec {
    /// Perfect-transfer chain with zero base energy.
    pub fn pst(n_sites: usize) -> Result<Self> {
        Ok(Self {
            n_sites,
            base_energy: 0.0,
            couplings: pst_couplings(n_sites)?,
            readout_time: transfer_time(n_sites)?,
        })
    }

    /// Arbitrary coupling profile read out at `readout_time`.
    pub fn with_profile(couplings: Vec<f64>, readout_time: f64) -> Result<Self> {
        let n_sites = couplings.len() + 1;
        check_sites(n_sites)?;
        if !(readout_time.is_finite() && readout_time >= 0.0) {
            return Err(QstError::domain(format!(
                "readout time must be finite and >= 0, got {readout_time}"
            )));
        }
        if couplings.iter().any(|j| !j.is_finite()) {
            return Err(QstError::domain("couplings must be finite"));
        }
        Ok(Self {
            n_sites,
            base_energy: 0.0,
            couplings,
            readout_time,
        })
    }

    pub fn with_base_energy(mut self, base_energy: f64) -> Self {
        self.base_energy = base_energy;
        self
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn base_energy(&self) -> f64 {
        self.base_energy
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    /// `J̃₀ = 1/√(k*(N−k*))`, the prefactor of the normalized profile.
    pub fn coupling_scale(&self) -> f64 {
        1.0 / central_product(self.n_sites).sqrt()
    }

    pub fn readout_time(&self) -> f64 {
        self.readout_time
    }

    pub fn ideal_hamiltonian(&self) -> RealizedHamiltonian {
        RealizedHamiltonian {
            diag: vec![-self.base_energy; self.n_sites],
            offdiag: self.couplings.clone(),
        }
    }
}

/// Standard deviations of the diagonal (`η_k`) and relative off-diagonal
/// (`ξ_k`) Gaussian noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisorderSpec {
    pub sigma_eta: f64,
    pub sigma_xi: f64,
}

impl DisorderSpec {
    pub fn new(sigma_eta: f64, sigma_xi: f64) -> Result<Self> {
        for (name, v) in [("sigma_eta", sigma_eta), ("sigma_xi", sigma_xi)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(QstError::domain(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(Self {
            sigma_eta,
            sigma_xi,
        })
    }

    pub fn none() -> Self {
        Self {
            sigma_eta: 0.0,
            sigma_xi: 0.0,
        }
    }
}

/// One sample of the disordered tridiagonal Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizedHamiltonian {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl RealizedHamiltonian {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        check_sites(diag.len())?;
        if offdiag.len() + 1 != diag.len() {
            return Err(QstError::domain(format!(
                "tridiagonal shape mismatch: {} diagonal vs {} off-diagonal entries",
                diag.len(),
                offdiag.len()
            )));
        }
        if diag.iter().chain(&offdiag).any(|x| !x.is_finite()) {
            return Err(QstError::domain("Hamiltonian entries must be finite"));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn n_sites(&self) -> usize {
        self.diag.len()
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.n_sites();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = self.diag[i];
            if i + 1 < n {
                m[i][i + 1] = self.offdiag[i];
                m[i + 1][i] = self.offdiag[i];
            }
        }
        m
    }
}

/// Draw one disorder realization.
///
/// Consumes exactly `2N − 1` standard-normal draws from `stream`: all `η_k`
/// in ascending `k`, then all `ξ_k` in ascending `k`. Couplings whose sign
/// flips (`ξ_k < −1`) are kept.
pub fn realize_disorder<R: Rng + ?Sized>(
    spec: &ChainSpec,
    noise: &DisorderSpec,
    stream: &mut R,
) -> RealizedHamiltonian {
    let diag = (0..spec.n_sites)
        .map(|_| {
            let z: f64 = StandardNormal.sample(stream);
            -(spec.base_energy + noise.sigma_eta * z)
        })
        .collect();
    let offdiag = spec
        .couplings
        .iter()
        .map(|&j| {
            let z: f64 = StandardNormal.sample(stream);
            j * (1.0 + noise.sigma_xi * z)
        })
        .collect();
    RealizedHamiltonian { diag, offdiag }
}

/// Full eigensystem, eigenvalues ascending; `eigenvectors[m]` belongs to `eigenvalues[m]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
}

impl SpectralDecomposition {
    pub fn n_sites(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `⟨to|exp(−iHt)|from⟩` (0-based site indices).
    pub fn propagator_element(&self, to: usize, from: usize, t: f64) -> Complex64 {
        self.eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .map(|(&lambda, v)| v[to] * v[from] * Complex64::cis(-lambda * t))
            .sum()
    }

    /// Column `from` of `exp(−iHt)`: the state reached from a single excitation on `from`.
    pub fn evolve_site(&self, from: usize, t: f64) -> Vec<Complex64> {
        (0..self.n_sites())
            .map(|to| self.propagator_element(to, from, t))
            .collect()
    }

    /// `Σ_m λ_m v_m v_mᵀ` as a dense matrix.
    pub fn reconstruct(&self) -> Vec<Vec<f64>> {
        let n = self.n_sites();
        let mut m = vec![vec![0.0; n]; n];
        for (&lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            for i in 0..n {
                for j in 0..n {
                    m[i][j] += lambda * v[i] * v[j];
                }
            }
        }
        m
    }
}

pub fn eigendecompose(h: &RealizedHamiltonian) -> Result<SpectralDecomposition> {
    let n = h.n_sites();
    let sites: Vec<usize> = (0..n).collect();
    let (eigenvalues, rows) = tridiag::ql_implicit(&h.diag, &h.offdiag, &sites)?;
    // rows[i][m] is component i of eigenvector m; transpose to one vector per eigenvalue.
    let eigenvectors = (0..n)
        .map(|m| rows.iter().map(|row| row[m]).collect())
        .collect();
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn check_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(QstError::domain(format!(
            "time must be finite and >= 0, got {t}"
        )));
    }
    Ok(())
}

/// `A_N(t) = ⟨N|exp(−iHt)|1⟩ = Σ_m v_m[N] v_m[1] e^{−iλ_m t}`.
///
/// Only the first and last eigenvector components are accumulated.
pub fn transfer_amplitude(h: &RealizedHamiltonian, t: f64) -> Result<Complex64> {
    check_time(t)?;
    let n = h.n_sites();
    let (eigenvalues, rows) = tridiag::ql_implicit(&h.diag, &h.offdiag, &[0, n - 1])?;
    let (first, last) = (&rows[0], &rows[1]);
    Ok(eigenvalues
        .iter()
        .zip(first.iter().zip(last))
        .map(|(&lambda, (&a, &b))| a * b * Complex64::cis(-lambda * t))
        .sum())
}

/// Transfer probability and phase extracted from `A_N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferOutcome {
    pub amplitude: Complex64,
    pub p: f64,
    pub phi: f64,
    pub delta_phi: f64,
}

impl TransferOutcome {
    /// Split `amplitude` into `p = |A|²` and phases; `ideal_phase` is `φ₀`.
    pub fn from_amplitude(amplitude: Complex64, ideal_phase: f64) -> Self {
        let phi = amplitude.arg();
        Self {
            amplitude,
            p: amplitude.norm_sqr().min(1.0),
            phi: wrap_phase(phi),
            delta_phi: wrap_phase(phi - ideal_phase),
        }
    }
}

pub fn transfer_outcome(
    h: &RealizedHamiltonian,
    t: f64,
    ideal_phase: f64,
) -> Result<TransferOutcome> {
    Ok(TransferOutcome::from_amplitude(
        transfer_amplitude(h, t)?,
        ideal_phase,
    ))
}

/// `φ₀ = arg A_N(τ)` of the disorder-free chain, measured numerically.
pub fn ideal_phase(spec: &ChainSpec) -> Result<f64> {
    let amp = transfer_amplitude(&spec.ideal_hamiltonian(), spec.readout_time)?;
    let modulus = amp.norm();
    if modulus < 1.0 - IDEAL_AMPLITUDE_TOLERANCE {
        return Err(QstError::Consistency(format!(
            "zero-disorder chain with N={} reaches |A_N| = {modulus} at t = {}; expected 1",
            spec.n_sites, spec.readout_time
        )));
    }
    Ok(wrap_phase(amp.arg()))
}
