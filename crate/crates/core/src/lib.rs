//! Quantum state transfer through disordered XX spin chains.
//!
//! A qubit `α|0⟩ + β|1⟩` placed on the first site of a chain with
//! perfect-transfer couplings `J_k ∝ √(k(N−k))` arrives at the last site with
//! amplitude `A_N = √p e^{iφ}`. Static Gaussian disorder on site energies and
//! couplings randomizes `(p, Δφ)`; this crate simulates ensembles of such
//! realizations and compares the single-realization fidelity `F_ψ`, the
//! input-averaged fidelity `F̄`, the worst-case fidelity `F_min` and the
//! transfer probability `p`.
//!
//! - [`chain`]: Hamiltonian, disorder, exact propagation.
//! - [`fidelity`]: closed-form fidelity algebra.
//! - [`ensemble`]: reproducible parallel Monte Carlo and its statistics.
//! - [`config`], [`commands`], [`table`]: the experiment driver behind the CLI.

pub mod chain;
pub mod commands;
pub mod config;
pub mod ensemble;
mod error;
pub mod fidelity;
pub mod histogram;
pub mod table;
mod tridiag;

pub use chain::{
    eigendecompose, ideal_phase, pst_couplings, realize_disorder, transfer_amplitude,
    transfer_outcome, transfer_time, wrap_phase, ChainSpec, DisorderSpec, RealizedHamiltonian,
    SpectralDecomposition, TransferOutcome,
};
pub use ensemble::{
    aggregate, delta_intervals, prob_window, prob_window_average, run_ensemble,
    run_ensemble_with_workers, simulate, EnsembleConfig, EnsembleStats, RealizationRecord,
};
pub use error::{QstError, Result};
pub use fidelity::{
    b_star, classical_threshold, fidelity_avg, fidelity_input, fidelity_min, fmin_maps,
    FidelityPoint, MinFidelityResult, CLASSICAL_THRESHOLD,
};
pub use histogram::{histogram, Histogram};
pub use tridiag::MAX_QL_ITERATIONS;
