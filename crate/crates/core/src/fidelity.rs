//! Closed-form fidelities of the received qubit.
//!
//! For an input `α|0⟩ + β|1⟩` and transfer amplitude `√p e^{iΔφ}` (after the
//! ideal phase is compensated), the single-realization fidelity is the
//! quadratic `F(x) = 1 + c₁x + c₂x²` in `x = |β|²` with
//!
//! ```text
//! c₁ = −1 − p + 2√p cos Δφ
//! c₂ = 2p − 2√p cos Δφ
//! ```
//!
//! Phases are accepted on all of ℝ and wrapped internally.

use crate::chain::wrap_phase;
use crate::error::{QstError, Result};

/// Fidelity achievable by measure-and-resend without quantum resources.
pub const CLASSICAL_THRESHOLD: f64 = 2.0 / 3.0;

/// `|c₂|` at or below this is treated as linear (or constant) in `|β|²`.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// Largest negative round-off that is silently clamped to zero.
const CLAMP_TOLERANCE: f64 = 1e-12;

pub fn classical_threshold() -> f64 {
    CLASSICAL_THRESHOLD
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(QstError::domain(format!(
            "{name} must lie in [0, 1], got {v}"
        )));
    }
    Ok(())
}

fn check_phase(delta_phi: f64) -> Result<()> {
    if !delta_phi.is_finite() {
        return Err(QstError::domain(format!(
            "phase must be finite, got {delta_phi}"
        )));
    }
    Ok(())
}

fn clamp_roundoff(v: f64) -> f64 {
    if v < 0.0 && v > -CLAMP_TOLERANCE {
        0.0
    } else {
        v
    }
}

/// Coefficients of `F(x) = 1 + c₁x + c₂x²` for one realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityCoefficients {
    pub p: f64,
    pub c1: f64,
    pub c2: f64,
}

impl FidelityCoefficients {
    pub fn new(p: f64, delta_phi: f64) -> Result<Self> {
        check_unit("p", p)?;
        check_phase(delta_phi)?;
        let overlap = p.sqrt() * wrap_phase(delta_phi).cos();
        Ok(Self {
            p,
            c1: -1.0 - p + 2.0 * overlap,
            c2: 2.0 * p - 2.0 * overlap,
        })
    }

    /// `F(x)`, written as `(1 − x) + x p − c₂ x(1 − x)` so that `F(0) = 1`
    /// and `F(1) = p` hold exactly in floating point.
    pub fn eval(&self, x: f64) -> f64 {
        let one_minus = 1.0 - x;
        clamp_roundoff(one_minus + x * self.p - self.c2 * x * one_minus)
    }

    /// `dF/dx = c₁ + 2c₂x`.
    pub fn slope(&self, x: f64) -> f64 {
        self.c1 + 2.0 * self.c2 * x
    }

    pub fn is_degenerate(&self) -> bool {
        self.c2.abs() <= DEGENERACY_THRESHOLD
    }
}

/// A single-realization fidelity evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityPoint {
    pub beta2: f64,
    pub p: f64,
    pub delta_phi: f64,
    pub value: f64,
}

impl FidelityPoint {
    pub fn evaluate(beta2: f64, p: f64, delta_phi: f64) -> Result<Self> {
        Ok(Self {
            beta2,
            p,
            delta_phi: wrap_phase(delta_phi),
            value: fidelity_input(beta2, p, delta_phi)?,
        })
    }
}

/// Single-realization fidelity `F_ψ(|β|², p, Δφ)`.
pub fn fidelity_input(beta2: f64, p: f64, delta_phi: f64) -> Result<f64> {
    check_unit("beta2", beta2)?;
    Ok(FidelityCoefficients::new(p, delta_phi)?.eval(beta2))
}

/// Input-averaged fidelity `½ + p/6 + √p cos(Δφ)/3`.
pub fn fidelity_avg(p: f64, delta_phi: f64) -> Result<f64> {
    check_unit("p", p)?;
    check_phase(delta_phi)?;
    Ok(0.5 + p / 6.0 + p.sqrt() * wrap_phase(delta_phi).cos() / 3.0)
}

/// Stationary point `B* = (1 + p − 2√p cos Δφ) / (4[p − √p cos Δφ])` of `F_ψ`
/// in `|β|²`, or `None` when `F_ψ` is linear or constant there.
pub fn b_star(p: f64, delta_phi: f64) -> Result<Option<f64>> {
    let c = FidelityCoefficients::new(p, delta_phi)?;
    if c.is_degenerate() {
        return Ok(None);
    }
    Ok(Some(-c.c1 / (2.0 * c.c2)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinFidelityResult {
    pub f_min: f64,
    pub argmin_beta2: f64,
    /// True when the minimum sits at the interior stationary point `B*`.
    pub interior: bool,
}

/// Minimum of `F_ψ` over all pure inputs.
pub fn fidelity_min(p: f64, delta_phi: f64) -> Result<MinFidelityResult> {
    let c = FidelityCoefficients::new(p, delta_phi)?;
    Ok(min_from_coefficients(&c, wrap_phase(delta_phi)))
}

pub(crate) fn min_from_coefficients(c: &FidelityCoefficients, delta_phi: f64) -> MinFidelityResult {
    let boundary = MinFidelityResult {
        f_min: c.p,
        argmin_beta2: 1.0,
        interior: false,
    };
    if c.is_degenerate() {
        // Linear in x with F(0) = 1 >= F(1) = p; the constant case also reports x = 1.
        return boundary;
    }
    // A concave quadratic (c₂ < 0) is minimized on the boundary.
    if c.c2 > 0.0 {
        let b = -c.c1 / (2.0 * c.c2);
        if (0.0..=1.0).contains(&b) {
            let overlap = c.p.sqrt() * delta_phi.cos();
            let f = 0.5 + overlap / 2.0 - (1.0 - c.p).powi(2) / (8.0 * (c.p - overlap));
            return MinFidelityResult {
                f_min: clamp_roundoff(f),
                argmin_beta2: b,
                interior: true,
            };
        }
    }
    boundary
}

/// The three analytic maps over a `(p, Δφ)` grid, indexed `[p][Δφ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FminMaps {
    pub p_grid: Vec<f64>,
    pub delta_phi_grid: Vec<f64>,
    pub argmin_beta2: Vec<Vec<f64>>,
    pub fmin_minus_p: Vec<Vec<f64>>,
    pub fmin_minus_favg: Vec<Vec<f64>>,
}

/// Evaluate minimizer, `F_min − p` and `F_min − F̄` over the grid.
///
/// Phases must lie in `[−π, π]`. Negative phases are evaluated at `|Δφ|`,
/// so the maps are mirror-symmetric about `Δφ = 0` by construction.
pub fn fmin_maps(p_grid: &[f64], delta_phi_grid: &[f64]) -> Result<FminMaps> {
    if p_grid.is_empty() || delta_phi_grid.is_empty() {
        return Err(QstError::domain(
            "fmin maps need non-empty p and phase grids",
        ));
    }
    use std::f64::consts::PI;
    for &phi in delta_phi_grid {
        if !(-PI..=PI).contains(&phi) {
            return Err(QstError::domain(format!(
                "phase grid value {phi} outside [-pi, pi]"
            )));
        }
    }
    let mut argmin = Vec::with_capacity(p_grid.len());
    let mut minus_p = Vec::with_capacity(p_grid.len());
    let mut minus_avg = Vec::with_capacity(p_grid.len());
    for &p in p_grid {
        let mut a = Vec::with_capacity(delta_phi_grid.len());
        let mut mp = Vec::with_capacity(delta_phi_grid.len());
        let mut ma = Vec::with_capacity(delta_phi_grid.len());
        for &phi in delta_phi_grid {
            let mirrored = phi.abs();
            let m = fidelity_min(p, mirrored)?;
            a.push(m.argmin_beta2);
            mp.push(m.f_min - p);
            ma.push(m.f_min - fidelity_avg(p, mirrored)?);
        }
        argmin.push(a);
        minus_p.push(mp);
        minus_avg.push(ma);
    }
    Ok(FminMaps {
        p_grid: p_grid.to_vec(),
        delta_phi_grid: delta_phi_grid.to_vec(),
        argmin_beta2: argmin,
        fmin_minus_p: minus_p,
        fmin_minus_favg: minus_avg,
    })
}
