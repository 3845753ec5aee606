//! Independent reference computations used only by the test suites.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub type CMatrix = Vec<Vec<Complex64>>;

fn zeros(n: usize) -> CMatrix {
    vec![vec![Complex64::new(0.0, 0.0); n]; n]
}

fn identity(n: usize) -> CMatrix {
    let mut m = zeros(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let n = a.len();
    let mut c = zeros(n);
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

fn norm1(a: &CMatrix) -> f64 {
    let n = a.len();
    (0..n)
        .map(|j| (0..n).map(|i| a[i][j].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(A)` by scaling and squaring with a truncated Taylor series.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.len();
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm1(a) * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let scaled: CMatrix = a
        .iter()
        .map(|row| row.iter().map(|z| z * scale).collect())
        .collect();

    let mut result = identity(n);
    let mut term = identity(n);
    for k in 1..40 {
        term = matmul(&term, &scaled);
        let inv = 1.0 / k as f64;
        for row in term.iter_mut() {
            for z in row.iter_mut() {
                *z *= inv;
            }
        }
        for i in 0..n {
            for j in 0..n {
                result[i][j] += term[i][j];
            }
        }
        if norm1(&term) < 1e-20 {
            break;
        }
    }
    for _ in 0..squarings {
        result = matmul(&result, &result);
    }
    result
}

/// Dense `exp(−iHt)` for a real symmetric `H`.
pub fn propagator(h: &[Vec<f64>], t: f64) -> CMatrix {
    let a: CMatrix = h
        .iter()
        .map(|row| row.iter().map(|&x| Complex64::new(0.0, -x * t)).collect())
        .collect();
    expm(&a)
}

/// `⟨ψ|ρ|ψ⟩` with `ρ` the received single-qubit state for input
/// `α|0⟩ + β|1⟩` and transfer amplitude `a`.
pub fn density_matrix_fidelity(alpha: Complex64, beta: Complex64, a: Complex64) -> f64 {
    let b2 = beta.norm_sqr();
    let p = a.norm_sqr();
    // ρ in the {|0⟩, |1⟩} basis
    let r00 = Complex64::new(1.0 - b2 * p, 0.0);
    let r11 = Complex64::new(b2 * p, 0.0);
    let r01 = alpha * beta.conj() * a.conj();
    let r10 = alpha.conj() * beta * a;
    let psi = [alpha, beta];
    let rho = [[r00, r01], [r10, r11]];
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            acc += psi[i].conj() * rho[i][j] * psi[j];
        }
    }
    acc.re
}

/// Uniformly (Haar) random pure qubit state via a normalized complex Gaussian vector.
pub fn haar_qubit<R: Rng + ?Sized>(rng: &mut R) -> (Complex64, Complex64) {
    let mut g = || -> f64 { StandardNormal.sample(rng) };
    let a = Complex64::new(g(), g());
    let b = Complex64::new(g(), g());
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    (a / norm, b / norm)
}

/// Minimum of `f` on the uniform grid `0, step, …, 1`.
pub fn grid_min(f: impl Fn(f64) -> f64, step: f64) -> (f64, f64) {
    let n = (1.0 / step).round() as usize;
    let mut best = (f64::INFINITY, 0.0);
    for i in 0..=n {
        let x = i as f64 * step;
        let v = f(x);
        if v < best.0 {
            best = (v, x);
        }
    }
    best
}

/// Plain quadratic evaluation, independent of the library's exact-boundary form.
pub fn quadratic_fidelity(x: f64, p: f64, delta_phi: f64) -> f64 {
    let s = p.sqrt() * delta_phi.cos();
    1.0 + x * (-1.0 - p + 2.0 * s) + x * x * (2.0 * p - 2.0 * s)
}
