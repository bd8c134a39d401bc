//! Spectral data of the qubit's reduced density matrix and its geometric
//! phase over one quasi period.
//!
//! The reduced state in the `(|e>, |g>)` basis is
//!
//! ```text
//! rho(t) = [ cos^2(beta/2)              sin(beta) |F(t)| e^{-i eta t} / 2 ]
//!          [ sin(beta) |F(t)| e^{i eta t} / 2        sin^2(beta/2)       ]
//! ```
//!
//! Because the smaller eigenvalue vanishes at `t = 0`, only the larger
//! branch contributes and the phase reduces to
//! `Phi = eta * int_0^T sin^2(beta_+(t) / 2) dt`. [`geometric_phase`]
//! evaluates that integral; [`geometric_phase_general`] evaluates the full
//! weighted-overlap definition with both branches as an independent check.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use crate::chain::ModelParams;
use crate::decoherence::DecoherenceKernel;
use crate::error::{Error, Result};
use crate::quadrature;

/// Eigen-decomposition of the reduced density matrix at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralData {
    pub eps_plus: f64,
    pub eps_minus: f64,
    /// Polar angle of the eigenvector belonging to `eps_plus`.
    pub beta_plus: f64,
}

impl SpectralData {
    /// `sin^2(beta_+ / 2)`, the integrand of the geometric phase.
    pub fn weight(&self) -> f64 {
        let s = (0.5 * self.beta_plus).sin();
        s * s
    }
}

/// Eigenvalues and eigenvector angle for initial angle `beta` and
/// decoherence modulus `fmod`.
///
/// `beta_+ = 2 atan((cot b + sqrt(cot^2 b + f^2)) / f)` is rewritten through
/// `sin^2(beta_+/2) = (1 + cos b / s) / 2` with `s = sqrt(cos^2 b + sin^2 b f^2)`,
/// which is finite everywhere. The remaining `0/0` at `s = 0` takes the
/// limit `pi/2`; `beta = 0` and `beta = pi` take `pi` and `0`.
pub fn eigen_spectrum(beta: f64, fmod: f64) -> SpectralData {
    let fmod = fmod.clamp(0.0, 1.0);
    let (sin_b, cos_b) = beta.sin_cos();
    let s = cos_b.hypot(sin_b * fmod);
    let eps_plus = 0.5 * (1.0 + s);
    // determinant / eps_plus keeps eps_minus exactly zero for a pure state
    let det = 0.25 * sin_b * sin_b * (1.0 - fmod) * (1.0 + fmod);
    let eps_minus = det / eps_plus;

    let beta_plus = if beta == 0.0 {
        PI
    } else if beta == PI {
        0.0
    } else if s == 0.0 {
        FRAC_PI_2
    } else {
        let r = (cos_b / s).clamp(-1.0, 1.0);
        2.0 * (1.0 + r).sqrt().atan2((1.0 - r).sqrt())
    };
    SpectralData {
        eps_plus,
        eps_minus,
        beta_plus,
    }
}

/// Geometric phase of the decoupled qubit, `pi (1 + cos beta)`.
pub fn unperturbed_phase(beta: f64) -> f64 {
    PI * (1.0 + beta.cos())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpResult {
    /// Phase reduced to `[0, 2 pi)`.
    pub phi: f64,
    /// Phase before reduction.
    pub raw_phi: f64,
    pub quadrature_error: f64,
    pub evaluations: usize,
    /// Per-mode factors clamped to zero while sampling `|F|`.
    pub clamped: usize,
}

impl GpResult {
    pub fn new(raw_phi: f64, quadrature_error: f64, evaluations: usize, clamped: usize) -> Self {
        GpResult {
            phi: raw_phi.rem_euclid(TAU),
            raw_phi,
            quadrature_error,
            evaluations,
            clamped,
        }
    }
}

/// `eta * int_0^T sin^2(beta_+(t)/2) dt` with absolute error estimate `<= tol`.
pub fn geometric_phase(params: &ModelParams, tol: f64) -> Result<GpResult> {
    let kernel = DecoherenceKernel::new(params)?;
    geometric_phase_with(params, &kernel, tol)
}

/// [`geometric_phase`] over an already built kernel for `params`.
pub fn geometric_phase_with(params: &ModelParams, kernel: &DecoherenceKernel, tol: f64) -> Result<GpResult> {
    if !(tol > 0.0) {
        return Err(Error::param("tol", format!("must be > 0, got {tol}")));
    }
    let eta = params.eta;
    let mut clamped = 0;
    let q = quadrature::simpson(
        |t| {
            let m = kernel.modulus(t)?;
            clamped += m.clamped;
            Ok(eigen_spectrum(params.beta, m.value).weight())
        },
        0.0,
        params.period(),
        tol / eta,
    )?;
    Ok(GpResult::new(eta * q.value, eta * q.error, q.evaluations, clamped))
}

const PURE_STATE_ATOL: f64 = 1e-14;

/// One eigenpair of a 2x2 Hermitian matrix, with the eigenvector's `|g>`
/// component real and non-negative.
#[derive(Debug, Clone, Copy)]
struct Eigenpair {
    value: f64,
    vector: [Complex64; 2],
}

/// Both eigenpairs of `[[a, c], [c*, d]]`, larger first.
fn hermitian_eigenpairs(a: f64, d: f64, c: Complex64) -> [Eigenpair; 2] {
    let mean = 0.5 * (a + d);
    let radius = (0.5 * (a - d)).hypot(c.norm());
    let upper = mean + radius;
    let det = a * d - c.norm_sqr();
    let lower = if upper != 0.0 { det / upper } else { mean - radius };

    let normalize = |v: [Complex64; 2], fallback: [Complex64; 2]| {
        let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if n < 1e-300 {
            fallback
        } else {
            [v[0] / n, v[1] / n]
        }
    };
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);

    // (c, lambda - a) solves the first row; lambda - a >= 0 for the upper value.
    let up = normalize([c, Complex64::new(upper - a, 0.0)], [one, zero]);
    // (lambda - d, c*) solves the second row; rotate so the |g> entry is real.
    let phase = if c.norm() > 0.0 { c / c.norm() } else { one };
    let down = normalize(
        [Complex64::new(lower - d, 0.0) * phase, Complex64::new(c.norm(), 0.0)],
        [zero, one],
    );
    [
        Eigenpair { value: upper, vector: up },
        Eigenpair {
            value: lower,
            vector: down,
        },
    ]
}

fn inner(u: &[Complex64; 2], v: &[Complex64; 2]) -> Complex64 {
    u[0].conj() * v[0] + u[1].conj() * v[1]
}

fn general_phase_on_grid(params: &ModelParams, kernel: &DecoherenceKernel, steps: usize) -> Result<f64> {
    let period = params.period();
    let h = period / steps as f64;
    let (sin_b, cos_b) = params.beta.sin_cos();
    let a = 0.5 * (1.0 + cos_b);
    let d = 0.5 * (1.0 - cos_b);

    let mut pairs = Vec::with_capacity(steps + 1);
    for j in 0..=steps {
        let t = if j == steps { period } else { h * j as f64 };
        let f = kernel.modulus(t)?.value;
        let c = Complex64::from_polar(0.5 * sin_b * f, -params.eta * t);
        pairs.push(hermitian_eigenpairs(a, d, c));
    }

    let eps_minus0 = pairs[0][1].value;
    if eps_minus0.abs() > PURE_STATE_ATOL {
        return Err(Error::UnexpectedBranch { value: eps_minus0 });
    }

    let mut total = Complex64::new(0.0, 0.0);
    for branch in 0..2 {
        let first = pairs[0][branch];
        let last = pairs[steps][branch];
        let e0 = if branch == 1 { 0.0 } else { first.value };
        let weight = (e0 * last.value).max(0.0).sqrt();
        if weight == 0.0 {
            continue;
        }
        let v = |j: usize| pairs[j][branch].vector;
        // fourth-order stencils, one-sided near the ends
        let derivative = |j: usize| -> [Complex64; 2] {
            const CENTRAL: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];
            const EDGE0: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];
            const EDGE1: [f64; 5] = [-3.0, -10.0, 18.0, -6.0, 1.0];
            let (base, coef, sign): (usize, &[f64; 5], f64) = if j >= 2 && j + 2 <= steps {
                (j - 2, &CENTRAL, 1.0)
            } else if j < 2 {
                (0, if j == 0 { &EDGE0 } else { &EDGE1 }, 1.0)
            } else {
                (steps, if j == steps { &EDGE0 } else { &EDGE1 }, -1.0)
            };
            let mut out = [Complex64::new(0.0, 0.0); 2];
            for (i, &c) in coef.iter().enumerate() {
                let node = if sign > 0.0 { base + i } else { base - i };
                let w = v(node);
                out[0] += w[0] * c;
                out[1] += w[1] * c;
            }
            let k = sign / (12.0 * h);
            [out[0] * k, out[1] * k]
        };
        let mut connection = Complex64::new(0.0, 0.0);
        for j in 0..=steps {
            let w = if j == 0 || j == steps { 0.5 } else { 1.0 };
            connection += inner(&v(j), &derivative(j)) * w;
        }
        connection *= h;
        total += inner(&first.vector, &last.vector) * weight * (-connection).exp();
    }
    Ok(total.arg().rem_euclid(TAU))
}

/// Evaluates the weighted-overlap definition of the mixed-state geometric
/// phase on a uniform grid of `steps` intervals, refined by one Richardson
/// step against a grid of half the size.
pub fn geometric_phase_general(params: &ModelParams, steps: usize) -> Result<GpResult> {
    if steps < 16 {
        return Err(Error::param("steps", format!("must be >= 16, got {steps}")));
    }
    let kernel = DecoherenceKernel::new(params)?;
    let fine = general_phase_on_grid(params, &kernel, steps)?;
    let coarse_steps = steps / 2;
    let coarse = general_phase_on_grid(params, &kernel, coarse_steps)?;
    let diff = wrapped_difference(fine, coarse);
    let refined = fine + diff / 3.0;
    Ok(GpResult::new(
        refined.rem_euclid(TAU),
        diff.abs() / 3.0,
        steps + coarse_steps + 2,
        0,
    ))
}

/// `a - b` mapped into `(-pi, pi]`.
pub fn wrapped_difference(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > PI { d - TAU } else { d }
}
