//! Composite Simpson rule refined by successive interval halving.

use crate::error::{Error, Result};

/// Hard cap on integrand evaluations for one integral.
pub const MAX_EVALUATIONS: usize = 1 << 20;

const INITIAL_INTERVALS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    /// Richardson-extrapolated value of the finest two Simpson sums.
    pub value: f64,
    /// `|S_2n - S_n| / 15`.
    pub error: f64,
    pub evaluations: usize,
}

/// Integrates `f` over `[a, b]` until the Richardson error estimate drops to
/// `tol` or the evaluation budget runs out.
///
/// Each halving reuses every previous sample, so the evaluation count is
/// the number of grid points of the finest level.
pub fn simpson<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<Quadrature>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(Error::param("tol", format!("must be > 0, got {tol}")));
    }
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::param("bounds", format!("need finite a < b, got [{a}, {b}]")));
    }
    let width = b - a;
    let mut n = INITIAL_INTERVALS;
    let h = width / n as f64;

    // Samples on the current grid split into endpoints, even interior
    // points and odd interior points.
    let ends = f(a)? + f(b)?;
    let mut evaluations = 2;
    let mut even = 0.0;
    let mut odd = 0.0;
    for i in 1..n {
        let v = f(a + h * i as f64)?;
        if i % 2 == 0 {
            even += v;
        } else {
            odd += v;
        }
    }
    evaluations += n - 1;
    let mut prev = h / 3.0 * (ends + 2.0 * even + 4.0 * odd);

    loop {
        let next_n = 2 * n;
        if evaluations + n > MAX_EVALUATIONS {
            return Err(Error::NoConvergence {
                estimate: f64::NAN,
                evaluations,
            });
        }
        let h = width / next_n as f64;
        // old points all become even points
        even += odd;
        odd = 0.0;
        for i in (1..next_n).step_by(2) {
            odd += f(a + h * i as f64)?;
        }
        evaluations += n;
        n = next_n;
        let current = h / 3.0 * (ends + 2.0 * even + 4.0 * odd);
        let error = (current - prev).abs() / 15.0;
        if error <= tol {
            return Ok(Quadrature {
                value: current + (current - prev) / 15.0,
                error,
                evaluations,
            });
        }
        if evaluations + n > MAX_EVALUATIONS {
            return Err(Error::NoConvergence {
                estimate: error,
                evaluations,
            });
        }
        prev = current;
    }
}
