//! Modulus of the decoherence factor `|F(t)|` as a product over modes.
//!
//! For each mode `k > 0` with energies `W0, W1` and mixing angles `a0, a1`
//! under the two conditional fields the squared factor is
//!
//! ```text
//! A B cos((W0 - W1) t) - A B^2 sin^2(a0 - a1) + 1
//!     - sin^2(2 a0) sin^2(W0 t) - sin^2(2 a1) sin^2(W1 t)
//! A = sin(2 a0) sin(2 a1),  B = 2 sin(W0 t) sin(W1 t)
//! ```
//!
//! The product of a few hundred factors in `[0, 1]` underflows near
//! criticality, so it is accumulated as `0.5 * sum(ln factor)` with a
//! fixed-order pairwise summation and exponentiated once.

use crate::chain::{ModeAngles, ModelParams};
use crate::error::{Error, Result};

/// Per-mode factors below `-NEGATIVE_TOLERANCE` abort the evaluation.
pub const NEGATIVE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
struct ModeCoefficients {
    k: usize,
    omega0: f64,
    omega1: f64,
    /// `sin(2 a0) sin(2 a1)`
    a: f64,
    sin2_0: f64,
    sin2_1: f64,
    /// `sin^2(a0 - a1)`
    diff2: f64,
}

impl ModeCoefficients {
    #[inline]
    fn factor(&self, t: f64) -> f64 {
        let s0 = (self.omega0 * t).sin();
        let s1 = (self.omega1 * t).sin();
        let b = 2.0 * s0 * s1;
        let ab = self.a * b;
        ab * ((self.omega0 - self.omega1) * t).cos() - ab * b * self.diff2 + 1.0
            - self.sin2_0 * self.sin2_0 * s0 * s0
            - self.sin2_1 * self.sin2_1 * s1 * s1
    }
}

/// Value of `|F(t)|` together with the number of per-mode factors that were
/// rounded up from tiny negatives to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus {
    pub value: f64,
    pub clamped: usize,
}

/// Time-independent per-mode coefficients for one parameter set.
///
/// Building the kernel evaluates every Bogoliubov angle once; each call to
/// [`DecoherenceKernel::modulus`] is then a pass over the modes.
#[derive(Debug, Clone)]
pub struct DecoherenceKernel {
    modes: Vec<ModeCoefficients>,
    gapless: usize,
}

impl DecoherenceKernel {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let angles = ModeAngles::new(params)?;
        Ok(Self::from_angles(&angles))
    }

    pub fn from_angles(angles: &ModeAngles) -> Self {
        let modes = angles
            .modes()
            .iter()
            .map(|m| {
                let [a0, a1] = m.mixing;
                let (s0, s1) = ((2.0 * a0).sin(), (2.0 * a1).sin());
                let d = (a0 - a1).sin();
                ModeCoefficients {
                    k: m.k,
                    omega0: m.omega[0],
                    omega1: m.omega[1],
                    a: s0 * s1,
                    sin2_0: s0,
                    sin2_1: s1,
                    diff2: d * d,
                }
            })
            .collect();
        DecoherenceKernel {
            modes,
            gapless: angles.gapless_modes().len(),
        }
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Number of modes that touched a gapless point.
    pub fn gapless_modes(&self) -> usize {
        self.gapless
    }

    /// Squared per-mode factor `F_k(t)^2` of mode `k`.
    pub fn mode_factor(&self, k: usize, t: f64) -> Option<f64> {
        self.modes.iter().find(|m| m.k == k).map(|m| m.factor(t))
    }

    /// `|F(t)|` over all modes.
    pub fn modulus(&self, t: f64) -> Result<Modulus> {
        self.partial_modulus(t, usize::MAX)
    }

    /// `|F(t)|_c`, the product restricted to modes `k <= cutoff`.
    pub fn partial_modulus(&self, t: f64, cutoff: usize) -> Result<Modulus> {
        let mut logs = Vec::with_capacity(self.modes.len());
        let mut clamped = 0;
        let mut zero = false;
        for m in self.modes.iter().take_while(|m| m.k <= cutoff) {
            let f = m.factor(t);
            if f < -NEGATIVE_TOLERANCE {
                return Err(Error::NegativeFactor { k: m.k, t, value: f });
            }
            if f <= 0.0 {
                if f < 0.0 {
                    clamped += 1;
                }
                zero = true;
                continue;
            }
            logs.push(f.ln());
        }
        let value = if zero {
            0.0
        } else {
            (0.5 * pairwise_sum(&logs)).exp().clamp(0.0, 1.0)
        };
        Ok(Modulus { value, clamped })
    }
}

/// Pairwise summation with a fixed split order, so the result does not
/// depend on how callers schedule work.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let (lo, hi) = xs.split_at(xs.len() / 2);
    pairwise_sum(lo) + pairwise_sum(hi)
}

/// `|F(t)|` for one parameter set and instant.
pub fn decoherence_modulus(params: &ModelParams, t: f64) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::param("t", format!("must be finite and >= 0, got {t}")));
    }
    Ok(DecoherenceKernel::new(params)?.modulus(t)?.value)
}

/// `|F(t)|` sampled uniformly over one quasi period.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoherenceSeries {
    pub params: ModelParams,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// Total number of per-mode factors clamped to zero across the series.
    pub clamped: usize,
}

/// Samples `|F|` at `steps + 1` uniform instants of `[0, T]`, both ends included.
pub fn decoherence_series(params: &ModelParams, steps: usize) -> Result<DecoherenceSeries> {
    if steps < 2 {
        return Err(Error::param("steps", format!("must be >= 2, got {steps}")));
    }
    let kernel = DecoherenceKernel::new(params)?;
    let period = params.period();
    let mut times = Vec::with_capacity(steps + 1);
    let mut values = Vec::with_capacity(steps + 1);
    let mut clamped = 0;
    for i in 0..=steps {
        let t = if i == steps {
            period
        } else {
            period * i as f64 / steps as f64
        };
        let m = kernel.modulus(t)?;
        clamped += m.clamped;
        times.push(t);
        values.push(m.value);
    }
    Ok(DecoherenceSeries {
        params: *params,
        times,
        values,
        clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    fn fig1(alpha: f64) -> ModelParams {
        ModelParams {
            alpha,
            ..ModelParams::default()
        }
    }

    #[test]
    fn unity_without_coupling() {
        let p = ModelParams {
            g: 0.0,
            alpha: 0.2,
            lambda: 1.3,
            ..ModelParams::default()
        };
        for t in [0.0, 0.1, 1.0, 2.9, 17.0] {
            assert_eq!(decoherence_modulus(&p, t).unwrap(), 1.0);
        }
        let s = decoherence_series(&p, 8).unwrap();
        assert_eq!(s.values.len(), 9);
        assert!(s.values.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn unity_at_time_zero() {
        for alpha in [-0.5, 0.0, 0.2, 0.5] {
            assert_eq!(decoherence_modulus(&fig1(alpha), 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn series_shape() {
        let s = decoherence_series(&fig1(0.0), 256).unwrap();
        assert_eq!(s.times.len(), 257);
        assert_eq!(s.values[0], 1.0);
        assert_eq!(*s.times.last().unwrap(), s.params.period());
        assert!(s.times.windows(2).all(|w| w[1] > w[0]));
        assert!(s.values.iter().all(|&v| (0.0..=1.0).contains(&v)));
        assert!(decoherence_series(&fig1(0.0), 1).is_err());
    }

    #[test]
    fn rejects_negative_time() {
        assert!(decoherence_modulus(&fig1(0.0), -1.0).is_err());
    }

    #[test]
    fn nested_cutoffs_bound_full_product() {
        for (lambda, alpha) in [(0.0, 0.0), (1.45, 0.2), (0.5, -0.3)] {
            let p = ModelParams {
                lambda,
                alpha,
                ..ModelParams::default()
            };
            let kernel = DecoherenceKernel::new(&p).unwrap();
            for t in [0.3, 1.1, 2.5] {
                let mut prev = 1.0;
                for cutoff in [1, 5, 25, 100, 250] {
                    let v = kernel.partial_modulus(t, cutoff).unwrap().value;
                    assert!(v <= prev + 1e-15, "cutoff {cutoff}: {v} > {prev}");
                    prev = v;
                }
                assert_eq!(prev, kernel.modulus(t).unwrap().value);
            }
        }
    }

    #[test]
    fn short_time_log_is_quadratic_at_critical_line() {
        // ln|F| is even in t, so a fit c1 t + c2 t^2 anchored at ln|F(0)| = 0
        // should carry almost no linear part.
        let alpha = 0.2;
        let p = ModelParams {
            lambda: 1.0 + 2.0 * alpha,
            alpha,
            eta: TAU / 3.0,
            ..ModelParams::default()
        };
        let kernel = DecoherenceKernel::new(&p).unwrap();
        let period = p.period();
        // the linear leakage from t^4 shrinks with the window squared
        let window = period / 200.0;
        let ts: Vec<f64> = (1..=200).map(|i| window * i as f64 / 200.0).collect();
        let ys: Vec<f64> = ts.iter().map(|&t| kernel.modulus(t).unwrap().value.ln()).collect();
        // normal equations for y = c1 t + c2 t^2
        let (mut s2, mut s3, mut s4, mut sy1, mut sy2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (&t, &y) in ts.iter().zip(&ys) {
            s2 += t * t;
            s3 += t * t * t;
            s4 += t * t * t * t;
            sy1 += y * t;
            sy2 += y * t * t;
        }
        let det = s2 * s4 - s3 * s3;
        let c1 = (sy1 * s4 - sy2 * s3) / det;
        let c2 = (s2 * sy2 - s3 * sy1) / det;
        assert!(c2 < 0.0);
        assert!(c1.abs() < 1e-3 * c2.abs() * period, "c1={c1} c2={c2}");
    }

    #[test]
    fn deep_product_does_not_underflow_to_garbage() {
        // near criticality with strong coupling the product is tiny but finite
        let p = ModelParams {
            lambda: 1.0,
            alpha: 0.0,
            g: 0.5,
            n: 2001,
            ..ModelParams::default()
        };
        let kernel = DecoherenceKernel::new(&p).unwrap();
        for t in [0.5, 1.0, 1.5] {
            let m = kernel.modulus(t).unwrap();
            assert!((0.0..=1.0).contains(&m.value));
        }
    }

    #[test]
    fn pairwise_sum_matches_naive_sum() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.37).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-12);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn modulus_in_unit_interval(
            lambda in -2.0..3.0f64,
            alpha in -1.0..1.0f64,
            gamma in 0.0..1.5f64,
            g in 0.0..0.3f64,
            n in 2usize..200,
            t in 0.0..10.0f64,
        ) {
            let p = ModelParams { lambda, alpha, gamma, g, n, beta: PI / 4.0, eta: 1.0 };
            let v = decoherence_modulus(&p, t).unwrap();
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }
}
