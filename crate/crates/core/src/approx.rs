//! Weak-coupling analysis: the low-momentum expansion of the mixing angles,
//! the Gaussian short-time decay of the truncated decoherence factor and the
//! closed-form second-order correction to the geometric phase.
//!
//! Every quantity here diverges on the line `lambda = 1 + 2 alpha`; callers
//! crossing it must use the numerical phase from [`crate::geophase`].

use std::f64::consts::PI;

use crate::chain::{Field, ModelParams};
use crate::error::{Error, Result};
use crate::geophase::unperturbed_phase;

/// Below this distance from the critical line the expansion is refused.
pub const CRITICAL_GUARD: f64 = 1e-12;

/// Largest retained mode index `K_c` of the truncated product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApproxParams {
    pub cutoff: usize,
}

impl ApproxParams {
    pub fn new(cutoff: usize, params: &ModelParams) -> Result<Self> {
        let m = params.mode_grid()?.len();
        if cutoff == 0 || cutoff > m {
            return Err(Error::param("cutoff", format!("must lie in 1..={m}, got {cutoff}")));
        }
        Ok(ApproxParams { cutoff })
    }

    /// `K_c = M`, every mode of the grid.
    pub fn all_modes(params: &ModelParams) -> Result<Self> {
        Ok(ApproxParams {
            cutoff: params.mode_grid()?.len(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianDecay {
    /// Rate `tau` of `|F(t)|_c ~ exp(-tau t^2)`.
    pub tau: f64,
    /// `E(K_c)`.
    pub cutoff_sum: f64,
}

/// `E(K_c) = 4 pi^2 K_c (K_c + 1)(2 K_c + 1) / (6 N^2)`.
pub fn cutoff_sum(cutoff: usize, n: usize) -> f64 {
    let k = cutoff as f64;
    let n = n as f64;
    4.0 * PI * PI * k * (k + 1.0) * (2.0 * k + 1.0) / (6.0 * n * n)
}

fn guarded(distance: f64) -> Result<f64> {
    if distance.abs() < CRITICAL_GUARD {
        return Err(Error::Criticality { distance });
    }
    Ok(distance)
}

/// `tau = 8 E(K_c) gamma^2 g^2 / (lambda - 1 - 2 alpha)^2`.
pub fn decay_rate(params: &ModelParams, cutoff: usize) -> Result<GaussianDecay> {
    let d = guarded(params.critical_distance())?;
    let e = cutoff_sum(cutoff, params.n);
    Ok(GaussianDecay {
        tau: 8.0 * e * params.gamma * params.gamma * params.g * params.g / (d * d),
        cutoff_sum: e,
    })
}

pub fn gaussian_envelope(decay: &GaussianDecay, t: f64) -> f64 {
    (-decay.tau * t * t).exp()
}

/// First-order value of `sin(alpha_{k,Lambda_n})` at low momentum,
/// `(-1)^{n+1} pi gamma k g / (N |(Lambda_n - 1 - 2 alpha)(lambda - 1 - 2 alpha)|)`.
pub fn small_k_mixing(params: &ModelParams, which: Field, k: usize) -> Result<f64> {
    let bare = guarded(params.critical_distance())?;
    let shifted = guarded(params.field(which) - 1.0 - 2.0 * params.alpha)?;
    let sign = -which.sign();
    Ok(sign * PI * params.gamma * k as f64 * params.g / (params.n as f64 * (shifted * bare).abs()))
}

/// First-order value of `sin(alpha_{k,Lambda_0} - alpha_{k,Lambda_1})`,
/// `-2 pi gamma k g / (N |(Lambda_0 - 1 - 2 alpha)(Lambda_1 - 1 - 2 alpha)|)`.
pub fn small_k_mixing_difference(params: &ModelParams, k: usize) -> Result<f64> {
    guarded(params.critical_distance())?;
    let d0 = guarded(params.field(Field::Zero) - 1.0 - 2.0 * params.alpha)?;
    let d1 = guarded(params.field(Field::One) - 1.0 - 2.0 * params.alpha)?;
    Ok(-2.0 * PI * params.gamma * k as f64 * params.g / (params.n as f64 * (d0 * d1).abs()))
}

/// Second-order correction `64 E(K_c) pi^3 gamma^2 cos b sin^2 b g^2 / (3 eta^2 (lambda - 1 - 2 alpha)^2)`.
pub fn approx_correction(params: &ModelParams, cutoff: usize) -> Result<f64> {
    let d = guarded(params.critical_distance())?;
    let e = cutoff_sum(cutoff, params.n);
    let (sin_b, cos_b) = params.beta.sin_cos();
    let gamma = params.gamma;
    Ok(64.0 * e * PI.powi(3) * gamma * gamma * cos_b * sin_b * sin_b * params.g * params.g
        / (3.0 * params.eta * params.eta * d * d))
}

/// Weak-coupling geometric phase: `pi (1 + cos beta)` plus [`approx_correction`].
pub fn approx_gp(params: &ModelParams, cutoff: usize) -> Result<f64> {
    params.validate()?;
    Ok(unperturbed_phase(params.beta) + approx_correction(params, cutoff)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::mixing_angle;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::TAU;

    fn base() -> ModelParams {
        ModelParams {
            lambda: 0.0,
            alpha: 0.0,
            gamma: 1.0,
            g: 0.03,
            n: 501,
            eta: TAU / 3.0,
            beta: PI / 5.0,
        }
    }

    #[test]
    fn cutoff_sum_values() {
        assert_abs_diff_eq!(cutoff_sum(1, 501), 4.0 * PI * PI / 251_001.0, epsilon = 1e-18);
        assert_abs_diff_eq!(cutoff_sum(1, 501), 1.572_839_056_591_704e-4, epsilon = 1e-18);
        assert_abs_diff_eq!(cutoff_sum(2, 10), 0.2 * PI * PI, epsilon = 1e-14);
        assert_abs_diff_eq!(cutoff_sum(1, 2), PI * PI, epsilon = 1e-14);
    }

    #[test]
    fn decay_rate_values() {
        let d = decay_rate(&base(), 1).unwrap();
        assert_abs_diff_eq!(d.tau, 1.132_444_120_746_027e-6, epsilon = 1e-19);
        assert_abs_diff_eq!(d.cutoff_sum, cutoff_sum(1, 501), epsilon = 0.0);

        let free = ModelParams { g: 0.0, ..base() };
        assert_eq!(decay_rate(&free, 7).unwrap().tau, 0.0);

        let critical = ModelParams { lambda: 1.0, ..base() };
        assert!(matches!(decay_rate(&critical, 1), Err(Error::Criticality { .. })));
    }

    #[test]
    fn envelope_values() {
        let none = GaussianDecay {
            tau: 0.0,
            cutoff_sum: 1.0,
        };
        assert_eq!(gaussian_envelope(&none, 5.0), 1.0);
        let d = decay_rate(&base(), 1).unwrap();
        assert_eq!(gaussian_envelope(&d, 0.0), 1.0);
        assert_abs_diff_eq!(gaussian_envelope(&d, 3.0), 0.999_989_808_054_851_5, epsilon = 1e-15);
    }

    #[test]
    fn small_k_mixing_limits() {
        let free = ModelParams { g: 0.0, ..base() };
        assert_eq!(small_k_mixing(&free, Field::Zero, 3).unwrap(), 0.0);
        assert_eq!(small_k_mixing(&base(), Field::One, 0).unwrap(), 0.0);
        let critical = ModelParams { lambda: 1.0, ..base() };
        assert!(small_k_mixing(&critical, Field::Zero, 1).is_err());
        assert!(small_k_mixing_difference(&critical, 1).is_err());
    }

    #[test]
    fn small_k_mixing_tracks_exact_angle() {
        let p = base();
        for which in Field::BOTH {
            let exact = mixing_angle(&p, which, 1).unwrap().value.sin();
            let approx = small_k_mixing(&p, which, 1).unwrap();
            assert!(((approx - exact) / exact).abs() < 0.05, "{which:?}: {approx} vs {exact}");
        }
        let exact = (mixing_angle(&p, Field::Zero, 1).unwrap().value - mixing_angle(&p, Field::One, 1).unwrap().value).sin();
        let approx = small_k_mixing_difference(&p, 1).unwrap();
        assert!(((approx - exact) / exact).abs() < 0.05, "{approx} vs {exact}");
    }

    #[test]
    fn approx_gp_values() {
        let p = ModelParams {
            beta: PI / 2.0,
            g: 0.001,
            ..base()
        };
        assert_abs_diff_eq!(approx_gp(&p, 250).unwrap(), PI, epsilon = 1e-15);
        let p = ModelParams {
            beta: PI / 3.0,
            g: 0.0,
            ..base()
        };
        assert_abs_diff_eq!(approx_gp(&p, 250).unwrap(), 1.5 * PI, epsilon = 1e-15);
    }

    #[test]
    fn correction_scales_as_g_squared() {
        let c = |g| approx_correction(&ModelParams { g, ..base() }, 250).unwrap();
        let unit = c(1.0);
        for g in [1e-3, 7e-3, 0.05] {
            assert!((c(g) / (unit * g * g) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn correction_diverges_as_inverse_square_distance() {
        for (alpha, d) in [(0.0, 0.1), (0.2, 0.03), (-0.3, 0.5)] {
            let at = |dist: f64| {
                let p = ModelParams {
                    alpha,
                    lambda: 1.0 + 2.0 * alpha + dist,
                    ..base()
                };
                approx_correction(&p, 10).unwrap()
            };
            assert!((at(d) / at(2.0 * d) - 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn expansion_against_numerical_phase() {
        let p = ModelParams { g: 0.001, ..base() };
        let expansion = approx_correction(&p, 250).unwrap();
        let numerical = crate::geophase::geometric_phase(&p, 1e-13).unwrap().raw_phi - crate::geophase::unperturbed_phase(p.beta);
        assert!(expansion > 0.0 && numerical > 0.0);
        // measured: the all-mode cutoff overshoots by a factor of about 300
        assert_abs_diff_eq!(expansion, 3.473_526_494_803_503e-2, epsilon = 1e-15);
        assert_abs_diff_eq!(numerical, 1.148_889_240_347_728e-4, epsilon = 1e-11);
        let ratio = expansion / numerical;
        assert!((250.0..350.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn cutoff_bounds() {
        let p = base();
        assert!(ApproxParams::new(0, &p).is_err());
        assert!(ApproxParams::new(251, &p).is_err());
        assert_eq!(ApproxParams::all_modes(&p).unwrap().cutoff, 250);
    }
}
