//! Self-checks of a build: closed forms against the brute-force oracles and
//! their known limits.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use crate::chain::{mixing_angle, Field, ModelParams};
use crate::decoherence::decoherence_modulus;
use crate::error::{Error, Result};
use crate::geophase::{geometric_phase, geometric_phase_general, unperturbed_phase, wrapped_difference};
use crate::oracle::{mode_overlap_oracle, ExactEvolution};
use crate::stats::log_log_slope;

/// Pointwise tolerance between the closed-form `|F|` and the mode oracle.
pub const EQUIVALENCE_TOL: f64 = 1e-10;
pub const EQUIVALENCE_POINTS: usize = 64;
/// Unitary-limit tolerance on the phase.
pub const UNITARY_TOL: f64 = 1e-9;
/// Accepted window for the exponent of `|Phi - Phi_0|` against `g`.
pub const G_SLOPE_WINDOW: (f64, f64) = (1.95, 2.05);
pub const G_SCAN: [f64; 4] = [1e-3, 2e-3, 5e-3, 1e-2];
/// Quadrature tolerance of precision checks.
pub const CHECK_TOL: f64 = 1e-12;
pub const CROSS_STEPS: usize = 4096;
pub const CROSS_FLOOR: f64 = 1e-6;
pub const ED_SIZES: [usize; 3] = [8, 10, 12];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            _ => Err(Error::Parse(format!("unknown verification level `{s}`; expected quick or full"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Measured numbers behind the verdict.
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Check {
            name: name.to_string(),
            passed,
            detail,
        }
    }

    fn from_result(name: &str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Check::new(name, passed, detail),
            Err(e) => Check::new(name, false, format!("error: {e}")),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub level: Level,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        write!(f, "{} checks, {failed} failed", self.checks.len())
    }
}

/// `max` that keeps a NaN, so a broken source can never look accurate.
fn worse(acc: f64, x: f64) -> f64 {
    if acc.is_nan() || x.is_nan() {
        f64::NAN
    } else {
        acc.max(x)
    }
}

/// Source of `|F(t)|` under test.
pub type ModulusSource<'a> = &'a (dyn Fn(&ModelParams, f64) -> Result<f64> + Sync);

/// Parameters of the oracle-equivalence runs.
pub fn equivalence_params(n: usize) -> ModelParams {
    ModelParams {
        eta: TAU / 3.0,
        gamma: 1.0,
        alpha: 0.2,
        lambda: 0.5,
        g: 0.05,
        n,
        beta: PI / 5.0,
    }
}

/// Largest `| |F|_source - |F|_oracle |` over `points` uniform instants of `[0, T]`.
pub fn equivalence_gap(params: &ModelParams, points: usize, source: ModulusSource) -> Result<f64> {
    let period = params.period();
    let mut worst: f64 = 0.0;
    for i in 0..points {
        let t = if i + 1 == points {
            period
        } else {
            period * i as f64 / (points - 1) as f64
        };
        let oracle = mode_overlap_oracle(params, t)?.norm();
        let closed = source(params, t)?;
        worst = worse(worst, (oracle - closed).abs());
    }
    Ok(worst)
}

/// Base of the coupling-scaling runs: zero field, Ising limit, weak coupling.
pub fn scaling_params() -> ModelParams {
    ModelParams {
        eta: TAU / 3.0,
        gamma: 1.0,
        alpha: 0.0,
        lambda: 0.0,
        g: 0.03,
        n: 501,
        beta: PI / 5.0,
    }
}

/// `|Phi - Phi_0|` at each coupling, on top of `base`.
pub fn phase_shifts(base: &ModelParams, gs: &[f64], tol: f64) -> Result<Vec<f64>> {
    let phi0 = unperturbed_phase(base.beta);
    gs.iter()
        .map(|&g| {
            let p = ModelParams { g, ..*base };
            Ok((geometric_phase(&p, tol)?.raw_phi - phi0).abs())
        })
        .collect()
}

/// Regression exponent of `|Phi - Phi_0|` against `g` over [`G_SCAN`].
pub fn coupling_exponent(base: &ModelParams) -> Result<f64> {
    let shifts = phase_shifts(base, &G_SCAN, CHECK_TOL)?;
    log_log_slope(&G_SCAN, &shifts).ok_or_else(|| Error::param("g", "degenerate scan"))
}

/// `| |F|_exact - |F|_closed |` at `t = T/4` for each size in [`ED_SIZES`].
pub fn exact_diag_gaps(source: ModulusSource) -> Result<Vec<(usize, f64)>> {
    ED_SIZES
        .iter()
        .map(|&n| {
            let p = ModelParams {
                eta: TAU / 3.0,
                gamma: 1.0,
                alpha: 0.0,
                lambda: 0.5,
                g: 0.05,
                n,
                beta: PI / 5.0,
            };
            let t = p.period() / 4.0;
            let exact = ExactEvolution::new(&p)?.factor(t).norm();
            Ok((n, (exact - source(&p, t)?).abs()))
        })
        .collect()
}

pub fn verify(level: Level) -> Report {
    verify_with(level, &|p, t| decoherence_modulus(p, t))
}

/// Runs the checks of `level` with `source` standing in for the closed-form `|F|`.
pub fn verify_with(level: Level, source: ModulusSource) -> Report {
    let mut checks = Vec::new();

    checks.push(Check::from_result(
        "|F(0)| = 1",
        (|| {
            let mut worst: f64 = 0.0;
            for n in [10, 101, 501] {
                for p in [equivalence_params(n), scaling_params()] {
                    let p = ModelParams { n, ..p };
                    worst = worse(worst, (source(&p, 0.0)? - 1.0).abs());
                }
            }
            Ok((worst == 0.0, format!("max |F(0) - 1| = {worst:e}")))
        })(),
    ));

    checks.push(Check::from_result(
        "g = 0 gives |F| = 1",
        (|| {
            let p = ModelParams {
                g: 0.0,
                ..equivalence_params(51)
            };
            let mut worst: f64 = 0.0;
            for i in 0..=16 {
                let t = p.period() * i as f64 / 16.0;
                worst = worse(worst, (source(&p, t)? - 1.0).abs());
            }
            Ok((worst <= 1e-12, format!("max |F - 1| = {worst:e}")))
        })(),
    ));

    checks.push(Check::from_result(
        "g = 0 mixing angles vanish",
        (|| {
            let p = ModelParams {
                g: 0.0,
                ..equivalence_params(51)
            };
            let mut worst: f64 = 0.0;
            for k in p.mode_grid()?.momenta() {
                for f in Field::BOTH {
                    worst = worst.max(mixing_angle(&p, f, k)?.value.abs());
                }
            }
            Ok((worst == 0.0, format!("max |alpha_k| = {worst:e}")))
        })(),
    ));

    checks.push(Check::from_result(
        "g = 0 phase is pi(1 + cos beta)",
        (|| {
            let mut worst: f64 = 0.0;
            for j in 0..=8 {
                let beta = PI * j as f64 / 8.0;
                let p = ModelParams {
                    g: 0.0,
                    beta,
                    n: 101,
                    ..scaling_params()
                };
                let phi = geometric_phase(&p, CHECK_TOL)?.raw_phi;
                worst = worst.max((phi - unperturbed_phase(beta)).abs());
            }
            Ok((worst < UNITARY_TOL, format!("max deviation {worst:e} (tol {UNITARY_TOL:e})")))
        })(),
    ));

    let mut equivalence = |n: usize| {
        checks.push(Check::from_result(
            &format!("closed form vs mode oracle, N = {n}"),
            equivalence_gap(&equivalence_params(n), EQUIVALENCE_POINTS, source)
                .map(|gap| (gap < EQUIVALENCE_TOL, format!("max gap {gap:e} over {EQUIVALENCE_POINTS} points (tol {EQUIVALENCE_TOL:e})"))),
        ));
    };
    equivalence(10);

    if level == Level::Full {
        equivalence(100);

        checks.push(Check::from_result(
            "coupling exponent",
            coupling_exponent(&scaling_params()).map(|s| {
                let (lo, hi) = G_SLOPE_WINDOW;
                ((lo..=hi).contains(&s), format!("slope {s:.4} (accepted {lo:.2}..{hi:.2})"))
            }),
        ));

        checks.push(Check::from_result(
            "closed-form vs general phase",
            (|| {
                let p = ModelParams {
                    alpha: 0.2,
                    ..scaling_params()
                };
                let closed = geometric_phase(&p, CHECK_TOL)?;
                let general = geometric_phase_general(&p, CROSS_STEPS)?;
                let diff = wrapped_difference(closed.phi, general.phi).abs();
                let allowed = CROSS_FLOOR.max(closed.quadrature_error + general.quadrature_error);
                Ok((diff <= allowed, format!("difference {diff:e}, allowed {allowed:e}")))
            })(),
        ));

        checks.push(Check::from_result(
            "exact diagonalization gap shrinks with N",
            exact_diag_gaps(source).map(|gaps| {
                let shrinking = gaps.windows(2).all(|w| w[1].1 < w[0].1);
                let text: Vec<String> = gaps.iter().map(|(n, g)| format!("N={n}: {g:.3e}")).collect();
                (shrinking, text.join(", "))
            }),
        ));
    }

    Report { level, checks }
}
