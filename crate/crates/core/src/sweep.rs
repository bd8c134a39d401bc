//! Parameter sweeps of the geometric phase and the figure presets.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::chain::ModelParams;
use crate::error::{Error, Result};
use crate::geophase::{geometric_phase, GpResult};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A model parameter that can be swept or overlaid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Alpha,
    Lambda,
    G,
    Eta,
    Beta,
    Gamma,
    N,
}

impl Axis {
    pub const ALL: [Axis; 7] = [
        Axis::Alpha,
        Axis::Lambda,
        Axis::G,
        Axis::Eta,
        Axis::Beta,
        Axis::Gamma,
        Axis::N,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axis::Alpha => "alpha",
            Axis::Lambda => "lambda",
            Axis::G => "g",
            Axis::Eta => "eta",
            Axis::Beta => "beta",
            Axis::Gamma => "gamma",
            Axis::N => "N",
        }
    }

    /// Returns `params` with this parameter set to `value`. Site counts are
    /// rounded to the nearest integer.
    pub fn apply(self, params: &ModelParams, value: f64) -> ModelParams {
        let mut p = *params;
        match self {
            Axis::Alpha => p.alpha = value,
            Axis::Lambda => p.lambda = value,
            Axis::G => p.g = value,
            Axis::Eta => p.eta = value,
            Axis::Beta => p.beta = value,
            Axis::Gamma => p.gamma = value,
            Axis::N => p.n = value.round().max(0.0) as usize,
        }
        p
    }

    pub fn get(self, params: &ModelParams) -> f64 {
        match self {
            Axis::Alpha => params.alpha,
            Axis::Lambda => params.lambda,
            Axis::G => params.g,
            Axis::Eta => params.eta,
            Axis::Beta => params.beta,
            Axis::Gamma => params.gamma,
            Axis::N => params.n as f64,
        }
    }

    /// The value actually used once `apply` has run.
    fn effective(self, value: f64) -> f64 {
        if self == Axis::N {
            value.round().max(0.0)
        } else {
            value
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Axis::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown axis `{s}`; expected one of alpha, lambda, g, eta, beta, gamma, N")))
    }
}

/// Secondary parameter values; every sweep point is evaluated once per value.
#[derive(Debug, Clone, PartialEq)]
pub struct Overlay {
    pub axis: Axis,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: ModelParams,
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub tol: f64,
    pub overlay: Option<Overlay>,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl SweepSpec {
    pub fn new(base: ModelParams, axis: Axis, start: f64, stop: f64, points: usize) -> Self {
        SweepSpec {
            base,
            axis,
            start,
            stop,
            points,
            tol: DEFAULT_TOLERANCE,
            overlay: None,
            workers: None,
        }
    }

    pub fn with_overlay(mut self, axis: Axis, values: Vec<f64>) -> Self {
        self.overlay = Some(Overlay { axis, values });
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(Error::param(
                "start/stop",
                format!("need finite start < stop, got {} and {}", self.start, self.stop),
            ));
        }
        if self.points < 2 {
            return Err(Error::param("points", format!("must be >= 2, got {}", self.points)));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::param("tol", format!("must be finite and > 0, got {}", self.tol)));
        }
        if self.workers == Some(0) {
            return Err(Error::param("workers", "must be >= 1"));
        }
        // the grid ends carry the extreme values
        self.axis.apply(&self.base, self.start).validate()?;
        self.axis.apply(&self.base, self.stop).validate()?;
        if let Some(ov) = &self.overlay {
            if ov.axis == self.axis {
                return Err(Error::param("overlay", "must differ from the swept axis"));
            }
            if ov.values.is_empty() {
                return Err(Error::param("overlay", "needs at least one value"));
            }
            for &v in &ov.values {
                ov.axis.apply(&self.base, v).validate()?;
            }
        }
        Ok(())
    }

    /// Grid values; the last one is `stop` exactly.
    pub fn axis_values(&self) -> Vec<f64> {
        let last = self.points - 1;
        (0..self.points)
            .map(|i| {
                let v = if i == last {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last as f64
                };
                self.axis.effective(v)
            })
            .collect()
    }

    fn overlay_values(&self) -> Vec<Option<f64>> {
        match &self.overlay {
            Some(ov) => ov.values.iter().map(|&v| Some(ov.axis.effective(v))).collect(),
            None => vec![None],
        }
    }

    pub fn params_at(&self, axis_value: f64, overlay_value: Option<f64>) -> ModelParams {
        let mut p = self.axis.apply(&self.base, axis_value);
        if let (Some(ov), Some(v)) = (&self.overlay, overlay_value) {
            p = ov.axis.apply(&p, v);
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    pub overlay_value: Option<f64>,
    /// The error message on failure.
    pub outcome: std::result::Result<GpResult, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.outcome.is_err()).count()
    }

    /// `(axis value, phi)` for one overlay value, failures skipped.
    pub fn curve(&self, overlay_value: Option<f64>) -> (Vec<f64>, Vec<f64>) {
        self.rows
            .iter()
            .filter(|r| r.overlay_value == overlay_value)
            .filter_map(|r| r.outcome.as_ref().ok().map(|gp| (r.axis_value, gp.raw_phi)))
            .unzip()
    }

    /// Distinct overlay values in row order.
    pub fn overlay_values(&self) -> Vec<Option<f64>> {
        let mut out: Vec<Option<f64>> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.overlay_value) {
                out.push(r.overlay_value);
            }
        }
        out
    }
}

/// Evaluates the phase on every `(axis, overlay)` point. Rows come out
/// axis-major, overlay values in their given order within each axis
/// value, whatever the worker count.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    run_sweep_with(spec, |p| geometric_phase(p, spec.tol))
}

/// [`run_sweep`] with a caller-supplied evaluator in place of the phase.
pub fn run_sweep_with<F>(spec: &SweepSpec, evaluate: F) -> Result<SweepTable>
where
    F: Fn(&ModelParams) -> Result<GpResult> + Sync,
{
    spec.validate()?;
    let overlays = spec.overlay_values();
    let jobs: Vec<(Option<f64>, f64)> = spec
        .axis_values()
        .into_iter()
        .flat_map(|a| overlays.iter().map(move |&ov| (ov, a)))
        .collect();
    let eval = || -> Vec<SweepRow> {
        jobs.par_iter()
            .map(|&(ov, a)| SweepRow {
                axis_value: a,
                overlay_value: ov,
                outcome: evaluate(&spec.params_at(a, ov)).map_err(|e| e.to_string()),
            })
            .collect()
    };
    let rows = match spec.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::param("workers", e.to_string()))?
            .install(eval),
        None => eval(),
    };
    if rows.iter().all(|r| r.outcome.is_err()) {
        return Err(Error::SweepFailed {
            points: rows.len(),
            first: rows[0].outcome.clone().err().unwrap_or_default(),
        });
    }
    Ok(SweepTable {
        spec: spec.clone(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig1,
    Fig2a,
    Fig2b,
    Fig2c,
    Fig2d,
    Fig3,
    Fig4a,
    Fig4b,
    Fig4c,
    Fig4d,
}

impl FigureId {
    pub const ALL: [FigureId; 10] = [
        FigureId::Fig1,
        FigureId::Fig2a,
        FigureId::Fig2b,
        FigureId::Fig2c,
        FigureId::Fig2d,
        FigureId::Fig3,
        FigureId::Fig4a,
        FigureId::Fig4b,
        FigureId::Fig4c,
        FigureId::Fig4d,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2a => "fig2a",
            FigureId::Fig2b => "fig2b",
            FigureId::Fig2c => "fig2c",
            FigureId::Fig2d => "fig2d",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4a => "fig4a",
            FigureId::Fig4b => "fig4b",
            FigureId::Fig4c => "fig4c",
            FigureId::Fig4d => "fig4d",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown figure `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub id: FigureId,
    pub spec: SweepSpec,
}

pub const FIGURE_POINTS: usize = 201;

pub const BETA_OVERLAY: [f64; 5] = [PI / 5.0, 2.0 * PI / 5.0, PI / 2.0, 3.0 * PI / 5.0, 4.0 * PI / 5.0];
pub const ALPHA_OVERLAY: [f64; 3] = [0.0, 0.1, 0.2];
pub const ETA_OVERLAY: [f64; 4] = [PI / 5.0, PI / 3.0, 2.0 * PI / 3.0, PI];
pub const G_OVERLAY: [f64; 4] = [0.01, 0.03, 0.05, 0.1];
pub const N_OVERLAY: [f64; 4] = [101.0, 301.0, 501.0, 1001.0];
pub const GAMMA_OVERLAY: [f64; 4] = [0.2, 0.4, 0.7, 1.0];

impl FigurePreset {
    pub fn new(id: FigureId) -> Self {
        let base = |eta: f64, gamma: f64, alpha: f64, lambda: f64, g: f64, n: usize, beta: f64| ModelParams {
            eta,
            gamma,
            alpha,
            lambda,
            g,
            n,
            beta,
        };
        let eta_fast = 2.0 * PI / 3.0;
        let eta_slow = PI / 5.0;
        let vs_alpha = |p: ModelParams| SweepSpec::new(p, Axis::Alpha, -1.0, 1.0, FIGURE_POINTS);
        let vs_lambda = |p: ModelParams| SweepSpec::new(p, Axis::Lambda, 0.0, 2.0, FIGURE_POINTS);
        // fields the overlay replaces keep the base default
        let spec = match id {
            FigureId::Fig1 => vs_alpha(base(eta_fast, 1.0, 0.0, 0.0, 0.03, 501, PI / 5.0))
                .with_overlay(Axis::Beta, BETA_OVERLAY.to_vec()),
            FigureId::Fig2a => vs_alpha(base(eta_fast, 1.0, 0.0, 0.0, 0.03, 501, PI / 5.0))
                .with_overlay(Axis::Eta, ETA_OVERLAY.to_vec()),
            FigureId::Fig2b => vs_alpha(base(eta_slow, 0.4, 0.0, 0.0, 0.03, 501, PI / 5.0))
                .with_overlay(Axis::G, G_OVERLAY.to_vec()),
            FigureId::Fig2c => vs_alpha(base(eta_fast, 1.0, 0.0, 0.0, 0.03, 501, PI / 3.0))
                .with_overlay(Axis::N, N_OVERLAY.to_vec()),
            FigureId::Fig2d => vs_alpha(base(eta_slow, 1.0, 0.0, 0.0, 0.03, 501, PI / 5.0))
                .with_overlay(Axis::Gamma, GAMMA_OVERLAY.to_vec()),
            FigureId::Fig3 => vs_lambda(base(eta_fast, 1.0, 0.0, 0.0, 0.03, 501, PI / 3.0))
                .with_overlay(Axis::Alpha, ALPHA_OVERLAY.to_vec()),
            FigureId::Fig4a => vs_lambda(base(eta_fast, 1.0, 0.2, 0.0, 0.03, 501, PI / 5.0))
                .with_overlay(Axis::Eta, ETA_OVERLAY.to_vec()),
            FigureId::Fig4b => vs_lambda(base(eta_fast, 1.0, 0.2, 0.0, 0.03, 501, PI / 5.0))
                .with_overlay(Axis::Beta, BETA_OVERLAY.to_vec()),
            FigureId::Fig4c => vs_lambda(base(eta_fast, 1.0, 0.2, 0.0, 0.03, 501, PI / 3.0))
                .with_overlay(Axis::N, N_OVERLAY.to_vec()),
            FigureId::Fig4d => vs_lambda(base(eta_slow, 1.0, 0.2, 0.0, 0.03, 501, PI / 5.0))
                .with_overlay(Axis::Gamma, GAMMA_OVERLAY.to_vec()),
        };
        FigurePreset { id, spec }
    }
}
