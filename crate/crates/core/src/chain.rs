//! Model parameters, the quasi-momentum grid and per-mode spectral data of
//! the XY chain with three-spin interaction.
//!
//! After the Jordan-Wigner and Fourier transforms every pair of modes
//! `(k, -k)` decouples. Mode `k` is described by two closed forms:
//!
//! ```text
//! Omega_k(L) = 2 sqrt((L - cos ka - 2 alpha cos 2ka)^2 + gamma^2 sin^2 ka)
//! theta_k(L) = atan2(gamma sin ka, L - cos ka - 2 alpha cos 2ka)
//! ```
//!
//! where `L` is the effective transverse field seen by the chain. The central
//! qubit shifts the field to `lambda + g` or `lambda - g` depending on its
//! `sigma_z` eigenvalue, and the mixing angle between the bare and shifted
//! quasiparticles is half the difference of the two Bogoliubov angles.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Physical constants of the qubit + chain Hamiltonian and the qubit's
/// initial polar angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Qubit transition frequency. The quasi period is `2 pi / eta`.
    pub eta: f64,
    /// XX/YY anisotropy; `gamma = 1` is the Ising limit.
    pub gamma: f64,
    /// Three-spin (XZX + YZY) coupling strength.
    pub alpha: f64,
    /// Transverse field.
    pub lambda: f64,
    /// Qubit-chain coupling.
    pub g: f64,
    /// Number of chain sites.
    pub n: usize,
    /// Polar angle of the qubit's initial state, in `[0, pi]`.
    pub beta: f64,
}

impl Default for ModelParams {
    /// Ising chain without field, `N = 501`, `g = 0.03`, `eta = 2 pi / 3`, `beta = pi / 5`.
    fn default() -> Self {
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
}

impl ModelParams {
    pub fn new(eta: f64, gamma: f64, alpha: f64, lambda: f64, g: f64, n: usize, beta: f64) -> Result<Self> {
        let p = ModelParams {
            eta,
            gamma,
            alpha,
            lambda,
            g,
            n,
            beta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(Error::param("eta", format!("must be finite and > 0, got {}", self.eta)));
        }
        if self.n < 2 {
            return Err(Error::param("N", format!("must be >= 2, got {}", self.n)));
        }
        if !(self.g.is_finite() && self.g >= 0.0) {
            return Err(Error::param("g", format!("must be finite and >= 0, got {}", self.g)));
        }
        if !(0.0..=PI).contains(&self.beta) {
            return Err(Error::param("beta", format!("must lie in [0, pi], got {}", self.beta)));
        }
        for (name, v) in [("gamma", self.gamma), ("alpha", self.alpha), ("lambda", self.lambda)] {
            if !v.is_finite() {
                return Err(Error::param(name, format!("must be finite, got {v}")));
            }
        }
        Ok(())
    }

    /// Cycle `2 pi / eta` of the isolated qubit.
    pub fn period(&self) -> f64 {
        TAU / self.eta
    }

    pub fn effective_field(&self) -> EffectiveField {
        EffectiveField::new(self.lambda, self.g)
    }

    pub fn field(&self, which: Field) -> f64 {
        self.effective_field().get(which)
    }

    /// Signed distance `lambda - 1 - 2 alpha` from the small-k critical line.
    pub fn critical_distance(&self) -> f64 {
        self.lambda - 1.0 - 2.0 * self.alpha
    }

    pub fn mode_grid(&self) -> Result<ModeGrid> {
        ModeGrid::new(self.n)
    }
}

/// Quasi-momenta `k = 1..=M` of an `N`-site ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeGrid {
    n: usize,
    m: usize,
}

impl ModeGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::param("N", format!("must be >= 2, got {n}")));
        }
        Ok(ModeGrid { n, m: n / 2 })
    }

    pub fn sites(&self) -> usize {
        self.n
    }

    /// Number of retained modes: `N/2` for even `N`, `(N-1)/2` for odd `N`.
    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    /// Lattice phase `a = 2 pi / N`.
    pub fn lattice_phase(&self) -> f64 {
        TAU / self.n as f64
    }

    /// Phase `k a` of mode `k`, computed from the integer index.
    pub fn phase(&self, k: usize) -> f64 {
        phase(k, self.n)
    }

    pub fn momenta(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.m
    }
}

pub(crate) fn phase(k: usize, n: usize) -> f64 {
    TAU * k as f64 / n as f64
}

/// Which eigenvalue of the qubit's `sigma_z` the chain is conditioned on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    /// `Lambda_0 = lambda + g` (qubit excited).
    Zero,
    /// `Lambda_1 = lambda - g` (qubit in ground state).
    One,
}

impl Field {
    pub const BOTH: [Field; 2] = [Field::Zero, Field::One];

    /// `(-1)^n`.
    pub fn sign(self) -> f64 {
        match self {
            Field::Zero => 1.0,
            Field::One => -1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Field::Zero => 0,
            Field::One => 1,
        }
    }
}

impl TryFrom<u32> for Field {
    type Error = Error;

    fn try_from(n: u32) -> Result<Self> {
        match n {
            0 => Ok(Field::Zero),
            1 => Ok(Field::One),
            _ => Err(Error::param("n", format!("field index must be 0 or 1, got {n}"))),
        }
    }
}

/// The two conditional fields `lambda + g` and `lambda - g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveField {
    pub lambda0: f64,
    pub lambda1: f64,
}

impl EffectiveField {
    pub fn new(lambda: f64, g: f64) -> Self {
        EffectiveField {
            lambda0: lambda + g,
            lambda1: lambda - g,
        }
    }

    pub fn get(&self, which: Field) -> f64 {
        match which {
            Field::Zero => self.lambda0,
            Field::One => self.lambda1,
        }
    }
}

#[inline]
fn diagonal_term(field: f64, alpha: f64, ka: f64) -> f64 {
    field - ka.cos() - 2.0 * alpha * (2.0 * ka).cos()
}

/// Quasiparticle energy `Omega_{k,Lambda}` at phase `ka`.
pub fn dispersion(field: f64, gamma: f64, alpha: f64, ka: f64) -> f64 {
    let d = diagonal_term(field, alpha, ka);
    2.0 * d.hypot(gamma * ka.sin())
}

/// A value together with a flag marking that it was evaluated at a gapless
/// point, where the Bogoliubov angle is undefined and taken as zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flagged {
    pub value: f64,
    pub gapless: bool,
}

/// Bogoliubov angle `theta_k^Lambda` in `(-pi, pi]`, with its gapless flag.
pub fn bogoliubov_angle_flagged(field: f64, gamma: f64, alpha: f64, ka: f64) -> Flagged {
    let y = gamma * ka.sin();
    let x = diagonal_term(field, alpha, ka);
    if x == 0.0 && y == 0.0 {
        return Flagged {
            value: 0.0,
            gapless: true,
        };
    }
    let mut theta = y.atan2(x);
    // atan2(-0.0, x<0) = -pi
    if theta == -PI {
        theta = PI;
    }
    Flagged {
        value: theta,
        gapless: false,
    }
}

/// Bogoliubov angle `theta_k^Lambda` resolved with the two-argument
/// arctangent. Returns 0 at a gapless point.
pub fn bogoliubov_angle(field: f64, gamma: f64, alpha: f64, ka: f64) -> f64 {
    bogoliubov_angle_flagged(field, gamma, alpha, ka).value
}

/// Mixing angle `alpha_{k,Lambda_n} = (theta_k^{Lambda_n} - theta_k^lambda) / 2`.
pub fn mixing_angle(params: &ModelParams, which: Field, k: usize) -> Result<Flagged> {
    let grid = params.mode_grid()?;
    if !grid.momenta().contains(&k) {
        return Err(Error::param("k", format!("mode {k} not in 1..={}", grid.len())));
    }
    let ka = grid.phase(k);
    let shifted = bogoliubov_angle_flagged(params.field(which), params.gamma, params.alpha, ka);
    let bare = bogoliubov_angle_flagged(params.lambda, params.gamma, params.alpha, ka);
    Ok(Flagged {
        value: 0.5 * (shifted.value - bare.value),
        gapless: shifted.gapless || bare.gapless,
    })
}

/// Spectral data of one mode under both conditional fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpectrum {
    pub k: usize,
    /// `Omega_{k,Lambda_0}`, `Omega_{k,Lambda_1}`.
    pub omega: [f64; 2],
    /// Bogoliubov angle of the bare chain (`Lambda = lambda`).
    pub theta_bare: f64,
    /// `theta_k^{Lambda_0}`, `theta_k^{Lambda_1}`.
    pub theta: [f64; 2],
    /// `alpha_{k,Lambda_0}`, `alpha_{k,Lambda_1}`.
    pub mixing: [f64; 2],
}

/// Per-mode spectra for every retained momentum of a parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeAngles {
    modes: Vec<ModeSpectrum>,
    gapless: Vec<usize>,
}

impl ModeAngles {
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        let grid = params.mode_grid()?;
        let fields = params.effective_field();
        let (gamma, alpha) = (params.gamma, params.alpha);
        let mut gapless = Vec::new();
        let modes = grid
            .momenta()
            .map(|k| {
                let ka = grid.phase(k);
                let bare = bogoliubov_angle_flagged(params.lambda, gamma, alpha, ka);
                let t0 = bogoliubov_angle_flagged(fields.lambda0, gamma, alpha, ka);
                let t1 = bogoliubov_angle_flagged(fields.lambda1, gamma, alpha, ka);
                if bare.gapless || t0.gapless || t1.gapless {
                    gapless.push(k);
                }
                ModeSpectrum {
                    k,
                    omega: [
                        dispersion(fields.lambda0, gamma, alpha, ka),
                        dispersion(fields.lambda1, gamma, alpha, ka),
                    ],
                    theta_bare: bare.value,
                    theta: [t0.value, t1.value],
                    mixing: [0.5 * (t0.value - bare.value), 0.5 * (t1.value - bare.value)],
                }
            })
            .collect();
        Ok(ModeAngles { modes, gapless })
    }

    pub fn modes(&self) -> &[ModeSpectrum] {
        &self.modes
    }

    /// Momenta at which at least one Bogoliubov angle hit a gapless point.
    pub fn gapless_modes(&self) -> &[usize] {
        &self.gapless
    }
}
