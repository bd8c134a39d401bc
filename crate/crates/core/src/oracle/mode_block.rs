use num_complex::Complex64;

use crate::chain::{bogoliubov_angle, ModelParams};
use crate::error::{Error, Result};

type Mat2 = [[Complex64; 2]; 2];

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Hamiltonian of one `(k, -k)` pair restricted to the even-parity subspace
/// `{|0>_k |0>_-k, |1>_k |1>_-k}`.
///
/// The matrix is `[[-eps, i delta], [-i delta, eps]]` with
/// `eps = 2 (Lambda - cos ka - 2 alpha cos 2ka)` and `delta = 2 gamma sin ka`,
/// so its eigenvalues are `-Omega` and `+Omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeBlock {
    pub k: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub matrix: Mat2,
}

pub fn build_mode_block(field: f64, gamma: f64, alpha: f64, ka: f64) -> ModeBlock {
    let epsilon = 2.0 * (field - ka.cos() - 2.0 * alpha * (2.0 * ka).cos());
    let delta = 2.0 * gamma * ka.sin();
    let zero = Complex64::new(0.0, 0.0);
    let matrix = [
        [Complex64::new(-epsilon, 0.0) + zero, I * delta],
        [-I * delta, Complex64::new(epsilon, 0.0)],
    ];
    ModeBlock {
        k: 0,
        epsilon,
        delta,
        matrix,
    }
}

impl ModeBlock {
    /// Positive eigenvalue; the spectrum is `{-energy, +energy}`.
    pub fn energy(&self) -> f64 {
        self.epsilon.hypot(self.delta)
    }

    pub fn spectral_gap(&self) -> f64 {
        2.0 * self.energy()
    }

    /// Normalized eigenvector of `-energy`, phased so its first component is
    /// real and non-negative (the second one when the first vanishes).
    pub fn ground_vector(&self) -> [Complex64; 2] {
        let e = self.energy();
        if e == 0.0 {
            return [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        }
        let h = &self.matrix;
        // both rows of (H + e) v = 0 give a candidate; keep the better conditioned one
        let from_first = [h[0][1], -(h[0][0] + e)];
        let from_second = [-(h[1][1] + e), h[1][0]];
        let norm = |v: &[Complex64; 2]| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        let v = if norm(&from_first) >= norm(&from_second) {
            from_first
        } else {
            from_second
        };
        let n = norm(&v);
        let lead = if v[0].norm() > 1e-12 * n { v[0] } else { v[1] };
        let phase = lead.conj() / lead.norm();
        [v[0] * phase / n, v[1] * phase / n]
    }

    /// `exp(-i H t) = cos(E t) 1 - i sin(E t) H / E`, using `H^2 = E^2 1`.
    pub fn propagator(&self, t: f64) -> Mat2 {
        let e = self.energy();
        let (s, c) = (e * t).sin_cos();
        let ratio = if e == 0.0 { t } else { s / e };
        let h = &self.matrix;
        let mut u = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in u.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                let id = if i == j { c } else { 0.0 };
                *x = Complex64::new(id, 0.0) - I * h[i][j] * ratio;
            }
        }
        u
    }
}

fn apply(m: &Mat2, v: &[Complex64; 2]) -> [Complex64; 2] {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

/// Complex decoherence factor `<G| U_1^dagger(t) U_0(t) |G>` from explicit
/// per-mode unitary evolution.
pub fn mode_overlap_oracle(params: &ModelParams, t: f64) -> Result<Complex64> {
    params.validate()?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::param("t", format!("must be finite and >= 0, got {t}")));
    }
    let grid = params.mode_grid()?;
    let fields = params.effective_field();
    let mut f = Complex64::new(1.0, 0.0);
    for k in grid.momenta() {
        let ka = grid.phase(k);
        let theta = bogoliubov_angle(params.lambda, params.gamma, params.alpha, ka);
        let psi = [
            Complex64::new((0.5 * theta).cos(), 0.0),
            I * (0.5 * theta).sin(),
        ];
        let b0 = build_mode_block(fields.lambda0, params.gamma, params.alpha, ka);
        let b1 = build_mode_block(fields.lambda1, params.gamma, params.alpha, ka);
        let forward = apply(&b0.propagator(t), &psi);
        // exp(+i H1 t) is the propagator at -t
        let back = apply(&b1.propagator(-t), &forward);
        f *= psi[0].conj() * back[0] + psi[1].conj() * back[1];
    }
    Ok(f)
}
