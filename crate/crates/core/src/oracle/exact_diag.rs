use faer::{Col, Mat, Side};
use num_complex::Complex64;

use crate::chain::ModelParams;
use crate::error::{Error, Result};

/// Largest chain handled by [`exact_diag_oracle`].
pub const MAX_EXACT_SITES: usize = 12;
/// Largest chain for which [`full_hamiltonian`] assembles the `2^(N+1)` matrix.
pub const MAX_FULL_SITES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pauli {
    X,
    Y,
    Z,
}

/// Applies `op` at `site` to basis state `state` (bit set = spin down).
#[inline]
fn apply(op: Pauli, site: usize, state: usize, amp: Complex64) -> (usize, Complex64) {
    let down = (state >> site) & 1 == 1;
    let sign = if down { -1.0 } else { 1.0 };
    match op {
        Pauli::X => (state ^ (1 << site), amp),
        Pauli::Y => (state ^ (1 << site), amp * Complex64::new(0.0, sign)),
        Pauli::Z => (state, amp * sign),
    }
}

/// `sigma^z` eigenvalue product of the chain: even or odd number of down spins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn of(state: usize) -> Parity {
        if state.count_ones().is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// One term of the chain Hamiltonian: coefficient and Pauli string, applied right to left.
type Term = (f64, Vec<(Pauli, usize)>);

fn chain_terms(n: usize, gamma: f64, alpha: f64, field: f64) -> Vec<Term> {
    let mut terms = Vec::new();
    for l in 0..n {
        let next = (l + 1) % n;
        let prev = (l + n - 1) % n;
        terms.push((-(1.0 + gamma) / 2.0, vec![(Pauli::X, l), (Pauli::X, next)]));
        terms.push((-(1.0 - gamma) / 2.0, vec![(Pauli::Y, l), (Pauli::Y, next)]));
        terms.push((-field, vec![(Pauli::Z, l)]));
        terms.push((-alpha, vec![(Pauli::X, prev), (Pauli::Z, l), (Pauli::X, next)]));
        terms.push((-alpha, vec![(Pauli::Y, prev), (Pauli::Z, l), (Pauli::Y, next)]));
    }
    terms
}

fn act(term: &Term, state: usize) -> (usize, Complex64) {
    term.1
        .iter()
        .rev()
        .fold((state, Complex64::new(term.0, 0.0)), |(s, a), &(op, site)| apply(op, site, s, a))
}

/// Chain Hamiltonian at transverse field `field`, optionally restricted to
/// one parity sector. Sector states are ordered by increasing bit pattern.
pub fn chain_hamiltonian(n: usize, gamma: f64, alpha: f64, field: f64, sector: Option<Parity>) -> Mat<f64> {
    let dim = 1usize << n;
    let states: Vec<usize> = (0..dim)
        .filter(|&s| sector.is_none_or(|p| Parity::of(s) == p))
        .collect();
    let mut index = vec![usize::MAX; dim];
    for (i, &s) in states.iter().enumerate() {
        index[s] = i;
    }
    let terms = chain_terms(n, gamma, alpha, field);
    let mut h = Mat::<f64>::zeros(states.len(), states.len());
    for (col, &s) in states.iter().enumerate() {
        for term in &terms {
            let (target, amp) = act(term, s);
            debug_assert!(amp.im == 0.0, "chain Hamiltonian is real in the z basis");
            h[(index[target], col)] += amp.re;
        }
    }
    h
}

/// Qubit plus chain Hamiltonian on `2^(N+1)` states. Index `q * 2^N + s`
/// with `q = 0` for `|e>` and `q = 1` for `|g>`.
pub fn full_hamiltonian(params: &ModelParams) -> Result<Mat<f64>> {
    params.validate()?;
    let n = params.n;
    if n > MAX_FULL_SITES {
        return Err(Error::DimensionTooLarge { n, max: MAX_FULL_SITES });
    }
    let chain_dim = 1usize << n;
    let mut h = Mat::<f64>::zeros(2 * chain_dim, 2 * chain_dim);
    let bare = chain_terms(n, params.gamma, params.alpha, params.lambda);
    for q in 0..2 {
        let qubit_z = if q == 0 { 1.0 } else { -1.0 };
        let offset = q * chain_dim;
        for s in 0..chain_dim {
            h[(offset + s, offset + s)] += params.eta * qubit_z;
            for term in &bare {
                let (target, amp) = act(term, s);
                h[(offset + target, offset + s)] += amp.re;
            }
            // -g sigma_0^z sum_l sigma_l^z
            for l in 0..n {
                let (target, amp) = apply(Pauli::Z, l, s, Complex64::new(-params.g * qubit_z, 0.0));
                h[(offset + target, offset + s)] += amp.re;
            }
        }
    }
    Ok(h)
}

struct SectorEvolution {
    energies: Vec<f64>,
    vectors: Mat<f64>,
    /// Ground state expanded in this eigenbasis.
    coefficients: Col<f64>,
}

impl SectorEvolution {
    fn new(h: &Mat<f64>, ground: &Col<f64>) -> Result<Self> {
        let evd = h
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Parse(format!("eigendecomposition failed: {e:?}")))?;
        let energies = (0..h.nrows()).map(|i| evd.S().column_vector()[i]).collect();
        let vectors = evd.U().to_owned();
        let coefficients = vectors.transpose() * ground;
        Ok(SectorEvolution {
            energies,
            vectors,
            coefficients,
        })
    }

    /// `exp(-i H t) |G>` as real and imaginary parts.
    fn evolve(&self, t: f64) -> (Col<f64>, Col<f64>) {
        let n = self.energies.len();
        let re = Col::<f64>::from_fn(n, |i| (self.energies[i] * t).cos() * self.coefficients[i]);
        let im = Col::<f64>::from_fn(n, |i| -(self.energies[i] * t).sin() * self.coefficients[i]);
        (&self.vectors * &re, &self.vectors * &im)
    }
}

/// Precomputed spectra for evaluating the exact decoherence factor at many instants.
pub struct ExactEvolution {
    excited: SectorEvolution,
    ground: SectorEvolution,
    parity: Parity,
}

impl ExactEvolution {
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        let n = params.n;
        if n > MAX_EXACT_SITES {
            return Err(Error::DimensionTooLarge { n, max: MAX_EXACT_SITES });
        }
        let (gamma, alpha) = (params.gamma, params.alpha);
        // chain ground state: lowest level over both parity sectors
        let mut best: Option<(f64, Parity, Col<f64>)> = None;
        for parity in [Parity::Even, Parity::Odd] {
            let h = chain_hamiltonian(n, gamma, alpha, params.lambda, Some(parity));
            let evd = h
                .self_adjoint_eigen(Side::Lower)
                .map_err(|e| Error::Parse(format!("eigendecomposition failed: {e:?}")))?;
            let e0 = evd.S().column_vector()[0];
            if best.as_ref().is_none_or(|(e, _, _)| e0 < *e) {
                best = Some((e0, parity, evd.U().col(0).to_owned()));
            }
        }
        let (_, parity, g) = best.expect("two sectors were diagonalized");
        let fields = params.effective_field();
        let excited = SectorEvolution::new(&chain_hamiltonian(n, gamma, alpha, fields.lambda0, Some(parity)), &g)?;
        let ground = SectorEvolution::new(&chain_hamiltonian(n, gamma, alpha, fields.lambda1, Some(parity)), &g)?;
        Ok(ExactEvolution {
            excited,
            ground,
            parity,
        })
    }

    pub fn ground_parity(&self) -> Parity {
        self.parity
    }

    /// Qubit coherence `rho_eg(t) / rho_eg(0)` with the free precession
    /// `exp(-2 i eta t)` divided out.
    pub fn factor(&self, t: f64) -> Complex64 {
        let (re0, im0) = self.excited.evolve(t);
        let (re1, im1) = self.ground.evolve(t);
        let dot = |a: &Col<f64>, b: &Col<f64>| (0..a.nrows()).map(|i| a[i] * b[i]).sum::<f64>();
        // <psi_1 | psi_0>
        Complex64::new(dot(&re1, &re0) + dot(&im1, &im0), dot(&re1, &im0) - dot(&im1, &re0))
    }
}

/// Decoherence factor from dense exact diagonalization of the spin
/// Hamiltonian. The Hamiltonian is block diagonal in `sigma_0^z`, so each
/// qubit branch evolves the chain ground state under its own block.
pub fn exact_diag_oracle(params: &ModelParams, t: f64) -> Result<Complex64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::param("t", format!("must be finite and >= 0, got {t}")));
    }
    Ok(ExactEvolution::new(params)?.factor(t))
}
