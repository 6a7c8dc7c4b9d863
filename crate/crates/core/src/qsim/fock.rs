use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_TAIL_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// ceil(|α|² + 6|α| + 10): covers the Poisson tail of every amplitude used here.
pub fn default_dim(alpha_abs: f64) -> usize {
    (alpha_abs * alpha_abs + 6.0 * alpha_abs + 10.0).ceil() as usize
}

/// Amplitudes c₀..c_{N−1} of a single mode in the number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub amps: Vec<Complex64>,
    /// Probability mass discarded by the truncation.
    pub tail_mass: f64,
}

impl FockVector {
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }
}

// Poisson weight mass beyond `dim` and the smallest dim that brings it under `tol`.
fn poisson_tail(mean: f64, dim: usize, tol: f64) -> (f64, usize) {
    if mean == 0.0 {
        return (0.0, dim.max(1));
    }
    let mut log_p = -mean;
    for n in 1..=dim {
        log_p += mean.ln() - (n as f64).ln();
    }
    // Terms from n = dim upward, summed smallest-last until negligible.
    let mut terms = Vec::new();
    let mut n = dim;
    let mut lp = log_p;
    loop {
        let t = lp.exp();
        terms.push(t);
        n += 1;
        lp += mean.ln() - (n as f64).ln();
        if n as f64 > mean && lp.exp() < 1e-40 {
            break;
        }
    }
    let tail: f64 = terms.iter().rev().sum();
    let mut remaining = tail;
    let mut required = dim;
    for t in &terms {
        if remaining <= tol {
            break;
        }
        remaining -= t;
        required += 1;
    }
    (tail, required)
}

/// Truncated coherent state, c_n = e^(−|α|²/2) αⁿ/√(n!) for n < dim.
pub fn coherent_state(alpha: Complex64, dim: usize, tail_tol: f64) -> Result<FockVector> {
    if dim == 0 {
        return Err(Error::BadDimension("dim must be >= 1".into()));
    }
    let mean = alpha.norm_sqr();
    let (tail_mass, required_dim) = poisson_tail(mean, dim, tail_tol);
    if tail_mass > tail_tol {
        return Err(Error::TruncationTooSevere { dim, tail_mass, tail_tol, required_dim });
    }
    Ok(FockVector { amps: coherent_amps(alpha, dim), tail_mass })
}

pub(crate) fn coherent_amps(alpha: Complex64, dim: usize) -> Vec<Complex64> {
    let mut amps = Vec::with_capacity(dim);
    let mut c = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    amps.push(c);
    for n in 1..dim {
        c = c * alpha / (n as f64).sqrt();
        amps.push(c);
    }
    amps
}

/// Joint amplitudes ψ(n, m) of |n⟩_a|m⟩_b; rows index mode a.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    pub amps: DMatrix<Complex64>,
}

impl TwoModeState {
    pub fn product(a: &FockVector, b: &FockVector) -> Self {
        TwoModeState { amps: DMatrix::from_fn(a.dim(), b.dim(), |n, m| a.amps[n] * b.amps[m]) }
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn normalized(mut self) -> Self {
        let norm = self.norm_sq().sqrt();
        self.amps.unscale_mut(norm);
        self
    }

    pub fn inner(&self, other: &TwoModeState) -> Complex64 {
        self.amps.iter().zip(other.amps.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// ⟨a†a⟩ and ⟨b†b⟩ for the (possibly unnormalized) state.
    pub fn mean_photons(&self) -> (f64, f64) {
        let norm = self.norm_sq();
        let (mut na, mut nb) = (0.0, 0.0);
        for n in 0..self.amps.nrows() {
            for m in 0..self.amps.ncols() {
                let p = self.amps[(n, m)].norm_sqr();
                na += n as f64 * p;
                nb += m as f64 * p;
            }
        }
        (na / norm, nb / norm)
    }
}

/// |⟨a|b⟩|² / (⟨a|a⟩⟨b|b⟩).
pub fn fidelity(a: &TwoModeState, b: &TwoModeState) -> f64 {
    a.inner(b).norm_sqr() / (a.norm_sq() * b.norm_sq())
}

/// exp(−iφ a†a b†b): amplitude (n, m) picks up e^(−iφnm).
pub fn cross_kerr(state: &TwoModeState, phi: f64) -> TwoModeState {
    let mut out = state.clone();
    for n in 0..out.amps.nrows() {
        for m in 0..out.amps.ncols() {
            out.amps[(n, m)] *= Complex64::from_polar(1.0, -phi * (n * m) as f64);
        }
    }
    out
}

/// Σ_m e^(−|β|²/2) βᵐ/√(m!) |α e^(−iφm)⟩_a ⊗ |m⟩_b, built column by column.
pub fn evolve_coherent_pair(alpha: Complex64, beta: Complex64, phi: f64, dim: usize) -> Result<TwoModeState> {
    coherent_state(alpha, dim, DEFAULT_TAIL_TOL)?;
    let b = coherent_state(beta, dim, DEFAULT_TAIL_TOL)?;
    let mut amps = DMatrix::from_element(dim, dim, ZERO);
    for (m, bm) in b.amps.iter().enumerate() {
        let rotated = alpha * Complex64::from_polar(1.0, -phi * m as f64);
        for (n, an) in coherent_amps(rotated, dim).into_iter().enumerate() {
            amps[(n, m)] = an * bm;
        }
    }
    Ok(TwoModeState { amps })
}

/// ‖|α⟩|β⟩ + |−α⟩|−β⟩‖² = 2 + 2 Re(⟨−α|α⟩⟨−β|β⟩) = 2 + 2e^(−2(|α|²+|β|²)).
pub fn ecs_norm_sq(alpha: Complex64, beta: Complex64) -> f64 {
    let overlap = (-2.0 * alpha.norm_sqr()).exp() * (-2.0 * beta.norm_sqr()).exp();
    2.0 + 2.0 * overlap
}

#[derive(Debug, Clone)]
pub struct CatTarget {
    /// ½(|α⟩(|β⟩ + |−β⟩) + |−α⟩(|β⟩ − |−β⟩)).
    pub psi_f: TwoModeState,
    /// (|α⟩|β⟩ + |−α⟩|−β⟩)/√N with N from [`ecs_norm_sq`].
    pub entangled_coherent: TwoModeState,
    pub norm_sq: f64,
}

pub fn cat_target(alpha: Complex64, beta: Complex64, dim: usize) -> Result<CatTarget> {
    let a_plus = coherent_state(alpha, dim, DEFAULT_TAIL_TOL)?;
    let b_plus = coherent_state(beta, dim, DEFAULT_TAIL_TOL)?;
    let a_minus = coherent_state(-alpha, dim, DEFAULT_TAIL_TOL)?;
    let b_minus = coherent_state(-beta, dim, DEFAULT_TAIL_TOL)?;

    let even: Vec<Complex64> = b_plus.amps.iter().zip(&b_minus.amps).map(|(p, m)| p + m).collect();
    let odd: Vec<Complex64> = b_plus.amps.iter().zip(&b_minus.amps).map(|(p, m)| p - m).collect();
    let psi_f = DMatrix::from_fn(dim, dim, |n, m| 0.5 * (a_plus.amps[n] * even[m] + a_minus.amps[n] * odd[m]));

    let norm_sq = ecs_norm_sq(alpha, beta);
    let scale = norm_sq.sqrt();
    let ecs = DMatrix::from_fn(dim, dim, |n, m| {
        (a_plus.amps[n] * b_plus.amps[m] + a_minus.amps[n] * b_minus.amps[m]) / scale
    });

    Ok(CatTarget { psi_f: TwoModeState { amps: psi_f }, entangled_coherent: TwoModeState { amps: ecs }, norm_sq })
}
