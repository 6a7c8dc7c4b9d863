//! Qubit–probe interaction and x-quadrature conditioning, with
//! x = (a + a†)/√2 so a real coherent amplitude α peaks at √2α.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fock::{coherent_state, DEFAULT_TAIL_TOL};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const MIN_DENSITY: f64 = 1e-300;

/// Two-qubit amplitudes indexed `[qubit_a][qubit_b]`, 0 = H, 1 = V.
pub type QubitPair = [[Complex64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitState {
    pub c0: Complex64,
    pub c1: Complex64,
}

impl QubitState {
    pub fn new(c0: Complex64, c1: Complex64) -> Result<Self> {
        let norm = c0.norm_sqr() + c1.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(QubitState { c0, c1 })
    }

    /// (|H⟩ + |V⟩)/√2.
    pub fn balanced() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        QubitState { c0: h, c1: h }
    }

    pub fn horizontal() -> Self {
        QubitState { c0: Complex64::new(1.0, 0.0), c1: ZERO }
    }

    fn amp(&self, k: usize) -> Complex64 {
        if k == 0 {
            self.c0
        } else {
            self.c1
        }
    }
}

/// Qubit a ⊗ qubit b ⊗ probe mode, normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreePartyState {
    /// Probe amplitudes per qubit branch, `[qa][qb][n]`.
    pub amps: [[Vec<Complex64>; 2]; 2],
    pub alpha: Complex64,
    pub phi: f64,
}

impl ThreePartyState {
    pub fn dim(&self) -> usize {
        self.amps[0][0].len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().flatten().flatten().map(|c| c.norm_sqr()).sum()
    }
}

/// Probe phase picked up by branch (qa, qb): HH and VV none, HV e^{+iφ}, VH e^{−iφ}.
fn branch_phase(qa: usize, qb: usize, phi: f64) -> f64 {
    match (qa, qb) {
        (0, 1) => phi,
        (1, 0) => -phi,
        _ => 0.0,
    }
}

pub fn qubit_probe_interact(
    qa: &QubitState,
    qb: &QubitState,
    alpha: Complex64,
    phi: f64,
    dim: usize,
) -> Result<ThreePartyState> {
    let mut amps: [[Vec<Complex64>; 2]; 2] = Default::default();
    for (a, row) in amps.iter_mut().enumerate() {
        for (b, slot) in row.iter_mut().enumerate() {
            let probe =
                coherent_state(alpha * Complex64::from_polar(1.0, branch_phase(a, b, phi)), dim, DEFAULT_TAIL_TOL)?;
            let weight = qa.amp(a) * qb.amp(b);
            *slot = probe.amps.iter().map(|c| weight * c).collect();
        }
    }
    let mut state = ThreePartyState { amps, alpha, phi };
    let norm = state.norm_sq().sqrt();
    state.amps.iter_mut().flatten().flatten().for_each(|c| *c /= norm);
    Ok(state)
}

/// ⟨x|n⟩ for n < dim via the three-term recurrence
/// ψ_{n+1} = √(2/(n+1)) x ψ_n − √(n/(n+1)) ψ_{n−1}.
pub fn hermite_functions(x: f64, dim: usize) -> Vec<f64> {
    let mut psi = Vec::with_capacity(dim);
    if dim == 0 {
        return psi;
    }
    psi.push(PI.powf(-0.25) * (-0.5 * x * x).exp());
    if dim > 1 {
        psi.push(SQRT_2 * x * psi[0]);
    }
    for n in 1..dim.saturating_sub(1) {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * psi[n] - (nf / (nf + 1.0)).sqrt() * psi[n - 1];
        psi.push(next);
    }
    psi
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// Probe left at α: qubits in c₀d₀|HH⟩ + c₁d₁|VV⟩.
    Unshifted,
    /// Probe rotated by ±φ: qubits in c₀d₁|HV⟩ + c₁d₀|VH⟩.
    Shifted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomodyneSample {
    pub x: f64,
    pub outcome: Outcome,
    pub post_state: QubitPair,
    pub probability_density: f64,
}

/// Midpoint between the unshifted (√2|α|) and shifted (√2|α|cos φ) branch means.
pub fn classification_threshold(alpha: Complex64, phi: f64) -> f64 {
    SQRT_2 * alpha.norm() * (1.0 + phi.cos()) / 2.0
}

/// Phase of the VH branch wavefunction relative to HV at quadrature value x
/// (real-α convention): θ(x) = −2√2|α| sin φ · x + |α|² sin 2φ.
pub fn phase_correction(alpha: Complex64, phi: f64, x: f64) -> f64 {
    let a = alpha.norm();
    -2.0 * SQRT_2 * a * phi.sin() * x + a * a * (2.0 * phi).sin()
}

/// Unnormalized conditioned qubit amplitudes ⟨x|ψ⟩ per branch.
fn project(state: &ThreePartyState, x: f64) -> QubitPair {
    let psi = hermite_functions(x, state.dim());
    let mut m = [[ZERO; 2]; 2];
    for (a, row) in state.amps.iter().enumerate() {
        for (b, probe) in row.iter().enumerate() {
            m[a][b] = probe.iter().zip(&psi).map(|(c, h)| c * h).sum();
        }
    }
    m
}

/// Marginal density p(x) of the probe quadrature.
pub fn marginal_density(state: &ThreePartyState, x: f64) -> f64 {
    project(state, x).iter().flatten().map(|c| c.norm_sqr()).sum()
}

pub(crate) fn branch_densities(state: &ThreePartyState, x: f64) -> (f64, f64) {
    let m = project(state, x);
    let unshifted = m[0][0].norm_sqr() + m[1][1].norm_sqr();
    let shifted = m[0][1].norm_sqr() + m[1][0].norm_sqr();
    (unshifted, shifted)
}

/// Projects the probe onto ⟨x| and renormalizes the two-qubit remainder.
pub fn homodyne_condition(state: &ThreePartyState, x: f64) -> Result<HomodyneSample> {
    let norm = state.norm_sq();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized(norm));
    }
    let m = project(state, x);
    let density: f64 = m.iter().flatten().map(|c| c.norm_sqr()).sum();
    if !(density >= MIN_DENSITY) {
        return Err(Error::ZeroDensity { x, density });
    }
    let scale = density.sqrt();
    let post_state = m.map(|row| row.map(|c| c / scale));
    let outcome =
        if x >= classification_threshold(state.alpha, state.phi) { Outcome::Unshifted } else { Outcome::Shifted };
    Ok(HomodyneSample { x, outcome, post_state, probability_density: density })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::concurrence;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Closed-form coherent-state wavefunction ⟨x|β⟩ for x = (a + a†)/√2.
    fn coherent_wavefunction(beta: Complex64, x: f64) -> Complex64 {
        let (re, im) = (beta.re, beta.im);
        let envelope = PI.powf(-0.25) * (-(x - SQRT_2 * re).powi(2) / 2.0).exp();
        Complex64::from_polar(envelope, SQRT_2 * im * x - re * im)
    }

    #[test]
    fn hermite_functions_are_orthonormal() {
        let dim = 12;
        let (lo, hi, n) = (-12.0, 12.0, 4001);
        let h = (hi - lo) / (n - 1) as f64;
        let table: Vec<Vec<f64>> = (0..n).map(|k| hermite_functions(lo + h * k as f64, dim)).collect();
        for i in 0..dim {
            for j in 0..dim {
                let s: f64 = table.iter().map(|row| row[i] * row[j]).sum::<f64>() * h;
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((s - expected).abs() < 1e-10, "({i},{j}) = {s}");
            }
        }
    }

    #[test]
    fn fock_projection_matches_closed_form() {
        for beta in [c(1.5, 0.0), c(-0.7, 1.1), c(0.0, -2.0)] {
            let v = coherent_state(beta, 40, 1e-12).unwrap();
            for x in [-3.0, -0.4, 0.0, 1.3, 2.9] {
                let psi = hermite_functions(x, 40);
                let via_fock: Complex64 = v.amps.iter().zip(&psi).map(|(a, h)| a * h).sum();
                assert!((via_fock - coherent_wavefunction(beta, x)).norm() < 1e-10, "beta = {beta}, x = {x}");
            }
        }
    }

    #[test]
    fn interaction_branches() {
        let (qa, qb) = (QubitState::balanced(), QubitState::balanced());
        let s = qubit_probe_interact(&qa, &qb, c(3.0, 0.0), PI, 37).unwrap();
        assert!((s.norm_sq() - 1.0).abs() < 1e-14);
        let diff: f64 = s.amps[0][1].iter().zip(&s.amps[1][0]).map(|(a, b)| (a - b).norm()).sum();
        assert!(diff < 1e-12, "HV and VH should share |-alpha>");
        let minus = coherent_state(c(-3.0, 0.0), 37, 1e-10).unwrap();
        let overlap: Complex64 = minus.amps.iter().zip(&s.amps[0][1]).map(|(a, b)| a.conj() * b).sum();
        assert!((overlap.norm() - 0.5).abs() < 1e-9);

        let hh =
            qubit_probe_interact(&QubitState::horizontal(), &QubitState::horizontal(), c(2.0, 0.0), 0.7, 30).unwrap();
        assert!(hh.amps[0][1].iter().chain(&hh.amps[1][0]).chain(&hh.amps[1][1]).all(|c| *c == ZERO));
    }

    #[test]
    fn uncorrelated_probe_leaves_product() {
        let qa = QubitState::new(c(0.6, 0.0), c(0.0, 0.8)).unwrap();
        let qb = QubitState::new(c(0.28, 0.0), c(0.96, 0.0)).unwrap();
        let s = qubit_probe_interact(&qa, &qb, c(1.5, 0.0), 0.0, 30).unwrap();
        for x in [-1.0, 0.5, 2.1, 3.0] {
            let sample = homodyne_condition(&s, x).unwrap();
            let phase = sample.post_state[0][0] / (qa.c0 * qb.c0);
            let phase = phase / phase.norm();
            for a in 0..2 {
                for b in 0..2 {
                    let expected = qa.amp(a) * qb.amp(b) * phase;
                    assert!((sample.post_state[a][b] - expected).norm() < 1e-12);
                }
            }
            assert!(concurrence(&sample.post_state).unwrap() < 1e-12);
        }
    }

    #[test]
    fn marginal_integrates_to_one() {
        for alpha in [0.5, 1.0, 2.0, 3.0] {
            let s =
                qubit_probe_interact(&QubitState::balanced(), &QubitState::balanced(), c(alpha, 0.0), PI, 40).unwrap();
            // Composite Simpson on [−10, 10].
            let n = 4000;
            let h = 20.0 / n as f64;
            let mut sum = marginal_density(&s, -10.0) + marginal_density(&s, 10.0);
            for k in 1..n {
                let w = if k % 2 == 1 { 4.0 } else { 2.0 };
                sum += w * marginal_density(&s, -10.0 + h * k as f64);
            }
            let total = sum * h / 3.0;
            assert!((total - 1.0).abs() < 1e-6, "alpha = {alpha}: {total}");
        }
    }

    #[test]
    fn peak_outcome_is_bell_state() {
        let alpha = 3.0;
        // Truncation error of the default dim (37) alone is ~3e-7 at x = √2α;
        // dim 60 pushes it far below the e^(−2α²) bound.
        let s = qubit_probe_interact(&QubitState::balanced(), &QubitState::balanced(), c(alpha, 0.0), PI, 60).unwrap();
        let x = SQRT_2 * alpha;
        let sample = homodyne_condition(&s, x).unwrap();
        assert_eq!(sample.outcome, Outcome::Unshifted);
        let m = sample.post_state;
        // Closed form: admixture relative amplitude ψ_{−α}(x)/ψ_α(x) = e^(−4α²).
        let admixture = m[0][1].norm() / m[0][0].norm();
        let oracle = coherent_wavefunction(c(-alpha, 0.0), x).norm() / coherent_wavefunction(c(alpha, 0.0), x).norm();
        assert!(admixture <= (-2.0 * alpha * alpha).exp(), "admixture {admixture:e} oracle {oracle:e}");
        assert!((admixture - oracle).abs() < 1e-12);
        assert!((m[0][0] - m[1][1]).norm() < 1e-12);
        assert!((concurrence(&m).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_density_far_out() {
        let s = qubit_probe_interact(&QubitState::balanced(), &QubitState::balanced(), c(1.0, 0.0), PI, 20).unwrap();
        assert!(matches!(homodyne_condition(&s, 60.0), Err(Error::ZeroDensity { .. })));
    }

    #[test]
    fn phase_correction_cancels_relative_phase() {
        let (alpha, phi) = (c(1.2, 0.0), 0.9);
        for x in [-0.5, 0.3, 1.7] {
            let plus = coherent_wavefunction(alpha * Complex64::from_polar(1.0, phi), x);
            let minus = coherent_wavefunction(alpha * Complex64::from_polar(1.0, -phi), x);
            let rel = (minus / plus).arg();
            let theta = phase_correction(alpha, phi, x);
            let wrapped = (rel - theta).rem_euclid(2.0 * PI);
            assert!(wrapped < 1e-12 || (2.0 * PI - wrapped) < 1e-12);
        }
        assert!(phase_correction(c(3.0, 0.0), PI, 2.0).abs() < 1e-12);
    }

    #[test]
    fn qubit_normalization_checked() {
        assert!(matches!(QubitState::new(c(1.0, 0.0), c(1.0, 0.0)), Err(Error::NotNormalized(_))));
        assert_eq!(classification_threshold(c(3.0, 0.0), PI).abs(), 0.0);
        assert!((classification_threshold(c(3.0, 0.0), 0.0) - SQRT_2 * 3.0).abs() < 1e-15);
    }
}
