use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fock::TwoModeState;
use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntanglementReport {
    /// Von Neumann entropy of either reduced state, bits.
    pub entropy: f64,
    /// Two-qubit pure states only.
    pub concurrence: Option<f64>,
}

/// Schmidt weights λ_k (squared singular values of the amplitude matrix),
/// sorted descending.
pub fn schmidt_probabilities(state: &TwoModeState) -> Result<Vec<f64>> {
    let norm = state.norm_sq();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let svd = state.amps.clone().svd(false, false);
    let mut probs: Vec<f64> = svd.singular_values.iter().map(|s| s * s / norm).collect();
    probs.sort_by(|a, b| b.total_cmp(a));
    Ok(probs)
}

/// −Σ λ log₂ λ over the Schmidt weights, with 0·log 0 = 0.
pub fn entropy_of_entanglement(state: &TwoModeState) -> Result<f64> {
    let probs = schmidt_probabilities(state)?;
    Ok(shannon_bits(&probs))
}

pub(crate) fn shannon_bits(probs: &[f64]) -> f64 {
    probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum::<f64>().max(0.0)
}

/// Entropy of a single qubit with populations (p, 1 − p), bits.
pub fn binary_entropy(p: f64) -> f64 {
    shannon_bits(&[p, 1.0 - p])
}

/// 2|det m| for the amplitude matrix m[a][b] of a pure two-qubit state.
pub fn concurrence(m: &[[Complex64; 2]; 2]) -> Result<f64> {
    let norm: f64 = m.iter().flatten().map(|c| c.norm_sqr()).sum();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    Ok((2.0 * det.norm()).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{coherent_state, evolve_coherent_pair};
    use nalgebra::DMatrix;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Oracle: partial trace over b, then Hermitian eigendecomposition of ρ_a.
    fn entropy_via_reduced_state(state: &TwoModeState) -> f64 {
        let m = &state.amps;
        let rho = m * m.adjoint();
        let eig = rho.symmetric_eigen();
        eig.eigenvalues.iter().filter(|&&l| l > 1e-300).map(|&l| -l * l.log2()).sum()
    }

    #[test]
    fn product_state_has_zero_entropy() {
        let s = TwoModeState::product(
            &coherent_state(c(1.0, 0.5), 20, 1e-10).unwrap(),
            &coherent_state(c(0.3, 0.0), 20, 1e-10).unwrap(),
        );
        assert!(entropy_of_entanglement(&s).unwrap().abs() < 1e-10);
    }

    #[test]
    fn bell_like_state_is_one_bit() {
        let mut amps = DMatrix::from_element(6, 6, c(0.0, 0.0));
        amps[(0, 0)] = c(FRAC_1_SQRT_2, 0.0);
        amps[(1, 1)] = c(FRAC_1_SQRT_2, 0.0);
        let s = TwoModeState { amps };
        assert!((entropy_of_entanglement(&s).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn evolved_cat_entropy_matches_reduced_state() {
        let s = evolve_coherent_pair(c(2.0, 0.0), c(2.0, 0.0), PI, 30).unwrap();
        let e = entropy_of_entanglement(&s).unwrap();
        let oracle = entropy_via_reduced_state(&s);
        assert!((e - oracle).abs() < 1e-9, "{e} vs {oracle}");
        assert!(e >= 0.99);
    }

    #[test]
    fn entropy_rejects_unnormalized() {
        let amps = DMatrix::from_element(2, 2, c(1.0, 0.0));
        assert!(matches!(entropy_of_entanglement(&TwoModeState { amps }), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn concurrence_examples() {
        let h = FRAC_1_SQRT_2;
        assert!((concurrence(&[[c(h, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(h, 0.0)]]).unwrap() - 1.0).abs() < 1e-15);
        let product = [[c(0.6, 0.0), c(0.0, 0.48)], [c(0.8 * 0.6, 0.0), c(0.0, 0.8 * 0.48)]];
        let n: f64 = product.iter().flatten().map(|x| x.norm_sqr()).sum();
        let product = product.map(|r| r.map(|x| x / n.sqrt()));
        assert!(concurrence(&product).unwrap() < 1e-15);
        // 0.8|HV⟩ + 0.6|VH⟩: Schmidt coefficients 0.8, 0.6 → C = 2·0.8·0.6.
        let m = [[c(0.0, 0.0), c(0.8, 0.0)], [c(0.6, 0.0), c(0.0, 0.0)]];
        assert!((concurrence(&m).unwrap() - 0.96).abs() < 1e-15);
        assert!(matches!(concurrence(&[[c(1.0, 0.0); 2]; 2]), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn concurrence_local_phase_invariance() {
        let m = [[c(0.3, 0.1), c(0.5, -0.2)], [c(-0.4, 0.3), c(0.2, 0.55)]];
        let n: f64 = m.iter().flatten().map(|x| x.norm_sqr()).sum();
        let m = m.map(|r| r.map(|x| x / n.sqrt()));
        let base = concurrence(&m).unwrap();
        for theta in [0.3, 1.7, -2.2] {
            let p = Complex64::from_polar(1.0, theta);
            let rot_a = [[m[0][0], m[0][1]], [m[1][0] * p, m[1][1] * p]];
            let rot_b = [[m[0][0], m[0][1] * p], [m[1][0], m[1][1] * p]];
            assert!((concurrence(&rot_a).unwrap() - base).abs() < 1e-12);
            assert!((concurrence(&rot_b).unwrap() - base).abs() < 1e-12);
        }
    }

    #[test]
    fn binary_entropy_limits() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert!((binary_entropy(0.5) - 1.0).abs() < 1e-15);
    }
}
