//! Seeded shot loop: sample the probe quadrature, condition the qubits,
//! classify and phase-correct each shot.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::entanglement::{binary_entropy, concurrence};
use super::homodyne::{
    branch_densities, classification_threshold, homodyne_condition, marginal_density, phase_correction,
    qubit_probe_interact, HomodyneSample, Outcome, QubitState, ThreePartyState,
};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::numerics;

/// Points on the inverse-CDF sampling grid.
pub const GRID_POINTS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeSummary {
    pub outcome: Outcome,
    pub count: usize,
    pub mean_concurrence: Option<f64>,
    /// Mean reduced-state entropy of the conditioned qubit pair, bits.
    pub mean_entropy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolSummary {
    pub shots: usize,
    pub threshold: f64,
    pub outcomes: Vec<OutcomeSummary>,
    /// Mean posterior weight of the opposite branch over the sampled shots.
    pub misclassification_estimate: f64,
    /// Probability mass of each branch on the wrong side of the threshold.
    pub misclassification_exact: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolRun {
    pub samples: Vec<HomodyneSample>,
    pub summary: ProtocolSummary,
}

/// Uniform grid over [−x_max, x_max], x_max = √2(|α| + 6).
pub fn sampling_grid(alpha: Complex64) -> Vec<f64> {
    let x_max = SQRT_2 * (alpha.norm() + 6.0);
    numerics::linspace(-x_max, x_max, GRID_POINTS).expect("x_max > 0")
}

struct Sampler {
    grid: Vec<f64>,
    cdf: Vec<f64>,
}

impl Sampler {
    fn new(grid: Vec<f64>, density: &[f64]) -> Self {
        let mut cdf = Vec::with_capacity(grid.len());
        let mut acc = 0.0;
        cdf.push(0.0);
        for k in 1..grid.len() {
            acc += 0.5 * (density[k] + density[k - 1]) * (grid[k] - grid[k - 1]);
            cdf.push(acc);
        }
        let total = acc;
        cdf.iter_mut().for_each(|c| *c /= total);
        Sampler { grid, cdf }
    }

    fn draw(&self, u: f64) -> f64 {
        let k = self.cdf.partition_point(|&c| c < u).clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[k - 1], self.cdf[k]);
        let t = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
        self.grid[k - 1] + t * (self.grid[k] - self.grid[k - 1])
    }
}

/// Independent stream per shot, so shots can run in any order or thread.
fn shot_uniform(seed: u64, shot: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot as u64);
    rng.random::<f64>()
}

fn corrected(state: &ThreePartyState, mut sample: HomodyneSample) -> HomodyneSample {
    if sample.outcome == Outcome::Shifted {
        let rot = Complex64::from_polar(1.0, -phase_correction(state.alpha, state.phi, sample.x));
        sample.post_state[1][0] *= rot;
        sample.post_state[1][1] *= rot;
    }
    sample
}

fn pure_pair_entropy(c: f64) -> f64 {
    let p = 0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt());
    binary_entropy(p)
}

#[allow(clippy::too_many_arguments)]
pub fn run_protocol(
    qa: &QubitState,
    qb: &QubitState,
    alpha: Complex64,
    phi: f64,
    dim: usize,
    seed: u64,
    shots: usize,
    exec: Execution,
) -> Result<ProtocolRun> {
    if shots < 1 {
        return Err(Error::BadSeedConfig(format!("shots must be >= 1, got {shots}")));
    }
    let state = qubit_probe_interact(qa, qb, alpha, phi, dim)?;
    let threshold = classification_threshold(alpha, phi);

    let grid = sampling_grid(alpha);
    let branches: Vec<(f64, f64)> = exec::map_ordered(&grid, exec, |&x| branch_densities(&state, x));
    let density: Vec<f64> = branches.iter().map(|(u, s)| u + s).collect();

    let mut misclassification_exact = 0.0;
    for k in 1..grid.len() {
        let wrong = |j: usize| {
            let (u, s) = branches[j];
            if grid[j] >= threshold {
                s
            } else {
                u
            }
        };
        misclassification_exact += 0.5 * (wrong(k) + wrong(k - 1)) * (grid[k] - grid[k - 1]);
    }

    let sampler = Sampler::new(grid, &density);
    let results: Vec<Result<HomodyneSample>> = exec::map_indices(shots, exec, |shot| {
        let x = sampler.draw(shot_uniform(seed, shot));
        homodyne_condition(&state, x).map(|s| corrected(&state, s))
    });
    let samples = results.into_iter().collect::<Result<Vec<_>>>()?;

    let mut wrong_weight = 0.0;
    for s in &samples {
        let (u, sh) = branch_densities(&state, s.x);
        wrong_weight += match s.outcome {
            Outcome::Unshifted => sh,
            Outcome::Shifted => u,
        } / marginal_density(&state, s.x);
    }

    let mut outcomes = Vec::new();
    for outcome in [Outcome::Unshifted, Outcome::Shifted] {
        let conc: Vec<f64> = samples
            .iter()
            .filter(|s| s.outcome == outcome)
            .map(|s| concurrence(&s.post_state))
            .collect::<Result<_>>()?;
        let count = conc.len();
        let mean = |v: &mut dyn Iterator<Item = f64>| (count > 0).then(|| v.sum::<f64>() / count as f64);
        outcomes.push(OutcomeSummary {
            outcome,
            count,
            mean_concurrence: mean(&mut conc.iter().copied()),
            mean_entropy: mean(&mut conc.iter().map(|&c| pure_pair_entropy(c))),
        });
    }

    Ok(ProtocolRun {
        samples,
        summary: ProtocolSummary {
            shots,
            threshold,
            outcomes,
            misclassification_estimate: wrong_weight / shots as f64,
            misclassification_exact,
        },
    })
}
