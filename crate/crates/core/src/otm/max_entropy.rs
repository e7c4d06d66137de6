use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::scalar::Real;
use crate::thermo::von_neumann_entropy;

use super::ensemble::GuessedEnsemble;
use super::identities::TOL_INEQUALITY;

#[derive(Debug, Clone, PartialEq)]
pub enum MaxEntropyOutcome {
    Passed,
    Failed,
    /// No feasible perturbation exists; the reason is attached.
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxEntropyReport<T: Real> {
    pub outcome: MaxEntropyOutcome,
    pub perturbations_checked: usize,
    /// Largest `S(theta[p + dp]) - S(theta[p])` seen (negative when all decrease).
    pub max_entropy_increase: T,
}

impl<T: Real> MaxEntropyReport<T> {
    pub fn passed(&self) -> bool {
        self.outcome == MaxEntropyOutcome::Passed
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Checks that the guessed weights maximise the entropy of the guessed state
/// among all weights with the same normalisation and final system energy.
///
/// Each perturbation is a Gaussian direction projected orthogonal to the
/// all-ones vector and to the outcome energies, scaled by a random fraction of
/// the largest step that keeps every weight non-negative.
pub fn max_entropy_property_check<T: Real>(
    g: &GuessedEnsemble<T>,
    n_perturbations: usize,
    seed: u64,
) -> Result<MaxEntropyReport<T>> {
    let n = g.p_guess.len();
    if n < 3 {
        return Ok(MaxEntropyReport {
            outcome: MaxEntropyOutcome::Skipped(format!(
                "{n} outcomes: the constrained set is a single point"
            )),
            perturbations_checked: 0,
            max_entropy_increase: T::zero(),
        });
    }
    let p: Vec<f64> = g.p_guess.iter().map(|x| x.as_f64()).collect();
    let energies: Vec<f64> = g.outcomes.iter().map(|r| r.final_mean_energy.as_f64()).collect();

    let ones: Vec<f64> = vec![1.0 / (n as f64).sqrt(); n];
    let mean = energies.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = energies.iter().map(|e| e - mean).collect();
    let scale = energies.iter().fold(1.0f64, |m, e| m.max(e.abs()));
    let cnorm = dot(&centered, &centered).sqrt();
    let mut basis = vec![ones];
    if cnorm > 1e-12 * scale {
        basis.push(centered.iter().map(|x| x / cnorm).collect());
    }

    let reference = von_neumann_entropy(&g.theta_sb)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = T::lit(f64::NEG_INFINITY);
    let mut checked = 0;
    while checked < n_perturbations {
        let mut d: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        for b in &basis {
            let proj = dot(&d, b);
            for (x, y) in d.iter_mut().zip(b) {
                *x -= proj * y;
            }
        }
        let dn = dot(&d, &d).sqrt();
        if dn < 1e-12 {
            continue;
        }
        let max_step = p
            .iter()
            .zip(&d)
            .filter(|(_, &di)| di < 0.0)
            .map(|(&pi, &di)| pi / -di)
            .fold(f64::INFINITY, f64::min);
        let step = max_step * rng.random_range(0.05..=1.0);
        let weights: Vec<T> = p
            .iter()
            .zip(&d)
            .map(|(&pi, &di)| T::lit((pi + step * di).max(0.0)))
            .collect();
        let s = von_neumann_entropy(&g.theta_for_weights(&weights)?)?;
        worst = worst.max(s - reference);
        checked += 1;
    }
    let outcome = if worst <= T::tol(TOL_INEQUALITY) {
        MaxEntropyOutcome::Passed
    } else {
        MaxEntropyOutcome::Failed
    };
    Ok(MaxEntropyReport {
        outcome,
        perturbations_checked: checked,
        max_entropy_increase: worst,
    })
}
