use crate::error::Result;
use crate::qcore::{
    partial_trace_bath, partial_trace_system, propagator, tensor, DensityOperator,
};
use crate::scalar::Real;
use crate::thermo::{
    energy_expectation, product_log_operator, relative_entropy_to_gibbs,
    relative_entropy_with_log, GibbsState,
};

use super::model::ThermalModel;

/// One outcome of the initial system energy measurement.
#[derive(Debug, Clone)]
pub struct OutcomeRecord<T: Real> {
    /// Eigenvalue of the initial system Hamiltonian.
    pub epsilon: T,
    /// Gibbs probability of measuring `epsilon`.
    pub prob_initial: T,
    /// Reduced system state after the evolution, `Phi_t(|e><e|)`.
    pub evolved_state: DensityOperator<T>,
    /// `Tr[H_S(t) Phi_t(|e><e|)]`.
    pub final_mean_energy: T,
    /// `final_mean_energy - epsilon`.
    pub delta_e_tilde: T,
}

/// Everything the one-time measurement lets us infer about the final state.
#[derive(Debug, Clone)]
pub struct GuessedEnsemble<T: Real> {
    pub outcomes: Vec<OutcomeRecord<T>>,
    /// Modified partition function `sum_e exp(-beta_S E_e)`.
    pub z_tilde: T,
    pub ln_z_tilde: T,
    /// Information free energy `-ln(z_tilde)/beta_S`.
    pub f_tilde: T,
    /// Maximum-entropy weights `exp(-beta_S E_e)/z_tilde`.
    pub p_guess: Vec<T>,
    /// Guessed joint state.
    pub theta_sb: DensityOperator<T>,
    /// `Tr_B theta_sb`.
    pub rho_s_tilde: DensityOperator<T>,
    /// Bath energy loss evaluated on the guessed state.
    pub guessed_heat: T,
    /// `D[theta_sb || tau_S(t) (x) tau_B]`.
    pub relative_entropy_full: T,
    /// `D[rho_s_tilde || tau_S(t)]`.
    pub relative_entropy_reduced: T,

    pub beta_s: T,
    pub beta_b: T,
    pub ln_z_initial: T,
    pub ln_z_final: T,
    /// `F_S(t) - F_S(0)`.
    pub delta_f: T,
    /// `sum_e p(e) delta_e_tilde(e)` under the initial Gibbs probabilities.
    pub mean_delta_e: T,
    /// `Tr[H_B tau_B]`.
    pub bath_energy_initial: T,
    /// Exact final joint state `U (tau_S(0) (x) tau_B) U^dagger`.
    pub exact_state: DensityOperator<T>,
    /// `U (|e><e| (x) tau_B) U^dagger` for every outcome, same order as `outcomes`.
    pub branch_states: Vec<DensityOperator<T>>,
    /// The initial system Hamiltonian has a degenerate eigenvalue; the outcome
    /// basis inside that eigenspace is the deterministic eigensolver choice.
    pub degenerate_initial_spectrum: bool,
    pub n_system_factors: usize,
}

impl<T: Real> GuessedEnsemble<T> {
    /// `<W~> = <dE> - <Q~>_B`.
    pub fn guessed_work_mean(&self) -> T {
        self.mean_delta_e - self.guessed_heat
    }

    /// Guessed state for arbitrary outcome weights (same branches).
    pub fn theta_for_weights(&self, weights: &[T]) -> Result<DensityOperator<T>> {
        let parts: Vec<(T, &DensityOperator<T>)> = weights
            .iter()
            .copied()
            .zip(self.branch_states.iter())
            .collect();
        DensityOperator::mixture(&parts)
    }
}

pub(crate) struct Evolution<T: Real> {
    pub tau_s_initial: GibbsState<T>,
    pub tau_s_final: GibbsState<T>,
    pub tau_b: GibbsState<T>,
    pub records: Vec<OutcomeRecord<T>>,
    pub branches: Vec<DensityOperator<T>>,
}

pub(crate) fn evolve<T: Real>(m: &ThermalModel<T>) -> Result<Evolution<T>> {
    let u = propagator(m.protocol())?;
    let tau_s_initial = m.system_gibbs_initial()?;
    let tau_s_final = m.system_gibbs_final()?;
    let tau_b = m.bath_gibbs()?;
    let spectrum = tau_s_initial.spectrum();
    let ns = m.n_system_factors();

    let mut records = Vec::with_capacity(spectrum.len());
    let mut branches = Vec::with_capacity(spectrum.len());
    for (k, &epsilon) in spectrum.eigenvalues().iter().enumerate() {
        let projector = spectrum.projector(k);
        let joint = tensor(&projector, tau_b.state.as_operator()).conjugate_by(&u)?;
        let evolved_state = DensityOperator::checked_cheap(partial_trace_bath(&joint, ns)?)?;
        let final_mean_energy = energy_expectation(m.h_s_final(), &evolved_state)?;
        records.push(OutcomeRecord {
            epsilon,
            prob_initial: tau_s_initial.weights()[k],
            evolved_state,
            final_mean_energy,
            delta_e_tilde: final_mean_energy - epsilon,
        });
        branches.push(DensityOperator::checked_cheap(joint)?);
    }
    Ok(Evolution {
        tau_s_initial,
        tau_s_final,
        tau_b,
        records,
        branches,
    })
}

/// One record per eigenvector of the initial system Hamiltonian, in ascending energy order.
pub fn build_outcome_ensemble<T: Real>(m: &ThermalModel<T>) -> Result<Vec<OutcomeRecord<T>>> {
    Ok(evolve(m)?.records)
}

/// `sum_e p(e) exp(-beta_S dE(e))`, which equals `z_tilde / Z_S(0)`.
pub fn exp_average_delta_e<T: Real>(ensemble: &[OutcomeRecord<T>], beta_s: T) -> T {
    ensemble.iter().fold(T::zero(), |s, r| {
        s + r.prob_initial * (-beta_s * r.delta_e_tilde).exp()
    })
}

/// Whether the guessed weights use the Lagrange multiplier of the energy
/// constraint equal to the initial inverse temperature. Always true here.
pub const LAGRANGE_ALPHA_IS_BETA: bool = true;

/// Builds the maximum-entropy guessed state and the quantities derived from it.
pub fn build_guessed_ensemble<T: Real>(m: &ThermalModel<T>) -> Result<GuessedEnsemble<T>> {
    let ev = evolve(m)?;
    let beta_s = m.beta_s();
    let ns = m.n_system_factors();

    let e_min = ev
        .records
        .iter()
        .map(|r| r.final_mean_energy)
        .fold(T::max_value().unwrap_or(T::lit(f64::MAX)), |a, b| a.min(b));
    let shifted: Vec<T> = ev
        .records
        .iter()
        .map(|r| (-beta_s * (r.final_mean_energy - e_min)).exp())
        .collect();
    let sum = shifted.iter().fold(T::zero(), |s, &w| s + w);
    let p_guess: Vec<T> = shifted.iter().map(|&w| w / sum).collect();
    let ln_z_tilde = -beta_s * e_min + sum.ln();

    let mix = |weights: &[T]| -> Result<DensityOperator<T>> {
        let parts: Vec<(T, &DensityOperator<T>)> =
            weights.iter().copied().zip(ev.branches.iter()).collect();
        DensityOperator::mixture(&parts)
    };
    let theta_sb = mix(&p_guess)?;
    let initial_probs: Vec<T> = ev.records.iter().map(|r| r.prob_initial).collect();
    let exact_state = mix(&initial_probs)?;

    let rho_s_tilde = theta_sb.partial_trace_bath(ns)?;
    let theta_bath = DensityOperator::checked_cheap(partial_trace_system(theta_sb.as_operator(), ns)?)?;
    let bath_energy_initial = ev.tau_b.mean_energy();
    let guessed_heat = bath_energy_initial - energy_expectation(m.h_b(), &theta_bath)?;

    let log_product = product_log_operator(&ev.tau_s_final, &ev.tau_b);
    let relative_entropy_full = relative_entropy_with_log(&theta_sb, &log_product)?;
    let relative_entropy_reduced = relative_entropy_to_gibbs(&rho_s_tilde, &ev.tau_s_final)?;

    let mean_delta_e = ev
        .records
        .iter()
        .fold(T::zero(), |s, r| s + r.prob_initial * r.delta_e_tilde);
    let degenerate_initial_spectrum = ev.tau_s_initial.spectrum().is_degenerate();

    Ok(GuessedEnsemble {
        z_tilde: ln_z_tilde.exp(),
        ln_z_tilde,
        f_tilde: -ln_z_tilde / beta_s,
        p_guess,
        theta_sb,
        rho_s_tilde,
        guessed_heat,
        relative_entropy_full,
        relative_entropy_reduced,
        beta_s,
        beta_b: m.beta_b(),
        ln_z_initial: ev.tau_s_initial.ln_partition_function,
        ln_z_final: ev.tau_s_final.ln_partition_function,
        delta_f: ev.tau_s_final.free_energy - ev.tau_s_initial.free_energy,
        mean_delta_e,
        bath_energy_initial,
        exact_state,
        branch_states: ev.branches,
        degenerate_initial_spectrum,
        n_system_factors: ns,
        outcomes: ev.records,
    })
}
