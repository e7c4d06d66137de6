use crate::error::{Error, Result};
use crate::scalar::Real;

use super::ensemble::{exp_average_delta_e, GuessedEnsemble};

/// Identity residual tolerance (relative where the identity is multiplicative).
pub const TOL_IDENTITY: f64 = 1e-8;
/// Slack allowed on inequalities.
pub const TOL_INEQUALITY: f64 = 1e-9;

fn require_single_temperature<T: Real>(g: &GuessedEnsemble<T>, what: &str) -> Result<()> {
    if g.beta_s != g.beta_b {
        return Err(Error::Precondition(format!(
            "{what} needs beta_s = beta_b (got {} and {}); use theorem2_residual",
            g.beta_s.as_f64(),
            g.beta_b.as_f64()
        )));
    }
    Ok(())
}

/// `|<exp(-beta dE)> Z_S(0) / z_tilde - 1|`.
pub fn modified_partition_residual<T: Real>(g: &GuessedEnsemble<T>) -> T {
    let avg = exp_average_delta_e(&g.outcomes, g.beta_s);
    (avg.ln() + g.ln_z_initial - g.ln_z_tilde).exp_m1().abs()
}

/// `|D_full + ln(z_tilde / Z_S(t)) + beta_B <Q~>_B|`; valid for either temperature setup.
pub fn heat_identity_residual<T: Real>(g: &GuessedEnsemble<T>) -> T {
    (g.relative_entropy_full + g.ln_z_tilde - g.ln_z_final + g.beta_b * g.guessed_heat).abs()
}

/// Relative-entropy/heat identity at a common temperature.
pub fn guessed_heat_identity_residual<T: Real>(g: &GuessedEnsemble<T>) -> Result<T> {
    require_single_temperature(g, "guessed_heat_identity_residual")?;
    Ok(heat_identity_residual(g))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JarzynskiReport<T: Real> {
    /// `<exp(-beta_S W~)>` over the initial outcome distribution.
    pub lhs: T,
    /// `exp(-beta_S dF_S) exp(-D_full) exp(-d_beta <Q~>_B)`.
    pub rhs: T,
    /// `|lhs - rhs| / rhs`.
    pub residual: T,
}

fn jarzynski_report<T: Real>(g: &GuessedEnsemble<T>, delta_beta: T) -> JarzynskiReport<T> {
    let beta = g.beta_s;
    let avg = exp_average_delta_e(&g.outcomes, beta);
    // W~(e) = dE(e) - <Q~>_B, so the exponential average factorises.
    let ln_lhs = beta * g.guessed_heat + avg.ln();
    let ln_rhs = -beta * g.delta_f - g.relative_entropy_full - delta_beta * g.guessed_heat;
    JarzynskiReport {
        lhs: ln_lhs.exp(),
        rhs: ln_rhs.exp(),
        residual: (ln_lhs - ln_rhs).exp_m1().abs(),
    }
}

/// Jarzynski equality for the guessed work at a common temperature.
pub fn theorem1_residual<T: Real>(g: &GuessedEnsemble<T>) -> Result<JarzynskiReport<T>> {
    require_single_temperature(g, "theorem1_residual")?;
    Ok(jarzynski_report(g, g.beta_b - g.beta_s))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkGap<T: Real> {
    /// `<W~> - dF_S - D_full / beta`.
    pub gap_full: T,
    /// `<W~> - dF_S - D_reduced / beta`.
    pub gap_reduced: T,
}

/// Slack in the maximum guessed work bound, with the full and reduced relative entropies.
pub fn max_guessed_work_gap<T: Real>(g: &GuessedEnsemble<T>) -> Result<WorkGap<T>> {
    require_single_temperature(g, "max_guessed_work_gap")?;
    let w = g.guessed_work_mean();
    Ok(WorkGap {
        gap_full: w - g.delta_f - g.relative_entropy_full / g.beta_s,
        gap_reduced: w - g.delta_f - g.relative_entropy_reduced / g.beta_s,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem2Report<T: Real> {
    pub lhs: T,
    pub rhs: T,
    pub residual: T,
    /// `<W~> - dF_S - D_reduced / beta_S - (d_beta / beta_S) <Q~>_B`.
    pub work_bound_gap: T,
    /// `|D_full + ln(z_tilde / Z_S(t)) + beta_B <Q~>_B|`.
    pub heat_identity_residual: T,
}

/// Guessed-work Jarzynski equality with different system and bath temperatures.
pub fn theorem2_residual<T: Real>(g: &GuessedEnsemble<T>) -> Theorem2Report<T> {
    let delta_beta = g.beta_b - g.beta_s;
    let j = jarzynski_report(g, delta_beta);
    let work_bound_gap = g.guessed_work_mean()
        - g.delta_f
        - g.relative_entropy_reduced / g.beta_s
        - delta_beta / g.beta_s * g.guessed_heat;
    Theorem2Report {
        lhs: j.lhs,
        rhs: j.rhs,
        residual: j.residual,
        work_bound_gap,
        heat_identity_residual: heat_identity_residual(g),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteinRate<T: Real> {
    /// `lim (1/n) ln B_n = -D_full`.
    pub rate: T,
    /// `|lhs exp(beta_S dF_S) / exp(-D_full) - 1|` using the Jarzynski left side.
    pub consistency_residual: T,
}

/// Asymptotic type-II error exponent for telling the guessed state from the
/// reference product Gibbs state.
pub fn stein_asymptotic_rate<T: Real>(g: &GuessedEnsemble<T>) -> SteinRate<T> {
    let j = jarzynski_report(g, g.beta_b - g.beta_s);
    let rate = -g.relative_entropy_full;
    let ln_from_work = j.lhs.ln() + g.beta_s * g.delta_f + (g.beta_b - g.beta_s) * g.guessed_heat;
    SteinRate {
        rate,
        consistency_residual: (ln_from_work - rate).exp_m1().abs(),
    }
}
