//! One-time measurement scheme: outcome ensemble, guessed state, guessed
//! heat and work, and the identities and bounds they satisfy.

mod ensemble;
mod identities;
mod max_entropy;
mod model;

pub use ensemble::{
    build_guessed_ensemble, build_outcome_ensemble, exp_average_delta_e, GuessedEnsemble,
    OutcomeRecord, LAGRANGE_ALPHA_IS_BETA,
};
pub use identities::{
    guessed_heat_identity_residual, heat_identity_residual, max_guessed_work_gap,
    modified_partition_residual, stein_asymptotic_rate, theorem1_residual, theorem2_residual,
    JarzynskiReport, SteinRate, Theorem2Report, WorkGap, TOL_IDENTITY, TOL_INEQUALITY,
};
pub use max_entropy::{max_entropy_property_check, MaxEntropyOutcome, MaxEntropyReport};
pub use model::ThermalModel;
