//! Numerical toolkit for the one-time-measurement scheme of open quantum
//! systems.
//!
//! A system is prepared in a Gibbs state, its energy is measured once, and the
//! joint system+bath state evolves unitarily. From the outcome-resolved final
//! mean energies the crate builds the maximum-entropy guessed state, the
//! guessed heat and work, and evaluates the modified Jarzynski equalities,
//! maximum-work bounds and their two-point-measurement counterparts.
//!
//! Everything is generic over the real scalar (`f64`, `f32`); the aliases at
//! the crate root fix `f64`, which is what the stated tolerances assume.

pub mod error;
pub mod models;
pub mod otm;
pub mod qcore;
pub mod scalar;
pub mod thermo;
pub mod tpm;

pub use error::{Error, Result};
pub use scalar::{Complex, Real};

pub type Operator = qcore::Operator<f64>;
pub type DensityOperator = qcore::DensityOperator<f64>;
pub type Spectrum = qcore::Spectrum<f64>;
pub type Protocol = qcore::Protocol<f64>;

pub type GibbsState = thermo::GibbsState<f64>;
pub type ThermalModel = otm::ThermalModel<f64>;
pub type OutcomeRecord = otm::OutcomeRecord<f64>;
pub type GuessedEnsemble = otm::GuessedEnsemble<f64>;
pub type TpmDistribution = tpm::TpmDistribution<f64>;

pub type Operator32 = qcore::Operator<f32>;
pub type ThermalModel32 = otm::ThermalModel<f32>;
pub type GuessedEnsemble32 = otm::GuessedEnsemble<f32>;
