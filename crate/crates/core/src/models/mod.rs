//! Example models with closed-form oracles, and random models for property sweeps.

pub mod closed;
pub mod dephasing;
pub mod random;
pub mod spin_boson;

pub use closed::{
    closed_system_guessed_state, closed_system_reduction_check, sudden_quench_model,
    system_only_model, ClosedSystemReport,
};
pub use dephasing::{
    two_qubit_analytic_heat, two_qubit_analytic_heat_with_bath_beta,
    two_qubit_analytic_relative_entropy, two_qubit_dephasing_model,
    two_qubit_dephasing_model_two_temperature, TwoQubitDephasingParams,
};
pub use random::{
    random_density, random_hermitian, random_model, random_model_with, random_unitary,
    RandomModelSpec,
};
pub use spin_boson::{
    analytic_heat_for_modes, displacement_amplitude, heat_decay_diagnostic,
    interaction_picture_hamiltonian, lab_frame_interaction_propagator, lab_hamiltonian,
    magnus_generator, magnus_phase, minimal_cutoff, spin_boson_analytic_heat, spin_boson_model,
    spin_boson_model_truncated, trotter_interaction_propagator, BosonMode, HeatDecay,
    OhmicSpectrum, SpinBosonParams,
};
