//! Dense complex operator algebra on finite tensor-product spaces.

mod channel;
mod operator;
mod protocol;
mod spectrum;

pub use channel::{
    apply_channel, channel_map, choi_cptp_check, choi_matrix, kraus_operators, ChoiReport,
    DensityOperator,
};
pub use operator::{
    local_decomposition, partial_trace_bath, partial_trace_system, tensor, tensor_all, Operator,
};
pub use protocol::{propagator, Protocol, Segment};
pub use spectrum::{eig_hermitian, expm_unitary, unitary_from_spectrum, Spectrum};

/// Max-norm Hermiticity tolerance (relative to `max(1, max|A|)`).
pub const TOL_HERMITIAN: f64 = 1e-10;
/// Trace tolerance for density operators.
pub const TOL_TRACE: f64 = 1e-10;
/// Most negative eigenvalue accepted in a density operator.
pub const TOL_NEGATIVE_EIGENVALUE: f64 = 1e-10;
/// Eigenvalues closer than this (times `max|H|`) are treated as degenerate.
pub const TOL_DEGENERATE_GAP: f64 = 1e-9;
