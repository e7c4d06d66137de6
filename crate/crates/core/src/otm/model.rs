use crate::error::{Error, Result};
use crate::qcore::{Operator, Protocol};
use crate::scalar::Real;
use crate::thermo::{gibbs, GibbsState};

/// System + bath setup: Hamiltonians, evolution protocol and initial temperatures.
///
/// The protocol generates the joint unitary on `system (x) bath`. The system
/// Hamiltonian at the start and at the end of the protocol, and the bath
/// Hamiltonian, fix the energy measurements and reference Gibbs states.
#[derive(Debug, Clone)]
pub struct ThermalModel<T: Real> {
    n_system_factors: usize,
    protocol: Protocol<T>,
    h_s_initial: Operator<T>,
    h_s_final: Operator<T>,
    h_b: Operator<T>,
    beta_s: T,
    beta_b: T,
}

impl<T: Real> ThermalModel<T> {
    pub fn new(
        protocol: Protocol<T>,
        h_s_initial: Operator<T>,
        h_s_final: Operator<T>,
        h_b: Operator<T>,
        beta_s: T,
        beta_b: T,
    ) -> Result<Self> {
        let n_system_factors = h_s_initial.dims().len();
        if h_s_final.dims() != h_s_initial.dims() {
            return Err(Error::Dimension(format!(
                "initial system Hamiltonian on {:?}, final on {:?}",
                h_s_initial.dims(),
                h_s_final.dims()
            )));
        }
        let mut joint = h_s_initial.dims().to_vec();
        joint.extend_from_slice(h_b.dims());
        if protocol.dims() != joint.as_slice() {
            return Err(Error::Dimension(format!(
                "protocol acts on {:?}, system (x) bath is {joint:?}",
                protocol.dims()
            )));
        }
        h_s_initial.require_hermitian("initial system Hamiltonian")?;
        h_s_final.require_hermitian("final system Hamiltonian")?;
        h_b.require_hermitian("bath Hamiltonian")?;
        for (name, b) in [("beta_s", beta_s), ("beta_b", beta_b)] {
            if !(b > T::zero()) || !b.is_finite() {
                return Err(Error::Parameter(format!(
                    "{name} must be positive, got {}",
                    b.as_f64()
                )));
            }
        }
        Ok(Self {
            n_system_factors,
            protocol,
            h_s_initial,
            h_s_final,
            h_b,
            beta_s,
            beta_b,
        })
    }

    /// Same model with other initial temperatures.
    pub fn with_betas(&self, beta_s: T, beta_b: T) -> Result<Self> {
        Self::new(
            self.protocol.clone(),
            self.h_s_initial.clone(),
            self.h_s_final.clone(),
            self.h_b.clone(),
            beta_s,
            beta_b,
        )
    }

    pub fn n_system_factors(&self) -> usize {
        self.n_system_factors
    }

    pub fn protocol(&self) -> &Protocol<T> {
        &self.protocol
    }

    pub fn h_s_initial(&self) -> &Operator<T> {
        &self.h_s_initial
    }

    pub fn h_s_final(&self) -> &Operator<T> {
        &self.h_s_final
    }

    pub fn h_b(&self) -> &Operator<T> {
        &self.h_b
    }

    pub fn beta_s(&self) -> T {
        self.beta_s
    }

    pub fn beta_b(&self) -> T {
        self.beta_b
    }

    pub fn system_dims(&self) -> &[usize] {
        self.h_s_initial.dims()
    }

    pub fn bath_dims(&self) -> &[usize] {
        self.h_b.dims()
    }

    pub fn d_system(&self) -> usize {
        self.h_s_initial.dim()
    }

    pub fn d_bath(&self) -> usize {
        self.h_b.dim()
    }

    pub fn total_dim(&self) -> usize {
        self.d_system() * self.d_bath()
    }

    pub fn is_single_temperature(&self) -> bool {
        self.beta_s == self.beta_b
    }

    pub(crate) fn require_single_temperature(&self, what: &str) -> Result<()> {
        if !self.is_single_temperature() {
            return Err(Error::Precondition(format!(
                "{what} needs beta_s = beta_b (got {} and {}); use the two-temperature path",
                self.beta_s.as_f64(),
                self.beta_b.as_f64()
            )));
        }
        Ok(())
    }

    pub fn system_gibbs_initial(&self) -> Result<GibbsState<T>> {
        gibbs(&self.h_s_initial, self.beta_s)
    }

    pub fn system_gibbs_final(&self) -> Result<GibbsState<T>> {
        gibbs(&self.h_s_final, self.beta_s)
    }

    pub fn bath_gibbs(&self) -> Result<GibbsState<T>> {
        gibbs(&self.h_b, self.beta_b)
    }
}
