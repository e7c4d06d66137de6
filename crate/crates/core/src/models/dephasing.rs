use crate::error::{Error, Result};
use crate::otm::ThermalModel;
use crate::qcore::{tensor, Operator, Protocol};
use crate::scalar::Real;

/// Two qubits with `H = w_S Z_S + w_B Z_B + J Z_S X_B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitDephasingParams<T: Real = f64> {
    /// Coefficient of the system `Z` (no factor 1/2).
    pub omega_s: T,
    /// Coefficient of the bath `Z`.
    pub omega_b: T,
    /// Strength of the `Z_S X_B` coupling.
    pub j: T,
    pub beta: T,
    pub t: T,
}

impl<T: Real> TwoQubitDephasingParams<T> {
    pub fn new(omega_s: T, omega_b: T, j: T, beta: T, t: T) -> Self {
        Self {
            omega_s,
            omega_b,
            j,
            beta,
            t,
        }
    }

    fn validate(&self) -> Result<()> {
        let all = [self.omega_s, self.omega_b, self.j, self.beta, self.t];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parameter("two-qubit parameters must be finite".into()));
        }
        if self.t < T::zero() {
            return Err(Error::Parameter("evolution time must be non-negative".into()));
        }
        Ok(())
    }

    /// `sqrt(J^2 + w_B^2)`.
    pub fn rabi_frequency(&self) -> T {
        (self.j * self.j + self.omega_b * self.omega_b).sqrt()
    }
}

fn hamiltonians<T: Real>(p: &TwoQubitDephasingParams<T>) -> (Operator<T>, Operator<T>, Operator<T>) {
    let z = Operator::<T>::pauli_z();
    let x = Operator::<T>::pauli_x();
    let id = Operator::<T>::identity(&[2]);
    let h_s = z.scale(p.omega_s);
    let h_b = z.scale(p.omega_b);
    let total = &(&tensor(&h_s, &id) + &tensor(&id, &h_b)) + &tensor(&z, &x).scale(p.j);
    (h_s, h_b, total)
}

/// Common-temperature dephasing model evolved for time `t`.
pub fn two_qubit_dephasing_model<T: Real>(p: &TwoQubitDephasingParams<T>) -> Result<ThermalModel<T>> {
    two_qubit_dephasing_model_two_temperature(p, p.beta)
}

/// Same model with the bath prepared at `beta_b` (system stays at `p.beta`).
pub fn two_qubit_dephasing_model_two_temperature<T: Real>(
    p: &TwoQubitDephasingParams<T>,
    beta_b: T,
) -> Result<ThermalModel<T>> {
    p.validate()?;
    let (h_s, h_b, total) = hamiltonians(p);
    let protocol = Protocol::single(p.t, total)?;
    ThermalModel::new(protocol, h_s.clone(), h_s, h_b, p.beta, beta_b)
}

/// Closed-form guessed heat
/// `-2 J^2 w_B tanh(beta w_B) sin^2(t sqrt(J^2 + w_B^2)) / (J^2 + w_B^2)`.
pub fn two_qubit_analytic_heat<T: Real>(p: &TwoQubitDephasingParams<T>) -> T {
    two_qubit_analytic_heat_with_bath_beta(p, p.beta)
}

/// Closed-form heat when the bath starts at inverse temperature `beta_b`.
///
/// Only the bath polarisation `-tanh(beta_b w_B)` enters, so the formula is the
/// common-temperature one with `beta_b` in the hyperbolic tangent.
pub fn two_qubit_analytic_heat_with_bath_beta<T: Real>(
    p: &TwoQubitDephasingParams<T>,
    beta_b: T,
) -> T {
    let omega2 = p.j * p.j + p.omega_b * p.omega_b;
    if omega2 == T::zero() {
        return T::zero();
    }
    let s = (p.t * omega2.sqrt()).sin();
    -T::lit(2.0) * p.j * p.j * p.omega_b * (beta_b * p.omega_b).tanh() * s * s / omega2
}

/// Closed-form `D[theta || tau_S (x) tau_B] = -beta_B <Q~>_B` (the guessed state is exact here).
pub fn two_qubit_analytic_relative_entropy<T: Real>(p: &TwoQubitDephasingParams<T>) -> T {
    -p.beta * two_qubit_analytic_heat(p)
}
