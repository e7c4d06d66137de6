//! Gibbs states, partition functions, free energies and entropies.

use crate::error::{Error, Result};
use crate::qcore::{eig_hermitian, tensor, DensityOperator, Operator, Spectrum};
use crate::scalar::{cr, Real};

/// Eigenvalues of `sigma` at or below this are treated as outside its support.
pub const SUPPORT_THRESHOLD: f64 = 1e-14;

/// Thermal state `exp(-beta H)/Z` together with its spectral data.
#[derive(Debug, Clone)]
pub struct GibbsState<T: Real> {
    pub state: DensityOperator<T>,
    pub partition_function: T,
    pub ln_partition_function: T,
    pub free_energy: T,
    pub beta: T,
    spectrum: Spectrum<T>,
    weights: Vec<T>,
    log_weights: Vec<T>,
}

impl<T: Real> GibbsState<T> {
    /// Spectrum of the Hamiltonian (the state shares its eigenbasis).
    pub fn spectrum(&self) -> &Spectrum<T> {
        &self.spectrum
    }

    /// Boltzmann weights in ascending-energy order.
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// `ln` of the weights, computed without forming the weights.
    pub fn log_weights(&self) -> &[T] {
        &self.log_weights
    }

    /// `ln(state) = -beta H - ln Z`, exact in the Hamiltonian eigenbasis.
    pub fn log_operator(&self) -> Operator<T> {
        self.spectrum.map_indexed(|k, _| cr(self.log_weights[k]))
    }

    /// Mean energy `Tr[H tau]` from the spectrum.
    pub fn mean_energy(&self) -> T {
        self.spectrum
            .eigenvalues()
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |s, (&e, &w)| s + e * w)
    }

    /// `-sum p ln p` from the exact weights.
    pub fn entropy(&self) -> T {
        self.weights
            .iter()
            .zip(&self.log_weights)
            .fold(T::zero(), |s, (&w, &lw)| s - w * lw)
    }
}

/// Gibbs state of `h` at inverse temperature `beta`.
///
/// Weights are formed as `exp(-beta (e - e_min))` so large `beta` cannot overflow.
pub fn gibbs<T: Real>(h: &Operator<T>, beta: T) -> Result<GibbsState<T>> {
    if !(beta > T::zero()) || !beta.is_finite() {
        return Err(Error::Parameter(format!(
            "inverse temperature must be positive, got {}",
            beta.as_f64()
        )));
    }
    let spectrum = eig_hermitian(h)?;
    let e_min = spectrum.eigenvalues()[0];
    let exponents: Vec<T> = spectrum
        .eigenvalues()
        .iter()
        .map(|&e| -beta * (e - e_min))
        .collect();
    let sum = exponents.iter().fold(T::zero(), |s, &x| s + x.exp());
    let ln_sum = sum.ln();
    let weights: Vec<T> = exponents.iter().map(|&x| x.exp() / sum).collect();
    let log_weights: Vec<T> = exponents.iter().map(|&x| x - ln_sum).collect();
    let ln_partition_function = -beta * e_min + ln_sum;
    let state = DensityOperator::checked_cheap(spectrum.map_indexed(|k, _| cr(weights[k])))?;
    Ok(GibbsState {
        state,
        partition_function: ln_partition_function.exp(),
        ln_partition_function,
        free_energy: -ln_partition_function / beta,
        beta,
        spectrum,
        weights,
        log_weights,
    })
}

/// `ln(tau_S (x) tau_B) = ln tau_S (x) I + I (x) ln tau_B`.
pub fn product_log_operator<T: Real>(system: &GibbsState<T>, bath: &GibbsState<T>) -> Operator<T> {
    let ls = tensor(&system.log_operator(), &Operator::identity(bath.state.dims()));
    let lb = tensor(&Operator::identity(system.state.dims()), &bath.log_operator());
    &ls + &lb
}

fn entropy_term<T: Real>(l: T) -> T {
    let l = l.max(T::zero()).min(T::one());
    if l == T::zero() {
        T::zero()
    } else {
        -l * l.ln()
    }
}

/// `-Tr[rho ln rho]` with eigenvalues clipped to `[0, 1]` and `0 ln 0 = 0`.
pub fn von_neumann_entropy<T: Real>(rho: &DensityOperator<T>) -> Result<T> {
    let spectrum = rho.spectrum()?;
    Ok(spectrum
        .eigenvalues()
        .iter()
        .fold(T::zero(), |s, &l| s + entropy_term(l)))
}

/// `Tr[rho ln rho] - Tr[rho ln sigma]`, each logarithm taken in its own eigenbasis.
///
/// Returns `+inf` when `rho` has weight outside the support of `sigma`.
pub fn relative_entropy<T: Real>(rho: &DensityOperator<T>, sigma: &DensityOperator<T>) -> Result<T> {
    if rho.dims() != sigma.dims() {
        return Err(Error::Dimension(format!(
            "relative entropy of states on {:?} and {:?}",
            rho.dims(),
            sigma.dims()
        )));
    }
    let neg_entropy = -von_neumann_entropy(rho)?;
    let sig = sigma.spectrum()?;
    let threshold = T::lit(SUPPORT_THRESHOLD);
    let rho_m = rho.as_operator().matrix();
    let mut cross = T::zero();
    for (k, &s) in sig.eigenvalues().iter().enumerate() {
        let v = sig.eigenvectors().column(k);
        let weight = (v.adjoint() * rho_m * v)[(0, 0)].re;
        if s <= threshold {
            if weight > T::tol(1e-12) {
                return Ok(T::lit(f64::INFINITY));
            }
            continue;
        }
        cross += weight * s.ln();
    }
    Ok(neg_entropy - cross)
}

/// Relative entropy when `ln sigma` is already known exactly.
pub fn relative_entropy_with_log<T: Real>(
    rho: &DensityOperator<T>,
    log_sigma: &Operator<T>,
) -> Result<T> {
    let cross = energy_expectation(log_sigma, rho)?;
    Ok(-von_neumann_entropy(rho)? - cross)
}

/// `D[rho || tau]` for a Gibbs state `tau`.
pub fn relative_entropy_to_gibbs<T: Real>(
    rho: &DensityOperator<T>,
    tau: &GibbsState<T>,
) -> Result<T> {
    relative_entropy_with_log(rho, &tau.log_operator())
}

/// `Re Tr[h rho]`; fails if the imaginary part is not round-off.
pub fn energy_expectation<T: Real>(h: &Operator<T>, rho: &DensityOperator<T>) -> Result<T> {
    if h.dims() != rho.dims() {
        return Err(Error::Dimension(format!(
            "observable on {:?}, state on {:?}",
            h.dims(),
            rho.dims()
        )));
    }
    let a = h.matrix();
    let b = rho.as_operator().matrix();
    let n = h.dim();
    let mut tr = cr(T::zero());
    for i in 0..n {
        for k in 0..n {
            tr += a[(i, k)] * b[(k, i)];
        }
    }
    let scale = h.max_abs().max(T::one());
    if tr.im.abs() > T::tol(1e-10) * scale {
        return Err(Error::Validation(format!(
            "expectation value has imaginary part {}",
            tr.im.as_f64()
        )));
    }
    Ok(tr.re)
}
