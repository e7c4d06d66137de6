//! Spin-boson dephasing model on a truncated Fock space.
//!
//! `H = (w0/2) Z + sum_k w_k a_k^dagger a_k + Z sum_k (g_k a_k + g_k^* a_k^dagger)`.
//! Since every term commutes with `Z`, the interaction-picture propagator is
//! exactly `exp[-i t sum_k (Z (G_k a_k + G_k^* a_k^dagger) - c_k)]` with
//! `G_k(t) = g_k sinc(w_k t / 2) exp(-i w_k t / 2)` and the c-number phase
//! `c_k = |g_k|^2 / w_k (1 - sin(w_k t) / (w_k t))`. The model evolves with
//! that generator; lab-frame and Trotterised interaction-picture propagators
//! are provided as cross-checks.

use nalgebra::ComplexField as _;

use crate::error::{Error, Result};
use crate::otm::ThermalModel;
use crate::qcore::{expm_unitary, propagator, tensor, tensor_all, Operator, Protocol};
use crate::scalar::{c, cr, Complex, Real};

/// Largest thermal occupation allowed above the Fock cutoff.
pub const THERMAL_TAIL_LIMIT: f64 = 1e-10;
/// Displacement `|G_k| t` may use at most this fraction of `sqrt(cutoff)`.
pub const DISPLACEMENT_FRACTION: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BosonMode<T: Real = f64> {
    pub omega: T,
    pub g: Complex<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinBosonParams<T: Real = f64> {
    /// System splitting; the system Hamiltonian is `(omega0 / 2) Z`.
    pub omega0: T,
    pub modes: Vec<BosonMode<T>>,
    /// Fock levels kept per mode.
    pub fock_cutoff: Vec<usize>,
    pub beta: T,
    pub t: T,
}

fn sinc<T: Real>(x: T) -> T {
    if x.abs() < T::lit(1e-8) {
        T::one() - x * x / T::lit(6.0)
    } else {
        x.sin() / x
    }
}

/// `G_k(t) = g_k sin(w t / 2) / (w t / 2) exp(-i w t / 2)`.
pub fn displacement_amplitude<T: Real>(mode: &BosonMode<T>, t: T) -> Complex<T> {
    let half = mode.omega * t / T::lit(2.0);
    mode.g * cr(sinc(half)) * c(half.cos(), -half.sin())
}

/// `|g|^2 / w (1 - sin(w t) / (w t))`, the second-order Magnus phase per mode.
pub fn magnus_phase<T: Real>(mode: &BosonMode<T>, t: T) -> T {
    mode.g.norm_sqr() / mode.omega * (T::one() - sinc(mode.omega * t))
}

/// Smallest cutoff meeting the thermal-tail and displacement conditions.
pub fn minimal_cutoff<T: Real>(mode: &BosonMode<T>, beta: T, t: T) -> usize {
    let thermal = (-(THERMAL_TAIL_LIMIT.ln()) / (beta * mode.omega).as_f64()).ceil();
    let alpha = displacement_amplitude(mode, t).modulus().as_f64() * t.as_f64();
    let displacement = (alpha / DISPLACEMENT_FRACTION).powi(2).ceil();
    (thermal.max(displacement).max(2.0)) as usize
}

impl<T: Real> SpinBosonParams<T> {
    pub fn bath_dims(&self) -> Vec<usize> {
        self.fock_cutoff.clone()
    }

    pub fn suggested_cutoffs(&self) -> Vec<usize> {
        self.modes
            .iter()
            .map(|m| minimal_cutoff(m, self.beta, self.t))
            .collect()
    }

    fn validate_shape(&self) -> Result<()> {
        if self.modes.is_empty() {
            return Err(Error::Parameter("spin-boson model needs at least one mode".into()));
        }
        if self.fock_cutoff.len() != self.modes.len() {
            return Err(Error::Parameter(format!(
                "{} cutoffs given for {} modes",
                self.fock_cutoff.len(),
                self.modes.len()
            )));
        }
        if self.fock_cutoff.iter().any(|&n| n < 2) {
            return Err(Error::Parameter("every Fock cutoff must be at least 2".into()));
        }
        if !(self.beta > T::zero()) || !self.t.is_finite() || self.t < T::zero() {
            return Err(Error::Parameter("need beta > 0 and finite t >= 0".into()));
        }
        if self.modes.iter().any(|m| !(m.omega > T::zero())) {
            return Err(Error::Parameter("mode frequencies must be positive".into()));
        }
        Ok(())
    }

    /// Full check, including that every cutoff is large enough.
    pub fn validate(&self) -> Result<()> {
        self.validate_shape()?;
        let suggested = self.suggested_cutoffs();
        if self.fock_cutoff.iter().zip(&suggested).any(|(n, s)| n < s) {
            return Err(Error::Parameter(format!(
                "Fock cutoffs {:?} too small for beta = {} and t = {}; use at least {suggested:?}",
                self.fock_cutoff,
                self.beta.as_f64(),
                self.t.as_f64()
            )));
        }
        Ok(())
    }
}

fn mode_operator<T: Real>(cutoffs: &[usize], k: usize, op: &Operator<T>) -> Operator<T> {
    let factors: Vec<Operator<T>> = cutoffs
        .iter()
        .enumerate()
        .map(|(i, &n)| if i == k { op.clone() } else { Operator::identity(&[n]) })
        .collect();
    tensor_all(&factors).expect("at least one mode")
}

fn system_hamiltonian<T: Real>(p: &SpinBosonParams<T>) -> Operator<T> {
    Operator::pauli_z().scale(p.omega0 / T::lit(2.0))
}

fn bath_hamiltonian<T: Real>(p: &SpinBosonParams<T>) -> Operator<T> {
    let mut h = Operator::zeros(&p.fock_cutoff);
    for (k, (mode, &n)) in p.modes.iter().zip(&p.fock_cutoff).enumerate() {
        let a = Operator::<T>::annihilation(n);
        let number = &a.adjoint() * &a;
        h = &h + &mode_operator(&p.fock_cutoff, k, &number).scale(mode.omega);
    }
    h
}

/// `sum_k (f_k a_k + f_k^* a_k^dagger)` on the bath factors.
fn linear_coupling<T: Real>(cutoffs: &[usize], amplitudes: &[Complex<T>]) -> Operator<T> {
    let mut op = Operator::zeros(cutoffs);
    for (k, (&f, &n)) in amplitudes.iter().zip(cutoffs).enumerate() {
        let a = Operator::<T>::annihilation(n);
        let term = &a.scale_complex(f) + &a.adjoint().scale_complex(f.conj());
        op = &op + &mode_operator(cutoffs, k, &term);
    }
    op
}

/// `H0 + H1` with `H0 = Z sum_k (G_k a_k + G_k^* a_k^dagger)` and `H1 = -sum_k c_k`.
pub fn magnus_generator<T: Real>(p: &SpinBosonParams<T>) -> Result<Operator<T>> {
    p.validate_shape()?;
    let amplitudes: Vec<Complex<T>> = p
        .modes
        .iter()
        .map(|m| displacement_amplitude(m, p.t))
        .collect();
    let phase = p
        .modes
        .iter()
        .fold(T::zero(), |s, m| s + magnus_phase(m, p.t));
    let bath = linear_coupling(&p.fock_cutoff, &amplitudes);
    let mut dims = vec![2];
    dims.extend_from_slice(&p.fock_cutoff);
    let h0 = tensor(&Operator::pauli_z(), &bath);
    Ok(&h0 - &Operator::identity(&dims).scale(phase))
}

/// Interaction-picture Hamiltonian `Z sum_k (g_k a_k e^{-i w_k s} + h.c.)` at time `s`.
pub fn interaction_picture_hamiltonian<T: Real>(p: &SpinBosonParams<T>, s: T) -> Operator<T> {
    let amplitudes: Vec<Complex<T>> = p
        .modes
        .iter()
        .map(|m| {
            let phase = -m.omega * s;
            m.g * c(phase.cos(), phase.sin())
        })
        .collect();
    tensor(&Operator::pauli_z(), &linear_coupling(&p.fock_cutoff, &amplitudes))
}

/// Lab-frame Hamiltonian on `system (x) modes`.
pub fn lab_hamiltonian<T: Real>(p: &SpinBosonParams<T>) -> Operator<T> {
    let h_s = system_hamiltonian(p);
    let h_b = bath_hamiltonian(p);
    let amplitudes: Vec<Complex<T>> = p.modes.iter().map(|m| m.g).collect();
    let v = tensor(&Operator::pauli_z(), &linear_coupling(&p.fock_cutoff, &amplitudes));
    let free = &tensor(&h_s, &Operator::identity(&p.fock_cutoff))
        + &tensor(&Operator::identity(&[2]), &h_b);
    &free + &v
}

/// Midpoint-sampled product of interaction-picture exponentials.
pub fn trotter_interaction_propagator<T: Real>(
    p: &SpinBosonParams<T>,
    steps: usize,
) -> Result<Operator<T>> {
    p.validate_shape()?;
    let protocol = Protocol::sampled(p.t, steps, |s| interaction_picture_hamiltonian(p, s))?;
    propagator(&protocol)
}

/// `exp(i H_free t) exp(-i H t)`: the exact truncated evolution in the interaction picture.
pub fn lab_frame_interaction_propagator<T: Real>(p: &SpinBosonParams<T>) -> Result<Operator<T>> {
    p.validate_shape()?;
    let free = &tensor(&system_hamiltonian(p), &Operator::identity(&p.fock_cutoff))
        + &tensor(&Operator::identity(&[2]), &bath_hamiltonian(p));
    let u_lab = expm_unitary(&lab_hamiltonian(p), p.t)?;
    let back = expm_unitary(&free, -p.t)?;
    back.matmul(&u_lab)
}

fn build<T: Real>(p: &SpinBosonParams<T>) -> Result<ThermalModel<T>> {
    let generator = magnus_generator(p)?;
    let protocol = Protocol::single(p.t, generator)?;
    let h_s = system_hamiltonian(p);
    ThermalModel::new(protocol, h_s.clone(), h_s, bath_hamiltonian(p), p.beta, p.beta)
}

/// Validated spin-boson model evolved with the Magnus generator.
pub fn spin_boson_model<T: Real>(p: &SpinBosonParams<T>) -> Result<ThermalModel<T>> {
    p.validate()?;
    build(p)
}

/// Same model without the cutoff check, for convergence studies below the validated cutoff.
pub fn spin_boson_model_truncated<T: Real>(p: &SpinBosonParams<T>) -> Result<ThermalModel<T>> {
    p.validate_shape()?;
    build(p)
}

/// `-sum_k w_k |g_k|^2 (sin(w_k t / 2) / (w_k / 2))^2`, exact in the untruncated theory.
pub fn spin_boson_analytic_heat<T: Real>(p: &SpinBosonParams<T>) -> T {
    analytic_heat_for_modes(&p.modes, p.t)
}

pub fn analytic_heat_for_modes<T: Real>(modes: &[BosonMode<T>], t: T) -> T {
    let two = T::lit(2.0);
    modes.iter().fold(T::zero(), |acc, m| {
        let f = (m.omega * t / two).sin() / (m.omega / two);
        acc - m.omega * m.g.norm_sqr() * f * f
    })
}

/// Discretised ohmic bath `J(w) = eta w exp(-w / w_c)` on a midpoint grid up to `max_factor * w_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OhmicSpectrum {
    pub omega_c: f64,
    pub eta: f64,
    pub n_modes: usize,
    pub max_factor: f64,
}

impl OhmicSpectrum {
    pub fn modes<T: Real>(&self) -> Vec<BosonMode<T>> {
        let dw = self.max_factor * self.omega_c / self.n_modes as f64;
        (0..self.n_modes)
            .map(|k| {
                let w = (k as f64 + 0.5) * dw;
                let g2 = self.eta * (-w / self.omega_c).exp() * dw;
                BosonMode {
                    omega: T::lit(w),
                    g: cr(T::lit(g2.sqrt())),
                }
            })
            .collect()
    }

    /// Continuum heat `-eta ln(1 + (w_c t)^2)`.
    pub fn continuum_heat(&self, t: f64) -> f64 {
        -self.eta * (1.0 + (self.omega_c * t).powi(2)).ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatDecay {
    /// Largest `|<Q~>_B|` on the early window.
    pub early_peak: f64,
    /// `|<Q~>_B|` at the late time.
    pub late: f64,
    /// `late / early_peak`.
    pub ratio: f64,
}

/// Compares the late-time guessed heat with its early-time peak for a finite mode set.
pub fn heat_decay_diagnostic(
    modes: &[BosonMode<f64>],
    early_window: f64,
    late_time: f64,
    samples: usize,
) -> HeatDecay {
    let early_peak = (1..=samples)
        .map(|i| analytic_heat_for_modes(modes, early_window * i as f64 / samples as f64).abs())
        .fold(0.0, f64::max);
    let late = analytic_heat_for_modes(modes, late_time).abs();
    HeatDecay {
        early_peak,
        late,
        ratio: late / early_peak,
    }
}
