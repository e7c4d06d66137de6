//! Two-point energy measurements on system and bath jointly.

use crate::error::{Error, Result};
use crate::otm::{GuessedEnsemble, ThermalModel};
use crate::qcore::{
    eig_hermitian, partial_trace_system, propagator, tensor, DensityOperator, Operator,
};
use crate::scalar::Real;
use crate::thermo::energy_expectation;

/// Largest `d_S * d_B` for exhaustive trajectory enumeration.
pub const MAX_TPM_DIM: usize = 256;

/// One measurement record `(e, q) -> (e', q')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trajectory<T: Real> {
    pub epsilon: T,
    pub q: T,
    pub epsilon_prime: T,
    pub q_prime: T,
    pub probability: T,
    /// `(q' + e') - (q + e)`.
    pub work: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TpmDistribution<T: Real> {
    /// Ordered by initial system level, initial bath level, final system level, final bath level.
    pub trajectories: Vec<Trajectory<T>>,
}

impl<T: Real> TpmDistribution<T> {
    pub fn total_probability(&self) -> T {
        self.trajectories
            .iter()
            .fold(T::zero(), |s, t| s + t.probability)
    }

    pub fn mean_work(&self) -> T {
        self.trajectories
            .iter()
            .fold(T::zero(), |s, t| s + t.probability * t.work)
    }

    /// `sum p exp(-beta (W - shift))`.
    pub fn exp_average(&self, beta: T, shift: T) -> T {
        self.trajectories.iter().fold(T::zero(), |s, t| {
            s + t.probability * (-beta * (t.work - shift)).exp()
        })
    }
}

fn require_tpm(m: &ThermalModel<impl Real>, what: &str) -> Result<()> {
    m.require_single_temperature(what)?;
    if m.total_dim() > MAX_TPM_DIM {
        return Err(Error::TooLarge(format!(
            "{what}: total dimension {} exceeds {MAX_TPM_DIM}",
            m.total_dim()
        )));
    }
    Ok(())
}

/// Enumerates all `d_S^2 d_B^2` trajectories with their probabilities.
pub fn build_tpm_distribution<T: Real>(m: &ThermalModel<T>) -> Result<TpmDistribution<T>> {
    require_tpm(m, "build_tpm_distribution")?;
    let u = propagator(m.protocol())?;
    let tau_s = m.system_gibbs_initial()?;
    let tau_b = m.bath_gibbs()?;
    let initial = tau_s.spectrum();
    let bath = tau_b.spectrum();
    let final_s = eig_hermitian(m.h_s_final())?;

    let v_in = tensor(
        &Operator::new(initial.dims().to_vec(), initial.eigenvectors().clone())?,
        &Operator::new(bath.dims().to_vec(), bath.eigenvectors().clone())?,
    );
    let v_out = tensor(
        &Operator::new(final_s.dims().to_vec(), final_s.eigenvectors().clone())?,
        &Operator::new(bath.dims().to_vec(), bath.eigenvectors().clone())?,
    );
    // amplitudes[(e' q', e q)] = <e', q'| U |e, q>
    let amplitudes = v_out.adjoint().matmul(&u)?.matmul(&v_in)?;

    let (ds, db) = (initial.len(), bath.len());
    let mut trajectories = Vec::with_capacity(ds * ds * db * db);
    for (i, &epsilon) in initial.eigenvalues().iter().enumerate() {
        for (a, &q) in bath.eigenvalues().iter().enumerate() {
            let p0 = tau_s.weights()[i] * tau_b.weights()[a];
            let col = i * db + a;
            for (f, &epsilon_prime) in final_s.eigenvalues().iter().enumerate() {
                for (b, &q_prime) in bath.eigenvalues().iter().enumerate() {
                    let amp = amplitudes.get(f * db + b, col);
                    trajectories.push(Trajectory {
                        epsilon,
                        q,
                        epsilon_prime,
                        q_prime,
                        probability: p0 * amp.norm_sqr(),
                        work: (q_prime + epsilon_prime) - (q + epsilon),
                    });
                }
            }
        }
    }
    Ok(TpmDistribution { trajectories })
}

/// `<exp(-beta W)>` over the distribution.
pub fn standard_jarzynski_average<T: Real>(d: &TpmDistribution<T>, beta: T) -> T {
    d.exp_average(beta, T::zero())
}

/// `Tr[(H_S(t) + H_B) U (tau_S (x) tau_B) U^dagger] - Tr[H_S(0) tau_S] - Tr[H_B tau_B]`.
pub fn exact_work_expectation<T: Real>(m: &ThermalModel<T>) -> Result<T> {
    m.require_single_temperature("exact_work_expectation")?;
    let u = propagator(m.protocol())?;
    let tau_s = m.system_gibbs_initial()?;
    let tau_b = m.bath_gibbs()?;
    let rho = tau_s.state.tensor(&tau_b.state).conjugate_by(&u)?;
    let id_s = Operator::identity(m.system_dims());
    let id_b = Operator::identity(m.bath_dims());
    let h_final = &tensor(m.h_s_final(), &id_b) + &tensor(&id_s, m.h_b());
    Ok(energy_expectation(&h_final, &rho)? - tau_s.mean_energy() - tau_b.mean_energy())
}

/// `Tr[(I (x) H_B)(theta - exact)]`, the bath-energy gap between the guessed and exact states.
pub fn bath_energy_correction<T: Real>(m: &ThermalModel<T>, g: &GuessedEnsemble<T>) -> Result<T> {
    let ns = m.n_system_factors();
    let bath_energy = |rho: &DensityOperator<T>| -> Result<T> {
        let reduced = DensityOperator::new(partial_trace_system(rho.as_operator(), ns)?.hermitian_part())?;
        energy_expectation(m.h_b(), &reduced)
    };
    Ok(bath_energy(&g.theta_sb)? - bath_energy(&g.exact_state)?)
}

/// `|<W~> - <W> - Tr[(I (x) H_B)(theta - exact)]|` with `<W>` from the trajectory distribution.
pub fn work_relation_residual<T: Real>(m: &ThermalModel<T>, g: &GuessedEnsemble<T>) -> Result<T> {
    require_tpm(m, "work_relation_residual")?;
    let w = build_tpm_distribution(m)?.mean_work();
    Ok((g.guessed_work_mean() - w - bath_energy_correction(m, g)?).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationReport<T: Real> {
    /// `<exp(-beta (W - <W~>))>` over trajectories.
    pub lhs1: T,
    /// `exp(D_full)`.
    pub rhs1: T,
    /// `<exp(-beta (W~ - <W>))>` over the initial outcome distribution.
    pub lhs2: T,
    /// `exp(-D_full)`.
    pub rhs2: T,
    pub product: T,
    pub ineq1_ok: bool,
    pub ineq2_ok: bool,
    pub product_ok: bool,
}

impl<T: Real> DeviationReport<T> {
    pub fn all_ok(&self) -> bool {
        self.ineq1_ok && self.ineq2_ok && self.product_ok
    }
}

/// Deviation inequalities between exact and guessed work.
pub fn deviation_inequalities<T: Real>(
    m: &ThermalModel<T>,
    g: &GuessedEnsemble<T>,
) -> Result<DeviationReport<T>> {
    require_tpm(m, "deviation_inequalities")?;
    let beta = g.beta_s;
    let dist = build_tpm_distribution(m)?;
    let w_exact = dist.mean_work();
    let w_guess = g.guessed_work_mean();
    let lhs1 = dist.exp_average(beta, w_guess);
    let lhs2 = g.outcomes.iter().fold(T::zero(), |s, r| {
        s + r.prob_initial * (-beta * (r.delta_e_tilde - g.guessed_heat - w_exact)).exp()
    });
    let rhs1 = g.relative_entropy_full.exp();
    let rhs2 = (-g.relative_entropy_full).exp();
    let slack = T::tol(crate::otm::TOL_INEQUALITY);
    let product = lhs1 * lhs2;
    Ok(DeviationReport {
        lhs1,
        rhs1,
        lhs2,
        rhs2,
        product,
        ineq1_ok: lhs1 >= rhs1 - slack * rhs1.max(T::one()),
        ineq2_ok: lhs2 >= rhs2 - slack,
        product_ok: product >= T::one() - slack,
    })
}
