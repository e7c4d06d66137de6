use crate::error::{Error, Result};
use crate::otm::{build_guessed_ensemble, exp_average_delta_e, GuessedEnsemble, ThermalModel};
use crate::qcore::{
    local_decomposition, propagator, DensityOperator, Operator, Protocol, Segment,
};
use crate::scalar::Real;
use crate::thermo::{energy_expectation, gibbs, relative_entropy_to_gibbs};

/// Largest coupling remainder (relative to the generator size) still treated as zero.
pub const TOL_ZERO_INTERACTION: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedSystemReport<T: Real> {
    /// `|<Q~>_B|`.
    pub heat: T,
    /// `|<W~> - <dE>|`.
    pub work_minus_delta_e: T,
    /// `|D_full - D_reduced|`.
    pub relative_entropy_gap: T,
    /// Max-norm distance between the guessed system state and the closed-system formula.
    pub rho_tilde_residual: T,
    /// Relative residual of `<exp(-beta dE)> = exp(-beta dF_S) exp(-D[rho~_S || tau_S])`.
    pub jarzynski_residual: T,
    pub passed: bool,
}

fn system_parts<T: Real>(m: &ThermalModel<T>) -> Result<Vec<Segment<T>>> {
    let ns = m.n_system_factors();
    m.protocol()
        .segments()
        .iter()
        .enumerate()
        .map(|(k, seg)| {
            let (a, _, rest) = local_decomposition(&seg.generator, ns)?;
            let bound = T::lit(TOL_ZERO_INTERACTION) * seg.generator.max_abs().max(T::one());
            if rest.max_abs() > bound {
                return Err(Error::Precondition(format!(
                    "segment {k} couples system and bath (remainder {:.3e})",
                    rest.max_abs().as_f64()
                )));
            }
            Ok(Segment {
                duration: seg.duration,
                generator: a.hermitian_part(),
            })
        })
        .collect()
}

/// The same system evolution with the bath replaced by a single level.
///
/// Fails with a precondition error if any segment couples system and bath.
pub fn system_only_model<T: Real>(m: &ThermalModel<T>) -> Result<ThermalModel<T>> {
    let segments = system_parts(m)?;
    let trivial_bath = Operator::zeros(&[1]);
    let mut segments_1 = Vec::with_capacity(segments.len());
    for s in segments {
        segments_1.push(Segment {
            duration: s.duration,
            generator: s.generator.tensor(&Operator::identity(&[1])),
        });
    }
    ThermalModel::new(
        Protocol::new(segments_1)?,
        m.h_s_initial().clone(),
        m.h_s_final().clone(),
        trivial_bath,
        m.beta_s(),
        m.beta_s(),
    )
}

/// `sum_e p(e) U_S |e><e| U_S^dagger` with `p(e)` proportional to
/// `exp(-beta Tr[H_S(t) U_S |e><e| U_S^dagger])`.
pub fn closed_system_guessed_state<T: Real>(m: &ThermalModel<T>) -> Result<DensityOperator<T>> {
    let u_s = propagator(&Protocol::new(system_parts(m)?)?)?;
    let tau = gibbs(m.h_s_initial(), m.beta_s())?;
    let spectrum = tau.spectrum();
    let evolved: Vec<DensityOperator<T>> = (0..spectrum.len())
        .map(|k| DensityOperator::new(spectrum.projector(k).conjugate_by(&u_s)?.hermitian_part()))
        .collect::<Result<_>>()?;
    let energies: Vec<T> = evolved
        .iter()
        .map(|r| energy_expectation(m.h_s_final(), r))
        .collect::<Result<_>>()?;
    let e_min = energies.iter().copied().fold(energies[0], |a, b| a.min(b));
    let w: Vec<T> = energies
        .iter()
        .map(|&e| (-m.beta_s() * (e - e_min)).exp())
        .collect();
    let sum = w.iter().fold(T::zero(), |s, &x| s + x);
    let parts: Vec<(T, &DensityOperator<T>)> =
        w.iter().map(|&x| x / sum).zip(evolved.iter()).collect();
    DensityOperator::mixture(&parts)
}

/// Checks that an uncoupled model reduces to the closed-system statements.
pub fn closed_system_reduction_check<T: Real>(m: &ThermalModel<T>) -> Result<ClosedSystemReport<T>> {
    let formula = closed_system_guessed_state(m)?;
    let g: GuessedEnsemble<T> = build_guessed_ensemble(m)?;
    let beta = g.beta_s;
    let tau_final = gibbs(m.h_s_final(), beta)?;
    let d = relative_entropy_to_gibbs(&formula, &tau_final)?;
    let avg = exp_average_delta_e(&g.outcomes, beta);
    let ln_rhs = -beta * g.delta_f - d;
    let report = ClosedSystemReport {
        heat: g.guessed_heat.abs(),
        work_minus_delta_e: (g.guessed_work_mean() - g.mean_delta_e).abs(),
        relative_entropy_gap: (g.relative_entropy_full - g.relative_entropy_reduced).abs(),
        rho_tilde_residual: g.rho_s_tilde.as_operator().max_abs_diff(formula.as_operator()),
        jarzynski_residual: (avg.ln() - ln_rhs).exp_m1().abs(),
        passed: false,
    };
    let passed = report.heat <= T::tol(1e-10)
        && report.work_minus_delta_e <= T::tol(1e-10)
        && report.relative_entropy_gap <= T::tol(1e-9)
        && report.rho_tilde_residual <= T::tol(1e-10)
        && report.jarzynski_residual <= T::tol(1e-8);
    Ok(ClosedSystemReport { passed, ..report })
}

/// Sudden quench `H_S(0) -> H_S(t)`: the state does not move, only the Hamiltonian changes.
pub fn sudden_quench_model<T: Real>(
    h_initial: Operator<T>,
    h_final: Operator<T>,
    beta: T,
) -> Result<ThermalModel<T>> {
    let dims = h_initial.dims().to_vec();
    let generator = Operator::zeros(&dims).tensor(&Operator::identity(&[1]));
    ThermalModel::new(
        Protocol::single(T::zero(), generator)?,
        h_initial,
        h_final,
        Operator::zeros(&[1]),
        beta,
        beta,
    )
}
