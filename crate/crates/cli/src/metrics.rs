//! Evaluation of one model instance into the numbers reported in a row.

use qthermo::models::{
    closed_system_reduction_check, random_model_with, spin_boson_analytic_heat, spin_boson_model,
    sudden_quench_model, two_qubit_analytic_heat_with_bath_beta, two_qubit_dephasing_model,
    two_qubit_dephasing_model_two_temperature, BosonMode, OhmicSpectrum, RandomModelSpec,
    SpinBosonParams, TwoQubitDephasingParams,
};
use qthermo::otm::{
    build_guessed_ensemble, exp_average_delta_e, heat_identity_residual,
    max_entropy_property_check, max_guessed_work_gap, modified_partition_residual,
    theorem1_residual, theorem2_residual, MaxEntropyOutcome,
};
use qthermo::qcore::Operator;
use qthermo::tpm::{
    build_tpm_distribution, deviation_inequalities, standard_jarzynski_average,
    work_relation_residual, MAX_TPM_DIM,
};
use qthermo::{Complex, ThermalModel};

use crate::config::{ClosedSpec, ModelSpec, Point, SpectrumSpec, SpinBosonSpec};

/// Perturbations per model for the max-entropy check.
pub const MAX_ENTROPY_PERTURBATIONS: usize = 50;

/// How a column is folded into the summary row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agg {
    None,
    Max,
    Min,
}

/// Metric columns in output order, with their summary rule.
pub const METRIC_COLUMNS: &[(&str, Agg)] = &[
    ("d_system", Agg::None),
    ("d_bath", Agg::None),
    ("total_dim", Agg::None),
    ("beta_s", Agg::None),
    ("beta_b", Agg::None),
    ("mean_delta_e", Agg::None),
    ("guessed_heat", Agg::None),
    ("guessed_work", Agg::None),
    ("z_tilde", Agg::None),
    ("f_tilde", Agg::None),
    ("delta_f", Agg::None),
    ("relative_entropy_full", Agg::None),
    ("relative_entropy_reduced", Agg::None),
    ("theorem1_residual", Agg::Max),
    ("theorem2_residual", Agg::Max),
    ("heat_identity_residual", Agg::Max),
    ("modified_partition_residual", Agg::Max),
    ("energy_conservation_residual", Agg::Max),
    ("gap_full", Agg::Min),
    ("gap_reduced", Agg::Min),
    ("work_bound_gap", Agg::Min),
    ("monotonicity_gap", Agg::Min),
    ("analytic_heat", Agg::None),
    ("analytic_heat_rel_error", Agg::Max),
    ("tpm_mean_work", Agg::None),
    ("tpm_jarzynski_residual", Agg::Max),
    ("work_relation_residual", Agg::Max),
    ("deviation_lhs1", Agg::None),
    ("deviation_lhs2", Agg::None),
    ("deviation_product", Agg::Min),
    ("closed_heat", Agg::Max),
    ("closed_work_minus_delta_e", Agg::Max),
    ("closed_rho_tilde_residual", Agg::Max),
    ("closed_jarzynski_residual", Agg::Max),
    ("max_entropy_increase", Agg::Max),
];

/// Numbers for one model instance, indexed like [`METRIC_COLUMNS`].
#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub values: Vec<Option<f64>>,
    /// Relative tolerance for `analytic_heat_rel_error`, when an oracle exists.
    pub analytic_tol: Option<f64>,
    /// Reason the max-entropy check could not run.
    pub max_entropy_skipped: Option<String>,
}

impl Metrics {
    fn empty() -> Self {
        Self {
            values: vec![None; METRIC_COLUMNS.len()],
            analytic_tol: None,
            max_entropy_skipped: None,
        }
    }

    fn set(&mut self, name: &str, v: f64) {
        let i = column_index(name);
        self.values[i] = Some(v);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values[column_index(name)]
    }
}

pub fn column_index(name: &str) -> usize {
    METRIC_COLUMNS
        .iter()
        .position(|(n, _)| *n == name)
        .unwrap_or_else(|| panic!("no metric column {name}"))
}

/// What to compute beyond the always-on quantities.
#[derive(Debug, Clone, Copy, Default)]
pub struct Extras {
    pub max_entropy: bool,
}

/// A built model plus its closed-form heat, if any.
pub struct Built {
    pub model: ThermalModel,
    pub analytic: Option<(f64, f64)>,
    pub closed: bool,
    /// `[H_S, H]` vanishes, so `<exp(-beta dE)>` must equal one.
    pub conserves_system_energy: bool,
}

pub fn spin_boson_params(s: &SpinBosonSpec) -> Result<SpinBosonParams<f64>, String> {
    let mut modes: Vec<BosonMode<f64>> = s
        .modes
        .iter()
        .map(|m| BosonMode {
            omega: m.omega,
            g: Complex::new(m.g, m.g_im),
        })
        .collect();
    if let Some(SpectrumSpec::Ohmic {
        omega_c,
        eta,
        n_modes,
        max_factor,
    }) = &s.spectrum
    {
        modes.extend(
            OhmicSpectrum {
                omega_c: *omega_c,
                eta: *eta,
                n_modes: *n_modes,
                max_factor: *max_factor,
            }
            .modes::<f64>(),
        );
    }
    if modes.is_empty() {
        return Err("spin_boson needs `modes` or `spectrum`".into());
    }
    let mut p = SpinBosonParams {
        omega0: s.omega0,
        modes,
        fock_cutoff: Vec::new(),
        beta: s.beta,
        t: s.t,
    };
    p.fock_cutoff = match &s.cutoffs {
        Some(c) => c.clone(),
        None => p.suggested_cutoffs(),
    };
    Ok(p)
}

fn closed_model(c: &ClosedSpec, seed: u64) -> Result<ThermalModel, String> {
    match (&c.h_initial, &c.h_final) {
        (Some(h0), Some(h1)) => {
            let beta = c.beta.ok_or("a sudden quench needs `beta`")?;
            let op = |rows: &Vec<Vec<f64>>| {
                let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
                Operator::<f64>::from_real_rows(&refs).map_err(|e| e.to_string())
            };
            sudden_quench_model(op(h0)?, op(h1)?, beta).map_err(|e| e.to_string())
        }
        (None, None) => {
            let ds = c
                .d_system
                .ok_or("closed_system needs `d_system` or `h_initial`/`h_final`")?;
            let mut spec = RandomModelSpec::new(ds, c.d_bath, c.n_segments, true);
            spec.interaction_scale = 0.0;
            let m = random_model_with::<f64>(seed, &spec).map_err(|e| e.to_string())?;
            match c.beta {
                Some(b) => m.with_betas(b, b).map_err(|e| e.to_string()),
                None => Ok(m),
            }
        }
        _ => Err("`h_initial` and `h_final` must be given together".into()),
    }
}

pub fn build(spec: &ModelSpec, seed: u64) -> Result<Built, String> {
    let err = |e: qthermo::Error| e.to_string();
    match spec {
        ModelSpec::TwoQubitDephasing(d) => {
            let p = TwoQubitDephasingParams::new(d.omega_s, d.omega_b, d.j, d.beta, d.t);
            let beta_b = d.beta_b.unwrap_or(d.beta);
            let model = if d.beta_b.is_some() {
                two_qubit_dephasing_model_two_temperature(&p, beta_b).map_err(err)?
            } else {
                two_qubit_dephasing_model(&p).map_err(err)?
            };
            Ok(Built {
                model,
                analytic: Some((two_qubit_analytic_heat_with_bath_beta(&p, beta_b), 1e-8)),
                closed: false,
                conserves_system_energy: false,
            })
        }
        ModelSpec::SpinBoson(s) => {
            let p = spin_boson_params(s)?;
            Ok(Built {
                model: spin_boson_model(&p).map_err(err)?,
                analytic: Some((spin_boson_analytic_heat(&p), 1e-3)),
                closed: false,
                conserves_system_energy: true,
            })
        }
        ModelSpec::Random(r) => {
            let mut spec =
                RandomModelSpec::new(r.d_system, r.d_bath, r.n_segments, r.time_dependent_system);
            spec.interaction_scale = r.interaction_scale;
            let m = random_model_with::<f64>(seed, &spec).map_err(err)?;
            let model = match (r.beta_s, r.beta_b) {
                (None, None) => m,
                (bs, bb) => {
                    let bs = bs.unwrap_or(m.beta_s());
                    m.with_betas(bs, bb.unwrap_or(bs)).map_err(err)?
                }
            };
            Ok(Built {
                model,
                analytic: None,
                closed: false,
                conserves_system_energy: false,
            })
        }
        ModelSpec::ClosedSystem(c) => Ok(Built {
            model: closed_model(c, seed)?,
            analytic: None,
            closed: true,
            conserves_system_energy: false,
        }),
    }
}

/// References below this magnitude are compared absolutely.
pub const ABS_FLOOR: f64 = 1e-10;

fn rel(a: f64, b: f64) -> f64 {
    if b.abs() < ABS_FLOOR {
        (a - b).abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

pub fn evaluate(built: &Built, seed: u64, extras: Extras) -> Result<Metrics, String> {
    let err = |e: qthermo::Error| e.to_string();
    let m = &built.model;
    let g = build_guessed_ensemble(m).map_err(err)?;
    let mut out = Metrics::empty();
    let single = m.is_single_temperature();

    out.set("d_system", m.d_system() as f64);
    out.set("d_bath", m.d_bath() as f64);
    out.set("total_dim", m.total_dim() as f64);
    out.set("beta_s", m.beta_s());
    out.set("beta_b", m.beta_b());
    out.set("mean_delta_e", g.mean_delta_e);
    out.set("guessed_heat", g.guessed_heat);
    out.set("guessed_work", g.guessed_work_mean());
    out.set("z_tilde", g.z_tilde);
    out.set("f_tilde", g.f_tilde);
    out.set("delta_f", g.delta_f);
    out.set("relative_entropy_full", g.relative_entropy_full);
    out.set("relative_entropy_reduced", g.relative_entropy_reduced);

    let t2 = theorem2_residual(&g);
    out.set("theorem2_residual", t2.residual);
    out.set("work_bound_gap", t2.work_bound_gap);
    out.set("heat_identity_residual", heat_identity_residual(&g));
    out.set(
        "modified_partition_residual",
        modified_partition_residual(&g),
    );
    if built.conserves_system_energy {
        out.set(
            "energy_conservation_residual",
            (exp_average_delta_e(&g.outcomes, g.beta_s) - 1.0).abs(),
        );
    }
    out.set(
        "monotonicity_gap",
        g.relative_entropy_full - g.relative_entropy_reduced,
    );

    if single {
        out.set(
            "theorem1_residual",
            theorem1_residual(&g).map_err(err)?.residual,
        );
        let gap = max_guessed_work_gap(&g).map_err(err)?;
        out.set("gap_full", gap.gap_full);
        out.set("gap_reduced", gap.gap_reduced);
    }

    if let Some((analytic, tol)) = built.analytic {
        out.set("analytic_heat", analytic);
        out.set("analytic_heat_rel_error", rel(g.guessed_heat, analytic));
        out.analytic_tol = Some(tol);
    }

    if single && m.total_dim() <= MAX_TPM_DIM {
        let d = build_tpm_distribution(m).map_err(err)?;
        out.set("tpm_mean_work", d.mean_work());
        let jar = standard_jarzynski_average(&d, m.beta_s());
        out.set(
            "tpm_jarzynski_residual",
            rel(jar, (-m.beta_s() * g.delta_f).exp()),
        );
        out.set(
            "work_relation_residual",
            work_relation_residual(m, &g).map_err(err)?,
        );
        let dev = deviation_inequalities(m, &g).map_err(err)?;
        out.set("deviation_lhs1", dev.lhs1);
        out.set("deviation_lhs2", dev.lhs2);
        out.set("deviation_product", dev.product);
    }

    if built.closed {
        let r = closed_system_reduction_check(m).map_err(err)?;
        out.set("closed_heat", r.heat);
        out.set("closed_work_minus_delta_e", r.work_minus_delta_e);
        out.set("closed_rho_tilde_residual", r.rho_tilde_residual);
        out.set("closed_jarzynski_residual", r.jarzynski_residual);
    }

    if extras.max_entropy {
        let r = max_entropy_property_check(&g, MAX_ENTROPY_PERTURBATIONS, seed).map_err(err)?;
        match r.outcome {
            MaxEntropyOutcome::Skipped(reason) => out.max_entropy_skipped = Some(reason),
            _ => out.set("max_entropy_increase", r.max_entropy_increase),
        }
    }
    Ok(out)
}

/// Builds and evaluates one sweep point.
pub fn evaluate_point(p: &Point, extras: Extras) -> Result<Metrics, String> {
    evaluate(&build(&p.model, p.seed)?, p.seed, extras)
}
