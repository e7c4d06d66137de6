//! Built-in verification bundles for the `verify` command.

use std::f64::consts::PI;

use rayon::prelude::*;

use qthermo::models::{
    random_model, random_model_with, spin_boson_analytic_heat, spin_boson_model,
    spin_boson_model_truncated, sudden_quench_model, two_qubit_analytic_heat_with_bath_beta,
    two_qubit_dephasing_model, two_qubit_dephasing_model_two_temperature, BosonMode,
    RandomModelSpec, SpinBosonParams, TwoQubitDephasingParams,
};
use qthermo::otm::{build_guessed_ensemble, theorem1_residual, theorem2_residual};
use qthermo::Complex;

use crate::checks::{self, Bound, Observation};
use crate::metrics::{evaluate, Built, Extras, Metrics};
use crate::output::{format_f64, Cell, Table};

pub const SUITES: &[&str] = &[
    "core-identities",
    "oracles",
    "inequalities",
    "closed-system",
    "spin-boson-convergence",
    "two-temperature",
];

/// Worst observation of one quantity over a suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteLine {
    pub check: String,
    pub instances: usize,
    pub worst: Observation,
    pub at: String,
}

impl SuiteLine {
    pub fn passed(&self) -> bool {
        self.worst.passed()
    }
}

struct Instance {
    label: String,
    build: Box<dyn Fn() -> Built + Send + Sync>,
    extras: Extras,
}

fn instance(label: String, build: impl Fn() -> Built + Send + Sync + 'static) -> Instance {
    Instance {
        label,
        build: Box::new(build),
        extras: Extras::default(),
    }
}

fn plain(model: qthermo::ThermalModel) -> Built {
    Built {
        model,
        analytic: None,
        closed: false,
        conserves_system_energy: false,
    }
}

fn evaluate_all(instances: &[Instance]) -> Vec<Metrics> {
    instances
        .par_iter()
        .enumerate()
        .map(|(k, i)| {
            evaluate(&(i.build)(), k as u64, i.extras)
                .unwrap_or_else(|e| panic!("{}: {e}", i.label))
        })
        .collect()
}

/// Folds registered checks over evaluated instances.
fn lines_for(names: &[&str], instances: &[Instance], rows: &[Metrics]) -> Vec<SuiteLine> {
    names
        .iter()
        .filter_map(|name| {
            let check = checks::find(name).expect("registered check");
            let s = checks::summarize(check, rows, None);
            s.worst.map(|(o, i)| SuiteLine {
                check: name.to_string(),
                instances: s.evaluated,
                worst: o,
                at: instances[i].label.clone(),
            })
        })
        .collect()
}

/// A line from raw `(value, label)` pairs.
fn line(check: &str, bound: Bound, column: &'static str, values: Vec<(f64, String)>) -> SuiteLine {
    let instances = values.len();
    let (value, at) = values
        .into_iter()
        .max_by(|a, b| bound.severity(a.0).total_cmp(&bound.severity(b.0)))
        .unwrap_or((f64::NAN, "no instances".into()));
    SuiteLine {
        check: check.into(),
        instances,
        worst: Observation {
            column,
            value,
            bound,
        },
        at,
    }
}

fn sweep_shape(seed: u64) -> (usize, usize, usize) {
    let ds = [2, 3][(seed % 2) as usize];
    let db = [2, 3, 4][((seed / 2) % 3) as usize];
    let segs = 1 + ((seed / 6) % 3) as usize;
    (ds, db, segs)
}

fn random_sweep(n: u64) -> Vec<Instance> {
    (0..n)
        .map(|seed| {
            let (ds, db, segs) = sweep_shape(seed);
            instance(
                format!("seed {seed} ({ds}x{db}, {segs} segments)"),
                move || plain(random_model(seed, ds, db, segs, true).expect("random model")),
            )
        })
        .collect()
}

fn core_identities() -> Vec<SuiteLine> {
    let inst = random_sweep(1000);
    let rows = evaluate_all(&inst);
    lines_for(
        &[
            "theorem1",
            "heat_identity",
            "modified_partition",
            "tpm_jarzynski",
            "work_relation",
        ],
        &inst,
        &rows,
    )
}

fn dephasing_grid() -> Vec<Instance> {
    let values = [0.3, 1.0, 2.5];
    let betas = [0.2, 1.0, 5.0];
    let mut out = Vec::new();
    for &j in &values {
        for &wb in &values {
            for &beta in &betas {
                for k in 0..8 {
                    let t = 0.15 + 0.4 * k as f64;
                    out.push(instance(
                        format!("J={j} wB={wb} beta={beta} t={t:.2}"),
                        move || {
                            let p = TwoQubitDephasingParams::new(0.5, wb, j, beta, t);
                            Built {
                                model: two_qubit_dephasing_model(&p).expect("dephasing model"),
                                analytic: Some((
                                    two_qubit_analytic_heat_with_bath_beta(&p, beta),
                                    1e-8,
                                )),
                                closed: false,
                                conserves_system_energy: false,
                            }
                        },
                    ));
                }
            }
        }
    }
    out
}

fn spin_boson_cases() -> Vec<SpinBosonParams<f64>> {
    let case = |omegas: &[f64], gs: &[Complex<f64>], beta: f64, t: f64| {
        let mut p = SpinBosonParams {
            omega0: 1.0,
            modes: omegas
                .iter()
                .zip(gs)
                .map(|(&omega, &g)| BosonMode { omega, g })
                .collect(),
            fock_cutoff: Vec::new(),
            beta,
            t,
        };
        p.fock_cutoff = p.suggested_cutoffs();
        p
    };
    let c = Complex::new;
    vec![
        case(&[1.0], &[c(0.1, 0.0)], 1.0, PI),
        case(&[1.0], &[c(0.06, 0.08)], 1.0, 2.3),
        case(&[1.0, 1.5], &[c(0.1, 0.0), c(0.0, 0.08)], 2.0, 2.0),
        case(
            &[1.0, 1.3, 1.7],
            &[c(0.1, 0.0), c(0.08, 0.0), c(0.04, 0.05)],
            4.0,
            2.0,
        ),
    ]
}

fn spin_boson_built(p: &SpinBosonParams<f64>, validated: bool) -> Built {
    let model = if validated {
        spin_boson_model(p)
    } else {
        spin_boson_model_truncated(p)
    };
    Built {
        model: model.expect("spin-boson model"),
        analytic: Some((spin_boson_analytic_heat(p), 1e-3)),
        closed: false,
        conserves_system_energy: true,
    }
}

fn oracles() -> Vec<SuiteLine> {
    let inst = dephasing_grid();
    let rows = evaluate_all(&inst);
    let mut out = lines_for(&["analytic_heat", "heat_identity"], &inst, &rows);
    for l in &mut out {
        l.check = format!("dephasing {}", l.check);
    }
    let sb: Vec<Instance> = spin_boson_cases()
        .into_iter()
        .enumerate()
        .map(|(k, p)| {
            instance(format!("case {k} cutoffs {:?}", p.fock_cutoff), move || {
                spin_boson_built(&p, true)
            })
        })
        .collect();
    let rows = evaluate_all(&sb);
    for mut l in lines_for(&["analytic_heat", "energy_conservation"], &sb, &rows) {
        l.check = format!("spin-boson {}", l.check);
        out.push(l);
    }
    out
}

fn inequalities() -> Vec<SuiteLine> {
    let inst = random_sweep(1000);
    let rows = evaluate_all(&inst);
    let mut out = lines_for(&["work_bound", "monotonicity"], &inst, &rows);

    let tpm: Vec<Instance> = (0..500u64)
        .map(|seed| {
            let (ds, db) = (
                [2, 3, 4][(seed % 3) as usize],
                [2, 3, 4][((seed / 3) % 3) as usize],
            );
            instance(format!("seed {seed} ({ds}x{db})"), move || {
                plain(random_model(10_000 + seed, ds, db, 2, true).expect("random model"))
            })
        })
        .collect();
    let rows = evaluate_all(&tpm);
    out.extend(lines_for(&["deviation"], &tpm, &rows));

    let me: Vec<Instance> = (0..100u64)
        .map(|seed| {
            let ds = 3 + (seed % 2) as usize;
            let mut i = instance(format!("seed {seed} ({ds}x2)"), move || {
                plain(
                    random_model_with(20_000 + seed, &RandomModelSpec::new(ds, 2, 2, true))
                        .expect("random model"),
                )
            });
            i.extras.max_entropy = true;
            i
        })
        .collect();
    let rows = evaluate_all(&me);
    let skipped = rows
        .iter()
        .filter(|m| m.max_entropy_skipped.is_some())
        .count();
    out.extend(lines_for(&["max_entropy"], &me, &rows));
    out.push(line(
        "max_entropy skipped models",
        Bound::AtMost(0.0),
        "skipped",
        vec![(skipped as f64, format!("{} models", rows.len()))],
    ));
    out
}

fn closed_system() -> Vec<SuiteLine> {
    let mut inst: Vec<Instance> = (0..100u64)
        .map(|seed| {
            let (ds, db, segs) = sweep_shape(seed);
            instance(format!("uncoupled seed {seed} ({ds}x{db})"), move || {
                let mut spec = RandomModelSpec::new(ds, db, segs, true);
                spec.interaction_scale = 0.0;
                Built {
                    closed: true,
                    ..plain(random_model_with(30_000 + seed, &spec).expect("random model"))
                }
            })
        })
        .collect();
    for k in 0..10u64 {
        inst.push(instance(format!("qutrit quench {k}"), move || {
            let src = random_model(40_000 + k, 3, 1, 1, true).expect("random model");
            let (h0, h1) = (src.h_s_initial().clone(), src.h_s_final().clone());
            Built {
                closed: true,
                ..plain(sudden_quench_model(h0, h1, 0.5 + 0.2 * k as f64).expect("quench"))
            }
        }));
    }
    let rows = evaluate_all(&inst);
    let parts: [(&str, &'static str, f64); 4] = [
        ("zero heat", "closed_heat", checks::TOL_CLOSED),
        (
            "work equals energy change",
            "closed_work_minus_delta_e",
            checks::TOL_CLOSED,
        ),
        (
            "guessed system state",
            "closed_rho_tilde_residual",
            checks::TOL_CLOSED,
        ),
        (
            "closed jarzynski",
            "closed_jarzynski_residual",
            checks::TOL_IDENTITY,
        ),
    ];
    parts
        .iter()
        .map(|(name, col, tol)| {
            let values = rows
                .iter()
                .zip(&inst)
                .filter_map(|(m, i)| m.get(col).map(|v| (v, i.label.clone())))
                .collect();
            line(name, Bound::AtMost(*tol), col, values)
        })
        .collect()
}

fn spin_boson_convergence() -> Vec<SuiteLine> {
    let cases = spin_boson_cases();
    let results: Vec<(Vec<f64>, Metrics, usize)> = cases
        .par_iter()
        .map(|p| {
            let mut errs = Vec::new();
            let mut top = None;
            let mut max_dim = 0;
            for shift in [2usize, 1, 0] {
                let mut q = p.clone();
                q.fock_cutoff = p
                    .fock_cutoff
                    .iter()
                    .map(|&n| n.saturating_sub(shift).max(2))
                    .collect();
                let b = spin_boson_built(&q, shift == 0);
                max_dim = max_dim.max(b.model.total_dim());
                let m = evaluate(&b, 0, Extras::default()).expect("spin-boson evaluation");
                errs.push(m.get("analytic_heat_rel_error").expect("oracle"));
                if shift == 0 {
                    top = Some(m);
                }
            }
            (errs, top.expect("validated rung"), max_dim)
        })
        .collect();
    let label = |k: usize| format!("case {k} cutoffs {:?}", cases[k].fock_cutoff);
    let at_validated = results
        .iter()
        .enumerate()
        .map(|(k, r)| (r.0[2], label(k)))
        .collect();
    let ratio = results
        .iter()
        .enumerate()
        .map(|(k, r)| ((r.0[1] / r.0[0]).max(r.0[2] / r.0[1]), label(k)))
        .collect();
    let conservation = results
        .iter()
        .enumerate()
        .filter_map(|(k, r)| {
            r.1.get("energy_conservation_residual")
                .map(|v| (v, label(k)))
        })
        .collect();
    let dims = results
        .iter()
        .enumerate()
        .map(|(k, r)| (r.2 as f64, label(k)))
        .collect();
    vec![
        line(
            "rel error at validated cutoff",
            Bound::AtMost(1e-3),
            "analytic_heat_rel_error",
            at_validated,
        ),
        line(
            "ladder error ratio",
            Bound::AtMost(1.0 - f64::EPSILON),
            "error_ratio",
            ratio,
        ),
        line(
            "energy conservation",
            Bound::AtMost(checks::TOL_INEQUALITY),
            "energy_conservation_residual",
            conservation,
        ),
        line("total dimension", Bound::AtMost(800.0), "total_dim", dims),
    ]
}

fn two_temperature() -> Vec<SuiteLine> {
    let grid = [0.25, 0.5, 1.0, 2.0, 4.0];
    let mut inst = Vec::new();
    for seed in 0..20u64 {
        for &bs in &grid {
            for &bb in &grid {
                inst.push(instance(
                    format!("seed {seed} beta_s={bs} beta_b={bb}"),
                    move || {
                        let m = random_model(50_000 + seed, 2, 3, 2, true).expect("random model");
                        plain(m.with_betas(bs, bb).expect("betas"))
                    },
                ));
            }
        }
    }
    for &bb in &grid {
        inst.push(instance(format!("dephasing beta_b={bb}"), move || {
            let p = TwoQubitDephasingParams::new(0.5, 1.0, 1.0, 1.0, PI / (2.0 * 2f64.sqrt()));
            Built {
                model: two_qubit_dephasing_model_two_temperature(&p, bb).expect("dephasing"),
                analytic: Some((two_qubit_analytic_heat_with_bath_beta(&p, bb), 1e-8)),
                closed: false,
                conserves_system_energy: false,
            }
        }));
    }
    let rows = evaluate_all(&inst);
    let mut out = lines_for(
        &["theorem2", "work_bound", "heat_identity", "analytic_heat"],
        &inst,
        &rows,
    );

    let mismatches: Vec<(f64, String)> = (0..20u64)
        .into_par_iter()
        .flat_map_iter(|seed| {
            grid.iter().map(move |&b| {
                let m = random_model(50_000 + seed, 2, 3, 2, true)
                    .and_then(|m| m.with_betas(b, b))
                    .expect("random model");
                let g = build_guessed_ensemble(&m).expect("ensemble");
                let t1 = theorem1_residual(&g).expect("single temperature");
                let t2 = theorem2_residual(&g);
                let same = t1.lhs.to_bits() == t2.lhs.to_bits()
                    && t1.rhs.to_bits() == t2.rhs.to_bits()
                    && t1.residual.to_bits() == t2.residual.to_bits();
                (
                    if same { 0.0 } else { 1.0 },
                    format!("seed {seed} beta={b}"),
                )
            })
        })
        .collect();
    let total = mismatches.iter().map(|(v, _)| v).sum::<f64>();
    let at = mismatches.iter().find(|(v, _)| *v > 0.0).map_or_else(
        || format!("{} models", mismatches.len()),
        |(_, l)| l.clone(),
    );
    out.push(SuiteLine {
        check: "bitwise reduction mismatches".into(),
        instances: mismatches.len(),
        worst: Observation {
            column: "mismatches",
            value: total,
            bound: Bound::AtMost(0.0),
        },
        at,
    });
    out
}

/// Runs a suite by name; `None` for an unknown suite.
pub fn run_suite(name: &str) -> Option<Vec<SuiteLine>> {
    Some(match name {
        "core-identities" => core_identities(),
        "oracles" => oracles(),
        "inequalities" => inequalities(),
        "closed-system" => closed_system(),
        "spin-boson-convergence" => spin_boson_convergence(),
        "two-temperature" => two_temperature(),
        _ => return None,
    })
}

pub fn table(lines: &[SuiteLine]) -> Table {
    let mut t = Table::new(
        [
            "check",
            "instances",
            "quantity",
            "worst",
            "bound",
            "limit",
            "status",
            "worst_at",
        ]
        .map(String::from)
        .to_vec(),
    );
    for l in lines {
        t.push(vec![
            Cell::Text(l.check.clone()),
            Cell::Int(l.instances as i64),
            Cell::Text(l.worst.column.into()),
            Cell::Num(l.worst.value),
            Cell::Text(l.worst.bound.symbol().into()),
            Cell::Num(l.worst.bound.limit()),
            Cell::Text(if l.passed() { "PASS" } else { "FAIL" }.into()),
            Cell::Text(l.at.clone()),
        ]);
    }
    t
}

pub fn render(lines: &[SuiteLine]) -> String {
    let mut s = format!(
        "{:<34} {:>9} {:>24} {:>12}  {:<6} {}\n",
        "check", "instances", "worst", "limit", "status", "worst at"
    );
    for l in lines {
        s.push_str(&format!(
            "{:<34} {:>9} {:>24} {:>12}  {:<6} {}\n",
            l.check,
            l.instances,
            format_f64(l.worst.value),
            format!("{} {:.0e}", l.worst.bound.symbol(), l.worst.bound.limit()),
            if l.passed() { "PASS" } else { "FAIL" },
            l.at
        ));
    }
    s
}

pub fn worst_failure(lines: &[SuiteLine]) -> Option<String> {
    lines
        .iter()
        .filter(|l| !l.passed())
        .max_by(|a, b| a.worst.severity().total_cmp(&b.worst.severity()))
        .map(|l| {
            format!(
                "{} failed: {} = {} at {} (limit {} {:e})",
                l.check,
                l.worst.column,
                format_f64(l.worst.value),
                l.at,
                l.worst.bound.symbol(),
                l.worst.bound.limit()
            )
        })
}
