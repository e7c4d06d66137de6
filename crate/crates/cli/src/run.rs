//! The `run` command: evaluate every sweep point and write one row per point.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::checks::{self, CheckSummary};
use crate::config::{self, ConfigError, ModelSpec, Point, RunConfig};
use crate::metrics::{self, Agg, Extras, Metrics, METRIC_COLUMNS};
use crate::output::{Cell, Table};
use crate::Failure;

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub no_timestamp: bool,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub table: Table,
    pub metrics: Vec<Metrics>,
    pub checks: Vec<CheckSummary>,
    /// Notices for checks that could not run on some rows.
    pub notices: Vec<String>,
}

fn param_columns(model: &ModelSpec) -> Vec<&'static str> {
    match model {
        ModelSpec::TwoQubitDephasing(_) => vec!["omega_s", "omega_b", "j", "beta", "t"],
        ModelSpec::SpinBoson(_) => vec!["omega0", "beta", "t", "n_modes", "cutoffs"],
        ModelSpec::Random(_) => vec!["n_segments", "interaction_scale"],
        ModelSpec::ClosedSystem(_) => vec!["n_segments"],
    }
}

fn param_cells(model: &ModelSpec) -> Vec<Cell> {
    match model {
        ModelSpec::TwoQubitDephasing(d) => [d.omega_s, d.omega_b, d.j, d.beta, d.t]
            .into_iter()
            .map(Cell::Num)
            .collect(),
        ModelSpec::SpinBoson(s) => {
            let cutoffs = metrics::spin_boson_params(s)
                .map(|p| {
                    p.fock_cutoff
                        .iter()
                        .map(|n| n.to_string())
                        .collect::<Vec<_>>()
                        .join(";")
                })
                .unwrap_or_default();
            let n_modes = s.modes.len()
                + match &s.spectrum {
                    Some(config::SpectrumSpec::Ohmic { n_modes, .. }) => *n_modes,
                    None => 0,
                };
            vec![
                Cell::Num(s.omega0),
                Cell::Num(s.beta),
                Cell::Num(s.t),
                Cell::Int(n_modes as i64),
                Cell::Text(cutoffs),
            ]
        }
        ModelSpec::Random(r) => vec![
            Cell::Int(r.n_segments as i64),
            Cell::Num(r.interaction_scale),
        ],
        ModelSpec::ClosedSystem(c) => vec![Cell::Int(c.n_segments as i64)],
    }
}

const INT_METRICS: &[&str] = &["d_system", "d_bath", "total_dim"];

fn metric_cell(name: &str, v: Option<f64>) -> Cell {
    match v {
        None => Cell::Empty,
        Some(x) if INT_METRICS.contains(&name) => Cell::Int(x as i64),
        Some(x) => Cell::Num(x),
    }
}

fn build_table(cfg: &RunConfig, metrics: &[Metrics]) -> Table {
    let params = param_columns(&cfg.model);
    let sweep_extra: Vec<&String> = cfg
        .sweep_params
        .iter()
        .filter(|p| !params.contains(&p.as_str()))
        .collect();
    let mut columns: Vec<String> = vec!["row".into(), "model".into(), "seed".into()];
    columns.extend(params.iter().map(|s| s.to_string()));
    columns.extend(sweep_extra.iter().map(|s| s.to_string()));
    columns.extend(METRIC_COLUMNS.iter().map(|(n, _)| n.to_string()));
    let mut table = Table::new(columns);

    for (p, m) in cfg.points.iter().zip(metrics) {
        let mut row = vec![
            Cell::Int(p.index as i64),
            Cell::Text(p.model.kind().into()),
            Cell::Int(p.seed as i64),
        ];
        row.extend(param_cells(&p.model));
        for name in &sweep_extra {
            let v = p.swept.iter().find(|(k, _)| k == *name).map(|(_, v)| *v);
            row.push(v.map_or(Cell::Empty, Cell::Num));
        }
        row.extend(
            METRIC_COLUMNS
                .iter()
                .zip(&m.values)
                .map(|((n, _), v)| metric_cell(n, *v)),
        );
        table.push(row);
    }

    if metrics.len() > 1 {
        let lead = 3 + params.len() + sweep_extra.len();
        let mut row = vec![
            Cell::Text("summary".into()),
            Cell::Text(cfg.model.kind().into()),
        ];
        row.resize(lead, Cell::Empty);
        for (i, (_, agg)) in METRIC_COLUMNS.iter().enumerate() {
            let vals = metrics.iter().filter_map(|m| m.values[i]);
            let v = match agg {
                Agg::None => None,
                Agg::Max => vals.reduce(f64::max),
                Agg::Min => vals.reduce(f64::min),
            };
            row.push(v.map_or(Cell::Empty, Cell::Num));
        }
        table.push(row);
    }
    table
}

pub fn thread_pool(threads: Option<usize>) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .expect("thread pool")
}

fn anchor_error(path: &str, text: &str, point: &Point, message: String) -> ConfigError {
    let mut e = config::model_anchor(path, text);
    e.message = if point.swept.is_empty() {
        message
    } else {
        let at: Vec<String> = point
            .swept
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!(
            "at sweep point {} ({}): {message}",
            point.index,
            at.join(", ")
        )
    };
    e
}

/// Parses and evaluates a configuration without writing anything.
pub fn execute(
    path: &str,
    text: &str,
    threads: Option<usize>,
) -> Result<(RunConfig, RunResult), Failure> {
    let cfg = config::parse(path, text).map_err(Failure::Config)?;
    let extras = Extras {
        max_entropy: cfg.checks.iter().any(|c| c == "max_entropy"),
    };

    let pool = thread_pool(threads);
    let results: Vec<Result<Metrics, (usize, String, bool)>> = pool.install(|| {
        cfg.points
            .par_iter()
            .map(|p| {
                let built = metrics::build(&p.model, p.seed).map_err(|e| (p.index, e, true))?;
                metrics::evaluate(&built, p.seed, extras).map_err(|e| (p.index, e, false))
            })
            .collect()
    });

    let mut rows = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(m) => rows.push(m),
            Err((i, msg, true)) => {
                return Err(Failure::Config(anchor_error(
                    path,
                    text,
                    &cfg.points[i],
                    msg,
                )));
            }
            Err((i, msg, false)) => {
                return Err(Failure::Evaluation(format!("row {i}: {msg}")));
            }
        }
    }

    let mut notices = Vec::new();
    let summaries: Vec<CheckSummary> = cfg
        .checks
        .iter()
        .map(|name| {
            let check = checks::find(name).expect("validated check name");
            let limit = cfg
                .tolerances
                .iter()
                .find(|(k, _)| k == name)
                .map(|(_, v)| *v);
            let s = checks::summarize(check, &rows, limit);
            if s.skipped > 0 {
                let reason = if check.name == "max_entropy" {
                    rows.iter()
                        .find_map(|m| m.max_entropy_skipped.clone())
                        .unwrap_or_default()
                } else {
                    "not applicable to this model".into()
                };
                notices.push(format!(
                    "notice: check {} skipped on {} of {} rows ({reason})",
                    check.name,
                    s.skipped,
                    rows.len()
                ));
            }
            s
        })
        .collect();

    let table = build_table(&cfg, &rows);
    Ok((
        cfg,
        RunResult {
            table,
            metrics: rows,
            checks: summaries,
            notices,
        },
    ))
}

/// Check table written to stderr after a run.
pub fn render_checks(summaries: &[CheckSummary]) -> String {
    let mut s = format!(
        "{:<20} {:>6} {:>24} {:>14}  {}\n",
        "check", "rows", "worst", "limit", "status"
    );
    for c in summaries {
        let (worst, limit) = match c.worst {
            Some((o, _)) => (
                format!("{:.6e}", o.value),
                format!("{} {:.1e}", o.bound.symbol(), o.bound.limit()),
            ),
            None => ("-".into(), "-".into()),
        };
        let status = match (c.evaluated, c.passed()) {
            (0, _) => "SKIP",
            (_, true) => "PASS",
            (_, false) => "FAIL",
        };
        s.push_str(&format!(
            "{:<20} {:>6} {:>24} {:>14}  {status}\n",
            c.name, c.evaluated, worst, limit
        ));
    }
    s
}

/// The failing check with the largest violation, as a one-line message.
pub fn worst_failure(summaries: &[CheckSummary]) -> Option<String> {
    summaries
        .iter()
        .filter(|c| !c.passed())
        .filter_map(|c| c.worst.map(|(o, row)| (c, o, row)))
        .max_by(|a, b| a.1.severity().total_cmp(&b.1.severity()))
        .map(|(c, o, row)| {
            format!(
                "check {} failed: {} = {} at row {row} (limit {} {:e})",
                c.name,
                o.column,
                crate::output::format_f64(o.value),
                o.bound.symbol(),
                o.bound.limit()
            )
        })
}

fn resolve_output(config_path: &Path, cfg: &RunConfig, opts: &Options) -> Option<PathBuf> {
    if let Some(p) = &opts.out {
        return Some(p.clone());
    }
    cfg.output.path.as_ref().map(|p| {
        if p.is_absolute() {
            p.clone()
        } else {
            config_path.parent().unwrap_or(Path::new(".")).join(p)
        }
    })
}

/// Runs a configuration file end to end: evaluate, write, report.
pub fn run(config_path: &Path, opts: &Options) -> Result<(), Failure> {
    let shown = config_path.display().to_string();
    let text = std::fs::read_to_string(config_path).map_err(|e| {
        Failure::Config(ConfigError {
            path: shown.clone(),
            line: 1,
            column: 1,
            message: format!("cannot read config: {e}"),
        })
    })?;
    let (cfg, result) = execute(&shown, &text, opts.threads)?;

    let timestamp = (!opts.no_timestamp).then(crate::output::unix_now);
    let target = resolve_output(config_path, &cfg, opts);
    let write = |w: &mut dyn std::io::Write| match cfg.output.format {
        config::Format::Csv => result.table.write_csv(w, timestamp),
        config::Format::Json => result.table.write_json(w),
    };
    match &target {
        Some(p) => {
            let mut f = std::fs::File::create(p)
                .map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
            write(&mut f).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock).map_err(|e| Failure::Io(e.to_string()))?;
        }
    }

    for n in &result.notices {
        eprintln!("{n}");
    }
    if !result.checks.is_empty() {
        eprint!("{}", render_checks(&result.checks));
    }
    match worst_failure(&result.checks) {
        Some(msg) => Err(Failure::Check(msg)),
        None => Ok(()),
    }
}
