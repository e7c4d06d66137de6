//! Run configuration: TOML parsing, sweep expansion and line-anchored diagnostics.

use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use toml::{Spanned, Table, Value};

use crate::checks;

/// Malformed configuration, anchored to a 1-based line and column.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{path}:{line}:{column}: {message}")]
pub struct ConfigError {
    pub path: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub format: Format,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub param: Spanned<String>,
    pub values: Vec<Value>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    checks: Vec<Spanned<String>>,
    model: Spanned<Table>,
    #[serde(default)]
    sweep: Vec<Spanned<SweepAxis>>,
    #[serde(default)]
    output: OutputSpec,
    tolerances: Option<Spanned<Table>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ModelSpec {
    TwoQubitDephasing(DephasingSpec),
    SpinBoson(SpinBosonSpec),
    Random(RandomSpec),
    ClosedSystem(ClosedSpec),
}

impl ModelSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ModelSpec::TwoQubitDephasing(_) => "two_qubit_dephasing",
            ModelSpec::SpinBoson(_) => "spin_boson",
            ModelSpec::Random(_) => "random",
            ModelSpec::ClosedSystem(_) => "closed_system",
        }
    }

    /// Number of seeds evaluated per sweep point.
    pub fn count(&self) -> usize {
        match self {
            ModelSpec::Random(r) => r.count,
            ModelSpec::ClosedSystem(c) if c.h_initial.is_none() => c.count,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DephasingSpec {
    pub omega_s: f64,
    pub omega_b: f64,
    pub j: f64,
    pub beta: f64,
    /// Bath inverse temperature; defaults to `beta`.
    pub beta_b: Option<f64>,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSpec {
    pub omega: f64,
    pub g: f64,
    #[serde(default)]
    pub g_im: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpectrumSpec {
    Ohmic {
        omega_c: f64,
        eta: f64,
        n_modes: usize,
        #[serde(default = "default_max_factor")]
        max_factor: f64,
    },
}

fn default_max_factor() -> f64 {
    5.0
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinBosonSpec {
    pub omega0: f64,
    pub beta: f64,
    pub t: f64,
    #[serde(default)]
    pub modes: Vec<ModeSpec>,
    pub spectrum: Option<SpectrumSpec>,
    /// Fock cutoffs per mode; defaults to the smallest validated cutoffs.
    pub cutoffs: Option<Vec<usize>>,
}

fn default_one() -> usize {
    1
}

fn default_true() -> bool {
    true
}

fn default_scale() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomSpec {
    pub d_system: usize,
    pub d_bath: usize,
    #[serde(default = "default_one")]
    pub n_segments: usize,
    #[serde(default = "default_true")]
    pub time_dependent_system: bool,
    #[serde(default = "default_scale")]
    pub interaction_scale: f64,
    #[serde(default = "default_one")]
    pub count: usize,
    pub beta_s: Option<f64>,
    pub beta_b: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosedSpec {
    pub d_system: Option<usize>,
    #[serde(default = "default_one")]
    pub d_bath: usize,
    #[serde(default = "default_one")]
    pub n_segments: usize,
    #[serde(default = "default_one")]
    pub count: usize,
    pub beta: Option<f64>,
    /// Real symmetric matrices for a sudden quench; replaces the random generator.
    pub h_initial: Option<Vec<Vec<f64>>>,
    pub h_final: Option<Vec<Vec<f64>>>,
}

/// One evaluation: the model with sweep values substituted, plus its seed.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub index: usize,
    pub seed: u64,
    pub model: ModelSpec,
    /// `(path, value)` for every sweep axis, in axis order.
    pub swept: Vec<(String, f64)>,
    /// Position within the seed batch (`0..count`).
    pub replica: usize,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub checks: Vec<String>,
    pub model: ModelSpec,
    pub points: Vec<Point>,
    pub sweep_params: Vec<String>,
    pub output: OutputSpec,
    /// Per-check limit overrides, keyed by check name.
    pub tolerances: Vec<(String, f64)>,
}

struct Source<'a> {
    path: &'a str,
    text: &'a str,
}

impl Source<'_> {
    fn error_at(&self, offset: usize, message: impl Into<String>) -> ConfigError {
        let before = &self.text[..offset.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
        ConfigError {
            path: self.path.to_string(),
            line,
            column,
            message: message.into(),
        }
    }

    fn error_in(&self, span: &Range<usize>, message: impl Into<String>) -> ConfigError {
        self.error_at(span.start, message)
    }

    /// Offset of `key = ...` in the table whose header starts at `span`,
    /// falling back to the header itself.
    fn key_offset(&self, span: &Range<usize>, key: &str) -> usize {
        let start = span.start.min(self.text.len());
        let mut offset = start;
        for (i, line) in self.text[start..].split_inclusive('\n').enumerate() {
            let trimmed = line.trim_start();
            if i > 0 && is_table_header(trimmed) {
                break;
            }
            if let Some(rest) = trimmed.strip_prefix(key) {
                if rest.trim_start().starts_with('=') {
                    return offset + (line.len() - trimmed.len());
                }
            }
            offset += line.len();
        }
        start
    }
}

fn is_table_header(line: &str) -> bool {
    line.trim_start_matches('[')
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_' || c == '"')
        && line.starts_with('[')
}

/// First backtick-quoted word in a serde message, e.g. the field in "unknown field `x`".
fn quoted_field(message: &str) -> Option<&str> {
    let start = message.find('`')? + 1;
    let len = message[start..].find('`')?;
    Some(&message[start..start + len])
}

/// Key whose removal makes `message` go away; locates type errors that carry no field name.
fn culprit_key(table: &Table, message: &str) -> Option<String> {
    table.keys().filter(|k| *k != "type").find_map(|k| {
        let mut probe = table.clone();
        probe.remove(k);
        match Value::Table(probe).try_into::<ModelSpec>() {
            Err(e) if e.message().trim() == message => None,
            _ => Some(k.clone()),
        }
    })
}

fn parse_model(src: &Source, table: &Table, span: &Range<usize>) -> Result<ModelSpec, ConfigError> {
    Value::Table(table.clone())
        .try_into::<ModelSpec>()
        .map_err(|e| {
            let message = e.message().trim().to_string();
            let key = quoted_field(&message)
                .filter(|k| table.contains_key(*k))
                .map(String::from)
                .or_else(|| culprit_key(table, &message));
            let offset = key.map_or(span.start, |k| src.key_offset(span, &k));
            src.error_at(offset, format!("invalid [model]: {message}"))
        })
}

fn as_number(v: &Value) -> Option<f64> {
    match v {
        Value::Integer(i) => Some(*i as f64),
        Value::Float(f) => Some(*f),
        _ => None,
    }
}

/// Replaces the numeric field at a dotted path (`modes.0.omega`) with `value`.
fn substitute(table: &mut Table, path: &str, value: &Value) -> Result<(), String> {
    let parts: Vec<&str> = path.split('.').collect();
    let (last, init) = parts.split_last().ok_or("empty parameter path")?;
    let mut cursor: &mut Value = table
        .get_mut(init.first().copied().unwrap_or(last))
        .ok_or_else(|| format!("parameter `{path}` is not a field of [model]"))?;
    if !init.is_empty() {
        for part in init.iter().skip(1).chain(std::iter::once(last)) {
            cursor = match cursor {
                Value::Table(t) => t.get_mut(*part),
                Value::Array(a) => part.parse::<usize>().ok().and_then(|i| a.get_mut(i)),
                _ => None,
            }
            .ok_or_else(|| format!("parameter `{path}` does not resolve inside [model]"))?;
        }
    }
    let number =
        as_number(value).ok_or_else(|| format!("sweep values for `{path}` must be numbers"))?;
    match cursor {
        Value::Integer(_) => {
            if number.fract() != 0.0 {
                return Err(format!("`{path}` is an integer field; got {number}"));
            }
            *cursor = Value::Integer(number as i64);
        }
        Value::Float(_) => *cursor = Value::Float(number),
        _ => return Err(format!("parameter `{path}` is not numeric")),
    }
    Ok(())
}

pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        path: path.display().to_string(),
        line: 0,
        column: 0,
        message: format!("cannot read config: {e}"),
    })?;
    parse(&path.display().to_string(), &text)
}

pub fn parse(path: &str, text: &str) -> Result<RunConfig, ConfigError> {
    let src = Source { path, text };
    let file: FileConfig = toml::from_str(text).map_err(|e| {
        let offset = e.span().map_or(0, |s| s.start);
        src.error_at(offset, e.message().trim().to_string())
    })?;

    let model_span = file.model.span();
    let model_table = file.model.into_inner();
    let model = parse_model(&src, &model_table, &model_span)?;

    let mut checks_out = Vec::with_capacity(file.checks.len());
    for c in &file.checks {
        if checks::find(c.get_ref()).is_none() {
            return Err(src.error_in(
                &c.span(),
                format!(
                    "unknown check `{}`; known checks: {}",
                    c.get_ref(),
                    checks::names().join(", ")
                ),
            ));
        }
        checks_out.push(c.get_ref().clone());
    }

    let mut tolerances = Vec::new();
    if let Some(t) = &file.tolerances {
        let span = t.span();
        for (key, value) in t.get_ref() {
            let at = src.key_offset(&span, key);
            if checks::find(key).is_none() {
                return Err(src.error_at(at, format!("unknown check `{key}` in [tolerances]")));
            }
            let limit = as_number(value).filter(|x| x.is_finite()).ok_or_else(|| {
                src.error_at(at, format!("tolerance for `{key}` must be a finite number"))
            })?;
            tolerances.push((key.clone(), limit));
        }
    }

    let mut axes = Vec::with_capacity(file.sweep.len());
    for axis in &file.sweep {
        let a = axis.get_ref();
        if a.values.is_empty() {
            return Err(src.error_in(&axis.span(), "sweep needs at least one value"));
        }
        for v in &a.values {
            let mut probe = model_table.clone();
            substitute(&mut probe, a.param.get_ref(), v)
                .map_err(|m| src.error_in(&a.param.span(), m))?;
        }
        axes.push(a.clone());
    }

    let mut combos: Vec<Vec<usize>> = vec![vec![]];
    for a in &axes {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                (0..a.values.len()).map(move |i| {
                    let mut next = c.clone();
                    next.push(i);
                    next
                })
            })
            .collect();
    }

    let mut points = Vec::new();
    for combo in &combos {
        let mut table = model_table.clone();
        let mut swept = Vec::with_capacity(axes.len());
        for (a, &i) in axes.iter().zip(combo) {
            let v = &a.values[i];
            substitute(&mut table, a.param.get_ref(), v)
                .map_err(|m| src.error_in(&a.param.span(), m))?;
            swept.push((a.param.get_ref().clone(), as_number(v).unwrap_or(f64::NAN)));
        }
        let spec = if axes.is_empty() {
            model.clone()
        } else {
            let anchor = axes[0].param.span();
            Value::Table(table).try_into::<ModelSpec>().map_err(|e| {
                src.error_in(
                    &anchor,
                    format!("swept model is invalid: {}", e.message().trim()),
                )
            })?
        };
        for replica in 0..spec.count() {
            points.push(Point {
                index: points.len(),
                seed: file.seed.wrapping_add(replica as u64),
                model: spec.clone(),
                swept: swept.clone(),
                replica,
            });
        }
    }

    Ok(RunConfig {
        seed: file.seed,
        checks: checks_out,
        model,
        points,
        sweep_params: axes.iter().map(|a| a.param.get_ref().clone()).collect(),
        output: file.output,
        tolerances,
    })
}

/// Line of the `[model]` table, for errors raised while building the model itself.
pub fn model_anchor(path: &str, text: &str) -> ConfigError {
    let offset = text.find("[model]").unwrap_or(0);
    Source { path, text }.error_at(offset, String::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
seed = 3
checks = ["theorem1"]

[model]
type = "two_qubit_dephasing"
omega_s = 0.5
omega_b = 1.0
j = 1.0
beta = 1.0
t = 0.5
"#;

    #[test]
    fn parses_minimal_config() {
        let c = parse("c.toml", BASE).unwrap();
        assert_eq!(c.points.len(), 1);
        assert_eq!(c.model.kind(), "two_qubit_dephasing");
        assert_eq!(c.output.format, Format::Csv);
    }

    #[test]
    fn sweep_cross_product_in_order() {
        let text = format!(
            "{BASE}\n[[sweep]]\nparam = \"t\"\nvalues = [0.1, 0.2]\n\n[[sweep]]\nparam = \"j\"\nvalues = [0, 1, 2]\n"
        );
        let c = parse("c.toml", &text).unwrap();
        assert_eq!(c.points.len(), 6);
        assert_eq!(
            c.points[1].swept,
            vec![("t".into(), 0.1), ("j".into(), 1.0)]
        );
        match &c.points[5].model {
            ModelSpec::TwoQubitDephasing(d) => assert_eq!((d.t, d.j), (0.2, 2.0)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_model_field_is_line_anchored() {
        let text = BASE.replace("j = 1.0", "jj = 1.0");
        let e = parse("c.toml", &text).unwrap_err();
        assert_eq!(e.line, 9, "{e}");
        assert!(e.message.contains("jj"));
    }

    #[test]
    fn syntax_error_is_line_anchored() {
        let text = BASE.replace("beta = 1.0", "beta = = 1.0");
        let e = parse("c.toml", &text).unwrap_err();
        assert_eq!(e.line, 10, "{e}");
    }

    #[test]
    fn bad_sweep_path_points_at_param() {
        let text = format!("{BASE}\n[[sweep]]\nparam = \"omega\"\nvalues = [1.0]\n");
        let e = parse("c.toml", &text).unwrap_err();
        assert_eq!(e.line, 14, "{e}");
    }

    #[test]
    fn unknown_check_points_at_entry() {
        let text = BASE.replace("[\"theorem1\"]", "[\"theorem1\", \"nope\"]");
        let e = parse("c.toml", &text).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("nope"));
    }

    #[test]
    fn tolerance_overrides_are_validated() {
        let ok = format!("{BASE}\n[tolerances]\ntheorem1 = 1e-12\n");
        assert_eq!(
            parse("c.toml", &ok).unwrap().tolerances,
            vec![("theorem1".into(), 1e-12)]
        );
        let bad = format!("{BASE}\n[tolerances]\ntheorem1 = 1e-12\nbogus = 1.0\n");
        let e = parse("c.toml", &bad).unwrap_err();
        assert_eq!(e.line, 15, "{e}");
    }

    #[test]
    fn nested_paths_resolve() {
        let text = r#"
[model]
type = "spin_boson"
omega0 = 1.0
beta = 1.0
t = 1.0
modes = [{ omega = 1.0, g = 0.1 }]

[[sweep]]
param = "modes.0.g"
values = [0.05, 0.1]
"#;
        let c = parse("c.toml", text).unwrap();
        match &c.points[0].model {
            ModelSpec::SpinBoson(s) => assert_eq!(s.modes[0].g, 0.05),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ohmic_preset_parses_with_default_range() {
        let text = "[model]\ntype = \"spin_boson\"\nomega0 = 1.0\nbeta = 1.0\nt = 1.0\nspectrum = { preset = \"ohmic\", omega_c = 1.0, eta = 0.01, n_modes = 2 }\n";
        match parse("c.toml", text).unwrap().model {
            ModelSpec::SpinBoson(s) => assert_eq!(
                s.spectrum,
                Some(SpectrumSpec::Ohmic {
                    omega_c: 1.0,
                    eta: 0.01,
                    n_modes: 2,
                    max_factor: 5.0
                })
            ),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn type_errors_point_at_the_key() {
        let text = BASE.replace("t = 0.5", "t = \"late\"");
        let e = parse("c.toml", &text).unwrap_err();
        assert_eq!(e.line, 11, "{e}");
    }

    #[test]
    fn random_count_expands_seeds() {
        let text = "seed = 10\n[model]\ntype = \"random\"\nd_system = 2\nd_bath = 3\ncount = 4\n";
        let c = parse("c.toml", text).unwrap();
        let seeds: Vec<u64> = c.points.iter().map(|p| p.seed).collect();
        assert_eq!(seeds, vec![10, 11, 12, 13]);
    }

    #[test]
    fn integer_fields_reject_fractions() {
        let text = "[model]\ntype = \"random\"\nd_system = 2\nd_bath = 3\n\n[[sweep]]\nparam = \"d_bath\"\nvalues = [2.5]\n";
        let e = parse("c.toml", text).unwrap_err();
        assert_eq!(e.line, 7);
    }
}
