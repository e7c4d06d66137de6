//! Named verifications that a run can request.

use crate::metrics::Metrics;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    /// Passes when the value is at most the tolerance.
    AtMost(f64),
    /// Passes when the value is at least the floor.
    AtLeast(f64),
}

impl Bound {
    pub fn limit(self) -> f64 {
        match self {
            Bound::AtMost(x) | Bound::AtLeast(x) => x,
        }
    }

    pub fn holds(self, v: f64) -> bool {
        match self {
            Bound::AtMost(t) => v <= t,
            Bound::AtLeast(f) => v >= f,
        }
    }

    /// Distance past the limit in units of the limit; positive means failure.
    pub fn severity(self, v: f64) -> f64 {
        if v.is_nan() {
            return f64::INFINITY;
        }
        match self {
            Bound::AtMost(t) => (v - t) / t.abs().max(f64::MIN_POSITIVE),
            Bound::AtLeast(f) => (f - v) / f.abs().max(1e-300),
        }
    }

    /// Same direction, different limit.
    pub fn with_limit(self, limit: f64) -> Self {
        match self {
            Bound::AtMost(_) => Bound::AtMost(limit),
            Bound::AtLeast(_) => Bound::AtLeast(limit),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Bound::AtMost(_) => "<=",
            Bound::AtLeast(_) => ">=",
        }
    }
}

/// One measured quantity against its bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub column: &'static str,
    pub value: f64,
    pub bound: Bound,
}

impl Observation {
    pub fn passed(&self) -> bool {
        self.bound.holds(self.value)
    }

    pub fn severity(&self) -> f64 {
        self.bound.severity(self.value)
    }
}

pub struct Check {
    pub name: &'static str,
    pub description: &'static str,
    /// `None` when the check does not apply to this row.
    pub observe: fn(&Metrics) -> Option<Observation>,
}

fn at_most(m: &Metrics, column: &'static str, tol: f64) -> Option<Observation> {
    m.get(column).map(|value| Observation {
        column,
        value,
        bound: Bound::AtMost(tol),
    })
}

fn at_least(m: &Metrics, column: &'static str, floor: f64) -> Option<Observation> {
    m.get(column).map(|value| Observation {
        column,
        value,
        bound: Bound::AtLeast(floor),
    })
}

fn worst(obs: impl IntoIterator<Item = Option<Observation>>) -> Option<Observation> {
    obs.into_iter()
        .flatten()
        .max_by(|a, b| a.severity().total_cmp(&b.severity()))
}

pub const TOL_IDENTITY: f64 = 1e-8;
pub const TOL_INEQUALITY: f64 = 1e-9;
pub const TOL_PARTITION: f64 = 1e-10;
pub const TOL_CLOSED: f64 = 1e-10;

pub static REGISTRY: &[Check] = &[
    Check {
        name: "theorem1",
        description: "guessed-work Jarzynski equality, relative residual",
        observe: |m| at_most(m, "theorem1_residual", TOL_IDENTITY),
    },
    Check {
        name: "theorem2",
        description: "two-temperature Jarzynski equality, relative residual",
        observe: |m| at_most(m, "theorem2_residual", TOL_IDENTITY),
    },
    Check {
        name: "heat_identity",
        description: "D_full + ln(Z~/Z_S(t)) + beta_B Q~ = 0",
        observe: |m| at_most(m, "heat_identity_residual", TOL_IDENTITY),
    },
    Check {
        name: "modified_partition",
        description: "<exp(-beta dE)> Z_S(0) = Z~, relative residual",
        observe: |m| at_most(m, "modified_partition_residual", TOL_PARTITION),
    },
    Check {
        name: "work_bound",
        description: "maximum guessed work bound, smallest gap",
        observe: |m| {
            worst([
                at_least(m, "gap_full", -TOL_INEQUALITY),
                at_least(m, "gap_reduced", -TOL_INEQUALITY),
                at_least(m, "work_bound_gap", -TOL_INEQUALITY),
            ])
        },
    },
    Check {
        name: "monotonicity",
        description: "D_full - D_reduced",
        observe: |m| at_least(m, "monotonicity_gap", -TOL_INEQUALITY),
    },
    Check {
        name: "analytic_heat",
        description: "guessed heat against the closed form, relative error",
        observe: |m| {
            m.analytic_tol
                .and_then(|tol| at_most(m, "analytic_heat_rel_error", tol))
        },
    },
    Check {
        name: "energy_conservation",
        description: "|<exp(-beta dE)> - 1| when the system energy is conserved",
        observe: |m| at_most(m, "energy_conservation_residual", TOL_INEQUALITY),
    },
    Check {
        name: "tpm_jarzynski",
        description: "two-point-measurement Jarzynski equality, relative residual",
        observe: |m| at_most(m, "tpm_jarzynski_residual", TOL_IDENTITY),
    },
    Check {
        name: "work_relation",
        description: "<W~> = <W> + bath energy correction",
        observe: |m| at_most(m, "work_relation_residual", TOL_INEQUALITY),
    },
    Check {
        name: "deviation",
        description: "product of the deviation inequalities",
        observe: |m| at_least(m, "deviation_product", 1.0 - TOL_INEQUALITY),
    },
    Check {
        name: "closed_system",
        description: "closed-system recovery: zero heat, W~ = dE, guessed state, Jarzynski",
        observe: |m| {
            worst([
                at_most(m, "closed_heat", TOL_CLOSED),
                at_most(m, "closed_work_minus_delta_e", TOL_CLOSED),
                at_most(m, "closed_rho_tilde_residual", TOL_CLOSED),
                at_most(m, "closed_jarzynski_residual", TOL_IDENTITY),
            ])
        },
    },
    Check {
        name: "max_entropy",
        description: "largest entropy increase under constrained perturbations",
        observe: |m| at_most(m, "max_entropy_increase", TOL_INEQUALITY),
    },
];

pub fn find(name: &str) -> Option<&'static Check> {
    REGISTRY.iter().find(|c| c.name == name)
}

pub fn names() -> Vec<&'static str> {
    REGISTRY.iter().map(|c| c.name).collect()
}

/// Outcome of one check over all rows of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckSummary {
    pub name: String,
    pub evaluated: usize,
    pub skipped: usize,
    /// Worst observation and the row it came from.
    pub worst: Option<(Observation, usize)>,
}

impl CheckSummary {
    pub fn passed(&self) -> bool {
        self.worst.is_none_or(|(o, _)| o.passed())
    }
}

/// Folds a check over rows; `limit` replaces the registered limit when given.
pub fn summarize(check: &Check, rows: &[Metrics], limit: Option<f64>) -> CheckSummary {
    let mut s = CheckSummary {
        name: check.name.to_string(),
        evaluated: 0,
        skipped: 0,
        worst: None,
    };
    for (i, m) in rows.iter().enumerate() {
        match (check.observe)(m) {
            Some(mut o) => {
                if let Some(l) = limit {
                    o.bound = o.bound.with_limit(l);
                }
                s.evaluated += 1;
                if s.worst.is_none_or(|(w, _)| o.severity() > w.severity()) {
                    s.worst = Some((o, i));
                }
            }
            None => s.skipped += 1,
        }
    }
    s
}
