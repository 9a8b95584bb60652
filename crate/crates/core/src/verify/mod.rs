//! Named verification scenarios, window sweeps and report rendering.

mod scenarios;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cz::{CZValue, ComplexWire, TolerancePolicy};
use crate::error::{Error, Result};
use crate::scalar::C64;

/// Registered scenario names, sorted.
pub const SCENARIOS: &[&str] = &[
    "boundary_annihilation",
    "chain_map_pi",
    "cocycle_ab_comparison",
    "deligne_cech_vs_closed",
    "determinant_vs_deligne",
    "eta_closed_vs_zeta",
    "forms_structure",
    "hp_shift_roundtrip",
    "rho_flat_line_bundle",
    "sigma2_vs_deligne",
    "sigma2_vs_determinant",
    "toeplitz_index_vs_winding",
    "vanishing_extra_factor",
];

/// Tolerance for identities that must hold with zero error.
pub const EXACT_ONLY: TolerancePolicy = TolerancePolicy { abs_tol: 0.0, rel_tol: 0.0 };

fn defaults(name: &str) -> Result<(TolerancePolicy, Vec<usize>)> {
    let tol = |t: f64| TolerancePolicy { abs_tol: t, rel_tol: 0.0 };
    Ok(match name {
        "eta_closed_vs_zeta" => (tol(1e-8), vec![]),
        "rho_flat_line_bundle" => (tol(1e-12), vec![]),
        "toeplitz_index_vs_winding" => (tol(1e-9), vec![64, 128, 256]),
        "cocycle_ab_comparison" => (tol(1e-6), vec![256, 512]),
        "boundary_annihilation" => (tol(1e-6), vec![512]),
        "determinant_vs_deligne" => (tol(1e-6), vec![256]),
        "deligne_cech_vs_closed" => (tol(1e-10), vec![]),
        "sigma2_vs_deligne" => (tol(1e-10), vec![]),
        "sigma2_vs_determinant" => (tol(1e-5), vec![256]),
        "vanishing_extra_factor" | "chain_map_pi" | "hp_shift_roundtrip" | "forms_structure" => {
            (EXACT_ONLY, vec![])
        }
        other => return Err(Error::UnknownScenario(other.to_string())),
    })
}

/// A scenario with its parameters. Missing parameters take documented defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub params: Value,
    pub tolerance: TolerancePolicy,
    pub windows: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    params: Option<Value>,
    #[serde(default)]
    tolerance: Option<ToleranceSpec>,
    #[serde(default)]
    windows: Option<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ToleranceSpec {
    Abs(f64),
    Policy(TolerancePolicy),
}

impl Scenario {
    pub fn new(name: &str) -> Result<Self> {
        let (tolerance, windows) = defaults(name)?;
        Ok(Self { name: name.to_string(), params: Value::Object(Default::default()), tolerance, windows })
    }

    /// Applies a config document `{"params": {..}, "tolerance": x, "windows": [..]}`.
    pub fn with_config(mut self, config: &Value) -> Result<Self> {
        let c: ConfigFile = serde_json::from_value(config.clone()).map_err(|e| Error::BadParams(e.to_string()))?;
        if let Some(p) = c.params {
            if !p.is_object() {
                return Err(Error::BadParams("params must be a JSON object".into()));
            }
            self.params = p;
        }
        match c.tolerance {
            Some(ToleranceSpec::Abs(t)) => self.tolerance = TolerancePolicy::abs(t)?,
            Some(ToleranceSpec::Policy(p)) => self.tolerance = TolerancePolicy::new(p.abs_tol, p.rel_tol)?,
            None => {}
        }
        if let Some(w) = c.windows {
            self.windows = w;
        }
        Ok(self)
    }

    pub fn with_params(mut self, params: Value) -> Self {
        self.params = params;
        self
    }

    pub fn with_tolerance(mut self, tolerance: TolerancePolicy) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_windows(mut self, windows: Vec<usize>) -> Self {
        self.windows = windows;
        self
    }

    pub(crate) fn parse_params<P: serde::de::DeserializeOwned>(&self) -> Result<P> {
        serde_json::from_value(self.params.clone()).map_err(|e| Error::BadParams(format!("{}: {e}", self.name)))
    }
}

/// One comparison `lhs ≈ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub label: String,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub lhs: ComplexWire,
    pub rhs: ComplexWire,
    pub abs_err: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Row {
    pub fn complex(label: impl Into<String>, n: Option<usize>, lhs: C64, rhs: C64, tol: &TolerancePolicy) -> Self {
        let err = (lhs - rhs).norm();
        Self::with_err(label, n, lhs, rhs, err, tol.allowed(lhs.norm().max(rhs.norm())))
    }

    pub fn real(label: impl Into<String>, n: Option<usize>, lhs: f64, rhs: f64, tol: &TolerancePolicy) -> Self {
        Self::complex(label, n, C64::new(lhs, 0.0), C64::new(rhs, 0.0), tol)
    }

    /// Comparison in ℂ/ℤ: the error is the distance mod ℤ.
    pub fn cz(label: impl Into<String>, n: Option<usize>, lhs: CZValue, rhs: CZValue, tol: &TolerancePolicy) -> Self {
        Self::with_err(label, n, lhs.rep(), rhs.rep(), lhs.dist(&rhs), tol.abs_tol)
    }

    /// A quantity that should vanish, measured against a scale.
    pub fn vanishing(label: impl Into<String>, n: Option<usize>, value: C64, scale: f64, tol: &TolerancePolicy) -> Self {
        let err = value.norm() / scale.max(1.0);
        Self::with_err(label, n, value, C64::new(0.0, 0.0), err, tol.abs_tol)
    }

    /// An identity checked in exact arithmetic; `residual` is a size of the
    /// defect, reported only when the identity fails.
    pub fn exact(label: impl Into<String>, holds: bool, residual: f64) -> Self {
        let err = if holds { 0.0 } else { residual.max(f64::MIN_POSITIVE) };
        Self::with_err(label, None, C64::new(err, 0.0), C64::new(0.0, 0.0), err, 0.0)
    }

    pub fn failed(label: impl Into<String>, n: Option<usize>, e: &Error) -> Self {
        let zero = C64::new(0.0, 0.0);
        Self {
            label: label.into(),
            n,
            lhs: zero.into(),
            rhs: zero.into(),
            abs_err: f64::MAX,
            pass: false,
            error: Some(e.to_string()),
        }
    }

    fn with_err(label: impl Into<String>, n: Option<usize>, lhs: C64, rhs: C64, err: f64, allowed: f64) -> Self {
        Self {
            label: label.into(),
            n,
            lhs: lhs.into(),
            rhs: rhs.into(),
            abs_err: err,
            pass: err <= allowed,
            error: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub max_err: f64,
    /// `log(err_prev/err) / log(N/N_prev)`; absent when either error is 0.
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub inputs: Value,
    pub tolerance: TolerancePolicy,
    pub windows: Vec<usize>,
    pub rows: Vec<Row>,
    pub constants: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub convergence: Vec<ConvergenceRow>,
    pub pass: bool,
    /// Seconds; emitted in the separate `timing` section.
    #[serde(skip)]
    pub wall_time: f64,
}

impl Report {
    pub(crate) fn new(s: &Scenario, inputs: Value, rows: Vec<Row>, constants: BTreeMap<String, Value>) -> Self {
        let pass = !rows.is_empty() && rows.iter().all(|r| r.pass);
        Self {
            scenario: s.name.clone(),
            inputs,
            tolerance: s.tolerance,
            windows: s.windows.clone(),
            rows,
            constants,
            convergence: Vec::new(),
            pass,
            wall_time: 0.0,
        }
    }

    pub fn constant(&self, key: &str) -> Option<&Value> {
        self.constants.get(key)
    }
}

pub fn run_scenario(s: &Scenario) -> Result<Report> {
    defaults(&s.name)?;
    let start = Instant::now();
    let mut report = scenarios::run(s)?;
    report.wall_time = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Runs the scenario once per window and appends a convergence table.
pub fn sweep(s: &Scenario) -> Result<Report> {
    if s.windows.len() < 2 {
        return Err(Error::NeedTwoWindows);
    }
    let mut windows = s.windows.clone();
    windows.sort_unstable();
    windows.dedup();
    let start = Instant::now();
    let parts = windows
        .par_iter()
        .map(|n| scenarios::run(&s.clone().with_windows(vec![*n])))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut convergence: Vec<ConvergenceRow> = Vec::new();
    let mut constants = BTreeMap::new();
    for (n, part) in windows.iter().zip(parts) {
        let max_err = part.rows.iter().map(|r| r.abs_err).fold(0.0, f64::max);
        let order = convergence.last().and_then(|prev| {
            (prev.max_err > 0.0 && max_err > 0.0)
                .then(|| (prev.max_err / max_err).ln() / (*n as f64 / prev.n as f64).ln())
        });
        convergence.push(ConvergenceRow { n: *n, max_err, order });
        for mut r in part.rows {
            r.n.get_or_insert(*n);
            rows.push(r);
        }
        for (k, v) in part.constants {
            constants.insert(format!("{k}@N={n}"), v);
        }
    }
    let inputs = scenarios::run(&s.clone().with_windows(vec![windows[0]]))?.inputs;
    let mut report = Report::new(&s.clone().with_windows(windows), inputs, rows, constants);
    report.convergence = convergence;
    report.wall_time = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Runs scenarios in parallel; the result is sorted by scenario name.
pub fn run_all(scenarios: &[Scenario]) -> Result<Vec<Report>> {
    let mut reports = scenarios.par_iter().map(run_scenario).collect::<Result<Vec<_>>>()?;
    reports.sort_by(|a, b| a.scenario.cmp(&b.scenario));
    Ok(reports)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Markdown,
}

#[derive(Serialize, Deserialize)]
struct Document {
    reports: Vec<Report>,
    timing: BTreeMap<String, f64>,
}

pub fn emit(reports: &[Report], fmt: Format) -> String {
    match fmt {
        Format::Json => {
            let doc = Document {
                reports: reports.to_vec(),
                timing: reports.iter().map(|r| (r.scenario.clone(), r.wall_time)).collect(),
            };
            serde_json::to_string_pretty(&doc).expect("reports serialize") + "\n"
        }
        Format::Markdown => markdown(reports),
    }
}

/// Inverse of `emit(.., Format::Json)`.
pub fn parse_json(text: &str) -> Result<Vec<Report>> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::BadParams(e.to_string()))?;
    let mut reports = doc.reports;
    for r in &mut reports {
        r.wall_time = doc.timing.get(&r.scenario).copied().unwrap_or(0.0);
    }
    Ok(reports)
}

fn fmt_c(z: &ComplexWire) -> String {
    if z.im == 0.0 {
        format!("{:.12e}", z.re)
    } else {
        format!("{:.12e}{:+.12e}i", z.re, z.im)
    }
}

fn markdown(reports: &[Report]) -> String {
    let mut out = String::from("# Verification report\n\n");
    if reports.is_empty() {
        out.push_str("No scenarios were run.\n");
        return out;
    }
    for r in reports {
        let status = if r.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "## {}: {status}\n", r.scenario);
        let _ = writeln!(out, "tolerance: abs {:e}, rel {:e}\n", r.tolerance.abs_tol, r.tolerance.rel_tol);
        out.push_str("| label | N | lhs | rhs | abs_err | pass |\n|---|---|---|---|---|---|\n");
        for row in &r.rows {
            let n = row.n.map(|n| n.to_string()).unwrap_or_else(|| "-".into());
            let label = match &row.error {
                Some(e) => format!("{} ({e})", row.label),
                None => row.label.clone(),
            };
            let _ = writeln!(
                out,
                "| {label} | {n} | {} | {} | {:.3e} | {} |",
                fmt_c(&row.lhs),
                fmt_c(&row.rhs),
                row.abs_err,
                if row.pass { "yes" } else { "no" }
            );
        }
        if !r.convergence.is_empty() {
            out.push_str("\n| N | max_err | order |\n|---|---|---|\n");
            for c in &r.convergence {
                let order = c.order.map(|o| format!("{o:.3}")).unwrap_or_else(|| "-".into());
                let _ = writeln!(out, "| {} | {:.3e} | {order} |", c.n, c.max_err);
            }
        }
        if !r.constants.is_empty() {
            out.push_str("\nconstants:\n\n");
            for (k, v) in &r.constants {
                let _ = writeln!(out, "- {k}: {v}");
            }
        }
        out.push('\n');
    }
    out
}
