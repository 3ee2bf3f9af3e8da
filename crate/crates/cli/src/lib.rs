//! Report generation behind the `caputo-l1` binary.
//!
//! Every command renders its artifact into a `String`; the binary only
//! decides where it goes and which exit status to return.

// `!(x > 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Write as _;
use std::io;

use caputo_l1::experiments::{
    bound_sweep, order_table, BoundCheck, CellOutcome, DEFAULT_ALPHAS, DEFAULT_SMOOTHNESS, DEFAULT_TAU,
};
use caputo_l1::{l1_apply_all, QuadratureConfig, SampledFunction, UniformGrid};
use thiserror::Error;

/// Number of step sizes `tau_base · 2^j` visited by the bound check.
pub const BOUND_LEVELS: u32 = 5;
/// Largest relative deviation of an input time step from the mean step.
pub const SPACING_TOLERANCE: f64 = 1e-9;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("input error: {0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] caputo_l1::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(caputo_l1::Error::NoConvergence(_)) => EXIT_NO_CONVERGENCE,
            _ => EXIT_CONFIG,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Markdown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub alphas: Vec<f64>,
    /// Column values `k + β`; `v ≤ 1` means `(0, v)`, larger values `(1, v - 1)`.
    pub kbeta: Vec<f64>,
    pub tau_base: f64,
    pub horizon: f64,
    pub format: Format,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            alphas: DEFAULT_ALPHAS.to_vec(),
            kbeta: DEFAULT_SMOOTHNESS.to_vec(),
            tau_base: DEFAULT_TAU,
            horizon: 1.0,
            format: Format::Csv,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() || self.kbeta.is_empty() {
            return Err(CliError::Config("alpha and k+beta lists must be nonempty".into()));
        }
        if let Some(a) = self.alphas.iter().find(|&&a| !(a > 0.0 && a < 1.0)) {
            return Err(CliError::Config(format!("alpha must lie in (0, 1), got {a}")));
        }
        if let Some(v) = self.kbeta.iter().find(|&&v| !(v > 0.0 && v <= 2.0)) {
            return Err(CliError::Config(format!("k+beta must lie in (0, 2], got {v}")));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(CliError::Config(format!(
                "horizon must be positive, got {}",
                self.horizon
            )));
        }
        if !(self.tau_base > 0.0 && self.tau_base <= self.horizon) {
            return Err(CliError::Config(format!(
                "tau must lie in (0, {}], got {}",
                self.horizon, self.tau_base
            )));
        }
        Ok(())
    }
}

/// Parses a step size written either as a decimal or as `2^-m`.
pub fn parse_tau(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let value = match s.strip_prefix("2^") {
        Some(exp) => {
            let e: i32 = exp.parse().map_err(|_| format!("bad exponent in {s:?}"))?;
            2f64.powi(e)
        }
        None => s
            .parse::<f64>()
            .map_err(|_| format!("cannot parse {s:?} as a step size"))?,
    };
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(format!("step size must be positive, got {s:?}"))
    }
}

/// Rounds half-to-even to two decimals; negative zero prints as `0.00`.
pub fn round2(x: f64) -> String {
    let r = (x * 100.0).round_ties_even() / 100.0;
    let r = if r == 0.0 { 0.0 } else { r };
    format!("{r:.2}")
}

/// Shortest round-trip text for a float, switching to exponent form for
/// very small or very large magnitudes.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e16).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn split(v: f64) -> (u8, f64) {
    match caputo_l1::TestFunctionSpec::from_smoothness(v) {
        Ok(spec) => (spec.k(), spec.beta()),
        Err(_) => (0, v),
    }
}

pub fn order_table_report(cfg: &ExperimentConfig) -> Result<String> {
    cfg.validate()?;
    let table = order_table(&cfg.alphas, &cfg.kbeta, cfg.tau_base, cfg.horizon)?;
    let mut out = String::new();
    match cfg.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "alpha",
                "kbeta",
                "k",
                "beta",
                "tau_base",
                "order",
                "max_diff_1",
                "max_diff_2",
            ])?;
            for (i, &alpha) in table.alphas.iter().enumerate() {
                for (j, &v) in table.smoothness.iter().enumerate() {
                    let (k, beta) = split(v);
                    let mut row = vec![num(alpha), num(v), k.to_string(), num(beta), num(cfg.tau_base)];
                    match table.get(i, j) {
                        Ok(est) => {
                            row.push(num(est.estimated_order));
                            row.push(num(est.max_diffs.0));
                            row.push(num(est.max_diffs.1));
                        }
                        Err(caputo_l1::Error::DegenerateDifference { .. }) => {
                            row.extend([String::new(), String::new(), String::new()]);
                        }
                        Err(e) => return Err(e.clone().into()),
                    }
                    w.write_record(&row)?;
                }
            }
            out = String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("ascii");
        }
        Format::Markdown => {
            write!(out, "| α \\ k+β |").unwrap();
            for v in &table.smoothness {
                write!(out, " {v} |").unwrap();
            }
            out.push('\n');
            out.push_str("|---|");
            out.push_str(&"---:|".repeat(table.smoothness.len()));
            out.push('\n');
            for (i, alpha) in table.alphas.iter().enumerate() {
                write!(out, "| {alpha} |").unwrap();
                for j in 0..table.smoothness.len() {
                    match table.get(i, j) {
                        Ok(est) => write!(out, " {} |", round2(est.estimated_order)).unwrap(),
                        Err(caputo_l1::Error::DegenerateDifference { .. }) => out.push_str(" n/a |"),
                        Err(e) => return Err(e.clone().into()),
                    }
                }
                out.push('\n');
            }
            writeln!(
                out,
                "\nτ = {}, T = {}. Columns with k+β ≤ 1 use k = 0, β = k+β; larger values use k = 1, β = k+β-1.",
                cfg.tau_base, cfg.horizon
            )
            .unwrap();
        }
    }
    Ok(out)
}

/// Rendered bound-check report plus what the run found.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub text: String,
    pub violations: usize,
    pub failures: usize,
    pub skipped: usize,
}

impl BoundReport {
    pub fn exit_code(&self) -> i32 {
        if self.violations > 0 {
            EXIT_VIOLATION
        } else if self.failures > 0 {
            EXIT_NO_CONVERGENCE
        } else {
            EXIT_OK
        }
    }
}

struct BoundRow {
    alpha: f64,
    kbeta: f64,
    k: u8,
    beta: f64,
    tau: String,
    observed: String,
    bound: String,
    ratio: String,
    oracle_error: String,
    status: String,
}

impl BoundRow {
    fn fields(&self) -> [String; 10] {
        [
            num(self.alpha),
            num(self.kbeta),
            self.k.to_string(),
            num(self.beta),
            self.tau.clone(),
            self.observed.clone(),
            self.bound.clone(),
            self.ratio.clone(),
            self.oracle_error.clone(),
            self.status.clone(),
        ]
    }
}

fn checked_row(alpha: f64, kbeta: f64, c: &BoundCheck) -> BoundRow {
    let status = if c.is_exact_zero() {
        "exact-zero"
    } else if c.passed() {
        "ok"
    } else {
        "violation"
    };
    BoundRow {
        alpha,
        kbeta,
        k: c.k,
        beta: c.beta,
        tau: num(c.tau),
        observed: num(c.observed_max),
        bound: num(c.bound_max),
        ratio: num(c.worst_ratio),
        oracle_error: num(c.oracle_error),
        status: status.into(),
    }
}

/// Checks the truncation bound for every cell at `tau_base · 2^j`,
/// `j = 0..BOUND_LEVELS`. Notices for skipped or failed cells go to `notices`.
pub fn bound_check_report(
    cfg: &ExperimentConfig,
    quadrature: &QuadratureConfig,
    notices: &mut Vec<String>,
) -> Result<BoundReport> {
    cfg.validate()?;
    quadrature.validate()?;
    let cells = bound_sweep(
        &cfg.alphas,
        &cfg.kbeta,
        cfg.tau_base,
        BOUND_LEVELS,
        cfg.horizon,
        quadrature,
    )?;
    let mut rows = Vec::new();
    let (mut violations, mut failures, mut skipped) = (0, 0, 0);
    for (cell, &kbeta) in cells.iter().zip(cfg.kbeta.iter().cycle()) {
        let (k, beta) = (cell.spec.k(), cell.spec.beta());
        let blank = |status: &str| BoundRow {
            alpha: cell.alpha,
            kbeta,
            k,
            beta,
            tau: String::new(),
            observed: String::new(),
            bound: String::new(),
            ratio: String::new(),
            oracle_error: String::new(),
            status: status.into(),
        };
        match &cell.outcome {
            Ok(CellOutcome::Skipped { reason }) => {
                skipped += 1;
                notices.push(format!("skipped alpha = {}, k+beta = {kbeta}: {reason}", cell.alpha));
                rows.push(blank("skipped"));
            }
            Ok(CellOutcome::Checked(checks)) => {
                for c in checks {
                    if !c.passed() {
                        violations += 1;
                    }
                    rows.push(checked_row(cell.alpha, kbeta, c));
                }
            }
            Err(caputo_l1::Error::NoConvergence(msg)) => {
                failures += 1;
                notices.push(format!(
                    "alpha = {}, k+beta = {kbeta}: oracle failed: {msg}",
                    cell.alpha
                ));
                rows.push(blank("no-convergence"));
            }
            Err(e) => return Err(e.clone().into()),
        }
    }

    let header = [
        "alpha",
        "kbeta",
        "k",
        "beta",
        "tau",
        "observed_max",
        "bound_max",
        "ratio",
        "oracle_error",
        "status",
    ];
    let text = match cfg.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(header)?;
            for r in &rows {
                w.write_record(r.fields())?;
            }
            String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("ascii")
        }
        Format::Markdown => {
            let mut out = format!("| {} |\n", header.join(" | "));
            out.push_str(&format!("|{}\n", "---|".repeat(header.len())));
            for r in &rows {
                out.push_str(&format!("| {} |\n", r.fields().join(" | ")));
            }
            out
        }
    };
    Ok(BoundReport {
        text,
        violations,
        failures,
        skipped,
    })
}

/// Reads `t,y` samples on a uniform grid starting at 0 and returns the
/// scheme at `t_1, …, t_N` as `t,l1_caputo` CSV.
pub fn apply_csv(input: impl io::Read, alpha: f64) -> Result<String> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CliError::Config(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "t" || &headers[1] != "y" {
        return Err(CliError::Input(format!(
            "expected header \"t,y\", found {:?}",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut ts = Vec::new();
    let mut ys = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let parse = |field: &str| {
            field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Input(format!("line {}: cannot parse {field:?}", line + 2)))
        };
        ts.push(parse(&record[0])?);
        ys.push(parse(&record[1])?);
    }
    if ts.len() < 2 {
        return Err(CliError::Input("need at least two samples".into()));
    }
    if ts[0] != 0.0 {
        return Err(CliError::Input(format!("first sample must be at t = 0, got {}", ts[0])));
    }
    if let Some(i) = ts.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(CliError::Input(format!(
            "t is not strictly increasing at line {}",
            i + 3
        )));
    }
    let n = ts.len() - 1;
    let tau = ts[n] / n as f64;
    for (i, w) in ts.windows(2).enumerate() {
        let dev = ((w[1] - w[0]) - tau).abs() / tau;
        if dev > SPACING_TOLERANCE {
            return Err(CliError::Input(format!(
                "non-uniform spacing: step {} between lines {} and {} deviates from {tau} by {dev:e} (relative)",
                w[1] - w[0],
                i + 2,
                i + 3
            )));
        }
    }

    let samples = SampledFunction::new(UniformGrid::new(tau, n)?, ys)?;
    let values = l1_apply_all(&samples, alpha)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "l1_caputo"])?;
    for (t, v) in ts[1..].iter().zip(&values) {
        w.write_record([num(*t), num(*v)])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("ascii"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_forms() {
        assert_eq!(parse_tau("2^-10").unwrap(), 1.0 / 1024.0);
        assert_eq!(parse_tau("0.125").unwrap(), 0.125);
        assert!(parse_tau("2^x").is_err());
        assert!(parse_tau("-1").is_err());
        assert!(parse_tau("0").is_err());
    }

    #[test]
    fn rounding_is_half_even() {
        assert_eq!(round2(1.125), "1.12");
        assert_eq!(round2(1.375), "1.38");
        assert_eq!(round2(-0.001), "0.00");
        assert_eq!(round2(-0.2), "-0.20");
    }

    #[test]
    fn config_validation() {
        let ok = ExperimentConfig::default();
        assert!(ok.validate().is_ok());
        let bad_alpha = ExperimentConfig {
            alphas: vec![1.0],
            ..ok.clone()
        };
        assert!(bad_alpha.validate().is_err());
        let bad_kbeta = ExperimentConfig {
            kbeta: vec![2.5],
            ..ok.clone()
        };
        assert!(bad_kbeta.validate().is_err());
        let bad_tau = ExperimentConfig { tau_base: 2.0, ..ok };
        assert!(bad_tau.validate().is_err());
    }
}
