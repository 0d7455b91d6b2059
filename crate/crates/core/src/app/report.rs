use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One benchmark comparison: identical parameters fed to the closed form and
/// to the Monte Carlo oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkCase {
    pub alpha_a: u64,
    pub beta_a: u64,
    pub alpha_b: u64,
    pub beta_b: u64,
    pub gamma: f64,
    pub closed_form: f64,
    pub mc_estimate: f64,
    pub closed_form_nanos: u64,
    pub mc_nanos: u64,
}

impl BenchmarkCase {
    pub fn abs_diff(&self) -> f64 {
        (self.closed_form - self.mc_estimate).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub seed: u64,
    pub mc_samples: u64,
    pub cases: Vec<BenchmarkCase>,
    pub mean_closed_nanos: f64,
    pub mean_mc_nanos: f64,
    pub speedup_orders_of_magnitude: f64,
    pub max_abs_diff: f64,
}

pub(crate) const REPORT_METHOD: &str = "closed_form_vs_monte_carlo";

impl BenchmarkReport {
    /// Builds the summary statistics from the cases.
    pub fn from_cases(seed: u64, mc_samples: u64, cases: Vec<BenchmarkCase>) -> Self {
        let n = cases.len().max(1) as f64;
        let mean_closed_nanos = cases.iter().map(|c| c.closed_form_nanos as f64).sum::<f64>() / n;
        let mean_mc_nanos = cases.iter().map(|c| c.mc_nanos as f64).sum::<f64>() / n;
        // a closed-form call below clock resolution counts as one nanosecond
        let speedup_orders_of_magnitude = (mean_mc_nanos / mean_closed_nanos.max(1.0)).log10();
        let max_abs_diff = cases.iter().map(BenchmarkCase::abs_diff).fold(0.0, f64::max);
        Self {
            seed,
            mc_samples,
            cases,
            mean_closed_nanos,
            mean_mc_nanos,
            speedup_orders_of_magnitude,
            max_abs_diff,
        }
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields are finite")
    }

    pub fn from_json(s: &str) -> Result<Self, ReportParseError> {
        let report: Self =
            serde_json::from_str(s).map_err(|e| ReportParseError::Json(e.to_string()))?;
        if report.cases.is_empty() {
            return Err(ReportParseError::NoCases);
        }
        Ok(report)
    }
}

impl fmt::Display for BenchmarkReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "method={REPORT_METHOD}")?;
        writeln!(f, "seed={}", self.seed)?;
        writeln!(f, "mc_samples={}", self.mc_samples)?;
        for (i, c) in self.cases.iter().enumerate() {
            writeln!(
                f,
                "case {i} {} {} {} {} {} {} {} {} {}",
                c.alpha_a,
                c.beta_a,
                c.alpha_b,
                c.beta_b,
                c.gamma,
                c.closed_form,
                c.mc_estimate,
                c.closed_form_nanos,
                c.mc_nanos
            )?;
        }
        writeln!(f, "mean_closed_ns={}", self.mean_closed_nanos)?;
        writeln!(f, "mean_mc_ns={}", self.mean_mc_nanos)?;
        writeln!(f, "speedup_orders={}", self.speedup_orders_of_magnitude)?;
        writeln!(f, "max_abs_diff={}", self.max_abs_diff)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("missing field `{0}`")]
    Missing(&'static str),
    #[error("report has no cases")]
    NoCases,
    #[error("invalid JSON report: {0}")]
    Json(String),
}

fn parse_field<T: FromStr>(line: usize, name: &str, raw: &str) -> Result<T, ReportParseError>
where
    T::Err: fmt::Display,
{
    raw.parse().map_err(|e| ReportParseError::Line {
        line,
        message: format!("bad value for {name}: {raw:?} ({e})"),
    })
}

impl FromStr for BenchmarkReport {
    type Err = ReportParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut seed = None;
        let mut mc_samples = None;
        let mut mean_closed = None;
        let mut mean_mc = None;
        let mut speedup = None;
        let mut max_diff = None;
        let mut cases = Vec::new();

        for (idx, raw_line) in s.lines().enumerate() {
            let line = idx + 1;
            let text = raw_line.trim();
            if text.is_empty() {
                continue;
            }
            if let Some(rest) = text.strip_prefix("case ") {
                let cols: Vec<&str> = rest.split_whitespace().collect();
                if cols.len() != 10 {
                    return Err(ReportParseError::Line {
                        line,
                        message: format!("case line needs 10 columns, found {}", cols.len()),
                    });
                }
                let index: usize = parse_field(line, "case index", cols[0])?;
                if index != cases.len() {
                    return Err(ReportParseError::Line {
                        line,
                        message: format!("case index {index} out of order"),
                    });
                }
                cases.push(BenchmarkCase {
                    alpha_a: parse_field(line, "alpha_a", cols[1])?,
                    beta_a: parse_field(line, "beta_a", cols[2])?,
                    alpha_b: parse_field(line, "alpha_b", cols[3])?,
                    beta_b: parse_field(line, "beta_b", cols[4])?,
                    gamma: parse_field(line, "gamma", cols[5])?,
                    closed_form: parse_field(line, "closed_form", cols[6])?,
                    mc_estimate: parse_field(line, "mc_estimate", cols[7])?,
                    closed_form_nanos: parse_field(line, "closed_ns", cols[8])?,
                    mc_nanos: parse_field(line, "mc_ns", cols[9])?,
                });
                continue;
            }
            let Some((key, value)) = text.split_once('=') else {
                return Err(ReportParseError::Line {
                    line,
                    message: format!("expected key=value or a case record, got {text:?}"),
                });
            };
            match key {
                "method" if value == REPORT_METHOD => {}
                "method" => {
                    return Err(ReportParseError::Line {
                        line,
                        message: format!("unexpected method {value:?}"),
                    })
                }
                "seed" => seed = Some(parse_field(line, key, value)?),
                "mc_samples" => mc_samples = Some(parse_field(line, key, value)?),
                "mean_closed_ns" => mean_closed = Some(parse_field(line, key, value)?),
                "mean_mc_ns" => mean_mc = Some(parse_field(line, key, value)?),
                "speedup_orders" => speedup = Some(parse_field(line, key, value)?),
                "max_abs_diff" => max_diff = Some(parse_field(line, key, value)?),
                _ => {
                    return Err(ReportParseError::Line {
                        line,
                        message: format!("unknown key {key:?}"),
                    })
                }
            }
        }
        if cases.is_empty() {
            return Err(ReportParseError::NoCases);
        }
        Ok(Self {
            seed: seed.ok_or(ReportParseError::Missing("seed"))?,
            mc_samples: mc_samples.ok_or(ReportParseError::Missing("mc_samples"))?,
            cases,
            mean_closed_nanos: mean_closed.ok_or(ReportParseError::Missing("mean_closed_ns"))?,
            mean_mc_nanos: mean_mc.ok_or(ReportParseError::Missing("mean_mc_ns"))?,
            speedup_orders_of_magnitude: speedup.ok_or(ReportParseError::Missing("speedup_orders"))?,
            max_abs_diff: max_diff.ok_or(ReportParseError::Missing("max_abs_diff"))?,
        })
    }
}

/// Ordered `key=value` record used by the non-benchmark subcommands.
#[derive(Debug, Clone, Default)]
pub(crate) struct Record {
    fields: Vec<(&'static str, Value)>,
}

#[derive(Debug, Clone)]
pub(crate) enum Value {
    U64(u64),
    I64(i64),
    F64(f64),
    Bool(bool),
    Str(String),
}

impl Record {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn with(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.fields.push((key, value.into()));
        self
    }

    pub(crate) fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.fields {
            let _ = match v {
                Value::U64(x) => writeln!(out, "{k}={x}"),
                Value::I64(x) => writeln!(out, "{k}={x}"),
                Value::F64(x) => writeln!(out, "{k}={x}"),
                Value::Bool(x) => writeln!(out, "{k}={x}"),
                Value::Str(x) => writeln!(out, "{k}={x}"),
            };
        }
        out
    }

    pub(crate) fn to_json(&self) -> String {
        let mut map = serde_json::Map::new();
        for (k, v) in &self.fields {
            let json = match v {
                Value::U64(x) => serde_json::Value::from(*x),
                Value::I64(x) => serde_json::Value::from(*x),
                Value::F64(x) => serde_json::Number::from_f64(*x)
                    .map(serde_json::Value::Number)
                    .unwrap_or(serde_json::Value::Null),
                Value::Bool(x) => serde_json::Value::from(*x),
                Value::Str(x) => serde_json::Value::from(x.as_str()),
            };
            map.insert((*k).to_string(), json);
        }
        let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(map))
            .expect("record serializes");
        s.push('\n');
        s
    }
}

impl From<u64> for Value {
    fn from(x: u64) -> Self {
        Value::U64(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::U64(x as u64)
    }
}

impl From<i64> for Value {
    fn from(x: i64) -> Self {
        Value::I64(x)
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::F64(x)
    }
}

impl From<bool> for Value {
    fn from(x: bool) -> Self {
        Value::Bool(x)
    }
}

impl From<&str> for Value {
    fn from(x: &str) -> Self {
        Value::Str(x.to_string())
    }
}
