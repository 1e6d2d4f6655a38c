use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, Serializer};

use crate::config::{Suite, SuiteConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub trials: usize,
    /// Largest error over all trials; `f64::MAX` when a trial failed
    /// outright. Counting checks report the number of violations.
    pub max_abs_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Report {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new(cfg: &SuiteConfig, checks: Vec<CheckResult>) -> Self {
        Self {
            suite: Some(cfg.suite),
            seed: Some(cfg.seed),
            dims: Some(cfg.dims.clone()),
            checks,
        }
    }

    pub fn from_checks(checks: Vec<CheckResult>) -> Self {
        Self {
            checks,
            ..Self::default()
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Compact JSON with every float in scientific notation at 17 significant
/// digits.
struct FixedFloats;

impl Formatter for FixedFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

fn to_json(report: &Report) -> String {
    // Going through `Value` sorts object keys.
    let value = serde_json::to_value(report).expect("report serializes");
    let mut out = Vec::new();
    value
        .serialize(&mut Serializer::with_formatter(&mut out, FixedFloats))
        .expect("writing to memory");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON is UTF-8")
}

fn to_text(report: &Report) -> String {
    let mut out = String::new();
    for c in &report.checks {
        let worst = c
            .worst_seed
            .map(|s| format!(" worst_seed={s}"))
            .unwrap_or_default();
        out.push_str(&format!(
            "{} {} trials={} max_abs_error={:.3e} tolerance={:.3e}{}\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.trials,
            c.max_abs_error,
            c.tolerance,
            worst
        ));
    }
    out
}

pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Text => to_text(report),
    }
}

pub fn parse_report(json: &str) -> serde_json::Result<Report> {
    serde_json::from_str(json)
}
