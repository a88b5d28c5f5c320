//! Report data model and byte-deterministic JSON emission.
//!
//! Reports serialize with object keys sorted and every float written as
//! `{:.16e}` (17 significant digits), so the same configuration always
//! produces byte-identical output and values round-trip exactly.

use serde::{Deserialize, Serialize};

use crate::config::ConfigEcho;
use crate::error::Result;

/// How a failed check affects the run outcome: errors fail the verdict,
/// warnings are informational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// One named residual check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
    pub severity: Severity,
}

impl Check {
    pub fn error(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Self { name: name.into(), residual, threshold, pass: residual <= threshold, severity: Severity::Error }
    }

    pub fn warning(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Self { name: name.into(), residual, threshold, pass: residual <= threshold, severity: Severity::Warning }
    }

    /// A check with an externally decided outcome (for non-residual facts
    /// such as invertibility or positive definiteness).
    pub fn status(
        name: impl Into<String>,
        residual: f64,
        threshold: f64,
        pass: bool,
        severity: Severity,
    ) -> Self {
        Self { name: name.into(), residual, threshold, pass, severity }
    }
}

/// Spectrum summary of one Fock level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub level: usize,
    pub dim: usize,
    pub hermiticity_residual: f64,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub kernel_dim: usize,
    pub positive_semidefinite: bool,
    pub positive_definite: bool,
    pub eigenvalues: Vec<f64>,
    /// Row-major `[re, im]` entries, present with `--emit-matrix`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
}

/// Quotient summary of one level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub level: usize,
    pub dim: usize,
    pub ideal_dim: usize,
    pub quotient_dim: usize,
    pub gram_on_ideal: f64,
    pub well_defined: bool,
    pub induced_eigenvalues: Vec<f64>,
}

/// Residuals of a relation family under both index conventions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConventionReport {
    pub derived: f64,
    pub paper_literal: f64,
}

/// Adjointness, commutation and braid relation residuals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorReport {
    pub adjointness_residual: f64,
    pub adjointness_per_level: Vec<f64>,
    pub commutation: ConventionReport,
    /// Which index convention the commutation relation holds under.
    pub commutation_convention: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub braid_creation_line: Option<ConventionReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub braid_annihilation_line: Option<ConventionReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub braid_commutation_line: Option<ConventionReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub braid_convention: Option<String>,
}

/// Number operator spectrum of one level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumberReport {
    pub level: usize,
    pub eigenvalues: Vec<f64>,
    pub max_integer_deviation: f64,
}

/// A full run report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: ConfigEcho,
    pub mode: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub levels: Option<Vec<LevelReport>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub quotient: Option<Vec<QuotientReport>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub operators: Option<OperatorReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub number_spectra: Option<Vec<NumberReport>>,
    pub warnings: Vec<String>,
    /// `"pass"` or `"fail"`: fail when any error-severity check fails.
    pub verdict: String,
}

impl Report {
    pub fn new(config: ConfigEcho, mode: &str) -> Self {
        Self {
            config,
            mode: mode.to_string(),
            checks: Vec::new(),
            levels: None,
            quotient: None,
            operators: None,
            number_spectra: None,
            warnings: Vec::new(),
            verdict: "pass".into(),
        }
    }

    /// Recomputes the verdict from the error-severity checks.
    pub fn finalize(&mut self) {
        let failed = self
            .checks
            .iter()
            .any(|c| c.severity == Severity::Error && !c.pass);
        self.verdict = if failed { "fail" } else { "pass" }.into();
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

/// Pretty JSON formatter that writes every f64 as `{:.16e}`.
struct SciFormatter {
    indent: usize,
    has_value: bool,
}

impl SciFormatter {
    fn new() -> Self {
        Self { indent: 0, has_value: false }
    }

    fn newline<W: ?Sized + std::io::Write>(&self, writer: &mut W) -> std::io::Result<()> {
        writer.write_all(b"\n")?;
        for _ in 0..self.indent {
            writer.write_all(b"  ")?;
        }
        Ok(())
    }
}

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W: ?Sized + std::io::Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            // Reports never contain non-finite values; guard the encoding anyway.
            writer.write_all(b"null")
        }
    }

    fn begin_array<W: ?Sized + std::io::Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.indent += 1;
        self.has_value = false;
        writer.write_all(b"[")
    }

    fn end_array<W: ?Sized + std::io::Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.indent -= 1;
        if self.has_value {
            self.newline(writer)?;
        }
        writer.write_all(b"]")
    }

    fn begin_array_value<W: ?Sized + std::io::Write>(&mut self, writer: &mut W, first: bool) -> std::io::Result<()> {
        if !first {
            writer.write_all(b",")?;
        }
        self.newline(writer)
    }

    fn end_array_value<W: ?Sized + std::io::Write>(&mut self, _writer: &mut W) -> std::io::Result<()> {
        self.has_value = true;
        Ok(())
    }

    fn begin_object<W: ?Sized + std::io::Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.indent += 1;
        self.has_value = false;
        writer.write_all(b"{")
    }

    fn end_object<W: ?Sized + std::io::Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.indent -= 1;
        if self.has_value {
            self.newline(writer)?;
        }
        writer.write_all(b"}")
    }

    fn begin_object_key<W: ?Sized + std::io::Write>(&mut self, writer: &mut W, first: bool) -> std::io::Result<()> {
        if !first {
            writer.write_all(b",")?;
        }
        self.newline(writer)
    }

    fn begin_object_value<W: ?Sized + std::io::Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        writer.write_all(b": ")
    }

    fn end_object_value<W: ?Sized + std::io::Write>(&mut self, _writer: &mut W) -> std::io::Result<()> {
        self.has_value = true;
        Ok(())
    }
}

/// Serializes a report to canonical JSON: sorted keys, `{:.16e}` floats,
/// two-space indentation, trailing newline.
pub fn to_json(report: &Report) -> Result<String> {
    // Passing through Value sorts object keys (serde_json's default map is
    // ordered by key).
    let value = serde_json::to_value(report)?;
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter::new());
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits utf8"))
}

/// Parses a report back from JSON text.
pub fn from_json(text: &str) -> Result<Report> {
    Ok(serde_json::from_str(text)?)
}

/// Renders the human-readable summary: one line per check plus the verdict.
pub fn human_summary(report: &Report) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let echo = &report.config;
    write!(out, "statistics: {} (N={}), nmax={}, tolerance={:e}", echo.family, echo.dimension, echo.nmax, echo.tolerance).unwrap();
    if let Some(q) = echo.q {
        write!(out, ", q={q}").unwrap();
    }
    out.push('\n');
    for check in &report.checks {
        let status = if check.pass { "pass" } else { "FAIL" };
        let tag = match check.severity {
            Severity::Error => "",
            Severity::Warning => " (warning)",
        };
        writeln!(out, "  {:<36} residual {:>12.3e}  {status}{tag}", check.name, check.residual).unwrap();
    }
    for warning in &report.warnings {
        writeln!(out, "  note: {warning}").unwrap();
    }
    writeln!(out, "verdict: {}", report.verdict.to_uppercase()).unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> Report {
        let echo = ConfigEcho {
            dimension: 2,
            nmax: 3,
            tolerance: 1e-10,
            family: "quon".into(),
            q: Some(0.5),
            group: None,
            degrees: None,
            cross_fingerprint: None,
            braid_fingerprint: None,
        };
        let mut report = Report::new(echo, "check");
        report.checks.push(Check::error("tilde_yang_baxter", 3.25e-16, 1e-10));
        report.checks.push(Check::warning("tilde_norm_bound", 0.5, 1.0 + 1e-10));
        report.levels = Some(vec![LevelReport {
            level: 2,
            dim: 4,
            hermiticity_residual: 0.0,
            min_eigenvalue: 0.5,
            max_eigenvalue: 1.5,
            kernel_dim: 0,
            positive_semidefinite: true,
            positive_definite: true,
            eigenvalues: vec![0.5, 1.0, 1.0, 1.5],
            matrix: None,
        }]);
        report.finalize();
        report
    }

    #[test]
    fn json_round_trips_exactly() {
        let report = sample_report();
        let text = to_json(&report).unwrap();
        let back = from_json(&text).unwrap();
        assert_eq!(back, report);
        // And the re-emission is byte identical.
        assert_eq!(to_json(&back).unwrap(), text);
    }

    #[test]
    fn emission_is_deterministic() {
        let a = to_json(&sample_report()).unwrap();
        let b = to_json(&sample_report()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn floats_use_fixed_scientific_format() {
        let text = to_json(&sample_report()).unwrap();
        assert!(text.contains("5.0000000000000000e-1"), "{text}");
        assert!(text.contains("3.2500000000000001e-16"));
        // Keys are sorted within each object.
        let checks_pos = text.find("\"checks\"").unwrap();
        let config_pos = text.find("\"config\"").unwrap();
        assert!(checks_pos < config_pos);
    }

    #[test]
    fn verdict_follows_error_checks_only() {
        let mut report = sample_report();
        report.checks.push(Check::warning("weird_but_ok", 99.0, 1.0));
        report.finalize();
        assert!(report.passed());
        report.checks.push(Check::error("broken", 99.0, 1.0));
        report.finalize();
        assert!(!report.passed());
    }

    #[test]
    fn summary_has_one_line_per_check_and_a_verdict() {
        let report = sample_report();
        let text = human_summary(&report);
        assert_eq!(text.lines().count(), 1 + report.checks.len() + 1);
        assert!(text.trim_end().ends_with("verdict: PASS"));
    }
}
