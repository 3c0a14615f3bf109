//! Suite reports: per-check residuals with thresholds, rendered as a
//! human-readable table or as byte-stable machine records.
//!
//! A check passes iff `residual <= threshold`. Bound-type checks (where a
//! quantity must exceed a floor) store `floor − measured` as the residual
//! with threshold 0, so negative residuals indicate margin.
//!
//! The records format is deterministic for a fixed config and seed: it
//! carries no wall times, and all numbers are printed with a fixed format.

use std::fmt::Write as _;

/// One verification check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub passed: bool,
    pub wall_ms: f64,
}

impl CheckResult {
    pub fn new(name: &str, residual: f64, threshold: f64, wall_ms: f64) -> Self {
        Self {
            name: name.to_string(),
            residual,
            threshold,
            passed: residual <= threshold,
            wall_ms,
        }
    }
}

/// Report of one named suite run.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub config_summary: String,
    pub checks: Vec<CheckResult>,
}

/// Output format of a rendered report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Records,
}

impl ReportFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "table" => Some(Self::Table),
            "records" => Some(Self::Records),
            _ => None,
        }
    }
}

impl SuiteReport {
    pub fn new(suite: &str, config_summary: &str) -> Self {
        Self {
            suite: suite.to_string(),
            config_summary: config_summary.to_string(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: CheckResult) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn merge(&mut self, other: SuiteReport) {
        self.checks.extend(other.checks);
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Table => self.render_table(),
            ReportFormat::Records => self.render_records(),
        }
    }

    fn render_records(&self) -> String {
        let mut out = String::new();
        writeln!(out, "config {}", self.config_summary).unwrap();
        for c in &self.checks {
            writeln!(
                out,
                "suite={} check={} residual={:.12e} threshold={:.12e} status={}",
                self.suite,
                c.name,
                c.residual,
                c.threshold,
                if c.passed { "pass" } else { "fail" }
            )
            .unwrap();
        }
        writeln!(
            out,
            "suite={} overall={}",
            self.suite,
            if self.passed() { "pass" } else { "fail" }
        )
        .unwrap();
        out
    }

    fn render_table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "suite: {}", self.suite).unwrap();
        writeln!(out, "config: {}", self.config_summary).unwrap();
        let name_w = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(5)
            .max(5);
        writeln!(
            out,
            "{:name_w$}  {:>13}  {:>13}  {:>6}  {:>8}",
            "check", "residual", "threshold", "state", "ms"
        )
        .unwrap();
        for c in &self.checks {
            writeln!(
                out,
                "{:name_w$}  {:>13.4e}  {:>13.4e}  {:>6}  {:>8.1}",
                c.name,
                c.residual,
                c.threshold,
                if c.passed { "pass" } else { "FAIL" },
                c.wall_ms
            )
            .unwrap();
        }
        writeln!(
            out,
            "overall: {} ({} checks)",
            if self.passed() { "pass" } else { "FAIL" },
            self.checks.len()
        )
        .unwrap();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_renders_headers_only() {
        let r = SuiteReport::new("typeS", "seed=7");
        let rec = r.render(ReportFormat::Records);
        assert!(rec.starts_with("config seed=7"));
        assert!(rec.contains("overall=pass"));
        let tab = r.render(ReportFormat::Table);
        assert!(tab.contains("suite: typeS"));
    }

    #[test]
    fn pass_fail_logic() {
        let mut r = SuiteReport::new("x", "");
        r.push(CheckResult::new("a", 1e-12, 1e-10, 0.1));
        assert!(r.passed());
        r.push(CheckResult::new("b", 1e-9, 1e-10, 0.1));
        assert!(!r.passed());
        let rec = r.render(ReportFormat::Records);
        assert!(rec.contains("check=a") && rec.contains("status=pass"));
        assert!(rec.contains("check=b") && rec.contains("status=fail"));
        assert!(rec.contains("overall=fail"));
    }

    #[test]
    fn formats_carry_identical_residuals() {
        let mut r = SuiteReport::new("x", "cfg");
        r.push(CheckResult::new("a", 3.25e-11, 1e-10, 12.5));
        let rec = r.render(ReportFormat::Records);
        let tab = r.render(ReportFormat::Table);
        assert!(rec.contains("3.250000000000e-11"));
        assert!(tab.contains("3.2500e-11"));
        // records are wall-time free; the table carries timings
        assert!(!rec.contains("12.5"));
        assert!(tab.contains("12.5"));
    }

    #[test]
    fn bound_checks_use_negative_margin() {
        let c = CheckResult::new("floor", -0.3, 0.0, 0.0);
        assert!(c.passed);
        let c = CheckResult::new("floor", 0.1, 0.0, 0.0);
        assert!(!c.passed);
    }
}
