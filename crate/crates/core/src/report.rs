//! Structured pass/fail records.

use serde::{Deserialize, Serialize};

use crate::expr::DEFAULT_GUARD;

/// Output encoding requested by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

/// Parameters shared by every suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub lambda: f64,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub steps: usize,
    pub guard: f64,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            samples: 100,
            seed: 42,
            tol: 1e-9,
            steps: 10_000,
            guard: DEFAULT_GUARD,
            format: OutputFormat::Json,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> crate::Result<()> {
        let bad = |m: &str| Err(crate::Error::InvalidConfig(m.to_string()));
        if self.samples < 1 {
            return bad("samples must be at least 1");
        }
        if !(self.tol > 0.0) {
            return bad("tol must be positive");
        }
        if self.steps < 1 {
            return bad("steps must be at least 1");
        }
        if !(self.guard > 0.0 && self.guard < 1.0) {
            return bad("guard must lie in (0, 1)");
        }
        if !self.lambda.is_finite() {
            return bad("lambda must be finite");
        }
        Ok(())
    }
}

/// Outcome for one identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub id: String,
    pub max_residual: f64,
    pub samples: usize,
    pub passed: bool,
    pub tolerance: f64,
    /// The check passes when the residual *exceeds* the tolerance
    /// (counterexamples that must be rejected).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub expect_violation: bool,
}

impl IdentityRecord {
    pub fn holds(id: impl Into<String>, max_residual: f64, samples: usize, tolerance: f64) -> Self {
        Self {
            id: id.into(),
            max_residual,
            samples,
            passed: max_residual < tolerance,
            tolerance,
            expect_violation: false,
        }
    }

    pub fn violated(
        id: impl Into<String>,
        max_residual: f64,
        samples: usize,
        threshold: f64,
    ) -> Self {
        Self {
            id: id.into(),
            max_residual,
            samples,
            passed: max_residual > threshold,
            tolerance: threshold,
            expect_violation: true,
        }
    }
}

/// A suite's records. `passed` is true iff every record passed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<RunConfig>,
    pub records: Vec<IdentityRecord>,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            config: None,
            records: Vec::new(),
            passed: true,
            notes: Vec::new(),
            version: crate::VERSION.to_string(),
            timestamp: None,
        }
    }

    pub fn push(&mut self, record: IdentityRecord) {
        self.passed &= record.passed;
        self.records.push(record);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Appends another report's records and notes, prefixing record ids
    /// with the other suite's name.
    pub fn absorb(&mut self, other: VerificationReport) {
        for mut r in other.records {
            r.id = format!("{}/{}", other.suite, r.id);
            self.push(r);
        }
        self.notes.extend(other.notes);
    }

    pub fn max_residual(&self) -> f64 {
        self.records
            .iter()
            .filter(|r| !r.expect_violation)
            .map(|r| r.max_residual)
            .fold(0.0, f64::max)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityRecord> {
        self.records.iter().filter(|r| !r.passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_flag_tracks_records() {
        let mut r = VerificationReport::new("t");
        r.push(IdentityRecord::holds("a", 1e-12, 10, 1e-9));
        assert!(r.passed);
        r.push(IdentityRecord::violated("b", 0.5, 10, 0.1));
        assert!(r.passed);
        r.push(IdentityRecord::holds("c", 1e-3, 10, 1e-9));
        assert!(!r.passed);
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::default().validate().is_ok());
        let cfg = RunConfig {
            samples: 0,
            ..RunConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = RunConfig {
            tol: 0.0,
            ..RunConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
