//! Structured experiment reports and their serialized forms.
//!
//! One report per check: a statistic, its uncertainty, a target with a
//! tolerance, and a verdict that is recomputable from those fields alone.
//! Serialization is JSON Lines (one report per line) plus a summary object;
//! wall-clock runtime is kept in memory for human output but excluded from
//! the serialized forms, which must be byte-identical across reruns.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// How the verdict is derived from `(statistic, target, tolerance)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// pass iff `|statistic - target| <= tolerance`
    AbsDiff,
    /// pass iff `statistic <= tolerance` (distance-type checks)
    Upper,
    /// pass iff `statistic >= tolerance` (p-value-type checks)
    Lower,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub master_seed: u64,
    pub stream: u64,
    pub replicates: u64,
    /// path/tree sizes used (meaning per experiment, fixed order)
    pub sizes: Vec<u64>,
    pub alpha: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub kind: CheckKind,
    pub statistic: f64,
    pub uncertainty: f64,
    pub target: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub provenance: Provenance,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub runtime_secs: f64,
}

impl ExperimentReport {
    pub fn new(
        name: impl Into<String>,
        kind: CheckKind,
        statistic: f64,
        uncertainty: f64,
        target: f64,
        tolerance: f64,
        provenance: Provenance,
    ) -> Self {
        let verdict = Self::evaluate(kind, statistic, target, tolerance);
        Self {
            name: name.into(),
            kind,
            statistic,
            uncertainty,
            target,
            tolerance,
            verdict,
            provenance,
            notes: Vec::new(),
            runtime_secs: 0.0,
        }
    }

    pub fn evaluate(kind: CheckKind, statistic: f64, target: f64, tolerance: f64) -> Verdict {
        let pass = match kind {
            CheckKind::AbsDiff => (statistic - target).abs() <= tolerance,
            CheckKind::Upper => statistic <= tolerance,
            CheckKind::Lower => statistic >= tolerance,
        };
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// JSON Lines form: one report per line, trailing newline.
pub fn to_jsonl(reports: &[ExperimentReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r).expect("report serialization"));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct Summary<'a> {
    version: &'a str,
    config_hash: &'a str,
    master_seed: u64,
    all_pass: bool,
    experiments: &'a [ExperimentReport],
}

/// Summary object wrapping all reports with run identity fields.
pub fn summary_json(
    reports: &[ExperimentReport],
    version: &str,
    config_hash: &str,
    master_seed: u64,
) -> String {
    let s = Summary {
        version,
        config_hash,
        master_seed,
        all_pass: reports.iter().all(ExperimentReport::passed),
        experiments: reports,
    };
    serde_json::to_string_pretty(&s).expect("summary serialization")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prov() -> Provenance {
        Provenance {
            master_seed: 0,
            stream: 0,
            replicates: 10,
            sizes: vec![100],
            alpha: 2.0,
            c: 1.0,
        }
    }

    #[test]
    fn verdict_recomputable_from_fields() {
        let r = ExperimentReport::new("x", CheckKind::AbsDiff, 1.05, 0.01, 1.0, 0.1, prov());
        assert!(r.passed());
        assert_eq!(
            ExperimentReport::evaluate(r.kind, r.statistic, r.target, r.tolerance),
            r.verdict
        );
        let r = ExperimentReport::new("x", CheckKind::Upper, 0.05, 0.0, 0.0, 0.01, prov());
        assert!(!r.passed());
        let r = ExperimentReport::new("x", CheckKind::Lower, 0.05, 0.0, 0.01, 0.01, prov());
        assert!(r.passed());
    }

    #[test]
    fn jsonl_excludes_runtime_and_is_line_per_report() {
        let mut r = ExperimentReport::new("a", CheckKind::AbsDiff, 1.0, 0.0, 1.0, 0.1, prov());
        r.runtime_secs = 123.456;
        let text = to_jsonl(&[r.clone(), r]);
        assert_eq!(text.lines().count(), 2);
        assert!(!text.contains("runtime"));
        assert!(text.contains("\"verdict\":\"pass\""));
    }

    #[test]
    fn summary_reflects_failures() {
        let good = ExperimentReport::new("a", CheckKind::AbsDiff, 1.0, 0.0, 1.0, 0.1, prov());
        let bad = ExperimentReport::new("b", CheckKind::Upper, 1.0, 0.0, 0.0, 0.1, prov());
        let s = summary_json(&[good, bad], "0.1.0", "deadbeef", 7);
        assert!(s.contains("\"all_pass\": false"));
        assert!(s.contains("\"config_hash\": \"deadbeef\""));
    }
}
