use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::PiecewiseForm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Match,
    Mismatch,
    RegionMismatch,
    NotApplicable,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Match => "match",
            Verdict::Mismatch => "mismatch",
            Verdict::RegionMismatch => "region-mismatch",
            Verdict::NotApplicable => "not-applicable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericSample {
    pub p: i64,
    pub q: i64,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_diff: f64,
}

impl NumericSample {
    pub fn new(p: i64, q: i64, lhs: f64, rhs: f64) -> Self {
        NumericSample { p, q, lhs, rhs, abs_diff: (lhs - rhs).abs() }
    }
}

fn form_as_text<S: Serializer>(form: &Option<PiecewiseForm>, s: S) -> Result<S::Ok, S::Error> {
    match form {
        Some(f) => s.serialize_str(&f.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub check_id: String,
    pub family: String,
    pub verdict: Verdict,
    /// Derived minus stated, region by region.
    #[serde(serialize_with = "form_as_text", skip_serializing_if = "Option::is_none")]
    pub symbolic_difference: Option<PiecewiseForm>,
    pub numeric_samples: Vec<NumericSample>,
    pub note: String,
}

impl Finding {
    pub fn new(check_id: impl Into<String>, family: impl Into<String>, verdict: Verdict) -> Self {
        Finding {
            check_id: check_id.into(),
            family: family.into(),
            verdict,
            symbolic_difference: None,
            numeric_samples: Vec::new(),
            note: String::new(),
        }
    }

    pub fn max_abs_diff(&self) -> Option<f64> {
        self.numeric_samples.iter().map(|s| s.abs_diff).reduce(f64::max)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Summary {
    pub total: usize,
    #[serde(rename = "match")]
    pub matches: usize,
    pub mismatch: usize,
    pub region_mismatch: usize,
    pub not_applicable: usize,
}

impl Summary {
    pub fn of(findings: &[Finding]) -> Self {
        let mut s = Summary { total: findings.len(), ..Summary::default() };
        for f in findings {
            match f.verdict {
                Verdict::Match => s.matches += 1,
                Verdict::Mismatch => s.mismatch += 1,
                Verdict::RegionMismatch => s.region_mismatch += 1,
                Verdict::NotApplicable => s.not_applicable += 1,
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub findings: Vec<Finding>,
    pub summary: Summary,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl AuditReport {
    /// Sorts findings by `(check_id, family)` and tallies verdicts.
    pub fn new(mut findings: Vec<Finding>, timestamp: Option<String>) -> Self {
        findings.sort_by(|a, b| (&a.check_id, &a.family).cmp(&(&b.check_id, &b.family)));
        AuditReport {
            summary: Summary::of(&findings),
            findings,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
        }
    }

    pub fn all_match(&self) -> bool {
        self.findings.iter().all(|f| f.verdict == Verdict::Match)
    }

    pub fn find(&self, check_id: &str, family: &str) -> Option<&Finding> {
        self.findings.iter().find(|f| f.check_id == check_id && f.family == family)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# Audit report\n");
        let _ = writeln!(out, "tool version {}", self.tool_version);
        if let Some(ts) = &self.timestamp {
            let _ = writeln!(out, "generated {ts}");
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "\n{} findings: {} match, {} mismatch, {} region-mismatch, {} not-applicable\n",
            s.total, s.matches, s.mismatch, s.region_mismatch, s.not_applicable
        );
        out.push_str("| check | family | verdict | symbolic difference | max abs diff | note |\n");
        out.push_str("|---|---|---|---|---|---|\n");
        for f in &self.findings {
            let diff = f.symbolic_difference.as_ref().map(|d| d.to_string()).unwrap_or_default();
            let max = f.max_abs_diff().map(|d| format!("{d:.3e}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} |",
                f.check_id,
                f.family,
                f.verdict.label(),
                md_escape(&diff),
                max,
                md_escape(&f.note)
            );
        }
        out
    }

    /// One row per (finding, sample); findings without samples get one row
    /// with empty sample columns.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record([
                "check_id",
                "family",
                "verdict",
                "symbolic_difference",
                "note",
                "p",
                "q",
                "lhs",
                "rhs",
                "abs_diff",
            ])
            .expect("in-memory write");
        for f in &self.findings {
            let diff = f.symbolic_difference.as_ref().map(|d| d.to_string()).unwrap_or_default();
            let head = [f.check_id.as_str(), f.family.as_str(), f.verdict.label(), diff.as_str(), f.note.as_str()];
            if f.numeric_samples.is_empty() {
                let mut row: Vec<String> = head.iter().map(|s| s.to_string()).collect();
                row.extend(std::iter::repeat_n(String::new(), 5));
                writer.write_record(&row).expect("in-memory write");
            }
            for s in &f.numeric_samples {
                let mut row: Vec<String> = head.iter().map(|s| s.to_string()).collect();
                row.extend([
                    s.p.to_string(),
                    s.q.to_string(),
                    s.lhs.to_string(),
                    s.rhs.to_string(),
                    s.abs_diff.to_string(),
                ]);
                writer.write_record(&row).expect("in-memory write");
            }
        }
        String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8")
    }

    /// Compact human-readable listing.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in &self.findings {
            let _ = write!(out, "{:<20} {:<10} {}", f.check_id, f.family, f.verdict.label());
            if let Some(d) = &f.symbolic_difference {
                if !d.is_zero() {
                    let _ = write!(out, "  diff: {d}");
                }
            }
            if !f.note.is_empty() {
                let _ = write!(out, "  ({})", f.note);
            }
            out.push('\n');
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{} findings: {} match, {} mismatch, {} region-mismatch, {} not-applicable",
            s.total, s.matches, s.mismatch, s.region_mismatch, s.not_applicable
        );
        out
    }
}

fn md_escape(text: &str) -> String {
    text.replace('|', "\\|").replace('\n', " ")
}
