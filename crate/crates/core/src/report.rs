//! Check reports and trace tables, serializable to JSON and CSV.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::types::ModelConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One named check. `status` is `Pass` iff `margin ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub label: String,
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
    pub status: Status,
}

impl ReportRow {
    fn with_margin(label: impl Into<String>, value: f64, bound: f64, margin: f64) -> Self {
        let status = if margin >= 0.0 {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            label: label.into(),
            value,
            bound,
            margin,
            status,
        }
    }

    /// `value ≤ bound`.
    pub fn at_most(label: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::with_margin(label, value, bound, bound - value)
    }

    /// `value ≥ bound`.
    pub fn at_least(label: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::with_margin(label, value, bound, value - bound)
    }

    /// `value > bound`; equality fails.
    pub fn above(label: impl Into<String>, value: f64, bound: f64) -> Self {
        let margin = if value > bound {
            value - bound
        } else {
            (value - bound).min(-f64::MIN_POSITIVE)
        };
        Self::with_margin(label, value, bound, margin)
    }

    /// `|value − target| ≤ tol`; `bound` records the tolerance.
    pub fn within(label: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        Self::with_margin(label, value, tol, tol - (value - target).abs())
    }

    /// A boolean check recorded as `1`/`0` against bound `1`.
    pub fn holds(label: impl Into<String>, ok: bool) -> Self {
        let value = if ok { 1.0 } else { 0.0 };
        Self::with_margin(label, value, 1.0, value - 1.0)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Model parameters echoed into every report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSnapshot {
    pub dim: usize,
    pub p: f64,
    pub tol: f64,
    pub seed: u64,
}

impl From<&ModelConfig> for ModelSnapshot {
    fn from(c: &ModelConfig) -> Self {
        Self {
            dim: c.dim,
            p: c.p,
            tol: c.gauge_tol,
            seed: c.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    #[serde(rename = "suite")]
    pub name: String,
    pub model: ModelSnapshot,
    pub rows: Vec<ReportRow>,
}

impl ProbeReport {
    pub fn new(name: impl Into<String>, model: ModelSnapshot) -> Self {
        Self {
            name: name.into(),
            model,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: ReportRow) {
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: ProbeReport) {
        self.rows.extend(other.rows);
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(ReportRow::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| !r.passed())
    }

    pub fn row(&self, label: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    /// `{suite, model, rows, runtime_ms, timestamp}`.
    pub fn to_json(&self, runtime_ms: u128, timestamp: u64) -> String {
        #[derive(Serialize)]
        struct Envelope<'a> {
            suite: &'a str,
            model: &'a ModelSnapshot,
            rows: &'a [ReportRow],
            runtime_ms: u128,
            timestamp: u64,
        }
        serde_json::to_string_pretty(&Envelope {
            suite: &self.name,
            model: &self.model,
            rows: &self.rows,
            runtime_ms,
            timestamp,
        })
        .expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,value,bound,margin,status\n");
        for r in &self.rows {
            let status = match r.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                csv_field(&r.label),
                r.value,
                r.bound,
                r.margin,
                status
            );
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Numeric trace: a header and one row per index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_tracks_margin() {
        assert!(ReportRow::at_most("a", 1.0, 2.0).passed());
        assert!(!ReportRow::at_most("a", 3.0, 2.0).passed());
        assert!(ReportRow::at_least("b", 2.0, 2.0).passed());
        assert!(!ReportRow::above("c", 0.0, 0.0).passed());
        assert!(ReportRow::above("c", 1e-300, 0.0).passed());
        assert!(ReportRow::within("d", 1.0 + 1e-7, 1.0, 1e-6).passed());
        assert!(!ReportRow::holds("e", false).passed());
    }

    #[test]
    fn json_envelope_fields() {
        let mut r = ProbeReport::new("demo", (&ModelConfig::default()).into());
        r.push(ReportRow::at_most("x", 0.5, 1.0));
        let v: serde_json::Value = serde_json::from_str(&r.to_json(3, 42)).unwrap();
        assert_eq!(v["suite"], "demo");
        assert_eq!(v["model"]["dim"], 64);
        assert_eq!(v["rows"][0]["status"], "pass");
        assert_eq!(v["runtime_ms"], 3);
        assert_eq!(v["timestamp"], 42);
    }

    #[test]
    fn csv_quotes_labels() {
        let mut r = ProbeReport::new("demo", (&ModelConfig::default()).into());
        r.push(ReportRow::at_most("a,b", 0.5, 1.0));
        assert!(r
            .to_csv()
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("\"a,b\",0.5,1,0.5,pass"));
    }
}
