use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

/// One named result: a value (absent when undefined), its bound, the verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metric {
    pub value: Option<f64>,
    pub bound: Option<f64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Metric {
    /// Passes when `value <= bound`.
    pub fn upper(value: f64, bound: f64) -> Self {
        Metric {
            value: Some(value),
            bound: Some(bound),
            pass: value.is_finite() && value <= bound,
            note: None,
        }
    }

    /// Passes when `value >= bound`.
    pub fn lower(value: f64, bound: f64) -> Self {
        Metric {
            value: Some(value),
            bound: Some(bound),
            pass: value.is_finite() && value >= bound,
            note: None,
        }
    }

    pub fn flag(pass: bool) -> Self {
        Metric {
            value: Some(if pass { 1.0 } else { 0.0 }),
            bound: None,
            pass,
            note: None,
        }
    }

    /// Reported only; never fails.
    pub fn info(value: Option<f64>) -> Self {
        Metric {
            value,
            bound: None,
            pass: true,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Rows of numbers under a header; `None` cells print as empty.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| c.map(|v| format!("{v:?}")).unwrap_or_default())
                .collect();
            writeln!(s, "{}", cells.join(",")).expect("write to string");
        }
        s
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct EstimateReport {
    pub metrics: BTreeMap<String, Metric>,
    pub tables: Vec<Table>,
    pub provenance: BTreeMap<String, String>,
}

impl EstimateReport {
    pub fn insert(&mut self, name: impl Into<String>, metric: Metric) {
        self.metrics.insert(name.into(), metric);
    }

    pub fn merge(&mut self, other: EstimateReport) {
        self.metrics.extend(other.metrics);
        self.tables.extend(other.tables);
        self.provenance.extend(other.provenance);
    }

    pub fn all_pass(&self) -> bool {
        self.metrics.values().all(|m| m.pass)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.metrics
            .iter()
            .filter(|(_, m)| !m.pass)
            .map(|(k, _)| k.as_str())
            .collect()
    }
}
