//! Sweep output: a row-major table with a status column, written as CSV or JSON.

use std::io::Write;

use serde_json::{json, Map, Value};

use crate::error::Result;

/// Outcome of one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Unstable,
    Singular,
    /// Analytic and oracle results disagree beyond the tolerance.
    Mismatch,
    CutoffTooSmall,
    NotConverged,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Unstable => "unstable",
            Status::Singular => "singular",
            Status::Mismatch => "mismatch",
            Status::CutoffTooSmall => "cutoff_too_small",
            Status::NotConverged => "not_converged",
            Status::Error => "error",
        }
    }
}

/// One output record; `None` marks a field left empty (only on non-OK rows).
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub values: Vec<Option<f64>>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    /// Value columns; a final `status` column is implied.
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
    /// Ordered `key = value` header lines.
    pub metadata: Vec<(String, String)>,
    /// Creation time (RFC 3339); the only nondeterministic part of the output.
    pub timestamp: String,
}

impl SweepTable {
    pub fn new(columns: Vec<String>) -> Self {
        Self { columns, rows: Vec::new(), metadata: Vec::new(), timestamp: chrono::Utc::now().to_rfc3339() }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of one column (`None` where empty).
    pub fn values(&self, name: &str) -> Vec<Option<f64>> {
        let k = self.column(name).unwrap_or_else(|| panic!("no column `{name}`"));
        self.rows.iter().map(|r| r.values[k]).collect()
    }

    pub fn count(&self, status: Status) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }

    pub fn write_csv(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "# timestamp = {}", self.timestamp)?;
        for (k, v) in &self.metadata {
            writeln!(w, "# {k} = {v}")?;
        }
        writeln!(w, "{},status", self.columns.join(","))?;
        for row in &self.rows {
            for v in &row.values {
                if let Some(x) = v {
                    write!(w, "{}", format_number(*x))?;
                }
                write!(w, ",")?;
            }
            writeln!(w, "{}", row.status.as_str())?;
        }
        Ok(())
    }

    pub fn write_json(&self, w: &mut impl Write) -> Result<()> {
        let meta: Map<String, Value> = std::iter::once(("timestamp".to_string(), json!(self.timestamp)))
            .chain(self.metadata.iter().map(|(k, v)| (k.clone(), json!(v))))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m: Map<String, Value> = self.columns.iter().cloned().zip(r.values.iter().map(|v| json!(v))).collect();
                m.insert("status".into(), json!(r.status.as_str()));
                Value::Object(m)
            })
            .collect();
        let mut columns = self.columns.clone();
        columns.push("status".into());
        serde_json::to_writer_pretty(&mut *w, &json!({ "metadata": meta, "columns": columns, "rows": rows }))?;
        writeln!(w)?;
        Ok(())
    }
}

/// Shortest round-trip decimal; exponent notation outside `[1e-5, 1e16)`.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".into()
    } else if (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
