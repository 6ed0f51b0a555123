//! Rectangular result tables with CSV and JSON output.

use std::collections::BTreeMap;

use serde_json::{json, Value as Json};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    Int,
    Real,
    Text,
    Bool,
}

impl ColumnKind {
    fn name(self) -> &'static str {
        match self {
            ColumnKind::Int => "int",
            ColumnKind::Real => "real",
            ColumnKind::Text => "text",
            ColumnKind::Bool => "bool",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn kind(&self) -> ColumnKind {
        match self {
            Cell::Int(_) => ColumnKind::Int,
            Cell::Real(_) => ColumnKind::Real,
            Cell::Text(_) => ColumnKind::Text,
            Cell::Bool(_) => ColumnKind::Bool,
        }
    }

    /// Reals use 17 significant digits so they round-trip exactly.
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) if v.is_nan() => "NaN".into(),
            Cell::Real(v) if v.is_infinite() => if *v > 0.0 { "inf" } else { "-inf" }.into(),
            Cell::Real(v) => format!("{v:.16e}"),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n', '\r']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Real(v) if v.is_finite() => json!(v),
            Cell::Real(_) => Json::Null,
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }

    pub fn as_real(&self) -> Option<f64> {
        match *self {
            Cell::Real(v) => Some(v),
            Cell::Int(v) => Some(v as f64),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        Cell::Real(v.unwrap_or(f64::NAN))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryTable {
    columns: Vec<(String, ColumnKind)>,
    rows: Vec<Vec<Cell>>,
    /// Config echo, version and generator; always present in output.
    pub metadata: BTreeMap<String, Json>,
}

impl SummaryTable {
    pub fn new(columns: &[(&str, ColumnKind)]) -> Self {
        let mut metadata = BTreeMap::new();
        metadata.insert("version".to_string(), json!(env!("CARGO_PKG_VERSION")));
        metadata.insert("rng".to_string(), json!(crate::rng::RNG_ALGORITHM));
        SummaryTable { columns: columns.iter().map(|&(n, k)| (n.to_string(), k)).collect(), rows: Vec::new(), metadata }
    }

    pub fn columns(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(n, _)| n.as_str())
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    /// Panics when the row does not match the column types; rows are built
    /// by the experiment code, so a mismatch is a bug.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        for (cell, (name, kind)) in row.iter().zip(&self.columns) {
            assert_eq!(cell.kind(), *kind, "column {name}");
        }
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|(n, _)| n == name)
    }

    /// Values of a numeric column.
    pub fn reals(&self, name: &str) -> Vec<f64> {
        let Some(i) = self.column_index(name) else { return Vec::new() };
        self.rows.iter().filter_map(|r| r[i].as_real()).collect()
    }

    pub fn set_meta(&mut self, key: &str, value: impl serde::Serialize) {
        self.metadata.insert(key.to_string(), serde_json::to_value(value).expect("metadata serialises"));
    }

    /// RFC 4180 with LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>().join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    pub fn metadata_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.metadata).expect("metadata serialises");
        s.push('\n');
        s
    }

    pub fn to_json(&self) -> String {
        let columns: Vec<Json> = self.columns.iter().map(|(n, k)| json!({"name": n, "type": k.name()})).collect();
        let rows: Vec<Json> = self.rows.iter().map(|r| Json::Array(r.iter().map(Cell::json).collect())).collect();
        let mut s = serde_json::to_string_pretty(&json!({"columns": columns, "rows": rows, "metadata": self.metadata}))
            .expect("table serialises");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_dialect() {
        let mut t = SummaryTable::new(&[("n", ColumnKind::Int), ("x", ColumnKind::Real), ("s", ColumnKind::Text)]);
        t.push(vec![10u32.into(), 0.1.into(), "a,b".into()]);
        t.push(vec![20u32.into(), f64::NAN.into(), "say \"hi\"".into()]);
        assert_eq!(t.to_csv(), "n,x,s\n10,1.0000000000000001e-1,\"a,b\"\n20,NaN,\"say \"\"hi\"\"\"\n");
        let back: f64 = "1.0000000000000001e-1".parse().unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn json_has_metadata() {
        let mut t = SummaryTable::new(&[("ok", ColumnKind::Bool)]);
        t.push(vec![true.into()]);
        t.set_meta("experiment", "stats");
        let v: Json = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["rows"][0][0], json!(true));
        assert_eq!(v["metadata"]["experiment"], json!("stats"));
        assert!(v["metadata"]["rng"].as_str().unwrap().contains("xoshiro"));
    }

    #[test]
    #[should_panic(expected = "column x")]
    fn rejects_mistyped_row() {
        let mut t = SummaryTable::new(&[("x", ColumnKind::Real)]);
        t.push(vec![1u32.into()]);
    }
}
