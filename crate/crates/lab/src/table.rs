//! Tables and their CSV form.

use std::fmt::Write as _;
use std::path::Path;

use crate::{LabError, LabResult};

pub const SCHEMA_LINE: &str = "# distcc-lab schema v1";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    pub fn opt(v: Option<f64>) -> Cell {
        v.map_or(Cell::Empty, Cell::Num)
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Num(v) => Some(v),
            Cell::Int(v) => Some(v as f64),
            _ => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(v) if !v.is_finite() => String::new(),
            Cell::Num(v) if *v != 0.0 && v.abs() < 1e-4 => format!("{v:.9e}"),
            Cell::Num(v) => format!("{v:.12}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => quote(s),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
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

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width differs from header of '{}'", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn cell(&self, row: usize, name: &str) -> Option<&Cell> {
        self.column(name).and_then(|c| self.rows.get(row).map(|r| &r[c]))
    }

    pub fn num(&self, row: usize, name: &str) -> Option<f64> {
        self.cell(row, name).and_then(Cell::as_f64)
    }

    pub fn text(&self, row: usize, name: &str) -> Option<&str> {
        match self.cell(row, name) {
            Some(Cell::Text(s)) => Some(s),
            _ => None,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{SCHEMA_LINE}").unwrap();
        writeln!(out, "{}", self.columns.iter().map(|c| quote(c)).collect::<Vec<_>>().join(",")).unwrap();
        for row in &self.rows {
            writeln!(out, "{}", row.iter().map(Cell::render).collect::<Vec<_>>().join(",")).unwrap();
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> LabResult<()> {
        std::fs::write(path, self.to_csv()).map_err(|source| LabError::Io { path: path.to_path_buf(), source })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new("demo", &["S", "label", "ok", "n"]);
        t.push(vec![0.5.into(), "a,b".into(), true.into(), 3usize.into()]);
        t.push(vec![Cell::Empty, "plain".into(), false.into(), Cell::Num(1e-7)]);
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SCHEMA_LINE);
        assert_eq!(lines[1], "S,label,ok,n");
        assert_eq!(lines[2], "0.500000000000,\"a,b\",true,3");
        assert_eq!(lines[3], ",plain,false,1.000000000e-7");
        assert_eq!(t.num(0, "S"), Some(0.5));
        assert_eq!(t.text(1, "label"), Some("plain"));
    }
}
