//! Tabular reports rendered as CSV, JSON or aligned text.
//!
//! Floats are printed like C's `%.6e`, so identical runs give identical bytes.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format {s:?} (csv, json, text)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
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

/// `%.6e`: six mantissa digits, signed exponent of at least two digits.
pub fn sci(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.6e}");
    let (mant, exp) = s.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", exp.abs())
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => sci(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            // round-trip through the printed form so JSON and CSV agree
            Cell::Float(v) => sci(*v)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width in table {}",
            self.name
        );
        self.rows.push(row);
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders tables in order. CSV and text put a `# name` line before each
/// table and a blank line between tables.
pub fn render(tables: &[Table], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::new();
            for (i, t) in tables.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let _ = writeln!(out, "# {}", t.name);
                let head: Vec<String> = t.columns.iter().map(|c| csv_field(c)).collect();
                let _ = writeln!(out, "{}", head.join(","));
                for r in &t.rows {
                    let cells: Vec<String> = r.iter().map(|c| csv_field(&c.render())).collect();
                    let _ = writeln!(out, "{}", cells.join(","));
                }
            }
            out
        }
        Format::Json => {
            let mut root = Map::new();
            for t in tables {
                let rows: Vec<Value> = t
                    .rows
                    .iter()
                    .map(|r| {
                        let mut obj = Map::new();
                        for (c, v) in t.columns.iter().zip(r) {
                            obj.insert(c.clone(), v.json());
                        }
                        Value::Object(obj)
                    })
                    .collect();
                root.insert(t.name.clone(), Value::Array(rows));
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("serializable");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            for (i, t) in tables.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let cells: Vec<Vec<String>> = t
                    .rows
                    .iter()
                    .map(|r| r.iter().map(Cell::render).collect())
                    .collect();
                let widths: Vec<usize> = (0..t.columns.len())
                    .map(|j| {
                        cells
                            .iter()
                            .map(|r| r[j].chars().count())
                            .chain([t.columns[j].chars().count()])
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                let line = |fields: &[String]| {
                    let padded: Vec<String> = fields
                        .iter()
                        .zip(&widths)
                        .map(|(f, &w)| format!("{f:>w$}"))
                        .collect();
                    padded.join("  ").trim_end().to_string()
                };
                let _ = writeln!(out, "# {}", t.name);
                let _ = writeln!(out, "{}", line(&t.columns));
                for r in &cells {
                    let _ = writeln!(out, "{}", line(r));
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_style_exponent() {
        assert_eq!(sci(1.0), "1.000000e+00");
        assert_eq!(sci(-0.00123456789), "-1.234568e-03");
        assert_eq!(sci(6.02e23), "6.020000e+23");
        assert_eq!(sci(1e-100), "1.000000e-100");
        assert_eq!(sci(0.0), "0.000000e+00");
    }

    fn sample() -> Vec<Table> {
        let mut t = Table::new("modes", &["mode", "value", "note"]);
        t.push(vec![1usize.into(), 2.5.into(), "a,b".into()]);
        t.push(vec![2usize.into(), (-1e-9).into(), true.into()]);
        vec![t]
    }

    #[test]
    fn csv_quotes_commas() {
        let s = render(&sample(), Format::Csv);
        assert_eq!(
            s,
            "# modes\nmode,value,note\n1,2.500000e+00,\"a,b\"\n2,-1.000000e-09,true\n"
        );
    }

    #[test]
    fn json_matches_csv_rounding() {
        let v: Value = serde_json::from_str(&render(&sample(), Format::Json)).unwrap();
        assert_eq!(v["modes"][0]["value"], 2.5);
        assert_eq!(v["modes"][1]["mode"], 2);
        assert_eq!(v["modes"][0]["note"], "a,b");
    }

    #[test]
    fn text_is_aligned() {
        let s = render(&sample(), Format::Text);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1].len(), lines[2].len());
    }

    #[test]
    fn format_names() {
        assert_eq!("json".parse::<Format>(), Ok(Format::Json));
        assert!("xml".parse::<Format>().is_err());
    }
}
