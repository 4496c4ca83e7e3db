//! Deterministic CSV, JSON and plain-text tables.

use std::fmt::Write as _;

use rug::float::Round;
use rug::Float;
use serde_json::{json, Map, Value};

/// Most significant digits an `f64`-derived cell is printed with.
const F64_DIGITS: u32 = 15;

#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    Real(Float),
    /// A value known only to double precision.
    Approx(f64),
    Bool(bool),
    Text(String),
    Missing,
}

impl Cell {
    pub fn render(&self, digits: u32) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(x) => format_float(x, digits),
            Cell::Approx(v) => format_f64(*v, digits.min(F64_DIGITS)),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(t) => t.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn to_json(&self, digits: u32) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Bool(b) => json!(b),
            Cell::Missing => Value::Null,
            Cell::Text(t) => json!(t),
            Cell::Real(_) | Cell::Approx(_) => json!(self.render(digits)),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Approx(v)
    }
}

impl From<&Float> for Cell {
    fn from(v: &Float) -> Self {
        Cell::Real(v.clone())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Missing, Into::into)
    }
}

/// A result table plus scalar summary lines and provenance.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(&'static str, Cell)>,
    pub provenance: Value,
}

impl Table {
    pub fn new(columns: Vec<&'static str>, provenance: Value) -> Self {
        Table {
            columns,
            rows: Vec::new(),
            summary: Vec::new(),
            provenance,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &'static str, value: impl Into<Cell>) {
        self.summary.push((key, value.into()));
    }

    /// Summary lines as `# key=value` comments ahead of the header.
    pub fn to_csv(&self, digits: u32) -> String {
        let mut out = String::new();
        for (key, value) in &self.summary {
            let _ = writeln!(out, "# {key}={}", value.render(digits));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| csv_escape(&c.render(digits))).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, digits: u32) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (col, cell) in self.columns.iter().zip(row) {
                    m.insert((*col).to_string(), cell.to_json(digits));
                }
                Value::Object(m)
            })
            .collect();
        let mut summary = Map::new();
        for (key, value) in &self.summary {
            summary.insert((*key).to_string(), value.to_json(digits));
        }
        let doc = json!({
            "provenance": self.provenance,
            "summary": summary,
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_plain(&self, digits: u32) -> String {
        let rendered: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| row.iter().map(|c| c.render(digits)).collect())
            .collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| rendered.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        let line = |cells: Vec<&str>, out: &mut String| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}", w = *w))
                .collect();
            out.push_str(padded.join("  ").trim_end());
            out.push('\n');
        };
        line(self.columns.clone(), &mut out);
        for r in &rendered {
            line(r.iter().map(String::as_str).collect(), &mut out);
        }
        if !self.summary.is_empty() {
            out.push('\n');
            for (key, value) in &self.summary {
                let _ = writeln!(out, "{key}: {}", value.render(digits));
            }
        }
        out
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `digits` significant decimal digits, correctly rounded (ties to even)
/// from the exact binary value, trailing zeros dropped. Positional notation
/// for moderate magnitudes, otherwise `d.ddde±x`.
pub fn format_float(x: &Float, digits: u32) -> String {
    let digits = digits.max(1) as usize;
    let (negative, mantissa, exp) = x.to_sign_string_exp_round(10, Some(digits), Round::Nearest);
    let Some(exp) = exp else {
        return match mantissa.as_str() {
            "0" => "0".into(),
            "inf" if negative => "-inf".into(),
            other => other.into(),
        };
    };
    let mantissa = mantissa.trim_end_matches('0');
    let mantissa = if mantissa.is_empty() { "0" } else { mantissa };
    let sign = if negative { "-" } else { "" };
    // value = 0.mantissa × 10^exp
    let body = if (-4..=21).contains(&exp) {
        if exp <= 0 {
            format!("0.{}{}", "0".repeat((-exp) as usize), mantissa)
        } else {
            let e = exp as usize;
            if mantissa.len() <= e {
                format!("{}{}", mantissa, "0".repeat(e - mantissa.len()))
            } else {
                format!("{}.{}", &mantissa[..e], &mantissa[e..])
            }
        }
    } else {
        let (head, tail) = mantissa.split_at(1);
        let e = exp - 1;
        if tail.is_empty() {
            format!("{head}e{e:+}")
        } else {
            format!("{head}.{tail}e{e:+}")
        }
    };
    format!("{sign}{body}")
}

pub fn format_f64(v: f64, digits: u32) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    format_float(&Float::with_val(64, v), digits)
}
