//! Deterministic numeric and row formatting.
//!
//! Numbers print with 17 significant digits in exponent notation, `.` as the
//! decimal separator and `,` as the field separator, independent of locale;
//! lines end with `\n`. Re-running the same request must give byte-identical
//! output.

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    #[value(name = "json-lines")]
    JsonLines,
}

/// 17 significant digits, exponent notation.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

/// One output cell: a number, a bare string, or empty.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn csv(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    pub fn json(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Text(s) => format!("\"{s}\""),
            Cell::Empty => "null".to_string(),
        }
    }
}

pub fn csv_line(cells: &[Cell]) -> String {
    let mut line = String::new();
    for (i, c) in cells.iter().enumerate() {
        if i > 0 {
            line.push(',');
        }
        line.push_str(&c.csv());
    }
    line.push('\n');
    line
}

pub fn json_line(keys: &[String], cells: &[Cell]) -> String {
    let mut line = String::from("{");
    for (i, (k, c)) in keys.iter().zip(cells).enumerate() {
        if i > 0 {
            line.push(',');
        }
        line.push('"');
        line.push_str(k);
        line.push_str("\":");
        line.push_str(&c.json());
    }
    line.push_str("}\n");
    line
}
