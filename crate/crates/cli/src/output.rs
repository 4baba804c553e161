//! Self-describing CSV and JSON output.
//!
//! CSV files start with `#` comment lines holding the command, the full
//! resolved configuration (as TOML) and scalar results, followed by one
//! table. Floating-point cells use 17 significant digits. JSON files carry
//! the same content as `{command, config, results, data}`.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::Format;
use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Flag(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Flag(b) => u8::from(*b).to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn comment(&self) -> String {
        match self {
            // shortest round-trip form, in scientific notation when tiny or huge
            Cell::Num(x) if *x != 0.0 && x.is_finite() && !(1e-4..1e16).contains(&x.abs()) => format!("{x:e}"),
            Cell::Num(x) => x.to_string(),
            other => other.csv(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => Value::from(*x),
            Cell::Int(n) => Value::from(*n),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Flag(b) => Value::from(*b),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Flag(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Everything one command produces.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: &'static str,
    pub results: Vec<(String, Cell)>,
    pub table: Table,
}

impl Report {
    pub fn new(command: &'static str, table: Table) -> Self {
        Self { command, results: Vec::new(), table }
    }

    pub fn result(&mut self, key: &str, value: impl Into<Cell>) {
        self.results.push((key.to_string(), value.into()));
    }

    pub fn render(&self, config: &impl Serialize, config_toml: &str, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(config_toml),
            Format::Json => self.render_json(config),
        }
    }

    fn render_csv(&self, config_toml: &str) -> String {
        let mut out = format!("# tcopo {}\n# [config]\n", self.command);
        for line in config_toml.lines() {
            out.push_str(&format!("# {line}\n").replace("# \n", "#\n"));
        }
        out.push_str("# [results]\n");
        for (k, v) in &self.results {
            out.push_str(&format!("# {k} = {}\n", v.comment()));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.table.columns).expect("writing to memory");
        for row in &self.table.rows {
            w.write_record(row.iter().map(Cell::csv)).expect("writing to memory");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("writing to memory")).expect("cells are UTF-8"));
        out
    }

    fn render_json(&self, config: &impl Serialize) -> String {
        let results: Map<String, Value> = self.results.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        let data: Vec<Value> = self
            .table
            .rows
            .iter()
            .map(|row| Value::Object(self.table.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect()))
            .collect();
        let doc = serde_json::json!({
            "command": self.command,
            "config": config,
            "results": results,
            "data": data,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
        s.push('\n');
        s
    }
}

/// Writes `text` to `path`, or to standard output when `path` is `None`.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut t = Table::new(["omega", "value", "flag"]);
        t.push(vec![Cell::Num(0.1), Cell::Num(1.0 / 3.0), Cell::Flag(true)]);
        t.push(vec![Cell::Num(-2.0), Cell::Empty, Cell::Flag(false)]);
        let mut r = Report::new("demo", t);
        r.result("threshold", 500.0);
        r.result("branch", "below-threshold");
        r
    }

    #[test]
    fn csv_is_self_describing_with_full_precision() {
        let s = sample().render(&(), "ratio = 0.9\n\n[omega]\nmin = -6.0", Format::Csv);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "# tcopo demo");
        assert!(lines.contains(&"# ratio = 0.9"));
        assert!(lines.contains(&"#"));
        assert!(lines.contains(&"# threshold = 500"));
        assert!(lines.contains(&"# branch = below-threshold"));
        assert!(lines.contains(&"omega,value,flag"));
        assert!(lines.contains(&"1.0000000000000001e-1,3.3333333333333331e-1,1"));
        assert!(lines.contains(&"-2.0000000000000000e0,,0"));
        // 17 significant digits survive a round trip
        let x: f64 = "3.3333333333333331e-1".parse().unwrap();
        assert_eq!(x, 1.0 / 3.0);
    }

    #[test]
    fn json_has_config_results_and_rows() {
        #[derive(Serialize)]
        struct C {
            ratio: f64,
        }
        let s = sample().render(&C { ratio: 0.9 }, "", Format::Json);
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["command"], "demo");
        assert_eq!(v["config"]["ratio"], 0.9);
        assert_eq!(v["results"]["threshold"], 500.0);
        assert_eq!(v["data"][0]["value"], 1.0 / 3.0);
        assert_eq!(v["data"][1]["value"], Value::Null);
        assert_eq!(v["data"][0]["flag"], true);
        let keys: Vec<&String> = v["data"][0].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["omega", "value", "flag"]);
    }
}
