use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub const TOOL: &str = "tfu";

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Number(f64),
    Text(String),
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Number(x) => Some(*x),
            Value::Text(_) => None,
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Number(x) => write!(f, "{x}"),
            Value::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub label: String,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ordering: Option<String>,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub input: serde_json::Value,
    pub quantities: Vec<Quantity>,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str, tolerance: f64) -> Self {
        Report {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            mode: None,
            seed: None,
            ordering: None,
            tolerance,
            input: serde_json::Value::Null,
            quantities: Vec::new(),
            checks: Vec::new(),
            witness: None,
            passed: true,
        }
    }

    pub fn number(&mut self, label: impl Into<String>, value: f64) {
        self.quantities.push(Quantity { label: label.into(), value: Value::Number(round12(value)) });
    }

    pub fn text(&mut self, label: impl Into<String>, value: impl Into<String>) {
        self.quantities.push(Quantity { label: label.into(), value: Value::Text(value.into()) });
    }

    pub fn check(&mut self, check: Check) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    pub fn quantity(&self, label: &str) -> Option<&Value> {
        self.quantities.iter().find(|q| q.label == label).map(|q| &q.value)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Structured => {
                let mut out = serde_json::to_string_pretty(self).expect("reports serialize");
                out.push('\n');
                out
            }
            Format::Csv => self.to_csv(),
            Format::Table => self.to_table(),
        }
    }

    /// One row per quantity and per check: `kind,label,value,detail`.
    fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let row = |w: &mut csv::Writer<Vec<u8>>, fields: [&str; 4]| w.write_record(fields).expect("in-memory write");
        row(&mut w, ["kind", "label", "value", "detail"]);
        for q in &self.quantities {
            row(&mut w, ["quantity", &q.label, &q.value.to_string(), ""]);
        }
        for c in &self.checks {
            let verdict = if c.passed { "pass" } else { "fail" };
            let detail = c.counterexample.clone().unwrap_or_else(|| format!("{} cases", c.cases));
            row(&mut w, ["check", &c.name, verdict, &detail]);
        }
        if let Some(witness) = &self.witness {
            row(&mut w, ["witness", "witness", &witness.to_string(), ""]);
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }

    fn to_table(&self) -> String {
        let mut out = String::new();
        let mut header = format!("{} {} {}", self.tool, self.version, self.command);
        if let Some(mode) = &self.mode {
            let _ = write!(header, " ({mode})");
        }
        if let Some(seed) = self.seed {
            let _ = write!(header, " seed={seed}");
        }
        if let Some(ordering) = &self.ordering {
            let _ = write!(header, " ordering={ordering}");
        }
        out.push_str(&header);
        out.push('\n');
        let width = self
            .quantities
            .iter()
            .map(|q| q.label.chars().count())
            .chain(self.checks.iter().map(|c| c.name.chars().count()))
            .max()
            .unwrap_or(0);
        let pad = |s: &str| format!("{s}{}", " ".repeat(width - s.chars().count()));
        for q in &self.quantities {
            let _ = writeln!(out, "  {}  {}", pad(&q.label), q.value);
        }
        for c in &self.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            let _ = write!(out, "  {}  {verdict} ({} cases)", pad(&c.name), c.cases);
            if let Some(cx) = &c.counterexample {
                let _ = write!(out, "  counterexample: {cx}");
            }
            out.push('\n');
        }
        if let Some(witness) = &self.witness {
            let _ = writeln!(out, "  witness: {witness}");
        }
        let _ = writeln!(out, "{}", if self.passed { "passed" } else { "FAILED" });
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Structured,
    Csv,
    Table,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "structured" | "json" => Ok(Format::Structured),
            "csv" => Ok(Format::Csv),
            "table" => Ok(Format::Table),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}
