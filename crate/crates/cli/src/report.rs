use serde::Serialize;
use serde_json::Value;

use crate::args::Format;
use crate::error::CliError;
use crate::TOOL_VERSION;

/// Machine-readable report. Object keys are emitted in sorted order, so the
/// JSON rendering is a pure function of the inputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEnvelope {
    pub command: String,
    pub tool_version: String,
    pub seed: Option<u64>,
    /// Effective configuration, defaults resolved.
    pub inputs: Value,
    pub results: Value,
}

impl ReportEnvelope {
    pub fn new(
        command: &str,
        seed: Option<u64>,
        inputs: &impl Serialize,
        results: &impl Serialize,
    ) -> Result<Self, CliError> {
        Ok(Self {
            command: command.into(),
            tool_version: TOOL_VERSION.into(),
            seed,
            inputs: to_value(inputs)?,
            results: to_value(results)?,
        })
    }
}

fn to_value(x: &impl Serialize) -> Result<Value, CliError> {
    serde_json::to_value(x).map_err(|e| CliError::Render(e.to_string()))
}

/// A report with its human-readable and CSV renderings.
#[derive(Debug, Clone)]
pub struct Output {
    pub envelope: ReportEnvelope,
    pub table: String,
    pub csv_header: Vec<String>,
    pub csv_rows: Vec<Vec<String>>,
}

impl Output {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.envelope)
                    .map_err(|e| CliError::Render(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Table => Ok(self.table.clone()),
            Format::Csv => csv_text(&self.csv_header, &self.csv_rows),
        }
    }
}

fn csv_text(header: &[String], rows: &[Vec<String>]) -> Result<String, CliError> {
    let render = |e: csv::Error| CliError::Render(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(render)?;
    for r in rows {
        w.write_record(r).map_err(render)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Render(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Render(e.to_string()))
}

/// Same digits as the JSON rendering.
pub fn num(x: f64) -> String {
    serde_json::to_string(&x).unwrap_or_else(|_| "null".into())
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// The serialized name of an enum variant, e.g. `UNIQUE_PROVEN`.
pub fn tag(x: &impl Serialize) -> String {
    match serde_json::to_value(x) {
        Ok(Value::String(s)) => s,
        Ok(v) => v.to_string(),
        Err(_) => String::new(),
    }
}

/// `1..=7` style summary of an ascending rank set.
pub fn ranges(set: &[usize]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < set.len() {
        let mut j = i;
        while j + 1 < set.len() && set[j + 1] == set[j] + 1 {
            j += 1;
        }
        parts.push(if i == j {
            set[i].to_string()
        } else {
            format!("{}-{}", set[i], set[j])
        });
        i = j + 1;
    }
    if parts.is_empty() {
        "-".into()
    } else {
        parts.join(",")
    }
}

/// Left-aligned plain-text table.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    out += &line(rule.iter().map(String::as_str).collect());
    for r in rows {
        out += &line(r.iter().map(String::as_str).collect());
    }
    out
}
