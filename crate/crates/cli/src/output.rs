use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

/// A failure with the taxonomy name printed as `error[kind]`.
#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn new(kind: &'static str, message: impl Into<String>) -> Self {
        CliError { kind, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.kind, self.message)
    }
}

impl From<quasianalytic::Error> for CliError {
    fn from(e: quasianalytic::Error) -> Self {
        let text = e.to_string();
        let message = text.strip_prefix(&format!("{} error: ", e.kind())).unwrap_or(&text).to_string();
        CliError::new(e.kind(), message)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        use serde_json::error::Category;
        let kind = match e.classify() {
            Category::Syntax | Category::Eof => "parse",
            Category::Data => "schema",
            Category::Io => "io",
        };
        CliError::new(kind, e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::File::create(path)
        .and_then(|mut f| f.write_all(contents.as_bytes()))
        .map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))
}

/// Report `{"settings": {...}, ...result}`; printed to stdout unless `path` is given.
pub fn emit_report<T: Serialize>(settings: Value, result: &T, path: Option<&Path>, summary: &str) -> CliResult<()> {
    let mut report = serde_json::Map::new();
    report.insert("settings".into(), settings);
    match serde_json::to_value(result)? {
        Value::Object(fields) => report.extend(fields),
        other => {
            report.insert("result".into(), other);
        }
    }
    let text = serde_json::to_string_pretty(&Value::Object(report))? + "\n";
    match path {
        Some(p) => {
            write_file(p, &text)?;
            println!("{summary}");
        }
        None => print!("{text}"),
    }
    Ok(())
}

/// One CSV cell: integers plainly, reals in shortest round-trip form.
pub enum Cell {
    Int(usize),
    Real(f64),
    Text(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Real(v) => write!(f, "{v:?}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

/// Writes `header` and `rows` as CSV with LF line endings. Empty traces are refused.
pub fn emit_trace(path: &Path, header: &str, rows: &[Vec<Cell>]) -> CliResult<()> {
    if rows.is_empty() {
        return Err(CliError::new("size", format!("refusing to write an empty trace to {}", path.display())));
    }
    let mut text = String::with_capacity(rows.len() * 32);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(Cell::to_string).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    write_file(path, &text)
}
