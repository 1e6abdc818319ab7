use std::fs;
use std::io::Write;

use crate::{Failure, OutputArgs};

pub fn emit(out: &OutputArgs, text: &str) -> Result<(), Failure> {
    match &out.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Failure::Usage(e.to_string()))
        }
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn emit_json(out: &OutputArgs, value: &serde_json::Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    emit(out, &(text + "\n"))
}

pub fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::Usage(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Usage(e.to_string()))
}

/// Shortest round-trip representation of a double.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}
