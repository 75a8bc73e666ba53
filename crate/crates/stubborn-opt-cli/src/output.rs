//! Output formatting: JSON documents and locale-independent CSV.

use std::path::Path;

use stubborn_opt::{Error, Result};

/// Formats a float with 12 significant digits for CSV cells.
pub fn sig(x: f64) -> String {
    format!("{x:.11e}")
}

/// Optional float cell; empty when absent.
pub fn sig_opt(x: Option<f64>) -> String {
    x.map(sig).unwrap_or_default()
}

/// Quotes a CSV field that contains commas.
pub fn quote(field: &str) -> String {
    format!("\"{field}\"")
}

pub fn json_document(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

/// Writes to `out` or stdout.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidData(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
