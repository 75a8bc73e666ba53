//! Text ingestion: edge-list files and node-set files.
//!
//! Edge lists are line oriented. Each non-comment line is `u v` or `u v w`
//! with whitespace-separated tokens; `#` starts a comment that runs to the
//! end of the line. Node labels may be arbitrary tokens and are mapped to
//! dense ids in first-appearance order. A line `u v w` assigns weight `w` to
//! the orientation `u -> v` only, so a pair of lines can state asymmetric
//! weights; an unweighted line declares both orientations with weight 1.
//!
//! Set files list one node set per line as comma-separated labels, with the
//! same comment rule.

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};

/// Parses an edge list into a validated [`Graph`].
pub fn load_edge_list(text: &str) -> Result<Graph> {
    let mut b = GraphBuilder::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [] => continue,
            [u, v] => b
                .add_line(u, v, None)
                .map_err(|msg| Error::parse(line_no, msg))?,
            [u, v, w] => {
                let w: f64 = w
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("invalid weight '{w}'")))?;
                b.add_line(u, v, Some(w))
                    .map_err(|msg| Error::parse(line_no, msg))?;
            }
            _ => {
                return Err(Error::parse(
                    line_no,
                    format!("expected 'u v' or 'u v w', got {} tokens", tokens.len()),
                ))
            }
        }
    }
    b.finish()
}

/// Parses a node-set file into one label list per non-comment line.
///
/// Labels are not resolved against any graph here; see
/// [`Graph::resolve_set`] for that step.
pub fn parse_sets_file(text: &str) -> Result<Vec<Vec<String>>> {
    let mut sets = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        sets.push(parse_set_line(line).map_err(|msg| Error::parse(line_no, msg))?);
    }
    Ok(sets)
}

/// Parses one comma-separated label list, e.g. `3,17,fox`.
pub fn parse_set_line(line: &str) -> std::result::Result<Vec<String>, String> {
    let mut labels = Vec::new();
    for part in line.split(',') {
        let label = part.trim();
        if label.is_empty() {
            return Err("empty label in set".to_string());
        }
        labels.push(label.to_string());
    }
    if labels.is_empty() {
        return Err("empty set".to_string());
    }
    Ok(labels)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}
