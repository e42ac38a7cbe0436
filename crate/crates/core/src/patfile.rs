//! The `.pat` pattern file format.
//!
//! Line 1 is the header `N=<n>`. Every following non-empty, non-comment line
//! holds one sequence as whitespace-separated bitstrings of length n, e.g.
//! `01 10 00`. A `#` starts a comment running to the end of the line; blank
//! lines are ignored; duplicate sequences collapse to set semantics. The
//! leftmost character of a bitstring is component 1. Encoding is ASCII.

use std::fmt::Write as _;

use thiserror::Error;

use crate::pattern::{BasePattern, Dimension, ObjectivePattern, SequenceInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct PatError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> PatError {
    PatError {
        line,
        message: message.into(),
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn parse_line_at(
    line: &str,
    dim: Option<Dimension>,
    lineno: usize,
) -> Result<SequenceInstance, PatError> {
    let mut steps: Vec<BasePattern> = Vec::new();
    let mut expected = dim;
    for word in line.split_whitespace() {
        let base: BasePattern = word
            .parse()
            .map_err(|e| err(lineno, format!("bad bitstring {:?}: {}", word, e)))?;
        match expected {
            None => expected = Some(base.dim()),
            Some(d) if d != base.dim() => {
                return Err(err(
                    lineno,
                    format!(
                        "bitstring {:?} has width {}, expected {}",
                        word,
                        base.dim(),
                        d
                    ),
                ));
            }
            Some(_) => {}
        }
        steps.push(base);
    }
    SequenceInstance::new(steps).map_err(|_| err(lineno, "empty sequence"))
}

/// Parse one sequence line: whitespace-separated bitstrings. When `dim` is
/// given every bitstring must have that width; otherwise the width of the
/// first bitstring is used.
pub fn parse_instance_line(
    line: &str,
    dim: Option<Dimension>,
) -> Result<SequenceInstance, PatError> {
    parse_line_at(line, dim, 1)
}

/// Parse a complete `.pat` file.
pub fn parse_pat(text: &str) -> Result<ObjectivePattern, PatError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| err(1, "missing header line N=<n>"))?;
    let header = strip_comment(header).trim();
    let n: usize = header
        .strip_prefix("N=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| err(1, format!("expected header N=<n>, found {:?}", header)))?;
    let dim = Dimension::new(n).map_err(|e| err(1, e.to_string()))?;

    let mut instances = Vec::new();
    for (idx, raw) in lines {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        instances.push(parse_line_at(line, Some(dim), idx + 1)?);
    }
    ObjectivePattern::from_instances(dim, instances)
        .map_err(|e| err(1, e.to_string()))
}

/// Render a pattern in `.pat` form: header, then one instance per line sorted
/// by (length, lexicographic bits).
pub fn write_pat(pattern: &ObjectivePattern) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "N={}", pattern.dim());
    for instance in pattern.iter() {
        let _ = writeln!(out, "{}", instance);
    }
    out
}
