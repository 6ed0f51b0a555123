//! Line-oriented text format.
//!
//! ```text
//! ua <n> <k> <seed>
//! 2: <s1> ... <sk>
//! ...
//! <n>: <s1> ... <sk>
//! ```
//!
//! UTF-8, LF line endings, selections in generation order.

use std::fmt::Write as _;

use thiserror::Error;

use super::AttachmentGraph;

/// Parse failure; `line` is 1-based.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: malformed header: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("line {line}: expected selection line for vertex {expected}")]
    WrongVertexLabel { line: usize, expected: u32 },
    #[error("line {line}: malformed selection line: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("line {line}: selection out of range: {value} not in [1, {max}]")]
    SelectionOutOfRange { line: usize, value: u64, max: u32 },
    #[error("line {line}: wrong list length: expected {expected} selections, found {found}")]
    WrongListLength { line: usize, expected: u32, found: usize },
    #[error("line {line}: missing selection line for vertex {vertex}")]
    MissingLine { line: usize, vertex: u32 },
    #[error("line {line}: unexpected trailing content")]
    TrailingContent { line: usize },
}

/// Render `g` in the text format.
pub fn serialize(g: &AttachmentGraph) -> String {
    let mut out = String::with_capacity(16 + g.selections.len() * 7);
    writeln!(out, "ua {} {} {}", g.n, g.k, g.seed).unwrap();
    for u in 2..=g.n {
        write!(out, "{u}:").unwrap();
        for s in g.selections_of(u) {
            write!(out, " {s}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Parse the text format back into a graph.
pub fn deserialize(text: &str) -> Result<AttachmentGraph, ParseError> {
    let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().unwrap_or((1, ""));
    let bad_header = |reason: &str| ParseError::MalformedHeader { line: 1, reason: reason.to_string() };
    let fields: Vec<&str> = header.split(' ').collect();
    if fields.len() != 4 || fields[0] != "ua" {
        return Err(bad_header("expected `ua <n> <k> <seed>`"));
    }
    let n: u32 = fields[1].parse().map_err(|_| bad_header("n is not a positive integer"))?;
    let k: u32 = fields[2].parse().map_err(|_| bad_header("k is not a positive integer"))?;
    let seed: u64 = fields[3].parse().map_err(|_| bad_header("seed is not a 64-bit unsigned integer"))?;
    if n == 0 || k == 0 {
        return Err(bad_header("n and k must be positive"));
    }

    let mut selections = Vec::with_capacity((n as usize - 1) * k as usize);
    let mut last_line = 1;
    for u in 2..=n {
        let Some((line, body)) = lines.next().filter(|(_, l)| !l.is_empty()) else {
            return Err(ParseError::MissingLine { line: last_line + 1, vertex: u });
        };
        last_line = line;
        let (label, rest) = body
            .split_once(':')
            .ok_or_else(|| ParseError::MalformedLine { line, reason: "missing `:`".into() })?;
        if label.parse::<u32>().ok() != Some(u) {
            return Err(ParseError::WrongVertexLabel { line, expected: u });
        }
        let items: Vec<&str> = rest.split(' ').skip(1).collect();
        if !rest.is_empty() && !rest.starts_with(' ') {
            return Err(ParseError::MalformedLine { line, reason: "expected a space after `:`".into() });
        }
        if items.len() != k as usize {
            return Err(ParseError::WrongListLength { line, expected: k, found: items.len() });
        }
        for item in items {
            let value: u64 = item.parse().map_err(|_| ParseError::MalformedLine {
                line,
                reason: format!("`{item}` is not an integer"),
            })?;
            if value == 0 || value >= u as u64 {
                return Err(ParseError::SelectionOutOfRange { line, value, max: u - 1 });
            }
            selections.push(value as u32);
        }
    }
    for (line, rest) in lines {
        if !rest.is_empty() {
            return Err(ParseError::TrailingContent { line });
        }
    }
    Ok(AttachmentGraph { n, k, seed, selections, simple: Default::default() })
}
