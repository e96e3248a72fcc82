//! The `.rcol` text format.
//!
//! ```text
//! rcol 1
//! n 4
//! t 2
//! color 1
//! 0 1
//! color 2
//! end
//! ```
//!
//! Colours are numbered from 1 in the file. Each edge line is `u v` with
//! `u < v < n`; a colour may not repeat an edge. Every line, the last
//! included, ends with a single LF.

use std::fmt::Write as _;
use std::path::Path;

use rturan_core::collection::{Collection, MAX_COLORS};
use rturan_core::graph::MAX_VERTICES;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error("line {line}: {reason}")]
    Range { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub fn encode(c: &Collection) -> String {
    let mut out = format!("rcol 1\nn {}\nt {}\n", c.n(), c.t());
    for (i, g) in c.graphs().iter().enumerate() {
        writeln!(out, "color {}", i + 1).unwrap();
        for (u, v) in g.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
    }
    out.push_str("end\n");
    out
}

fn format_err(line: usize, reason: impl Into<String>) -> CodecError {
    CodecError::Format {
        line,
        reason: reason.into(),
    }
}

fn range_err(line: usize, reason: impl Into<String>) -> CodecError {
    CodecError::Range {
        line,
        reason: reason.into(),
    }
}

/// Parses `key <number>` exactly as written by [`encode`].
fn header(line: usize, text: Option<&str>, key: &str) -> Result<usize, CodecError> {
    let text = text.ok_or_else(|| format_err(line, format!("expected \"{key} <number>\", found end of file")))?;
    text.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix(' '))
        .and_then(number)
        .ok_or_else(|| format_err(line, format!("expected \"{key} <number>\", found {text:?}")))
}

/// A decimal number without sign or leading zeros.
fn number(s: &str) -> Option<usize> {
    let canonical = !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) && (s == "0" || !s.starts_with('0'));
    if canonical {
        s.parse().ok()
    } else {
        None
    }
}

pub fn decode(text: &str) -> Result<Collection, CodecError> {
    let body = text
        .strip_suffix('\n')
        .ok_or_else(|| format_err(text.lines().count().max(1), "file must end with a newline"))?;
    let lines: Vec<&str> = body.split('\n').collect();
    let mut at = 0;
    let mut next = || {
        at += 1;
        lines.get(at - 1).copied()
    };
    if next() != Some("rcol 1") {
        return Err(format_err(1, "expected \"rcol 1\""));
    }
    let n = header(2, next(), "n")?;
    if n == 0 || n > MAX_VERTICES {
        return Err(range_err(2, format!("n must be in 1..={MAX_VERTICES}")));
    }
    let t = header(3, next(), "t")?;
    if t == 0 || t > MAX_COLORS {
        return Err(range_err(3, format!("t must be in 1..={MAX_COLORS}")));
    }
    let mut c = Collection::new(n, t).expect("shape checked");
    let mut color = 0;
    for (k, line) in lines.iter().enumerate().skip(3) {
        let no = k + 1;
        if let Some(rest) = line.strip_prefix("color ") {
            let i = number(rest).ok_or_else(|| format_err(no, format!("bad colour header {line:?}")))?;
            if i == 0 || i > t {
                return Err(range_err(no, format!("colour {i} out of range 1..={t}")));
            }
            if i != color + 1 {
                return Err(format_err(no, format!("expected colour {}, found {i}", color + 1)));
            }
            color = i;
        } else if *line == "end" {
            if color != t {
                return Err(format_err(no, format!("expected colour {}, found end", color + 1)));
            }
            if no != lines.len() {
                return Err(format_err(no + 1, "content after end"));
            }
            return Ok(c);
        } else {
            let (u, v) = line
                .split_once(' ')
                .and_then(|(a, b)| Some((number(a)?, number(b)?)))
                .ok_or_else(|| format_err(no, format!("expected \"<u> <v>\", found {line:?}")))?;
            if color == 0 {
                return Err(format_err(no, "edge before the first colour"));
            }
            if u >= v {
                return Err(format_err(no, format!("edge {u} {v} must satisfy u < v")));
            }
            if v >= n {
                return Err(range_err(no, format!("vertex {v} out of range for n = {n}")));
            }
            if !c.add_edge(color - 1, u, v).expect("checked") {
                return Err(format_err(no, format!("duplicate edge {u} {v} in colour {color}")));
            }
        }
    }
    Err(format_err(lines.len() + 1, "missing \"end\""))
}

pub fn read(path: &Path) -> Result<Collection, CodecError> {
    decode(&std::fs::read_to_string(path)?)
}

pub fn write(c: &Collection, path: &Path) -> Result<(), CodecError> {
    std::fs::write(path, encode(c))?;
    Ok(())
}
