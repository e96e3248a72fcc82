//! `key=value,...` parameter lists for constructions and formulas.
//!
//! Values may contain commas themselves (`F=K2,2`, `family={K3,M2}`), so a
//! comma only separates entries when the text after it starts a new
//! `key=`.

use std::path::Path;

use rturan_core::constructions::Params;
use rturan_core::family::PatternFamily;
use rturan_core::pattern::parse_pattern;
use thiserror::Error;

use crate::codec::{self, CodecError};

#[derive(Debug, Error)]
pub enum ParamError {
    #[error("malformed parameter {0:?}, expected key=value")]
    Malformed(String),
    #[error("unknown parameter {0:?}")]
    Unknown(String),
    #[error("parameter {0} given twice")]
    Repeated(String),
    #[error("bad value for {key}: {reason}")]
    Value { key: String, reason: String },
    #[error("inner collection: {0}")]
    Inner(#[from] CodecError),
}

/// Splits at commas that begin a new `key=` entry.
pub fn split_entries(text: &str) -> Vec<&str> {
    let starts_entry = |rest: &str| {
        let key_len = rest.bytes().take_while(|b| b.is_ascii_alphanumeric() || *b == b'_').count();
        key_len > 0 && rest[key_len..].starts_with('=') && rest.as_bytes()[0].is_ascii_alphabetic()
    };
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut from = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '{' => depth += 1,
            '}' => depth -= 1,
            ',' if depth == 0 && starts_entry(&text[i + 1..]) => {
                out.push(&text[from..i]);
                from = i + 1;
            }
            _ => {}
        }
    }
    if from < text.len() || !out.is_empty() {
        out.push(&text[from..]);
    }
    out
}

/// Parses a parameter list; `inner` is a path to an `.rcol` file.
pub fn parse_params(text: &str) -> Result<Params, ParamError> {
    let mut p = Params::new();
    let mut seen: Vec<&str> = Vec::new();
    for entry in split_entries(text.trim()) {
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| ParamError::Malformed(entry.to_string()))?;
        let (key, value) = (key.trim(), value.trim());
        if seen.contains(&key) {
            return Err(ParamError::Repeated(key.to_string()));
        }
        seen.push(key);
        let bad = |reason: String| ParamError::Value {
            key: key.to_string(),
            reason,
        };
        let int = || value.parse::<usize>().map_err(|e| bad(e.to_string()));
        match key {
            "n" => p.n = Some(int()?),
            "t" => p.t = Some(int()?),
            "s" => p.s = Some(int()?),
            "p" => p.p = Some(int()?),
            "r" => p.r = Some(int()?),
            "m" => p.m = Some(int()?),
            "budget" => p.budget = Some(value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?),
            "F" => p.f = Some(parse_pattern(value).map_err(|e| bad(e.to_string()))?),
            "family" => p.family = Some(PatternFamily::parse(value).map_err(|e| bad(e.to_string()))?),
            "inner" => p.inner = Some(codec::read(Path::new(value))?),
            _ => return Err(ParamError::Unknown(key.to_string())),
        }
    }
    Ok(p)
}
