//! The `UNITAL v1` text format.
//!
//! ```text
//! UNITAL v1
//! order <q>
//! points <v>
//! blocks <b>
//! <q+1 strictly increasing 0-based point indices per line, b lines, sorted>
//! ```
//!
//! ASCII, LF line endings. `v = q³ + 1` is required unless the file is read as
//! a plain linear space.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::unital::{DesignReport, Unital, UnitalError};

pub const HEADER: &str = "UNITAL v1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unsupported header {0:?}, expected {HEADER:?}")]
    Version(String),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("structure fails the design axioms:\n{0}")]
    Design(DesignReport),
}

/// How much the loader checks beyond syntax.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoadMode {
    /// Canonical unital files: block length `q + 1`, increasing indices,
    /// sorted lines, `v = q³ + 1`.
    Strict,
    /// Syntax and header consistency only; blocks are returned as written so
    /// that design violations can be reported rather than rejected.
    Lenient,
    /// Any 2-(v, k, 1) design with uniform block length.
    LinearSpace,
}

/// A parsed file before any design validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitalFile {
    pub order: usize,
    pub points: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl UnitalFile {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{HEADER}").unwrap();
        writeln!(out, "order {}", self.order).unwrap();
        writeln!(out, "points {}", self.points).unwrap();
        writeln!(out, "blocks {}", self.blocks.len()).unwrap();
        for b in &self.blocks {
            let line: Vec<String> = b.iter().map(usize::to_string).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        out
    }

    /// Validates the blocks as a unital (or a linear space for
    /// [`LoadMode::LinearSpace`]).
    pub fn into_unital(self, mode: LoadMode) -> Result<Unital, FormatError> {
        let built = match mode {
            LoadMode::LinearSpace => Unital::linear_space(self.points, self.blocks),
            _ => Unital::from_blocks(self.order, self.blocks),
        };
        built.map_err(|e| match e {
            UnitalError::NotADesign(report) => FormatError::Design(report),
            other => unreachable!("construction only reports design failures: {other}"),
        })
    }
}

impl From<&Unital> for UnitalFile {
    fn from(u: &Unital) -> UnitalFile {
        UnitalFile { order: u.order(), points: u.num_points(), blocks: u.blocks().to_vec() }
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse { line, message: message.into() }
}

fn keyed(lines: &[&str], idx: usize, key: &str) -> Result<usize, FormatError> {
    let line = idx + 1;
    let raw = lines.get(idx).ok_or_else(|| parse_error(line, format!("missing '{key}' line")))?;
    let rest = raw
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix(' '))
        .ok_or_else(|| parse_error(line, format!("expected '{key} <n>'")))?;
    rest.parse().map_err(|_| parse_error(line, format!("invalid {key} count {rest:?}")))
}

/// Parses file contents.
pub fn parse_unital(text: &str, mode: LoadMode) -> Result<UnitalFile, FormatError> {
    if !text.is_ascii() {
        return Err(parse_error(0, "file is not ASCII"));
    }
    if text.contains('\r') {
        return Err(parse_error(0, "CR line endings are not allowed"));
    }
    let mut lines: Vec<&str> = text.split('\n').collect();
    if lines.last() == Some(&"") {
        lines.pop();
    }
    match lines.first() {
        Some(&HEADER) => {}
        Some(h) if h.starts_with("UNITAL") => return Err(FormatError::Version(h.to_string())),
        _ => return Err(parse_error(1, format!("expected header '{HEADER}'"))),
    }
    let order = keyed(&lines, 1, "order")?;
    let points = keyed(&lines, 2, "points")?;
    let count = keyed(&lines, 3, "blocks")?;
    if order < 2 {
        return Err(parse_error(2, "order must be at least 2"));
    }
    if mode != LoadMode::LinearSpace {
        let expected = order.checked_pow(3).and_then(|c| c.checked_add(1));
        if expected != Some(points) {
            return Err(parse_error(3, format!("points {points} does not equal order^3 + 1 for order {order}")));
        }
    }
    let body = &lines[4..];
    if body.len() != count {
        return Err(parse_error(4 + body.len().min(count) + 1, format!("declared {count} blocks, found {}", body.len())));
    }

    let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(count);
    for (i, raw) in body.iter().enumerate() {
        let line = i + 5;
        let block = raw
            .split(' ')
            .map(|tok| tok.parse::<usize>().map_err(|_| parse_error(line, format!("invalid point index {tok:?}"))))
            .collect::<Result<Vec<usize>, _>>()?;
        if mode == LoadMode::Lenient {
            blocks.push(block);
            continue;
        }
        let expected_len = match mode {
            LoadMode::LinearSpace => blocks.first().map_or(block.len(), Vec::len),
            _ => order + 1,
        };
        if block.len() != expected_len {
            return Err(parse_error(line, format!("block has {} points, expected {expected_len}", block.len())));
        }
        if block.windows(2).any(|w| w[0] >= w[1]) {
            return Err(parse_error(line, "point indices must be strictly increasing"));
        }
        if let Some(&p) = block.iter().find(|&&p| p >= points) {
            return Err(parse_error(line, format!("point {p} out of range 0..{points}")));
        }
        if blocks.last().is_some_and(|prev| *prev > block) {
            return Err(parse_error(line, "blocks must be sorted lexicographically"));
        }
        blocks.push(block);
    }
    Ok(UnitalFile { order, points, blocks })
}

/// Parses and validates a structure from text.
pub fn unital_from_text(text: &str, mode: LoadMode) -> Result<Unital, FormatError> {
    parse_unital(text, mode)?.into_unital(mode)
}

pub fn read_unital_file(path: impl AsRef<Path>, mode: LoadMode) -> Result<UnitalFile, FormatError> {
    parse_unital(&fs::read_to_string(path)?, mode)
}

/// Loads a unital in [`LoadMode::Strict`] mode.
pub fn load_unital(path: impl AsRef<Path>) -> Result<Unital, FormatError> {
    read_unital_file(path, LoadMode::Strict)?.into_unital(LoadMode::Strict)
}

/// Loads any 2-(v, k, 1) design.
pub fn load_linear_space(path: impl AsRef<Path>) -> Result<Unital, FormatError> {
    read_unital_file(path, LoadMode::LinearSpace)?.into_unital(LoadMode::LinearSpace)
}

pub fn unital_to_text(u: &Unital) -> String {
    UnitalFile::from(u).to_text()
}

pub fn save_unital(u: &Unital, path: impl AsRef<Path>) -> io::Result<()> {
    fs::write(path, unital_to_text(u))
}
