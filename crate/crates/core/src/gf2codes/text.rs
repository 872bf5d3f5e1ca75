//! Plain-text code files.
//!
//! ```text
//! # comment lines and blank lines are ignored
//! 7 4
//! 1110000      <- k generator columns, n characters each
//! 1001100
//! 0101010
//! 1101001
//! H            <- optional; n−k parity-check rows follow
//! 0001111
//! 0110011
//! 1010101
//! ```

use std::fmt::Write as _;

use super::{BitString, Gf2Matrix, LinearCode};
use crate::error::{Error, Result};

pub const MAX_BLOCK_LENGTH: usize = 256;

pub fn parse_code(text: &str) -> Result<LinearCode> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty code file".into()))?;
    let mut fields = header.split_whitespace();
    let mut number = |what: &str| -> Result<usize> {
        fields
            .next()
            .ok_or_else(|| Error::Parse(format!("header is missing {what}")))?
            .parse()
            .map_err(|_| Error::Parse(format!("header {what} is not a nonnegative integer")))
    };
    let n = number("n")?;
    let k = number("k")?;
    if fields.next().is_some() {
        return Err(Error::Parse("header must be exactly \"n k\"".into()));
    }
    if n == 0 || n > MAX_BLOCK_LENGTH {
        return Err(Error::Parse(format!("n = {n} outside 1..={MAX_BLOCK_LENGTH}")));
    }
    if k > n {
        return Err(Error::Parse(format!("k = {k} exceeds n = {n}")));
    }
    let word = |lines: &mut dyn Iterator<Item = &str>, what: &str| -> Result<BitString> {
        let line = lines.next().ok_or_else(|| Error::Parse(format!("missing {what}")))?;
        let b: BitString = line.parse()?;
        if b.len() != n {
            return Err(Error::Parse(format!("{what} has length {}, expected {n}", b.len())));
        }
        Ok(b)
    };
    let columns = (0..k).map(|_| word(&mut lines, "generator column")).collect::<Result<Vec<_>>>()?;
    let generator = Gf2Matrix::from_columns(n, &columns)?;
    let code = match lines.next() {
        None => LinearCode::from_generator(generator)?,
        Some("H") => {
            let rows = (0..n - k).map(|_| word(&mut lines, "parity-check row")).collect::<Result<Vec<_>>>()?;
            let h = if rows.is_empty() { Gf2Matrix::zeros(0, n) } else { Gf2Matrix::from_rows(&rows)? };
            LinearCode::with_parity_check(generator, h)?
        }
        Some(other) => return Err(Error::Parse(format!("unexpected line {other:?}"))),
    };
    if let Some(extra) = lines.next() {
        return Err(Error::Parse(format!("trailing content {extra:?}")));
    }
    Ok(code)
}

/// Writes a code in the format read by [`parse_code`], parity check
/// included.
pub fn format_code(c: &LinearCode) -> String {
    let mut out = format!("{} {}\n", c.n(), c.k());
    for col in c.generator().columns() {
        let _ = writeln!(out, "{col}");
    }
    out.push_str("H\n");
    out.push_str(&c.parity_check().to_string());
    out
}
