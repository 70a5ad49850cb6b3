//! Digit file format.
//!
//! ```text
//! base=<b>\n
//! <body>
//! ```
//!
//! For `b <= 10` the body is ASCII digit characters; line breaks are
//! ignored on input and inserted every [`DIGITS_PER_LINE`] digits on output.
//! For `b > 10` the body is whitespace-separated decimal integers, written
//! [`VALUES_PER_LINE`] per line. No BOM, LF line endings, trailing newline
//! after the last body line.

use std::fs;
use std::path::Path;

use super::{check_base, DigitSeq};
use crate::error::{Error, Result};

pub const DIGITS_PER_LINE: usize = 80;
pub const VALUES_PER_LINE: usize = 16;

fn parse_err(line: usize, offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        offset,
        message: message.into(),
    }
}

/// Renders a sequence in the digit file format.
pub fn format_digits(seq: &DigitSeq) -> Vec<u8> {
    let mut out = format!("base={}\n", seq.base()).into_bytes();
    if seq.base() <= 10 {
        out.reserve(seq.len() + seq.len() / DIGITS_PER_LINE + 1);
        for line in seq.digits().chunks(DIGITS_PER_LINE) {
            out.extend(line.iter().map(|d| b'0' + d));
            out.push(b'\n');
        }
    } else {
        for line in seq.digits().chunks(VALUES_PER_LINE) {
            let text: Vec<String> = line.iter().map(|d| d.to_string()).collect();
            out.extend_from_slice(text.join(" ").as_bytes());
            out.push(b'\n');
        }
    }
    out
}

/// Parses the digit file format. Errors name the 1-based line and byte
/// offset within that line.
pub fn parse_digits(bytes: &[u8]) -> Result<DigitSeq> {
    let header_end = bytes
        .iter()
        .position(|&c| c == b'\n')
        .ok_or_else(|| parse_err(1, 1, "missing header line `base=<b>`"))?;
    let header = std::str::from_utf8(&bytes[..header_end]).map_err(|_| parse_err(1, 1, "header is not UTF-8"))?;
    let base: u32 = header
        .strip_prefix("base=")
        .ok_or_else(|| parse_err(1, 1, format!("expected `base=<b>`, found {header:?}")))?
        .parse()
        .map_err(|_| parse_err(1, 6, format!("invalid base in header {header:?}")))?;
    check_base(base).map_err(|e| parse_err(1, 6, e.to_string()))?;

    let body = &bytes[header_end + 1..];
    let mut digits = Vec::with_capacity(body.len());
    let mut line = 2;
    let mut line_start = 0;
    if base <= 10 {
        let top = b'0' + base as u8;
        for (i, &c) in body.iter().enumerate() {
            match c {
                b'\n' => {
                    line += 1;
                    line_start = i + 1;
                }
                b'0'..=b'9' if c < top => digits.push(c - b'0'),
                b'0'..=b'9' => {
                    return Err(parse_err(
                        line,
                        i - line_start + 1,
                        format!("digit {} out of range for base {base}", c as char),
                    ))
                }
                _ => {
                    return Err(parse_err(
                        line,
                        i - line_start + 1,
                        format!("unexpected byte 0x{c:02x}"),
                    ))
                }
            }
        }
    } else {
        let mut i = 0;
        while i < body.len() {
            let c = body[i];
            if c == b'\n' {
                line += 1;
                line_start = i + 1;
                i += 1;
            } else if c == b' ' || c == b'\t' {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < body.len() && body[i].is_ascii_digit() {
                    i += 1;
                }
                let text = std::str::from_utf8(&body[start..i]).expect("ascii digits");
                let value: u32 = text.parse().unwrap_or(u32::MAX);
                if value >= base {
                    return Err(parse_err(
                        line,
                        start - line_start + 1,
                        format!("digit {text} out of range for base {base}"),
                    ));
                }
                digits.push(value as u8);
            } else {
                return Err(parse_err(
                    line,
                    i - line_start + 1,
                    format!("unexpected byte 0x{c:02x}"),
                ));
            }
        }
    }
    DigitSeq::new(base, digits)
}

/// Reads a digit file. With `expected_base`, a header naming another base is
/// a parse error.
pub fn read_digits(path: impl AsRef<Path>, expected_base: Option<u32>) -> Result<DigitSeq> {
    let seq = parse_digits(&fs::read(path)?)?;
    match expected_base {
        Some(b) if b != seq.base() => Err(parse_err(
            1,
            6,
            format!("file declares base {} but base {b} was requested", seq.base()),
        )),
        _ => Ok(seq),
    }
}

pub fn write_digits(seq: &DigitSeq, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_digits(seq))?;
    Ok(())
}
