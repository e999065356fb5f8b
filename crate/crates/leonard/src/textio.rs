//! The canonical text format for parameter arrays.
//!
//! A document is line-based; `#` starts a comment. It declares the field
//! once, then the diameter, then the four sequences:
//!
//! ```text
//! field q
//! d 3
//! theta -3/2 -1/2 1/2 3/2
//! theta* -3/2 -1/2 1/2 3/2
//! varphi -3/2 -2 -3/2
//! phi 3/2 2 3/2
//! ```
//!
//! Field declarations: `q` (rationals), `gf <p>`, `q ext <D>`, or
//! `gf <p> ext <D>`. Prime-field elements are least residues with the
//! modulus declared once here; extension elements are written
//! `a+b*sqrt(D)`, except over GF(2) where the generator prints as `w`.
//! Printing is canonical and parsing a canonical document reproduces the
//! array byte for byte. Unknown keys, repeated keys, missing keys, and
//! length mismatches are all rejected with the offending line number.

use std::fmt::Write as _;

use thiserror::Error;

use crate::field::{FieldSpec, Scalar};
use crate::parray::ParameterArray;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

const KEYS: [&str; 6] = ["field", "d", "theta", "theta*", "varphi", "phi"];

/// Parse a canonical array document.
pub fn parse_document(text: &str) -> Result<ParameterArray, ParseError> {
    let mut field: Option<(usize, FieldSpec)> = None;
    let mut d: Option<(usize, usize)> = None;
    let mut seqs: [Option<(usize, Vec<String>)>; 4] = [None, None, None, None];

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).ok_or_else(|| {
            ParseError::new(lineno, format!("key `{line}` is missing a value"))
        })?;
        let slot = match key {
            "field" => {
                let spec = FieldSpec::parse(rest)
                    .map_err(|e| ParseError::new(lineno, e.to_string()))?;
                if field.replace((lineno, spec)).is_some() {
                    return Err(ParseError::new(lineno, "repeated key `field`"));
                }
                continue;
            }
            "d" => {
                let value: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| ParseError::new(lineno, format!("`{rest}` is not a diameter")))?;
                if d.replace((lineno, value)).is_some() {
                    return Err(ParseError::new(lineno, "repeated key `d`"));
                }
                continue;
            }
            "theta" => 0,
            "theta*" => 1,
            "varphi" => 2,
            "phi" => 3,
            other => {
                return Err(ParseError::new(
                    lineno,
                    format!("unknown key `{other}` (expected one of {})", KEYS.join(", ")),
                ))
            }
        };
        let tokens: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
        if seqs[slot].replace((lineno, tokens)).is_some() {
            return Err(ParseError::new(lineno, format!("repeated key `{key}`")));
        }
    }

    let (_, field) = field.ok_or_else(|| ParseError::new(0, "missing key `field`"))?;
    let (d_line, d) = d.ok_or_else(|| ParseError::new(0, "missing key `d`"))?;
    if d < 1 {
        return Err(ParseError::new(d_line, "diameter must be at least 1"));
    }
    let mut parsed: Vec<Vec<Scalar>> = Vec::with_capacity(4);
    for (slot, name) in ["theta", "theta*", "varphi", "phi"].iter().enumerate() {
        let (lineno, tokens) = seqs[slot]
            .take()
            .ok_or_else(|| ParseError::new(0, format!("missing key `{name}`")))?;
        let expected = if slot < 2 { d + 1 } else { d };
        if tokens.len() != expected {
            return Err(ParseError::new(
                lineno,
                format!(
                    "`{name}` has {} entries, expected {expected} for d = {d}",
                    tokens.len()
                ),
            ));
        }
        let mut out = Vec::with_capacity(tokens.len());
        for token in &tokens {
            out.push(
                field
                    .parse_scalar(token)
                    .map_err(|e| ParseError::new(lineno, e.to_string()))?,
            );
        }
        parsed.push(out);
    }
    let phi = parsed.pop().unwrap();
    let varphi = parsed.pop().unwrap();
    let theta_star = parsed.pop().unwrap();
    let theta = parsed.pop().unwrap();
    ParameterArray::new(theta, theta_star, varphi, phi)
        .map_err(|e| ParseError::new(0, e.to_string()))
}

/// Print an array in the canonical document form.
pub fn print_document(pa: &ParameterArray) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "field {}", pa.field());
    let _ = writeln!(out, "d {}", pa.d());
    for (name, seq) in [
        ("theta", pa.theta_seq()),
        ("theta*", pa.theta_star_seq()),
        ("varphi", pa.varphi_seq()),
        ("phi", pa.phi_seq()),
    ] {
        let _ = write!(out, "{name}");
        for s in seq {
            let _ = write!(out, " {s}");
        }
        out.push('\n');
    }
    out
}
