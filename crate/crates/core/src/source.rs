//! Textual digit-source descriptors, as accepted on the command line.
//!
//! ```text
//! zero | p/q | rational:p/q | champernowne | periodic:0,1,2 | periodic:012
//! oscillator:a,b | random | random:SEED | file:PATH | transformed:P,SOURCE
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::digits::{Base, Digit};
use crate::error::{Error, Result};
use crate::stream::{
    block_oscillator_stream, champernowne_stream, explicit_stream, periodic_stream, random_stream, rational_stream,
    DigitStream,
};
use crate::transform::{f, TransformParams};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DigitSource {
    Rational(BigRational),
    Champernowne,
    Periodic(Vec<Digit>),
    Oscillator(Digit, Digit),
    Random(Option<u64>),
    File(PathBuf),
    Transformed(u64, Box<DigitSource>),
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::parameter(format!("invalid rational '{s}'"));
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

fn parse_digit(s: &str) -> Result<Digit> {
    s.trim().parse().map_err(|_| Error::parameter(format!("invalid digit '{s}'")))
}

fn parse_pattern(s: &str) -> Result<Vec<Digit>> {
    if s.contains(',') {
        s.split(',').map(parse_digit).collect()
    } else {
        s.chars()
            .map(|c| c.to_digit(10).map(|d| d as Digit).ok_or_else(|| Error::parameter(format!("invalid digit '{c}'"))))
            .collect()
    }
}

impl FromStr for DigitSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("zero", None) => Ok(DigitSource::Rational(BigRational::zero())),
            ("champernowne", None) => Ok(DigitSource::Champernowne),
            ("random", None) => Ok(DigitSource::Random(None)),
            ("random", Some(seed)) => seed
                .parse()
                .map(|v| DigitSource::Random(Some(v)))
                .map_err(|_| Error::parameter(format!("invalid seed '{seed}'"))),
            ("rational", Some(q)) => parse_rational(q).map(DigitSource::Rational),
            ("periodic", Some(pat)) => parse_pattern(pat).map(DigitSource::Periodic),
            ("oscillator", Some(ab)) => {
                let (a, b) = ab
                    .split_once(',')
                    .ok_or_else(|| Error::parameter("oscillator needs two digits: oscillator:a,b"))?;
                Ok(DigitSource::Oscillator(parse_digit(a)?, parse_digit(b)?))
            }
            ("file", Some(path)) if !path.is_empty() => Ok(DigitSource::File(PathBuf::from(path))),
            ("transformed", Some(rest)) => {
                let (p, inner) = rest
                    .split_once(',')
                    .ok_or_else(|| Error::parameter("transformed needs p and a source: transformed:p,SOURCE"))?;
                let p = p.trim().parse().map_err(|_| Error::parameter(format!("invalid p '{p}'")))?;
                Ok(DigitSource::Transformed(p, Box::new(inner.parse()?)))
            }
            (q, None) if q.contains('/') => parse_rational(q).map(DigitSource::Rational),
            _ => Err(Error::parameter(format!("unrecognised source '{s}'"))),
        }
    }
}

impl fmt::Display for DigitSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DigitSource::Rational(q) if q.is_zero() => f.write_str("zero"),
            DigitSource::Rational(q) => write!(f, "rational:{q}"),
            DigitSource::Champernowne => f.write_str("champernowne"),
            DigitSource::Periodic(pat) => {
                let parts: Vec<String> = pat.iter().map(|d| d.to_string()).collect();
                write!(f, "periodic:{}", parts.join(","))
            }
            DigitSource::Oscillator(a, b) => write!(f, "oscillator:{a},{b}"),
            DigitSource::Random(None) => f.write_str("random"),
            DigitSource::Random(Some(seed)) => write!(f, "random:{seed}"),
            DigitSource::File(path) => write!(f, "file:{}", path.display()),
            DigitSource::Transformed(p, inner) => write!(f, "transformed:{p},{inner}"),
        }
    }
}

/// Reads a digit file: one ASCII digit per byte, line breaks ignored.
pub fn read_digit_file(path: &Path, base: Base) -> Result<Vec<Digit>> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut digits = Vec::with_capacity(bytes.len());
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'\n' | b'\r' => {}
            b'0'..=b'9' => digits.push(base.check_digit(b - b'0')?),
            _ => {
                return Err(Error::parameter(format!(
                    "{}: byte {} is {:?}, not an ASCII digit",
                    path.display(),
                    i + 1,
                    b as char
                )))
            }
        }
    }
    Ok(digits)
}

impl DigitSource {
    /// Opens the stream in base `base`. `default_seed` is used by `random`
    /// when no seed is given inline.
    pub fn open(&self, base: Base, default_seed: u64) -> Result<DigitStream> {
        match self {
            DigitSource::Rational(q) => rational_stream(q, base),
            DigitSource::Champernowne => Ok(champernowne_stream(base)),
            DigitSource::Periodic(pat) => periodic_stream(base, pat),
            DigitSource::Oscillator(a, b) => block_oscillator_stream(base, *a, *b),
            DigitSource::Random(seed) => Ok(random_stream(base, seed.unwrap_or(default_seed))),
            DigitSource::File(path) => explicit_stream(base, read_digit_file(path, base)?),
            DigitSource::Transformed(p, inner) => {
                let params = TransformParams::new(base.get(), *p)?;
                f(&params, inner.open(base, default_seed)?)
            }
        }
    }
}
