//! Lazy digit streams.
//!
//! A [`DigitStream`] is a single-consumer iterator over the digits
//! `alpha_1, alpha_2, ...` of some point of `[0, 1)`. Every generator here is
//! deterministic: rebuilding a stream from the same inputs (including the seed
//! of a random stream) reproduces the same digits.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::digits::{Base, Digit};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StreamKind {
    Rational,
    Champernowne,
    Periodic,
    BlockOscillator,
    Transformed,
    Random,
    /// A finite, caller-supplied digit sequence (e.g. read from a digit file).
    Explicit,
}

impl fmt::Display for StreamKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StreamKind::Rational => "rational",
            StreamKind::Champernowne => "champernowne",
            StreamKind::Periodic => "periodic",
            StreamKind::BlockOscillator => "block-oscillator",
            StreamKind::Transformed => "transformed",
            StreamKind::Random => "random",
            StreamKind::Explicit => "explicit",
        };
        f.write_str(s)
    }
}

pub struct DigitStream {
    base: Base,
    kind: StreamKind,
    inner: Box<dyn Iterator<Item = Digit> + Send>,
}

impl DigitStream {
    pub(crate) fn from_iter<I>(base: Base, kind: StreamKind, iter: I) -> Self
    where
        I: Iterator<Item = Digit> + Send + 'static,
    {
        DigitStream { base, kind, inner: Box::new(iter) }
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn kind(&self) -> StreamKind {
        self.kind
    }

    /// Pulls up to `n` digits; fewer only if the stream is finite.
    pub fn take_prefix(&mut self, n: usize) -> Vec<Digit> {
        self.by_ref().take(n).collect()
    }
}

impl Iterator for DigitStream {
    type Item = Digit;

    #[inline]
    fn next(&mut self) -> Option<Digit> {
        self.inner.next()
    }
}

impl fmt::Debug for DigitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DigitStream").field("base", &self.base).field("kind", &self.kind).finish()
    }
}

struct LongDivision {
    rem: BigUint,
    den: BigUint,
    base: BigUint,
}

impl Iterator for LongDivision {
    type Item = Digit;

    fn next(&mut self) -> Option<Digit> {
        if self.rem.is_zero() {
            return Some(0);
        }
        self.rem *= &self.base;
        let (d, r) = self.rem.div_rem(&self.den);
        self.rem = r;
        Some(d.to_u8().expect("digit below base"))
    }
}

/// Canonical expansion of a rational `x` in `[0, 1)`.
pub fn rational_stream(x: &BigRational, base: Base) -> Result<DigitStream> {
    if x < &BigRational::zero() || x >= &BigRational::from_integer(1.into()) {
        return Err(Error::domain(format!("x = {x} is outside [0, 1)")));
    }
    let rem = x.numer().to_biguint().expect("nonnegative");
    let den = x.denom().to_biguint().expect("positive");
    Ok(DigitStream::from_iter(
        base,
        StreamKind::Rational,
        LongDivision { rem, den, base: base.as_biguint() },
    ))
}

struct Champernowne {
    base: u64,
    next_numeral: u64,
    // digits of the current numeral, least significant first
    pending: Vec<Digit>,
}

impl Iterator for Champernowne {
    type Item = Digit;

    fn next(&mut self) -> Option<Digit> {
        if self.pending.is_empty() {
            let mut m = self.next_numeral;
            while m > 0 {
                self.pending.push((m % self.base) as Digit);
                m /= self.base;
            }
            self.next_numeral += 1;
        }
        self.pending.pop()
    }
}

/// Digits of the base-s Champernowne word `1 2 .. (s-1) 10 11 ..`.
pub fn champernowne_stream(base: Base) -> DigitStream {
    DigitStream::from_iter(
        base,
        StreamKind::Champernowne,
        Champernowne { base: u64::from(base.get()), next_numeral: 1, pending: Vec::new() },
    )
}

/// Repeats `pattern` forever.
pub fn periodic_stream(base: Base, pattern: &[Digit]) -> Result<DigitStream> {
    if pattern.is_empty() {
        return Err(Error::parameter("periodic pattern must be nonempty"));
    }
    for &d in pattern {
        base.check_digit(d)?;
    }
    if pattern.iter().all(|&d| d == base.top_digit()) {
        return Err(Error::parameter(format!(
            "period of all {} digits is not a canonical expansion",
            base.top_digit()
        )));
    }
    let pattern = pattern.to_vec();
    Ok(DigitStream::from_iter(base, StreamKind::Periodic, pattern.into_iter().cycle()))
}

/// Whether block-oscillator position `n >= 1` lies in a block `[4^j, 2*4^j)`.
#[inline]
pub fn oscillator_block(n: u64) -> bool {
    (63 - n.leading_zeros()) % 2 == 0
}

/// `a` on positions `4^j <= n < 2*4^j`, `b` elsewhere.
pub fn block_oscillator_stream(base: Base, a: Digit, b: Digit) -> Result<DigitStream> {
    base.check_digit(a)?;
    base.check_digit(b)?;
    if a == b {
        return Err(Error::parameter("block oscillator needs two distinct digits"));
    }
    let iter = (1u64..).map(move |n| if oscillator_block(n) { a } else { b });
    Ok(DigitStream::from_iter(base, StreamKind::BlockOscillator, iter))
}

/// I.i.d. uniform digits from a seeded ChaCha8 generator.
pub fn random_stream(base: Base, seed: u64) -> DigitStream {
    random_from(base, ChaCha8Rng::seed_from_u64(seed))
}

/// Stream number `index` of a batch seeded by `seed`. Independent of how the
/// batch is split across workers.
pub fn random_stream_indexed(base: Base, seed: u64, index: u64) -> DigitStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    random_from(base, rng)
}

fn random_from(base: Base, mut rng: ChaCha8Rng) -> DigitStream {
    let s = base.get();
    let iter = std::iter::repeat_with(move || rng.random_range(0..s) as Digit);
    DigitStream::from_iter(base, StreamKind::Random, iter)
}

/// A finite stream over caller-supplied digits.
pub fn explicit_stream(base: Base, digits: Vec<Digit>) -> Result<DigitStream> {
    for &d in &digits {
        base.check_digit(d)?;
    }
    Ok(DigitStream::from_iter(base, StreamKind::Explicit, digits.into_iter()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: u32) -> Base {
        Base::new(s).unwrap()
    }

    #[test]
    fn champernowne_prefixes() {
        assert_eq!(champernowne_stream(b(2)).take_prefix(8), vec![1, 1, 0, 1, 1, 1, 0, 0]);
        assert_eq!(champernowne_stream(b(3)).take_prefix(6), vec![1, 2, 1, 0, 1, 1]);
        assert_eq!(champernowne_stream(b(10)).take_prefix(10), vec![1, 2, 3, 4, 5, 6, 7, 8, 9, 1]);
    }

    #[test]
    fn oscillator_prefix() {
        let mut s = block_oscillator_stream(b(2), 1, 0).unwrap();
        assert_eq!(s.take_prefix(8), vec![1, 0, 0, 1, 1, 1, 1, 0]);
        let mut s = block_oscillator_stream(b(3), 0, 2).unwrap();
        assert!(s.take_prefix(5000).iter().all(|&d| d != 1));
        assert!(block_oscillator_stream(b(3), 1, 1).is_err());
        assert!(block_oscillator_stream(b(3), 1, 3).is_err());
    }

    #[test]
    fn rational_stream_matches_expand() {
        let x = BigRational::new(5.into(), 17.into());
        let a = rational_stream(&x, b(7)).unwrap().take_prefix(50);
        assert_eq!(a, crate::digits::expand(&x, b(7), 50).unwrap());
        assert!(rational_stream(&BigRational::from_integer(1.into()), b(3)).is_err());
    }

    #[test]
    fn periodic_rejects_top_digit_period() {
        assert!(periodic_stream(b(3), &[2, 2]).is_err());
        assert!(periodic_stream(b(3), &[]).is_err());
        assert_eq!(periodic_stream(b(3), &[0, 1]).unwrap().take_prefix(5), vec![0, 1, 0, 1, 0]);
    }

    #[test]
    fn random_streams_are_reproducible() {
        let a = random_stream(b(5), 42).take_prefix(1000);
        let c = random_stream(b(5), 42).take_prefix(1000);
        assert_eq!(a, c);
        assert_ne!(a, random_stream(b(5), 43).take_prefix(1000));
        assert!(a.iter().all(|&d| d < 5));
        let i0 = random_stream_indexed(b(5), 42, 0).take_prefix(1000);
        let i1 = random_stream_indexed(b(5), 42, 1).take_prefix(1000);
        assert_eq!(i0, a);
        assert_ne!(i0, i1);
        assert_eq!(i1, random_stream_indexed(b(5), 42, 1).take_prefix(1000));
    }

    #[test]
    fn explicit_stream_is_finite() {
        let mut s = explicit_stream(b(3), vec![0, 1, 2]).unwrap();
        assert_eq!(s.take_prefix(10), vec![0, 1, 2]);
        assert!(explicit_stream(b(3), vec![3]).is_err());
    }
}
