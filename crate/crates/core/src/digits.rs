//! Radix expansion of rationals and the digit alphabet `A = {0, .., s-1}`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single base-s digit. Digits are stored as raw `u8`; [`Base`] enforces the range.
pub type Digit = u8;

/// Largest supported radix; every digit must fit in a `u8`.
pub const MAX_BASE: u32 = 256;

/// Radix `s` of an expansion, `2 <= s <= 256`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Base(u32);

impl Base {
    pub fn new(s: u32) -> Result<Self> {
        if s < 2 {
            return Err(Error::parameter(format!("base must be at least 2, got {s}")));
        }
        if s > MAX_BASE {
            return Err(Error::parameter(format!("base must be at most {MAX_BASE}, got {s}")));
        }
        Ok(Base(s))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// The digit `s - 1`.
    #[inline]
    pub fn top_digit(self) -> Digit {
        (self.0 - 1) as Digit
    }

    #[inline]
    pub fn contains(self, d: Digit) -> bool {
        u32::from(d) < self.0
    }

    pub fn check_digit(self, d: Digit) -> Result<Digit> {
        if self.contains(d) {
            Ok(d)
        } else {
            Err(Error::parameter(format!("digit {d} out of range for base {}", self.0)))
        }
    }

    pub fn as_biguint(self) -> BigUint {
        BigUint::from(self.0)
    }

    pub fn as_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }
}

impl TryFrom<u32> for Base {
    type Error = Error;

    fn try_from(s: u32) -> Result<Self> {
        Base::new(s)
    }
}

impl From<Base> for u32 {
    fn from(b: Base) -> u32 {
        b.0
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn unit_interval_check(x: &BigRational) -> Result<()> {
    if x.is_negative() || *x >= BigRational::one() {
        return Err(Error::domain(format!("x = {x} is outside [0, 1)")));
    }
    Ok(())
}

/// First `n` digits of the canonical base-s expansion of `x`.
///
/// Long division never produces a tail of `s - 1` digits, so s-adic rationals
/// come out in their terminating form.
pub fn expand(x: &BigRational, base: Base, n: usize) -> Result<Vec<Digit>> {
    unit_interval_check(x)?;
    let s = base.as_bigint();
    let den = x.denom().clone();
    let mut rem = x.numer().clone();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        if rem.is_zero() {
            out.resize(n, 0);
            break;
        }
        rem *= &s;
        let d = &rem / &den;
        rem -= &d * &den;
        out.push(d.to_u8().expect("quotient digit below base"));
    }
    Ok(out)
}

/// Exact value `sum_n s^-n * digits[n-1]` of a finite prefix.
pub fn evaluate_prefix(digits: &[Digit], base: Base) -> Result<BigRational> {
    let s = base.as_bigint();
    let mut num = BigInt::zero();
    for &d in digits {
        base.check_digit(d)?;
        num = num * &s + BigInt::from(d);
    }
    let den = num_traits::pow(s, digits.len());
    Ok(BigRational::new(num, den))
}

/// A probability vector over the digit alphabet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum StochasticVector {
    Exact(#[serde(with = "crate::serde_rational::vec")] Vec<BigRational>),
    Float(Vec<f64>),
}

/// Tolerance on the total mass of a floating-point vector.
pub const FLOAT_SUM_TOLERANCE: f64 = 1e-12;

impl StochasticVector {
    pub fn exact(entries: Vec<BigRational>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::parameter("stochastic vector must be nonempty"));
        }
        if entries.iter().any(|e| e.is_negative()) {
            return Err(Error::parameter("stochastic vector has a negative entry"));
        }
        let total: BigRational = entries.iter().sum();
        if !total.is_one() {
            return Err(Error::parameter(format!("stochastic vector sums to {total}, not 1")));
        }
        Ok(StochasticVector::Exact(entries))
    }

    pub fn float(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::parameter("stochastic vector must be nonempty"));
        }
        if entries.iter().any(|e| !e.is_finite() || *e < 0.0) {
            return Err(Error::parameter("stochastic vector has a negative or non-finite entry"));
        }
        let total: f64 = entries.iter().sum();
        if (total - 1.0).abs() > FLOAT_SUM_TOLERANCE {
            return Err(Error::parameter(format!("stochastic vector sums to {total}, not 1")));
        }
        Ok(StochasticVector::Float(entries))
    }

    pub fn uniform(base: Base) -> Self {
        let s = base.get() as usize;
        StochasticVector::Exact(vec![BigRational::new(1.into(), (s as i64).into()); s])
    }

    pub fn point_mass(base: Base, d: Digit) -> Result<Self> {
        base.check_digit(d)?;
        let mut v = vec![BigRational::zero(); base.get() as usize];
        v[d as usize] = BigRational::one();
        Ok(StochasticVector::Exact(v))
    }

    pub fn len(&self) -> usize {
        match self {
            StochasticVector::Exact(v) => v.len(),
            StochasticVector::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            StochasticVector::Exact(v) => v.iter().map(|e| e.to_f64().unwrap_or(f64::NAN)).collect(),
            StochasticVector::Float(v) => v.clone(),
        }
    }

    /// Size of the support when all nonzero entries are exactly equal.
    pub fn equal_support(&self) -> Option<usize> {
        match self {
            StochasticVector::Exact(v) => {
                let nz: Vec<_> = v.iter().filter(|e| !e.is_zero()).collect();
                let first = nz.first()?;
                nz.iter().all(|e| e == first).then_some(nz.len())
            }
            StochasticVector::Float(v) => {
                let nz: Vec<_> = v.iter().filter(|e| **e != 0.0).collect();
                let first = nz.first()?;
                nz.iter().all(|e| e == first).then_some(nz.len())
            }
        }
    }

    pub fn is_uniform(&self) -> bool {
        self.equal_support() == Some(self.len())
    }

    pub fn is_point_mass(&self) -> bool {
        self.equal_support() == Some(1)
    }
}
