//! Probability measures on `[0, 1)` with independent s-adic digits.
//!
//! The measure `mu_p` puts a point mass on the forced digit at every fixed
//! position of `f_p` and the uniform law on every free position, so it is
//! the image of Lebesgue measure under `f_p`. Its entropy sequence is exact:
//! `h_n / ln s` is 0 on fixed positions and 1 on free ones.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::digits::{expand, Base, Digit, StochasticVector};
use crate::error::{Error, Result};
use crate::report::{DimensionReport, Provenance};
use crate::transform::{position_class, LayoutCursor, PositionClass, Slot, TransformParams};

/// Law of a single digit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PositionLaw {
    PointMass(Digit),
    Uniform,
    General(StochasticVector),
}

impl PositionLaw {
    pub fn to_vector(&self, base: Base) -> Result<StochasticVector> {
        match self {
            PositionLaw::PointMass(d) => StochasticVector::point_mass(base, *d),
            PositionLaw::Uniform => Ok(StochasticVector::uniform(base)),
            PositionLaw::General(v) => {
                if v.len() != base.get() as usize {
                    return Err(Error::contract("position law length differs from base"));
                }
                Ok(v.clone())
            }
        }
    }

    /// Entropy of the digit in units of `ln s`.
    pub fn entropy(&self, base: Base) -> LnsMultiple {
        match self {
            PositionLaw::PointMass(_) => LnsMultiple::Exact(BigRational::zero()),
            PositionLaw::Uniform => LnsMultiple::Exact(BigRational::one()),
            PositionLaw::General(v) => match v.equal_support() {
                Some(1) => LnsMultiple::Exact(BigRational::zero()),
                Some(m) if m == base.get() as usize => LnsMultiple::Exact(BigRational::one()),
                _ => {
                    let h: f64 = v.to_f64().iter().filter(|&&q| q > 0.0).map(|&q| -q * q.ln()).sum();
                    LnsMultiple::Approx(h / f64::from(base.get()).ln())
                }
            },
        }
    }
}

/// A multiple of `ln s`, exact when the law is a point mass or uniform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LnsMultiple {
    Exact(#[serde(with = "crate::serde_rational")] BigRational),
    Approx(f64),
}

impl LnsMultiple {
    pub fn to_f64(&self) -> f64 {
        match self {
            LnsMultiple::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            LnsMultiple::Approx(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            LnsMultiple::Exact(q) => Some(q),
            LnsMultiple::Approx(_) => None,
        }
    }

    fn add(&self, other: &LnsMultiple) -> LnsMultiple {
        match (self, other) {
            (LnsMultiple::Exact(a), LnsMultiple::Exact(b)) => LnsMultiple::Exact(a + b),
            _ => LnsMultiple::Approx(self.to_f64() + other.to_f64()),
        }
    }
}

type LawFn = Arc<dyn Fn(u64) -> PositionLaw + Send + Sync>;

#[derive(Clone)]
pub enum MeasureShape {
    /// `mu_p`, the image of Lebesgue measure under `f_p`.
    Transform(TransformParams),
    /// Lebesgue measure: every digit uniform.
    Uniform,
    /// Arbitrary per-position laws, indexed from 1.
    Custom(LawFn),
}

impl fmt::Debug for MeasureShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureShape::Transform(p) => f.debug_tuple("Transform").field(p).finish(),
            MeasureShape::Uniform => f.write_str("Uniform"),
            MeasureShape::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct IndependentDigitMeasure {
    base: Base,
    shape: MeasureShape,
}

pub fn mu_p(params: &TransformParams) -> IndependentDigitMeasure {
    IndependentDigitMeasure { base: params.base(), shape: MeasureShape::Transform(*params) }
}

pub fn uniform_measure(base: Base) -> IndependentDigitMeasure {
    IndependentDigitMeasure { base, shape: MeasureShape::Uniform }
}

/// A measure with caller-defined digit laws. Laws are validated when used.
pub fn custom_measure<F>(base: Base, law: F) -> IndependentDigitMeasure
where
    F: Fn(u64) -> PositionLaw + Send + Sync + 'static,
{
    IndependentDigitMeasure { base, shape: MeasureShape::Custom(Arc::new(law)) }
}

impl IndependentDigitMeasure {
    pub fn base(&self) -> Base {
        self.base
    }

    pub fn shape(&self) -> &MeasureShape {
        &self.shape
    }

    /// Law of the digit at position `n >= 1`.
    pub fn law(&self, n: u64) -> Result<PositionLaw> {
        if n == 0 {
            return Err(Error::parameter("positions start at 1"));
        }
        Ok(match &self.shape {
            MeasureShape::Transform(params) => match position_class(params, &BigUint::from(n))? {
                PositionClass::Fixed(d) => PositionLaw::PointMass(d),
                PositionClass::Free(_) => PositionLaw::Uniform,
            },
            MeasureShape::Uniform => PositionLaw::Uniform,
            MeasureShape::Custom(f) => f(n),
        })
    }

    /// Laws of positions `1, 2, ...` in order.
    pub fn laws(&self) -> Box<dyn Iterator<Item = PositionLaw> + Send + '_> {
        match &self.shape {
            MeasureShape::Transform(params) => Box::new(LayoutCursor::new(params).map(|slot| match slot {
                Slot::Fixed(d) => PositionLaw::PointMass(d),
                Slot::Free => PositionLaw::Uniform,
            })),
            MeasureShape::Uniform => Box::new(std::iter::repeat(PositionLaw::Uniform)),
            MeasureShape::Custom(f) => Box::new((1u64..).map(move |n| f(n))),
        }
    }
}

fn draw(law: &PositionLaw, base: Base, rng: &mut ChaCha8Rng) -> Result<Digit> {
    Ok(match law {
        PositionLaw::PointMass(d) => base.check_digit(*d)?,
        PositionLaw::Uniform => rng.random_range(0..base.get()) as Digit,
        PositionLaw::General(v) => {
            // inverse transform on the cumulative distribution
            let weights = v.to_f64();
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut pick = weights.iter().rposition(|&w| w > 0.0).unwrap_or(0);
            for (d, w) in weights.iter().enumerate() {
                acc += w;
                if u < acc && *w > 0.0 {
                    pick = d;
                    break;
                }
            }
            pick as Digit
        }
    })
}

fn sample_with(measure: &IndependentDigitMeasure, n: usize, mut rng: ChaCha8Rng) -> Result<Vec<Digit>> {
    measure.laws().take(n).map(|law| draw(&law, measure.base, &mut rng)).collect()
}

/// A digit prefix of length `n` drawn from `measure`. Fixed positions carry
/// their forced digit and consume no randomness.
pub fn sample(measure: &IndependentDigitMeasure, n: usize, seed: u64) -> Result<Vec<Digit>> {
    if n == 0 {
        return Err(Error::parameter("sample length must be at least 1"));
    }
    sample_with(measure, n, ChaCha8Rng::seed_from_u64(seed))
}

/// Sample number `index` of a batch: the ChaCha stream `index` under `seed`.
/// Batches split across workers by index reproduce the sequential result.
pub fn sample_indexed(measure: &IndependentDigitMeasure, n: usize, seed: u64, index: u64) -> Result<Vec<Digit>> {
    if n == 0 {
        return Err(Error::parameter("sample length must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    sample_with(measure, n, rng)
}

/// Bounds on a CDF value after scanning finitely many digits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdfInterval {
    #[serde(with = "crate::serde_rational")]
    pub lower: BigRational,
    #[serde(with = "crate::serde_rational")]
    pub upper: BigRational,
}

impl CdfInterval {
    pub fn midpoint(&self) -> BigRational {
        (&self.lower + &self.upper) / BigInt::from(2)
    }

    pub fn half_width(&self) -> BigRational {
        (&self.upper - &self.lower) / BigInt::from(2)
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lower <= q && q <= &self.upper
    }
}

/// `F(t) = measure([0, t])`, scanning the first `precision` digits of `t`.
///
/// At each position the mass of digits below `t`'s digit is added to the
/// lower bound, scaled by the probability of having matched `t` so far. The
/// remaining matched probability is the width of the interval. For `mu_p`
/// this is the Lebesgue measure of `{x : f_p(x) <= t}`, resolved to within
/// `s^-(free positions scanned)`.
pub fn cdf(measure: &IndependentDigitMeasure, t: &BigRational, precision: usize) -> Result<CdfInterval> {
    let one = BigRational::one();
    if t < &BigRational::zero() || t > &one {
        return Err(Error::domain(format!("t = {t} is outside [0, 1]")));
    }
    if t == &one {
        return Ok(CdfInterval { lower: one.clone(), upper: one });
    }
    let base = measure.base;
    let digits = expand(t, base, precision)?;
    let mut lower = BigRational::zero();
    let mut matched = BigRational::one();
    for (law, d) in measure.laws().zip(digits) {
        match &law {
            PositionLaw::PointMass(forced) => {
                if d > *forced {
                    lower += &matched;
                    matched = BigRational::zero();
                } else if d < *forced {
                    matched = BigRational::zero();
                }
            }
            PositionLaw::Uniform => {
                let s = BigInt::from(base.get());
                lower += &matched * BigRational::new(BigInt::from(d), s.clone());
                matched /= s;
            }
            PositionLaw::General(_) => {
                let StochasticVector::Exact(q) = law.to_vector(base)? else {
                    return Err(Error::contract("cdf needs exact digit laws"));
                };
                let below: BigRational = q[..d as usize].iter().sum();
                lower += &matched * below;
                matched *= &q[d as usize];
            }
        }
        if matched.is_zero() {
            break;
        }
    }
    let upper = &lower + &matched;
    Ok(CdfInterval { lower, upper })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropySequence {
    /// `h_j / ln s` for `j = 1..=n`.
    pub terms: Vec<LnsMultiple>,
}

impl EntropySequence {
    /// `H_j / ln s` for `j = 1..=n`.
    pub fn partial_sums(&self) -> Vec<LnsMultiple> {
        let mut acc = LnsMultiple::Exact(BigRational::zero());
        self.terms
            .iter()
            .map(|t| {
                acc = acc.add(t);
                acc.clone()
            })
            .collect()
    }

    /// `H_n / ln s`.
    pub fn total(&self) -> LnsMultiple {
        self.terms.iter().fold(LnsMultiple::Exact(BigRational::zero()), |a, t| a.add(t))
    }
}

pub fn entropy_sequence(measure: &IndependentDigitMeasure, n: usize) -> Result<EntropySequence> {
    if n == 0 {
        return Err(Error::parameter("entropy sequence length must be at least 1"));
    }
    let base = measure.base;
    let terms = measure
        .laws()
        .take(n)
        .map(|law| {
            law.to_vector(base)?;
            Ok(law.entropy(base))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EntropySequence { terms })
}

/// `c_n / n` along `n = m_k`, with the smallest value seen in each window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntropyRatioSample {
    pub k: u64,
    pub n: u64,
    /// `c_n = H_n / ln s`, counted position by position.
    pub coefficient: u64,
    #[serde(with = "crate::serde_rational")]
    pub ratio: BigRational,
    /// `p (2^(k-1) - 1) / ((p+1)(2^k - 1) - p 2^(k-1))`.
    #[serde(with = "crate::serde_rational")]
    pub closed_form: BigRational,
    /// Minimum of `c_j / j` over `m_{k-1} < j <= m_k`, and the last `j` attaining it.
    #[serde(with = "crate::serde_rational")]
    pub window_min: BigRational,
    pub window_argmin: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureDimension {
    pub s: u32,
    pub p: Option<u64>,
    pub samples: Vec<EntropyRatioSample>,
    /// Limit of the closed form, `p / (p+2)`, or 1 for Lebesgue measure.
    #[serde(with = "crate::serde_rational")]
    pub limit: BigRational,
}

impl MeasureDimension {
    /// Every sampled ratio equals its closed form.
    pub fn matches_closed_form(&self) -> bool {
        self.samples.iter().all(|s| s.ratio == s.closed_form)
    }

    /// No `c_j / j` inside a window `(m_{k-1}, m_k]` drops below both of
    /// the window's endpoint ratios, so the lower limit is read along `m_k`.
    pub fn minima_at_checkpoints(&self) -> bool {
        let mut prev: Option<&BigRational> = None;
        self.samples.iter().all(|s| {
            let floor = prev.map_or(&s.ratio, |r| r.min(&s.ratio));
            prev = Some(&s.ratio);
            &s.window_min >= floor
        })
    }

    pub fn to_report(&self) -> DimensionReport {
        DimensionReport::exact("measure-entropy-dimension", self.limit.clone(), Provenance::Computed)
    }
}

/// Walk budget for [`dimension_of_measure`].
pub const MAX_DIMENSION_WALK: u64 = 1 << 32;

/// Entropy dimension `liminf H_n / (n ln s)` evaluated along `m_k`, `k <= horizon`.
pub fn dimension_of_measure(measure: &IndependentDigitMeasure, horizon: u64) -> Result<MeasureDimension> {
    if horizon == 0 {
        return Err(Error::parameter("horizon must be at least 1"));
    }
    let s = measure.base.get();
    match &measure.shape {
        MeasureShape::Uniform => {
            let samples = (1..=horizon)
                .map(|k| {
                    let n = 1u64 << k.min(62);
                    let one = BigRational::one();
                    EntropyRatioSample {
                        k,
                        n,
                        coefficient: n,
                        ratio: one.clone(),
                        closed_form: one.clone(),
                        window_min: one,
                        window_argmin: n,
                    }
                })
                .collect();
            Ok(MeasureDimension { s, p: None, samples, limit: BigRational::one() })
        }
        MeasureShape::Transform(params) => transform_dimension(params, horizon),
        MeasureShape::Custom(_) => Err(Error::contract(
            "entropy dimension is only available for mu_p and Lebesgue measure",
        )),
    }
}

fn rank_m(params: &TransformParams, k: u64) -> Option<u64> {
    let s2 = u64::from(params.s()).checked_pow(2)?;
    let p = params.p();
    let h = 1u64.checked_shl(u32::try_from(k - 1).ok()?)?;
    s2.checked_mul(h.checked_mul(p + 2)?.checked_sub(p + 1)?)
}

fn transform_dimension(params: &TransformParams, horizon: u64) -> Result<MeasureDimension> {
    let p = params.p();
    let m_last = rank_m(params, horizon)
        .filter(|&m| m <= MAX_DIMENSION_WALK)
        .ok_or_else(|| Error::Resource(format!("m_{horizon} exceeds the walk budget")))?;
    let mut samples = Vec::with_capacity(horizon as usize);
    let mut cursor = LayoutCursor::new(params);
    let mut c: u64 = 0;
    let mut n: u64 = 0;
    for k in 1..=horizon {
        let m = rank_m(params, k).expect("below m_last");
        // exact running minimum of c_j / j; ties go to the later j
        let (mut best_c, mut best_n) = (u64::MAX, 1u64);
        while n < m {
            n += 1;
            if cursor.next() == Some(Slot::Free) {
                c += 1;
            }
            if best_c == u64::MAX || u128::from(c) * u128::from(best_n) <= u128::from(best_c) * u128::from(n) {
                best_c = c;
                best_n = n;
            }
        }
        let h = 1u64 << (k - 1);
        let closed_form = BigRational::new(
            BigInt::from(p * (h - 1)),
            BigInt::from((p + 1) * (2 * h - 1) - p * h),
        );
        samples.push(EntropyRatioSample {
            k,
            n: m,
            coefficient: c,
            ratio: BigRational::new(c.into(), m.into()),
            closed_form,
            window_min: BigRational::new(best_c.into(), best_n.into()),
            window_argmin: best_n,
        });
    }
    debug_assert_eq!(n, m_last);
    Ok(MeasureDimension {
        s: params.s(),
        p: Some(p),
        samples,
        limit: BigRational::new(p.into(), (p + 2).into()),
    })
}
