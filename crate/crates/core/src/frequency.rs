//! Digit counts `N_i(x, k)` and finite-depth classification of digit streams.
//!
//! Frequencies are limits and cannot be decided from a prefix, so
//! [`classify`] is a heuristic: a digit's ratio `N_i(x, n) / n` is declared
//! converged when its spread (max minus min) over the last half of the
//! checkpoints stays below `delta`. The verdicts are then combined by
//! [`ClassTag::decide`]. All ratios and thresholds are exact rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::digits::Base;
use crate::error::{Error, Result};
use crate::stream::DigitStream;

/// Digit ratios recorded at one position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub position: u64,
    #[serde(with = "crate::serde_rational::vec")]
    pub ratios: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyProfile {
    pub base: Base,
    /// `counts[i] = N_i(x, depth)`
    pub counts: Vec<u64>,
    pub depth: u64,
    pub checkpoints: Vec<Checkpoint>,
}

impl FrequencyProfile {
    pub fn ratio(&self, digit: usize) -> BigRational {
        ratio(self.counts[digit], self.depth.max(1))
    }
}

fn ratio(count: u64, n: u64) -> BigRational {
    BigRational::new(BigInt::from(count), BigInt::from(n))
}

/// Counts the first `k` digits of `stream`, logging ratios at every
/// checkpoint position `<= k`. A finite stream that runs out early yields a
/// profile whose `depth` is the number of digits actually read.
pub fn count_digits(stream: &mut DigitStream, k: u64, checkpoints: &[u64]) -> FrequencyProfile {
    let base = stream.base();
    let s = base.get() as usize;
    let mut counts = vec![0u64; s];
    let mut log = Vec::new();
    let mut cps = checkpoints.iter().copied().filter(|&c| c >= 1 && c <= k).peekable();
    let mut depth = 0u64;
    while depth < k {
        let Some(d) = stream.next() else { break };
        counts[d as usize] += 1;
        depth += 1;
        while cps.peek().is_some_and(|&c| c <= depth) {
            let c = cps.next().unwrap();
            if c == depth {
                log.push(Checkpoint {
                    position: depth,
                    ratios: counts.iter().map(|&m| ratio(m, depth)).collect(),
                });
            }
        }
    }
    FrequencyProfile { base, counts, depth, checkpoints: log }
}

pub const DEFAULT_CHECKPOINT_START: u64 = 64;
/// Growth factor of the default checkpoint schedule, as `(num, den)`.
pub const DEFAULT_CHECKPOINT_RATIO: (u64, u64) = (11, 10);
pub const DEFAULT_DEPTH: u64 = 1 << 20;

/// Positions `n_0 = start`, `n_{j+1} = max(n_j + 1, floor(n_j * num / den))`, up to `depth`.
pub fn geometric_checkpoints(start: u64, num: u64, den: u64, depth: u64) -> Result<Vec<u64>> {
    if start == 0 || den == 0 || num <= den {
        return Err(Error::parameter("geometric checkpoints need start >= 1 and ratio > 1"));
    }
    let mut out = Vec::new();
    let mut n = start;
    while n <= depth {
        out.push(n);
        let next = (u128::from(n) * u128::from(num) / u128::from(den)) as u64;
        n = next.max(n + 1);
    }
    Ok(out)
}

pub fn default_checkpoints(depth: u64) -> Vec<u64> {
    let (num, den) = DEFAULT_CHECKPOINT_RATIO;
    geometric_checkpoints(DEFAULT_CHECKPOINT_START, num, den, depth).expect("valid default schedule")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationConfig {
    pub depth: u64,
    pub checkpoints: Vec<u64>,
    #[serde(with = "crate::serde_rational")]
    pub delta: BigRational,
    #[serde(with = "crate::serde_rational")]
    pub epsilon: BigRational,
}

impl Default for ClassificationConfig {
    fn default() -> Self {
        ClassificationConfig::with_depth(DEFAULT_DEPTH)
    }
}

impl ClassificationConfig {
    /// Default thresholds `delta = 1/20`, `epsilon = 1/50` and the default
    /// checkpoint schedule truncated at `depth`.
    pub fn with_depth(depth: u64) -> Self {
        ClassificationConfig {
            depth,
            checkpoints: default_checkpoints(depth),
            delta: BigRational::new(1.into(), 20.into()),
            epsilon: BigRational::new(1.into(), 50.into()),
        }
    }

    pub fn checkpoints(mut self, checkpoints: Vec<u64>) -> Self {
        self.checkpoints = checkpoints;
        self
    }

    pub fn delta(mut self, delta: BigRational) -> Self {
        self.delta = delta;
        self
    }

    pub fn epsilon(mut self, epsilon: BigRational) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.delta.is_positive() || !self.epsilon.is_positive() {
            return Err(Error::parameter("delta and epsilon must be positive"));
        }
        if self.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::parameter("checkpoints must be strictly increasing"));
        }
        if self.checkpoints.first().is_some_and(|&c| c == 0) {
            return Err(Error::parameter("checkpoint positions start at 1"));
        }
        if self.checkpoints.last().is_some_and(|&c| c > self.depth) {
            return Err(Error::parameter("checkpoints must not exceed depth"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Converged {
        #[serde(with = "crate::serde_rational")]
        estimate: BigRational,
        #[serde(with = "crate::serde_rational")]
        spread: BigRational,
    },
    Oscillating {
        #[serde(with = "crate::serde_rational")]
        spread: BigRational,
    },
}

impl Verdict {
    pub fn is_converged(&self) -> bool {
        matches!(self, Verdict::Converged { .. })
    }

    pub fn spread(&self) -> &BigRational {
        match self {
            Verdict::Converged { spread, .. } | Verdict::Oscillating { spread } => spread,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassTag {
    Normal,
    Quasinormal,
    ParticularlyNonNormal,
    EssentiallyNonNormal,
    Undetermined,
}

impl ClassTag {
    pub const ALL: [ClassTag; 5] = [
        ClassTag::Normal,
        ClassTag::Quasinormal,
        ClassTag::ParticularlyNonNormal,
        ClassTag::EssentiallyNonNormal,
        ClassTag::Undetermined,
    ];

    /// Decision table over per-digit verdicts.
    ///
    /// | verdicts                                   | tag                   |
    /// |--------------------------------------------|-----------------------|
    /// | all converged, every estimate within eps of 1/s | Normal           |
    /// | all converged, otherwise                   | Quasinormal           |
    /// | all oscillating                            | EssentiallyNonNormal  |
    /// | mixed                                      | ParticularlyNonNormal |
    pub fn decide(verdicts: &[Verdict], base: Base, epsilon: &BigRational) -> ClassTag {
        if verdicts.is_empty() {
            return ClassTag::Undetermined;
        }
        let converged = verdicts.iter().filter(|v| v.is_converged()).count();
        if converged == verdicts.len() {
            let uniform = BigRational::new(1.into(), BigInt::from(base.get()));
            let near = verdicts.iter().all(|v| match v {
                Verdict::Converged { estimate, .. } => (estimate - &uniform).abs() <= *epsilon,
                Verdict::Oscillating { .. } => false,
            });
            if near {
                ClassTag::Normal
            } else {
                ClassTag::Quasinormal
            }
        } else if converged == 0 {
            ClassTag::EssentiallyNonNormal
        } else {
            ClassTag::ParticularlyNonNormal
        }
    }

    /// Name of the set in the four-way decomposition of `[0, 1]`.
    pub fn set_name(self) -> &'static str {
        match self {
            ClassTag::Normal => "N_s",
            ClassTag::Quasinormal => "W_s",
            ClassTag::ParticularlyNonNormal => "T_s",
            ClassTag::EssentiallyNonNormal => "L_s",
            ClassTag::Undetermined => "?",
        }
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberClass {
    pub tag: ClassTag,
    /// One verdict per digit; empty when the tag is `Undetermined`.
    pub verdicts: Vec<Verdict>,
}

/// Fewest checkpoints needed before a verdict is attempted.
pub const MIN_CHECKPOINTS: usize = 4;

/// Classifies an already-counted profile.
pub fn classify_profile(profile: &FrequencyProfile, config: &ClassificationConfig) -> Result<NumberClass> {
    config.validate()?;
    let cps = &profile.checkpoints;
    if cps.len() < MIN_CHECKPOINTS {
        return Ok(NumberClass { tag: ClassTag::Undetermined, verdicts: Vec::new() });
    }
    let tail = &cps[cps.len() / 2..];
    let s = profile.base.get() as usize;
    let verdicts: Vec<Verdict> = (0..s)
        .map(|i| {
            let mut lo = &tail[0].ratios[i];
            let mut hi = lo;
            for cp in &tail[1..] {
                let r = &cp.ratios[i];
                if r < lo {
                    lo = r;
                }
                if r > hi {
                    hi = r;
                }
            }
            let spread = hi - lo;
            if spread < config.delta {
                Verdict::Converged { estimate: tail.last().unwrap().ratios[i].clone(), spread }
            } else {
                Verdict::Oscillating { spread }
            }
        })
        .collect();
    let tag = ClassTag::decide(&verdicts, profile.base, &config.epsilon);
    Ok(NumberClass { tag, verdicts })
}

/// Counts `config.depth` digits of `stream` and classifies them.
pub fn classify_with_profile(
    stream: &mut DigitStream,
    config: &ClassificationConfig,
) -> Result<(NumberClass, FrequencyProfile)> {
    config.validate()?;
    let profile = count_digits(stream, config.depth, &config.checkpoints);
    let class = classify_profile(&profile, config)?;
    Ok((class, profile))
}

pub fn classify(stream: &mut DigitStream, config: &ClassificationConfig) -> Result<NumberClass> {
    classify_with_profile(stream, config).map(|(c, _)| c)
}

/// Sum-to-one check of the ratios at a checkpoint.
pub fn ratios_sum_to_one(cp: &Checkpoint) -> bool {
    let total: BigRational = cp.ratios.iter().sum();
    total == BigRational::from_integer(1.into()) && cp.ratios.iter().all(|r| !r.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::{block_oscillator_stream, champernowne_stream, explicit_stream, periodic_stream, random_stream};
    use num_traits::Zero;
    use proptest::prelude::*;

    fn b(s: u32) -> Base {
        Base::new(s).unwrap()
    }

    #[test]
    fn count_examples() {
        let mut zeros = periodic_stream(b(3), &[0]).unwrap();
        assert_eq!(count_digits(&mut zeros, 10, &[]).counts, vec![10, 0, 0]);
        let mut per = periodic_stream(b(3), &[0, 1, 2]).unwrap();
        assert_eq!(count_digits(&mut per, 9, &[]).counts, vec![3, 3, 3]);
        let mut ch = champernowne_stream(b(2));
        assert_eq!(count_digits(&mut ch, 8, &[]).counts, vec![3, 5]);
    }

    #[test]
    fn oscillator_ratios() {
        let mut s = block_oscillator_stream(b(2), 1, 0).unwrap();
        let p = count_digits(&mut s, 8, &[3, 7]);
        assert_eq!(p.checkpoints[0].ratios[1], BigRational::new(1.into(), 3.into()));
        assert_eq!(p.checkpoints[1].ratios[1], BigRational::new(5.into(), 7.into()));
        assert_eq!(p.checkpoints[1].ratios[0], BigRational::new(2.into(), 7.into()));
    }

    #[test]
    fn default_schedule_shape() {
        let cps = default_checkpoints(1000);
        assert_eq!(&cps[..5], &[64, 70, 77, 84, 92]);
        assert!(cps.windows(2).all(|w| w[0] < w[1]));
        assert!(*cps.last().unwrap() <= 1000);
        assert!(geometric_checkpoints(64, 1, 1, 100).is_err());
    }

    #[test]
    fn four_golden_classes() {
        let cfg = ClassificationConfig::with_depth(1 << 16);
        let mut s = periodic_stream(b(3), &[0, 1, 2]).unwrap();
        assert_eq!(classify(&mut s, &cfg).unwrap().tag, ClassTag::Normal);
        let mut s = periodic_stream(b(3), &[0, 0, 1]).unwrap();
        assert_eq!(classify(&mut s, &cfg).unwrap().tag, ClassTag::Quasinormal);
        let mut s = block_oscillator_stream(b(3), 0, 1).unwrap();
        assert_eq!(classify(&mut s, &cfg).unwrap().tag, ClassTag::ParticularlyNonNormal);
        let mut s = block_oscillator_stream(b(2), 0, 1).unwrap();
        assert_eq!(classify(&mut s, &cfg).unwrap().tag, ClassTag::EssentiallyNonNormal);
    }

    #[test]
    fn too_few_checkpoints_is_undetermined() {
        let cfg = ClassificationConfig::with_depth(1000).checkpoints(vec![10, 20, 30]);
        let mut s = periodic_stream(b(3), &[0, 1, 2]).unwrap();
        let c = classify(&mut s, &cfg).unwrap();
        assert_eq!(c.tag, ClassTag::Undetermined);
        assert!(c.verdicts.is_empty());
        // finite stream that stops before the checkpoints
        let cfg = ClassificationConfig::with_depth(1 << 16);
        let mut s = explicit_stream(b(3), vec![0; 80]).unwrap();
        assert_eq!(classify(&mut s, &cfg).unwrap().tag, ClassTag::Undetermined);
    }

    #[test]
    fn invalid_configs_rejected() {
        let base = ClassificationConfig::with_depth(100);
        assert!(base.clone().delta(BigRational::zero()).validate().is_err());
        assert!(base.clone().epsilon(BigRational::new((-1).into(), 2.into())).validate().is_err());
        assert!(base.clone().checkpoints(vec![5, 5]).validate().is_err());
        assert!(base.clone().checkpoints(vec![50, 200]).validate().is_err());
        assert!(base.checkpoints(vec![0, 4]).validate().is_err());
    }

    #[test]
    fn classify_is_deterministic() {
        let cfg = ClassificationConfig::with_depth(20_000);
        let a = classify(&mut random_stream(b(4), 9), &cfg).unwrap();
        let c = classify(&mut random_stream(b(4), 9), &cfg).unwrap();
        assert_eq!(a, c);
    }

    proptest! {
        #[test]
        fn counts_sum_to_depth(s in 2u32..10, seed in any::<u64>(), k in 1u64..5000) {
            let mut st = random_stream(b(s), seed);
            let p = count_digits(&mut st, k, &default_checkpoints(k));
            prop_assert_eq!(p.counts.iter().sum::<u64>(), k);
            prop_assert_eq!(p.depth, k);
            for cp in &p.checkpoints {
                prop_assert!(ratios_sum_to_one(cp));
            }
        }

        #[test]
        fn binary_streams_never_particularly_non_normal(
            digits in proptest::collection::vec(0u8..2, 256..4096),
            delta_den in 2i64..200,
        ) {
            let n = digits.len() as u64;
            let cfg = ClassificationConfig::with_depth(n)
                .delta(BigRational::new(1.into(), delta_den.into()));
            let mut st = explicit_stream(b(2), digits).unwrap();
            let c = classify(&mut st, &cfg).unwrap();
            prop_assert_ne!(c.tag, ClassTag::ParticularlyNonNormal);
        }
    }
}
