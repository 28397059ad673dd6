//! The insertion transforms `phi_p`, `psi_p` and `f_p = psi_p . phi_p`.
//!
//! `f_p` maps the digits `alpha_1 alpha_2 ...` of `x` to a sequence `z` split
//! into groups. Group `k` opens with a fixed segment of `s^2 * 2^(k-1)`
//! positions whose digits do not depend on `x`, followed by a free segment
//! carrying the next `s^2 * p * 2^(k-1)` digits of `x`:
//!
//! ```text
//! group k, h = 2^(k-1):
//!   for i in 0..=s-2: h times [i repeated s-1, s-1]
//!   h times [s-1, 0, 1, .., s-2]
//!   alpha_{(h-1)s^2p + 1} .. alpha_{(2h-1)s^2p}
//! ```
//!
//! The transform is available in two independent forms: compositionally,
//! through annotated [`phi`] and [`psi`] stream adapters, and positionally,
//! through the closed-form [`position_class`]. Both must agree digit for
//! digit.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::digits::{Base, Digit};
use crate::error::{Error, Result};
use crate::stream::{DigitStream, StreamKind};

/// Base `s >= 3` and group parameter `p >= 1` of `f_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TransformParams {
    base: Base,
    p: u64,
}

impl TransformParams {
    pub fn new(s: u32, p: u64) -> Result<Self> {
        let base = Base::new(s)?;
        if s == 2 {
            return Err(Error::parameter(
                "base 2 is not supported: T_2 is empty, so there is no particularly non-normal set to construct",
            ));
        }
        if p == 0 {
            return Err(Error::parameter("p must be a positive integer"));
        }
        Ok(TransformParams { base, p })
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn s(&self) -> u32 {
        self.base.get()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn s_big(&self) -> BigUint {
        self.base.as_biguint()
    }

    fn s2(&self) -> BigUint {
        let s = self.s_big();
        &s * &s
    }

    fn top(&self) -> Digit {
        self.base.top_digit()
    }
}

impl fmt::Display for TransformParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s={}, p={}", self.s(), self.p)
    }
}

/// What position `n` of `z = f_p(x)` holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PositionClass {
    /// The same digit for every `x`.
    Fixed(Digit),
    /// The digit `alpha_j(x)` for the carried source index `j >= 1`.
    Free(#[serde(with = "crate::serde_rational::biguint")] BigUint),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupLayout {
    pub k: u64,
    /// First position of the group, `l_{k-1} + 1`.
    #[serde(with = "crate::serde_rational::biguint")]
    pub start: BigUint,
    #[serde(with = "crate::serde_rational::biguint")]
    pub fixed_len: BigUint,
    #[serde(with = "crate::serde_rational::biguint")]
    pub free_len: BigUint,
    /// Last position of the group, `l_k`.
    #[serde(with = "crate::serde_rational::biguint")]
    pub end: BigUint,
}

fn pow2(e: u64) -> BigUint {
    BigUint::one() << e
}

fn group_end_unchecked(params: &TransformParams, k: u64) -> BigUint {
    params.s2() * (params.p + 1) * (pow2(k) - 1u32)
}

fn check_group(k: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::parameter("group index k starts at 1"));
    }
    Ok(())
}

fn check_digit_index(params: &TransformParams, i: Digit) -> Result<()> {
    if u32::from(i) + 2 > params.s() {
        return Err(Error::parameter(format!(
            "checkpoints are defined for digits 0..={} only, got {i}",
            params.s() - 2
        )));
    }
    Ok(())
}

/// `l_k = s^2 (p+1) (2^k - 1)`, the last position of group `k`.
pub fn group_end(params: &TransformParams, k: u64) -> Result<BigUint> {
    check_group(k)?;
    Ok(group_end_unchecked(params, k))
}

pub fn group_layout(params: &TransformParams, k: u64) -> Result<GroupLayout> {
    check_group(k)?;
    let prev = group_end_unchecked(params, k - 1);
    let h = pow2(k - 1);
    let fixed_len = params.s2() * &h;
    let free_len = &fixed_len * params.p;
    Ok(GroupLayout { k, start: &prev + 1u32, end: &prev + &fixed_len + &free_len, fixed_len, free_len })
}

/// `m'_{k+1}(i) = l_k + s (i+1) 2^k`: the end of the run of digit `i` in group `k+1`.
pub fn upper_checkpoint(params: &TransformParams, k: u64, i: Digit) -> Result<BigUint> {
    check_group(k)?;
    check_digit_index(params, i)?;
    Ok(group_end_unchecked(params, k) + params.s_big() * (u32::from(i) + 1) * pow2(k))
}

/// `m''_{k+1}(i) = l_k + s i 2^k + 1`: the start of the run of digit `i` in group `k+1`.
pub fn lower_checkpoint(params: &TransformParams, k: u64, i: Digit) -> Result<BigUint> {
    check_group(k)?;
    check_digit_index(params, i)?;
    Ok(group_end_unchecked(params, k) + params.s_big() * u32::from(i) * pow2(k) + 1u32)
}

/// Group index `k` with `l_{k-1} < n <= l_k`.
fn group_of(params: &TransformParams, n: &BigUint) -> u64 {
    let q = params.s2() * (params.p + 1);
    // smallest k with q (2^k - 1) >= n, i.e. 2^k > ceil(n / q)
    let m = Integer::div_ceil(n, &q);
    m.bits()
}

/// Closed-form classification of position `n >= 1` of `f_p(x)`.
pub fn position_class(params: &TransformParams, n: &BigUint) -> Result<PositionClass> {
    if n.is_zero() {
        return Err(Error::parameter("positions start at 1"));
    }
    let k = group_of(params, n);
    let offset = n - group_end_unchecked(params, k - 1);
    let h = pow2(k - 1);
    let s = params.s_big();
    let fixed_len = params.s2() * &h;
    if offset <= fixed_len {
        let block = Integer::div_ceil(&offset, &(&s * &h));
        let r = ((&offset - 1u32) % &s) + 1u32;
        let block = block.to_u32().expect("block index below s");
        let r = r.to_u32().expect("residue below s");
        let d = if block < params.s() {
            if r < params.s() {
                block - 1
            } else {
                params.s() - 1
            }
        } else if r == 1 {
            params.s() - 1
        } else {
            r - 2
        };
        Ok(PositionClass::Fixed(d as Digit))
    } else {
        let earlier = params.s2() * params.p * (&h - 1u32);
        Ok(PositionClass::Free(earlier + (offset - fixed_len)))
    }
}

/// Position class as seen by a sequential walker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Fixed(Digit),
    Free,
}

/// Sequential walk over the positions `1, 2, ...` of `f_p(x)` in machine
/// integers. Cheaper than calling [`position_class`] per position.
#[derive(Debug, Clone)]
pub struct LayoutCursor {
    s: u64,
    free_len: u64,
    fixed_len: u64,
    h: u64,
    offset: u64,
    k: u64,
}

impl LayoutCursor {
    pub fn new(params: &TransformParams) -> Self {
        let s = u64::from(params.s());
        LayoutCursor { s, free_len: s * s * params.p(), fixed_len: s * s, h: 1, offset: 0, k: 1 }
    }

    /// Index of the group holding the position returned by the last `next`.
    pub fn group(&self) -> u64 {
        self.k
    }

    fn fixed_digit(&self, offset: u64) -> Digit {
        let s = self.s;
        let block = (offset - 1) / (s * self.h) + 1;
        let r = (offset - 1) % s + 1;
        let d = if block < s {
            if r < s {
                block - 1
            } else {
                s - 1
            }
        } else if r == 1 {
            s - 1
        } else {
            r - 2
        };
        d as Digit
    }
}

impl Iterator for LayoutCursor {
    type Item = Slot;

    #[inline]
    fn next(&mut self) -> Option<Slot> {
        if self.offset == self.fixed_len + self.free_len {
            self.k += 1;
            self.h *= 2;
            self.fixed_len *= 2;
            self.free_len *= 2;
            self.offset = 0;
        }
        self.offset += 1;
        if self.offset <= self.fixed_len {
            Some(Slot::Fixed(self.fixed_digit(self.offset)))
        } else {
            Some(Slot::Free)
        }
    }
}

/// Provenance of one digit of an annotated stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tag {
    Fixed,
    /// Carries `alpha_j(x)` for this source index.
    Free(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tagged {
    pub digit: Digit,
    pub tag: Tag,
}

/// Which stage of `f_p` produced an annotated stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Plain digits with no transform structure.
    Raw,
    /// Output of `phi_p`, a member of `M_p`.
    Phi(TransformParams),
    /// Output of `psi_p . phi_p`, a member of `S_p`.
    Psi(TransformParams),
}

/// Digit stream annotated with fixed/free tags.
pub struct TaggedStream {
    base: Base,
    stage: Stage,
    inner: Box<dyn Iterator<Item = Tagged> + Send>,
}

impl TaggedStream {
    /// Wraps raw digits, tagging each position as free. Such a stream carries
    /// no `M_p` membership and is rejected by [`psi`].
    pub fn untagged(x: DigitStream) -> Self {
        let base = x.base();
        let iter = x.zip(1u64..).map(|(digit, j)| Tagged { digit, tag: Tag::Free(j) });
        TaggedStream { base, stage: Stage::Raw, inner: Box::new(iter) }
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    /// Drops the annotations.
    pub fn into_digits(self) -> DigitStream {
        DigitStream::from_iter(self.base, StreamKind::Transformed, self.inner.map(|t| t.digit))
    }
}

impl Iterator for TaggedStream {
    type Item = Tagged;

    #[inline]
    fn next(&mut self) -> Option<Tagged> {
        self.inner.next()
    }
}

struct Phi {
    s: u64,
    top: Digit,
    group_free: u64,
    h: u64,
    // 0..=s-2: runs of digit `segment`; s-1: run of s-1; s: copied source digits
    segment: u64,
    left: u64,
    source_index: u64,
    x: DigitStream,
}

impl Phi {
    fn segment_len(&self) -> u64 {
        if self.segment + 1 < self.s {
            self.h * (self.s - 1)
        } else if self.segment + 1 == self.s {
            self.h
        } else {
            self.group_free
        }
    }
}

impl Iterator for Phi {
    type Item = Tagged;

    fn next(&mut self) -> Option<Tagged> {
        while self.left == 0 {
            self.segment += 1;
            if self.segment > self.s {
                self.segment = 0;
                self.h *= 2;
                self.group_free *= 2;
            }
            self.left = self.segment_len();
        }
        self.left -= 1;
        if self.segment < self.s - 1 {
            Some(Tagged { digit: self.segment as Digit, tag: Tag::Fixed })
        } else if self.segment == self.s - 1 {
            Some(Tagged { digit: self.top, tag: Tag::Fixed })
        } else {
            let digit = self.x.next()?;
            self.source_index += 1;
            Some(Tagged { digit, tag: Tag::Free(self.source_index) })
        }
    }
}

/// `y = phi_p(x)`: before the `k`-th group of `s^2 p 2^(k-1)` source digits,
/// insert each digit `i <= s-2` repeated `2^(k-1) (s-1)` times, then `s-1`
/// repeated `2^(k-1)` times.
pub fn phi(params: &TransformParams, x: DigitStream) -> Result<TaggedStream> {
    if x.base() != params.base() {
        return Err(Error::parameter(format!(
            "stream base {} does not match transform base {}",
            x.base(),
            params.base()
        )));
    }
    let s = u64::from(params.s());
    let mut phi = Phi {
        s,
        top: params.top(),
        group_free: s * s * params.p(),
        h: 1,
        segment: 0,
        left: 0,
        source_index: 0,
        x,
    };
    phi.left = phi.segment_len();
    Ok(TaggedStream { base: params.base(), stage: Stage::Phi(*params), inner: Box::new(phi) })
}

struct Psi {
    top: Digit,
    run_digit: Digit,
    run_len: u32,
    max_run: u32,
    pending: VecDeque<Tagged>,
    y: TaggedStream,
}

impl Iterator for Psi {
    type Item = Tagged;

    fn next(&mut self) -> Option<Tagged> {
        if let Some(t) = self.pending.pop_front() {
            return Some(t);
        }
        let t = self.y.next()?;
        if t.tag == Tag::Fixed {
            if t.digit == self.top {
                self.pending.extend((0..self.top).map(|d| Tagged { digit: d, tag: Tag::Fixed }));
            } else {
                if self.run_len > 0 && self.run_digit != t.digit {
                    panic!("phi output interrupted a run of fixed digit {}", self.run_digit);
                }
                self.run_digit = t.digit;
                self.run_len += 1;
                if self.run_len == self.max_run {
                    self.run_len = 0;
                    self.pending.push_back(Tagged { digit: self.top, tag: Tag::Fixed });
                }
            }
        }
        Some(t)
    }
}

/// `z = psi_p(y)`: after every `s-1` consecutive fixed copies of a digit
/// `i <= s-2` insert `s-1`; after every fixed `s-1` insert `0 1 .. s-2`.
/// Free digits pass through.
pub fn psi(params: &TransformParams, y: TaggedStream) -> Result<TaggedStream> {
    if y.stage() != Stage::Phi(*params) {
        return Err(Error::contract(format!(
            "psi_p needs a stream produced by phi_p with {params}, got {:?}",
            y.stage()
        )));
    }
    let top = params.top();
    let psi = Psi {
        top,
        run_digit: 0,
        run_len: 0,
        max_run: u32::from(top),
        pending: VecDeque::with_capacity(top as usize),
        y,
    };
    Ok(TaggedStream { base: params.base(), stage: Stage::Psi(*params), inner: Box::new(psi) })
}

/// `f_p(x)` with fixed/free tags.
pub fn f_tagged(params: &TransformParams, x: DigitStream) -> Result<TaggedStream> {
    psi(params, phi(params, x)?)
}

/// `z = f_p(x) = psi_p(phi_p(x))`.
pub fn f(params: &TransformParams, x: DigitStream) -> Result<DigitStream> {
    Ok(f_tagged(params, x)?.into_digits())
}

/// `f_p(x)` assembled from [`position_class`]: `Fixed(i)` gives `i`, `Free(j)`
/// gives `alpha_j(x)`.
pub fn f_positional(params: &TransformParams, mut x: DigitStream) -> Result<DigitStream> {
    if x.base() != params.base() {
        return Err(Error::parameter("stream base does not match transform base"));
    }
    let params = *params;
    let mut consumed = BigUint::zero();
    let iter = (1u64..).map_while(move |n| match position_class(&params, &BigUint::from(n)) {
        Ok(PositionClass::Fixed(d)) => Some(d),
        Ok(PositionClass::Free(j)) => {
            consumed += 1u32;
            assert_eq!(j, consumed, "free positions enumerate source digits in order");
            x.next()
        }
        Err(_) => None,
    });
    Ok(DigitStream::from_iter(params.base(), StreamKind::Transformed, iter))
}

/// Recovers `x` from `z = f_p(x)`, checking every fixed position on the way.
pub struct InverseStream {
    cursor: LayoutCursor,
    z: DigitStream,
    position: u64,
    failed: bool,
}

impl Iterator for InverseStream {
    type Item = Result<Digit>;

    fn next(&mut self) -> Option<Result<Digit>> {
        if self.failed {
            return None;
        }
        loop {
            let slot = self.cursor.next()?;
            let d = self.z.next()?;
            self.position += 1;
            match slot {
                Slot::Free => return Some(Ok(d)),
                Slot::Fixed(expected) if expected != d => {
                    self.failed = true;
                    return Some(Err(Error::NotInSupport {
                        position: BigUint::from(self.position),
                        expected,
                        found: d,
                    }));
                }
                Slot::Fixed(_) => {}
            }
        }
    }
}

pub fn f_inverse(params: &TransformParams, z: DigitStream) -> Result<InverseStream> {
    if z.base() != params.base() {
        return Err(Error::parameter("stream base does not match transform base"));
    }
    Ok(InverseStream { cursor: LayoutCursor::new(params), z, position: 0, failed: false })
}

/// First `n` source digits of `f_p^{-1}(z)`; fewer if `z` is finite.
pub fn f_inverse_prefix(params: &TransformParams, z: DigitStream, n: usize) -> Result<Vec<Digit>> {
    f_inverse(params, z)?.take(n).collect()
}

/// Limits of `N_i(z, n) / n` along the two checkpoint subsequences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsequenceLimits {
    pub digit: Digit,
    /// Along `n = m''_{k+1}(i) - 1`: `(p+1) / (s(p+1) + i)`.
    #[serde(with = "crate::serde_rational")]
    pub lower: BigRational,
    /// Along `n = m'_{k+1}(i)`, from exact counting of the construction:
    /// `(s(p+2) - 1) / (s(s(p+1) + i + 1))`.
    #[serde(with = "crate::serde_rational")]
    pub upper: BigRational,
    /// The value `(p+2) / (s(p+1) + i + 1)` obtained if group `k+1` contributed
    /// `s 2^k` copies of `i` before `m'_{k+1}(i)`, rather than `(s-1) 2^k`.
    #[serde(with = "crate::serde_rational")]
    pub alternative_upper: BigRational,
}

/// Exact subsequence limits for an s-normal source.
///
/// Up to `m'_{k+1}(i)` there are `s(2^k - 1)` fixed copies of `i` from groups
/// `1..=k`, `(s-1) 2^k` more from the run in group `k+1`, and
/// `s p (2^k - 1) + o(2^k)` free copies.
pub fn expected_subsequence_limits(params: &TransformParams, i: Digit) -> Result<SubsequenceLimits> {
    check_digit_index(params, i)?;
    let q = |n: u64, d: u64| BigRational::new(n.into(), d.into());
    let s = u64::from(params.s());
    let p = params.p();
    let i64_ = u64::from(i);
    Ok(SubsequenceLimits {
        digit: i,
        lower: q(p + 1, s * (p + 1) + i64_),
        upper: q(s * (p + 2) - 1, s * (s * (p + 1) + i64_ + 1)),
        alternative_upper: q(p + 2, s * (p + 1) + i64_ + 1),
    })
}

/// Digit counts of `z = f_p(x)` at the checkpoints around group `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OscillationSample {
    pub k: u64,
    /// `m''_{k+1}(i) - 1`
    pub lower_position: u64,
    pub lower_count: u64,
    #[serde(with = "crate::serde_rational")]
    pub lower_ratio: BigRational,
    /// `m'_{k+1}(i)`
    pub upper_position: u64,
    pub upper_count: u64,
    #[serde(with = "crate::serde_rational")]
    pub upper_ratio: BigRational,
    /// `N_i(z, m'_{k+1}(i)) - N_i(z, l_k)`: copies of `i` contributed by group `k+1`.
    pub partial_group_count: u64,
    /// Copies of `i` among the source digits placed in groups `1..=k`.
    pub source_count: u64,
}

/// Which closed form the brute-force counts realize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RealizedUpper {
    /// Partial-group count `(s-1) 2^k`, limit `upper`.
    Derived,
    /// Partial-group count `s 2^k`, limit `alternative_upper`.
    Alternative,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OscillationReport {
    pub s: u32,
    pub p: u64,
    pub limits: SubsequenceLimits,
    pub samples: Vec<OscillationSample>,
    pub realized: RealizedUpper,
}

impl OscillationReport {
    /// Empirical `ratio(m') - ratio(m'' - 1)` per sample.
    pub fn gaps(&self) -> Vec<BigRational> {
        self.samples.iter().map(|s| &s.upper_ratio - &s.lower_ratio).collect()
    }
}

/// Counts digit `i` in `z = f_p(x)` and in `x` by brute force for every
/// `k` in `ks`, and decides which partial-group count the construction
/// realizes. `source` must produce the same `x` on every call.
pub fn probe_oscillation<F>(params: &TransformParams, i: Digit, ks: &[u64], source: F) -> Result<OscillationReport>
where
    F: Fn() -> DigitStream,
{
    let limits = expected_subsequence_limits(params, i)?;
    let to_u64 = |b: BigUint| b.to_u64().ok_or_else(|| Error::Resource("checkpoint beyond u64".into()));
    let mut wanted = Vec::new();
    for &k in ks {
        wanted.push(to_u64(group_end(params, k)?)?);
        wanted.push(to_u64(lower_checkpoint(params, k, i)?)? - 1);
        wanted.push(to_u64(upper_checkpoint(params, k, i)?)?);
    }
    let counts_z = counts_at(f(params, source())?, i, &wanted);

    let s2p = u64::from(params.s()).pow(2) * params.p();
    let source_positions: Vec<u64> = ks.iter().map(|&k| s2p * ((1u64 << k) - 1)).collect();
    let counts_x = counts_at(source(), i, &source_positions);

    let mut samples = Vec::with_capacity(ks.len());
    for (idx, &k) in ks.iter().enumerate() {
        let (at_end, lower_count, upper_count) =
            (counts_z[3 * idx], counts_z[3 * idx + 1], counts_z[3 * idx + 2]);
        let lower_position = wanted[3 * idx + 1];
        let upper_position = wanted[3 * idx + 2];
        samples.push(OscillationSample {
            k,
            lower_position,
            lower_count,
            lower_ratio: BigRational::new(lower_count.into(), lower_position.into()),
            upper_position,
            upper_count,
            upper_ratio: BigRational::new(upper_count.into(), upper_position.into()),
            partial_group_count: upper_count - at_end,
            source_count: counts_x[idx],
        });
    }
    let s = u64::from(params.s());
    let matches = |per: u64| samples.iter().all(|smp| smp.partial_group_count == per * (1u64 << smp.k));
    let realized = if samples.is_empty() {
        RealizedUpper::Neither
    } else if matches(s - 1) {
        RealizedUpper::Derived
    } else if matches(s) {
        RealizedUpper::Alternative
    } else {
        RealizedUpper::Neither
    };
    Ok(OscillationReport { s: params.s(), p: params.p(), limits, samples, realized })
}

/// Count of `digit` among the first `n` digits, for each `n` in `positions`.
fn counts_at(stream: DigitStream, digit: Digit, positions: &[u64]) -> Vec<u64> {
    let mut order: Vec<usize> = (0..positions.len()).collect();
    order.sort_by_key(|&j| positions[j]);
    let mut out = vec![0u64; positions.len()];
    let mut count = 0u64;
    let mut n = 0u64;
    let mut stream = stream;
    for j in order {
        while n < positions[j] {
            match stream.next() {
                Some(d) => {
                    n += 1;
                    if d == digit {
                        count += 1;
                    }
                }
                None => break,
            }
        }
        out[j] = count;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::{champernowne_stream, explicit_stream, periodic_stream, random_stream};

    fn params(s: u32, p: u64) -> TransformParams {
        TransformParams::new(s, p).unwrap()
    }

    fn zeros(s: u32) -> DigitStream {
        periodic_stream(Base::new(s).unwrap(), &[0]).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn params_validation() {
        assert!(matches!(TransformParams::new(2, 1), Err(Error::Parameter(m)) if m.contains("T_2")));
        assert!(TransformParams::new(3, 0).is_err());
        assert!(TransformParams::new(1, 1).is_err());
    }

    #[test]
    fn group_end_examples() {
        assert_eq!(group_end(&params(3, 1), 1).unwrap(), big(18));
        assert_eq!(group_end(&params(3, 1), 2).unwrap(), big(54));
        assert_eq!(group_end(&params(3, 2), 1).unwrap(), big(27));
        assert!(group_end(&params(3, 1), 0).is_err());
        // positions past 64 bits
        let l70 = group_end(&params(3, 1), 70).unwrap();
        assert_eq!(l70, big(18) * ((BigUint::one() << 70u32) - 1u32));
    }

    #[test]
    fn checkpoint_examples() {
        let p1 = params(3, 1);
        assert_eq!(upper_checkpoint(&p1, 1, 0).unwrap(), big(24));
        assert_eq!(upper_checkpoint(&p1, 1, 1).unwrap(), big(30));
        assert_eq!(upper_checkpoint(&params(3, 2), 1, 0).unwrap(), big(33));
        assert_eq!(lower_checkpoint(&p1, 1, 0).unwrap(), big(19));
        assert_eq!(lower_checkpoint(&p1, 1, 1).unwrap(), big(25));
        assert_eq!(lower_checkpoint(&p1, 2, 0).unwrap(), big(55));
        assert!(upper_checkpoint(&p1, 1, 2).is_err());
        assert!(lower_checkpoint(&p1, 0, 0).is_err());
    }

    #[test]
    fn group_layout_telescopes() {
        let pr = params(4, 3);
        let mut prev_end = BigUint::zero();
        for k in 1..=12 {
            let g = group_layout(&pr, k).unwrap();
            assert_eq!(g.start, &prev_end + 1u32);
            assert_eq!(&g.end - &prev_end, &g.fixed_len + &g.free_len);
            assert_eq!(g.end, group_end(&pr, k).unwrap());
            prev_end = g.end;
        }
    }

    #[test]
    fn position_class_examples() {
        let p1 = params(3, 1);
        let first: Vec<_> = (1..=9).map(|n| position_class(&p1, &big(n)).unwrap()).collect();
        let want: Vec<_> = [0, 0, 2, 1, 1, 2, 2, 0, 1].into_iter().map(PositionClass::Fixed).collect();
        assert_eq!(first, want);
        assert_eq!(position_class(&p1, &big(10)).unwrap(), PositionClass::Free(big(1)));
        let g2: Vec<_> = (19..=24).map(|n| position_class(&p1, &big(n)).unwrap()).collect();
        let want: Vec<_> = [0, 0, 2, 0, 0, 2].into_iter().map(PositionClass::Fixed).collect();
        assert_eq!(g2, want);
        assert!(position_class(&p1, &BigUint::zero()).is_err());
    }

    #[test]
    fn free_indices_enumerate_without_gaps() {
        for (s, p) in [(3, 1), (4, 2), (5, 1)] {
            let pr = params(s, p);
            let lk = group_end(&pr, 7).unwrap().to_u64().unwrap();
            let mut next = 1u64;
            for n in 1..=lk {
                if let PositionClass::Free(j) = position_class(&pr, &big(n)).unwrap() {
                    assert_eq!(j, big(next));
                    next += 1;
                }
            }
            let total = u64::from(s * s) * p * ((1 << 7) - 1);
            assert_eq!(next - 1, total);
        }
    }

    #[test]
    fn fixed_segments_hold_each_digit_equally() {
        for (s, p) in [(3, 1), (4, 1), (5, 2)] {
            let pr = params(s, p);
            let mut cursor = LayoutCursor::new(&pr);
            for k in 1..=10u64 {
                let g = group_layout(&pr, k).unwrap();
                let len = (&g.fixed_len + &g.free_len).to_u64().unwrap();
                let mut counts = vec![0u64; s as usize];
                for _ in 0..len {
                    if let Some(Slot::Fixed(d)) = cursor.next() {
                        counts[d as usize] += 1;
                    }
                }
                assert!(counts.iter().all(|&c| c == u64::from(s) << (k - 1)), "s={s} k={k} {counts:?}");
            }
        }
    }

    #[test]
    fn cursor_agrees_with_position_class() {
        for (s, p) in [(3, 1), (3, 2), (4, 3), (6, 1)] {
            let pr = params(s, p);
            for (n, slot) in (1..=20_000u64).zip(LayoutCursor::new(&pr)) {
                let pc = position_class(&pr, &big(n)).unwrap();
                match (slot, pc) {
                    (Slot::Fixed(a), PositionClass::Fixed(b)) => assert_eq!(a, b),
                    (Slot::Free, PositionClass::Free(_)) => {}
                    (a, b) => panic!("n={n}: {a:?} vs {b:?}"),
                }
            }
        }
    }

    #[test]
    fn phi_examples() {
        let p1 = params(3, 1);
        let y: Vec<_> = phi(&p1, zeros(3)).unwrap().take(12).map(|t| t.digit).collect();
        assert_eq!(y, vec![0, 0, 1, 1, 2, 0, 0, 0, 0, 0, 0, 0]);
        // inserted block before group 2 has length 2 * 5
        let tags: Vec<_> = phi(&p1, zeros(3)).unwrap().skip(14).take(10).map(|t| t.tag).collect();
        assert!(tags.iter().all(|t| *t == Tag::Fixed));
        let wrong_base = zeros(4);
        assert!(phi(&p1, wrong_base).is_err());
    }

    #[test]
    fn phi_passes_source_through_in_order() {
        let pr = params(4, 2);
        let x = random_stream(pr.base(), 5).take_prefix(3000);
        let free: Vec<_> = phi(&pr, explicit_stream(pr.base(), x.clone()).unwrap())
            .unwrap()
            .filter_map(|t| match t.tag {
                Tag::Free(_) => Some(t.digit),
                Tag::Fixed => None,
            })
            .collect();
        assert_eq!(free, x);
    }

    #[test]
    fn psi_examples() {
        let p1 = params(3, 1);
        let z: Vec<_> = psi(&p1, phi(&p1, zeros(3)).unwrap()).unwrap().take(9).map(|t| t.digit).collect();
        assert_eq!(z, vec![0, 0, 2, 1, 1, 2, 2, 0, 1]);
        let raw = TaggedStream::untagged(zeros(3));
        assert!(matches!(psi(&p1, raw), Err(Error::Contract(_))));
        let other = phi(&params(3, 2), zeros(3)).unwrap();
        assert!(matches!(psi(&p1, other), Err(Error::Contract(_))));
    }

    #[test]
    fn psi_fixed_segment_lengths() {
        let pr = params(4, 1);
        let mut z = f_tagged(&pr, zeros(4)).unwrap();
        for k in 1..=6u32 {
            let fixed = z.by_ref().take_while(|t| t.tag == Tag::Fixed).count() as u64;
            assert_eq!(fixed, 16u64 << (k - 1));
            // rest of the free segment; take_while consumed its first element
            let free_left = 16u64 * (1 << (k - 1)) - 1;
            assert_eq!(z.by_ref().take(free_left as usize).count() as u64, free_left);
        }
    }

    #[test]
    fn f_examples() {
        let p1 = params(3, 1);
        let z = f(&p1, zeros(3)).unwrap().take_prefix(36);
        assert_eq!(&z[..18], &[0, 0, 2, 1, 1, 2, 2, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(&z[18..], &[0, 0, 2, 0, 0, 2, 1, 1, 2, 1, 1, 2, 2, 0, 1, 2, 0, 1]);
    }

    #[test]
    fn compositional_and_positional_agree() {
        for s in 3..=5u32 {
            for p in 1..=3u64 {
                let pr = params(s, p);
                let seed = u64::from(s) * 10 + p;
                let a = f(&pr, random_stream(pr.base(), seed)).unwrap().take_prefix(10_000);
                let b = f_positional(&pr, random_stream(pr.base(), seed)).unwrap().take_prefix(10_000);
                assert_eq!(a, b, "s={s} p={p}");
            }
        }
    }

    #[test]
    fn inverse_round_trip_and_rejection() {
        let p1 = params(3, 1);
        let z = f(&p1, champernowne_stream(p1.base())).unwrap();
        let x = f_inverse_prefix(&p1, z, 2000).unwrap();
        assert_eq!(x, champernowne_stream(p1.base()).take_prefix(2000));

        let bad = explicit_stream(p1.base(), vec![1, 0, 2]).unwrap();
        match f_inverse_prefix(&p1, bad, 5) {
            Err(Error::NotInSupport { position, expected, found }) => {
                assert_eq!((position, expected, found), (big(1), 0, 1));
            }
            other => panic!("{other:?}"),
        }
        let mut z = f(&p1, zeros(3)).unwrap().take_prefix(40);
        z[20] = 1;
        let err = f_inverse_prefix(&p1, explicit_stream(p1.base(), z).unwrap(), 40).unwrap_err();
        assert!(matches!(err, Error::NotInSupport { position, .. } if position == big(21)));
    }

    #[test]
    fn limits_examples() {
        let l = expected_subsequence_limits(&params(3, 1), 0).unwrap();
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(l.lower, q(1, 3));
        assert_eq!(l.upper, q(8, 21));
        assert_eq!(l.alternative_upper, q(3, 7));
        assert!(expected_subsequence_limits(&params(3, 1), 2).is_err());
        for s in 3..=9u32 {
            for p in 1..=12u64 {
                for i in 0..=(s - 2) as u8 {
                    let l = expected_subsequence_limits(&params(s, p), i).unwrap();
                    assert!(l.upper > l.lower, "s={s} p={p} i={i}");
                }
            }
        }
    }

    #[test]
    fn probe_decides_partial_group_count() {
        let p1 = params(3, 1);
        let report = probe_oscillation(&p1, 0, &[2, 3, 4, 5, 6], || champernowne_stream(p1.base())).unwrap();
        assert_eq!(report.realized, RealizedUpper::Derived);
        for smp in &report.samples {
            // fixed copies up to m' plus the free copies
            let fixed = 3 * ((1u64 << smp.k) - 1) + 2 * (1u64 << smp.k);
            assert_eq!(smp.upper_count, fixed + smp.source_count);
        }
    }
}
