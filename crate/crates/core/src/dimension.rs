//! Hausdorff-dimension computations.
//!
//! The special coverings of `S_p = f_p([0, 1))` use cylinders of rank
//! `m_k = l_k - 2^(k-1) s^2 p`, exactly the end of the fixed segment of
//! group `k`. A rank-`m_k` cylinder meets `S_p` iff its digits agree with the
//! fixed pattern, so there are `s^(c_k)` of them with
//! `c_k = s^2 p (2^(k-1) - 1)`. Every quantity here is an integer power of
//! `s`, and all arithmetic is kept in exact `log_s` units.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::digits::{Base, Digit, StochasticVector};
use crate::error::{Error, Result};
use crate::report::{DimensionReport, Provenance};
use crate::transform::{group_end, position_class, LayoutCursor, PositionClass, Slot, TransformParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogRepr {
    Exact(#[serde(with = "crate::serde_rational")] BigRational),
    Float(f64),
    /// The quantity is 0, so its logarithm is `-inf`.
    Zero,
}

/// A positive quantity stored as its base-s logarithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogQuantity {
    pub base: Base,
    pub log: LogRepr,
}

impl LogQuantity {
    pub fn exact(base: Base, log: BigRational) -> Self {
        LogQuantity { base, log: LogRepr::Exact(log) }
    }

    /// `log_s(count)`, exact when `count` is a power of `s`.
    pub fn from_count(base: Base, count: &BigUint) -> Self {
        if count.is_zero() {
            return LogQuantity { base, log: LogRepr::Zero };
        }
        let s = base.as_biguint();
        let mut m = count.clone();
        let mut e = 0u64;
        while (&m % &s).is_zero() {
            m /= &s;
            e += 1;
        }
        if m.is_one() {
            return LogQuantity::exact(base, BigRational::from_integer(e.into()));
        }
        // log of a big integer through its bit length to avoid f64 overflow
        let bits = count.bits();
        let shift = bits.saturating_sub(64);
        let top = (count >> shift).to_f64().unwrap_or(f64::INFINITY);
        let ln = top.ln() + shift as f64 * std::f64::consts::LN_2;
        LogQuantity { base, log: LogRepr::Float(ln / f64::from(base.get()).ln()) }
    }

    pub fn exact_log(&self) -> Option<&BigRational> {
        match &self.log {
            LogRepr::Exact(q) => Some(q),
            _ => None,
        }
    }

    pub fn log_f64(&self) -> f64 {
        match &self.log {
            LogRepr::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            LogRepr::Float(x) => *x,
            LogRepr::Zero => f64::NEG_INFINITY,
        }
    }

    /// `s^log` as a float; overflows to infinity for large exponents.
    pub fn value_f64(&self) -> f64 {
        f64::from(self.base.get()).powf(self.log_f64())
    }

    /// The exact integer value when the log is a nonnegative integer.
    pub fn exact_integer(&self) -> Option<BigUint> {
        let q = self.exact_log()?;
        if !q.is_integer() || q.is_negative() {
            return None;
        }
        let e = q.to_integer().to_u64()?;
        Some(num_traits::pow(self.base.as_biguint(), usize::try_from(e).ok()?))
    }
}

impl fmt::Display for LogQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.log {
            LogRepr::Exact(q) => write!(f, "{}^({})", self.base, q),
            LogRepr::Float(x) => write!(f, "{}^({x:.6})", self.base),
            LogRepr::Zero => f.write_str("0"),
        }
    }
}

/// Besicovitch-Eggleston dimension `sum nu_i ln nu_i / (-ln s)` of the set of
/// points whose digit frequencies are `nu`, with `0 ln 0 = 0`.
pub fn besicovitch_eggleston(nu: &StochasticVector, base: Base) -> Result<DimensionReport> {
    if nu.len() != base.get() as usize {
        return Err(Error::parameter(format!(
            "frequency vector has {} entries, base {} needs {}",
            nu.len(),
            base,
            base.get()
        )));
    }
    let ln_s = f64::from(base.get()).ln();
    let kind = "besicovitch-eggleston";
    let report = match nu.equal_support() {
        Some(1) => DimensionReport::exact(kind, BigRational::zero(), Provenance::Computed),
        Some(m) if m == base.get() as usize => DimensionReport::exact(kind, BigRational::one(), Provenance::Computed),
        Some(m) => DimensionReport::numeric(kind, (m as f64).ln() / ln_s, Provenance::Computed),
        None => {
            let h: f64 = nu.to_f64().iter().filter(|&&v| v > 0.0).map(|&v| v * v.ln()).sum();
            DimensionReport::numeric(kind, (h / -ln_s).clamp(0.0, 1.0), Provenance::Computed)
        }
    };
    Ok(report)
}

/// Besicovitch-Eggleston dimensions of the non-uniform vectors
/// `(1/s + eta, 1/s - eta, 1/s, ...)` with `eta = 1 / (s 2^j)`, `j = 1..=terms`.
/// They increase to 1 without reaching it.
pub fn nonuniform_be_sequence(base: Base, terms: u32) -> Result<Vec<(BigRational, f64)>> {
    let s = i64::from(base.get());
    (1..=terms)
        .map(|j| {
            let eta = BigRational::new(1.into(), (s << j).into());
            let mut v = vec![BigRational::new(1.into(), s.into()); s as usize];
            v[0] += &eta;
            v[1] -= &eta;
            let dim = besicovitch_eggleston(&StochasticVector::exact(v)?, base)?;
            Ok((eta, dim.numeric))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringReport {
    pub s: u32,
    pub p: u64,
    pub k: u64,
    /// Cylinder rank `m_k`.
    #[serde(with = "crate::serde_rational::biguint")]
    pub rank: BigUint,
    /// Number of cylinders, `s^(s^2 p (2^(k-1) - 1))`.
    pub count: LogQuantity,
    /// Cylinder length `eps_k = s^-m_k`.
    pub mesh: LogQuantity,
}

impl CoveringReport {
    pub fn count_log(&self) -> &BigRational {
        self.count.exact_log().expect("covering counts are exact")
    }

    pub fn rank_log(&self) -> BigRational {
        BigRational::from_integer(self.rank.clone().into())
    }

    /// `log_s(count * eps_k^alpha) = c_k - alpha m_k`.
    pub fn alpha_volume(&self, alpha: &BigRational) -> LogQuantity {
        LogQuantity::exact(self.count.base, self.count_log() - alpha * self.rank_log())
    }
}

pub fn covering_report(params: &TransformParams, k: u64) -> Result<CoveringReport> {
    let l_k = group_end(params, k)?;
    let s2p = BigUint::from(params.s()).pow(2) * params.p();
    let h = BigUint::one() << (k - 1);
    let rank = l_k - &s2p * &h;
    let count_log = s2p * (h - 1u32);
    let base = params.base();
    Ok(CoveringReport {
        s: params.s(),
        p: params.p(),
        k,
        mesh: LogQuantity::exact(base, -BigRational::from_integer(rank.clone().into())),
        count: LogQuantity::exact(base, BigRational::from_integer(count_log.into())),
        rank,
    })
}

/// `log_s` of the alpha-volume of the `k`-th special covering.
pub fn alpha_volume_log(params: &TransformParams, k: u64, alpha: &BigRational) -> Result<LogQuantity> {
    if alpha.is_negative() || alpha > &BigRational::one() {
        return Err(Error::parameter(format!("alpha = {alpha} is outside [0, 1]")));
    }
    Ok(covering_report(params, k)?.alpha_volume(alpha))
}

/// Critical exponent of the special coverings.
///
/// The alpha-volume log is `A(alpha) + B(alpha) 2^(k-1)` with `B` affine in
/// `alpha`. `B(alpha)` is read off as the difference between groups 2 and 1,
/// and its zero is returned.
pub fn upper_dimension_bound(params: &TransformParams) -> Result<BigRational> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    let slope_at = |alpha: &BigRational| -> Result<BigRational> {
        let v1 = alpha_volume_log(params, 1, alpha)?;
        let v2 = alpha_volume_log(params, 2, alpha)?;
        Ok(v2.exact_log().unwrap() - v1.exact_log().unwrap())
    };
    let b0 = slope_at(&zero)?;
    let b1 = slope_at(&one)?;
    if b0 == b1 {
        return Err(Error::contract("alpha-volume growth does not depend on alpha"));
    }
    Ok(&b0 / (&b0 - &b1))
}

/// Decides whether a cylinder survives. Called with each extension of an
/// already admitted prefix.
pub trait PrefixOracle {
    fn admits(&self, prefix: &[Digit]) -> bool;
}

impl<F: Fn(&[Digit]) -> bool> PrefixOracle for F {
    fn admits(&self, prefix: &[Digit]) -> bool {
        self(prefix)
    }
}

/// Every cylinder meets `[0, 1]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FullInterval;

impl PrefixOracle for FullInterval {
    fn admits(&self, _: &[Digit]) -> bool {
        true
    }
}

/// Cylinders meeting `S_p`: each fixed position must carry its digit.
/// The layout is tabulated up to `max_rank`; deeper positions are classified on demand.
#[derive(Debug, Clone)]
pub struct SupportOracle {
    params: TransformParams,
    pattern: Vec<Option<Digit>>,
}

impl SupportOracle {
    pub fn new(params: &TransformParams, max_rank: usize) -> Self {
        let pattern = LayoutCursor::new(params)
            .take(max_rank)
            .map(|slot| match slot {
                Slot::Fixed(d) => Some(d),
                Slot::Free => None,
            })
            .collect();
        SupportOracle { params: params.clone(), pattern }
    }
}

impl PrefixOracle for SupportOracle {
    fn admits(&self, prefix: &[Digit]) -> bool {
        let Some((&last, _)) = prefix.split_last() else {
            return true;
        };
        let fixed = match self.pattern.get(prefix.len() - 1) {
            Some(slot) => *slot,
            None => match position_class(&self.params, &BigUint::from(prefix.len())) {
                Ok(PositionClass::Fixed(d)) => Some(d),
                _ => None,
            },
        };
        fixed.is_none_or(|d| d == last)
    }
}

pub const DEFAULT_CYLINDER_GUARD: u64 = 1_000_000;

/// Number of rank-`rank` cylinders surviving a depth-first walk of the s-ary
/// prefix tree. Fails once more than `guard` cylinders survive at any level.
pub fn cylinder_count_enumerate<O: PrefixOracle + ?Sized>(
    oracle: &O,
    base: Base,
    rank: usize,
    guard: u64,
) -> Result<u64> {
    let mut level_counts = vec![0u64; rank + 1];
    let mut prefix: Vec<Digit> = Vec::with_capacity(rank);
    let s = base.get();
    fn walk<O: PrefixOracle + ?Sized>(
        oracle: &O,
        s: u32,
        rank: usize,
        guard: u64,
        prefix: &mut Vec<Digit>,
        level_counts: &mut [u64],
    ) -> Result<()> {
        let depth = prefix.len();
        level_counts[depth] += 1;
        if level_counts[depth] > guard {
            return Err(Error::Resource(format!("more than {guard} cylinders survive at rank {depth}")));
        }
        if depth == rank {
            return Ok(());
        }
        for d in 0..s {
            prefix.push(d as Digit);
            if oracle.admits(prefix) {
                walk(oracle, s, rank, guard, prefix, level_counts)?;
            }
            prefix.pop();
        }
        Ok(())
    }
    walk(oracle, s, rank, guard, &mut prefix, &mut level_counts)?;
    Ok(level_counts[rank])
}

/// Least-squares slope of `count_log` against `rank`, clamped to `[0, 1]`.
pub fn box_dimension_estimate(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::parameter("box-dimension estimate needs at least two points"));
    }
    if points.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::parameter("ranks must be strictly increasing"));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok((sxy / sxx).clamp(0.0, 1.0))
}

/// `(m_k, c_k)` pairs of the special coverings for each `k` in `ks`.
pub fn covering_points(params: &TransformParams, ks: impl IntoIterator<Item = u64>) -> Result<Vec<(f64, f64)>> {
    ks.into_iter()
        .map(|k| {
            let c = covering_report(params, k)?;
            Ok((c.rank.to_f64().unwrap_or(f64::INFINITY), c.count_log().to_f64().unwrap_or(f64::INFINITY)))
        })
        .collect()
}

/// Upper dimension bound `p / (p+2)` of one `G_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PBound {
    pub p: u64,
    #[serde(with = "crate::serde_rational")]
    pub bound: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GSupReport {
    pub values: Vec<PBound>,
    #[serde(with = "crate::serde_rational")]
    pub sup: BigRational,
    pub argmax: u64,
    /// Supremum over all `p >= 1`: 1, approached but not attained.
    #[serde(with = "crate::serde_rational")]
    pub limit: BigRational,
}

impl GSupReport {
    pub fn to_report(&self) -> DimensionReport {
        DimensionReport::exact("g-sup", self.sup.clone(), Provenance::Computed)
            .with_note("sup over all p of p/(p+2) = 1, a limit never attained at finite p")
    }
}

/// Dimension of `G = union of G_p` restricted to the given `p`, by countable stability.
pub fn g_dimension_sup(ps: &[u64]) -> Result<GSupReport> {
    if ps.is_empty() {
        return Err(Error::parameter("p-list must be nonempty"));
    }
    if ps.contains(&0) {
        return Err(Error::parameter("p must be a positive integer"));
    }
    // s only enters through the covering geometry; the bound itself is s-free
    let params = |p: u64| TransformParams::new(3, p);
    let values = ps
        .iter()
        .map(|&p| Ok(PBound { p, bound: upper_dimension_bound(&params(p)?)? }))
        .collect::<Result<Vec<_>>>()?;
    let (argmax, sup) = values
        .iter()
        .max_by(|a, b| a.bound.cmp(&b.bound))
        .map(|v| (v.p, v.bound.clone()))
        .expect("nonempty");
    Ok(GSupReport { values, sup, argmax, limit: BigRational::one() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn params(s: u32, p: u64) -> TransformParams {
        TransformParams::new(s, p).unwrap()
    }

    fn b(s: u32) -> Base {
        Base::new(s).unwrap()
    }

    #[test]
    fn be_examples() {
        let third = q(1, 3);
        let uni = StochasticVector::exact(vec![third.clone(), third.clone(), third]).unwrap();
        let r = besicovitch_eggleston(&uni, b(3)).unwrap();
        assert_eq!((r.exact, r.numeric), (Some(q(1, 1)), 1.0));
        let pm = StochasticVector::point_mass(b(3), 0).unwrap();
        let r = besicovitch_eggleston(&pm, b(3)).unwrap();
        assert_eq!((r.exact, r.numeric), (Some(q(0, 1)), 0.0));
        let half = StochasticVector::exact(vec![q(1, 2), q(1, 2), q(0, 1)]).unwrap();
        let r = besicovitch_eggleston(&half, b(3)).unwrap();
        assert!((r.numeric - 0.630_929_753_571_457_4).abs() < 1e-12);
        assert!(besicovitch_eggleston(&half, b(4)).is_err());
    }

    #[test]
    fn be_generic_path_matches_formula() {
        let v = StochasticVector::float(vec![0.5, 0.3, 0.2]).unwrap();
        let want = -(0.5f64 * 0.5f64.ln() + 0.3 * 0.3f64.ln() + 0.2 * 0.2f64.ln()) / 3f64.ln();
        let r = besicovitch_eggleston(&v, b(3)).unwrap();
        assert!(r.exact.is_none());
        assert!((r.numeric - want).abs() < 1e-15);
    }

    #[test]
    fn nonuniform_sequence_increases_to_one() {
        let seq = nonuniform_be_sequence(b(3), 12).unwrap();
        assert!(seq.windows(2).all(|w| w[0].1 < w[1].1));
        assert!(seq.iter().all(|(_, v)| *v < 1.0));
        assert!(1.0 - seq.last().unwrap().1 < 1e-6);
    }

    #[test]
    fn covering_examples() {
        let p1 = params(3, 1);
        let c1 = covering_report(&p1, 1).unwrap();
        assert_eq!(c1.rank, BigUint::from(9u32));
        assert_eq!(c1.count.exact_integer(), Some(BigUint::one()));
        let c2 = covering_report(&p1, 2).unwrap();
        assert_eq!(c2.rank, BigUint::from(36u32));
        assert_eq!(c2.count.exact_integer(), Some(BigUint::from(19683u32)));
        let c3 = covering_report(&p1, 3).unwrap();
        assert_eq!(c3.rank, BigUint::from(90u32));
        assert_eq!(c3.count_log(), &q(27, 1));
        assert_eq!(c3.mesh.exact_log(), Some(&q(-90, 1)));
        assert!(covering_report(&p1, 0).is_err());
    }

    #[test]
    fn alpha_volume_examples() {
        let p1 = params(3, 1);
        let v = alpha_volume_log(&p1, 2, &q(1, 3)).unwrap();
        assert_eq!(v.exact_log(), Some(&q(-3, 1)));
        for k in 1..=20 {
            assert_eq!(alpha_volume_log(&p1, k, &q(1, 3)).unwrap().exact_log(), Some(&q(-3, 1)));
        }
        assert!(alpha_volume_log(&p1, 2, &q(3, 2)).is_err());
        // direct expansion s^2 [2^(k-1)(p - a(p+2)) + a(p+1) - p]
        let pr = params(5, 3);
        let a = q(2, 7);
        for k in 1..=12u64 {
            let h = q(1 << (k - 1), 1);
            let p = q(3, 1);
            let want = q(25, 1) * (h * (&p - &a * (&p + q(2, 1))) + &a * (&p + q(1, 1)) - &p);
            assert_eq!(alpha_volume_log(&pr, k, &a).unwrap().exact_log(), Some(&want));
        }
    }

    #[test]
    fn upper_bound_examples() {
        assert_eq!(upper_dimension_bound(&params(3, 1)).unwrap(), q(1, 3));
        assert_eq!(upper_dimension_bound(&params(3, 2)).unwrap(), q(1, 2));
        assert_eq!(upper_dimension_bound(&params(7, 10)).unwrap(), q(5, 6));
    }

    #[test]
    fn log_quantity_from_count() {
        let l = LogQuantity::from_count(b(3), &BigUint::from(19683u32));
        assert_eq!(l.exact_log(), Some(&q(9, 1)));
        let l = LogQuantity::from_count(b(3), &BigUint::from(10u32));
        assert!((l.log_f64() - 10f64.ln() / 3f64.ln()).abs() < 1e-12);
        let huge = BigUint::one() << 5000u32;
        let l = LogQuantity::from_count(b(2), &(huge + 1u32));
        assert!((l.log_f64() - 5000.0).abs() < 1e-9);
        assert_eq!(LogQuantity::from_count(b(2), &BigUint::zero()).log, LogRepr::Zero);
    }

    #[test]
    fn enumeration_examples() {
        let p1 = params(3, 1);
        let oracle = SupportOracle::new(&p1, 36);
        assert_eq!(cylinder_count_enumerate(&oracle, b(3), 9, DEFAULT_CYLINDER_GUARD).unwrap(), 1);
        assert_eq!(cylinder_count_enumerate(&FullInterval, b(3), 4, DEFAULT_CYLINDER_GUARD).unwrap(), 81);
        assert!(matches!(
            cylinder_count_enumerate(&FullInterval, b(3), 14, DEFAULT_CYLINDER_GUARD),
            Err(Error::Resource(_))
        ));
        let evens = |p: &[Digit]| p.last().is_some_and(|d| d % 2 == 0);
        assert_eq!(cylinder_count_enumerate(&evens, b(4), 5, 1000).unwrap(), 32);
    }

    #[test]
    fn box_estimate_examples() {
        let pts = covering_points(&params(3, 1), 2..=8).unwrap();
        assert!((box_dimension_estimate(&pts).unwrap() - 1.0 / 3.0).abs() < 0.05);
        let full: Vec<_> = (1..6).map(|n| (n as f64, n as f64)).collect();
        assert_eq!(box_dimension_estimate(&full).unwrap(), 1.0);
        let single: Vec<_> = (1..6).map(|n| (n as f64, 0.0)).collect();
        assert_eq!(box_dimension_estimate(&single).unwrap(), 0.0);
        assert!(box_dimension_estimate(&[(1.0, 1.0)]).is_err());
        assert!(box_dimension_estimate(&[(2.0, 1.0), (1.0, 1.0)]).is_err());
    }

    #[test]
    fn g_sup_examples() {
        assert_eq!(g_dimension_sup(&[1]).unwrap().sup, q(1, 3));
        let r = g_dimension_sup(&(1..=10).collect::<Vec<_>>()).unwrap();
        assert_eq!((r.sup.clone(), r.argmax), (q(5, 6), 10));
        assert_eq!(r.limit, q(1, 1));
        assert!(g_dimension_sup(&[]).is_err());
    }
}
