//! Finite-depth behaviour of the Champernowne stream.
//!
//! Its digit frequencies tend to `1/s`, but slowly: leading-digit bias
//! keeps the base-3 ratios more than `1/50` away from `1/3` at depth
//! `10^5`, and the running ratios still swing by more than `1/20` over
//! the last half of the checkpoints. The default thresholds therefore do
//! not read it as normal at that depth.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use sadic_core::frequency::{count_digits, ClassificationConfig};
use sadic_core::stream::champernowne_stream;
use sadic_core::{classify, Base, ClassTag};

/// Position after the last digit of the last `len`-digit numeral.
fn block_end(s: u64, len: u32) -> u64 {
    (1..=len).map(|j| u64::from(j) * (s - 1) * s.pow(j - 1)).sum()
}

fn max_deviation(s: u32, depth: u64) -> f64 {
    let base = Base::new(s).unwrap();
    let p = count_digits(&mut champernowne_stream(base), depth, &[]);
    (0..s as usize)
        .map(|i| (p.ratio(i).to_f64().unwrap() - 1.0 / f64::from(s)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn base3_counts_at_depth_1e5() {
    // brute-force counts of the first 10^5 digits
    let p = count_digits(&mut champernowne_stream(Base::new(3).unwrap()), 100_000, &[]);
    assert_eq!(p.counts.iter().sum::<u64>(), 100_000);
    let dev: Vec<f64> = (0..3).map(|i| p.ratio(i).to_f64().unwrap() - 1.0 / 3.0).collect();
    assert!(dev[1] > 0.05, "{dev:?}");
    assert!(dev[0] < -0.03, "{dev:?}");
}

#[test]
fn default_classifier_misreads_base3_at_1e5() {
    let cfg = ClassificationConfig::with_depth(100_000);
    let c = classify(&mut champernowne_stream(Base::new(3).unwrap()), &cfg).unwrap();
    assert!(c.verdicts[0].is_converged());
    assert!(!c.verdicts[1].is_converged() && !c.verdicts[2].is_converged());
    assert_eq!(c.tag, ClassTag::ParticularlyNonNormal);
}

#[test]
fn deviation_shrinks_along_block_ends() {
    for (s, lens) in [(2u32, 4..=18u32), (3, 3..=11), (5, 2..=8)] {
        let devs: Vec<f64> = lens.map(|len| max_deviation(s, block_end(u64::from(s), len))).collect();
        assert!(devs.windows(2).all(|w| w[1] < w[0]), "s = {s}: {devs:?}");
    }
}

#[test]
fn loose_thresholds_read_normal() {
    let tenth = BigRational::new(1.into(), 10.into());
    let cfg = ClassificationConfig::with_depth(100_000).delta(tenth.clone()).epsilon(tenth);
    let c = classify(&mut champernowne_stream(Base::new(3).unwrap()), &cfg).unwrap();
    assert_eq!(c.tag, ClassTag::Normal);
}
