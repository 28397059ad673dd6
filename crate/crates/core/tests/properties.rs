use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;

use sadic_core::dimension::{covering_report, LogQuantity};
use sadic_core::frequency::{classify_profile, count_digits, ratios_sum_to_one, ClassificationConfig};
use sadic_core::measure::{entropy_sequence, mu_p, PositionLaw};
use sadic_core::stream::{explicit_stream, random_stream};
use sadic_core::transform::{f, f_inverse_prefix, f_positional, position_class, LayoutCursor, Slot};
use sadic_core::{Base, ClassTag, PositionClass, TransformParams};

fn params() -> impl Strategy<Value = TransformParams> {
    (3u32..=6, 1u64..=4).prop_map(|(s, p)| TransformParams::new(s, p).unwrap())
}

fn digits_for(params: TransformParams, len: std::ops::Range<usize>) -> impl Strategy<Value = (TransformParams, Vec<u8>)> {
    let top = params.s() as u8;
    proptest::collection::vec(0..top, len).prop_map(move |v| (params, v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn profile_counts_and_ratios((s, digits, cps) in (2u32..=10).prop_flat_map(|s| (
        Just(s),
        proptest::collection::vec(0..s as u8, 1..400),
        proptest::collection::btree_set(1u64..400, 0..20),
    ))) {
        let base = Base::new(s).unwrap();
        let n = digits.len() as u64;
        let mut stream = explicit_stream(base, digits).unwrap();
        let cps: Vec<u64> = cps.into_iter().collect();
        let profile = count_digits(&mut stream, n, &cps);
        prop_assert_eq!(profile.counts.iter().sum::<u64>(), profile.depth);
        prop_assert_eq!(profile.depth, n);
        prop_assert_eq!(profile.checkpoints.len(), cps.iter().filter(|&&c| c <= n).count());
        for cp in &profile.checkpoints {
            prop_assert!(ratios_sum_to_one(cp));
        }
    }

    #[test]
    fn tag_is_a_function_of_verdicts(s in 2u32..=5, seed in any::<u64>(), bias in 0u8..3) {
        let base = Base::new(s).unwrap();
        // mix in a biased digit to reach more than one class
        let digits: Vec<u8> = random_stream(base, seed).take_prefix(4000)
            .into_iter().enumerate().map(|(i, d)| if i % 5 < bias as usize { 0 } else { d }).collect();
        let cfg = ClassificationConfig::with_depth(4000);
        let mut stream = explicit_stream(base, digits).unwrap();
        let profile = count_digits(&mut stream, cfg.depth, &cfg.checkpoints);
        let class = classify_profile(&profile, &cfg).unwrap();
        prop_assert_eq!(class.tag, ClassTag::decide(&class.verdicts, base, &cfg.epsilon));
    }

    #[test]
    fn inverse_undoes_forward((pr, x) in params().prop_flat_map(|p| digits_for(p, 20..300))) {
        let z = f(&pr, explicit_stream(pr.base(), x.clone()).unwrap()).unwrap().take_prefix(usize::MAX);
        let back = f_inverse_prefix(&pr, explicit_stream(pr.base(), z).unwrap(), x.len() + 1).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn positional_matches_compositional((pr, x) in params().prop_flat_map(|p| digits_for(p, 50..500))) {
        let a = f(&pr, explicit_stream(pr.base(), x.clone()).unwrap()).unwrap().take_prefix(usize::MAX);
        let b = f_positional(&pr, explicit_stream(pr.base(), x).unwrap()).unwrap().take_prefix(usize::MAX);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn forward_preserves_order((pr, x, y) in params().prop_flat_map(|p| {
        let top = p.s() as u8;
        (Just(p), proptest::collection::vec(0..top, 60), proptest::collection::vec(0..top, 60))
    })) {
        prop_assume!(x != y);
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        let fl = f(&pr, explicit_stream(pr.base(), lo).unwrap()).unwrap().take_prefix(usize::MAX);
        let fh = f(&pr, explicit_stream(pr.base(), hi).unwrap()).unwrap().take_prefix(usize::MAX);
        prop_assert!(fl < fh);
    }

    #[test]
    fn cursor_agrees_with_random_access(pr in params(), skip in 0usize..200_000) {
        let mut cursor = LayoutCursor::new(&pr);
        let slot = cursor.nth(skip).unwrap();
        let class = position_class(&pr, &BigUint::from(skip + 1)).unwrap();
        match (slot, class) {
            (Slot::Fixed(a), PositionClass::Fixed(b)) => prop_assert_eq!(a, b),
            (Slot::Free, PositionClass::Free(_)) => {}
            other => prop_assert!(false, "mismatch at {}: {:?}", skip + 1, other),
        }
    }

    #[test]
    fn mu_p_point_masses_sit_on_fixed_positions(pr in params(), n in 1u64..100_000) {
        let law = mu_p(&pr).law(n).unwrap();
        let class = position_class(&pr, &BigUint::from(n)).unwrap();
        match (law, class) {
            (PositionLaw::PointMass(a), PositionClass::Fixed(b)) => prop_assert_eq!(a, b),
            (PositionLaw::Uniform, PositionClass::Free(_)) => {}
            other => prop_assert!(false, "mismatch at {}: {:?}", n, other),
        }
    }

    #[test]
    fn entropy_partial_sums_bounded(pr in params(), n in 1usize..600) {
        let sums = entropy_sequence(&mu_p(&pr), n).unwrap().partial_sums();
        let mut prev = BigRational::from_integer(0.into());
        for (j, h) in sums.iter().enumerate() {
            let h = h.exact().unwrap().clone();
            prop_assert!(h >= prev);
            prop_assert!(h <= BigRational::from_integer(BigInt::from(j + 1)));
            prev = h;
        }
    }

    #[test]
    fn covering_closed_forms(pr in params(), k in 1u64..80) {
        let c = covering_report(&pr, k).unwrap();
        let s2 = BigUint::from(pr.s()).pow(2);
        let h = BigUint::from(1u32) << (k - 1);
        let l_k = &s2 * (pr.p() + 1) * ((&h << 1u32) - 1u32);
        prop_assert_eq!(&c.rank, &(l_k - &s2 * pr.p() * &h));
        let want = BigInt::from(s2 * pr.p() * (h - 1u32));
        prop_assert_eq!(c.count_log(), &BigRational::from_integer(want));
    }

    #[test]
    fn log_quantity_powers_are_exact(s in 2u32..=16, e in 0u32..300) {
        let base = Base::new(s).unwrap();
        let n = BigUint::from(s).pow(e);
        let l = LogQuantity::from_count(base, &n);
        prop_assert_eq!(l.exact_log(), Some(&BigRational::from_integer(e.into())));
        prop_assert_eq!(l.exact_integer(), Some(n));
    }

    #[test]
    fn binary_streams_are_never_particularly_non_normal(seed in any::<u64>(), mode in 0u8..3) {
        let base = Base::new(2).unwrap();
        let raw = random_stream(base, seed).take_prefix(1 << 14);
        let digits: Vec<u8> = match mode {
            0 => raw,
            // long runs stretch the ratios into oscillation
            1 => raw.chunks(64).flat_map(|c| std::iter::repeat_n(c[0], 64 * (1 + c[1] as usize))).take(1 << 14).collect(),
            _ => raw.into_iter().map(|d| d & (seed as u8 & 1)).collect(),
        };
        let cfg = ClassificationConfig::with_depth(digits.len() as u64);
        let class = sadic_core::classify(&mut explicit_stream(base, digits).unwrap(), &cfg).unwrap();
        prop_assert_ne!(class.tag, ClassTag::ParticularlyNonNormal);
    }
}
