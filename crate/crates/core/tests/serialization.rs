use num_rational::BigRational;
use serde::{de::DeserializeOwned, Serialize};

use sadic_core::dimension::{besicovitch_eggleston, covering_report, g_dimension_sup};
use sadic_core::frequency::{classify_with_profile, ClassificationConfig};
use sadic_core::measure::{cdf, dimension_of_measure, entropy_sequence, mu_p};
use sadic_core::stream::{block_oscillator_stream, champernowne_stream};
use sadic_core::transform::{expected_subsequence_limits, group_layout, probe_oscillation};
use sadic_core::{Base, StochasticVector, TransformParams};

fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(value: &T) {
    let text = serde_json::to_string(value).unwrap();
    let back: T = serde_json::from_str(&text).unwrap();
    assert_eq!(&back, value, "{text}");
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
}

#[test]
fn reports_round_trip() {
    let base = Base::new(3).unwrap();
    let pr = TransformParams::new(3, 1).unwrap();
    let cfg = ClassificationConfig::with_depth(5000);
    round_trip(&cfg);
    let (class, profile) = classify_with_profile(&mut block_oscillator_stream(base, 0, 1).unwrap(), &cfg).unwrap();
    round_trip(&class);
    round_trip(&profile);
    round_trip(&pr);
    round_trip(&group_layout(&pr, 70).unwrap());
    round_trip(&covering_report(&pr, 40).unwrap());
    round_trip(&g_dimension_sup(&[1, 2, 3]).unwrap());
    let half = StochasticVector::exact(vec![
        BigRational::new(1.into(), 2.into()),
        BigRational::new(1.into(), 2.into()),
        BigRational::from_integer(0.into()),
    ])
    .unwrap();
    round_trip(&half);
    round_trip(&besicovitch_eggleston(&half, base).unwrap());
    round_trip(&besicovitch_eggleston(&StochasticVector::uniform(base), base).unwrap());
    round_trip(&expected_subsequence_limits(&pr, 0).unwrap());
    round_trip(&probe_oscillation(&pr, 0, &[2, 3], || champernowne_stream(base)).unwrap());
    let m = mu_p(&pr);
    round_trip(&entropy_sequence(&m, 40).unwrap());
    round_trip(&dimension_of_measure(&m, 4).unwrap());
    round_trip(&cdf(&m, &BigRational::new(1.into(), 2.into()), 50).unwrap());
}
