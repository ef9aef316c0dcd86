use std::collections::BTreeMap;

use mucut_core::cones::{Cone2, ConeN};
use mucut_core::{sample, CanonicalOperator, ExperimentReport, LaurentSymbol, Parity, SymbolVariant};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn round_trip<T: serde::Serialize + serde::de::DeserializeOwned>(x: &T) -> T {
    serde_json::from_str(&serde_json::to_string(x).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn operators(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = sample::near_commutant_operator(&mut r, Parity::Full, 6, 6, 9);
        prop_assert_eq!(round_trip(&a), a);
    }

    #[test]
    fn symbols(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = r.gen_range(-3..=6);
        let sigma = if m < 0 {
            LaurentSymbol::homogeneous(m, (0..3).map(|k| (k, sample::gaussian_rational(&mut r, 9))))
        } else {
            sample::admissible_symbol(&mut r, SymbolVariant::MPlusPlus, m, 6, 9)
        };
        prop_assert_eq!(round_trip(&sigma), sigma);
    }

    #[test]
    fn cones(seed in any::<u64>()) {
        let c = sample::cone(&mut rng(seed), 1000);
        prop_assert_eq!(round_trip(&c), c);
        let n = ConeN::from_cone2(&c);
        prop_assert_eq!(round_trip(&n), n);
    }

    #[test]
    fn reports(values in prop::collection::vec((-1e6f64..1e6, -1e6f64..1e6), 0..50)) {
        let (observed, predicted): (Vec<f64>, Vec<f64>) = values.into_iter().unzip();
        let report = ExperimentReport::new("demo", BTreeMap::new(), observed, predicted, BTreeMap::new());
        prop_assert_eq!(round_trip(&report), report);
    }
}

#[test]
fn malformed_inputs_are_rejected() {
    let bad_ops = [
        r#"{"terms": [{"k": 0, "poly": ["1"]}, {"k": 0, "poly": ["2"]}]}"#,
        r#"{"terms": [{"k": 100000000, "poly": ["1"]}]}"#,
        r#"{"terms": [{"k": 0, "poly": ["1/0"]}]}"#,
        r#"{"terms": [{"k": 0, "poly": ["1"], "extra": 1}]}"#,
    ];
    for text in bad_ops {
        assert!(serde_json::from_str::<CanonicalOperator>(text).is_err(), "{text}");
    }
    let bad_cones = [
        r#"{"generators": [[1, 0], [2, 0]]}"#,
        r#"{"generators": [[0, 0], [1, 1]]}"#,
        r#"{"generators": [[4294967296, 1], [1, 1]]}"#,
    ];
    for text in bad_cones {
        assert!(serde_json::from_str::<Cone2>(text).is_err(), "{text}");
    }
    assert!(serde_json::from_str::<LaurentSymbol>(r#"{"degree": 2, "modes": [{"k": 0, "poly": ["1"]}]}"#).is_err());
    let report = r#"{"schema": "mucut/1", "experiment": "x", "params": {}, "observed": [1.0],
        "predicted": [0.0], "fitted": {}, "max_residual": 5.0}"#;
    assert!(serde_json::from_str::<ExperimentReport>(report).is_err());
}
