use mucut_core::cut::{extends_smoothly, pullback_jet, pushforward_symbol, CutError, Jet};
use mucut_core::symbol::leading_symbol;
use mucut_core::{sample, GaussianRational, Generator, LaurentSymbol, SymbolVariant};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn variant() -> impl Strategy<Value = SymbolVariant> {
    prop_oneof![Just(SymbolVariant::MPlusEven), Just(SymbolVariant::MPlusPlus)]
}

/// `Σ a_kl z^k z̄^l` at `z = e^{-iθ}√s`, or `e^{-iθ/2}√s` on the orbifold cut.
fn eval_jet(j: &Jet, variant: SymbolVariant, s: f64, theta: f64) -> Complex64 {
    let angle = match variant {
        SymbolVariant::MPlusEven => -theta,
        SymbolVariant::MPlusPlus => -theta / 2.0,
    };
    let z = Complex64::from_polar(s.sqrt(), angle);
    j.coeffs().iter().map(|(&(k, l), a)| a.to_complex64() * z.powu(k) * z.conj().powu(l)).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn smooth_extension_is_evenness(seed in any::<u64>()) {
        let j = sample::jet(&mut rng(seed), 8, 9);
        let even = j.coeffs().keys().all(|(k, l)| (k + l) % 2 == 0);
        prop_assert_eq!(extends_smoothly(&j), even);
        for v in [SymbolVariant::MPlusEven, SymbolVariant::MPlusPlus] {
            match pullback_jet(&j, v) {
                Ok(_) => prop_assert!(even),
                Err(CutError::OddJet { k, l }) => {
                    prop_assert!(!even);
                    prop_assert!((k + l) % 2 == 1 && j.coeffs().contains_key(&(k, l)));
                }
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pullback_matches_evaluation(seed in any::<u64>(), v in variant(), s in 0.1f64..3.0, th in -3.0f64..3.0) {
        let j = sample::even_jet(&mut rng(seed), 8, 9);
        let sigma = pullback_jet(&j, v).unwrap();
        prop_assert!(sigma.is_polynomial());
        let (a, b) = (sigma.eval_f64(s, th), eval_jet(&j, v, s, th));
        prop_assert!((a - b).norm() <= 1e-9 * (1.0 + b.norm()));
    }

    #[test]
    fn pushforward_inverts_pullback(seed in any::<u64>(), v in variant()) {
        let mut r = rng(seed);
        let j = sample::even_jet(&mut r, 8, 9);
        let back = pushforward_symbol(&pullback_jet(&j, v).unwrap(), v).unwrap();
        prop_assert_eq!(back.coeffs(), j.coeffs());

        let m = r.gen_range(0..=6);
        let sigma = sample::admissible_symbol(&mut r, v, m, 6, 9);
        prop_assert_eq!(pullback_jet(&pushforward_symbol(&sigma, v).unwrap(), v).unwrap(), sigma);
    }

    #[test]
    fn pullback_is_multiplicative(seed in any::<u64>(), v in variant()) {
        let mut r = rng(seed);
        let (f, g) = (sample::even_jet(&mut r, 8, 9), sample::even_jet(&mut r, 8, 9));
        let product = pullback_jet(&(&f * &g), v).unwrap();
        prop_assert_eq!(product, pullback_jet(&f, v).unwrap().mul(&pullback_jet(&g, v).unwrap()));
    }

    #[test]
    fn jet_json_round_trip(seed in any::<u64>()) {
        let j = sample::jet(&mut rng(seed), 8, 9);
        let text = serde_json::to_string(&j).unwrap();
        prop_assert_eq!(serde_json::from_str::<Jet>(&text).unwrap(), j);
    }
}

#[test]
fn generators_push_forward_to_ring_generators() {
    let one = GaussianRational::one;
    let cases = [
        (SymbolVariant::MPlusPlus, [Generator::D, Generator::Raise, Generator::Lower]),
        (SymbolVariant::MPlusEven, [Generator::D, Generator::RaiseEven, Generator::LowerEven]),
    ];
    for (v, gens) in cases {
        let images: Vec<Jet> =
            gens.iter().map(|g| pushforward_symbol(&leading_symbol(&g.operator()).unwrap(), v).unwrap()).collect();
        assert_eq!(images[0], Jet::monomial(1, 1, one()), "{v:?}");
        assert_eq!(images[1], Jet::monomial(0, 2, one()), "{v:?}");
        assert_eq!(images[2], Jet::monomial(2, 0, one()), "{v:?}");
    }
}

#[test]
fn pullback_table() {
    let one = GaussianRational::one;
    let s = |k| LaurentSymbol::monomial(k, one(), 1);
    let z2 = Jet::monomial(2, 0, one());
    assert_eq!(pullback_jet(&z2, SymbolVariant::MPlusEven).unwrap(), s(-2));
    assert_eq!(pullback_jet(&z2, SymbolVariant::MPlusPlus).unwrap(), s(-1));
    for v in [SymbolVariant::MPlusEven, SymbolVariant::MPlusPlus] {
        assert_eq!(pullback_jet(&Jet::monomial(1, 1, one()), v).unwrap(), s(0));
    }
    assert_eq!(pullback_jet(&Jet::monomial(0, 2, one()), SymbolVariant::MPlusEven).unwrap(), s(2));
    assert!(extends_smoothly(&Jet::monomial(1, 1, one()).add_jet(&Jet::monomial(0, 2, one()))));
    assert!(!extends_smoothly(&Jet::monomial(1, 0, one())));
}

#[test]
fn json_rejects_duplicates() {
    let dup = r#"{"dmax": 2, "coeffs": [{"k": 1, "l": 1, "value": "1"}, {"k": 1, "l": 1, "value": "2"}]}"#;
    assert!(serde_json::from_str::<Jet>(dup).is_err());
    let big = r#"{"dmax": 100000, "coeffs": []}"#;
    assert!(serde_json::from_str::<Jet>(big).is_err());
}
