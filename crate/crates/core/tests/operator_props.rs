use mucut_core::algebra::{GaussianRational, Polynomial};
use mucut_core::operator::{
    commutant_factorize, commutator_entries, commutator_entries_in_window, ladder_product, realize_exact,
    realize_matrix, recompose_factors, szego_commutes, verify_pk_identity, CommutatorEntry, ExactWindow,
};
use mucut_core::{sample, CanonicalOperator, Generator, Parity};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N: i64 = 32;
const MAX_SHIFT: i64 = 4;
const INTERIOR: i64 = N - MAX_SHIFT;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn parity() -> impl Strategy<Value = Parity> {
    prop_oneof![Just(Parity::Full), Just(Parity::Even)]
}

/// `[Π_N, A_N]` built from dense exact windows, restricted to the interior.
fn brute_commutator(a: &CanonicalOperator, parity: Parity) -> ExactWindow {
    let pi = ExactWindow::projector(parity, -N, N);
    let a_n = realize_exact(a, N).unwrap();
    pi.commutator(&a_n).restrict(-INTERIOR, INTERIOR)
}

fn window_entries(w: &ExactWindow) -> Vec<CommutatorEntry> {
    let mut v: Vec<_> =
        w.nonzero().map(|(row, col, value)| CommutatorEntry { row, col, value: value.clone() }).collect();
    v.sort();
    v
}

/// Mode action of `A∘B` computed by applying `B` then `A`.
fn apply_twice(a: &CanonicalOperator, b: &CanonicalOperator, n: i64) -> CanonicalOperator {
    let mut out = CanonicalOperator::zero();
    for (m, c) in b.apply_to_mode(n) {
        for (r, d) in a.apply_to_mode(m) {
            out = &out + &CanonicalOperator::term(r, Polynomial::constant(&c * &d));
        }
    }
    out
}

fn as_vector(v: Vec<(i64, GaussianRational)>) -> CanonicalOperator {
    CanonicalOperator::new(v.into_iter().map(|(r, c)| (r, Polynomial::constant(c))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn commutation_matches_brute_force(seed in any::<u64>(), parity in parity()) {
        let a = sample::near_commutant_operator(&mut rng(seed), parity, MAX_SHIFT, 6, 9);
        prop_assert_eq!(szego_commutes(&a, parity), brute_commutator(&a, parity).is_zero(), "{:?}", a);
    }

    #[test]
    fn predicted_entries_match_realized(seed in any::<u64>()) {
        let a = sample::near_commutant_operator(&mut rng(seed), Parity::Full, MAX_SHIFT, 6, 9);
        let predicted = commutator_entries(&a, Parity::Full);
        prop_assert!(predicted.unbounded_shifts.is_empty());
        prop_assert_eq!(predicted.entries, window_entries(&brute_commutator(&a, Parity::Full)));
    }

    #[test]
    fn windowed_entries_match_realized_even(seed in any::<u64>()) {
        let a = sample::near_commutant_operator(&mut rng(seed), Parity::Even, MAX_SHIFT, 6, 9);
        let predicted = commutator_entries_in_window(&a, Parity::Even, -INTERIOR, INTERIOR);
        prop_assert_eq!(&predicted, &window_entries(&brute_commutator(&a, Parity::Even)));
        // Finite entries from the closed form are a subset of the window.
        let closed = commutator_entries(&a, Parity::Even);
        for e in &closed.entries {
            prop_assert!(predicted.contains(e));
        }
    }

    #[test]
    fn compose_matches_matrix_product(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = sample::operator(&mut r, MAX_SHIFT, 5, 9);
        let b = sample::operator(&mut r, MAX_SHIFT, 5, 9);
        let ab = a.compose(&b);
        let inner = N - 2 * MAX_SHIFT;
        let exact = realize_exact(&a, N).unwrap().matmul(&realize_exact(&b, N).unwrap());
        prop_assert_eq!(realize_exact(&ab, N).unwrap().restrict(-inner, inner), exact.restrict(-inner, inner));

        let float = realize_matrix(&a, N).unwrap().matmul(&realize_matrix(&b, N).unwrap());
        let direct = realize_matrix(&ab, N).unwrap();
        for row in -inner..=inner {
            for col in -inner..=inner {
                let scale = 1.0 + direct.entry(row, col).norm();
                prop_assert!((float.entry(row, col) - direct.entry(row, col)).norm() <= 1e-9 * scale);
            }
        }
    }

    #[test]
    fn compose_matches_mode_action(seed in any::<u64>(), n in -50i64..50) {
        let mut r = rng(seed);
        let a = sample::operator(&mut r, MAX_SHIFT, 4, 9);
        let b = sample::operator(&mut r, MAX_SHIFT, 4, 9);
        prop_assert_eq!(as_vector(a.compose(&b).apply_to_mode(n)), apply_twice(&a, &b, n));
    }

    #[test]
    fn compose_is_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = sample::operator(&mut r, 3, 3, 9);
        let b = sample::operator(&mut r, 3, 3, 9);
        let c = sample::operator(&mut r, 3, 3, 9);
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn adjoint_properties(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = sample::operator(&mut r, MAX_SHIFT, 4, 9);
        let b = sample::operator(&mut r, MAX_SHIFT, 4, 9);
        let adj = a.adjoint();
        prop_assert_eq!(adj.adjoint(), a.clone());
        prop_assert_eq!(a.compose(&b).adjoint(), b.adjoint().compose(&adj));
        for row in -10..=10 {
            for col in -10..=10 {
                prop_assert_eq!(adj.entry(row, col), a.entry(col, row).conj());
            }
        }
    }

    #[test]
    fn odd_terms_never_commute_with_even_projector(seed in any::<u64>()) {
        let mut r = rng(seed);
        let order = r.gen_range(0..=4);
        let base = sample::commuting_operator(&mut r, Parity::Even, order, MAX_SHIFT, 9);
        let k = 2 * r.gen_range(-2i64..=1) + 1;
        let odd = CanonicalOperator::term(k, sample::nonzero_polynomial(&mut r, 6, 9));
        let a = &base + &odd;
        prop_assume!(a.terms().any(|(k, _)| k % 2 != 0));
        prop_assert!(!szego_commutes(&a, Parity::Even));
    }

    #[test]
    fn factorization_round_trip(seed in any::<u64>(), parity in parity()) {
        let mut r = rng(seed);
        let order = r.gen_range(0..=5);
        let a = sample::commuting_operator(&mut r, parity, order, MAX_SHIFT, 9);
        let factors = commutant_factorize(&a, parity).unwrap();
        for (&k, rk) in &factors {
            prop_assert_eq!(&ladder_product(k, parity).unwrap() * rk, a.get(k).unwrap().clone());
        }
        prop_assert_eq!(recompose_factors(&factors, parity).unwrap(), a);
    }

    #[test]
    fn factorization_rejects_non_commuting(seed in any::<u64>(), parity in parity()) {
        let a = sample::near_commutant_operator(&mut rng(seed), parity, MAX_SHIFT, 6, 9);
        prop_assert_eq!(commutant_factorize(&a, parity).is_ok(), szego_commutes(&a, parity));
    }

    #[test]
    fn compression_vanishes_only_for_zero(seed in any::<u64>(), parity in parity()) {
        let mut r = rng(seed);
        let a = match r.gen_range(0..4) {
            0 => CanonicalOperator::zero(),
            // Coefficients with as many integer roots as the degree bound allows.
            1 => {
                let k = sample::int(&mut r, MAX_SHIFT);
                let start = r.gen_range(-6..=6);
                CanonicalOperator::term(k, Polynomial::from_roots(start..start + 6))
            }
            _ => sample::operator(&mut r, MAX_SHIFT, 6, 9),
        };
        let pi = ExactWindow::projector(parity, -N, N);
        let compressed = pi.matmul(&realize_exact(&a, N).unwrap()).matmul(&pi).restrict(-INTERIOR, INTERIOR);
        let visible = match parity {
            Parity::Full => a.clone(),
            Parity::Even => a.even_part(),
        };
        prop_assert_eq!(compressed.is_zero(), visible.is_zero());
    }
}

/// Mode action of `Raise^k` on `e_n`, multiplied out by hand.
fn raise_power_on_mode(k: u32, n: i64) -> (i64, i64) {
    let mut mode = n;
    let mut coeff = 1i64;
    for _ in 0..k {
        mode += 1;
        coeff *= mode;
    }
    (mode, coeff)
}

#[test]
fn raise_powers_are_rising_products() {
    for k in 1..=10u32 {
        assert!(verify_pk_identity(k), "k = {k}");
        let op = Generator::Raise.operator().pow(k);
        for n in -15..=15 {
            let (mode, coeff) = raise_power_on_mode(k, n);
            let expected = if coeff == 0 { vec![] } else { vec![(mode, GaussianRational::from_integer(coeff))] };
            assert_eq!(op.apply_to_mode(n), expected, "k = {k}, n = {n}");
        }
    }
}

#[test]
fn generator_commutation_table() {
    let full = [Generator::D, Generator::Raise, Generator::Lower];
    let even = [Generator::D, Generator::RaiseEven, Generator::LowerEven];
    for g in full {
        assert!(szego_commutes(&g.operator(), Parity::Full));
        assert!(brute_commutator(&g.operator(), Parity::Full).is_zero());
    }
    for g in even {
        assert!(szego_commutes(&g.operator(), Parity::Even));
        assert!(brute_commutator(&g.operator(), Parity::Even).is_zero());
    }
    let bad = Generator::LowerEvenDerivativeFirst.operator();
    assert!(!szego_commutes(&bad, Parity::Even));
    let entries = window_entries(&brute_commutator(&bad, Parity::Even));
    assert_eq!(entries, vec![CommutatorEntry { row: -2, col: 0, value: GaussianRational::from_integer(2) }]);
    assert_eq!(commutator_entries(&bad, Parity::Even).entries, entries);
}
