use mucut_core::cones::{
    apply_unimodular, cut_cone, cut_cone_n, cut_plan, gl_equivalent, lens_cone, normal_form, sl_equivalent,
    sphere_cone, verify_plan, Cone2, ConeError, ConeN, ConeNormalForm, HalfspaceZ,
};
use mucut_core::{sample, LatticeVector2, Unimodular2};
use num_integer::Integer;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn lv(a: i64, b: i64) -> LatticeVector2 {
    LatticeVector2::new(a, b)
}

fn lattice_box(r: i64) -> impl Iterator<Item = LatticeVector2> {
    (-r..=r).flat_map(move |a| (-r..=r).map(move |b| lv(a, b)))
}

/// Every matrix with entries in `[-5, 5]` and determinant ±1.
fn small_unimodular() -> &'static [Unimodular2] {
    static ALL: OnceLock<Vec<Unimodular2>> = OnceLock::new();
    ALL.get_or_init(|| {
        let r = -5..=5i64;
        let mut out = Vec::new();
        for a in r.clone() {
            for b in r.clone() {
                for c in r.clone() {
                    for d in r.clone() {
                        if let Ok(m) = Unimodular2::new([[a, b], [c, d]]) {
                            out.push(m);
                        }
                    }
                }
            }
        }
        out
    })
}

/// Exhaustive search for a small unimodular map carrying `a` onto `b`.
fn brute_equivalent(a: &Cone2, b: &Cone2, oriented: bool) -> bool {
    small_unimodular()
        .iter()
        .filter(|m| !oriented || m.det() == 1)
        .any(|m| apply_unimodular(m, a).is_ok_and(|c| c == *b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn cut_is_exact_intersection(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = sample::cone(&mut r, 20);
        let h = HalfspaceZ::new(sample::lattice_vector(&mut r, 10)).unwrap();
        let inside: Vec<LatticeVector2> =
            lattice_box(15).filter(|w| !w.is_zero() && c.contains(w) && h.value(w) >= 0).collect();
        match cut_cone(&c, &h) {
            Ok(cut) => {
                prop_assert!(cut.det() != 0);
                let (u, v) = cut.generators();
                prop_assert!(c.contains(&u) && c.contains(&v));
                prop_assert!(h.value(&u) >= 0 && h.value(&v) >= 0);
                for w in lattice_box(15) {
                    prop_assert_eq!(cut.contains(&w), c.contains(&w) && h.value(&w) >= 0, "{}", w);
                }
            }
            Err(ConeError::EmptyCut) => prop_assert!(inside.is_empty()),
            Err(ConeError::DegenerateCut) => {
                prop_assert!(inside.windows(2).all(|p| p[0].det(&p[1]) == 0));
            }
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn normal_form_is_gl_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = sample::cone(&mut r, 20);
        let m = sample::unimodular(&mut r);
        let image = apply_unimodular(&m, &c).unwrap();
        prop_assert_eq!(normal_form(&image), normal_form(&c));
        prop_assert!(gl_equivalent(&image, &c));
        if m.det() == 1 {
            prop_assert!(sl_equivalent(&image, &c));
        }
        let nf = normal_form(&c);
        prop_assert!(0 <= nf.q && nf.q < nf.p);
        prop_assert_eq!(nf.p as i128, c.det().abs());
        prop_assert!(nf.q == 0 && nf.p == 1 || nf.q.gcd(&nf.p) == 1);
    }

    #[test]
    fn plan_round_trip(seed in any::<u64>()) {
        let c = sample::cone(&mut rng(seed), 20);
        let plan = cut_plan(&c);
        prop_assert!(verify_plan(&c, &plan));
        let (u, v) = c.generators();
        prop_assert_eq!(plan[0].value(&u), 0);
        prop_assert!(plan[0].value(&v) > 0);
        prop_assert_eq!(plan[1].value(&v), 0);
        prop_assert!(plan[1].value(&u) > 0);
        for w in lattice_box(12) {
            prop_assert_eq!(c.contains(&w), plan.iter().all(|h| h.value(&w) >= 0));
        }
    }

    #[test]
    fn halfspace_cones_agree_with_generator_cones(seed in any::<u64>()) {
        let c = sample::cone(&mut rng(seed), 20);
        let plan = cut_plan(&c);
        let n = |i: usize| vec![plan[i].normal().a, plan[i].normal().b];
        let stepwise = cut_cone_n(&ConeN::new(2, vec![n(0)]).unwrap(), &n(1)).unwrap();
        prop_assert_eq!(&stepwise, &ConeN::from_cone2(&c));
        prop_assert_eq!(stepwise.to_cone2().unwrap(), c);
        prop_assert_eq!(cut_cone_n(&stepwise, &n(0)).unwrap(), stepwise);
    }
}

/// Solves `M·A = B` column by column for both orderings of `B`'s
/// generators and reports the determinants of the integral solutions.
fn solved_maps(a: &Cone2, b: &Cone2) -> Vec<i128> {
    let (u, v) = a.generators();
    let (x, y) = b.generators();
    let det = u.det(&v);
    let mut dets = Vec::new();
    for (p, q) in [(x, y), (y, x)] {
        // M = [p q]·[u v]⁻¹, with [u v]⁻¹ = adj / det.
        let m = [
            [
                p.a as i128 * v.b as i128 - q.a as i128 * u.b as i128,
                -(p.a as i128) * v.a as i128 + q.a as i128 * u.a as i128,
            ],
            [
                p.b as i128 * v.b as i128 - q.b as i128 * u.b as i128,
                -(p.b as i128) * v.a as i128 + q.b as i128 * u.a as i128,
            ],
        ];
        if m.iter().flatten().all(|e| e % det == 0) {
            let m = m.map(|row| row.map(|e| e / det));
            dets.push(m[0][0] * m[1][1] - m[0][1] * m[1][0]);
        }
    }
    dets
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn equivalence_matches_exact_solve(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = sample::cone(&mut r, 4);
        let b = sample::cone(&mut r, 4);
        let dets = solved_maps(&a, &b);
        prop_assert_eq!(gl_equivalent(&a, &b), dets.iter().any(|d| d.abs() == 1), "{} {}", a, b);
        prop_assert_eq!(sl_equivalent(&a, &b), dets.contains(&1), "{} {}", a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn small_matrix_search_is_sound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = sample::cone(&mut r, 3);
        let b = sample::cone(&mut r, 3);
        if brute_equivalent(&a, &b, false) {
            prop_assert!(gl_equivalent(&a, &b));
        }
        if brute_equivalent(&a, &b, true) {
            prop_assert!(sl_equivalent(&a, &b));
        }
    }
}

#[test]
fn normal_form_representative_is_reachable() {
    // Larger p can need shears outside the search box.
    for p in 1..=5 {
        for q in 1..=p {
            let Ok(c) = lens_cone(p, q) else { continue };
            let nf = normal_form(&c);
            let rep = Cone2::new(lv(1, 0), lv(nf.q, nf.p)).unwrap();
            assert!(brute_equivalent(&c, &rep, false), "lens({p},{q}) -> {nf:?}");
        }
    }
    let nf = normal_form(&sphere_cone());
    assert_eq!(nf, ConeNormalForm { p: 2, q: 1 });
    assert!(brute_equivalent(&sphere_cone(), &Cone2::new(lv(1, 0), lv(1, 2)).unwrap(), false));
}

#[test]
fn lens_examples_against_search() {
    // |det| is preserved by unimodular maps, so cones with different
    // determinants are never equivalent; the search agrees.
    let l21 = lens_cone(2, 1).unwrap();
    assert_eq!(gl_equivalent(&l21, &sphere_cone()), brute_equivalent(&l21, &sphere_cone(), false));
    assert!(!gl_equivalent(&l21, &sphere_cone()));
    let (l31, l32) = (lens_cone(3, 1).unwrap(), lens_cone(3, 2).unwrap());
    assert_eq!(gl_equivalent(&l31, &l32), brute_equivalent(&l31, &l32, false));
    assert_eq!(lens_cone(2, 2), Err(ConeError::NotCoprime { p: 2, q: 2 }));
}

#[test]
fn lens_identity() {
    let m = Unimodular2::new([[1, 1], [1, 2]]).unwrap();
    for p in 1..=12 {
        for q in 1..=p {
            if p.gcd(&q) != 1 {
                continue;
            }
            let lambda = lv(p + 2 * q, -p - q);
            assert_eq!(lv(1, 1).dot(&lambda), q as i128);
            assert_eq!(lv(-1, 1).dot(&lambda), (-2 * p - 3 * q) as i128);
            let image = apply_unimodular(&m, &lens_cone(p, q).unwrap()).unwrap();
            let cut = cut_cone(&sphere_cone(), &HalfspaceZ::new(lambda).unwrap()).unwrap();
            assert_eq!(image, cut, "p = {p}, q = {q}");
            assert_eq!(image, Cone2::new(lv(1, 1), lv(p + q, p + 2 * q)).unwrap());
        }
    }
}

#[test]
fn membership_examples() {
    let s = sphere_cone();
    assert!(s.contains(&lv(0, 5)));
    assert!(!s.contains(&lv(3, 2)));
    assert!(s.contains(&lv(2, 3)));
    assert!(s.contains(&lv(0, 0)));
    assert!(!lens_cone(1, 1).unwrap().contains(&lv(-1, 0)));
    let l11 = lens_cone(1, 1).unwrap();
    assert_eq!(cut_cone(&l11, &HalfspaceZ::new(lv(0, 1)).unwrap()).unwrap(), l11);
    assert_eq!(cut_cone(&l11, &HalfspaceZ::new(lv(0, -1)).unwrap()), Err(ConeError::DegenerateCut));
    let plan = cut_plan(&l11);
    assert_eq!(plan.map(|h| h.normal()), [lv(0, 1), lv(1, -1)]);
}
