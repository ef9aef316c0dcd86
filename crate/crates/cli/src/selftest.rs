//! The invariant suite behind `mucut selftest`.
//!
//! Every check draws from its own ChaCha stream of the configured seed, so
//! checks are independent of each other and of execution order.

use clap::ValueEnum;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use mucut_core::cones::{
    apply_unimodular, cut_cone, cut_cone_n, cut_plan, lens_cone, normal_form, sphere_cone, verify_plan, Cone2,
    ConeError, ConeN, ConeNormalForm, HalfspaceZ,
};
use mucut_core::cut::{extends_smoothly, pullback_jet, pushforward_symbol, CutError, Jet};
use mucut_core::linalg::jacobi_eigenvalues;
use mucut_core::operator::{
    commutant_factorize, commutator_entries, ladder_product, parametrix_check, projected_spectrum, realize_exact,
    recompose_factors, residue_contour, residue_log_fit, szego_commutes, szego_commutes_with, verify_pk_identity,
    weyl_compare, weyl_default_grid, CommutatorEntry, ExactWindow, FitRange, VanishingRange,
};
use mucut_core::symbol::{build_commuting_from_symbol, leading_symbol, poisson_bracket, symbol_tower};
use mucut_core::{
    sample, CanonicalOperator, GaussianRational, Generator, LatticeVector2, LaurentSymbol, Parity, Polynomial,
    SymbolVariant, Unimodular2,
};

/// Deliberate defects used to confirm that the suite notices them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Flip the sign of the Poisson bracket.
    PoissonSign,
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub seed: u64,
    pub fault: Option<Fault>,
    /// With `UniformNegative`, an extra row checks the commutation criterion
    /// under that range. It is expected to fail.
    pub range: VanishingRange,
}

impl Options {
    pub fn new(seed: u64) -> Self {
        Options { seed, fault: None, range: VanishingRange::Exact }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
}

struct Ctx {
    rng: ChaCha8Rng,
    opts: Options,
}

impl Ctx {
    fn bracket(&self, f: &LaurentSymbol, g: &LaurentSymbol) -> LaurentSymbol {
        let b = poisson_bracket(f, g);
        match self.opts.fault {
            Some(Fault::PoissonSign) => b.neg(),
            None => b,
        }
    }
}

type Check = fn(&mut Ctx) -> Result<usize, String>;

fn ensure(cond: bool, detail: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(detail())
    }
}

const CHECKS: &[(&str, Check)] = &[
    ("ladder-power-identity", ladder_power_identity),
    ("generator-commutation", generator_commutation),
    ("commutant-criterion", commutant_criterion),
    ("commutator-entries", commutator_entries_exact),
    ("commutant-factorization", commutant_factorization),
    ("odd-shift-exclusion", odd_shift_exclusion),
    ("adjoint", adjoint),
    ("normal-form-closure", normal_form_closure),
    ("compression-support", compression_support),
    ("symbol-homomorphism", symbol_homomorphism),
    ("symbol-adjoint", symbol_adjoint),
    ("symbol-build-round-trip", symbol_build_round_trip),
    ("symbol-tower", symbol_tower_check),
    ("bracket-jacobi", bracket_jacobi),
    ("jet-smoothness", jet_smoothness),
    ("pullback-table", pullback_table),
    ("pullback-round-trip", pullback_round_trip),
    ("pullback-multiplicative", pullback_multiplicative),
    ("generator-correspondence", generator_correspondence),
    ("cone-cut-soundness", cone_cut_soundness),
    ("normal-form-invariance", normal_form_invariance),
    ("lens-identity", lens_identity),
    ("sphere-normal-form", sphere_normal_form),
    ("cut-plan-round-trip", cut_plan_round_trip),
    ("halfspace-cones", halfspace_cones),
    ("spectrum-oracle", spectrum_oracle),
    ("weyl-law", weyl_law),
    ("residue-calibration", residue_calibration),
    ("parametrix", parametrix),
];

const UNIFORM_RANGE_ROW: &str = "commutant-criterion-uniform-range";

/// Names of the rows `run` produces under these options, in order.
pub fn check_names(opts: &Options) -> Vec<&'static str> {
    let mut names: Vec<&'static str> = CHECKS.iter().map(|c| c.0).collect();
    if opts.range == VanishingRange::UniformNegative {
        let at = names.iter().position(|&n| n == "commutant-criterion").expect("listed") + 1;
        names.insert(at, UNIFORM_RANGE_ROW);
    }
    names
}

pub fn run_check(name: &str, opts: &Options) -> Option<Row> {
    let (index, name, check): (usize, &'static str, Check) = if name == UNIFORM_RANGE_ROW {
        (CHECKS.len(), UNIFORM_RANGE_ROW, commutant_criterion_uniform)
    } else {
        let i = CHECKS.iter().position(|c| c.0 == name)?;
        (i, CHECKS[i].0, CHECKS[i].1)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(index as u64);
    let mut ctx = Ctx { rng, opts: *opts };
    Some(match check(&mut ctx) {
        Ok(cases) => Row { name, passed: true, cases, detail: String::new() },
        Err(detail) => Row { name, passed: false, cases: 0, detail },
    })
}

pub fn run(opts: &Options) -> Vec<Row> {
    check_names(opts).into_iter().map(|n| run_check(n, opts).expect("known check")).collect()
}

// ---- operators -------------------------------------------------------------

const WINDOW: i64 = 32;
const MAX_SHIFT: i64 = 4;
const INTERIOR: i64 = WINDOW - MAX_SHIFT;

fn brute_commutator(a: &CanonicalOperator, parity: Parity) -> ExactWindow {
    let pi = ExactWindow::projector(parity, -WINDOW, WINDOW);
    let a_n = realize_exact(a, WINDOW).expect("bandwidth below the window");
    pi.commutator(&a_n).restrict(-INTERIOR, INTERIOR)
}

fn ladder_power_identity(_: &mut Ctx) -> Result<usize, String> {
    for k in 1..=10u32 {
        ensure(verify_pk_identity(k), || format!("Raise^{k} differs from the rising product"))?;
        let op = Generator::Raise.operator().pow(k);
        for n in -12..=12i64 {
            let coeff: i64 = (1..=k as i64).map(|j| n + j).product();
            let expected =
                if coeff == 0 { vec![] } else { vec![(n + k as i64, GaussianRational::from_integer(coeff))] };
            ensure(op.apply_to_mode(n) == expected, || format!("Raise^{k} on mode {n}"))?;
        }
    }
    Ok(10)
}

fn generator_commutation(_: &mut Ctx) -> Result<usize, String> {
    let table = [
        (Parity::Full, [Generator::D, Generator::Raise, Generator::Lower]),
        (Parity::Even, [Generator::D, Generator::RaiseEven, Generator::LowerEven]),
    ];
    for (parity, gens) in table {
        for g in gens {
            let a = g.operator();
            ensure(szego_commutes(&a, parity), || format!("{g:?} should commute ({parity})"))?;
            ensure(brute_commutator(&a, parity).is_zero(), || format!("{g:?}: nonzero realized commutator"))?;
        }
    }
    let bad = Generator::LowerEvenDerivativeFirst.operator();
    ensure(!szego_commutes(&bad, Parity::Even), || "derivative-first lowering reported commuting".into())?;
    let witness = vec![CommutatorEntry { row: -2, col: 0, value: GaussianRational::from_integer(2) }];
    ensure(commutator_entries(&bad, Parity::Even).entries == witness, || "missing mode-0 witness entry".into())?;
    Ok(7)
}

fn criterion_against_brute_force(ctx: &mut Ctx, range: VanishingRange) -> Result<usize, String> {
    for parity in [Parity::Full, Parity::Even] {
        for i in 0..200 {
            let a = sample::near_commutant_operator(&mut ctx.rng, parity, MAX_SHIFT, 6, 9);
            let predicted = szego_commutes_with(&a, parity, range);
            let realized = brute_commutator(&a, parity).is_zero();
            ensure(predicted == realized, || {
                format!("{parity} case {i}: predicted {predicted}, window says {realized} for {a:?}")
            })?;
        }
    }
    Ok(400)
}

fn commutant_criterion(ctx: &mut Ctx) -> Result<usize, String> {
    criterion_against_brute_force(ctx, VanishingRange::Exact)
}

fn commutant_criterion_uniform(ctx: &mut Ctx) -> Result<usize, String> {
    criterion_against_brute_force(ctx, VanishingRange::UniformNegative)
}

fn commutator_entries_exact(ctx: &mut Ctx) -> Result<usize, String> {
    let mut done = 0;
    while done < 100 {
        let a = sample::near_commutant_operator(&mut ctx.rng, Parity::Full, MAX_SHIFT, 6, 9);
        if szego_commutes(&a, Parity::Full) {
            continue;
        }
        let mut realized: Vec<CommutatorEntry> = brute_commutator(&a, Parity::Full)
            .nonzero()
            .map(|(row, col, value)| CommutatorEntry { row, col, value: value.clone() })
            .collect();
        realized.sort();
        ensure(commutator_entries(&a, Parity::Full).entries == realized, || format!("entries differ for {a:?}"))?;
        done += 1;
    }
    Ok(done)
}

fn commutant_factorization(ctx: &mut Ctx) -> Result<usize, String> {
    for i in 0..100 {
        let parity = if i % 2 == 0 { Parity::Full } else { Parity::Even };
        let order = ctx.rng.gen_range(0..=5);
        let a = sample::commuting_operator(&mut ctx.rng, parity, order, MAX_SHIFT, 9);
        let factors = commutant_factorize(&a, parity).map_err(|e| format!("{e} for {a:?}"))?;
        for (&k, r) in &factors {
            let p = ladder_product(k, parity).ok_or("missing ladder product")?;
            ensure(&p * r == *a.get(k).expect("factor for a present shift"), || format!("remainder at k = {k}"))?;
        }
        ensure(recompose_factors(&factors, parity).as_ref() == Some(&a), || format!("recomposition of {a:?}"))?;
    }
    Ok(100)
}

fn odd_shift_exclusion(ctx: &mut Ctx) -> Result<usize, String> {
    for _ in 0..100 {
        let order = ctx.rng.gen_range(0..=4);
        let base = sample::commuting_operator(&mut ctx.rng, Parity::Even, order, MAX_SHIFT, 9);
        let k = 2 * ctx.rng.gen_range(-2i64..=1) + 1;
        let a = &base + &CanonicalOperator::term(k, sample::nonzero_polynomial(&mut ctx.rng, 6, 9));
        ensure(!szego_commutes(&a, Parity::Even), || format!("odd shift accepted in {a:?}"))?;
    }
    Ok(100)
}

fn adjoint(ctx: &mut Ctx) -> Result<usize, String> {
    for _ in 0..100 {
        let a = sample::operator(&mut ctx.rng, MAX_SHIFT, 4, 9);
        let b = sample::operator(&mut ctx.rng, MAX_SHIFT, 4, 9);
        ensure(a.adjoint().adjoint() == a, || format!("involution fails for {a:?}"))?;
        ensure(a.compose(&b).adjoint() == b.adjoint().compose(&a.adjoint()), || "anti-homomorphism fails".into())?;
        let adj = a.adjoint();
        for row in -6..=6 {
            for col in -6..=6 {
                ensure(adj.entry(row, col) == a.entry(col, row).conj(), || format!("entry ({row}, {col})"))?;
            }
        }
    }
    Ok(100)
}

fn normal_form_closure(ctx: &mut Ctx) -> Result<usize, String> {
    let inner = WINDOW - 2 * MAX_SHIFT;
    for _ in 0..50 {
        let a = sample::operator(&mut ctx.rng, MAX_SHIFT, 5, 9);
        let b = sample::operator(&mut ctx.rng, MAX_SHIFT, 5, 9);
        let direct = realize_exact(&a.compose(&b), WINDOW).expect("window").restrict(-inner, inner);
        let product = realize_exact(&a, WINDOW)
            .expect("window")
            .matmul(&realize_exact(&b, WINDOW).expect("window"))
            .restrict(-inner, inner);
        ensure(direct == product, || format!("compose differs from the matrix product for {a:?}, {b:?}"))?;
    }
    Ok(50)
}

fn compression_support(ctx: &mut Ctx) -> Result<usize, String> {
    for i in 0..100 {
        let parity = if i % 2 == 0 { Parity::Full } else { Parity::Even };
        let a = match ctx.rng.gen_range(0..4) {
            0 => CanonicalOperator::zero(),
            1 => {
                let k = sample::int(&mut ctx.rng, MAX_SHIFT);
                let start = ctx.rng.gen_range(-6..=6);
                CanonicalOperator::term(k, Polynomial::from_roots(start..start + 6))
            }
            _ => sample::operator(&mut ctx.rng, MAX_SHIFT, 6, 9),
        };
        let pi = ExactWindow::projector(parity, -WINDOW, WINDOW);
        let compressed =
            pi.matmul(&realize_exact(&a, WINDOW).expect("window")).matmul(&pi).restrict(-INTERIOR, INTERIOR);
        let visible = match parity {
            Parity::Full => a.clone(),
            Parity::Even => a.even_part(),
        };
        ensure(compressed.is_zero() == visible.is_zero(), || format!("{parity}: compression of {a:?}"))?;
    }
    Ok(100)
}

// ---- symbols ---------------------------------------------------------------

fn random_symbol(rng: &mut ChaCha8Rng) -> LaurentSymbol {
    let valuation = rng.gen_range(-3..=0);
    let count = rng.gen_range(1..=3);
    let modes: Vec<_> = (0..count).map(|_| (sample::int(rng, 3), sample::polynomial(rng, 3, 5))).collect();
    LaurentSymbol::from_parts(valuation, modes)
}

fn symbol_homomorphism(ctx: &mut Ctx) -> Result<usize, String> {
    let minus_i = GaussianRational::from_parts(0, -1);
    let (raise, lower) = (Generator::Raise.operator(), Generator::Lower.operator());
    let witness = ctx.bracket(&leading_symbol(&raise).expect("nonzero"), &leading_symbol(&lower).expect("nonzero"));
    let expected = LaurentSymbol::monomial(0, GaussianRational::from_integer(-2), 1);
    ensure(witness.scale(&minus_i) == expected, || format!("-i{{σ(Raise), σ(Lower)}} = {}", witness.scale(&minus_i)))?;
    ensure(leading_symbol(&raise.commutator(&lower)).ok() == Some(expected), || "σ([Raise, Lower]) ≠ -2s".into())?;

    let mut cases = 1;
    for i in 0..100 {
        let parity = if i % 2 == 0 { Parity::Full } else { Parity::Even };
        let (m1, m2) = (ctx.rng.gen_range(1..=4), ctx.rng.gen_range(1..=4));
        let a = sample::commuting_operator(&mut ctx.rng, parity, m1, MAX_SHIFT, 9);
        let b = sample::commuting_operator(&mut ctx.rng, parity, m2, MAX_SHIFT, 9);
        let (sa, sb) = (leading_symbol(&a).expect("nonzero"), leading_symbol(&b).expect("nonzero"));
        let product = sa.mul(&sb);
        if !product.is_zero() {
            ensure(leading_symbol(&a.compose(&b)).ok() == Some(product), || format!("σ(AB) ≠ σAσB for {a:?}, {b:?}"))?;
        }
        let bracket = ctx.bracket(&sa, &sb);
        if !bracket.is_zero() {
            let got = leading_symbol(&a.commutator(&b)).ok();
            ensure(got == Some(bracket.scale(&minus_i)), || format!("σ([A,B]) ≠ -i{{σA, σB}} for {a:?}, {b:?}"))?;
        }
        cases += 1;
    }
    Ok(cases)
}

fn symbol_adjoint(ctx: &mut Ctx) -> Result<usize, String> {
    let mut done = 0;
    while done < 100 {
        let a = sample::operator(&mut ctx.rng, 6, 6, 9);
        if a.is_zero() {
            continue;
        }
        let lhs = leading_symbol(&a.adjoint()).expect("nonzero");
        ensure(lhs == leading_symbol(&a).expect("nonzero").conjugate(), || format!("σ(A*) for {a:?}"))?;
        done += 1;
    }
    Ok(done)
}

fn symbol_build_round_trip(ctx: &mut Ctx) -> Result<usize, String> {
    for i in 0..100 {
        let parity = if i % 2 == 0 { Parity::Full } else { Parity::Even };
        let m = ctx.rng.gen_range(0..=6);
        let sigma = sample::admissible_symbol(&mut ctx.rng, SymbolVariant::for_parity(parity), m, 6, 9);
        let a = build_commuting_from_symbol(&sigma, parity).map_err(|e| format!("{e} for {sigma}"))?;
        ensure(szego_commutes(&a, parity), || format!("lift of {sigma} does not commute"))?;
        ensure(leading_symbol(&a).ok() == Some(sigma.clone()), || format!("round trip of {sigma}"))?;
    }
    Ok(100)
}

fn symbol_tower_check(ctx: &mut Ctx) -> Result<usize, String> {
    for i in 0..100 {
        let parity = if i % 2 == 0 { Parity::Full } else { Parity::Even };
        let m = ctx.rng.gen_range(0..=5);
        let a = sample::commuting_operator(&mut ctx.rng, parity, m, MAX_SHIFT, 9);
        let tower = symbol_tower(&a, parity).map_err(|e| e.to_string())?;
        ensure(tower.len() == m as usize + 1, || format!("tower of length {} for order {m}", tower.len()))?;
        let mut rebuilt = CanonicalOperator::zero();
        for sigma in &tower {
            rebuilt = &rebuilt + &build_commuting_from_symbol(sigma, parity).map_err(|e| e.to_string())?;
        }
        ensure(rebuilt == a, || format!("tower does not rebuild {a:?}"))?;
    }
    Ok(100)
}

fn bracket_jacobi(ctx: &mut Ctx) -> Result<usize, String> {
    for _ in 0..100 {
        let f = random_symbol(&mut ctx.rng);
        let g = random_symbol(&mut ctx.rng);
        let h = random_symbol(&mut ctx.rng);
        ensure(ctx.bracket(&f, &g) == ctx.bracket(&g, &f).neg(), || "antisymmetry".into())?;
        let jacobi = ctx
            .bracket(&f, &ctx.bracket(&g, &h))
            .add(&ctx.bracket(&g, &ctx.bracket(&h, &f)))
            .add(&ctx.bracket(&h, &ctx.bracket(&f, &g)));
        ensure(jacobi.is_zero(), || format!("Jacobi sum {jacobi} for {f}, {g}, {h}"))?;
    }
    Ok(100)
}

// ---- cut space -------------------------------------------------------------

fn jet_smoothness(ctx: &mut Ctx) -> Result<usize, String> {
    for _ in 0..500 {
        let j = sample::jet(&mut ctx.rng, 8, 9);
        let even = j.coeffs().keys().all(|(k, l)| (k + l) % 2 == 0);
        ensure(extends_smoothly(&j) == even, || format!("smoothness of {j:?}"))?;
        for v in [SymbolVariant::MPlusEven, SymbolVariant::MPlusPlus] {
            let odd_rejected = matches!(pullback_jet(&j, v), Err(CutError::OddJet { .. }));
            ensure(odd_rejected != even, || format!("pullback parity of {j:?}"))?;
        }
    }
    Ok(500)
}

fn pullback_table(_: &mut Ctx) -> Result<usize, String> {
    let one = GaussianRational::one;
    let s = |k| LaurentSymbol::monomial(k, one(), 1);
    let rows = [
        (Jet::monomial(2, 0, one()), SymbolVariant::MPlusEven, s(-2)),
        (Jet::monomial(2, 0, one()), SymbolVariant::MPlusPlus, s(-1)),
        (Jet::monomial(1, 1, one()), SymbolVariant::MPlusEven, s(0)),
        (Jet::monomial(1, 1, one()), SymbolVariant::MPlusPlus, s(0)),
        (Jet::monomial(0, 2, one()), SymbolVariant::MPlusEven, s(2)),
    ];
    for (j, v, want) in &rows {
        let got = pullback_jet(j, *v).map_err(|e| e.to_string())?;
        ensure(got == *want, || format!("{j:?} on {v:?} gave {got}"))?;
    }
    Ok(rows.len())
}

fn pullback_round_trip(ctx: &mut Ctx) -> Result<usize, String> {
    for i in 0..200 {
        let v = if i % 2 == 0 { SymbolVariant::MPlusEven } else { SymbolVariant::MPlusPlus };
        let m = ctx.rng.gen_range(0..=6);
        let sigma = sample::admissible_symbol(&mut ctx.rng, v, m, 6, 9);
        let jet = pushforward_symbol(&sigma, v).map_err(|e| format!("{e} for {sigma}"))?;
        ensure(pullback_jet(&jet, v).ok() == Some(sigma.clone()), || format!("round trip of {sigma}"))?;
        let j = sample::even_jet(&mut ctx.rng, 8, 9);
        let back = pullback_jet(&j, v).and_then(|s| pushforward_symbol(&s, v)).map_err(|e| e.to_string())?;
        ensure(back.coeffs() == j.coeffs(), || format!("round trip of {j:?}"))?;
    }
    Ok(200)
}

fn pullback_multiplicative(ctx: &mut Ctx) -> Result<usize, String> {
    for i in 0..100 {
        let v = if i % 2 == 0 { SymbolVariant::MPlusEven } else { SymbolVariant::MPlusPlus };
        let f = sample::even_jet(&mut ctx.rng, 8, 9);
        let g = sample::even_jet(&mut ctx.rng, 8, 9);
        let lhs = pullback_jet(&(&f * &g), v).map_err(|e| e.to_string())?;
        let rhs = pullback_jet(&f, v).and_then(|a| Ok(a.mul(&pullback_jet(&g, v)?))).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("pullback of {f:?}·{g:?}"))?;
    }
    Ok(100)
}

fn generator_correspondence(_: &mut Ctx) -> Result<usize, String> {
    let one = GaussianRational::one;
    let targets = [Jet::monomial(1, 1, one()), Jet::monomial(0, 2, one()), Jet::monomial(2, 0, one())];
    let cases = [
        (SymbolVariant::MPlusPlus, [Generator::D, Generator::Raise, Generator::Lower]),
        (SymbolVariant::MPlusEven, [Generator::D, Generator::RaiseEven, Generator::LowerEven]),
    ];
    for (v, gens) in cases {
        for (g, want) in gens.iter().zip(&targets) {
            let sigma = leading_symbol(&g.operator()).map_err(|e| e.to_string())?;
            let got = pushforward_symbol(&sigma, v).map_err(|e| e.to_string())?;
            ensure(got == *want, || format!("{g:?} on {v:?} pushes forward to {got:?}"))?;
        }
    }
    Ok(6)
}

// ---- cones -----------------------------------------------------------------

fn lv(a: i64, b: i64) -> LatticeVector2 {
    LatticeVector2::new(a, b)
}

fn lattice_box(r: i64) -> impl Iterator<Item = LatticeVector2> {
    (-r..=r).flat_map(move |a| (-r..=r).map(move |b| lv(a, b)))
}

fn cone_cut_soundness(ctx: &mut Ctx) -> Result<usize, String> {
    for _ in 0..200 {
        let c = sample::cone(&mut ctx.rng, 20);
        let h = HalfspaceZ::new(sample::lattice_vector(&mut ctx.rng, 10)).map_err(|e| e.to_string())?;
        match cut_cone(&c, &h) {
            Ok(cut) => {
                let (u, v) = cut.generators();
                ensure(cut.det() != 0 && c.contains(&u) && c.contains(&v), || format!("{cut} not inside {c}"))?;
                for w in lattice_box(10) {
                    let want = c.contains(&w) && h.value(&w) >= 0;
                    ensure(cut.contains(&w) == want, || format!("{w} in cut of {c} by {:?}", h.normal()))?;
                }
            }
            Err(ConeError::EmptyCut | ConeError::DegenerateCut) => {
                let inside: Vec<_> =
                    lattice_box(10).filter(|w| !w.is_zero() && c.contains(w) && h.value(w) >= 0).collect();
                ensure(inside.windows(2).all(|p| p[0].det(&p[1]) == 0), || format!("cut of {c} is not degenerate"))?;
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(200)
}

fn normal_form_invariance(ctx: &mut Ctx) -> Result<usize, String> {
    for _ in 0..500 {
        let c = sample::cone(&mut ctx.rng, 20);
        let m = sample::unimodular(&mut ctx.rng);
        let image = apply_unimodular(&m, &c).map_err(|e| e.to_string())?;
        ensure(normal_form(&image) == normal_form(&c), || format!("{c} and {image}"))?;
    }
    Ok(500)
}

fn lens_identity(_: &mut Ctx) -> Result<usize, String> {
    let m = Unimodular2::new([[1, 1], [1, 2]]).expect("det 1");
    let mut cases = 0;
    for p in 1..=12i64 {
        for q in 1..=p {
            let Ok(lens) = lens_cone(p, q) else { continue };
            let lambda = lv(p + 2 * q, -p - q);
            ensure(lv(1, 1).dot(&lambda) == q as i128, || "⟨(1,1), λ⟩ ≠ q".into())?;
            ensure(lv(-1, 1).dot(&lambda) < 0, || "(−1,1) is not removed".into())?;
            let image = apply_unimodular(&m, &lens).map_err(|e| e.to_string())?;
            let h = HalfspaceZ::new(lambda).map_err(|e| e.to_string())?;
            let cut = cut_cone(&sphere_cone(), &h).map_err(|e| e.to_string())?;
            ensure(image == cut, || format!("p = {p}, q = {q}: {image} vs {cut}"))?;
            cases += 1;
        }
    }
    Ok(cases)
}

fn sphere_normal_form(_: &mut Ctx) -> Result<usize, String> {
    let nf = normal_form(&sphere_cone());
    ensure(nf == ConeNormalForm { p: 2, q: 1 }, || format!("{nf:?}"))?;
    // (0 1; 1 1) sends (−1,1) to (1,0) and (1,1) to (1,2).
    let m = Unimodular2::new([[0, 1], [1, 1]]).expect("det −1");
    let image = apply_unimodular(&m, &sphere_cone()).map_err(|e| e.to_string())?;
    let rep = Cone2::new(lv(1, 0), lv(1, 2)).map_err(|e| e.to_string())?;
    ensure(image == rep, || format!("{image}"))?;
    Ok(1)
}

fn cut_plan_round_trip(ctx: &mut Ctx) -> Result<usize, String> {
    for _ in 0..500 {
        let c = sample::cone(&mut ctx.rng, 20);
        ensure(verify_plan(&c, &cut_plan(&c)), || format!("plan of {c}"))?;
    }
    Ok(500)
}

fn halfspace_cones(ctx: &mut Ctx) -> Result<usize, String> {
    for _ in 0..100 {
        let c = sample::cone(&mut ctx.rng, 20);
        let plan = cut_plan(&c);
        let n = |i: usize| vec![plan[i].normal().a, plan[i].normal().b];
        let first = ConeN::new(2, vec![n(0)]).map_err(|e| e.to_string())?;
        let both = cut_cone_n(&first, &n(1)).map_err(|e| e.to_string())?;
        ensure(both.to_cone2().ok() == Some(c), || format!("half-space path for {c}"))?;
        ensure(cut_cone_n(&both, &n(0)).ok() == Some(both.clone()), || "duplicate normal kept".into())?;
    }
    Ok(100)
}

// ---- spectra ---------------------------------------------------------------

fn spectrum_oracle(_: &mut Ctx) -> Result<usize, String> {
    let a = &Generator::Raise.operator() + &Generator::Lower.operator();
    let n = 64;
    let got = projected_spectrum(&a, n, Parity::Full).map_err(|e| e.to_string())?.eigenvalues;
    let dense: Vec<Vec<Complex64>> =
        (0..=n as i64).map(|r| (0..=n as i64).map(|c| a.entry(r, c).to_complex64()).collect()).collect();
    let mut want = jacobi_eigenvalues(dense, 1e-13);
    want.sort_by(f64::total_cmp);
    let err = got.iter().zip(&want).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    ensure(got.len() == want.len() && err < 1e-8, || format!("max deviation {err:e}"))?;
    Ok(1)
}

fn weyl_law(_: &mut Ctx) -> Result<usize, String> {
    let d = Generator::D.operator();
    let ops = [
        ("D", d.clone()),
        ("2D", d.scale(&GaussianRational::from_integer(2))),
        ("Raise∘Lower", Generator::Raise.operator().compose(&Generator::Lower.operator())),
    ];
    for (name, a) in &ops {
        let grid = weyl_default_grid(a, 4096, 256).map_err(|e| e.to_string())?;
        let report = weyl_compare(a, 4096, &grid).map_err(|e| e.to_string())?;
        ensure(report.max_residual <= 1.0, || format!("{name}: max residual {}", report.max_residual))?;
    }
    Ok(ops.len())
}

fn residue_calibration(_: &mut Ctx) -> Result<usize, String> {
    let inv_s = LaurentSymbol::monomial(0, GaussianRational::one(), -1);
    let r = residue_contour(&inv_s).map_err(|e| e.to_string())?;
    ensure(r.coefficient == GaussianRational::one(), || format!("coefficient {}", r.coefficient))?;
    let harmonic: Vec<f64> = (1..=100_000).map(|n| 1.0 / n as f64).collect();
    let mut cs = Vec::new();
    for lo in [1000, 10_000] {
        let report = residue_log_fit(&harmonic, FitRange { lo, hi: 100_000 }).map_err(|e| e.to_string())?;
        cs.push(report.fitted["c"]);
    }
    ensure(cs.iter().all(|c| (c - 1.0).abs() <= 0.02), || format!("fitted c = {cs:?}"))?;
    Ok(3)
}

fn parametrix(_: &mut Ctx) -> Result<usize, String> {
    let a = &Generator::D.operator() + &CanonicalOperator::scalar(GaussianRational::from_integer(3));
    let c = parametrix_check(&a, 1024).map_err(|e| e.to_string())?;
    ensure(c.identity_residual <= 1e-10, || format!("‖AB − I‖∞ = {:e}", c.identity_residual))?;
    ensure(c.diagonal_error <= 1e-12, || format!("diagonal error {:e}", c.diagonal_error))?;
    Ok(1)
}
