//! Seeded random generators for the property suites and the selftest.
//!
//! Uniformly random operators almost never commute with a projector, so
//! [`near_commutant_operator`] mixes in terms built on the ladder products
//! and terms that miss exactly one required root.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{GaussianRational, LatticeVector2, Polynomial, Rational, Unimodular2};
use crate::cones::Cone2;
use crate::cut::Jet;
use crate::operator::{ladder_product, required_vanishing, CanonicalOperator, Parity, VanishingRange};
use crate::symbol::{build_commuting_from_symbol, LaurentSymbol, SymbolVariant};

/// Integer in `[-bound, bound]`.
pub fn int<R: Rng>(rng: &mut R, bound: i64) -> i64 {
    rng.gen_range(-bound..=bound)
}

/// Gaussian integer with parts in `[-bound, bound]`; imaginary part nonzero
/// about a third of the time.
pub fn gaussian<R: Rng>(rng: &mut R, bound: i64) -> GaussianRational {
    let re = int(rng, bound);
    let im = if rng.gen_ratio(1, 3) { int(rng, bound) } else { 0 };
    GaussianRational::from_parts(re, im)
}

/// Gaussian rational with small denominators.
pub fn gaussian_rational<R: Rng>(rng: &mut R, bound: i64) -> GaussianRational {
    let q = |rng: &mut R| Rational::new(int(rng, bound), rng.gen_range(1..=4)).expect("nonzero denominator");
    let re = q(rng);
    let im = if rng.gen_ratio(1, 3) { q(rng) } else { Rational::zero() };
    GaussianRational::new(re, im)
}

/// Polynomial of degree at most `max_deg`.
pub fn polynomial<R: Rng>(rng: &mut R, max_deg: usize, bound: i64) -> Polynomial {
    let d = rng.gen_range(0..=max_deg);
    Polynomial::new((0..=d).map(|_| gaussian(rng, bound)).collect())
}

/// Nonzero polynomial of degree at most `max_deg`.
pub fn nonzero_polynomial<R: Rng>(rng: &mut R, max_deg: usize, bound: i64) -> Polynomial {
    loop {
        let p = polynomial(rng, max_deg, bound.max(1));
        if !p.is_zero() {
            return p;
        }
    }
}

/// Sum of up to four terms with `|k| ≤ max_shift` and uniformly random
/// coefficients.
pub fn operator<R: Rng>(rng: &mut R, max_shift: i64, max_deg: usize, bound: i64) -> CanonicalOperator {
    let terms = rng.gen_range(1..=4);
    CanonicalOperator::new((0..terms).map(|_| (int(rng, max_shift), polynomial(rng, max_deg, bound))))
}

/// Random operator in which each term either satisfies the vanishing
/// condition, misses one required root, or is unconstrained. Degrees stay
/// at most `max_deg`.
pub fn near_commutant_operator<R: Rng>(
    rng: &mut R,
    parity: Parity,
    max_shift: i64,
    max_deg: usize,
    bound: i64,
) -> CanonicalOperator {
    let terms = rng.gen_range(1..=4);
    let mut out = CanonicalOperator::zero();
    for _ in 0..terms {
        let k = int(rng, max_shift);
        let q = match required_vanishing(k, parity, VanishingRange::Exact) {
            None => {
                if rng.gen_ratio(1, 3) {
                    nonzero_polynomial(rng, max_deg, bound)
                } else {
                    continue;
                }
            }
            Some(v) => {
                let mut roots: Vec<i64> = v.modes().collect();
                match rng.gen_range(0..4) {
                    0 => polynomial(rng, max_deg, bound),
                    1 if !roots.is_empty() => {
                        roots.remove(rng.gen_range(0..roots.len()));
                        roots.shuffle(rng);
                        let base = Polynomial::from_roots(roots.iter().copied());
                        let free = max_deg - base.degree().unwrap_or(0);
                        &base * &nonzero_polynomial(rng, free, bound)
                    }
                    _ => {
                        let base = Polynomial::from_roots(roots.iter().copied());
                        let free = max_deg.saturating_sub(base.degree().unwrap_or(0));
                        &base * &nonzero_polynomial(rng, free, bound)
                    }
                }
            }
        };
        out = &out + &CanonicalOperator::term(k, q);
    }
    out
}

/// Modes allowed at degree `m` on the given cut space, limited to
/// `|k| ≤ max_shift`.
pub fn admissible_modes(variant: SymbolVariant, m: i64, max_shift: i64) -> Vec<i64> {
    (-max_shift..=max_shift)
        .filter(|&k| match variant {
            SymbolVariant::MPlusPlus => k.abs() <= m,
            SymbolVariant::MPlusEven => k % 2 == 0 && k.abs() / 2 <= m,
        })
        .collect()
}

/// Admissible homogeneous symbol of degree exactly `m` (nonzero).
pub fn admissible_symbol<R: Rng>(
    rng: &mut R,
    variant: SymbolVariant,
    m: i64,
    max_shift: i64,
    bound: i64,
) -> LaurentSymbol {
    let modes = admissible_modes(variant, m, max_shift);
    loop {
        let count = rng.gen_range(1..=modes.len().min(3));
        let chosen: Vec<i64> = modes.choose_multiple(rng, count).copied().collect();
        let sigma = LaurentSymbol::homogeneous(m, chosen.into_iter().map(|k| (k, gaussian(rng, bound))));
        if !sigma.is_zero() {
            return sigma;
        }
    }
}

/// Commuting operator of order exactly `order`, built as a sum of lifts of
/// admissible symbols of every order `≤ order`.
pub fn commuting_operator<R: Rng>(
    rng: &mut R,
    parity: Parity,
    order: i64,
    max_shift: i64,
    bound: i64,
) -> CanonicalOperator {
    let variant = SymbolVariant::for_parity(parity);
    let mut out = CanonicalOperator::zero();
    for d in 0..=order {
        if d < order && rng.gen_ratio(1, 3) {
            continue;
        }
        let sigma = admissible_symbol(rng, variant, d, max_shift, bound);
        let lift = build_commuting_from_symbol(&sigma, parity).expect("admissible by construction");
        out = &out + &lift;
    }
    out
}

/// Term `e^{ikθ}·P_k(D)·r(D)` for a random `r`; commutes by construction.
pub fn ladder_term<R: Rng>(rng: &mut R, parity: Parity, k: i64, max_deg: usize, bound: i64) -> CanonicalOperator {
    let p = ladder_product(k, parity).expect("shift compatible with parity");
    CanonicalOperator::term(k, &p * &nonzero_polynomial(rng, max_deg, bound))
}

/// Jet up to total degree `dmax`, possibly with odd terms.
pub fn jet<R: Rng>(rng: &mut R, dmax: u32, bound: i64) -> Jet {
    let terms = rng.gen_range(0..=5);
    let coeffs: Vec<_> = (0..terms)
        .map(|_| {
            let total = rng.gen_range(0..=dmax);
            let k = rng.gen_range(0..=total);
            ((k, total - k), gaussian(rng, bound))
        })
        .collect();
    Jet::new(dmax, coeffs).expect("degrees within dmax")
}

/// Jet with only even total degrees.
pub fn even_jet<R: Rng>(rng: &mut R, dmax: u32, bound: i64) -> Jet {
    let terms = rng.gen_range(0..=5);
    let coeffs: Vec<_> = (0..terms)
        .map(|_| {
            let total = 2 * rng.gen_range(0..=dmax / 2);
            let k = rng.gen_range(0..=total);
            ((k, total - k), gaussian(rng, bound))
        })
        .collect();
    Jet::new(dmax, coeffs).expect("degrees within dmax")
}

pub fn lattice_vector<R: Rng>(rng: &mut R, bound: i64) -> LatticeVector2 {
    loop {
        let v = LatticeVector2::new(int(rng, bound), int(rng, bound));
        if !v.is_zero() {
            return v;
        }
    }
}

/// Strictly convex cone with generators drawn from `[-bound, bound]²`.
pub fn cone<R: Rng>(rng: &mut R, bound: i64) -> Cone2 {
    loop {
        if let Ok(c) = Cone2::new(lattice_vector(rng, bound), lattice_vector(rng, bound)) {
            return c;
        }
    }
}

/// Product of a few elementary unimodular matrices.
pub fn unimodular<R: Rng>(rng: &mut R) -> Unimodular2 {
    let gens =
        [[[1, 1], [0, 1]], [[1, -1], [0, 1]], [[1, 0], [1, 1]], [[1, 0], [-1, 1]], [[0, 1], [1, 0]], [[-1, 0], [0, 1]]];
    let mut m = Unimodular2::IDENTITY;
    for _ in 0..rng.gen_range(1..=6) {
        let g = Unimodular2::new(*gens.choose(rng).expect("nonempty")).expect("elementary");
        m = m.compose(&g).expect("small entries");
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::szego_commutes;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn near_commutant_hits_both_outcomes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for parity in [Parity::Full, Parity::Even] {
            let results: Vec<bool> =
                (0..200).map(|_| szego_commutes(&near_commutant_operator(&mut rng, parity, 4, 6, 9), parity)).collect();
            assert!(results.iter().any(|&b| b) && results.iter().any(|&b| !b), "{parity}");
        }
    }

    #[test]
    fn commuting_operators_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for parity in [Parity::Full, Parity::Even] {
            for _ in 0..50 {
                let order = rng.gen_range(0..=5);
                let a = commuting_operator(&mut rng, parity, order, 4, 9);
                assert!(szego_commutes(&a, parity));
                assert_eq!(a.order(), Some(order as usize));
            }
        }
    }
}
