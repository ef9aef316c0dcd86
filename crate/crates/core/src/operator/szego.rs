//! Commutation with the Szegő projectors and the ladder factorization of the
//! commutant.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CanonicalOperator, Generator, OperatorError, Parity};
use crate::algebra::{GaussianRational, Polynomial};

/// Which modes a shift-`k` coefficient must vanish on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VanishingRange {
    /// `{-k, …, -1}` for `k > 0` and `{0, …, |k|-1}` for `k < 0`: the set on
    /// which the projector and the shift disagree.
    #[default]
    Exact,
    /// `{-|k|, …, -1}` for every `k`. Wrong for `k < 0`; kept as a diagnostic.
    UniformNegative,
}

/// Arithmetic progression of modes `start, start + step, …` (`count` terms).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Vanishing {
    pub start: i64,
    pub count: i64,
    pub step: i64,
}

impl Vanishing {
    pub fn modes(&self) -> impl Iterator<Item = i64> {
        let Vanishing { start, count, step } = *self;
        (0..count).map(move |i| start + i * step)
    }
}

/// Modes where `q_k` must vanish for the shift-`k` term to commute with the
/// projector. `None` means `q_k` must vanish identically (odd shifts against
/// the even projector).
pub fn required_vanishing(k: i64, parity: Parity, range: VanishingRange) -> Option<Vanishing> {
    let step = parity.step();
    if k % step != 0 {
        return None;
    }
    let count = k.abs() / step;
    let start = match (range, k > 0) {
        (VanishingRange::Exact, false) => 0,
        _ => -k.abs(),
    };
    Some(Vanishing { start, count, step })
}

/// Does `A` commute with the projector of the given parity?
pub fn szego_commutes(a: &CanonicalOperator, parity: Parity) -> bool {
    szego_commutes_with(a, parity, VanishingRange::Exact)
}

pub fn szego_commutes_with(a: &CanonicalOperator, parity: Parity, range: VanishingRange) -> bool {
    a.terms().all(|(k, q)| {
        let Some(v) = required_vanishing(k, parity, range) else {
            return false;
        };
        // A nonzero polynomial has at most `deg` roots.
        let deg = q.degree().map_or(0, |d| d as i64);
        v.count <= deg && v.modes().all(|n| q.eval_int(n).is_zero())
    })
}

/// One nonzero matrix entry `⟨e_row, [Π, A] e_col⟩`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CommutatorEntry {
    pub row: i64,
    pub col: i64,
    pub value: GaussianRational,
}

/// Nonzero entries of `[Π, A]`.
///
/// Against the full projector the set is always finite. Against the even
/// projector an odd shift contributes infinitely many entries; such shifts
/// are listed in `unbounded_shifts` and can be expanded on a finite window
/// with [`commutator_entries_in_window`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutatorEntries {
    pub entries: Vec<CommutatorEntry>,
    pub unbounded_shifts: Vec<i64>,
}

impl CommutatorEntries {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty() && self.unbounded_shifts.is_empty()
    }
}

/// `⟨e_{n+k}, [Π, e^{ikθ} q(D)] e_n⟩ = q(n)·(χ(n+k) − χ(n))`.
fn entry_value(q: &Polynomial, k: i64, n: i64, parity: Parity) -> GaussianRational {
    let jump = parity.retains(n + k) as i64 - parity.retains(n) as i64;
    if jump == 0 {
        return GaussianRational::zero();
    }
    q.eval_int(n).scale(&jump.into())
}

pub fn commutator_entries(a: &CanonicalOperator, parity: Parity) -> CommutatorEntries {
    let mut out = CommutatorEntries::default();
    for (k, q) in a.terms() {
        let Some(v) = required_vanishing(k, parity, VanishingRange::Exact) else {
            out.unbounded_shifts.push(k);
            continue;
        };
        for n in v.modes() {
            let value = entry_value(q, k, n, parity);
            if !value.is_zero() {
                out.entries.push(CommutatorEntry { row: n + k, col: n, value });
            }
        }
    }
    out.entries.sort();
    out
}

/// Every nonzero entry of `[Π, A]` with row and column in `[lo, hi]`.
pub fn commutator_entries_in_window(a: &CanonicalOperator, parity: Parity, lo: i64, hi: i64) -> Vec<CommutatorEntry> {
    let mut out = Vec::new();
    for (k, q) in a.terms() {
        for n in lo.max(lo - k)..=hi.min(hi - k) {
            let value = entry_value(q, k, n, parity);
            if !value.is_zero() {
                out.push(CommutatorEntry { row: n + k, col: n, value });
            }
        }
    }
    out.sort();
    out
}

/// The polynomial `P_k` with `ladder_power(k) = e^{ikθ} P_k(D)`:
/// rising/falling products for the full projector, their step-2 versions
/// for the even one. `None` for odd `k` with the even projector.
pub fn ladder_product(k: i64, parity: Parity) -> Option<Polynomial> {
    let v = required_vanishing(k, parity, VanishingRange::Exact)?;
    Some(Polynomial::from_roots(v.modes()))
}

/// `Raise^k`, `Lower^{|k|}` or their even counterparts.
pub fn ladder_power(k: i64, parity: Parity) -> Option<CanonicalOperator> {
    let (up, down) = match parity {
        Parity::Full => (Generator::Raise, Generator::Lower),
        Parity::Even => (Generator::RaiseEven, Generator::LowerEven),
    };
    if k % parity.step() != 0 {
        return None;
    }
    let e = u32::try_from(k.abs() / parity.step()).ok()?;
    let g = if k >= 0 { up } else { down };
    Some(g.operator().pow(e))
}

/// Writes each `q_k` as `P_k · r_k` where `P_k` is the ladder product, so
/// that `A = Σ ladder_power(k) ∘ r_k(D)`.
pub fn commutant_factorize(a: &CanonicalOperator, parity: Parity) -> Result<BTreeMap<i64, Polynomial>, OperatorError> {
    if !szego_commutes(a, parity) {
        return Err(OperatorError::NotInCommutant(parity));
    }
    Ok(a.terms()
        .map(|(k, q)| {
            let p = ladder_product(k, parity).expect("commuting operators have no odd even-parity terms");
            let r = q.divide_exact(&p).expect("ladder product divides every coefficient of a commuting operator");
            (k, r)
        })
        .collect())
}

/// Inverse of [`commutant_factorize`], built by operator composition.
pub fn recompose_factors(factors: &BTreeMap<i64, Polynomial>, parity: Parity) -> Option<CanonicalOperator> {
    let mut out = CanonicalOperator::zero();
    for (&k, r) in factors {
        let term = ladder_power(k, parity)?.compose(&CanonicalOperator::diagonal(r.clone()));
        out = &out + &term;
    }
    Some(out)
}

/// `Raise^k = e^{ikθ} (D+1)(D+2)⋯(D+k)`.
pub fn verify_pk_identity(k: u32) -> bool {
    Generator::Raise.operator().pow(k) == CanonicalOperator::term(k as i64, Polynomial::rising(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_integers(c)
    }

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_integer(n)
    }

    #[test]
    fn generators_commute() {
        for gen in [Generator::D, Generator::Raise, Generator::Lower] {
            assert!(szego_commutes(&gen.operator(), Parity::Full), "{gen:?}");
        }
        for gen in [Generator::D, Generator::RaiseEven, Generator::LowerEven] {
            assert!(szego_commutes(&gen.operator(), Parity::Even), "{gen:?}");
        }
        assert!(!szego_commutes(&Generator::LowerEvenDerivativeFirst.operator(), Parity::Even));
    }

    #[test]
    fn pure_shift_does_not_commute() {
        let e = CanonicalOperator::shift(1);
        assert!(!szego_commutes(&e, Parity::Full));
        let ents = commutator_entries(&e, Parity::Full);
        assert_eq!(ents.entries, vec![CommutatorEntry { row: 0, col: -1, value: g(1) }]);
        let ents = commutator_entries(&CanonicalOperator::shift(-1), Parity::Full);
        assert_eq!(ents.entries, vec![CommutatorEntry { row: -1, col: 0, value: g(-1) }]);
        assert!(commutator_entries(&Generator::Raise.operator(), Parity::Full).is_empty());
    }

    #[test]
    fn even_lowering_with_roots() {
        let a = CanonicalOperator::term(-2, p(&[0, -2, 1]));
        assert!(szego_commutes(&a, Parity::Even));
        let w = commutator_entries(&Generator::LowerEvenDerivativeFirst.operator(), Parity::Even);
        assert_eq!(w.entries, vec![CommutatorEntry { row: -2, col: 0, value: g(2) }]);
    }

    #[test]
    fn uniform_range_misjudges_lowering() {
        let lower = Generator::Lower.operator();
        assert!(szego_commutes_with(&lower, Parity::Full, VanishingRange::Exact));
        assert!(!szego_commutes_with(&lower, Parity::Full, VanishingRange::UniformNegative));
    }

    #[test]
    fn odd_shift_even_parity_is_unbounded() {
        let a = Generator::Raise.operator();
        let e = commutator_entries(&a, Parity::Even);
        assert_eq!(e.unbounded_shifts, vec![1]);
        assert!(!commutator_entries_in_window(&a, Parity::Even, -4, 4).is_empty());
    }

    #[test]
    fn factorize_examples() {
        let r2 = Generator::Raise.operator().pow(2);
        assert_eq!(commutant_factorize(&r2, Parity::Full).unwrap()[&2], Polynomial::one());
        let a = CanonicalOperator::term(1, &p(&[1, 1]) * &p(&[-5, 1]));
        assert_eq!(commutant_factorize(&a, Parity::Full).unwrap()[&1], p(&[-5, 1]));
        let d = Generator::D.operator();
        assert_eq!(commutant_factorize(&d, Parity::Full).unwrap()[&0], p(&[0, 1]));
        assert_eq!(
            commutant_factorize(&CanonicalOperator::shift(1), Parity::Full),
            Err(OperatorError::NotInCommutant(Parity::Full))
        );
    }

    #[test]
    fn factorize_round_trip_even() {
        let a = &CanonicalOperator::term(4, &Polynomial::from_roots([-2, -4]) * &p(&[3, 0, 1]))
            + &CanonicalOperator::term(-2, p(&[0, 7]));
        let f = commutant_factorize(&a, Parity::Even).unwrap();
        assert_eq!(recompose_factors(&f, Parity::Even).unwrap(), a);
    }

    #[test]
    fn pk_identity() {
        for k in 1..=10 {
            assert!(verify_pk_identity(k), "k = {k}");
        }
    }
}
