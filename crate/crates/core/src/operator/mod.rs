//! Operators on Fourier modes of the circle in canonical normal form.
//!
//! A [`CanonicalOperator`] is a finite sum `Σ_k e^{ikθ} q_k(D)` where
//! `D = (1/i) d/dθ` multiplies the mode `e^{inθ}` by `n`. It sends
//! `e^{inθ}` to `Σ_k q_k(n) e^{i(n+k)θ}`. Everything in this module is exact.

mod realize;
mod spectral;
mod szego;

pub use realize::{realize_exact, realize_matrix, ExactWindow, TruncatedMatrix};
pub use spectral::{
    parametrix_check, projected_spectrum, residue_contour, residue_log_fit, weyl_compare, weyl_default_grid,
    weyl_lambda_cap, ContourResidue, FitRange, ParametrixCheck, Spectrum,
};
pub use szego::{
    commutant_factorize, commutator_entries, commutator_entries_in_window, ladder_power, ladder_product,
    recompose_factors, required_vanishing, szego_commutes, szego_commutes_with, verify_pk_identity, CommutatorEntries,
    CommutatorEntry, Vanishing, VanishingRange,
};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{GaussianRational, Polynomial};

/// Largest shift accepted from serialized input.
pub const MAX_INPUT_SHIFT: i64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperatorError {
    #[error("operator does not commute with the {0} projector")]
    NotInCommutant(Parity),
    #[error("window {window} is smaller than the operator bandwidth {bandwidth}")]
    WindowTooSmall { window: i64, bandwidth: i64 },
    #[error("compression is not self-adjoint")]
    NotSelfAdjoint,
    #[error("symbol is not homogeneous of degree -1 (found {found:?})")]
    WrongDegree { found: Option<i64> },
    #[error("fit range has {points} sample points; at least 8 are required")]
    FitRangeTooSmall { points: usize },
    #[error("leading symbol is not positive and increasing on s > 0: {0}")]
    NotElliptic(String),
    #[error("operator is zero")]
    ZeroOperator,
    #[error("matrix is singular at pivot {0}")]
    Singular(usize),
    #[error("invalid operator: {0}")]
    Invalid(String),
}

/// Which Szegő projector is in play: onto the modes `n ≥ 0`, or onto the even
/// modes `2n ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Full,
    Even,
}

impl Parity {
    /// Is mode `n` in the range of the projector?
    pub fn retains(self, n: i64) -> bool {
        match self {
            Parity::Full => n >= 0,
            Parity::Even => n >= 0 && n % 2 == 0,
        }
    }

    /// Spacing between consecutive retained modes.
    pub fn step(self) -> i64 {
        match self {
            Parity::Full => 1,
            Parity::Even => 2,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Full => "full",
            Parity::Even => "even",
        })
    }
}

/// The ladder operators generating the commutants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    /// `(1/i) d/dθ`: `{0: n}`.
    D,
    /// `(1/i) d/dθ ∘ e^{iθ}`: `{1: n+1}`.
    Raise,
    /// `e^{-iθ} ∘ (1/i) d/dθ`: `{-1: n}`.
    Lower,
    /// `(1/i) d/dθ ∘ e^{2iθ}`: `{2: n+2}`.
    RaiseEven,
    /// `e^{-2iθ} ∘ (1/i) d/dθ`: `{-2: n}`.
    LowerEven,
    /// `(1/i) d/dθ ∘ e^{-2iθ}`: `{-2: n-2}`. Does not commute with the even
    /// projector: it sends mode 0 to `-2·e^{-2iθ}`.
    LowerEvenDerivativeFirst,
}

impl Generator {
    pub const ALL: [Generator; 6] = [
        Generator::D,
        Generator::Raise,
        Generator::Lower,
        Generator::RaiseEven,
        Generator::LowerEven,
        Generator::LowerEvenDerivativeFirst,
    ];

    pub fn operator(self) -> CanonicalOperator {
        let (k, poly) = match self {
            Generator::D => (0, [0, 1]),
            Generator::Raise => (1, [1, 1]),
            Generator::Lower => (-1, [0, 1]),
            Generator::RaiseEven => (2, [2, 1]),
            Generator::LowerEven => (-2, [0, 1]),
            Generator::LowerEvenDerivativeFirst => (-2, [-2, 1]),
        };
        CanonicalOperator::term(k, Polynomial::from_integers(&poly))
    }
}

pub fn make_generator(g: Generator) -> CanonicalOperator {
    g.operator()
}

/// Finite sum of shifts composed with polynomials in the mode-number operator.
/// Zero polynomials are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct CanonicalOperator {
    terms: BTreeMap<i64, Polynomial>,
}

impl CanonicalOperator {
    pub fn new<I: IntoIterator<Item = (i64, Polynomial)>>(terms: I) -> Self {
        let mut out = CanonicalOperator::zero();
        for (k, q) in terms {
            out.add_term(k, &q);
        }
        out
    }

    pub fn zero() -> Self {
        CanonicalOperator { terms: BTreeMap::new() }
    }

    pub fn identity() -> Self {
        CanonicalOperator::term(0, Polynomial::one())
    }

    /// The single term `e^{ikθ} q(D)`.
    pub fn term(k: i64, q: Polynomial) -> Self {
        CanonicalOperator::new([(k, q)])
    }

    /// Multiplication by `e^{ikθ}`.
    pub fn shift(k: i64) -> Self {
        CanonicalOperator::term(k, Polynomial::one())
    }

    /// The diagonal operator `q(D)`.
    pub fn diagonal(q: Polynomial) -> Self {
        CanonicalOperator::term(0, q)
    }

    pub fn scalar(c: GaussianRational) -> Self {
        CanonicalOperator::diagonal(Polynomial::constant(c))
    }

    fn add_term(&mut self, k: i64, q: &Polynomial) {
        if q.is_zero() {
            return;
        }
        let sum = match self.terms.get(&k) {
            Some(p) => p + q,
            None => q.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Polynomial)> + '_ {
        self.terms.iter().map(|(&k, q)| (k, q))
    }

    pub fn get(&self, k: i64) -> Option<&Polynomial> {
        self.terms.get(&k)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `max |k|`; zero for the zero operator.
    pub fn bandwidth(&self) -> i64 {
        self.terms.keys().map(|k| k.abs()).max().unwrap_or(0)
    }

    /// Differential order: the largest degree among the `q_k`.
    pub fn order(&self) -> Option<usize> {
        self.terms.values().filter_map(Polynomial::degree).max()
    }

    /// Image of the mode `e^{inθ}` as `(target mode, coefficient)` pairs.
    pub fn apply_to_mode(&self, n: i64) -> Vec<(i64, GaussianRational)> {
        self.terms.iter().map(|(&k, q)| (n + k, q.eval_int(n))).filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Matrix entry `⟨e_row, A e_col⟩ = q_{row-col}(col)`.
    pub fn entry(&self, row: i64, col: i64) -> GaussianRational {
        self.terms.get(&(row - col)).map(|q| q.eval_int(col)).unwrap_or_default()
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        CanonicalOperator::new(self.terms.iter().map(|(&k, q)| (k, q.scale(c))))
    }

    /// Operator product `self ∘ rhs`, using
    /// `(e^{ikθ} p(D)) ∘ (e^{ilθ} q(D)) = e^{i(k+l)θ} p(D + l) q(D)`.
    pub fn compose(&self, rhs: &CanonicalOperator) -> CanonicalOperator {
        let mut out = CanonicalOperator::zero();
        for (&k, p) in &self.terms {
            for (&l, q) in &rhs.terms {
                out.add_term(k + l, &(&p.shift_int(l) * q));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> CanonicalOperator {
        (0..e).fold(CanonicalOperator::identity(), |acc, _| acc.compose(self))
    }

    pub fn commutator(&self, rhs: &CanonicalOperator) -> CanonicalOperator {
        &self.compose(rhs) - &rhs.compose(self)
    }

    /// Formal adjoint in the mode basis: `(k, q) ↦ (-k, q̄(x - k))`.
    pub fn adjoint(&self) -> CanonicalOperator {
        CanonicalOperator::new(self.terms.iter().map(|(&k, q)| (-k, q.conj().shift_int(-k))))
    }

    /// Restriction to the even shifts.
    pub fn even_part(&self) -> CanonicalOperator {
        CanonicalOperator::new(self.terms.iter().filter(|(k, _)| *k % 2 == 0).map(|(&k, q)| (k, q.clone())))
    }
}

impl fmt::Display for CanonicalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (k, q)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "e^{{{k}iθ}}[{q}](D)")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CanonicalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalOperator({self})")
    }
}

impl Add<&CanonicalOperator> for &CanonicalOperator {
    type Output = CanonicalOperator;
    fn add(self, rhs: &CanonicalOperator) -> CanonicalOperator {
        let mut out = self.clone();
        for (&k, q) in &rhs.terms {
            out.add_term(k, q);
        }
        out
    }
}

impl Sub<&CanonicalOperator> for &CanonicalOperator {
    type Output = CanonicalOperator;
    fn sub(self, rhs: &CanonicalOperator) -> CanonicalOperator {
        self + &(-rhs)
    }
}

impl Neg for &CanonicalOperator {
    type Output = CanonicalOperator;
    fn neg(self) -> CanonicalOperator {
        CanonicalOperator { terms: self.terms.iter().map(|(&k, q)| (k, -q)).collect() }
    }
}

impl Mul<&CanonicalOperator> for &CanonicalOperator {
    type Output = CanonicalOperator;
    fn mul(self, rhs: &CanonicalOperator) -> CanonicalOperator {
        self.compose(rhs)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    k: i64,
    poly: Polynomial,
}

#[derive(Serialize, Deserialize)]
struct OperatorJson {
    terms: Vec<TermJson>,
}

/// `{"terms": [{"k": int, "poly": [gaussian-rational, ...]}]}`.
impl Serialize for CanonicalOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        OperatorJson { terms: self.terms.iter().map(|(&k, q)| TermJson { k, poly: q.clone() }).collect() }
            .serialize(serializer)
    }
}

/// Rejects repeated shifts and shifts beyond [`MAX_INPUT_SHIFT`].
impl<'de> Deserialize<'de> for CanonicalOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = OperatorJson::deserialize(deserializer)?;
        let mut seen = std::collections::BTreeSet::new();
        for t in &raw.terms {
            if t.k.abs() > MAX_INPUT_SHIFT {
                return Err(D::Error::custom(format!("shift {} exceeds the input limit", t.k)));
            }
            if !seen.insert(t.k) {
                return Err(D::Error::custom(format!("shift {} appears twice", t.k)));
            }
        }
        Ok(CanonicalOperator::new(raw.terms.into_iter().map(|t| (t.k, t.poly))))
    }
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
    fn generators_on_modes() {
        assert_eq!(Generator::Raise.operator().apply_to_mode(0), vec![(1, g(1))]);
        assert!(Generator::Lower.operator().apply_to_mode(0).is_empty());
        assert_eq!(Generator::D.operator().apply_to_mode(-3), vec![(-3, g(-3))]);
        assert_eq!(Generator::LowerEvenDerivativeFirst.operator().apply_to_mode(0), vec![(-2, g(-2))]);
    }

    #[test]
    fn canonical_commutation() {
        let d = Generator::D.operator();
        let e = CanonicalOperator::shift(1);
        assert_eq!(d.commutator(&e), e);
    }

    #[test]
    fn compose_examples() {
        let r = Generator::Raise.operator();
        let l = Generator::Lower.operator();
        assert_eq!(r.compose(&r), CanonicalOperator::term(2, Polynomial::rising(2)));
        assert_eq!(r.compose(&l), CanonicalOperator::diagonal(p(&[0, 0, 1])));
        assert_eq!(l.compose(&r), CanonicalOperator::diagonal(p(&[1, 2, 1])));
    }

    #[test]
    fn compose_agrees_with_mode_action() {
        let a = &CanonicalOperator::term(2, p(&[1, -3, 2])) + &CanonicalOperator::term(-1, p(&[0, 5]));
        let b = &CanonicalOperator::term(1, p(&[4, 1])) + &CanonicalOperator::term(0, p(&[-1, 0, 1]));
        let ab = a.compose(&b);
        for n in -10..=10 {
            let mut direct: BTreeMap<i64, GaussianRational> = BTreeMap::new();
            for (m, c) in b.apply_to_mode(n) {
                for (m2, c2) in a.apply_to_mode(m) {
                    *direct.entry(m2).or_default() += &(&c * &c2);
                }
            }
            direct.retain(|_, c| !c.is_zero());
            let got: BTreeMap<_, _> = ab.apply_to_mode(n).into_iter().collect();
            assert_eq!(got, direct, "mode {n}");
        }
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(Generator::Raise.operator().adjoint(), Generator::Lower.operator());
        assert_eq!(Generator::D.operator().adjoint(), Generator::D.operator());
        let id = Generator::D.operator().scale(&GaussianRational::i());
        assert_eq!(id.adjoint(), id.scale(&g(-1)));
    }

    #[test]
    fn json_round_trip_and_rejections() {
        let a = &Generator::Raise.operator() + &Generator::D.operator();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<CanonicalOperator>(&s).unwrap(), a);
        let dup = r#"{"terms":[{"k":1,"poly":["1/1"]},{"k":1,"poly":["2/1"]}]}"#;
        assert!(serde_json::from_str::<CanonicalOperator>(dup).is_err());
        let far = r#"{"terms":[{"k":100000000,"poly":["1/1"]}]}"#;
        assert!(serde_json::from_str::<CanonicalOperator>(far).is_err());
        let zero = r#"{"terms":[{"k":3,"poly":["0/1"]}]}"#;
        assert!(serde_json::from_str::<CanonicalOperator>(zero).unwrap().is_zero());
    }
}
