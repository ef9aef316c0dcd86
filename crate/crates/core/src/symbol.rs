//! Leading symbols of commutant operators: functions `Σ_k e^{ikθ} σ_k(s)`
//! with `σ_k` a Laurent polynomial in `s`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{GaussianRational, Polynomial};
use crate::operator::{szego_commutes, CanonicalOperator, OperatorError, Parity};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymbolError {
    #[error("operator is zero")]
    ZeroOperator,
    #[error("symbol is not homogeneous")]
    NotHomogeneous,
    #[error("symbol is not admissible for {0:?}")]
    NotAdmissible(SymbolVariant),
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// The two cut-space models: the even cut `M₊` and the orbifold cut `M₊₊`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymbolVariant {
    MPlusEven,
    MPlusPlus,
}

impl SymbolVariant {
    /// The projector whose commutant has symbols on this cut space.
    pub fn parity(self) -> Parity {
        match self {
            SymbolVariant::MPlusEven => Parity::Even,
            SymbolVariant::MPlusPlus => Parity::Full,
        }
    }

    pub fn for_parity(parity: Parity) -> Self {
        match parity {
            Parity::Even => SymbolVariant::MPlusEven,
            Parity::Full => SymbolVariant::MPlusPlus,
        }
    }
}

/// `Σ_k e^{ikθ} s^{valuation} p_k(s)`.
///
/// The valuation is `0` for polynomial symbols and negative otherwise, in
/// which case it is as large as possible (some `p_k` has a nonzero constant
/// term). Zero polynomials are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentSymbol {
    modes: BTreeMap<i64, Polynomial>,
    valuation: i64,
}

fn lowest_power(p: &Polynomial) -> Option<usize> {
    p.coeffs().iter().position(|c| !c.is_zero())
}

fn drop_low(p: &Polynomial, t: usize) -> Polynomial {
    Polynomial::new(p.coeffs()[t..].to_vec())
}

fn raise(p: &Polynomial, t: usize) -> Polynomial {
    let mut c = vec![GaussianRational::zero(); t];
    c.extend_from_slice(p.coeffs());
    Polynomial::new(c)
}

impl LaurentSymbol {
    pub fn zero() -> Self {
        LaurentSymbol::default()
    }

    /// Builds `Σ_k e^{ikθ} s^{valuation} p_k(s)` and normalizes.
    pub fn from_parts<I: IntoIterator<Item = (i64, Polynomial)>>(valuation: i64, modes: I) -> Self {
        let mut map: BTreeMap<i64, Polynomial> = BTreeMap::new();
        for (k, p) in modes {
            let sum = match map.remove(&k) {
                Some(q) => &q + &p,
                None => p,
            };
            if !sum.is_zero() {
                map.insert(k, sum);
            }
        }
        let mut out = LaurentSymbol { modes: map, valuation };
        out.normalize();
        out
    }

    /// Polynomial symbol `Σ_k e^{ikθ} p_k(s)`.
    pub fn polynomial<I: IntoIterator<Item = (i64, Polynomial)>>(modes: I) -> Self {
        LaurentSymbol::from_parts(0, modes)
    }

    /// `Σ_k c_k e^{ikθ} s^m`.
    pub fn homogeneous<I: IntoIterator<Item = (i64, GaussianRational)>>(m: i64, coeffs: I) -> Self {
        let lift = m.max(0) as usize;
        LaurentSymbol::from_parts(m.min(0), coeffs.into_iter().map(|(k, c)| (k, Polynomial::monomial(c, lift))))
    }

    /// `c·e^{ikθ}·s^m`.
    pub fn monomial(k: i64, c: GaussianRational, m: i64) -> Self {
        LaurentSymbol::homogeneous(m, [(k, c)])
    }

    fn normalize(&mut self) {
        if self.modes.is_empty() {
            self.valuation = 0;
            return;
        }
        if self.valuation < 0 {
            let t = self.modes.values().filter_map(lowest_power).min().unwrap_or(0) as i64;
            let drop = t.min(-self.valuation);
            if drop > 0 {
                for p in self.modes.values_mut() {
                    *p = drop_low(p, drop as usize);
                }
                self.valuation += drop;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    /// Fourier modes as `(k, p_k)` where `σ_k = s^{valuation}·p_k`.
    pub fn modes(&self) -> impl Iterator<Item = (i64, &Polynomial)> + '_ {
        self.modes.iter().map(|(&k, p)| (k, p))
    }

    /// True when the symbol is a polynomial in `s` (no negative powers).
    pub fn is_polynomial(&self) -> bool {
        self.valuation == 0
    }

    /// The homogeneity degree `m` when every mode is `c_k s^m`; `None` for
    /// zero or inhomogeneous symbols.
    pub fn degree(&self) -> Option<i64> {
        let mut d = None;
        for p in self.modes.values() {
            let (e, _) = p.as_monomial()?;
            if d.is_some_and(|d| d != e) {
                return None;
            }
            d = Some(e);
        }
        d.map(|e| e as i64 + self.valuation)
    }

    /// Coefficients `c_k` of a homogeneous symbol.
    pub fn homogeneous_coefficients(&self) -> Option<BTreeMap<i64, GaussianRational>> {
        self.degree()?;
        Some(self.modes.iter().map(|(&k, p)| (k, p.leading_coefficient().expect("nonzero mode").clone())).collect())
    }

    /// Highest total power of `s` present.
    pub fn top_power(&self) -> Option<i64> {
        self.modes.values().filter_map(Polynomial::degree).max().map(|d| d as i64 + self.valuation)
    }

    /// Top-degree homogeneous part.
    pub fn leading_part(&self) -> LaurentSymbol {
        let Some(top) = self.top_power() else {
            return LaurentSymbol::zero();
        };
        let d = (top - self.valuation) as usize;
        LaurentSymbol::homogeneous(top, self.modes.iter().map(|(&k, p)| (k, p.coeff(d))))
    }

    fn aligned(&self, v: i64) -> impl Iterator<Item = (i64, Polynomial)> + '_ {
        let t = (self.valuation - v) as usize;
        self.modes.iter().map(move |(&k, p)| (k, raise(p, t)))
    }

    pub fn add(&self, rhs: &LaurentSymbol) -> LaurentSymbol {
        let v = self.valuation.min(rhs.valuation);
        LaurentSymbol::from_parts(v, self.aligned(v).chain(rhs.aligned(v)))
    }

    pub fn neg(&self) -> LaurentSymbol {
        LaurentSymbol { modes: self.modes.iter().map(|(&k, p)| (k, -p)).collect(), valuation: self.valuation }
    }

    pub fn sub(&self, rhs: &LaurentSymbol) -> LaurentSymbol {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &GaussianRational) -> LaurentSymbol {
        LaurentSymbol::from_parts(self.valuation, self.modes.iter().map(|(&k, p)| (k, p.scale(c))))
    }

    /// Pointwise product.
    pub fn mul(&self, rhs: &LaurentSymbol) -> LaurentSymbol {
        let mut terms = Vec::new();
        for (&k, p) in &self.modes {
            for (&l, q) in &rhs.modes {
                terms.push((k + l, p * q));
            }
        }
        LaurentSymbol::from_parts(self.valuation + rhs.valuation, terms)
    }

    /// `∂/∂s`.
    pub fn ds(&self) -> LaurentSymbol {
        // d/ds (s^v p) = s^{v-1} (v p + s p').
        let v = self.valuation;
        let vq = GaussianRational::from_integer(v);
        LaurentSymbol::from_parts(
            v - 1,
            self.modes.iter().map(|(&k, p)| (k, &p.scale(&vq) + &raise(&p.derivative(), 1))),
        )
    }

    /// `∂/∂θ`: multiplies mode `k` by `ik`.
    pub fn dtheta(&self) -> LaurentSymbol {
        LaurentSymbol::from_parts(
            self.valuation,
            self.modes.iter().map(|(&k, p)| (k, p.scale(&GaussianRational::from_parts(0, k)))),
        )
    }

    /// Complex conjugate as a function of `(s, θ)`: mode `k` goes to `-k`.
    pub fn conjugate(&self) -> LaurentSymbol {
        LaurentSymbol::from_parts(self.valuation, self.modes.iter().map(|(&k, p)| (-k, p.conj())))
    }

    pub fn eval_f64(&self, s: f64, theta: f64) -> Complex64 {
        let sv = s.powi(self.valuation as i32);
        self.modes.iter().map(|(&k, p)| p.eval_f64(s) * Complex64::from_polar(1.0, k as f64 * theta) * sv).sum()
    }
}

impl fmt::Display for LaurentSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (k, p)) in self.modes.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "e^{{{k}iθ}}[{p}]")?;
        }
        if self.valuation != 0 {
            write!(f, " · s^{}", self.valuation)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentSymbol({self})")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModeJson {
    k: i64,
    poly: Polynomial,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymbolJson {
    degree: Option<i64>,
    modes: Vec<ModeJson>,
}

/// `{"degree": m | null, "modes": [{"k", "poly"}]}`. With a degree `m ≥ 0`
/// each `poly` is the monomial `c·s^m`; with `m < 0` each `poly` is the
/// constant `c` standing for `c·s^m`. With `null`, polys are taken as given.
impl Serialize for LaurentSymbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.valuation < 0 && self.degree().is_none() {
            return Err(serde::ser::Error::custom("inhomogeneous symbol with negative powers has no JSON form"));
        }
        let degree = self.degree();
        let modes = match degree {
            Some(m) if m < 0 => self
                .homogeneous_coefficients()
                .expect("homogeneous")
                .into_iter()
                .map(|(k, c)| ModeJson { k, poly: Polynomial::constant(c) })
                .collect(),
            _ => self.modes.iter().map(|(&k, p)| ModeJson { k, poly: p.clone() }).collect(),
        };
        SymbolJson { degree, modes }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentSymbol {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = SymbolJson::deserialize(deserializer)?;
        let mut seen = std::collections::BTreeSet::new();
        if let Some(k) = raw.modes.iter().map(|m| m.k).find(|&k| !seen.insert(k)) {
            return Err(D::Error::custom(format!("mode {k} appears twice")));
        }
        match raw.degree {
            None => Ok(LaurentSymbol::polynomial(raw.modes.into_iter().map(|m| (m.k, m.poly)))),
            Some(m) => {
                if m.unsigned_abs() > 1 << 16 {
                    return Err(D::Error::custom("degree out of range"));
                }
                let mut coeffs = Vec::new();
                for mode in raw.modes {
                    if mode.poly.is_zero() {
                        continue;
                    }
                    let c = match mode.poly.as_monomial() {
                        Some((d, c)) if m < 0 && d == 0 => c.clone(),
                        Some((d, c)) if m >= 0 && d as i64 == m => c.clone(),
                        _ => return Err(D::Error::custom(format!("mode {} is not homogeneous of degree {m}", mode.k))),
                    };
                    coeffs.push((mode.k, c));
                }
                Ok(LaurentSymbol::homogeneous(m, coeffs))
            }
        }
    }
}

/// Top-order part of `A`: with `m = max deg q_k`, mode `k` is the
/// `x^m` coefficient of `q_k` times `s^m`.
pub fn leading_symbol(a: &CanonicalOperator) -> Result<LaurentSymbol, SymbolError> {
    let m = a.order().ok_or(SymbolError::ZeroOperator)?;
    Ok(LaurentSymbol::homogeneous(m as i64, a.terms().map(|(k, q)| (k, q.coeff(m)))))
}

/// Can `σ` be written as a smooth function on the given cut space?
/// `M₊₊` needs `m ≥ |k|` on every mode; `M₊` needs even `k` and `m ≥ |k|/2`.
/// Negative degrees are never admissible; the zero symbol always is.
pub fn is_admissible(sigma: &LaurentSymbol, variant: SymbolVariant) -> Result<bool, SymbolError> {
    if sigma.is_zero() {
        return Ok(true);
    }
    let m = sigma.degree().ok_or(SymbolError::NotHomogeneous)?;
    Ok(sigma.modes().all(|(k, _)| match variant {
        SymbolVariant::MPlusPlus => m >= k.abs(),
        SymbolVariant::MPlusEven => k % 2 == 0 && m >= k.abs() / 2,
    }))
}

/// A commuting operator with leading symbol `σ`: mode `k` becomes
/// `c_k·x^{m-j}·P_k(x)` where `P_k` is the degree-`j` ladder product.
pub fn build_commuting_from_symbol(sigma: &LaurentSymbol, parity: Parity) -> Result<CanonicalOperator, SymbolError> {
    let variant = SymbolVariant::for_parity(parity);
    if !is_admissible(sigma, variant)? {
        return Err(SymbolError::NotAdmissible(variant));
    }
    let Some(coeffs) = sigma.homogeneous_coefficients() else {
        return Ok(CanonicalOperator::zero());
    };
    let m = sigma.degree().expect("homogeneous") as usize;
    Ok(CanonicalOperator::new(coeffs.into_iter().map(|(k, c)| {
        let ladder = crate::operator::ladder_product(k, parity).expect("admissible modes have ladder products");
        let j = ladder.degree().expect("ladder products are nonzero");
        (k, &Polynomial::monomial(c, m - j) * &ladder)
    })))
}

/// `{f, g} = f_s g_θ − f_θ g_s`.
pub fn poisson_bracket(f: &LaurentSymbol, g: &LaurentSymbol) -> LaurentSymbol {
    f.ds().mul(&g.dtheta()).sub(&f.dtheta().mul(&g.ds()))
}

/// One step of the symbol exact sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactnessWitness {
    pub order: i64,
    pub symbol: LaurentSymbol,
    pub remainder: CanonicalOperator,
}

/// Splits a commuting `A` into the lift of its leading symbol and a
/// commuting remainder of lower order.
pub fn exactness_witness(a: &CanonicalOperator, parity: Parity) -> Result<ExactnessWitness, SymbolError> {
    if !szego_commutes(a, parity) {
        return Err(OperatorError::NotInCommutant(parity).into());
    }
    let symbol = leading_symbol(a)?;
    let order = symbol.degree().expect("leading symbols are homogeneous");
    let lift = build_commuting_from_symbol(&symbol, parity)?;
    Ok(ExactnessWitness { order, symbol, remainder: a - &lift })
}

/// Symbols of orders `m, m-1, …, 0` obtained by peeling leading parts off
/// `A`; orders with no contribution hold the zero symbol.
pub fn symbol_tower(a: &CanonicalOperator, parity: Parity) -> Result<Vec<LaurentSymbol>, SymbolError> {
    let m = a.order().ok_or(SymbolError::ZeroOperator)?;
    let mut current = a.clone();
    let mut tower = Vec::with_capacity(m + 1);
    for d in (0..=m).rev() {
        if current.order() == Some(d) {
            let w = exactness_witness(&current, parity)?;
            tower.push(w.symbol);
            current = w.remainder;
        } else {
            tower.push(LaurentSymbol::zero());
        }
    }
    debug_assert!(current.is_zero());
    Ok(tower)
}
