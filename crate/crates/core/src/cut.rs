//! Polynomial jets on the cut space and their pullbacks to `(s, θ)`.
//!
//! A jet `Σ a_kl z^k z̄^l` pulls back along `z = e^{-iθ}√s` (the even cut
//! `M₊`) or its half-angle version (the orbifold cut `M₊₊`).

use std::collections::BTreeMap;
use std::ops::Mul;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{GaussianRational, Polynomial};
use crate::symbol::{LaurentSymbol, SymbolVariant};

/// Largest total degree accepted from serialized input.
pub const MAX_INPUT_DEGREE: u32 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CutError {
    #[error("jet has a nonzero coefficient of odd total degree at z^{k} z̄^{l}")]
    OddJet { k: u32, l: u32 },
    #[error("no monomial z^a z̄^b pulls back to e^({k}iθ) s^{d} on {variant:?}")]
    NotAdmissible { k: i64, d: i64, variant: SymbolVariant },
    #[error("coefficient z^{k} z̄^{l} exceeds the truncation degree {dmax}")]
    OutOfRange { k: u32, l: u32, dmax: u32 },
}

/// Truncated Taylor series `Σ_{k+l ≤ dmax} a_kl z^k z̄^l`; zero
/// coefficients are not stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Jet {
    dmax: u32,
    coeffs: BTreeMap<(u32, u32), GaussianRational>,
}

impl Jet {
    pub fn new<I: IntoIterator<Item = ((u32, u32), GaussianRational)>>(dmax: u32, coeffs: I) -> Result<Self, CutError> {
        let mut jet = Jet { dmax, coeffs: BTreeMap::new() };
        for ((k, l), a) in coeffs {
            if k as u64 + l as u64 > dmax as u64 {
                return Err(CutError::OutOfRange { k, l, dmax });
            }
            jet.add(k, l, &a);
        }
        Ok(jet)
    }

    /// `c·z^k z̄^l` truncated at its own degree.
    pub fn monomial(k: u32, l: u32, c: GaussianRational) -> Self {
        Jet::new(k + l, [((k, l), c)]).expect("in range")
    }

    fn add(&mut self, k: u32, l: u32, a: &GaussianRational) {
        let sum = &self.coeffs.get(&(k, l)).cloned().unwrap_or_default() + a;
        if sum.is_zero() {
            self.coeffs.remove(&(k, l));
        } else {
            self.coeffs.insert((k, l), sum);
        }
    }

    pub fn dmax(&self) -> u32 {
        self.dmax
    }

    pub fn coeffs(&self) -> &BTreeMap<(u32, u32), GaussianRational> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Sum, truncated at the larger of the two degrees.
    pub fn add_jet(&self, rhs: &Jet) -> Jet {
        let mut out = Jet { dmax: self.dmax.max(rhs.dmax), coeffs: self.coeffs.clone() };
        for (&(k, l), a) in &rhs.coeffs {
            out.add(k, l, a);
        }
        out
    }

    /// The first odd-degree monomial with a nonzero coefficient.
    pub fn first_odd(&self) -> Option<(u32, u32)> {
        self.coeffs.keys().copied().find(|(k, l)| (k + l) % 2 == 1)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    /// Exact product; the truncation degrees add.
    fn mul(self, rhs: &Jet) -> Jet {
        let mut out = Jet { dmax: self.dmax + rhs.dmax, coeffs: BTreeMap::new() };
        for (&(k1, l1), a) in &self.coeffs {
            for (&(k2, l2), b) in &rhs.coeffs {
                out.add(k1 + k2, l1 + l2, &(a * b));
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoeffJson {
    k: u32,
    l: u32,
    value: GaussianRational,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JetJson {
    dmax: u32,
    coeffs: Vec<CoeffJson>,
}

impl Serialize for Jet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        JetJson {
            dmax: self.dmax,
            coeffs: self.coeffs.iter().map(|(&(k, l), v)| CoeffJson { k, l, value: v.clone() }).collect(),
        }
        .serialize(serializer)
    }
}

/// Repeated `(k, l)` entries are rejected rather than summed.
impl<'de> Deserialize<'de> for Jet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = JetJson::deserialize(deserializer)?;
        if raw.dmax > MAX_INPUT_DEGREE {
            return Err(D::Error::custom(format!("dmax {} exceeds the input limit", raw.dmax)));
        }
        let mut seen = std::collections::BTreeSet::new();
        for c in &raw.coeffs {
            if !seen.insert((c.k, c.l)) {
                return Err(D::Error::custom(format!("coefficient ({}, {}) appears twice", c.k, c.l)));
            }
        }
        Jet::new(raw.dmax, raw.coeffs.into_iter().map(|c| ((c.k, c.l), c.value))).map_err(D::Error::custom)
    }
}

/// A jet extends to a smooth function on the cut space iff it is even.
pub fn extends_smoothly(j: &Jet) -> bool {
    j.first_odd().is_none()
}

/// `z^k z̄^l ↦ e^{i(l−k)θ} s^{(k+l)/2}` on `M₊`, and
/// `e^{i(l−k)θ/2} s^{(k+l)/2}` on `M₊₊`.
pub fn pullback_jet(j: &Jet, variant: SymbolVariant) -> Result<LaurentSymbol, CutError> {
    if let Some((k, l)) = j.first_odd() {
        return Err(CutError::OddJet { k, l });
    }
    let terms = j.coeffs.iter().map(|(&(k, l), a)| {
        let diff = l as i64 - k as i64;
        let mode = match variant {
            SymbolVariant::MPlusEven => diff,
            SymbolVariant::MPlusPlus => diff / 2,
        };
        (mode, Polynomial::monomial(a.clone(), ((k + l) / 2) as usize))
    });
    Ok(LaurentSymbol::polynomial(terms))
}

/// Inverse of [`pullback_jet`] on polynomial symbols.
pub fn pushforward_symbol(sigma: &LaurentSymbol, variant: SymbolVariant) -> Result<Jet, CutError> {
    let mut out = Jet::default();
    if let Some(top) = sigma.top_power() {
        if !sigma.is_polynomial() {
            let (k, _) = sigma.modes().next().expect("nonzero");
            return Err(CutError::NotAdmissible { k, d: sigma.valuation(), variant });
        }
        out.dmax = u32::try_from(2 * top).map_err(|_| CutError::NotAdmissible { k: 0, d: top, variant })?;
    }
    for (k, p) in sigma.modes() {
        for (d, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = d as i64;
            let half = match variant {
                SymbolVariant::MPlusEven if k % 2 == 0 => k / 2,
                SymbolVariant::MPlusPlus => k,
                _ => return Err(CutError::NotAdmissible { k, d, variant }),
            };
            let (a, b) = (d - half, d + half);
            if a < 0 || b < 0 {
                return Err(CutError::NotAdmissible { k, d, variant });
            }
            out.add(a as u32, b as u32, c);
        }
    }
    Ok(out)
}
