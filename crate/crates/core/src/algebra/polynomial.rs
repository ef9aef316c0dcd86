use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{AlgebraError, GaussianRational};

/// Univariate polynomial with Gaussian-rational coefficients, lowest degree
/// first. Trailing zero coefficients are never stored, so the zero polynomial
/// has an empty coefficient list and no degree.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<GaussianRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(GaussianRational::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| GaussianRational::from_integer(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Polynomial::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Polynomial::monomial(GaussianRational::one(), 1)
    }

    /// `c·x^d`.
    pub fn monomial(c: GaussianRational, d: usize) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![GaussianRational::zero(); d + 1];
        coeffs[d] = c;
        Polynomial { coeffs }
    }

    /// `x - r`.
    pub fn linear_root(r: i64) -> Self {
        Polynomial::from_integers(&[-r, 1])
    }

    /// `∏ (x - r)` over the given roots.
    pub fn from_roots<I: IntoIterator<Item = i64>>(roots: I) -> Self {
        roots.into_iter().fold(Polynomial::one(), |acc, r| &acc * &Polynomial::linear_root(r))
    }

    /// Rising product `(x+1)(x+2)⋯(x+k)`; equals 1 for `k = 0`.
    pub fn rising(k: u32) -> Self {
        Polynomial::from_roots((1..=k as i64).map(|m| -m))
    }

    /// Falling product `x(x-1)⋯(x-k+1)`; equals 1 for `k = 0`.
    pub fn falling(k: u32) -> Self {
        Polynomial::from_roots(0..k as i64)
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> GaussianRational {
        self.coeffs.get(d).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coefficient(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    /// True when the polynomial is `c·x^d` for a single `d`.
    pub fn as_monomial(&self) -> Option<(usize, &GaussianRational)> {
        let d = self.degree()?;
        self.coeffs[..d].iter().all(GaussianRational::is_zero).then(|| (d, &self.coeffs[d]))
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &GaussianRational) -> GaussianRational {
        self.coeffs.iter().rev().fold(GaussianRational::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn eval_int(&self, n: i64) -> GaussianRational {
        self.eval(&GaussianRational::from_integer(n))
    }

    pub fn eval_f64(&self, x: f64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c.to_complex64())
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Coefficient-wise complex conjugate.
    pub fn conj(&self) -> Self {
        Polynomial { coeffs: self.coeffs.iter().map(GaussianRational::conj).collect() }
    }

    pub fn derivative(&self) -> Self {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(d, c)| c * &GaussianRational::from_integer(d as i64))
                .collect(),
        )
    }

    /// Returns `q` with `q(x) = p(x + c)`.
    pub fn shift(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        // Horner's scheme in the ring of polynomials: p(x + c).
        let x_plus_c = Polynomial::new(vec![c.clone(), GaussianRational::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Polynomial::zero(), |acc, a| &(&acc * &x_plus_c) + &Polynomial::constant(a.clone()))
    }

    pub fn shift_int(&self, c: i64) -> Self {
        self.shift(&GaussianRational::from_integer(c))
    }

    /// Euclidean division: `(q, r)` with `self = q·d + r` and `deg r < deg d`.
    pub fn div_rem(&self, d: &Polynomial) -> Result<(Polynomial, Polynomial), AlgebraError> {
        let dd = d.degree().ok_or(AlgebraError::DivisionByZero)?;
        let lead_inv = d.coeffs[dd].inv()?;
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Ok((Polynomial::zero(), Polynomial::zero()));
        };
        if nd < dd {
            return Ok((Polynomial::zero(), self.clone()));
        }
        let mut quot = vec![GaussianRational::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &(&c * dj);
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Polynomial::new(quot), Polynomial::new(rem)))
    }

    /// Exact quotient `self / d`; fails with the remainder when `d` does not
    /// divide `self`.
    pub fn divide_exact(&self, d: &Polynomial) -> Result<Polynomial, AlgebraError> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(AlgebraError::NonzeroRemainder { remainder: r })
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Polynomial::one(), |acc, _| &acc * self)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => f.write_str("x")?,
                1 => write!(f, "{c}·x")?,
                _ if c.is_one() => write!(f, "x^{d}")?,
                _ => write!(f, "{c}·x^{d}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Vec::<GaussianRational>::deserialize(deserializer).map(Polynomial::new)
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|d| &self.coeff(d) + &rhs.coeff(d)).collect())
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|d| &self.coeff(d) - &rhs.coeff(d)).collect())
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
