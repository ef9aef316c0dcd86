use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::AlgebraError;

/// Point of the integer lattice `ℤ²`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LatticeVector2 {
    pub a: i64,
    pub b: i64,
}

impl LatticeVector2 {
    pub const fn new(a: i64, b: i64) -> Self {
        LatticeVector2 { a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Euclidean pairing, computed in `i128`.
    pub fn dot(&self, other: &LatticeVector2) -> i128 {
        self.a as i128 * other.a as i128 + self.b as i128 * other.b as i128
    }

    /// `det[self | other]`, computed in `i128`.
    pub fn det(&self, other: &LatticeVector2) -> i128 {
        self.a as i128 * other.b as i128 - self.b as i128 * other.a as i128
    }

    /// Quarter turn counter-clockwise: `(a, b) ↦ (-b, a)`.
    pub fn perp(&self) -> Self {
        LatticeVector2::new(-self.b, self.a)
    }

    /// Content of the vector, nonnegative; computed in `i128` so `i64::MIN`
    /// coordinates are safe.
    pub fn gcd(&self) -> i128 {
        (self.a as i128).gcd(&(self.b as i128))
    }

    pub fn is_primitive(&self) -> bool {
        self.gcd() == 1
    }

    /// Divides out the content, keeping the direction.
    pub fn primitive(&self) -> Result<Self, AlgebraError> {
        Self::primitive_from_wide(self.a as i128, self.b as i128)
    }

    /// Builds a primitive vector from `i128` coordinates, failing if the
    /// reduced vector does not fit in `i64`.
    pub fn primitive_from_wide(a: i128, b: i128) -> Result<Self, AlgebraError> {
        if a == 0 && b == 0 {
            return Err(AlgebraError::ZeroVector);
        }
        let g = a.gcd(&b);
        let (a, b) = (a / g, b / g);
        match (i64::try_from(a), i64::try_from(b)) {
            (Ok(a), Ok(b)) => Ok(LatticeVector2::new(a, b)),
            _ => Err(AlgebraError::Overflow),
        }
    }
}

impl fmt::Display for LatticeVector2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl fmt::Debug for LatticeVector2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for LatticeVector2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        LatticeVector2::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for LatticeVector2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        LatticeVector2::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for LatticeVector2 {
    type Output = Self;
    fn neg(self) -> Self {
        LatticeVector2::new(-self.a, -self.b)
    }
}

impl Mul<LatticeVector2> for i64 {
    type Output = LatticeVector2;
    fn mul(self, rhs: LatticeVector2) -> LatticeVector2 {
        LatticeVector2::new(self * rhs.a, self * rhs.b)
    }
}

/// Serialized as a two-element array `[a, b]`.
impl Serialize for LatticeVector2 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.a, self.b].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LatticeVector2 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [a, b] = <[i64; 2]>::deserialize(deserializer)?;
        Ok(LatticeVector2::new(a, b))
    }
}

/// Extended gcd certificate: `u·a + v·b = g` with `g > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bezout {
    pub g: i64,
    pub u: i64,
    pub v: i64,
}

/// Extended Euclid on `(a, b) ≠ (0, 0)`.
pub fn bezout(a: i64, b: i64) -> Result<Bezout, AlgebraError> {
    if a == 0 && b == 0 {
        return Err(AlgebraError::ZeroVector);
    }
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (r0, s0, t0) = (-r0, -s0, -t0);
    }
    let narrow = |x: i128| i64::try_from(x).map_err(|_| AlgebraError::Overflow);
    Ok(Bezout { g: narrow(r0)?, u: narrow(s0)?, v: narrow(t0)? })
}

/// Integer 2×2 matrix with determinant ±1, row-major.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "[[i64; 2]; 2]", into = "[[i64; 2]; 2]")]
pub struct Unimodular2 {
    rows: [[i64; 2]; 2],
}

impl Unimodular2 {
    pub fn new(rows: [[i64; 2]; 2]) -> Result<Self, AlgebraError> {
        let det = rows[0][0] as i128 * rows[1][1] as i128 - rows[0][1] as i128 * rows[1][0] as i128;
        if det.abs() != 1 {
            return Err(AlgebraError::NotUnimodular { det });
        }
        Ok(Unimodular2 { rows })
    }

    pub const IDENTITY: Unimodular2 = Unimodular2 { rows: [[1, 0], [0, 1]] };

    /// `diag(1, -1)`.
    pub const REFLECT_SECOND: Unimodular2 = Unimodular2 { rows: [[1, 0], [0, -1]] };

    pub fn rows(&self) -> [[i64; 2]; 2] {
        self.rows
    }

    pub fn det(&self) -> i64 {
        let r = &self.rows;
        (r[0][0] as i128 * r[1][1] as i128 - r[0][1] as i128 * r[1][0] as i128) as i64
    }

    /// `M·v` in `i128`; unimodular images of `i64` vectors can exceed `i64`.
    pub fn apply_wide(&self, v: &LatticeVector2) -> (i128, i128) {
        let r = &self.rows;
        (
            r[0][0] as i128 * v.a as i128 + r[0][1] as i128 * v.b as i128,
            r[1][0] as i128 * v.a as i128 + r[1][1] as i128 * v.b as i128,
        )
    }

    pub fn apply(&self, v: &LatticeVector2) -> Result<LatticeVector2, AlgebraError> {
        let (a, b) = self.apply_wide(v);
        match (i64::try_from(a), i64::try_from(b)) {
            (Ok(a), Ok(b)) => Ok(LatticeVector2::new(a, b)),
            _ => Err(AlgebraError::Overflow),
        }
    }

    pub fn compose(&self, rhs: &Unimodular2) -> Result<Unimodular2, AlgebraError> {
        let (a, b) = (&self.rows, &rhs.rows);
        let entry = |i: usize, j: usize| {
            let x = a[i][0] as i128 * b[0][j] as i128 + a[i][1] as i128 * b[1][j] as i128;
            i64::try_from(x).map_err(|_| AlgebraError::Overflow)
        };
        Unimodular2::new([[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]])
    }

    pub fn inverse(&self) -> Result<Unimodular2, AlgebraError> {
        let [[a, b], [c, d]] = self.rows;
        let det = self.det() as i128;
        let entry = |x: i128| i64::try_from(x * det).map_err(|_| AlgebraError::Overflow);
        Ok(Unimodular2 { rows: [[entry(d as i128)?, entry(-(b as i128))?], [entry(-(c as i128))?, entry(a as i128)?]] })
    }
}

impl TryFrom<[[i64; 2]; 2]> for Unimodular2 {
    type Error = AlgebraError;
    fn try_from(rows: [[i64; 2]; 2]) -> Result<Self, Self::Error> {
        Unimodular2::new(rows)
    }
}

impl From<Unimodular2> for [[i64; 2]; 2] {
    fn from(m: Unimodular2) -> Self {
        m.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_examples() {
        assert_eq!(LatticeVector2::new(2, 4).primitive().unwrap(), LatticeVector2::new(1, 2));
        assert_eq!(LatticeVector2::new(-3, 0).primitive().unwrap(), LatticeVector2::new(-1, 0));
        assert_eq!(LatticeVector2::new(3, -2).primitive().unwrap(), LatticeVector2::new(3, -2));
        assert!(LatticeVector2::new(0, 0).primitive().is_err());
    }

    #[test]
    fn bezout_examples() {
        assert_eq!(bezout(3, 2).unwrap(), Bezout { g: 1, u: 1, v: -1 });
        assert_eq!(bezout(4, 0).unwrap(), Bezout { g: 4, u: 1, v: 0 });
        let c = bezout(6, 9).unwrap();
        assert_eq!(c.g, 3);
        assert_eq!(6 * c.u + 9 * c.v, 3);
        let n = bezout(-4, -6).unwrap();
        assert_eq!(n.g, 2);
        assert_eq!(-4 * n.u - 6 * n.v, 2);
        assert!(bezout(0, 0).is_err());
    }

    #[test]
    fn unimodular_rejects_other_determinants() {
        assert!(Unimodular2::new([[2, 0], [0, 1]]).is_err());
        let m = Unimodular2::new([[1, 1], [1, 2]]).unwrap();
        assert_eq!(m.compose(&m.inverse().unwrap()).unwrap(), Unimodular2::IDENTITY);
        let r = Unimodular2::new([[1, 0], [0, -1]]).unwrap();
        assert_eq!(r.compose(&r).unwrap(), Unimodular2::IDENTITY);
    }

    #[test]
    fn extreme_coordinates_do_not_overflow() {
        let v = LatticeVector2::new(i64::MIN + 1, i64::MAX);
        assert!(v.primitive().is_ok());
        assert_eq!(LatticeVector2::new(i64::MIN, 0).primitive().unwrap(), LatticeVector2::new(-1, 0));
        let m = Unimodular2::new([[1, 1], [1, 2]]).unwrap();
        assert!(m.apply(&v).is_ok());
        assert!(m.apply(&LatticeVector2::new(i64::MAX, i64::MAX)).is_err());
    }
}
