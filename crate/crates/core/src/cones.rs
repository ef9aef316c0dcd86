//! Rational polyhedral cones in `ℤ²` (and half-space descriptions in `ℤⁿ`):
//! cutting by half-spaces, lens cones, `GL(2,ℤ)` normal forms and cut plans.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{bezout, AlgebraError, LatticeVector2, Unimodular2};

/// Generator coordinates are limited to this magnitude so that every
/// intermediate product fits comfortably in `i128`.
pub const MAX_COORDINATE: i64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("gcd({p}, {q}) ≠ 1")]
    NotCoprime { p: i64, q: i64 },
    #[error("zero vector")]
    ZeroVector,
    #[error("generators {u} and {v} are parallel")]
    Degenerate { u: LatticeVector2, v: LatticeVector2 },
    #[error("coordinate magnitude exceeds {MAX_COORDINATE}")]
    CoordinateTooLarge,
    #[error("the cut removes the whole cone")]
    EmptyCut,
    #[error("the cut leaves a lower-dimensional set")]
    DegenerateCut,
    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("half-spaces do not bound a strictly convex two-dimensional cone")]
    NotStrictlyConvex,
    #[error("a cone needs at least one facet normal")]
    NoNormals,
    #[error("arithmetic overflow")]
    Overflow,
}

impl From<AlgebraError> for ConeError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::ZeroVector => ConeError::ZeroVector,
            _ => ConeError::Overflow,
        }
    }
}

fn bounded(v: LatticeVector2) -> Result<LatticeVector2, ConeError> {
    if v.a.unsigned_abs() > MAX_COORDINATE as u64 || v.b.unsigned_abs() > MAX_COORDINATE as u64 {
        return Err(ConeError::CoordinateTooLarge);
    }
    Ok(v)
}

/// Strictly convex cone `{t₁u + t₂v : t₁, t₂ ≥ 0}` with primitive, linearly
/// independent generators. Equality ignores generator order.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(try_from = "ConeJson", into = "ConeJson")]
pub struct Cone2 {
    u: LatticeVector2,
    v: LatticeVector2,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConeJson {
    generators: [LatticeVector2; 2],
}

impl TryFrom<ConeJson> for Cone2 {
    type Error = ConeError;
    fn try_from(c: ConeJson) -> Result<Self, ConeError> {
        Cone2::new(c.generators[0], c.generators[1])
    }
}

impl From<Cone2> for ConeJson {
    fn from(c: Cone2) -> Self {
        ConeJson { generators: [c.u, c.v] }
    }
}

impl PartialEq for Cone2 {
    fn eq(&self, other: &Self) -> bool {
        (self.u == other.u && self.v == other.v) || (self.u == other.v && self.v == other.u)
    }
}

impl Eq for Cone2 {}

impl fmt::Display for Cone2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone({}, {})", self.u, self.v)
    }
}

impl Cone2 {
    /// Generators are reduced to primitive vectors.
    pub fn new(u: LatticeVector2, v: LatticeVector2) -> Result<Self, ConeError> {
        let u = bounded(u.primitive()?)?;
        let v = bounded(v.primitive()?)?;
        if u.det(&v) == 0 {
            return Err(ConeError::Degenerate { u, v });
        }
        Ok(Cone2 { u, v })
    }

    pub fn generators(&self) -> (LatticeVector2, LatticeVector2) {
        (self.u, self.v)
    }

    pub fn det(&self) -> i128 {
        self.u.det(&self.v)
    }

    /// Exact membership: solves `w = t₁u + t₂v` by Cramer's rule and checks
    /// the signs of `t₁, t₂` against `det(u, v)`.
    pub fn contains(&self, w: &LatticeVector2) -> bool {
        let d = self.det();
        let t1 = w.det(&self.v) * d.signum();
        let t2 = self.u.det(w) * d.signum();
        t1 >= 0 && t2 >= 0
    }
}

/// `{η : ⟨η, λ⟩ ≥ 0}` for a primitive normal `λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "LatticeVector2", into = "LatticeVector2")]
pub struct HalfspaceZ {
    normal: LatticeVector2,
}

impl HalfspaceZ {
    /// The normal is reduced to a primitive vector.
    pub fn new(normal: LatticeVector2) -> Result<Self, ConeError> {
        Ok(HalfspaceZ { normal: bounded(normal.primitive()?)? })
    }

    pub fn normal(&self) -> LatticeVector2 {
        self.normal
    }

    pub fn value(&self, w: &LatticeVector2) -> i128 {
        w.dot(&self.normal)
    }
}

impl TryFrom<LatticeVector2> for HalfspaceZ {
    type Error = ConeError;
    fn try_from(v: LatticeVector2) -> Result<Self, ConeError> {
        HalfspaceZ::new(v)
    }
}

impl From<HalfspaceZ> for LatticeVector2 {
    fn from(h: HalfspaceZ) -> Self {
        h.normal
    }
}

/// `C_{p,q} = cone((1,0), (p,q))`.
pub fn lens_cone(p: i64, q: i64) -> Result<Cone2, ConeError> {
    if p < 1 || q < 1 || p.gcd(&q) != 1 {
        return Err(ConeError::NotCoprime { p, q });
    }
    Cone2::new(LatticeVector2::new(1, 0), LatticeVector2::new(p, q))
}

/// `cone((−1,1), (1,1))`.
pub fn sphere_cone() -> Cone2 {
    Cone2 { u: LatticeVector2::new(-1, 1), v: LatticeVector2::new(1, 1) }
}

pub fn contains(c: &Cone2, w: &LatticeVector2) -> bool {
    c.contains(w)
}

/// Intersection of a cone with a half-space. A generator on the wrong side
/// is replaced by the primitive boundary ray inside the cone, in the same
/// position so the orientation of `(u, v)` is kept.
pub fn cut_cone(c: &Cone2, h: &HalfspaceZ) -> Result<Cone2, ConeError> {
    let (u, v) = (c.u, c.v);
    let (fu, fv) = (h.value(&u), h.value(&v));
    let boundary = |x: &LatticeVector2, fx: i128, y: &LatticeVector2, fy: i128| {
        // fy·x − fx·y lies on ⟨·, λ⟩ = 0 with positive weights when fx < 0 < fy.
        let a = fy * x.a as i128 - fx * y.a as i128;
        let b = fy * x.b as i128 - fx * y.b as i128;
        LatticeVector2::primitive_from_wide(a, b).map_err(ConeError::from).and_then(bounded)
    };
    match (fu.signum(), fv.signum()) {
        (0 | 1, 0 | 1) => Ok(*c),
        (-1, -1) => Err(ConeError::EmptyCut),
        (-1, 0) | (0, -1) => Err(ConeError::DegenerateCut),
        (-1, 1) => Ok(Cone2 { u: boundary(&u, fu, &v, fv)?, v }),
        (1, -1) => Ok(Cone2 { u, v: boundary(&v, fv, &u, fu)? }),
        _ => unreachable!("signum is -1, 0 or 1"),
    }
}

pub fn apply_unimodular(m: &Unimodular2, c: &Cone2) -> Result<Cone2, ConeError> {
    let u = m.apply(&c.u)?;
    let v = m.apply(&c.v)?;
    debug_assert!(u.is_primitive() && v.is_primitive(), "unimodular maps preserve primitivity");
    Cone2::new(u, v)
}

/// `GL(2,ℤ)` invariant `(p, q)` with `0 ≤ q < p`: the cone is equivalent to
/// `cone((1,0), (q,p))`. Smooth cones have `p = 1, q = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConeNormalForm {
    pub p: i64,
    pub q: i64,
}

impl ConeNormalForm {
    pub fn is_smooth(&self) -> bool {
        self.p == 1
    }
}

/// Normal form of the ordered pair `(u, v)`: a unimodular map sends `u` to
/// `(1,0)` and `v` to `(c, d)` with `d = det(u, v)`; then reflect to make
/// `d > 0` and shear `c` into `[0, d)`.
fn ordered_form(u: &LatticeVector2, v: &LatticeVector2) -> ConeNormalForm {
    let bz = bezout(u.a, u.b).expect("generators are nonzero");
    debug_assert_eq!(bz.g, 1, "generators are primitive");
    // M = [[x, y], [−b, a]] has det 1 and M·u = (1, 0).
    let c = bz.u as i128 * v.a as i128 + bz.v as i128 * v.b as i128;
    let d = u.det(v);
    let p = d.abs();
    let q = c.rem_euclid(p);
    ConeNormalForm { p: i64::try_from(p).expect("bounded coordinates"), q: i64::try_from(q).expect("q < p") }
}

/// Lexicographic minimum of the two ordered forms.
pub fn normal_form(c: &Cone2) -> ConeNormalForm {
    ordered_form(&c.u, &c.v).min(ordered_form(&c.v, &c.u))
}

/// Normal form under `SL(2,ℤ)` only: the positively oriented ordering is
/// canonical, so no minimum is taken.
pub fn normal_form_oriented(c: &Cone2) -> ConeNormalForm {
    if c.det() > 0 {
        ordered_form(&c.u, &c.v)
    } else {
        ordered_form(&c.v, &c.u)
    }
}

pub fn gl_equivalent(a: &Cone2, b: &Cone2) -> bool {
    normal_form(a) == normal_form(b)
}

pub fn sl_equivalent(a: &Cone2, b: &Cone2) -> bool {
    normal_form_oriented(a) == normal_form_oriented(b)
}

/// The punctured plane, a half-plane, or a strictly convex cone: the
/// intermediate stages of a cut plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Region {
    FullPlane,
    HalfPlane { normal: HalfspaceZ },
    Cone { cone: Cone2 },
}

impl Region {
    /// Generators of the region: none for the plane, the two antipodal
    /// boundary rays for a half-plane.
    pub fn generators(&self) -> Vec<LatticeVector2> {
        match self {
            Region::FullPlane => vec![],
            Region::HalfPlane { normal } => {
                let b = normal.normal().perp();
                vec![b, -b]
            }
            Region::Cone { cone } => vec![cone.u, cone.v],
        }
    }
}

pub fn cut_region(r: &Region, h: &HalfspaceZ) -> Result<Region, ConeError> {
    match r {
        Region::FullPlane => Ok(Region::HalfPlane { normal: *h }),
        Region::HalfPlane { normal } => {
            let (n1, n2) = (normal.normal(), h.normal());
            if n1 == n2 {
                return Ok(*r);
            }
            if n1.det(&n2) == 0 {
                return Err(ConeError::DegenerateCut);
            }
            // Each boundary ray lies on one line and inside the other half-plane.
            let r1 = if n1.perp().dot(&n2) > 0 { n1.perp() } else { -n1.perp() };
            let r2 = if n2.perp().dot(&n1) > 0 { n2.perp() } else { -n2.perp() };
            Ok(Region::Cone { cone: Cone2::new(r1, r2)? })
        }
        Region::Cone { cone } => Ok(Region::Cone { cone: cut_cone(cone, h)? }),
    }
}

/// The two inward facet normals: `±u^⊥` positive on `v`, then `±v^⊥`
/// positive on `u`. Cutting the plane by both reproduces the cone.
pub fn cut_plan(c: &Cone2) -> [HalfspaceZ; 2] {
    let inward = |x: &LatticeVector2, y: &LatticeVector2| {
        let n = if x.perp().dot(y) > 0 { x.perp() } else { -x.perp() };
        HalfspaceZ { normal: n }
    };
    [inward(&c.u, &c.v), inward(&c.v, &c.u)]
}

pub fn verify_plan(c: &Cone2, plan: &[HalfspaceZ]) -> bool {
    let mut r = Region::FullPlane;
    for h in plan {
        match cut_region(&r, h) {
            Ok(next) => r = next,
            Err(_) => return false,
        }
    }
    r == Region::Cone { cone: *c }
}

/// Cone in `ℝⁿ` given by facet normals `{x : ⟨x, n_i⟩ ≥ 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ConeNJson", into = "ConeNJson")]
pub struct ConeN {
    dimension: usize,
    normals: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConeNJson {
    dimension: usize,
    normals: Vec<Vec<i64>>,
}

impl TryFrom<ConeNJson> for ConeN {
    type Error = ConeError;
    fn try_from(c: ConeNJson) -> Result<Self, ConeError> {
        ConeN::new(c.dimension, c.normals)
    }
}

impl From<ConeN> for ConeNJson {
    fn from(c: ConeN) -> Self {
        ConeNJson { dimension: c.dimension, normals: c.normals }
    }
}

fn primitive_n(v: &[i64]) -> Result<Vec<i64>, ConeError> {
    let g = v.iter().fold(0i64, |g, x| g.gcd(x));
    if g == 0 {
        return Err(ConeError::ZeroVector);
    }
    Ok(v.iter().map(|x| x / g).collect())
}

impl ConeN {
    /// Normals are made primitive; exact duplicates are dropped.
    pub fn new(dimension: usize, normals: Vec<Vec<i64>>) -> Result<Self, ConeError> {
        if normals.is_empty() || dimension == 0 {
            return Err(ConeError::NoNormals);
        }
        let mut out = ConeN { dimension, normals: Vec::new() };
        for n in normals {
            out = cut_cone_n(&out, &n)?;
        }
        Ok(out)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn normals(&self) -> &[Vec<i64>] {
        &self.normals
    }

    pub fn from_cone2(c: &Cone2) -> ConeN {
        ConeN { dimension: 2, normals: cut_plan(c).iter().map(|h| vec![h.normal.a, h.normal.b]).collect() }
    }

    /// Generators of a two-dimensional cone given by half-spaces: the
    /// extreme rays are the candidates `±n_i^⊥` that satisfy every
    /// constraint.
    pub fn to_cone2(&self) -> Result<Cone2, ConeError> {
        if self.dimension != 2 {
            return Err(ConeError::DimensionMismatch { expected: 2, found: self.dimension });
        }
        let ns: Vec<LatticeVector2> = self.normals.iter().map(|n| LatticeVector2::new(n[0], n[1])).collect();
        let mut rays: Vec<LatticeVector2> = Vec::new();
        for n in &ns {
            for r in [n.perp(), -n.perp()] {
                if ns.iter().all(|m| r.dot(m) >= 0) && !rays.contains(&r) {
                    rays.push(r);
                }
            }
        }
        match rays.as_slice() {
            [u, v] if u.det(v) != 0 => Cone2::new(*u, *v),
            _ => Err(ConeError::NotStrictlyConvex),
        }
    }
}

/// Adds a facet normal unless it is already present.
pub fn cut_cone_n(c: &ConeN, normal: &[i64]) -> Result<ConeN, ConeError> {
    if normal.len() != c.dimension {
        return Err(ConeError::DimensionMismatch { expected: c.dimension, found: normal.len() });
    }
    let n = primitive_n(normal)?;
    let mut out = c.clone();
    if !out.normals.contains(&n) {
        out.normals.push(n);
    }
    Ok(out)
}
