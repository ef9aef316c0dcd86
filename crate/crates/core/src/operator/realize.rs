//! Finite matrix realizations of canonical operators.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{CanonicalOperator, OperatorError, Parity};
use crate::algebra::GaussianRational;
use crate::linalg::BandMatrix;

/// Floating-point realization of an operator on the modes
/// `first, first + step, …` (`dim` of them). Stored as a band matrix: the
/// operators here have bandwidth `max |k|`, so dense storage would waste
/// almost all of its memory at the window sizes used for spectra.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedMatrix {
    first: i64,
    step: i64,
    band: BandMatrix,
}

impl TruncatedMatrix {
    /// Compression of `a` onto `dim` modes starting at `first`, spaced by
    /// `step`. Entry `(i, j)` is `q_{m_i - m_j}(m_j)`.
    pub fn compress(a: &CanonicalOperator, first: i64, step: i64, dim: usize) -> Self {
        let bw = a.terms().filter(|(k, _)| k % step == 0).map(|(k, _)| (k.abs() / step) as usize).max().unwrap_or(0);
        let mut band = BandMatrix::zeros(dim, bw);
        for (k, q) in a.terms() {
            if k % step != 0 {
                continue;
            }
            let off = k / step;
            for j in 0..dim as i64 {
                let i = j + off;
                if i < 0 || i >= dim as i64 {
                    continue;
                }
                let z = q.eval_int(first + j * step).to_complex64();
                band.set(i as usize, j as usize, z);
            }
        }
        TruncatedMatrix { first, step, band }
    }

    pub fn dim(&self) -> usize {
        self.band.dim()
    }

    pub fn modes(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.dim() as i64).map(move |i| self.first + i * self.step)
    }

    pub fn first_mode(&self) -> i64 {
        self.first
    }

    pub fn last_mode(&self) -> i64 {
        self.first + (self.dim() as i64 - 1) * self.step
    }

    pub fn bandwidth(&self) -> usize {
        self.band.bandwidth()
    }

    fn index(&self, mode: i64) -> Option<usize> {
        let off = mode - self.first;
        if off < 0 || off % self.step != 0 {
            return None;
        }
        let i = (off / self.step) as usize;
        (i < self.dim()).then_some(i)
    }

    /// Entry addressed by modes; zero outside the window.
    pub fn entry(&self, row: i64, col: i64) -> Complex64 {
        match (self.index(row), self.index(col)) {
            (Some(i), Some(j)) => self.band.get(i, j),
            _ => Complex64::new(0.0, 0.0),
        }
    }

    pub fn band(&self) -> &BandMatrix {
        &self.band
    }

    /// Matrix product on the same window.
    pub fn matmul(&self, rhs: &TruncatedMatrix) -> TruncatedMatrix {
        assert_eq!((self.first, self.step, self.dim()), (rhs.first, rhs.step, rhs.dim()), "window mismatch");
        TruncatedMatrix { first: self.first, step: self.step, band: self.band.matmul(&rhs.band) }
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        self.band.to_dense()
    }
}

/// `A` on the modes `[-n, n]`.
pub fn realize_matrix(a: &CanonicalOperator, n: i64) -> Result<TruncatedMatrix, OperatorError> {
    check_window(a, n)?;
    Ok(TruncatedMatrix::compress(a, -n, 1, (2 * n + 1) as usize))
}

fn check_window(a: &CanonicalOperator, n: i64) -> Result<(), OperatorError> {
    if n < 1 || n < a.bandwidth() {
        return Err(OperatorError::WindowTooSmall { window: n, bandwidth: a.bandwidth() });
    }
    Ok(())
}

/// Exact sparse realization on the modes `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactWindow {
    lo: i64,
    hi: i64,
    entries: BTreeMap<(i64, i64), GaussianRational>,
}

impl ExactWindow {
    fn empty(lo: i64, hi: i64) -> Self {
        ExactWindow { lo, hi, entries: BTreeMap::new() }
    }

    fn insert(&mut self, row: i64, col: i64, v: GaussianRational) {
        if !v.is_zero() {
            self.entries.insert((row, col), v);
        }
    }

    /// Diagonal indicator of the modes kept by the projector.
    pub fn projector(parity: Parity, lo: i64, hi: i64) -> Self {
        let mut w = ExactWindow::empty(lo, hi);
        for n in lo..=hi {
            if parity.retains(n) {
                w.insert(n, n, GaussianRational::one());
            }
        }
        w
    }

    pub fn bounds(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn entry(&self, row: i64, col: i64) -> GaussianRational {
        self.entries.get(&(row, col)).cloned().unwrap_or_default()
    }

    /// Nonzero entries in row-major order.
    pub fn nonzero(&self) -> impl Iterator<Item = (i64, i64, &GaussianRational)> + '_ {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn matmul(&self, rhs: &ExactWindow) -> ExactWindow {
        assert_eq!(self.bounds(), rhs.bounds(), "window mismatch");
        let mut by_row: BTreeMap<i64, Vec<(i64, &GaussianRational)>> = BTreeMap::new();
        for (&(r, c), v) in &rhs.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut acc: BTreeMap<(i64, i64), GaussianRational> = BTreeMap::new();
        for (&(i, m), a) in &self.entries {
            for &(j, b) in by_row.get(&m).into_iter().flatten() {
                *acc.entry((i, j)).or_default() += &(a * b);
            }
        }
        let mut out = ExactWindow::empty(self.lo, self.hi);
        for ((i, j), v) in acc {
            out.insert(i, j, v);
        }
        out
    }

    pub fn sub(&self, rhs: &ExactWindow) -> ExactWindow {
        assert_eq!(self.bounds(), rhs.bounds(), "window mismatch");
        let mut out = self.clone();
        for (&(i, j), v) in &rhs.entries {
            let d = &out.entry(i, j) - v;
            out.entries.remove(&(i, j));
            out.insert(i, j, d);
        }
        out
    }

    pub fn commutator(&self, rhs: &ExactWindow) -> ExactWindow {
        self.matmul(rhs).sub(&rhs.matmul(self))
    }

    /// Keeps entries whose row and column both lie in `[lo, hi]`.
    pub fn restrict(&self, lo: i64, hi: i64) -> ExactWindow {
        let mut out = ExactWindow::empty(lo, hi);
        for (&(i, j), v) in &self.entries {
            if (lo..=hi).contains(&i) && (lo..=hi).contains(&j) {
                out.insert(i, j, v.clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Exact realization of `A` on the modes `[-n, n]`.
pub fn realize_exact(a: &CanonicalOperator, n: i64) -> Result<ExactWindow, OperatorError> {
    check_window(a, n)?;
    let mut w = ExactWindow::empty(-n, n);
    for (k, q) in a.terms() {
        for col in (-n).max(-n - k)..=n.min(n - k) {
            w.insert(col + k, col, q.eval_int(col));
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Generator;

    #[test]
    fn realize_d() {
        let m = realize_matrix(&Generator::D.operator(), 2).unwrap();
        for (i, n) in (-2..=2).enumerate() {
            for (j, l) in (-2..=2).enumerate() {
                let want = if i == j { n as f64 } else { 0.0 };
                assert_eq!(m.entry(n, l), Complex64::new(want, 0.0));
            }
        }
    }

    #[test]
    fn shift_lands_below_diagonal() {
        let m = realize_matrix(&CanonicalOperator::shift(1), 2).unwrap();
        for n in -2..2 {
            assert_eq!(m.entry(n + 1, n), Complex64::new(1.0, 0.0));
        }
        assert_eq!(m.entry(-2, -1), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn interior_product_matches_composition() {
        let r = Generator::Raise.operator();
        let l = Generator::Lower.operator();
        let prod = realize_matrix(&r, 2).unwrap().matmul(&realize_matrix(&l, 2).unwrap());
        let comp = realize_matrix(&r.compose(&l), 2).unwrap();
        for i in -1..=1 {
            for j in -1..=1 {
                assert_eq!(prod.entry(i, j), comp.entry(i, j));
            }
        }
        let exact = realize_exact(&r, 2).unwrap().matmul(&realize_exact(&l, 2).unwrap());
        assert_eq!(exact.restrict(-1, 1), realize_exact(&r.compose(&l), 2).unwrap().restrict(-1, 1));
    }

    #[test]
    fn window_too_small() {
        let a = CanonicalOperator::shift(3);
        assert_eq!(realize_matrix(&a, 2).unwrap_err(), OperatorError::WindowTooSmall { window: 2, bandwidth: 3 });
    }
}
