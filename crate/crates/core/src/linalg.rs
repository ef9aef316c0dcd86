//! Small dense/banded complex linear algebra used by the spectral experiments.

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Square complex matrix with entries confined to `|i - j| ≤ bandwidth`.
#[derive(Clone, Debug, PartialEq)]
pub struct BandMatrix {
    n: usize,
    bw: usize,
    data: Vec<Complex64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        let bw = bandwidth.min(n.saturating_sub(1));
        BandMatrix { n, bw, data: vec![ZERO; n * (2 * bw + 1)] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BandMatrix::zeros(n, 0);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        (i < self.n && j < self.n && i.abs_diff(j) <= self.bw).then(|| i * (2 * self.bw + 1) + j + self.bw - i)
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.slot(i, j).map_or(ZERO, |s| self.data[s])
    }

    /// Panics if `(i, j)` lies outside the band.
    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        let s = self.slot(i, j).expect("entry outside band");
        self.data[s] = z;
    }

    /// Columns of row `i` that lie inside the band.
    fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        i.saturating_sub(self.bw)..(i + self.bw + 1).min(self.n)
    }

    pub fn matmul(&self, rhs: &BandMatrix) -> BandMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let mut out = BandMatrix::zeros(self.n, self.bw + rhs.bw);
        for i in 0..self.n {
            for m in self.row_range(i) {
                let a = self.get(i, m);
                if a == ZERO {
                    continue;
                }
                for j in rhs.row_range(m) {
                    let s = out.slot(i, j).expect("product band");
                    out.data[s] += a * rhs.get(m, j);
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j)).collect()).collect()
    }

    /// `max |a_ij - conj(a_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in self.row_range(i) {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }
}

/// Eigenvalues of a Hermitian band matrix in ascending order. Diagonal and
/// tridiagonal inputs are handled directly; wider bands are reduced to
/// tridiagonal form by Householder reflections first.
pub fn hermitian_eigenvalues(m: &BandMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut eig = match m.bandwidth() {
        0 => (0..n).map(|i| m.get(i, i).re).collect(),
        1 => {
            let d = (0..n).map(|i| m.get(i, i).re).collect();
            let e: Vec<f64> = (0..n.saturating_sub(1)).map(|i| m.get(i + 1, i).norm()).collect();
            tridiagonal_eigenvalues(d, &e)
        }
        _ => dense_hermitian_eigenvalues(m.to_dense()),
    };
    eig.sort_by(f64::total_cmp);
    eig
}

/// Householder tridiagonalization followed by implicit QL.
pub fn dense_hermitian_eigenvalues(mut a: Vec<Vec<Complex64>>) -> Vec<f64> {
    let n = a.len();
    let mut sub = vec![0.0; n.saturating_sub(1)];
    for k in 0..n.saturating_sub(1) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| a[i][k]).collect();
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if k + 2 == n || norm == 0.0 {
            sub[k] = x[0].norm();
            continue;
        }
        let phase = if x[0] == ZERO { Complex64::new(1.0, 0.0) } else { x[0] / x[0].norm() };
        let alpha = -phase * norm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let tau = 2.0 / vnorm2;
        let m = n - k - 1;
        // p = τ A v, restricted to the trailing block.
        let p: Vec<Complex64> =
            (0..m).map(|i| tau * (0..m).map(|j| a[k + 1 + i][k + 1 + j] * v[j]).sum::<Complex64>()).collect();
        let vp: Complex64 = (0..m).map(|i| v[i].conj() * p[i]).sum();
        let kk = 0.5 * tau * vp.re;
        let w: Vec<Complex64> = (0..m).map(|i| p[i] - kk * v[i]).collect();
        for i in 0..m {
            for j in 0..m {
                a[k + 1 + i][k + 1 + j] -= v[i] * w[j].conj() + w[i] * v[j].conj();
            }
        }
        sub[k] = norm;
    }
    let d = (0..n).map(|i| a[i][i].re).collect();
    let mut eig = tridiagonal_eigenvalues(d, &sub);
    eig.sort_by(f64::total_cmp);
    eig
}

/// Implicit QL with Wilkinson shifts on a real symmetric tridiagonal matrix
/// given by its diagonal `d` and subdiagonal `e`.
pub fn tridiagonal_eigenvalues(mut d: Vec<f64>, e: &[f64]) -> Vec<f64> {
    let n = d.len();
    if n == 0 {
        return d;
    }
    let mut e: Vec<f64> = e.iter().copied().chain(std::iter::once(0.0)).take(n).collect();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 200, "QL iteration failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    d
}

/// Cyclic complex Jacobi. Slow but simple; used to cross-check the
/// tridiagonal path. Stops when the off-diagonal Frobenius norm drops below
/// `tol` relative to the full norm.
#[allow(clippy::needless_range_loop)]
pub fn jacobi_eigenvalues(mut a: Vec<Vec<Complex64>>, tol: f64) -> Vec<f64> {
    let n = a.len();
    let frob = |a: &Vec<Vec<Complex64>>, off_only: bool| -> f64 {
        let mut s = 0.0;
        for (i, row) in a.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                if !off_only || i != j {
                    s += z.norm_sqr();
                }
            }
        }
        s.sqrt()
    };
    let scale = frob(&a, false).max(1.0);
    for _sweep in 0..100 {
        if frob(&a, true) <= tol * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                // Rotate the phase of column/row q so that a_pq becomes real.
                let ph = apq.conj() / mag;
                for r in 0..n {
                    a[r][q] *= ph;
                    a[q][r] *= ph.conj();
                }
                let app = a[p][p].re;
                let aqq = a[q][q].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r][p];
                    let arq = a[r][q];
                    a[r][p] = c * arp - s * arq;
                    a[r][q] = s * arp + c * arq;
                    a[p][r] = a[r][p].conj();
                    a[q][r] = a[r][q].conj();
                }
                a[p][p] = Complex64::new(app - t * mag, 0.0);
                a[q][q] = Complex64::new(aqq + t * mag, 0.0);
                a[p][q] = ZERO;
                a[q][p] = ZERO;
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i].re).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// LU factorization of a band matrix with partial pivoting. Rows are kept
/// as column slices so that fill-in from pivoting just extends them.
#[derive(Clone, Debug)]
pub struct BandLu {
    n: usize,
    bw: usize,
    /// `(first column, values)` of each row of `U`.
    upper: Vec<(usize, Vec<Complex64>)>,
    /// Multipliers of step `i` for rows `i+1 ..= i+bw` (in row order at that step).
    lower: Vec<Vec<Complex64>>,
    pivots: Vec<usize>,
}

impl BandLu {
    /// Fails with the index of the first zero pivot.
    pub fn factor(m: &BandMatrix) -> Result<BandLu, usize> {
        let n = m.dim();
        let bw = m.bandwidth();
        let mut rows: Vec<(usize, Vec<Complex64>)> = (0..n)
            .map(|i| {
                let r = m.row_range(i);
                (r.start, r.clone().map(|j| m.get(i, j)).collect())
            })
            .collect();
        let at = |row: &(usize, Vec<Complex64>), j: usize| -> Complex64 {
            j.checked_sub(row.0).and_then(|o| row.1.get(o).copied()).unwrap_or(ZERO)
        };
        let mut lower = Vec::with_capacity(n);
        let mut pivots = Vec::with_capacity(n);
        for i in 0..n {
            let last = (i + bw).min(n - 1);
            let piv =
                (i..=last).max_by(|&a, &b| at(&rows[a], i).norm().total_cmp(&at(&rows[b], i).norm())).unwrap_or(i);
            let pv = at(&rows[piv], i);
            if pv == ZERO {
                return Err(i);
            }
            rows.swap(i, piv);
            pivots.push(piv);
            let (head, tail) = rows.split_at_mut(i + 1);
            let prow = &head[i];
            let mut mult = Vec::with_capacity(last - i);
            for row in tail.iter_mut().take(last - i) {
                let f = at(row, i) / pv;
                mult.push(f);
                if f == ZERO {
                    continue;
                }
                let end = prow.0 + prow.1.len();
                if row.0 + row.1.len() < end {
                    row.1.resize(end - row.0, ZERO);
                }
                for j in i..end {
                    let pj = at(prow, j);
                    row.1[j - row.0] -= f * pj;
                }
            }
            lower.push(mult);
        }
        Ok(BandLu { n, bw, upper: rows, lower, pivots })
    }

    pub fn solve(&self, b: &mut [Complex64]) {
        assert_eq!(b.len(), self.n);
        for i in 0..self.n {
            b.swap(i, self.pivots[i]);
            for (o, f) in self.lower[i].iter().enumerate() {
                let bi = b[i];
                b[i + 1 + o] -= f * bi;
            }
        }
        for i in (0..self.n).rev() {
            let (start, vals) = &self.upper[i];
            let mut acc = b[i];
            for (o, u) in vals.iter().enumerate() {
                let j = start + o;
                if j > i {
                    acc -= u * b[j];
                }
            }
            b[i] = acc / vals[i - start];
        }
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn tridiagonal_known_spectrum() {
        // Path graph Laplacian-like matrix: eigenvalues 2 - 2cos(kπ/(n+1)).
        let n = 12;
        let eig = tridiagonal_eigenvalues(vec![2.0; n], &vec![-1.0; n - 1]);
        for (k, e) in eig.iter().enumerate() {
            let want = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((e - want).abs() < 1e-12, "{e} vs {want}");
        }
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn householder_matches_jacobi() {
        let n = 9;
        let mut a = vec![vec![ZERO; n]; n];
        for i in 0..n {
            a[i][i] = c(i as f64 - 3.0, 0.0);
            for j in i + 1..n {
                let z = c(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64 - 1.0);
                a[i][j] = z;
                a[j][i] = z.conj();
            }
        }
        let h = dense_hermitian_eigenvalues(a.clone());
        let j = jacobi_eigenvalues(a, 1e-12);
        for (x, y) in h.iter().zip(&j) {
            assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
    }

    #[test]
    fn band_lu_solves() {
        let n = 20;
        let mut m = BandMatrix::zeros(n, 2);
        for i in 0..n {
            for j in m.row_range(i) {
                let v = if i == j { 0.5 } else { 1.0 + (i + 2 * j) as f64 * 0.1 };
                m.set(i, j, c(v, (i as f64 - j as f64) * 0.3));
            }
        }
        let lu = BandLu::factor(&m).unwrap();
        let x: Vec<Complex64> = (0..n).map(|i| c(i as f64, 1.0)).collect();
        let mut b: Vec<Complex64> = (0..n).map(|i| m.row_range(i).map(|j| m.get(i, j) * x[j]).sum()).collect();
        lu.solve(&mut b);
        for (u, v) in b.iter().zip(&x) {
            assert!((u - v).norm() < 1e-10);
        }
    }

    #[test]
    fn singular_band_matrix_reports_pivot() {
        let m = BandMatrix::zeros(3, 1);
        assert_eq!(BandLu::factor(&m).unwrap_err(), 0);
    }
}
