//! Truncated spectra, Weyl counting, residue calibration and the parametrix
//! check. Floating point lives here and nowhere else.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use super::{szego_commutes, CanonicalOperator, OperatorError, Parity, TruncatedMatrix};
use crate::algebra::GaussianRational;
use crate::linalg::{hermitian_eigenvalues, BandLu};
use crate::report::ExperimentReport;
use crate::symbol::{leading_symbol, LaurentSymbol, SymbolError};

/// Eigenvalues of the compression of an operator to the retained modes
/// `0..=N` (full) or `0, 2, …, 2N` (even), ascending.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pub parity: Parity,
    pub window: usize,
    pub eigenvalues: Vec<f64>,
    /// Eigenvalues below `N/2`, where truncation effects are negligible.
    pub reliable: Vec<bool>,
}

fn compression(a: &CanonicalOperator, n: usize, parity: Parity) -> TruncatedMatrix {
    TruncatedMatrix::compress(a, 0, parity.step(), n + 1)
}

fn check_self_adjoint(a: &CanonicalOperator, parity: Parity) -> Result<(), OperatorError> {
    // Entries of A − A* are polynomials in the column mode; they vanish on
    // all retained modes iff they vanish identically.
    let defect = a - &a.adjoint();
    let defect = match parity {
        Parity::Full => defect,
        Parity::Even => defect.even_part(),
    };
    if defect.is_zero() {
        Ok(())
    } else {
        Err(OperatorError::NotSelfAdjoint)
    }
}

pub fn projected_spectrum(a: &CanonicalOperator, n: usize, parity: Parity) -> Result<Spectrum, OperatorError> {
    if n < 1 {
        return Err(OperatorError::WindowTooSmall { window: n as i64, bandwidth: a.bandwidth() });
    }
    check_self_adjoint(a, parity)?;
    let eigenvalues = hermitian_eigenvalues(compression(a, n, parity).band());
    let cutoff = n as f64 / 2.0;
    let reliable = eigenvalues.iter().map(|&e| e < cutoff).collect();
    Ok(Spectrum { parity, window: n, eigenvalues, reliable })
}

const THETA_POINTS: usize = 512;

/// Angular profile `g(θ)` of a homogeneous symbol `g(θ)·s^m`, sampled on a
/// uniform grid. Fails unless `m ≥ 1` and `g` is real and positive.
fn elliptic_profile(a: &CanonicalOperator) -> Result<(i64, LaurentSymbol, Vec<f64>), OperatorError> {
    let sigma = leading_symbol(a).map_err(|e| match e {
        SymbolError::ZeroOperator => OperatorError::ZeroOperator,
        other => OperatorError::Invalid(other.to_string()),
    })?;
    let m = sigma.degree().expect("leading symbols are homogeneous");
    if m < 1 {
        return Err(OperatorError::NotElliptic(format!("order {m} < 1")));
    }
    let scale: f64 = sigma.modes().map(|(_, p)| p.eval_f64(1.0).norm()).sum();
    let mut g = Vec::with_capacity(THETA_POINTS);
    for j in 0..THETA_POINTS {
        let theta = 2.0 * PI * j as f64 / THETA_POINTS as f64;
        let z = sigma.eval_f64(1.0, theta);
        if z.im.abs() > 1e-12 * scale.max(1.0) || z.re <= 0.0 {
            return Err(OperatorError::NotElliptic(format!("σ(1, {theta:.4}) = {z}")));
        }
        g.push(z.re);
    }
    Ok((m, sigma, g))
}

/// `(1/2π) ∫ (λ/g(θ))^{1/m} dθ`, exact when `g` is constant.
fn weyl_prediction(lambda: f64, m: i64, g: &[f64]) -> f64 {
    let e = 1.0 / m as f64;
    g.iter().map(|gi| (lambda / gi).powf(e)).sum::<f64>() / g.len() as f64
}

/// Largest λ allowed on a Weyl grid: `min_θ σ(N/2, θ)`.
pub fn weyl_lambda_cap(a: &CanonicalOperator, n: usize) -> Result<f64, OperatorError> {
    let (m, _, g) = elliptic_profile(a)?;
    let gmin = g.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(gmin * (n as f64 / 2.0).powi(m as i32))
}

/// `points` equally spaced values in `(0, cap]`.
pub fn weyl_default_grid(a: &CanonicalOperator, n: usize, points: usize) -> Result<Vec<f64>, OperatorError> {
    let cap = weyl_lambda_cap(a, n)?;
    Ok((1..=points).map(|i| cap * i as f64 / points as f64).collect())
}

/// Compares the eigenvalue count `#{λ_i < λ}` of the full compression with
/// the cut-space volume `Leb{s ≥ 0 : σ(s, ·) < λ}` averaged over θ.
pub fn weyl_compare(a: &CanonicalOperator, n: usize, grid: &[f64]) -> Result<ExperimentReport, OperatorError> {
    if !szego_commutes(a, Parity::Full) {
        return Err(OperatorError::NotInCommutant(Parity::Full));
    }
    let (m, _, g) = elliptic_profile(a)?;
    let cap = weyl_lambda_cap(a, n)?;
    if let Some(bad) = grid.iter().find(|&&l| !(l > 0.0 && l <= cap * (1.0 + 1e-12))) {
        return Err(OperatorError::Invalid(format!("λ = {bad} outside (0, {cap}]")));
    }
    let spectrum = projected_spectrum(a, n, Parity::Full)?;
    let observed = grid.iter().map(|&l| spectrum.eigenvalues.partition_point(|&e| e < l) as f64).collect();
    let predicted = grid.iter().map(|&l| weyl_prediction(l, m, &g)).collect();
    let params = BTreeMap::from([
        ("window".to_string(), json!(n)),
        ("order".to_string(), json!(m)),
        ("lambda_max".to_string(), json!(cap)),
        ("grid".to_string(), json!(grid)),
    ]);
    let fitted = BTreeMap::from([("weyl_constant".to_string(), weyl_prediction(1.0, m, &g))]);
    Ok(ExperimentReport::new("weyl", params, observed, predicted, fitted))
}

/// `∫₀^{2π} σ(1, θ) dθ = 2π·c₀` for a symbol homogeneous of degree −1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContourResidue {
    /// The residue divided by `2π`: the mean value `c₀`.
    pub coefficient: GaussianRational,
}

impl ContourResidue {
    pub fn value(&self) -> Complex64 {
        self.coefficient.to_complex64() * (2.0 * PI)
    }
}

pub fn residue_contour(sigma: &LaurentSymbol) -> Result<ContourResidue, OperatorError> {
    match sigma.degree() {
        Some(-1) => {}
        found => return Err(OperatorError::WrongDegree { found }),
    }
    let c0 = sigma.homogeneous_coefficients().and_then(|c| c.get(&0).cloned()).unwrap_or_default();
    Ok(ContourResidue { coefficient: c0 })
}

/// Inclusive range of partial-sum lengths used by [`residue_log_fit`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FitRange {
    pub lo: usize,
    pub hi: usize,
}

const FIT_SAMPLES: usize = 64;

fn log_samples(range: FitRange) -> Vec<usize> {
    let (lo, hi) = (range.lo as f64, range.hi as f64);
    let mut out: Vec<usize> = (0..FIT_SAMPLES)
        .map(|i| {
            let t = i as f64 / (FIT_SAMPLES - 1) as f64;
            ((lo * (hi / lo).powf(t)).round() as usize).clamp(range.lo, range.hi)
        })
        .collect();
    out.dedup();
    out
}

/// Least-squares fit of `S(N') = Σ_{n ≤ N'} d_n` against `c·ln N' + b` at
/// log-spaced `N'` in the range; `diagonal[i]` is `d_{i+1}`. Reports
/// `residue = 2π·c`.
pub fn residue_log_fit(diagonal: &[f64], range: FitRange) -> Result<ExperimentReport, OperatorError> {
    if range.lo < 1 || range.hi < range.lo || range.hi > diagonal.len() {
        return Err(OperatorError::Invalid(format!(
            "fit range [{}, {}] not inside [1, {}]",
            range.lo,
            range.hi,
            diagonal.len()
        )));
    }
    let samples = log_samples(range);
    if samples.len() < 8 {
        return Err(OperatorError::FitRangeTooSmall { points: samples.len() });
    }
    let mut partial = Vec::with_capacity(range.hi);
    let mut acc = 0.0;
    for d in &diagonal[..range.hi] {
        acc += d;
        partial.push(acc);
    }
    let xs: Vec<f64> = samples.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|&n| partial[n - 1]).collect();
    let k = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / k;
    let ybar = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    let c = sxy / sxx;
    let b = ybar - c * xbar;
    let predicted = xs.iter().map(|x| c * x + b).collect();
    let params = BTreeMap::from([
        ("fit_range".to_string(), json!([range.lo, range.hi])),
        ("n".to_string(), json!(diagonal.len())),
        ("samples".to_string(), json!(samples.len())),
        ("grid".to_string(), json!(samples)),
    ]);
    let fitted = BTreeMap::from([("c".to_string(), c), ("b".to_string(), b), ("residue".to_string(), 2.0 * PI * c)]);
    Ok(ExperimentReport::new("residue-log-fit", params, ys, predicted, fitted))
}

/// Numerical inverse of a compression, compared with the identity and with
/// the diagonal symbol inverse `1/q₀(n)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParametrixCheck {
    pub window: usize,
    /// `‖AB − I‖∞` over the rows of modes `≤ N − 1`.
    pub identity_residual: f64,
    /// `max |B_nn − 1/q₀(n)|` over modes `≤ N − 1`.
    pub diagonal_error: f64,
}

#[allow(clippy::needless_range_loop)]
pub fn parametrix_check(a: &CanonicalOperator, n: usize) -> Result<ParametrixCheck, OperatorError> {
    if n < 2 {
        return Err(OperatorError::WindowTooSmall { window: n as i64, bandwidth: a.bandwidth() });
    }
    let m = compression(a, n, Parity::Full);
    let band = m.band();
    let dim = band.dim();
    let lu = BandLu::factor(band).map_err(OperatorError::Singular)?;
    // Columns of B = A⁻¹.
    let mut b = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for (j, col) in b.iter_mut().enumerate() {
        col[j] = Complex64::new(1.0, 0.0);
        lu.solve(col);
    }
    let bw = band.bandwidth();
    let mut identity_residual: f64 = 0.0;
    for i in 0..n {
        let mut row_sum = 0.0;
        for j in 0..dim {
            let mut z: Complex64 =
                (i.saturating_sub(bw)..(i + bw + 1).min(dim)).map(|k| band.get(i, k) * b[j][k]).sum();
            if i == j {
                z -= 1.0;
            }
            row_sum += z.norm();
        }
        identity_residual = identity_residual.max(row_sum);
    }
    let q0 = a.get(0).cloned().unwrap_or_default();
    let mut diagonal_error: f64 = 0.0;
    for (i, col) in b.iter().enumerate().take(n) {
        let sym = q0.eval_int(i as i64).to_complex64();
        if sym.norm() == 0.0 {
            return Err(OperatorError::Singular(i));
        }
        diagonal_error = diagonal_error.max((col[i] - sym.inv()).norm());
    }
    Ok(ParametrixCheck { window: n, identity_residual, diagonal_error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Polynomial;
    use crate::operator::Generator;

    #[test]
    fn spectrum_of_d() {
        let s = projected_spectrum(&Generator::D.operator(), 10, Parity::Full).unwrap();
        assert_eq!(s.eigenvalues, (0..=10).map(|n| n as f64).collect::<Vec<_>>());
        let s = projected_spectrum(&Generator::D.operator(), 10, Parity::Even).unwrap();
        assert_eq!(s.eigenvalues, (0..=10).map(|n| 2.0 * n as f64).collect::<Vec<_>>());
        assert!(s.reliable[2] && !s.reliable[3]);
    }

    #[test]
    fn non_self_adjoint_rejected() {
        let r = Generator::Raise.operator();
        assert_eq!(projected_spectrum(&r, 8, Parity::Full).unwrap_err(), OperatorError::NotSelfAdjoint);
        // Odd shifts never reach even modes.
        let a = &Generator::D.operator() + &r;
        assert!(projected_spectrum(&a, 8, Parity::Even).is_ok());
    }

    #[test]
    fn weyl_for_d() {
        let d = Generator::D.operator();
        let grid = weyl_default_grid(&d, 64, 40).unwrap();
        let r = weyl_compare(&d, 64, &grid).unwrap();
        assert!(r.max_residual <= 1.0);
        assert!(weyl_compare(&d, 64, &[100.0]).is_err());
    }

    #[test]
    fn contour_examples() {
        let one = GaussianRational::one();
        let s_inv = LaurentSymbol::monomial(0, one.clone(), -1);
        assert_eq!(residue_contour(&s_inv).unwrap().coefficient, one);
        let mean_zero = LaurentSymbol::monomial(1, one.clone(), -1);
        assert!(residue_contour(&mean_zero).unwrap().coefficient.is_zero());
        let mix = LaurentSymbol::homogeneous(-1, [(0, GaussianRational::from_integer(3)), (-2, one)]);
        assert!((residue_contour(&mix).unwrap().value().re - 6.0 * PI).abs() < 1e-12);
        assert!(matches!(
            residue_contour(&LaurentSymbol::monomial(0, GaussianRational::one(), 1)),
            Err(OperatorError::WrongDegree { found: Some(1) })
        ));
    }

    #[test]
    fn log_fit_small_ranges() {
        let d = vec![0.0; 100];
        let r = residue_log_fit(&d, FitRange { lo: 1, hi: 100 }).unwrap();
        assert_eq!(r.fitted["c"], 0.0);
        assert_eq!(
            residue_log_fit(&d, FitRange { lo: 10, hi: 14 }).unwrap_err(),
            OperatorError::FitRangeTooSmall { points: 5 }
        );
    }

    #[test]
    fn parametrix_of_shifted_d() {
        let a = CanonicalOperator::diagonal(Polynomial::from_integers(&[3, 1]));
        let p = parametrix_check(&a, 64).unwrap();
        assert!(p.identity_residual < 1e-12 && p.diagonal_error < 1e-14);
    }
}
