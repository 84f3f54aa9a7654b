//! Discrete spectrum of `H`, the nonresonance certificate, and the
//! exponential-weight conjugation `T_a H T_a⁻¹` used to quantify decay of
//! the bound state.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{dot, norm2, Grid, TridiagonalOperator};
use crate::linalg::{symmetric_tridiagonal_eigen, BorderedSolver, TridiagonalLu};

/// Eigenvalues within this distance of the band `[0, 4]` are treated as
/// band states.
pub const GAP_TOL: f64 = 1e-6;
/// Minimal fraction of `‖φ‖²` on `|j| ≤ J/2` for a localized state.
pub const LOCALIZATION_MASS: f64 = 0.999;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub e: f64,
    pub phi: Vec<f64>,
    /// `‖Hφ - eφ‖₂`.
    pub residual: f64,
}

fn grid_of(op: &TridiagonalOperator) -> Result<Grid> {
    if op.dim().is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "operator dimension {} is not 2J+1",
            op.dim()
        )));
    }
    Grid::new(op.dim() / 2)
}

/// Eigenpairs of a truncated `H` that belong to the discrete spectrum of
/// the infinite problem: value outside `[GAP_TOL, 4 - GAP_TOL]` and an
/// eigenvector concentrated on the inner half of the grid.
pub fn eigen_discrete(op: &TridiagonalOperator) -> Result<Vec<EigenPair>> {
    let grid = grid_of(op)?;
    let (values, vectors) = symmetric_tridiagonal_eigen(op)?;
    let inner = grid.half_width() as i64 / 2;
    let mut pairs = Vec::new();
    for (k, &e) in values.iter().enumerate() {
        if (GAP_TOL..=4.0 - GAP_TOL).contains(&e) {
            continue;
        }
        let mut phi: Vec<f64> = vectors.column(k).iter().copied().collect();
        let total = dot(&phi, &phi);
        let central: f64 = grid
            .sites()
            .zip(&phi)
            .filter(|(j, _)| j.abs() <= inner)
            .map(|(_, x)| x * x)
            .sum();
        if central < LOCALIZATION_MASS * total {
            continue;
        }
        let scale = norm2(&phi);
        let peak = phi
            .iter()
            .copied()
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(1.0);
        let sign = if peak < 0.0 { -1.0 } else { 1.0 };
        phi.iter_mut().for_each(|x| *x *= sign / scale);
        let hphi = op.apply(&phi)?;
        let residual = hphi
            .iter()
            .zip(&phi)
            .map(|(h, x)| (h - e * x).powi(2))
            .sum::<f64>()
            .sqrt();
        pairs.push(EigenPair { e, phi, residual });
    }
    Ok(pairs)
}

/// The single simple discrete eigenvalue the construction runs on.
pub fn certify_discrete(op: &TridiagonalOperator) -> Result<EigenPair> {
    let mut pairs = eigen_discrete(op)?;
    match pairs.len() {
        0 => Err(Error::NoDiscreteSpectrum),
        1 => Ok(pairs.pop().expect("one pair")),
        k => Err(Error::MultipleEigenvalues(k)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonresonanceReport {
    pub m: f64,
    pub e: f64,
    pub omega: f64,
    /// `λ_n = n²ω² - m²` for `n = 0..=n_stop`.
    pub lambda: Vec<f64>,
    pub n_stop: usize,
    /// Harmonics with `λ_n ∈ [0, 4]`.
    pub resonant: Vec<usize>,
    pub pass: bool,
}

impl NonresonanceReport {
    pub fn shift(&self, n: usize) -> f64 {
        (n * n) as f64 * (self.m * self.m + self.e) - self.m * self.m
    }
}

/// Checks `n²ω² - m² ∉ [0, 4]` for every `n ≥ 0`. Since `λ_n` increases
/// with `n`, enumerating up to the first `λ_n > 4` covers all harmonics.
pub fn check_nonresonance(e: f64, m: f64) -> Result<NonresonanceReport> {
    if !(m > 0.0) || !e.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "need m > 0 and finite e (m = {m}, e = {e})"
        )));
    }
    let omega_sq = m * m + e;
    if !(omega_sq > 0.0) {
        return Err(Error::InvalidFrequency(omega_sq));
    }
    let mut lambda = Vec::new();
    let mut resonant = Vec::new();
    let mut n = 0usize;
    loop {
        let l = (n * n) as f64 * omega_sq - m * m;
        lambda.push(l);
        if (0.0..=4.0).contains(&l) {
            resonant.push(n);
        }
        if l > 4.0 {
            break;
        }
        n += 1;
    }
    Ok(NonresonanceReport {
        m,
        e,
        omega: omega_sq.sqrt(),
        lambda,
        n_stop: n,
        pass: resonant.is_empty(),
        resonant,
    })
}

/// `T_a A T_a⁻¹` with `(T_a u)(j) = e^{a|j|} u(j)`. For `A = H` the
/// off-diagonals become `-e^{a(|j|-|j±1|)}`.
pub fn conjugated_operator(op: &TridiagonalOperator, a: f64) -> Result<TridiagonalOperator> {
    let grid = grid_of(op)?;
    let w = |i: usize| a * grid.site(i).unsigned_abs() as f64;
    let n = op.dim();
    let upper = (0..n - 1)
        .map(|i| op.upper[i] * (w(i) - w(i + 1)).exp())
        .collect();
    let lower = (0..n - 1)
        .map(|i| op.lower[i] * (w(i + 1) - w(i)).exp())
        .collect();
    TridiagonalOperator::new(op.diag.clone(), lower, upper)
}

/// `B_a = T_a H T_a⁻¹ - H`: zero diagonal, off-diagonals `1 - e^{a(|j|-|j±1|)}`
/// (times the original coupling).
pub fn conjugation_perturbation(op: &TridiagonalOperator, a: f64) -> Result<TridiagonalOperator> {
    let conj = conjugated_operator(op, a)?;
    let sub = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p - q).collect::<Vec<_>>();
    TridiagonalOperator::new(
        vec![0.0; op.dim()],
        sub(&conj.lower, &op.lower),
        sub(&conj.upper, &op.upper),
    )
}

/// Spectral norm of a (not necessarily symmetric) tridiagonal matrix.
pub fn operator_norm(op: &TridiagonalOperator) -> f64 {
    op.to_dense()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Apply `T_a` to a lattice vector.
pub fn weight(u: &[f64], a: f64) -> Vec<f64> {
    let half = (u.len() / 2) as i64;
    u.iter()
        .enumerate()
        .map(|(i, x)| x * (a * (i as i64 - half).unsigned_abs() as f64).exp())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugatedEigen {
    pub e_a: f64,
    pub phi_a: Vec<f64>,
    pub iterations: usize,
}

/// Eigenpair of `T_a H T_a⁻¹` nearest `e_ref`, by shifted inverse
/// iteration on the non-symmetric tridiagonal matrix.
pub fn conjugated_eigen(op: &TridiagonalOperator, a: f64, e_ref: f64) -> Result<ConjugatedEigen> {
    let conj = conjugated_operator(op, a)?;
    let n = conj.dim();
    let lu = TridiagonalLu::factor(&conj.shifted(e_ref))
        .or_else(|_| TridiagonalLu::factor(&conj.shifted(e_ref + 1e-12 * (1.0 + e_ref.abs()))))?;
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut iterations = 0;
    for it in 1..=100 {
        iterations = it;
        let mut y = lu.solve(&x);
        let scale = norm2(&y);
        if !scale.is_finite() || scale == 0.0 {
            return Err(Error::SingularShift(e_ref));
        }
        let sign = if dot(&y, &x) < 0.0 { -1.0 } else { 1.0 };
        y.iter_mut().for_each(|v| *v *= sign / scale);
        let change = y
            .iter()
            .zip(&x)
            .map(|(p, q)| (p - q).powi(2))
            .sum::<f64>()
            .sqrt();
        x = y;
        if change < 1e-14 {
            break;
        }
    }
    let ax = conj.apply(&x)?;
    let e_a = dot(&x, &ax) / dot(&x, &x);
    Ok(ConjugatedEigen {
        e_a,
        phi_a: x,
        iterations,
    })
}

/// The reduced fixed-point route: with `φ_a = φ + u`, `u ⊥ φ`, iterate
/// `u ← (H-e)⁻¹ P_c [(⟨B_a(φ+u), φ⟩ - B_a)(φ+u)]` and read off
/// `e_a = e + ⟨B_a(φ+u), φ⟩`.
pub fn conjugated_eigen_contraction(
    op: &TridiagonalOperator,
    a: f64,
    pair: &EigenPair,
    tol: f64,
    max_iter: usize,
) -> Result<ConjugatedEigen> {
    let ba = conjugation_perturbation(op, a)?;
    let resolvent = BorderedSolver::new(op, pair.e, &pair.phi)?;
    let phi = &pair.phi;
    let n = phi.len();
    let mut u = vec![0.0; n];
    let mut prev_update = f64::INFINITY;
    let mut full = phi.clone();
    for it in 1..=max_iter {
        let bf = ba.apply(&full)?;
        let shift = dot(&bf, phi);
        let mut rhs: Vec<f64> = full.iter().zip(&bf).map(|(f, b)| shift * f - b).collect();
        let overlap = dot(&rhs, phi);
        rhs.iter_mut().zip(phi).for_each(|(r, p)| *r -= overlap * p);
        let next = resolvent.solve(&rhs);
        let update = next
            .iter()
            .zip(&u)
            .map(|(p, q)| (p - q).powi(2))
            .sum::<f64>()
            .sqrt();
        u = next;
        full = phi.iter().zip(&u).map(|(p, q)| p + q).collect();
        if !update.is_finite()
            || (it > 3 && update > prev_update && update > 1e3 * tol)
            || norm2(&u) > 1e6
        {
            return Err(Error::ContractionDiverged(a));
        }
        prev_update = update;
        if update < tol {
            let bf = ba.apply(&full)?;
            return Ok(ConjugatedEigen {
                e_a: pair.e + dot(&bf, phi),
                phi_a: full,
                iterations: it,
            });
        }
    }
    Err(Error::ContractionDiverged(a))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub a_fit: f64,
    /// Smallest and largest `|j|` inside the fit window.
    pub fit_range: (u64, u64),
    /// RMS deviation of `log|u|` from the fitted line.
    pub fit_residual: f64,
}

/// Least-squares slope of `log|u(j)|` against `|j|` over the sites with
/// `|u(j)| ∈ [1e-12, 1e-2·max|u|]`.
pub fn decay_rate(u: &[f64]) -> Result<DecayFit> {
    let half = (u.len() / 2) as i64;
    let peak = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if peak == 0.0 {
        return Err(Error::FitWindowEmpty);
    }
    let points: Vec<(f64, f64)> = u
        .iter()
        .enumerate()
        .filter(|(_, x)| (1e-12..=1e-2 * peak).contains(&x.abs()))
        .map(|(i, x)| ((i as i64 - half).unsigned_abs() as f64, x.abs().ln()))
        .collect();
    let (lo, hi) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), (j, _)| {
            (l.min(*j), h.max(*j))
        });
    if points.len() < 2 || lo == hi {
        return Err(Error::FitWindowEmpty);
    }
    let k = points.len() as f64;
    let mean_j = points.iter().map(|p| p.0).sum::<f64>() / k;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sjj: f64 = points.iter().map(|p| (p.0 - mean_j).powi(2)).sum();
    let sjy: f64 = points.iter().map(|p| (p.0 - mean_j) * (p.1 - mean_y)).sum();
    let slope = sjy / sjj;
    let intercept = mean_y - slope * mean_j;
    let rms = (points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / k)
        .sqrt();
    Ok(DecayFit {
        a_fit: -slope,
        fit_range: (lo as u64, hi as u64),
        fit_residual: rms,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub a_fit: f64,
    pub fit_range: (u64, u64),
    pub fit_residual: f64,
    pub e_a: f64,
    pub a_used: f64,
    pub ba_norm: f64,
}

/// Decay fit of `φ` plus the conjugated eigenvalue at weight `a`
/// (defaults to half the fitted rate).
pub fn decay_report(
    op: &TridiagonalOperator,
    pair: &EigenPair,
    a: Option<f64>,
) -> Result<DecayReport> {
    let fit = decay_rate(&pair.phi)?;
    let a_used = a.unwrap_or(0.5 * fit.a_fit);
    let conj = conjugated_eigen(op, a_used, pair.e)?;
    let ba_norm = operator_norm(&conjugation_perturbation(op, a_used)?);
    Ok(DecayReport {
        a_fit: fit.a_fit,
        fit_range: fit.fit_range,
        fit_residual: fit.fit_residual,
        e_a: conj.e_a,
        a_used,
        ba_norm,
    })
}
