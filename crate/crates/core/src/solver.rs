//! The harmonic-series fixed-point construction of the breather.
//!
//! With `Φ[z] = (z+z̄)φ + Σ_n (zⁿ+z̄ⁿ) v_n`, `i ż = √(e+ε+m²) z`, and
//! `w = 𝓜_p(|z|², Φ₀+v)` the harmonics of `Φ[z]^p`, the lattice equation
//! splits into
//!
//! ```text
//! ε = ⟨φ, w₁⟩
//! (H - e)   v₁  = ε v₁ - (1-Q) w₁
//! (H - λ_n) v_n = n² ε v_n - w_n,           n ≠ 1,  λ_n = n²(e+m²) - m²
//! ```
//!
//! which is iterated as `v ← ε(v)·𝓑v - 𝓐𝓟 w(v)`, where `𝓐` and `𝓑` apply
//! the resolvents `(H-λ_n)⁻¹` (times `n²` for `𝓑`) and the `n = 1`
//! resolvent acts on the orthogonal complement of `φ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::{HarmonicSeries, SeriesNorm};
use crate::lattice::{build_operator, dot, norm2, Grid, Potential, TridiagonalOperator};
use crate::linalg::{sturm_count, BorderedSolver, TridiagonalLu};
use crate::spectral::{
    certify_discrete, check_nonresonance, decay_rate, EigenPair, NonresonanceReport,
};

/// Model data shared by every solve: `H`, its bound state, `m` and `p`.
#[derive(Debug, Clone)]
pub struct ModelParams {
    pub m: f64,
    pub p: u32,
    pub e: f64,
    pub omega0: f64,
    pub phi: Vec<f64>,
    pub grid: Grid,
    pub op: TridiagonalOperator,
    pub nonresonance: NonresonanceReport,
    /// Fitted decay rate of `φ`, if the fit window was usable.
    pub phi_decay: Option<f64>,
}

impl ModelParams {
    pub fn new(op: TridiagonalOperator, pair: EigenPair, m: f64, p: u32) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidArgument(format!(
                "nonlinearity exponent must be >= 2 (got {p})"
            )));
        }
        if pair.phi.len() != op.dim() || op.dim().is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: op.dim(),
                got: pair.phi.len(),
            });
        }
        let grid = Grid::new(op.dim() / 2)?;
        let nonresonance = check_nonresonance(pair.e, m)?;
        if let Some(&n) = nonresonance.resonant.first() {
            return Err(Error::AssumptionViolated {
                n,
                lambda: nonresonance.lambda[n],
            });
        }
        let phi_decay = decay_rate(&pair.phi).ok().map(|f| f.a_fit);
        Ok(Self {
            m,
            p,
            e: pair.e,
            omega0: nonresonance.omega,
            phi: pair.phi,
            grid,
            op,
            nonresonance,
            phi_decay,
        })
    }

    /// Builds `H`, certifies its single discrete eigenvalue and checks
    /// nonresonance.
    pub fn from_potential(potential: &Potential, grid: Grid, m: f64, p: u32) -> Result<Self> {
        let op = build_operator(potential, &grid)?;
        let pair = certify_discrete(&op)?;
        Self::new(op, pair, m, p)
    }

    /// `λ_n = n²(e+m²) - m²`.
    pub fn shift(&self, n: usize) -> f64 {
        self.nonresonance.shift(n)
    }

    /// Default spatial weight: half the fitted decay rate of `φ`.
    pub fn default_weight(&self) -> f64 {
        self.phi_decay.map_or(0.0, |a| 0.5 * a.max(0.0))
    }
}

/// `(H - λ)⁻¹`, optionally restricted to the orthogonal complement of `φ`.
#[derive(Debug, Clone)]
pub enum Resolvent {
    Definite {
        lambda: f64,
        lu: TridiagonalLu,
    },
    Deflated {
        lambda: f64,
        phi: Vec<f64>,
        solver: BorderedSolver,
    },
}

impl Resolvent {
    /// `deflate = Some(φ)` solves on `φ^⊥`; `λ` must then be the eigenvalue
    /// belonging to `φ`.
    pub fn new(op: &TridiagonalOperator, lambda: f64, deflate: Option<&[f64]>) -> Result<Self> {
        if !op.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        match deflate {
            Some(phi) => Ok(Resolvent::Deflated {
                lambda,
                phi: phi.to_vec(),
                solver: BorderedSolver::new(op, lambda, phi)?,
            }),
            None => {
                let tau = 1e-8 * (1.0 + lambda.abs());
                if sturm_count(op, lambda - tau) != sturm_count(op, lambda + tau) {
                    return Err(Error::SingularShift(lambda));
                }
                let lu = TridiagonalLu::factor(&op.shifted(lambda))
                    .map_err(|_| Error::SingularShift(lambda))?;
                Ok(Resolvent::Definite { lambda, lu })
            }
        }
    }

    pub fn lambda(&self) -> f64 {
        match self {
            Resolvent::Definite { lambda, .. } | Resolvent::Deflated { lambda, .. } => *lambda,
        }
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        match self {
            Resolvent::Definite { lu, .. } => Ok(lu.solve(rhs)),
            Resolvent::Deflated { phi, solver, .. } => {
                let overlap = dot(rhs, phi);
                if overlap.abs() > 1e-10 * norm2(rhs).max(1.0) {
                    return Err(Error::NonOrthogonalRhs(overlap));
                }
                let mut x = solver.solve(rhs);
                let drift = dot(&x, phi);
                x.iter_mut().zip(phi).for_each(|(xi, p)| *xi -= drift * p);
                Ok(x)
            }
        }
    }
}

/// One-shot `(H - λ)x = rhs`.
pub fn resolvent_solve(
    op: &TridiagonalOperator,
    lambda: f64,
    rhs: &[f64],
    deflate: Option<&[f64]>,
) -> Result<Vec<f64>> {
    Resolvent::new(op, lambda, deflate)?.solve(rhs)
}

/// `Q u = ⟨u, φ⟩ φ` removed from `u`.
fn remove_component(u: &mut [f64], phi: &[f64]) {
    let c = dot(u, phi);
    u.iter_mut().zip(phi).for_each(|(x, p)| *x -= c * p);
}

/// `𝓟v`: projects `v₁` onto `φ^⊥`, leaving the other harmonics alone.
pub fn project_p(v: &HarmonicSeries, phi: &[f64]) -> HarmonicSeries {
    let mut out = v.clone();
    if out.n_max() >= 1 {
        remove_component(out.coeff_mut(1), phi);
    }
    out
}

/// The fixed-point map at a fixed order and modulus.
#[derive(Debug, Clone)]
pub struct BreatherMap<'a> {
    params: &'a ModelParams,
    resolvents: Vec<Resolvent>,
    phi0: HarmonicSeries,
    zsq: f64,
}

impl<'a> BreatherMap<'a> {
    pub fn new(params: &'a ModelParams, n_max: usize, zsq: f64) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidArgument(
                "harmonic order must be at least 1".into(),
            ));
        }
        let resolvents = (0..=n_max)
            .map(|n| {
                let lambda = params.shift(n);
                if n == 1 {
                    Resolvent::new(&params.op, params.e, Some(&params.phi))
                } else if (0.0..=4.0).contains(&lambda) {
                    Err(Error::AssumptionViolated { n, lambda })
                } else {
                    Resolvent::new(&params.op, lambda, None)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            params,
            resolvents,
            phi0: HarmonicSeries::phi0(params.grid, &params.phi, n_max)?,
            zsq,
        })
    }

    pub fn n_max(&self) -> usize {
        self.resolvents.len() - 1
    }

    pub fn zsq(&self) -> f64 {
        self.zsq
    }

    pub fn resolvent(&self, n: usize) -> &Resolvent {
        &self.resolvents[n]
    }

    /// `w = 𝓜_p(|z|², Φ₀ + v)`.
    pub fn nonlinearity(&self, v: &HarmonicSeries) -> Result<HarmonicSeries> {
        self.phi0.axpy(1.0, v)?.power(self.params.p, self.zsq)
    }

    /// `ε = ⟨φ, w₁⟩`.
    pub fn epsilon_of(&self, v: &HarmonicSeries) -> Result<f64> {
        Ok(dot(&self.params.phi, self.nonlinearity(v)?.coeff(1)))
    }

    /// `𝓐u`: componentwise resolvents.
    pub fn apply_a(&self, u: &HarmonicSeries) -> Result<HarmonicSeries> {
        let coeffs = self
            .resolvents
            .iter()
            .enumerate()
            .map(|(n, r)| r.solve(u.coeff(n)))
            .collect::<Result<Vec<_>>>()?;
        HarmonicSeries::from_coeffs(u.grid(), coeffs)
    }

    /// `𝓑u = 𝓐{n² u_n}`.
    pub fn apply_b(&self, u: &HarmonicSeries) -> Result<HarmonicSeries> {
        let coeffs = self
            .resolvents
            .iter()
            .enumerate()
            .map(|(n, r)| {
                let scaled: Vec<f64> = u.coeff(n).iter().map(|x| (n * n) as f64 * x).collect();
                r.solve(&scaled)
            })
            .collect::<Result<Vec<_>>>()?;
        HarmonicSeries::from_coeffs(u.grid(), coeffs)
    }

    /// `Φ(|z|², v) = ε(v)·𝓑v - 𝓐𝓟 w(v)`, together with `ε(v)`.
    pub fn apply(&self, v: &HarmonicSeries) -> Result<(HarmonicSeries, f64)> {
        let w = self.nonlinearity(v)?;
        let epsilon = dot(&self.params.phi, w.coeff(1));
        let forced = self.apply_a(&project_p(&w, &self.params.phi))?;
        let shifted = self.apply_b(v)?;
        Ok((shifted.scaled(epsilon).axpy(-1.0, &forced)?, epsilon))
    }

    /// `max_n ‖(H - λ_n) u_n‖₂`. For a Picard step `u = Φ(v) - v` this is
    /// the size of the split equation's residual at `v`, which the weighted
    /// series norm under-reports on high harmonics.
    pub fn graph_norm(&self, u: &HarmonicSeries) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (n, r) in self.resolvents.iter().enumerate() {
            worst = worst.max(norm2(
                &self.params.op.shifted(r.lambda()).apply(u.coeff(n))?,
            ));
        }
        Ok(worst)
    }

    /// Per-harmonic residuals of the split lattice equation, plus
    /// `|ε - ⟨φ, w₁⟩|` as the last entry. Independent of how the map is
    /// arranged.
    pub fn equation_residuals(&self, v: &HarmonicSeries, epsilon: f64) -> Result<Vec<f64>> {
        let params = self.params;
        let w = self.nonlinearity(v)?;
        let mut out = Vec::with_capacity(self.n_max() + 2);
        for n in 0..=self.n_max() {
            let lambda = if n == 1 { params.e } else { params.shift(n) };
            let lhs = params.op.shifted(lambda).apply(v.coeff(n))?;
            let mut wn = w.coeff(n).to_vec();
            if n == 1 {
                remove_component(&mut wn, &params.phi);
            }
            let nsq = if n == 1 { 1.0 } else { (n * n) as f64 };
            let r: Vec<f64> = lhs
                .iter()
                .zip(v.coeff(n))
                .zip(&wn)
                .map(|((l, x), wi)| l - nsq * epsilon * x + wi)
                .collect();
            out.push(norm2(&r));
        }
        out.push((epsilon - dot(&params.phi, w.coeff(1))).abs());
        Ok(out)
    }
}

/// Free-function form of `Φ(|z|², v)`.
pub fn phi_map(v: &HarmonicSeries, params: &ModelParams, zsq: f64) -> Result<HarmonicSeries> {
    Ok(BreatherMap::new(params, v.n_max(), zsq)?.apply(v)?.0)
}

/// Free-function form of `ε(|z|², v) = ⟨φ, 𝓜_p(|z|², Φ₀+v)₁⟩`.
pub fn epsilon_of(v: &HarmonicSeries, params: &ModelParams, zsq: f64) -> Result<f64> {
    BreatherMap::new(params, v.n_max(), zsq)?.epsilon_of(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOptions {
    /// Harmonic truncation; `None` means `4p`.
    pub n_max: Option<usize>,
    pub tol: f64,
    pub max_iter: usize,
    /// Spatial weight of the convergence norm; `None` means half the
    /// fitted decay rate of `φ`.
    pub a: Option<f64>,
    /// Radius of the convergence norm; `None` means `2δ`.
    pub r: Option<f64>,
    /// Re-solve at `n_max + 4` and record the drift as `tail_norm`.
    pub tail_check: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            n_max: None,
            tol: 1e-12,
            max_iter: 200,
            a: None,
            r: None,
            tail_check: true,
        }
    }
}

impl SolverOptions {
    pub fn order(&self, p: u32) -> usize {
        self.n_max.unwrap_or(4 * p as usize)
    }

    pub fn norm(&self, params: &ModelParams, delta: f64) -> Result<SeriesNorm> {
        let r = self.r.unwrap_or(2.0 * delta);
        // δ = 0 has no natural radius; fall back to an unweighted harmonic sum.
        let r = if r > 0.0 { r } else { 1.0 };
        SeriesNorm::new(self.a.unwrap_or_else(|| params.default_weight()), r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreatherSolution {
    pub delta: f64,
    pub m: f64,
    pub p: u32,
    pub e: f64,
    pub epsilon: f64,
    /// `E = e + ε`.
    pub energy: f64,
    /// `ω = √(E + m²)`.
    pub omega: f64,
    pub phi: Vec<f64>,
    pub series: HarmonicSeries,
    pub norm: SeriesNorm,
    pub iterations: usize,
    pub final_update_norm: f64,
    /// `‖v - Φ(v)‖_{a,r}` recomputed after the loop.
    pub fixed_point_residual: f64,
    /// Largest `|⟨v₁, φ⟩|` seen over the iteration.
    pub max_overlap: f64,
    /// Change of the fixed point when the order is raised by 4.
    pub tail_norm: Option<f64>,
    pub update_history: Vec<f64>,
    /// Geometric mean ratio of successive updates over the last few steps.
    pub contraction_ratio: f64,
}

impl BreatherSolution {
    /// Coefficients of the full profile: `φ + v₁` at `n = 1`, `v_n` otherwise.
    pub fn profile(&self) -> HarmonicSeries {
        let mut s = self.series.clone();
        s.coeff_mut(1)
            .iter_mut()
            .zip(&self.phi)
            .for_each(|(x, p)| *x += p);
        s
    }
}

fn contraction_ratio(history: &[f64]) -> f64 {
    let tail: Vec<f64> = history
        .iter()
        .rev()
        .take(4)
        .copied()
        .filter(|u| *u > 0.0)
        .collect();
    if tail.len() < 2 {
        return 0.0;
    }
    ((tail[0] / tail[tail.len() - 1]).ln() / (tail.len() - 1) as f64).exp()
}

fn iterate(
    map: &BreatherMap<'_>,
    norm: SeriesNorm,
    opts: &SolverOptions,
) -> Result<(HarmonicSeries, Vec<f64>, f64)> {
    let params = map.params;
    let mut v = HarmonicSeries::zeros(params.grid, map.n_max());
    let mut history = Vec::new();
    let mut max_overlap: f64 = 0.0;
    for _ in 0..opts.max_iter {
        let (next, _) = map.apply(&v)?;
        let step = next.axpy(-1.0, &v)?;
        let update = step.norm(norm);
        max_overlap = max_overlap.max(dot(next.coeff(1), &params.phi).abs());
        history.push(update);
        v = next;
        if !update.is_finite() || update > 1e8 {
            break;
        }
        if update < opts.tol && map.graph_norm(&step)? < opts.tol {
            return Ok((v, history, max_overlap));
        }
    }
    Err(Error::NoConvergence {
        iterations: history.len(),
        last_update: history.last().copied().unwrap_or(f64::NAN),
        ratio: contraction_ratio(&history),
    })
}

/// Picard iteration of `v ← Φ(δ², v)` from `v = 0`. Stops once a step is
/// below `tol` both in `‖·‖_{a,r}` and in [`BreatherMap::graph_norm`].
pub fn solve_breather(
    delta: f64,
    params: &ModelParams,
    opts: &SolverOptions,
) -> Result<BreatherSolution> {
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "amplitude must be non-negative (got {delta})"
        )));
    }
    let zsq = delta * delta;
    let norm = opts.norm(params, delta)?;
    let map = BreatherMap::new(params, opts.order(params.p), zsq)?;
    let (v, history, max_overlap) = iterate(&map, norm, opts)?;

    let (again, epsilon) = map.apply(&v)?;
    let fixed_point_residual = again.axpy(-1.0, &v)?.norm(norm);

    let tail_norm = if opts.tail_check {
        let wide = BreatherMap::new(params, map.n_max() + 4, zsq)?;
        let (w, _, _) = iterate(&wide, norm, opts)?;
        Some(w.axpy(-1.0, &v.with_order(wide.n_max()))?.norm(norm))
    } else {
        None
    };

    let energy = params.e + epsilon;
    Ok(BreatherSolution {
        delta,
        m: params.m,
        p: params.p,
        e: params.e,
        epsilon,
        energy,
        omega: (energy + params.m * params.m).sqrt(),
        phi: params.phi.clone(),
        series: v,
        norm,
        iterations: history.len(),
        final_update_norm: *history.last().expect("at least one iteration"),
        fixed_point_residual,
        max_overlap,
        tail_norm,
        contraction_ratio: contraction_ratio(&history),
        update_history: history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};

    fn reference() -> ModelParams {
        ModelParams::from_potential(
            &Potential::repulsive(5f64.sqrt()),
            Grid::new(60).unwrap(),
            1.0,
            3,
        )
        .unwrap()
    }

    #[test]
    fn projection_properties() {
        let params = reference();
        let p0 = HarmonicSeries::phi0(params.grid, &params.phi, 4).unwrap();
        let z = project_p(&p0, &params.phi);
        assert!(z.coeffs().iter().flatten().all(|x| x.abs() < 1e-15));

        let mut v = HarmonicSeries::zeros(params.grid, 4);
        for n in 0..=4 {
            for (i, x) in v.coeff_mut(n).iter_mut().enumerate() {
                *x = ((i * (n + 1)) as f64 * 0.13).sin();
            }
        }
        let once = project_p(&v, &params.phi);
        let twice = project_p(&once, &params.phi);
        assert!(once
            .axpy(-1.0, &twice)
            .unwrap()
            .coeffs()
            .iter()
            .flatten()
            .all(|x| x.abs() < 1e-15));
        assert_eq!(once.coeff(0), v.coeff(0));
        assert!(dot(once.coeff(1), &params.phi).abs() < 1e-15);
        assert_eq!(project_p(&once, &params.phi).coeff(2), once.coeff(2));
    }

    #[test]
    fn epsilon_special_cases() {
        let params = reference();
        let zsq = 0.01;
        let zero = HarmonicSeries::zeros(params.grid, 12);
        let quartic: f64 = params.phi.iter().map(|x| x.powi(4)).sum();
        let eps = epsilon_of(&zero, &params, zsq).unwrap();
        assert!((eps - 3.0 * zsq * quartic).abs() < 1e-15);

        let minus = HarmonicSeries::phi0(params.grid, &params.phi, 12)
            .unwrap()
            .scaled(-1.0);
        assert_eq!(epsilon_of(&minus, &params, zsq).unwrap(), 0.0);

        let even = ModelParams::new(
            params.op.clone(),
            EigenPair {
                e: params.e,
                phi: params.phi.clone(),
                residual: 0.0,
            },
            1.0,
            2,
        )
        .unwrap();
        assert_eq!(
            epsilon_of(&HarmonicSeries::zeros(params.grid, 8), &even, 0.3).unwrap(),
            0.0
        );
    }

    #[test]
    fn resolvent_paths() {
        let params = reference();
        let m = params.m;
        let b = params.grid.unit(0);
        let x = resolvent_solve(&params.op, -m * m, &b, None).unwrap();
        let back = params.op.shifted(-m * m).apply(&x).unwrap();
        for (p, q) in back.iter().zip(&b) {
            assert!((p - q).abs() < 1e-12);
        }

        let mut psi: Vec<f64> = (0..params.grid.size())
            .map(|i| ((i * i) as f64 * 0.01).cos())
            .collect();
        remove_component(&mut psi, &params.phi);
        let x = resolvent_solve(&params.op, params.e, &psi, Some(&params.phi)).unwrap();
        assert!(dot(&x, &params.phi).abs() < 1e-14);
        let back = params.op.shifted(params.e).apply(&x).unwrap();
        let err = back
            .iter()
            .zip(&psi)
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");

        assert!(matches!(
            resolvent_solve(&params.op, params.e, &psi, None),
            Err(Error::SingularShift(_))
        ));
        assert!(matches!(
            resolvent_solve(&params.op, params.e, &params.phi, Some(&params.phi)),
            Err(Error::NonOrthogonalRhs(_))
        ));
    }

    #[test]
    fn first_iterate_harmonic_content() {
        let params = reference();
        let zero = HarmonicSeries::zeros(params.grid, 12);
        let at = |zsq: f64| -> Vec<usize> {
            let out = phi_map(&zero, &params, zsq).unwrap();
            (0..=12)
                .filter(|&n| out.coeff(n).iter().any(|x| x.abs() > 0.0))
                .collect()
        };
        assert_eq!(at(0.01), vec![1, 3]);
        assert_eq!(at(0.0), vec![3]);
    }

    #[test]
    fn resolvent_decay_with_harmonic_index() {
        let params = reference();
        let map = BreatherMap::new(&params, 12, 0.0).unwrap();
        let u: Vec<f64> = params.phi.iter().map(|x| x.powi(3)).collect();
        let mut constant: f64 = 0.0;
        for n in (0..=12).filter(|&n| n != 1) {
            let x = map.resolvent(n).solve(&u).unwrap();
            constant = constant.max(norm2(&x) * ((1 + n) * (1 + n)) as f64 / norm2(&u));
        }
        assert!(constant < 10.0, "measured constant {constant}");
    }

    #[test]
    fn zero_amplitude_leading_harmonic_matches_dense_solve() {
        let params = reference();
        let sol = solve_breather(0.0, &params, &SolverOptions::default()).unwrap();
        let lambda = params.shift(3);
        let dense = params.op.to_dense()
            - DMatrix::<f64>::identity(params.grid.size(), params.grid.size()) * lambda;
        let rhs = DVector::from_iterator(params.grid.size(), params.phi.iter().map(|x| -x.powi(3)));
        let x = dense.lu().solve(&rhs).unwrap();
        for (a, b) in sol.series.coeff(3).iter().zip(x.iter()) {
            assert!((a - b).abs() < 1e-13);
        }
        assert_eq!(sol.epsilon, 0.0);
    }

    #[test]
    fn reference_convergence() {
        let params = reference();
        let sol = solve_breather(0.05, &params, &SolverOptions::default()).unwrap();
        assert!(sol.iterations <= 30, "{} iterations", sol.iterations);
        assert!(sol.update_history.windows(2).all(|w| w[1] < w[0]));
        assert!(sol.max_overlap < 1e-13);
        assert!(sol.fixed_point_residual < 1e-12);
        assert!((sol.omega * sol.omega - sol.energy - 1.0).abs() < 1e-14);
        let map = BreatherMap::new(&params, sol.series.n_max(), 0.0025).unwrap();
        let res = map.equation_residuals(&sol.series, sol.epsilon).unwrap();
        assert!(res.iter().all(|r| *r < 1e-11), "{res:?}");
    }

    #[test]
    fn large_amplitude_fails() {
        let params = reference();
        assert!(matches!(
            solve_breather(5.0, &params, &SolverOptions::default()),
            Err(Error::NoConvergence { .. })
        ));
    }

    #[test]
    fn resonant_model_is_rejected() {
        let grid = Grid::new(60).unwrap();
        let err =
            ModelParams::from_potential(&Potential::attractive(5f64.sqrt()), grid, 2f64.sqrt(), 3)
                .unwrap_err();
        assert!(matches!(err, Error::AssumptionViolated { n: 2, .. }));
    }

    #[test]
    fn solves_are_deterministic() {
        let params = reference();
        let a = solve_breather(0.04, &params, &SolverOptions::default()).unwrap();
        let b = solve_breather(0.04, &params, &SolverOptions::default()).unwrap();
        assert_eq!(a, b);
    }
}
