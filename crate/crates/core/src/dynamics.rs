//! Checks of a constructed breather against the lattice equation
//! `u_tt + Hu + m²u + u^p = 0`: the residual of the exact trigonometric
//! profile, Störmer–Verlet time integration over one period, and the
//! small-amplitude scaling laws.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::HarmonicSeries;
use crate::lattice::{dot, norm2, norm_inf, weighted_norm, TridiagonalOperator};
use crate::solver::{solve_breather, BreatherSolution, ModelParams, SolverOptions};

const BLOW_UP: f64 = 1e6;

/// Right-hand side of the lattice equation. `p = None` drops the
/// nonlinearity.
#[derive(Debug, Clone)]
pub struct LatticeEquation {
    pub op: TridiagonalOperator,
    pub m: f64,
    pub p: Option<u32>,
}

impl LatticeEquation {
    pub fn new(params: &ModelParams) -> Self {
        Self {
            op: params.op.clone(),
            m: params.m,
            p: Some(params.p),
        }
    }

    pub fn linear(params: &ModelParams) -> Self {
        Self {
            p: None,
            ..Self::new(params)
        }
    }

    /// `Hu + m²u + u^p`.
    pub fn stiffness(&self, u: &[f64], out: &mut [f64]) {
        self.op.apply_into(u, out);
        let msq = self.m * self.m;
        for (o, x) in out.iter_mut().zip(u) {
            *o += msq * x;
            if let Some(p) = self.p {
                *o += x.powi(p as i32);
            }
        }
    }

    /// `½Σu_t² + ½⟨u, Hu⟩ + ½m²Σu² + Σu^{p+1}/(p+1)`; with Dirichlet
    /// truncation `⟨u, Hu⟩ = Σ|u(j+1)-u(j)|² + ΣVu²`.
    pub fn energy(&self, u: &[f64], ut: &[f64]) -> f64 {
        let mut hu = vec![0.0; u.len()];
        self.op.apply_into(u, &mut hu);
        let kinetic = 0.5 * dot(ut, ut);
        let quadratic = 0.5 * dot(u, &hu) + 0.5 * self.m * self.m * dot(u, u);
        let anharmonic = self.p.map_or(0.0, |p| {
            u.iter().map(|x| x.powi(p as i32 + 1)).sum::<f64>() / (p + 1) as f64
        });
        kinetic + quadratic + anharmonic
    }

    /// Gershgorin bound on the largest linear frequency.
    fn max_frequency(&self) -> f64 {
        let n = self.op.dim();
        let radius = (0..n)
            .map(|i| {
                let lo = if i > 0 {
                    self.op.lower[i - 1].abs()
                } else {
                    0.0
                };
                let up = if i + 1 < n {
                    self.op.upper[i].abs()
                } else {
                    0.0
                };
                self.op.diag[i] + lo + up
            })
            .fold(0.0, f64::max);
        (radius + self.m * self.m).max(0.0).sqrt()
    }
}

/// `u = Σ 2δⁿ cos(nωt) P_n` and its time derivative, for profile
/// coefficients `P`.
pub fn assemble_profile(
    profile: &HarmonicSeries,
    delta: f64,
    omega: f64,
    t: f64,
) -> (Vec<f64>, Vec<f64>) {
    let dim = profile.grid().size();
    let mut u = vec![0.0; dim];
    let mut ut = vec![0.0; dim];
    for (n, c) in profile.coeffs().iter().enumerate() {
        let freq = n as f64 * omega;
        let amp = 2.0 * delta.powi(n as i32);
        let (s, co) = (freq * t).sin_cos();
        for i in 0..dim {
            u[i] += amp * co * c[i];
            ut[i] -= amp * freq * s * c[i];
        }
    }
    (u, ut)
}

/// State of `Φ[z(t)]` with `z(t) = δ e^{-iωt}`.
pub fn assemble_state(sol: &BreatherSolution, t: f64) -> (Vec<f64>, Vec<f64>) {
    assemble_profile(&sol.profile(), sol.delta, sol.omega, t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// `max_t ‖u_tt + Hu + m²u + u^p‖_∞` over the sampled times.
    pub sup_residual: f64,
    pub samples: usize,
    pub delta: f64,
    pub n_max: usize,
}

/// Default sample count: `4·p·N + 1`.
pub fn default_samples(p: u32, n_max: usize) -> usize {
    4 * p as usize * n_max + 1
}

/// Residual of a trigonometric profile oscillating at `omega`, sampled
/// at `n_samples` equispaced times over one period.
pub fn profile_residual(
    profile: &HarmonicSeries,
    delta: f64,
    omega: f64,
    eq: &LatticeEquation,
    n_samples: usize,
) -> Result<ResidualReport> {
    if n_samples == 0 || !(omega > 0.0) {
        return Err(Error::InvalidArgument(
            "residual sampling needs n_samples > 0 and omega > 0".into(),
        ));
    }
    let period = 2.0 * std::f64::consts::PI / omega;
    let dim = profile.grid().size();
    let sup = (0..n_samples)
        .into_par_iter()
        .map(|k| {
            let t = period * k as f64 / n_samples as f64;
            let mut u = vec![0.0; dim];
            let mut utt = vec![0.0; dim];
            for (n, c) in profile.coeffs().iter().enumerate() {
                let freq = n as f64 * omega;
                let w = 2.0 * delta.powi(n as i32) * (freq * t).cos();
                for i in 0..dim {
                    u[i] += w * c[i];
                    utt[i] -= freq * freq * w * c[i];
                }
            }
            let mut rest = vec![0.0; dim];
            eq.stiffness(&u, &mut rest);
            norm_inf(
                &utt.iter()
                    .zip(&rest)
                    .map(|(a, b)| a + b)
                    .collect::<Vec<_>>(),
            )
        })
        .reduce(|| 0.0, f64::max);
    Ok(ResidualReport {
        sup_residual: sup,
        samples: n_samples,
        delta,
        n_max: profile.n_max(),
    })
}

pub fn pde_residual(
    sol: &BreatherSolution,
    eq: &LatticeEquation,
    n_samples: usize,
) -> Result<ResidualReport> {
    profile_residual(&sol.profile(), sol.delta, sol.omega, eq, n_samples)
}

/// Residual of the bare linear mode `2δ cos(ω₀t) φ` in the nonlinear
/// equation; the defect the correction series has to remove.
pub fn naive_residual(
    params: &ModelParams,
    delta: f64,
    n_samples: usize,
) -> Result<ResidualReport> {
    let profile = HarmonicSeries::phi0(params.grid, &params.phi, 1)?;
    profile_residual(
        &profile,
        delta,
        params.omega0,
        &LatticeEquation::new(params),
        n_samples,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryReport {
    pub dt: f64,
    pub period: f64,
    pub steps: usize,
    /// `‖u(T)-u(0)‖₂ + ‖u_t(T)-u_t(0)‖₂`.
    pub return_error: f64,
    pub energy_drift: f64,
}

/// Velocity-form Störmer–Verlet over `[0, T]`. The step is adjusted down
/// to `T/⌈T/dt⌉` so the final state lands on `T`.
pub fn integrate_verlet(
    u0: &[f64],
    v0: &[f64],
    eq: &LatticeEquation,
    dt: f64,
    period: f64,
) -> Result<TrajectoryReport> {
    let dim = eq.op.dim();
    if u0.len() != dim || v0.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: u0.len().min(v0.len()),
        });
    }
    if !(dt > 0.0) || !(period > 0.0) {
        return Err(Error::InvalidArgument("dt and T must be positive".into()));
    }
    let steps = (period / dt).ceil() as usize;
    let h = period / steps as f64;
    if h * eq.max_frequency() >= 0.5 {
        return Err(Error::InvalidArgument(format!(
            "time step {h} exceeds the stability heuristic dt·ω_max < 0.5"
        )));
    }
    let mut u = u0.to_vec();
    let mut v = v0.to_vec();
    let mut acc = vec![0.0; dim];
    eq.stiffness(&u, &mut acc);
    let e0 = eq.energy(&u, &v);
    let mut drift: f64 = 0.0;
    for _ in 0..steps {
        for i in 0..dim {
            v[i] -= 0.5 * h * acc[i];
            u[i] += h * v[i];
        }
        eq.stiffness(&u, &mut acc);
        for i in 0..dim {
            v[i] -= 0.5 * h * acc[i];
        }
        let size = norm_inf(&u).max(norm_inf(&v));
        if !size.is_finite() || size > BLOW_UP {
            return Err(Error::BlowUp(BLOW_UP));
        }
        drift = drift.max((eq.energy(&u, &v) - e0).abs());
    }
    let du: Vec<f64> = u.iter().zip(u0).map(|(a, b)| a - b).collect();
    let dv: Vec<f64> = v.iter().zip(v0).map(|(a, b)| a - b).collect();
    Ok(TrajectoryReport {
        dt: h,
        period,
        steps,
        return_error: norm2(&du) + norm2(&dv),
        energy_drift: drift,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub deltas: Vec<f64>,
    /// `sup_θ ‖Φ[z] - (z+z̄)φ‖_{l_e^a}`.
    pub profile_norms: Vec<f64>,
    /// `|E(δ²) - e|`.
    pub eps_values: Vec<f64>,
    pub profile_slope: f64,
    pub eps_slope: f64,
    /// Amplitudes that failed to converge, with the error message.
    pub failures: Vec<(f64, String)>,
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Weighted norm of the correction `Σ (zⁿ+z̄ⁿ) v_n`, maximised over
/// `n_theta` equispaced phases.
pub fn correction_norm(sol: &BreatherSolution, a: f64, n_theta: usize) -> f64 {
    let grid = sol.series.grid();
    (0..n_theta.max(1))
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n_theta.max(1) as f64;
            weighted_norm(&sol.series.evaluate(theta, sol.delta), &grid, a)
        })
        .fold(0.0, f64::max)
}

/// Solves at each amplitude (in parallel) and fits the scaling exponents
/// of the profile correction and of the frequency shift.
pub fn scaling_sweep(
    params: &ModelParams,
    deltas: &[f64],
    opts: &SolverOptions,
) -> Result<ScalingReport> {
    if deltas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument(
            "sweep amplitudes must be strictly increasing".into(),
        ));
    }
    let weight = opts.a.unwrap_or_else(|| params.default_weight());
    let n_theta = default_samples(params.p, opts.order(params.p));
    let results: Vec<_> = deltas
        .par_iter()
        .map(|&d| {
            solve_breather(d, params, opts)
                .map(|s| (correction_norm(&s, weight, n_theta), s.epsilon.abs()))
        })
        .collect();
    let mut report = ScalingReport {
        deltas: Vec::new(),
        profile_norms: Vec::new(),
        eps_values: Vec::new(),
        profile_slope: f64::NAN,
        eps_slope: f64::NAN,
        failures: Vec::new(),
    };
    for (&d, r) in deltas.iter().zip(results) {
        match r {
            Ok((profile, eps)) => {
                report.deltas.push(d);
                report.profile_norms.push(profile);
                report.eps_values.push(eps);
            }
            Err(e) => report.failures.push((d, e.to_string())),
        }
    }
    report.profile_slope = loglog_slope(&report.deltas, &report.profile_norms);
    report.eps_slope = loglog_slope(&report.deltas, &report.eps_values);
    Ok(report)
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| (lo.ln() + (hi.ln() - lo.ln()) * k as f64 / (n - 1) as f64).exp())
            .collect(),
    }
}

/// `max_j |u(j) - u(-j)|`.
pub fn parity_defect(u: &[f64]) -> f64 {
    u.iter()
        .zip(u.iter().rev())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}
