use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use breather_core::dynamics::{
    assemble_state, default_samples, integrate_verlet, log_spaced, naive_residual, pde_residual,
    scaling_sweep, LatticeEquation, ResidualReport, ScalingReport, TrajectoryReport,
};
use breather_core::io::{
    read_json, read_solution, sweep_csv, vector_csv, write_json, write_solution, write_text,
};
use breather_core::lattice::build_operator;
use breather_core::solver::solve_breather;
use breather_core::spectral::{
    check_nonresonance, decay_report, eigen_discrete, DecayReport, NonresonanceReport,
};
use breather_core::{Error, Grid, ModelParams};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

/// Why a subcommand did not succeed; each variant owns one exit code.
#[derive(Debug)]
pub enum Failure {
    Config(anyhow::Error),
    NoSpectrum(String),
    Resonant(String),
    Gate(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::NoSpectrum(_) => 2,
            Failure::Resonant(_) => 3,
            Failure::Gate(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(e) => write!(f, "error: {e:#}"),
            Failure::NoSpectrum(m) => write!(f, "spectral assumption failed: {m}"),
            Failure::Resonant(m) => write!(f, "nonresonance failed: {m}"),
            Failure::Gate(m) => write!(f, "gate failed: {m}"),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Config(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoDiscreteSpectrum | Error::MultipleEigenvalues(_) => {
                Failure::NoSpectrum(e.to_string())
            }
            Error::AssumptionViolated { .. } | Error::InvalidFrequency(_) => {
                Failure::Resonant(e.to_string())
            }
            Error::NoConvergence { .. } => Failure::Gate(format!("convergence: {e}")),
            other => Failure::Config(anyhow!(other)),
        }
    }
}

pub type Outcome = Result<(), Failure>;

pub struct Run {
    pub config: RunConfig,
    pub out: PathBuf,
}

fn grid(config: &RunConfig) -> Result<Grid, Failure> {
    Ok(Grid::new(config.lattice.half_width)?)
}

fn model(config: &RunConfig) -> Result<ModelParams, Failure> {
    Ok(ModelParams::from_potential(
        &config.potential,
        grid(config)?,
        config.m,
        config.p,
    )?)
}

fn gate(ok: bool, metric: &str, detail: String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failure::Gate(format!("{metric}: {detail}")))
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EigenSummary {
    pub e: f64,
    pub residual: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub eigenpairs: Vec<EigenSummary>,
    pub nonresonance: Option<NonresonanceReport>,
}

pub fn spectrum(ctx: &Run) -> Outcome {
    let g = grid(&ctx.config)?;
    let op = build_operator(&ctx.config.potential, &g)?;
    let pairs = eigen_discrete(&op)?;
    let mut report = SpectrumReport {
        eigenpairs: pairs
            .iter()
            .map(|p| EigenSummary {
                e: p.e,
                residual: p.residual,
            })
            .collect(),
        nonresonance: None,
    };
    let path = ctx.out.join("spectrum.json");
    if pairs.len() != 1 {
        write_json(&path, &report)?;
        return Err(if pairs.is_empty() {
            Error::NoDiscreteSpectrum
        } else {
            Error::MultipleEigenvalues(pairs.len())
        }
        .into());
    }
    let pair = &pairs[0];
    write_text(&ctx.out.join("phi.csv"), &vector_csv(&pair.phi, &g))?;
    let nonres = match check_nonresonance(pair.e, ctx.config.m) {
        Ok(r) => r,
        Err(e) => {
            write_json(&path, &report)?;
            return Err(e.into());
        }
    };
    let pass = nonres.pass;
    let resonant = nonres.resonant.clone();
    report.nonresonance = Some(nonres);
    write_json(&path, &report)?;
    println!(
        "e = {:.15}, nonresonance {}",
        pair.e,
        if pass { "pass" } else { "FAIL" }
    );
    if pass {
        Ok(())
    } else {
        Err(Failure::Resonant(format!(
            "harmonics {resonant:?} fall in [0, 4]"
        )))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveEntry {
    pub stem: String,
    pub delta: f64,
    pub converged: bool,
    pub message: Option<String>,
}

pub fn solve(ctx: &Run) -> Outcome {
    let params = model(&ctx.config)?;
    let opts = ctx.config.solver.options();
    let amps = ctx.config.solver.amplitudes();
    if amps.is_empty() {
        return Err(Failure::Config(anyhow!(
            "field `solver.delta`: no amplitude configured"
        )));
    }
    let sweep_mode = ctx.config.solver.deltas.is_some();
    let dir = ctx.out.join("solutions");
    let results: Vec<_> = amps
        .par_iter()
        .map(|&d| solve_breather(d, &params, &opts))
        .collect();

    let mut index = Vec::new();
    let mut summary =
        String::from("delta,status,epsilon,omega,iterations,final_update_norm,contraction_ratio\n");
    let mut first_error = None;
    for (k, (&delta, result)) in amps.iter().zip(results).enumerate() {
        let stem = format!("solution_{k:03}");
        match result {
            Ok(sol) => {
                write_solution(&dir, &stem, &sol)?;
                summary.push_str(&format!(
                    "{delta:e},converged,{:e},{:e},{},{:e},{:e}\n",
                    sol.epsilon,
                    sol.omega,
                    sol.iterations,
                    sol.final_update_norm,
                    sol.contraction_ratio
                ));
                index.push(SolveEntry {
                    stem,
                    delta,
                    converged: true,
                    message: None,
                });
            }
            Err(e) => {
                summary.push_str(&format!("{delta:e},failed,,,,,\n"));
                eprintln!("delta = {delta}: {e}");
                index.push(SolveEntry {
                    stem,
                    delta,
                    converged: false,
                    message: Some(e.to_string()),
                });
                first_error.get_or_insert(e);
            }
        }
    }
    write_json(&dir.join("index.json"), &index)?;
    write_text(&ctx.out.join("solve_summary.csv"), &summary)?;
    match first_error {
        Some(e) if !sweep_mode => Err(e.into()),
        _ => Ok(()),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SolutionValidation {
    pub stem: String,
    pub delta: f64,
    pub residual: ResidualReport,
    pub naive_residual: f64,
    pub naive_ratio: f64,
    pub trajectories: Vec<TrajectoryReport>,
    /// `max energy_drift / dt²` over the ladder.
    pub energy_constant: f64,
}

pub fn validate(ctx: &Run) -> Outcome {
    let params = model(&ctx.config)?;
    let dir = ctx.out.join("solutions");
    let index: Vec<SolveEntry> = read_json(&dir.join("index.json"))
        .map_err(|e| anyhow!(e))
        .context("run `solve` first")?;
    let v = &ctx.config.validation;
    let eq = LatticeEquation::new(&params);
    let mut reports = Vec::new();
    for entry in index.iter().filter(|e| e.converged) {
        let sol = read_solution(&dir, &entry.stem)?;
        if sol.phi.len() != params.grid.size() || sol.p != params.p {
            return Err(Failure::Config(anyhow!(
                "{} was solved with a different lattice or exponent than the config",
                entry.stem
            )));
        }
        let samples = v
            .n_samples
            .unwrap_or(default_samples(sol.p, sol.series.n_max()));
        let residual = pde_residual(&sol, &eq, samples)?;
        let naive = naive_residual(&params, sol.delta, samples)?.sup_residual;
        let (u0, v0) = assemble_state(&sol, 0.0);
        let period = 2.0 * std::f64::consts::PI / sol.omega;
        let trajectories = v
            .steps_per_period
            .iter()
            .map(|&n| integrate_verlet(&u0, &v0, &eq, period / n as f64, period))
            .collect::<Result<Vec<_>, _>>()?;
        let energy_constant = trajectories
            .iter()
            .map(|t| t.energy_drift / (t.dt * t.dt))
            .fold(0.0, f64::max);
        reports.push(SolutionValidation {
            stem: entry.stem.clone(),
            delta: sol.delta,
            naive_ratio: naive / residual.sup_residual.max(f64::MIN_POSITIVE),
            naive_residual: naive,
            residual,
            trajectories,
            energy_constant,
        });
    }
    write_json(&ctx.out.join("validate.json"), &reports)?;
    if reports.is_empty() {
        return Err(Failure::Config(anyhow!(
            "no converged solutions to validate"
        )));
    }
    for r in &reports {
        println!(
            "{}: residual {:.3e}, naive ratio {:.3e}, finest return error {:.3e}",
            r.stem,
            r.residual.sup_residual,
            r.naive_ratio,
            r.trajectories.last().map_or(f64::NAN, |t| t.return_error)
        );
        gate(
            r.residual.sup_residual <= v.max_residual,
            "sup_residual",
            format!(
                "{} = {:e} > {:e}",
                r.stem, r.residual.sup_residual, v.max_residual
            ),
        )?;
        gate(
            r.naive_ratio >= v.min_naive_ratio,
            "naive_ratio",
            format!("{} = {:e} < {:e}", r.stem, r.naive_ratio, v.min_naive_ratio),
        )?;
        let finest = r
            .trajectories
            .iter()
            .map(|t| t.return_error)
            .fold(f64::INFINITY, f64::min);
        gate(
            finest <= v.max_return_error,
            "return_error",
            format!("{} = {:e} > {:e}", r.stem, finest, v.max_return_error),
        )?;
    }
    Ok(())
}

/// Target exponent of `|E - e|`: `p - 1` for odd `p`, `2p - 2` for even.
pub fn epsilon_exponent(p: u32) -> f64 {
    if p % 2 == 1 {
        (p - 1) as f64
    } else {
        (2 * p - 2) as f64
    }
}

pub fn sweep(ctx: &Run) -> Outcome {
    let params = model(&ctx.config)?;
    let s = &ctx.config.sweep;
    let report: ScalingReport = scaling_sweep(
        &params,
        &log_spaced(s.lo, s.hi, s.count),
        &ctx.config.solver.options(),
    )?;
    write_json(&ctx.out.join("sweep.json"), &report)?;
    write_text(&ctx.out.join("sweep.csv"), &sweep_csv(&report))?;
    for (d, e) in &report.failures {
        eprintln!("delta = {d}: {e}");
    }
    let p = params.p as f64;
    let eps_target = epsilon_exponent(params.p);
    println!(
        "profile slope {:.4} (target {p}), epsilon slope {:.4} (target {eps_target})",
        report.profile_slope, report.eps_slope
    );
    gate(
        report.profile_slope >= p - s.slope_margin,
        "profile_slope",
        format!("{:.4} < {}", report.profile_slope, p - s.slope_margin),
    )?;
    gate(
        report.eps_slope >= eps_target - s.slope_margin,
        "eps_slope",
        format!("{:.4} < {}", report.eps_slope, eps_target - s.slope_margin),
    )
}

pub fn decay(ctx: &Run) -> Outcome {
    let g = grid(&ctx.config)?;
    let op = build_operator(&ctx.config.potential, &g)?;
    let pair = breather_core::spectral::certify_discrete(&op)?;
    let report: DecayReport = decay_report(&op, &pair, ctx.config.decay.a)?;
    write_json(&ctx.out.join("decay.json"), &report)?;
    write_text(&ctx.out.join("phi.csv"), &vector_csv(&pair.phi, &g))?;
    println!(
        "a_fit = {:.6}, e_a - e = {:.3e} at a = {:.4}, |B_a| = {:.4}",
        report.a_fit,
        report.e_a - pair.e,
        report.a_used,
        report.ba_norm
    );
    gate(
        report.a_fit > 0.0,
        "a_fit",
        format!("{} is not positive", report.a_fit),
    )?;
    gate(
        (report.e_a - pair.e).abs() <= ctx.config.decay.max_eigen_shift,
        "e_a",
        format!("|e_a - e| = {:e}", (report.e_a - pair.e).abs()),
    )
}

pub fn output_dir(config: &RunConfig, flag: Option<&Path>) -> PathBuf {
    flag.map(Path::to_path_buf)
        .unwrap_or_else(|| config.output.clone())
}
