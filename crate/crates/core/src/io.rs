//! CSV and JSON file formats.
//!
//! * lattice vectors: header `j,value`, one row per site;
//! * harmonic series: header `j,v0,v1,…,vN`, rows are sites, columns harmonics;
//! * sweep curves: header `delta,profile_norm,eps_abs`;
//! * reports and solution metadata: pretty-printed JSON.
//!
//! Floats are written in shortest round-trip exponent form, so every file
//! re-loads to bit-identical values.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::dynamics::ScalingReport;
use crate::error::{Error, Result};
use crate::harmonics::{HarmonicSeries, SeriesNorm};
use crate::lattice::Grid;
use crate::solver::BreatherSolution;

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{}: {e}", path.display()))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| io_err(path, e))?;
    }
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &to_json(value)?)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read_text(path)?).map_err(|e| io_err(path, e))
}

fn parse_f64(field: &str, line: usize) -> Result<f64> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: bad number {field:?}")))
}

fn rows(text: &str, header: &str) -> Result<Vec<Vec<f64>>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == header => {}
        other => {
            return Err(Error::Parse(format!(
                "expected header {header:?}, found {other:?}"
            )));
        }
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(k, l)| l.split(',').map(|f| parse_f64(f, k + 2)).collect())
        .collect()
}

pub fn vector_csv(u: &[f64], grid: &Grid) -> String {
    let mut s = String::from("j,value\n");
    for (j, x) in grid.sites().zip(u) {
        let _ = writeln!(s, "{j},{x:e}");
    }
    s
}

pub fn parse_vector_csv(text: &str) -> Result<(Grid, Vec<f64>)> {
    let rows = rows(text, "j,value")?;
    if rows.iter().any(|r| r.len() != 2) {
        return Err(Error::Parse("vector CSV rows need two fields".into()));
    }
    let grid = grid_from_sites(rows.iter().map(|r| r[0]))?;
    Ok((grid, rows.into_iter().map(|r| r[1]).collect()))
}

fn grid_from_sites(sites: impl Iterator<Item = f64>) -> Result<Grid> {
    let sites: Vec<f64> = sites.collect();
    if sites.len().is_multiple_of(2) {
        return Err(Error::Parse(format!("{} sites is not 2J+1", sites.len())));
    }
    let grid = Grid::new(sites.len() / 2)?;
    if grid.sites().zip(&sites).any(|(j, s)| j as f64 != *s) {
        return Err(Error::Parse("site column must run -J..=J".into()));
    }
    Ok(grid)
}

pub fn series_csv(v: &HarmonicSeries) -> String {
    let mut s = String::from("j");
    for n in 0..=v.n_max() {
        let _ = write!(s, ",v{n}");
    }
    s.push('\n');
    for (i, j) in v.grid().sites().enumerate() {
        let _ = write!(s, "{j}");
        for c in v.coeffs() {
            let _ = write!(s, ",{:e}", c[i]);
        }
        s.push('\n');
    }
    s
}

pub fn parse_series_csv(text: &str) -> Result<HarmonicSeries> {
    let header = text.lines().next().unwrap_or_default().trim().to_string();
    let columns = header.split(',').count();
    if columns < 2 {
        return Err(Error::Parse(
            "series CSV needs at least one harmonic".into(),
        ));
    }
    let expected: String = std::iter::once("j".to_string())
        .chain((0..columns - 1).map(|n| format!("v{n}")))
        .collect::<Vec<_>>()
        .join(",");
    let rows = rows(text, &expected)?;
    if rows.iter().any(|r| r.len() != columns) {
        return Err(Error::Parse("ragged series CSV".into()));
    }
    let grid = grid_from_sites(rows.iter().map(|r| r[0]))?;
    let coeffs = (1..columns)
        .map(|c| rows.iter().map(|r| r[c]).collect())
        .collect();
    HarmonicSeries::from_coeffs(grid, coeffs)
}

pub fn sweep_csv(report: &ScalingReport) -> String {
    let mut s = String::from("delta,profile_norm,eps_abs\n");
    for ((d, p), e) in report
        .deltas
        .iter()
        .zip(&report.profile_norms)
        .zip(&report.eps_values)
    {
        let _ = writeln!(s, "{d:e},{p:e},{e:e}");
    }
    s
}

pub fn parse_sweep_csv(text: &str) -> Result<Vec<[f64; 3]>> {
    rows(text, "delta,profile_norm,eps_abs")?
        .into_iter()
        .map(|r| {
            <[f64; 3]>::try_from(r).map_err(|_| Error::Parse("sweep rows need three fields".into()))
        })
        .collect()
}

/// JSON half of a serialized solution: everything except the lattice
/// vectors, which go to CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionMeta {
    pub delta: f64,
    pub m: f64,
    pub p: u32,
    pub e: f64,
    pub epsilon: f64,
    pub energy: f64,
    pub omega: f64,
    pub n_max: usize,
    pub half_width: usize,
    pub norm: SeriesNorm,
    pub iterations: usize,
    pub final_update_norm: f64,
    pub fixed_point_residual: f64,
    pub max_overlap: f64,
    pub tail_norm: Option<f64>,
    pub update_history: Vec<f64>,
    pub contraction_ratio: f64,
}

/// Writes `<stem>.json`, `<stem>_series.csv` and `<stem>_phi.csv`.
pub fn write_solution(dir: &Path, stem: &str, sol: &BreatherSolution) -> Result<()> {
    let meta = SolutionMeta {
        delta: sol.delta,
        m: sol.m,
        p: sol.p,
        e: sol.e,
        epsilon: sol.epsilon,
        energy: sol.energy,
        omega: sol.omega,
        n_max: sol.series.n_max(),
        half_width: sol.series.grid().half_width(),
        norm: sol.norm,
        iterations: sol.iterations,
        final_update_norm: sol.final_update_norm,
        fixed_point_residual: sol.fixed_point_residual,
        max_overlap: sol.max_overlap,
        tail_norm: sol.tail_norm,
        update_history: sol.update_history.clone(),
        contraction_ratio: sol.contraction_ratio,
    };
    write_json(&dir.join(format!("{stem}.json")), &meta)?;
    write_text(
        &dir.join(format!("{stem}_series.csv")),
        &series_csv(&sol.series),
    )?;
    write_text(
        &dir.join(format!("{stem}_phi.csv")),
        &vector_csv(&sol.phi, &sol.series.grid()),
    )
}

pub fn read_solution(dir: &Path, stem: &str) -> Result<BreatherSolution> {
    let meta: SolutionMeta = read_json(&dir.join(format!("{stem}.json")))?;
    let series = parse_series_csv(&read_text(&dir.join(format!("{stem}_series.csv")))?)?;
    let (grid, phi) = parse_vector_csv(&read_text(&dir.join(format!("{stem}_phi.csv")))?)?;
    if grid != series.grid() || series.n_max() != meta.n_max || grid.half_width() != meta.half_width
    {
        return Err(Error::Parse(format!(
            "solution files for {stem:?} disagree on shape"
        )));
    }
    Ok(BreatherSolution {
        delta: meta.delta,
        m: meta.m,
        p: meta.p,
        e: meta.e,
        epsilon: meta.epsilon,
        energy: meta.energy,
        omega: meta.omega,
        phi,
        series,
        norm: meta.norm,
        iterations: meta.iterations,
        final_update_norm: meta.final_update_norm,
        fixed_point_residual: meta.fixed_point_residual,
        max_overlap: meta.max_overlap,
        tail_norm: meta.tail_norm,
        update_history: meta.update_history,
        contraction_ratio: meta.contraction_ratio,
    })
}
