//! Python bindings: `Model` wraps a lattice operator with its bound state,
//! `Solution` a converged breather.

use breather_core::dynamics::{
    assemble_profile, assemble_state, default_samples, integrate_verlet, naive_residual,
    pde_residual, LatticeEquation,
};
use breather_core::lattice::WellSign;
use breather_core::solver::solve_breather;
use breather_core::spectral::{
    certify_discrete, check_nonresonance as nonresonance, decay_report, NonresonanceReport,
};
use breather_core::{BreatherSolution, Error, Grid, ModelParams, Potential, SolverOptions};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(
    breather,
    AssumptionError,
    PyValueError,
    "The spectral or nonresonance assumption fails."
);
create_exception!(
    breather,
    ConvergenceError,
    PyRuntimeError,
    "The fixed-point iteration did not converge."
);

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::NoDiscreteSpectrum
        | Error::MultipleEigenvalues(_)
        | Error::AssumptionViolated { .. }
        | Error::InvalidFrequency(_) => AssumptionError::new_err(msg),
        Error::NoConvergence { .. } | Error::ContractionDiverged(_) | Error::BlowUp(_) => {
            ConvergenceError::new_err(msg)
        }
        _ => PyValueError::new_err(msg),
    }
}

fn report_dict<'py>(py: Python<'py>, r: &NonresonanceReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("e", r.e)?;
    d.set_item("m", r.m)?;
    d.set_item("omega", r.omega)?;
    d.set_item("lambda", r.lambda.clone())?;
    d.set_item("n_stop", r.n_stop)?;
    d.set_item("resonant", r.resonant.clone())?;
    d.set_item("pass", r.pass)?;
    Ok(d)
}

/// Tabulate `λ_n = n²(m²+e) - m²` and test it against the band `[0, 4]`.
#[pyfunction]
fn check_nonresonance<'py>(py: Python<'py>, e: f64, m: f64) -> PyResult<Bound<'py, PyDict>> {
    report_dict(py, &nonresonance(e, m).map_err(to_py)?)
}

#[pyclass(frozen)]
struct Model {
    params: ModelParams,
}

impl Model {
    fn build(potential: Potential, m: f64, p: u32, half_width: usize) -> PyResult<Self> {
        let grid = Grid::new(half_width).map_err(to_py)?;
        let params = ModelParams::from_potential(&potential, grid, m, p).map_err(to_py)?;
        Ok(Self { params })
    }
}

#[pymethods]
impl Model {
    /// `V = ∓κ δ₀`, `sign` is `"attractive"` or `"repulsive"`.
    #[staticmethod]
    #[pyo3(signature = (kappa, sign="repulsive", m=1.0, p=3, half_width=60))]
    fn single_site(kappa: f64, sign: &str, m: f64, p: u32, half_width: usize) -> PyResult<Self> {
        let sign = match sign {
            "attractive" => WellSign::Attractive,
            "repulsive" => WellSign::Repulsive,
            other => return Err(PyValueError::new_err(format!("unknown sign {other:?}"))),
        };
        Self::build(Potential::SingleSite { kappa, sign }, m, p, half_width)
    }

    /// Potential given site by site, centred on 0 (odd length).
    #[staticmethod]
    #[pyo3(signature = (values, m=1.0, p=3, half_width=60))]
    fn from_table(values: Vec<f64>, m: f64, p: u32, half_width: usize) -> PyResult<Self> {
        Self::build(Potential::Table { values }, m, p, half_width)
    }

    #[getter]
    fn e(&self) -> f64 {
        self.params.e
    }

    #[getter]
    fn m(&self) -> f64 {
        self.params.m
    }

    #[getter]
    fn p(&self) -> u32 {
        self.params.p
    }

    #[getter]
    fn omega0(&self) -> f64 {
        self.params.omega0
    }

    #[getter]
    fn phi(&self) -> Vec<f64> {
        self.params.phi.clone()
    }

    /// Lattice sites `-J..=J` matching the entries of `phi`.
    #[getter]
    fn sites(&self) -> Vec<i64> {
        self.params.grid.sites().collect()
    }

    fn nonresonance<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        report_dict(py, &self.params.nonresonance)
    }

    /// Decay fit of `φ` and the conjugated eigenvalue at weight `a`.
    #[pyo3(signature = (a=None))]
    fn decay<'py>(&self, py: Python<'py>, a: Option<f64>) -> PyResult<Bound<'py, PyDict>> {
        let pair = certify_discrete(&self.params.op).map_err(to_py)?;
        let r = decay_report(&self.params.op, &pair, a).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("a_fit", r.a_fit)?;
        d.set_item("fit_range", r.fit_range)?;
        d.set_item("fit_residual", r.fit_residual)?;
        d.set_item("e_a", r.e_a)?;
        d.set_item("a_used", r.a_used)?;
        d.set_item("ba_norm", r.ba_norm)?;
        Ok(d)
    }

    #[pyo3(signature = (delta, tol=1e-12, n_max=None, max_iter=200, tail_check=true))]
    fn solve(
        &self,
        delta: f64,
        tol: f64,
        n_max: Option<usize>,
        max_iter: usize,
        tail_check: bool,
    ) -> PyResult<Solution> {
        let opts = SolverOptions {
            n_max,
            tol,
            max_iter,
            tail_check,
            ..SolverOptions::default()
        };
        let sol = solve_breather(delta, &self.params, &opts).map_err(to_py)?;
        Ok(Solution {
            params: self.params.clone(),
            sol,
        })
    }

    /// Sup-residual of the linear-mode guess `δ(z+z̄)φ` alone.
    #[pyo3(signature = (delta, n_samples=None))]
    fn naive_residual(&self, delta: f64, n_samples: Option<usize>) -> PyResult<f64> {
        let n = n_samples.unwrap_or(default_samples(self.params.p, 4 * self.params.p as usize));
        Ok(naive_residual(&self.params, delta, n)
            .map_err(to_py)?
            .sup_residual)
    }
}

#[pyclass(frozen)]
struct Solution {
    params: ModelParams,
    sol: BreatherSolution,
}

#[pymethods]
impl Solution {
    #[getter]
    fn delta(&self) -> f64 {
        self.sol.delta
    }

    #[getter]
    fn epsilon(&self) -> f64 {
        self.sol.epsilon
    }

    #[getter]
    fn energy(&self) -> f64 {
        self.sol.energy
    }

    #[getter]
    fn omega(&self) -> f64 {
        self.sol.omega
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.sol.iterations
    }

    #[getter]
    fn update_history(&self) -> Vec<f64> {
        self.sol.update_history.clone()
    }

    #[getter]
    fn fixed_point_residual(&self) -> f64 {
        self.sol.fixed_point_residual
    }

    #[getter]
    fn tail_norm(&self) -> Option<f64> {
        self.sol.tail_norm
    }

    /// Correction coefficients `v_0..v_N`, one list per harmonic.
    #[getter]
    fn series(&self) -> Vec<Vec<f64>> {
        self.sol.series.coeffs().to_vec()
    }

    /// Lattice field `u` at time `t`.
    fn field(&self, t: f64) -> Vec<f64> {
        assemble_profile(&self.sol.profile(), self.sol.delta, self.sol.omega, t).0
    }

    /// Sup over one period of `‖u_tt + Hu + m²u + uᵖ‖_∞`.
    #[pyo3(signature = (n_samples=None))]
    fn residual(&self, n_samples: Option<usize>) -> PyResult<f64> {
        let n = n_samples.unwrap_or(default_samples(self.sol.p, self.sol.series.n_max()));
        let eq = LatticeEquation::new(&self.params);
        Ok(pde_residual(&self.sol, &eq, n).map_err(to_py)?.sup_residual)
    }

    /// One period of velocity Verlet with `dt = T / steps`.
    fn verlet<'py>(&self, py: Python<'py>, steps: usize) -> PyResult<Bound<'py, PyDict>> {
        if steps == 0 {
            return Err(PyValueError::new_err("steps must be positive"));
        }
        let period = 2.0 * std::f64::consts::PI / self.sol.omega;
        let (u0, v0) = assemble_state(&self.sol, 0.0);
        let eq = LatticeEquation::new(&self.params);
        let r = integrate_verlet(&u0, &v0, &eq, period / steps as f64, period).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("dt", r.dt)?;
        d.set_item("period", r.period)?;
        d.set_item("steps", r.steps)?;
        d.set_item("return_error", r.return_error)?;
        d.set_item("energy_drift", r.energy_drift)?;
        Ok(d)
    }
}

#[pymodule]
fn breather(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(check_nonresonance, m)?)?;
    m.add_class::<Model>()?;
    m.add_class::<Solution>()?;
    m.add("AssumptionError", m.py().get_type::<AssumptionError>())?;
    m.add("ConvergenceError", m.py().get_type::<ConvergenceError>())?;
    Ok(())
}
