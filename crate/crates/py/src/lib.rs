//! Python bindings. Structured results are returned as plain dicts.

use std::f64::consts::PI;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use confined_willmore::bump::{self, compute_alpha_star, eta::EtaKind, BumpSpec};
use confined_willmore::identity::{report_with_residuals, verify_all_with};
use confined_willmore::io::{surface_from_json, surface_to_json};
use confined_willmore::neck;
use confined_willmore::probe::{self, ProbeConfig};
use confined_willmore::quadrature::Tolerance;
use confined_willmore::sweep::{area_grid, sweep_bounds};
use confined_willmore::RevolutionSurface;

create_exception!(confined_willmore_py, CwError, PyValueError);

fn err(e: confined_willmore::Error) -> PyErr {
    CwError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| CwError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A closed or open surface of revolution about the vertical axis.
#[pyclass(name = "Surface", module = "confined_willmore_py", skip_from_py_object)]
#[derive(Clone)]
pub struct PySurface {
    inner: RevolutionSurface,
}

#[pymethods]
impl PySurface {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        surface_from_json(text).map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (radius = 1.0, center_y = 0.0))]
    fn sphere(radius: f64, center_y: f64) -> Self {
        Self {
            inner: RevolutionSurface::sphere(radius, center_y),
        }
    }

    fn to_json(&self) -> String {
        surface_to_json(&self.inner)
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label.clone()
    }

    #[getter]
    fn closed(&self) -> bool {
        self.inner.is_closed()
    }

    /// Area, Willmore energy, curvature integrals and identity residuals.
    #[pyo3(signature = (tol = 1e-9))]
    fn report<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &report_with_residuals(&self.inner, Tolerance::uniform(tol)).map_err(err)?)
    }

    #[pyo3(signature = (tol = 1e-9))]
    fn verify<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &verify_all_with(&self.inner, Tolerance::uniform(tol)).map_err(err)?)
    }

    fn dilate(&self, factor: f64) -> PyResult<Self> {
        self.inner.dilate(factor).map(|inner| Self { inner }).map_err(err)
    }

    #[pyo3(signature = (per_segment = 64))]
    fn sample(&self, per_segment: usize) -> Vec<[f64; 2]> {
        self.inner.sample(per_segment)
    }

    fn __repr__(&self) -> String {
        format!("Surface(label={:?}, segments={})", self.inner.label, self.inner.segments().len())
    }
}

/// Neck parameters and closed-form energies at inner radius r.
#[pyfunction]
fn solve_neck<'py>(py: Python<'py>, r: f64) -> PyResult<Bound<'py, PyAny>> {
    let sol = neck::solve_neck(r).map_err(err)?;
    let energies = neck::closed_form_energies(&sol);
    to_py(py, &serde_json::json!({ "solution": sol, "energies": energies }))
}

#[pyfunction]
fn sigma_plus(r: f64) -> PyResult<PySurface> {
    let sol = neck::solve_neck(r).map_err(err)?;
    neck::build_sigma_plus(&sol).map(|inner| PySurface { inner }).map_err(err)
}

/// Two nested spheres joined by a neck, tuned to `area` (default 8π).
#[pyfunction]
#[pyo3(signature = (r, area = 8.0 * PI))]
fn double_sphere(r: f64, area: f64) -> PyResult<PySurface> {
    neck::build_double_sphere(r, area, None)
        .map(|n| PySurface { inner: n.surface })
        .map_err(err)
}

#[pyfunction]
fn alpha_star() -> f64 {
    compute_alpha_star(EtaKind::StdBump)
}

/// Unit sphere with an inward bump of scale s and amplitude alpha·s².
#[pyfunction]
#[pyo3(signature = (s, alpha = None))]
fn bump_surface(s: f64, alpha: Option<f64>) -> PyResult<PySurface> {
    let alpha = alpha.unwrap_or_else(|| 2.0 * alpha_star());
    let spec = BumpSpec::new(s, alpha).map_err(err)?;
    bump::bump_surface(&spec).map(|inner| PySurface { inner }).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (s, alpha = None))]
fn bump_sweep<'py>(py: Python<'py>, s: Vec<f64>, alpha: Option<f64>) -> PyResult<Bound<'py, PyAny>> {
    let alpha = alpha.unwrap_or_else(|| 2.0 * alpha_star());
    to_py(py, &bump::sweep_bump(&s, alpha).map_err(err)?)
}

/// Penalized descent at fixed area; `multistart` tries the construction inits.
#[pyfunction]
#[pyo3(signature = (area, nodes = 400, max_iterations = 20_000, multistart = false))]
fn minimize<'py>(
    py: Python<'py>,
    area: f64,
    nodes: usize,
    max_iterations: usize,
    multistart: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let config = ProbeConfig {
        nodes,
        max_iterations,
        ..ProbeConfig::default()
    };
    let (label, result) = py
        .detach(|| {
            if multistart {
                probe::minimize_multistart(area, &config)
            } else {
                probe::minimize(area, None, &config).map(|r| ("sphere".to_string(), r))
            }
        })
        .map_err(err)?;
    to_py(py, &serde_json::json!({ "init": label, "result": result }))
}

/// Lower and upper bounds on w(a) over an even area grid.
#[pyfunction]
fn sweep<'py>(py: Python<'py>, a_min: f64, a_max: f64, steps: usize) -> PyResult<Bound<'py, PyAny>> {
    let areas = area_grid(a_min, a_max, steps).map_err(err)?;
    let none: Option<fn(f64) -> Option<f64>> = None;
    to_py(py, &sweep_bounds(&areas, none).map_err(err)?)
}

#[pymodule]
fn confined_willmore_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CwError", m.py().get_type::<CwError>())?;
    m.add_class::<PySurface>()?;
    m.add_function(wrap_pyfunction!(solve_neck, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_plus, m)?)?;
    m.add_function(wrap_pyfunction!(double_sphere, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_star, m)?)?;
    m.add_function(wrap_pyfunction!(bump_surface, m)?)?;
    m.add_function(wrap_pyfunction!(bump_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(minimize, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
