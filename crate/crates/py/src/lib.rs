use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde_json::Value;

use crosslab::arrangement::FaceRef;
use crosslab::constructions::{self, realize, Layout, DEFAULT_RESOLUTION};
use crosslab::goodness::crossing_count;
use crosslab::io;
use crosslab::optimizer::{self, DEFAULT_EXACT_BUDGET, DEFAULT_ITERATIONS, DEFAULT_RESTARTS};
use crosslab::shelling::{theorem1_pipeline, PipelineOptions};

fn err(e: crosslab::Error) -> PyErr {
    match e {
        crosslab::Error::Fidelity { .. } | crosslab::Error::Certification(_) => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// JSON value -> Python object via the json module.
fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn face(face: Option<&str>) -> PyResult<FaceRef> {
    match face {
        Some(s) => io::parse_face_ref(s).map_err(err),
        None => Ok(FaceRef::Unbounded),
    }
}

#[pyclass(name = "Drawing", frozen)]
struct PyDrawing {
    inner: crosslab::Drawing,
}

#[pymethods]
impl PyDrawing {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::drawing_from_str(text).map(|inner| PyDrawing { inner }).map_err(err)
    }

    fn to_json(&self) -> String {
        io::drawing_to_string(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn class_name(&self) -> &'static str {
        self.inner.class().as_str()
    }

    fn crossings(&self) -> PyResult<u64> {
        crossing_count(&self.inner).map_err(err)
    }

    /// Analysis report w.r.t. a face given as "x,y" (unbounded face by default).
    #[pyo3(signature = (face_ref=None))]
    fn analyze<'py>(&self, py: Python<'py>, face_ref: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
        let f = face(face_ref)?;
        to_py(py, &io::analysis_report(&self.inner, &f).map_err(err)?)
    }

    fn shell<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let v = theorem1_pipeline(&self.inner, &PipelineOptions::default()).map_err(err)?;
        to_py(py, &io::verdict_to_json(&self.inner, &v))
    }

    #[pyo3(signature = (mark_crossings=true))]
    fn svg(&self, mark_crossings: bool) -> PyResult<String> {
        crosslab::svg::export_svg(&self.inner, mark_crossings).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Drawing(n={}, class={:?})", self.inner.n(), self.inner.class().as_str())
    }
}

#[pyfunction]
fn blazek_koman(n: usize) -> PyResult<PyDrawing> {
    constructions::blazek_koman(n).map(|(_, inner)| PyDrawing { inner }).map_err(err)
}

#[pyfunction]
fn harary_hill(n: usize) -> PyResult<PyDrawing> {
    constructions::harary_hill(n).map(|(_, inner)| PyDrawing { inner }).map_err(err)
}

#[pyfunction]
fn convex(n: usize) -> PyResult<PyDrawing> {
    constructions::convex(n).map(|inner| PyDrawing { inner }).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, seed=0))]
fn random_two_page(n: usize, seed: u64) -> PyResult<PyDrawing> {
    let l = constructions::random_two_page(n, seed).map_err(err)?;
    realize(&Layout::TwoPage(l), DEFAULT_RESOLUTION).map(|inner| PyDrawing { inner }).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, seed=0))]
fn random_spherical(n: usize, seed: u64) -> PyResult<PyDrawing> {
    let (s, _) = constructions::random_spherical(n, seed).map_err(err)?;
    s.realize().map(|inner| PyDrawing { inner }).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, samples=20000, seed=0))]
fn sample_mean_crossings(py: Python<'_>, n: usize, samples: usize, seed: u64) -> PyResult<f64> {
    py.detach(|| constructions::sample_mean_crossings(n, samples, seed)).map_err(err)
}

#[pyfunction]
fn zeta(n: u64) -> u64 {
    crosslab::kedges::zeta(n)
}

/// 2-page crossing minimization; exact when `exact`, annealing otherwise.
#[pyfunction]
#[pyo3(signature = (n, exact=false, seed=0, restarts=DEFAULT_RESTARTS, iterations=DEFAULT_ITERATIONS, certify=false))]
fn optimize<'py>(
    py: Python<'py>,
    n: usize,
    exact: bool,
    seed: u64,
    restarts: usize,
    iterations: usize,
    certify: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let r = py
        .detach(|| {
            if exact {
                optimizer::exact_min_crossings(n, DEFAULT_EXACT_BUDGET)
            } else {
                optimizer::local_search(n, seed, restarts, iterations)
            }
        })
        .map_err(err)?;
    let out = to_py(py, &io::opt_result_to_json(&r))?;
    if certify {
        let rep = py.detach(|| optimizer::certify_result(&r)).map_err(err)?;
        let c = PyDict::new(py);
        c.set_item("geometric", rep.geometric)?;
        c.set_item("status", rep.pipeline.conclusion.as_str())?;
        c.set_item("pass", rep.pass)?;
        out.set_item("certification", c)?;
    }
    Ok(out)
}

#[pymodule]
fn crosslab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDrawing>()?;
    m.add_function(wrap_pyfunction!(blazek_koman, m)?)?;
    m.add_function(wrap_pyfunction!(harary_hill, m)?)?;
    m.add_function(wrap_pyfunction!(convex, m)?)?;
    m.add_function(wrap_pyfunction!(random_two_page, m)?)?;
    m.add_function(wrap_pyfunction!(random_spherical, m)?)?;
    m.add_function(wrap_pyfunction!(sample_mean_crossings, m)?)?;
    m.add_function(wrap_pyfunction!(zeta, m)?)?;
    m.add_function(wrap_pyfunction!(optimize, m)?)?;
    Ok(())
}
