//! Python bindings: cap spectra, the φ root and strip, pencil singular values,
//! the kernel-bound model and the lemma harness.

use std::f64::consts::FRAC_PI_2;

use conepencil::harness::{
    critical_exponent, near_zone_singular_datum, random_suite, verify_lemma as verify, DataGenerator, HarnessConfig,
    LemmaId,
};
use conepencil::pencil::{
    assemble_pencil, min_singular_value as sigma_min, phi_eval, strip_report as strip, strip_scan_with, t_of_m as root,
    MaterialParams, PhiContext, ScanOptions,
};
use conepencil::sphere_spectra::{self, cap_area};
use conepencil::{cli, green_model, ConeError, DiscretizationConfig, MiddleZoneBound, Zone};
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(conepencil_py, ConePencilError, PyException);

fn to_py(err: ConeError) -> PyErr {
    ConePencilError::new_err(format!("[{}] {err}", err.provenance()))
}

/// Converts a serializable report into Python objects through the json module.
fn to_object<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| ConePencilError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn discretization(grid: usize, modes: usize) -> DiscretizationConfig {
    DiscretizationConfig { max_azimuthal_mode: modes, ..DiscretizationConfig::with_grid(grid) }
}

/// Spherical cap {θ < theta0} on the unit sphere in R^n.
#[pyclass(frozen, skip_from_py_object, module = "conepencil_py")]
#[derive(Clone, Copy)]
struct CapDomain {
    inner: conepencil::CapDomain,
}

#[pymethods]
impl CapDomain {
    #[new]
    fn new(n: usize, theta0: f64) -> PyResult<Self> {
        Ok(CapDomain { inner: conepencil::CapDomain::new(n, theta0).map_err(to_py)? })
    }

    #[staticmethod]
    fn hemisphere(n: usize) -> PyResult<Self> {
        Ok(CapDomain { inner: conepencil::CapDomain::hemisphere(n).map_err(to_py)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn theta0(&self) -> f64 {
        self.inner.theta0
    }

    fn area(&self) -> PyResult<f64> {
        cap_area(&self.inner).map_err(to_py)
    }

    /// Lowest Dirichlet eigenvalue of azimuthal mode `mode` with its exponent M.
    #[pyo3(signature = (mode = 0, grid = 128))]
    fn dirichlet_eigenvalue<'py>(&self, py: Python<'py>, mode: usize, grid: usize) -> PyResult<Bound<'py, PyAny>> {
        let r = sphere_spectra::dirichlet_eigenvalue_cap(&self.inner, mode, &discretization(grid, 8)).map_err(to_py)?;
        to_object(py, &r)
    }

    /// Θ(Ω) and the mode attaining it.
    #[pyo3(signature = (grid = 128, modes = 8))]
    fn theta_omega(&self, grid: usize, modes: usize) -> PyResult<(f64, usize)> {
        let t = sphere_spectra::theta_omega(&self.inner, &discretization(grid, modes)).map_err(to_py)?;
        Ok((t.theta_omega, t.attaining_mode))
    }

    fn __repr__(&self) -> String {
        format!("CapDomain(n={}, theta0={})", self.inner.n, self.inner.theta0)
    }
}

#[pyfunction]
fn theta_omega_lambda(theta: f64, lambda_re: f64, lambda_im: f64, n: usize, nu: f64, area: f64) -> PyResult<f64> {
    sphere_spectra::theta_omega_lambda(theta, lambda_re, lambda_im, n, nu, area).map_err(to_py)
}

#[pyfunction]
fn phi(t: f64, n: usize, nu: f64, m: f64) -> PyResult<f64> {
    Ok(phi_eval(t, &PhiContext::new(n, nu, m).map_err(to_py)?))
}

#[pyfunction]
fn t_of_m(n: usize, nu: f64, m: f64) -> PyResult<f64> {
    root(&PhiContext::new(n, nu, m).map_err(to_py)?).map_err(to_py)
}

/// Root t(M), α, strip half-width and p_min as a dict.
#[pyfunction]
fn strip_report<'py>(py: Python<'py>, n: usize, nu: f64, m: f64) -> PyResult<Bound<'py, PyAny>> {
    let s = strip(&PhiContext::new(n, nu, m).map_err(to_py)?).map_err(to_py)?;
    to_object(py, &s)
}

/// Relative σ_min of the discrete pencil at λ for one azimuthal mode.
#[pyfunction]
#[pyo3(signature = (cap, nu, lam, mode, grid = 128))]
fn min_singular_value(cap: &CapDomain, nu: f64, lam: Complex64, mode: usize, grid: usize) -> PyResult<f64> {
    let mat = MaterialParams::new(nu).map_err(to_py)?;
    let asm = assemble_pencil(&cap.inner, &mat, lam, mode, &discretization(grid, mode)).map_err(to_py)?;
    sigma_min(&asm).map_err(to_py)
}

/// σ_min scan over the strip; returns the full scan report as a dict.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (cap, nu, grid_re = 21, grid_im = 21, mesh = 128, modes = 4, threshold = 1e-4))]
fn strip_scan<'py>(
    py: Python<'py>,
    cap: &CapDomain,
    nu: f64,
    grid_re: usize,
    grid_im: usize,
    mesh: usize,
    modes: usize,
    threshold: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let mat = MaterialParams::new(nu).map_err(to_py)?;
    let opts = ScanOptions { threshold, ..ScanOptions::default() };
    let report = py
        .detach(|| strip_scan_with(&cap.inner, &mat, grid_re, grid_im, &discretization(mesh, modes), &opts))
        .map_err(to_py)?;
    to_object(py, &report)
}

#[pyfunction]
fn classify_zone(x_norm: f64, xi_norm: f64) -> &'static str {
    match green_model::classify_zone(x_norm, xi_norm) {
        Zone::E1 => "E1",
        Zone::E2 => "E2",
        Zone::E3 => "E3",
    }
}

/// Three-zone gradient bound of the Green's kernel.
#[pyclass(frozen, skip_from_py_object, module = "conepencil_py")]
#[derive(Clone, Copy)]
struct KernelBoundModel {
    inner: conepencil::KernelBoundModel,
}

#[pymethods]
impl KernelBoundModel {
    #[new]
    #[pyo3(signature = (n, alpha, c = 1.0, delta = 1.0, raw_gradient = false))]
    fn new(n: usize, alpha: f64, c: f64, delta: f64, raw_gradient: bool) -> PyResult<Self> {
        let mut inner = conepencil::KernelBoundModel::new(n, alpha, c, delta).map_err(to_py)?;
        if raw_gradient {
            inner = inner.with_middle(MiddleZoneBound::RawGradient);
        }
        Ok(KernelBoundModel { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    /// The negative-control model with far-zone decay α + n.
    fn tampered(&self) -> Self {
        KernelBoundModel { inner: self.inner.tampered() }
    }

    fn gradient_bound(&self, x: Vec<f64>, xi: Vec<f64>, r_x: f64) -> PyResult<f64> {
        green_model::kernel_gradient_bound(&x, &xi, r_x, &self.inner).map_err(to_py)
    }

    fn homogeneity_check(&self, x: Vec<f64>, xi: Vec<f64>, s: f64) -> bool {
        green_model::homogeneity_identity_check(&x, &xi, s, &self.inner)
    }

    fn critical_exponent(&self) -> f64 {
        critical_exponent(&self.inner)
    }
}

/// Runs one lemma on `suite_size` seeded random data plus f ≡ 1; for the
/// near-zone lemma the vertex-singular datum is added, and below the critical
/// exponent it is the only datum.
#[pyfunction]
#[pyo3(signature = (lemma, model, p = 2.0, theta0 = FRAC_PI_2, levels = 2, suite_size = 3, seed = 42))]
#[allow(clippy::too_many_arguments)]
fn verify_lemma<'py>(
    py: Python<'py>,
    lemma: u8,
    model: &KernelBoundModel,
    p: f64,
    theta0: f64,
    levels: usize,
    suite_size: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let id = LemmaId::from_number(lemma).map_err(to_py)?;
    let m = model.inner;
    let mut suite = random_suite(seed, suite_size);
    suite.push(DataGenerator::Constant { value: 1.0 });
    if id == LemmaId::Near {
        let singular = near_zone_singular_datum(&m, p);
        if p <= critical_exponent(&m) {
            suite.clear();
        }
        suite.push(singular);
    }
    let cfg = HarnessConfig::new(theta0, m.delta, levels);
    let verdict = py.detach(|| verify(id, &suite, p, &cfg, &m)).map_err(to_py)?;
    to_object(py, &verdict)
}

/// Runs the command-line interface with `args` (without the program name) and returns its exit code.
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> i32 {
    py.detach(|| cli::run(std::iter::once("conepencil".to_string()).chain(args)))
}

#[pymodule]
fn conepencil_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ConePencilError", m.py().get_type::<ConePencilError>())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<CapDomain>()?;
    m.add_class::<KernelBoundModel>()?;
    m.add_function(wrap_pyfunction!(theta_omega_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(t_of_m, m)?)?;
    m.add_function(wrap_pyfunction!(strip_report, m)?)?;
    m.add_function(wrap_pyfunction!(min_singular_value, m)?)?;
    m.add_function(wrap_pyfunction!(strip_scan, m)?)?;
    m.add_function(wrap_pyfunction!(classify_zone, m)?)?;
    m.add_function(wrap_pyfunction!(verify_lemma, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
