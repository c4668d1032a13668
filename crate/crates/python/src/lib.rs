//! Python bindings: grids, initial states, the Chebyshev propagator, the
//! angular-momentum ledger and the closed-form oracles.
//!
//! Library errors surface as `ValueError`, numerical-health aborts as
//! `cyclovortex.NumericalHealthError` and file problems as `OSError`.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::PathBuf;
use std::sync::Arc;

use vortex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cyclovortex_cli::{exit, CliError, MomentumSource};
use vortex::observables::{self, ObservableRecord};
use vortex::{specfun, BuildOptions};

create_exception!(cyclovortex, NumericalHealthError, PyRuntimeError);

fn core_err(e: vortex::Error) -> PyErr {
    if e.is_numerical_health() {
        NumericalHealthError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn cli_err(e: CliError) -> PyErr {
    match e.exit_code() {
        exit::NUMERICAL => NumericalHealthError::new_err(e.to_string()),
        exit::IO => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Field strength and the derived scales (ρ_B, ω_c, ω_L).
#[pyclass(name = "Params", module = "cyclovortex", frozen, from_py_object)]
#[derive(Clone)]
struct PyParams(vortex::PhysicsParams);

#[pymethods]
impl PyParams {
    #[new]
    fn new(b_field: f64) -> PyResult<Self> {
        vortex::make_params(b_field).map(Self).map_err(core_err)
    }
    #[getter]
    fn b_field(&self) -> f64 {
        self.0.b_field
    }
    #[getter]
    fn rho_b(&self) -> f64 {
        self.0.rho_b
    }
    #[getter]
    fn omega_c(&self) -> f64 {
        self.0.omega_c
    }
    #[getter]
    fn omega_l(&self) -> f64 {
        self.0.omega_l
    }
    fn cyclotron_period(&self) -> f64 {
        self.0.cyclotron_period()
    }
    fn __repr__(&self) -> String {
        format!("Params(b_field={})", self.0.b_field)
    }
}

/// Periodic grid centred on the origin.
#[pyclass(name = "Grid", module = "cyclovortex", frozen, from_py_object)]
#[derive(Clone)]
struct PyGrid(Arc<vortex::Grid2D>);

#[pymethods]
impl PyGrid {
    #[new]
    fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> PyResult<Self> {
        vortex::make_grid(nx, ny, lx, ly).map(Self).map_err(core_err)
    }
    #[getter]
    fn nx(&self) -> usize {
        self.0.nx
    }
    #[getter]
    fn ny(&self) -> usize {
        self.0.ny
    }
    #[getter]
    fn lx(&self) -> f64 {
        self.0.lx
    }
    #[getter]
    fn ly(&self) -> f64 {
        self.0.ly
    }
    #[getter]
    fn dx(&self) -> f64 {
        self.0.dx
    }
    #[getter]
    fn dy(&self) -> f64 {
        self.0.dy
    }
    #[getter]
    fn x(&self) -> Vec<f64> {
        self.0.x.clone()
    }
    #[getter]
    fn y(&self) -> Vec<f64> {
        self.0.y.clone()
    }
    fn __repr__(&self) -> String {
        format!("Grid(nx={}, ny={}, lx={}, ly={})", self.0.nx, self.0.ny, self.0.lx, self.0.ly)
    }
}

/// Complex samples on a grid, x fastest.
#[pyclass(name = "WaveField", module = "cyclovortex", frozen, from_py_object)]
#[derive(Clone)]
struct PyWaveField(vortex::WaveField);

#[pymethods]
impl PyWaveField {
    #[staticmethod]
    fn from_values(grid: &PyGrid, values: Vec<Complex64>) -> PyResult<Self> {
        vortex::WaveField::from_values(&grid.0, values).map(Self).map_err(core_err)
    }
    #[getter]
    fn grid(&self) -> PyGrid {
        PyGrid(Arc::clone(&self.0.grid))
    }
    fn values(&self) -> Vec<Complex64> {
        self.0.values.clone()
    }
    fn density(&self) -> Vec<f64> {
        vortex::density(&self.0).values
    }
    /// Σ|Ψ|² dx dy.
    fn norm_sqr(&self) -> f64 {
        self.0.norm_sqr()
    }
    fn centroid(&self) -> (f64, f64) {
        vortex::centroid(&self.0)
    }
    fn canonical_lz(&self) -> PyResult<f64> {
        vortex::canonical_lz(&self.0).map_err(core_err)
    }
    fn kinetic_lz(&self, params: &PyParams) -> PyResult<f64> {
        vortex::kinetic_lz(&self.0, &params.0).map_err(core_err)
    }
    /// (jx, jy) probability current.
    fn current_density(&self, params: &PyParams) -> PyResult<(Vec<f64>, Vec<f64>)> {
        let j = vortex::current_density(&self.0, &params.0).map_err(core_err)?;
        Ok((j.x, j.y))
    }
    fn l2_distance(&self, other: &PyWaveField) -> PyResult<f64> {
        self.0.l2_distance(&other.0).map_err(core_err)
    }
    #[pyo3(signature = (path, t = 0.0, b_field = 0.0))]
    fn write_snapshot(&self, path: PathBuf, t: f64, b_field: f64) -> PyResult<()> {
        let file = File::create(&path).map_err(|e| PyOSError::new_err(e.to_string()))?;
        cyclovortex_cli::write_snapshot(BufWriter::new(file), &self.0, t, b_field)
            .map_err(|e| PyOSError::new_err(e.to_string()))
    }
    /// Returns (field, t, b_field).
    #[staticmethod]
    fn read_snapshot(path: PathBuf) -> PyResult<(Self, f64, f64)> {
        let file = File::open(&path).map_err(|e| PyOSError::new_err(e.to_string()))?;
        let snap = cyclovortex_cli::read_snapshot(BufReader::new(file)).map_err(|e| cli_err(e.into()))?;
        Ok((Self(snap.psi), snap.t, snap.b_field))
    }
    fn __len__(&self) -> usize {
        self.0.values.len()
    }
}

#[pyclass(name = "LandauSpec", module = "cyclovortex", get_all, set_all, from_py_object)]
#[derive(Clone)]
struct PyLandauSpec {
    n: u32,
    ell: i32,
    p_c: f64,
    weight: Complex64,
}

#[pymethods]
impl PyLandauSpec {
    #[new]
    #[pyo3(signature = (n, ell, p_c = 0.0, weight = Complex64::new(1.0, 0.0)))]
    fn new(n: u32, ell: i32, p_c: f64, weight: Complex64) -> Self {
        Self { n, ell, p_c, weight }
    }
    fn __repr__(&self) -> String {
        format!("LandauSpec(n={}, ell={}, p_c={}, weight={})", self.n, self.ell, self.p_c, self.weight)
    }
}

impl From<&PyLandauSpec> for vortex::LandauSpec {
    fn from(s: &PyLandauSpec) -> Self {
        vortex::LandauSpec::new(s.n, s.ell, s.p_c).with_weight(s.weight)
    }
}

/// One ledger sample.
#[pyclass(name = "ObservableRecord", module = "cyclovortex", frozen, get_all)]
struct PyRecord {
    t: f64,
    norm: f64,
    centroid: (f64, f64),
    rho0: f64,
    l_can: f64,
    l_kin: f64,
    i_total: f64,
    i_prime: f64,
    l_dia: f64,
    l_cyclo: f64,
    mu_dia: f64,
    orbit_centre: (f64, f64),
    res_parallel_axis: f64,
    res_ledger: f64,
    boundary_leak: f64,
}

impl From<ObservableRecord> for PyRecord {
    fn from(r: ObservableRecord) -> Self {
        Self {
            t: r.t,
            norm: r.norm,
            centroid: r.centroid,
            rho0: r.rho0,
            l_can: r.l_can,
            l_kin: r.l_kin,
            i_total: r.i_total,
            i_prime: r.i_prime,
            l_dia: r.l_dia,
            l_cyclo: r.l_cyclo,
            mu_dia: r.mu_dia,
            orbit_centre: r.orbit_centre,
            res_parallel_axis: r.res_parallel_axis,
            res_ledger: r.res_ledger,
            boundary_leak: r.boundary_leak,
        }
    }
}

#[pymethods]
impl PyRecord {
    fn __repr__(&self) -> String {
        format!(
            "ObservableRecord(t={}, centroid={:?}, l_can={}, l_kin={})",
            self.t, self.centroid, self.l_can, self.l_kin
        )
    }
}

/// Symmetric-gauge grid Hamiltonian.
#[pyclass(name = "Hamiltonian", module = "cyclovortex", frozen)]
struct PyHamiltonian(vortex::Hamiltonian);

#[pymethods]
impl PyHamiltonian {
    #[new]
    fn new(grid: &PyGrid, params: &PyParams) -> PyResult<Self> {
        vortex::Hamiltonian::for_params(&grid.0, &params.0).map(Self).map_err(core_err)
    }
    /// (e_min, e_max) of the grid spectrum.
    #[getter]
    fn bounds(&self) -> (f64, f64) {
        (self.0.bounds.e_min, self.0.bounds.e_max)
    }
    fn apply(&self, psi: &PyWaveField) -> PyResult<PyWaveField> {
        let mut ws = vortex::Spectral::new(self.0.grid());
        vortex::apply_h(&psi.0, &self.0, &mut ws).map(PyWaveField).map_err(core_err)
    }
    /// Chebyshev order chosen for a step of length dt.
    fn chebyshev_order(&self, dt: f64) -> PyResult<usize> {
        vortex::plan_step(self.0.bounds, dt).map(|p| p.m_order).map_err(core_err)
    }
}

#[pyclass(name = "ClassicalOrbit", module = "cyclovortex", frozen)]
struct PyOrbit(vortex::ClassicalOrbit);

#[pymethods]
impl PyOrbit {
    #[getter]
    fn sigma(&self) -> f64 {
        self.0.sigma
    }
    #[getter]
    fn y0(&self) -> f64 {
        self.0.y0
    }
    #[getter]
    fn omega_c(&self) -> f64 {
        self.0.omega_c
    }
    #[getter]
    fn l_cyclo_centred(&self) -> f64 {
        self.0.l_cyclo_centred
    }
    fn position(&self, t: f64) -> (f64, f64) {
        self.0.position(t)
    }
    fn velocity(&self, t: f64) -> (f64, f64) {
        self.0.velocity(t)
    }
    fn rho0_analytic(&self, t: f64) -> f64 {
        self.0.rho0_analytic(t)
    }
    fn l_cyclo_lab(&self, t: f64) -> f64 {
        self.0.l_cyclo_lab(t)
    }
}

#[pyfunction]
#[pyo3(signature = (spec, grid, params, force = false))]
fn build_component(spec: &PyLandauSpec, grid: &PyGrid, params: &PyParams, force: bool) -> PyResult<PyWaveField> {
    vortex::build_component(&spec.into(), &grid.0, &params.0, BuildOptions { force })
        .map(PyWaveField)
        .map_err(core_err)
}

#[pyfunction]
#[pyo3(signature = (specs, grid, params, force = false))]
fn superpose(specs: Vec<PyRef<'_, PyLandauSpec>>, grid: &PyGrid, params: &PyParams, force: bool) -> PyResult<PyWaveField> {
    let specs: Vec<vortex::LandauSpec> = specs.iter().map(|s| (&**s).into()).collect();
    vortex::superpose(&specs, &grid.0, &params.0, BuildOptions { force })
        .map(PyWaveField)
        .map_err(core_err)
}

/// Evolves `psi` for `n_steps` steps; returns (records, final state).
#[pyfunction]
#[pyo3(signature = (psi, params, dt, n_steps, observe_every = 1))]
fn evolve(
    py: Python<'_>,
    psi: &PyWaveField,
    params: &PyParams,
    dt: f64,
    n_steps: usize,
    observe_every: usize,
) -> PyResult<(Vec<PyRecord>, PyWaveField)> {
    let (psi, params) = (psi.0.clone(), params.0);
    let report = py
        .detach(move || {
            let ham = vortex::Hamiltonian::for_params(&psi.grid, &params)?;
            vortex::evolve(&psi, &ham, &params, dt, n_steps, observe_every)
        })
        .map_err(core_err)?;
    Ok((
        report.records.into_iter().map(PyRecord::from).collect(),
        PyWaveField(report.final_state),
    ))
}

#[pyfunction]
#[pyo3(signature = (psi, params, t = 0.0))]
fn ledger(psi: &PyWaveField, params: &PyParams, t: f64) -> PyResult<PyRecord> {
    vortex::ledger(&psi.0, &params.0, t).map(PyRecord::from).map_err(core_err)
}

#[pyfunction]
fn classical_orbit(p_c: f64, params: &PyParams) -> PyResult<PyOrbit> {
    vortex::classical_orbit(p_c, &params.0).map(PyOrbit).map_err(core_err)
}

/// (⟨ρ′²⟩, L_dia/ħ) of a Landau state.
#[pyfunction]
fn landau_expectations(n: u32, ell: i32, params: &PyParams) -> (f64, f64) {
    vortex::landau_expectations(n, ell, &params.0)
}

#[pyfunction]
fn landau_radial(n: u32, ell_abs: u32, rho: f64, params: &PyParams) -> f64 {
    vortex::landau_radial(n, ell_abs, rho, &params.0)
}

/// Relative L2 distance between |a|² and the |b|² rotated by the Larmor angle
/// at time t about `origin` and moved to `centre`.
#[pyfunction]
fn larmor_mismatch(a: &PyWaveField, b: &PyWaveField, params: &PyParams, t: f64, origin: (f64, f64), centre: (f64, f64)) -> PyResult<f64> {
    let expected = observables::rotate_translate(&vortex::density(&b.0), observables::larmor_angle(&params.0, t), origin, centre);
    observables::relative_l2(&vortex::density(&a.0), &expected).map_err(core_err)
}

/// J_0(x) … J_qmax(x).
#[pyfunction]
fn bessel_j(qmax: usize, x: f64) -> PyResult<Vec<f64>> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(PyValueError::new_err("x must be finite and non-negative"));
    }
    Ok(specfun::bessel_j_sequence(qmax, x).values)
}

#[pyfunction]
fn laguerre(n: u32, k: u32, x: f64) -> f64 {
    specfun::laguerre(n, k, x)
}

/// SI orbit parameters; exactly one of `grating` (m) or `pc` (kg·m/s).
#[pyfunction]
#[pyo3(signature = (b_tesla, grating = None, pc = None))]
fn si_convert<'py>(py: Python<'py>, b_tesla: f64, grating: Option<f64>, pc: Option<f64>) -> PyResult<Bound<'py, PyDict>> {
    let source = match (grating, pc) {
        (Some(d), None) => MomentumSource::Grating(d),
        (None, Some(p)) => MomentumSource::Momentum(p),
        _ => return Err(PyValueError::new_err("give exactly one of grating or pc")),
    };
    let r = cyclovortex_cli::si_convert(b_tesla, source).map_err(|e| cli_err(e.into()))?;
    let d = PyDict::new(py);
    d.set_item("b_tesla", r.b_tesla)?;
    d.set_item("grating_m", r.grating_m)?;
    d.set_item("p_c_si", r.p_c_si)?;
    d.set_item("sigma_m", r.sigma_m)?;
    d.set_item("l_cyclo_hbar", r.l_cyclo_hbar)?;
    d.set_item("kinetic_energy_mev", r.kinetic_energy_mev)?;
    d.set_item("rho_b_m", r.rho_b_m)?;
    d.set_item("length_unit_m", r.length_unit_m)?;
    d.set_item("p_c_natural", r.p_c_natural)?;
    d.set_item("sigma_natural", r.sigma_natural)?;
    d.set_item("p_c_per_hbar_over_rho_b", r.p_c_per_hbar_over_rho_b)?;
    Ok(d)
}

/// Parses a scenario file's text, runs it and returns a summary dict.
#[pyfunction]
#[pyo3(signature = (config, out_dir = None, force_grid = false))]
fn run_scenario<'py>(py: Python<'py>, config: &str, out_dir: Option<PathBuf>, force_grid: bool) -> PyResult<Bound<'py, PyDict>> {
    let scenario = cyclovortex_cli::parse_config(config).map_err(|e| cli_err(e.into()))?;
    let opts = cyclovortex_cli::RunOptions { force_grid, out_dir };
    let summary = py
        .detach(|| cyclovortex_cli::run_scenario(&scenario, &opts))
        .map_err(cli_err)?;
    let d = PyDict::new(py);
    d.set_item("ledger", summary.ledger_path)?;
    d.set_item("records", summary.report.records.len())?;
    d.set_item("chebyshev_order", summary.report.plan.m_order)?;
    d.set_item("norm_drift_max", summary.report.norm_drift_max)?;
    d.set_item("boundary_leak_max", summary.report.boundary_leak_max)?;
    d.set_item("max_centroid_deviation", summary.max_centroid_deviation)?;
    d.set_item("final_state", PyWaveField(summary.report.final_state))?;
    Ok(d)
}

#[pymodule]
fn cyclovortex(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NumericalHealthError", m.py().get_type::<NumericalHealthError>())?;
    m.add_class::<PyParams>()?;
    m.add_class::<PyGrid>()?;
    m.add_class::<PyWaveField>()?;
    m.add_class::<PyLandauSpec>()?;
    m.add_class::<PyRecord>()?;
    m.add_class::<PyHamiltonian>()?;
    m.add_class::<PyOrbit>()?;
    m.add_function(wrap_pyfunction!(build_component, m)?)?;
    m.add_function(wrap_pyfunction!(superpose, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(ledger, m)?)?;
    m.add_function(wrap_pyfunction!(classical_orbit, m)?)?;
    m.add_function(wrap_pyfunction!(landau_expectations, m)?)?;
    m.add_function(wrap_pyfunction!(landau_radial, m)?)?;
    m.add_function(wrap_pyfunction!(larmor_mismatch, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_j, m)?)?;
    m.add_function(wrap_pyfunction!(laguerre, m)?)?;
    m.add_function(wrap_pyfunction!(si_convert, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    Ok(())
}
