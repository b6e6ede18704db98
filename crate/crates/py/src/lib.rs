//! Python bindings for the charge-qubit/cavity simulator.
//!
//! Exposes the derived model parameters, the time evolution, the
//! entanglement analysis and the teleportation protocol. Figure presets
//! and the self-validation suite are available as module functions.

use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use cpb_sim::cli::{run_figure as core_run_figure, FigureId, Format, ALL_FIGURES};
use cpb_sim::entanglement::{analyze, Selection};
use cpb_sim::evolution::{closed_form_rho, InitialState, MuMode, Propagator};
use cpb_sim::model::derive_params;
use cpb_sim::teleport::{
    average_fidelity, channel_from_rho, teleport_protocol, UnknownQubit, BELL_LABELS,
};
use cpb_sim::validate::run_validation;
use cpb_sim::{DensityOperator, HilbertSpace, ModelParams, SimError, StateVector};

fn to_py_err(e: SimError) -> PyErr {
    match &e {
        SimError::Usage(_) | SimError::Domain(_) => PyValueError::new_err(e.to_string()),
        SimError::Io { .. } => PyIOError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn parse_selection(s: &str) -> PyResult<Selection> {
    match s {
        "pair" => Ok(Selection::AdjacentPair),
        "top_two" => Ok(Selection::TopTwoFock),
        other => Err(PyValueError::new_err(format!(
            "unknown selection '{other}' (expected 'pair' or 'top_two')"
        ))),
    }
}

fn matrix_to_py(m: &cpb_sim::linalg::CMat) -> Vec<Vec<Complex64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Derived model parameters for the charge qubit coupled to one cavity mode.
#[pyclass(name = "Params", module = "cpb_sim_py", from_py_object)]
#[derive(Clone)]
struct PyParams {
    inner: ModelParams,
}

#[pymethods]
impl PyParams {
    /// Convenience constructor used throughout the figure presets:
    /// capacitance ratio `cjg = C_j/C_g`, detuning `delta` (via
    /// `E_j = omega + delta` at `omega = 1`) and reference photon number.
    #[new]
    #[pyo3(signature = (cjg, delta=0.0, n_photon=1))]
    fn new(cjg: f64, delta: f64, n_photon: usize) -> PyResult<Self> {
        let inner = derive_params(cjg, 1.0, 0.5, 1.0 + delta, 1.0, 1.0)
            .map_err(to_py_err)?
            .with_photon_number(n_photon);
        Ok(Self { inner })
    }

    /// Full constructor mirroring the core parameter derivation.
    #[staticmethod]
    #[pyo3(signature = (cjg, omega, n_g, e_j, e_c, lam, n_photon=1))]
    fn derive(
        cjg: f64,
        omega: f64,
        n_g: f64,
        e_j: f64,
        e_c: f64,
        lam: f64,
        n_photon: usize,
    ) -> PyResult<Self> {
        let inner = derive_params(cjg, omega, n_g, e_j, e_c, lam)
            .map_err(to_py_err)?
            .with_photon_number(n_photon);
        Ok(Self { inner })
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma
    }

    #[getter]
    fn lambda_c(&self) -> f64 {
        self.inner.lambda_c
    }

    #[getter]
    fn omega_c(&self) -> f64 {
        self.inner.omega_c
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.inner.theta
    }

    #[getter]
    fn n_photon(&self) -> usize {
        self.inner.n_photon
    }

    #[getter]
    fn tau_scale(&self) -> f64 {
        self.inner.tau_scale()
    }

    #[getter]
    fn delta_scaled(&self) -> f64 {
        self.inner.delta_scaled()
    }

    fn __repr__(&self) -> String {
        format!(
            "Params(gamma={:.6}, lambda_c={:.6}, omega_c={:.6}, n_photon={})",
            self.inner.gamma, self.inner.lambda_c, self.inner.omega_c, self.inner.n_photon
        )
    }
}

/// Entanglement analysis of the joint state at one time point.
#[pyclass(name = "EntanglementReport", module = "cpb_sim_py")]
struct PyEntanglementReport {
    #[pyo3(get)]
    tau: f64,
    #[pyo3(get)]
    concurrence: f64,
    #[pyo3(get)]
    negativity: f64,
    #[pyo3(get)]
    pt_support: [f64; 4],
    #[pyo3(get)]
    pop_g_n: f64,
    #[pyo3(get)]
    pop_e_nm1: f64,
    #[pyo3(get)]
    pop_g_np1: f64,
    #[pyo3(get)]
    pop_e_n: f64,
    #[pyo3(get)]
    coherence: Complex64,
    #[pyo3(get)]
    residual_weight: f64,
    #[pyo3(get)]
    separable: bool,
}

#[pymethods]
impl PyEntanglementReport {
    fn __repr__(&self) -> String {
        format!(
            "EntanglementReport(tau={:.4}, concurrence={:.6}, negativity={:.6}, separable={})",
            self.tau, self.concurrence, self.negativity, self.separable
        )
    }
}

/// Outcome of the conditional teleportation protocol at one time point.
#[pyclass(name = "TeleportReport", module = "cpb_sim_py")]
struct PyTeleportReport {
    #[pyo3(get)]
    tau: f64,
    #[pyo3(get)]
    outcome_probs: [f64; 4],
    /// Conditional fidelities in [`bell_labels`] order; NaN marks a
    /// zero-probability outcome.
    #[pyo3(get)]
    fidelities: [f64; 4],
    #[pyo3(get)]
    mean_fidelity: f64,
    #[pyo3(get)]
    avg_over_inputs: f64,
}

#[pymethods]
impl PyTeleportReport {
    fn __repr__(&self) -> String {
        format!(
            "TeleportReport(tau={:.4}, mean_fidelity={:.6}, avg_over_inputs={:.6})",
            self.tau, self.mean_fidelity, self.avg_over_inputs
        )
    }
}

/// Evolves one initial state and exposes the derived quantities.
#[pyclass(name = "Simulator", module = "cpb_sim_py")]
struct PySimulator {
    params: ModelParams,
    init: InitialState,
    space: HilbertSpace,
    propagator: Propagator,
    psi0: StateVector,
    selection: Selection,
}

#[pymethods]
impl PySimulator {
    /// Build a simulator for `params`. The initial state is `|g, n⟩` by
    /// default; passing `a` switches to the qubit superposition
    /// `(a|g⟩ + (1−a)|e⟩) ⊗ |n⟩` (normalized). `selection` chooses the
    /// two-qubit projection: `"pair"` (levels `n−1, n`) or `"top_two"`.
    #[new]
    #[pyo3(signature = (params, a=None, selection="pair", fock_cutoff=None))]
    fn new(
        params: PyParams,
        a: Option<f64>,
        selection: &str,
        fock_cutoff: Option<usize>,
    ) -> PyResult<Self> {
        let p = params.inner;
        let init = match a {
            Some(a) => InitialState::figure_three(a, p.n_photon).map_err(to_py_err)?,
            None => InitialState::GroundFock(p.n_photon),
        };
        let space = match fock_cutoff {
            Some(c) => HilbertSpace::new(c),
            None => HilbertSpace::for_params(&p),
        };
        space.check_cutoff(&p).map_err(to_py_err)?;
        let propagator = Propagator::new(&p, space).map_err(to_py_err)?;
        let psi0 = init.state_vector(space).map_err(to_py_err)?;
        Ok(Self {
            params: p,
            init,
            space,
            propagator,
            psi0,
            selection: parse_selection(selection)?,
        })
    }

    /// Joint density matrix at scaled time `tau` (row-major complex).
    fn density_matrix(&self, tau: f64) -> PyResult<Vec<Vec<Complex64>>> {
        let rho = self.rho(tau)?;
        Ok(matrix_to_py(&rho.matrix))
    }

    /// Density matrix from the analytic coefficients instead of the
    /// eigendecomposition backend; `literal=True` selects the alternate
    /// frequency reading kept for comparison.
    #[pyo3(signature = (tau, literal=false))]
    fn closed_form_density_matrix(&self, tau: f64, literal: bool) -> PyResult<Vec<Vec<Complex64>>> {
        let mode = if literal { MuMode::LiteralFrequency } else { MuMode::Standard };
        let rho = closed_form_rho(&self.params, &self.init, self.space, tau, mode)
            .map_err(to_py_err)?;
        Ok(matrix_to_py(&rho.matrix))
    }

    /// Entanglement analysis (concurrence, negativity, populations) at `tau`.
    fn entanglement(&self, tau: f64) -> PyResult<PyEntanglementReport> {
        let rho = self.rho(tau)?;
        let r = analyze(&rho, self.init.fock(), self.selection, tau).map_err(to_py_err)?;
        Ok(PyEntanglementReport {
            tau: r.tau,
            concurrence: r.concurrence,
            negativity: r.negativity,
            pt_support: r.pt_support,
            pop_g_n: r.pop_g_n,
            pop_e_nm1: r.pop_e_nm1,
            pop_g_np1: r.pop_g_np1,
            pop_e_n: r.pop_e_n,
            coherence: r.coherence,
            residual_weight: r.residual_weight,
            separable: r.separable_verdict,
        })
    }

    /// Run the teleportation protocol over the channel at `tau` with the
    /// unknown input `lambda1|0⟩ + lambda2|1⟩` (normalized internally).
    #[pyo3(signature = (tau, lambda1=Complex64::new(0.6, 0.0), lambda2=Complex64::new(0.8, 0.0)))]
    fn teleport(&self, tau: f64, lambda1: Complex64, lambda2: Complex64) -> PyResult<PyTeleportReport> {
        let rho = self.rho(tau)?;
        let chan = channel_from_rho(&rho, self.init.fock(), self.selection).map_err(to_py_err)?;
        let input = UnknownQubit::new(lambda1, lambda2).map_err(to_py_err)?;
        let r = teleport_protocol(&chan, &input, tau).map_err(to_py_err)?;
        Ok(PyTeleportReport {
            tau: r.tau,
            outcome_probs: r.outcome_probs,
            fidelities: r.fidelities,
            mean_fidelity: r.mean_fidelity,
            avg_over_inputs: average_fidelity(&chan),
        })
    }

    /// Concurrence of the projected two-qubit state sampled on a uniform
    /// `tau` grid; returns `(taus, values)`.
    fn concurrence_curve(&self, tau_max: f64, steps: usize) -> PyResult<(Vec<f64>, Vec<f64>)> {
        let grid = cpb_sim::evolution::tau_grid(tau_max, steps).map_err(to_py_err)?;
        let mut values = Vec::with_capacity(grid.len());
        for &tau in &grid {
            values.push(self.entanglement(tau)?.concurrence);
        }
        Ok((grid, values))
    }
}

impl PySimulator {
    fn rho(&self, tau: f64) -> PyResult<DensityOperator> {
        Ok(self
            .propagator
            .evolve(&self.psi0, tau)
            .map_err(to_py_err)?
            .density())
    }
}

/// Render a named figure preset to `path` (`format`: "csv" or "json").
#[pyfunction]
#[pyo3(signature = (figure, path, format="csv"))]
fn run_figure(figure: &str, path: &str, format: &str) -> PyResult<()> {
    let id: FigureId = figure.parse().map_err(to_py_err)?;
    let fmt: Format = format.parse().map_err(to_py_err)?;
    core_run_figure(id, std::path::Path::new(path), fmt).map_err(to_py_err)
}

/// The figure identifiers accepted by `run_figure`.
#[pyfunction]
fn figure_ids() -> Vec<&'static str> {
    ALL_FIGURES.iter().map(|f| f.as_str()).collect()
}

/// Bell-outcome labels in the order used by the teleport arrays.
#[pyfunction]
fn bell_labels() -> [&'static str; 4] {
    BELL_LABELS
}

/// Run the internal cross-validation suite; returns
/// `(all_hard_checks_passed, report_text)`.
#[pyfunction]
fn validate() -> PyResult<(bool, String)> {
    let report = run_validation(MuMode::Standard).map_err(to_py_err)?;
    Ok((report.all_hard_passed(), report.render_text()))
}

#[pymodule]
fn cpb_sim_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_class::<PySimulator>()?;
    m.add_class::<PyEntanglementReport>()?;
    m.add_class::<PyTeleportReport>()?;
    m.add_function(wrap_pyfunction!(run_figure, m)?)?;
    m.add_function(wrap_pyfunction!(figure_ids, m)?)?;
    m.add_function(wrap_pyfunction!(bell_labels, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
