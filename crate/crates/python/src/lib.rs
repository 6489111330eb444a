use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use acsim::ac_model::{compile_circuit, execute_schedule, ACParameters, Layout, NoiseSpec};
use acsim::experiments::{
    demo_deutsch_jozsa, sweep_deformation, sweep_winding, DeformationConfig, Oracle, WindingConfig,
};
use acsim::formats::{parse_circuit, parse_schedule, write_circuit, write_schedule};
use acsim::gates::{self, Gate};
use acsim::geometry::{self, Point2, Polyline};
use acsim::matrix::{Matrix, SquareMatrix};
use acsim::simulator::{self, StateVector};
use acsim::synthesis;

type Rows = Vec<Vec<Complex64>>;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn closed_path(vertices: Vec<(f64, f64)>) -> PyResult<Polyline> {
    Polyline::closed(
        vertices
            .into_iter()
            .map(|(x, y)| Point2::new(x, y))
            .collect(),
    )
    .map_err(err)
}

fn to_xy(path: &Polyline) -> Vec<(f64, f64)> {
    path.vertices().iter().map(|p| (p.x, p.y)).collect()
}

fn rows<const D: usize>(m: &SquareMatrix<D>) -> Rows {
    m.0.iter().map(|r| r.to_vec()).collect()
}

fn matrix_from_rows(r: Rows) -> PyResult<Matrix> {
    let dim = r.len();
    if r.iter().any(|row| row.len() != dim) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    let columns: Vec<Vec<Complex64>> = (0..dim)
        .map(|j| r.iter().map(|row| row[j]).collect())
        .collect();
    Ok(Matrix::from_columns(&columns))
}

/// Signed winding number and clearance of a closed path around a point.
#[pyfunction]
fn winding_number(vertices: Vec<(f64, f64)>, center: (f64, f64)) -> PyResult<(i64, f64)> {
    let w = geometry::winding_number(&closed_path(vertices)?, Point2::new(center.0, center.1))
        .map_err(err)?;
    Ok((w.n, w.clearance))
}

#[pyfunction]
fn winding_number_oracle(vertices: Vec<(f64, f64)>, center: (f64, f64)) -> PyResult<i64> {
    geometry::winding_number_oracle(&closed_path(vertices)?, Point2::new(center.0, center.1))
        .map_err(err)
}

#[pyfunction]
fn enclosed_area(vertices: Vec<(f64, f64)>) -> PyResult<f64> {
    geometry::enclosed_area(&closed_path(vertices)?).map_err(err)
}

#[pyfunction]
fn circle_path(
    center: (f64, f64),
    radius: f64,
    turns: i64,
    samples_per_turn: usize,
) -> PyResult<Vec<(f64, f64)>> {
    let p = geometry::circle_path(
        Point2::new(center.0, center.1),
        radius,
        turns,
        samples_per_turn,
    )
    .map_err(err)?;
    Ok(to_xy(&p))
}

#[pyfunction]
fn perturb_path(vertices: Vec<(f64, f64)>, sigma: f64, seed: u64) -> PyResult<Vec<(f64, f64)>> {
    Ok(to_xy(&geometry::perturb_path(
        &closed_path(vertices)?,
        sigma,
        seed,
    )))
}

#[pyfunction]
fn u_phase_matrix(gamma: f64) -> Rows {
    rows(&gates::u_phase_matrix(gamma))
}

#[pyfunction]
fn u_swap_matrix(theta: f64) -> Rows {
    rows(&gates::u_swap_matrix(theta))
}

#[pyfunction]
fn b_matrix(gamma: f64) -> Rows {
    rows(&gates::b_matrix(gamma))
}

#[pyfunction]
fn transmission(theta: f64) -> f64 {
    gates::transmission(theta)
}

/// A logical circuit over the phase, partial-swap and controlled-phase gates.
#[pyclass(name = "Circuit", from_py_object)]
#[derive(Clone)]
struct PyCircuit {
    inner: gates::Circuit,
}

#[pymethods]
impl PyCircuit {
    #[new]
    fn new(width: usize) -> PyResult<Self> {
        Ok(Self {
            inner: gates::Circuit::new(width).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: parse_circuit(text).map_err(err)?,
        })
    }

    fn to_text(&self) -> String {
        write_circuit(&self.inner)
    }

    fn uphase(&mut self, target: usize, gamma: f64) -> PyResult<()> {
        self.inner
            .push(Gate::OneQubitPhase { target, gamma })
            .map_err(err)
    }

    fn uswap(&mut self, target: usize, theta: f64) -> PyResult<()> {
        self.inner
            .push(Gate::PartialSwap { target, theta })
            .map_err(err)
    }

    fn b(&mut self, first: usize, second: usize, gamma: f64) -> PyResult<()> {
        self.inner
            .push(Gate::ControlledPhase {
                first,
                second,
                gamma,
            })
            .map_err(err)
    }

    #[getter]
    fn width(&self) -> usize {
        self.inner.width()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn unitary(&self) -> PyResult<Rows> {
        let m = simulator::circuit_unitary(&self.inner).map_err(err)?;
        Ok((0..m.dim())
            .map(|i| (0..m.dim()).map(|j| m.get(i, j)).collect())
            .collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "Circuit(width={}, gates={})",
            self.inner.width(),
            self.inner.len()
        )
    }
}

#[pyclass(name = "StateVector")]
struct PyStateVector {
    inner: StateVector,
}

#[pymethods]
impl PyStateVector {
    #[new]
    fn new(width: usize, bitstring: &str) -> PyResult<Self> {
        Ok(Self {
            inner: simulator::init_state(width, bitstring).map_err(err)?,
        })
    }

    #[staticmethod]
    fn uniform(width: usize) -> PyResult<Self> {
        Ok(Self {
            inner: StateVector::uniform(width).map_err(err)?,
        })
    }

    fn run(&self, circuit: &PyCircuit) -> PyResult<Self> {
        Ok(Self {
            inner: simulator::run_circuit(&self.inner, &circuit.inner).map_err(err)?,
        })
    }

    fn probability(&self, bitstring: &str) -> PyResult<f64> {
        simulator::probability(&self.inner, bitstring).map_err(err)
    }

    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes().to_vec()
    }

    fn measure_all(&self, seed: u64) -> String {
        simulator::measure_all(&self.inner, seed).bitstring
    }

    fn concurrence(&self) -> PyResult<f64> {
        simulator::concurrence(&self.inner).map_err(err)
    }

    #[getter]
    fn width(&self) -> usize {
        self.inner.width()
    }
}

/// `(alpha, beta, delta, global_phase)` of a 2×2 unitary.
#[pyfunction]
fn euler_decompose(u: Rows) -> PyResult<(f64, f64, f64, f64)> {
    if u.len() != 2 || u.iter().any(|r| r.len() != 2) {
        return Err(PyValueError::new_err("expected a 2x2 matrix"));
    }
    let m = SquareMatrix([[u[0][0], u[0][1]], [u[1][0], u[1][1]]]);
    let e = synthesis::euler_decompose(&m).map_err(err)?;
    Ok((e.alpha, e.beta, e.delta, e.global_phase))
}

#[pyfunction]
fn phase_distance(u: Rows, v: Rows) -> PyResult<f64> {
    synthesis::phase_distance(&matrix_from_rows(u)?, &matrix_from_rows(v)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (gamma0 = std::f64::consts::FRAC_PI_2))]
fn cnot_construction(gamma0: f64) -> PyResult<(PyCircuit, f64)> {
    let p = ACParameters::with_gamma0(gamma0).map_err(err)?;
    let c = synthesis::cnot_construction(&p).map_err(err)?;
    Ok((PyCircuit { inner: c.circuit }, c.global_phase))
}

/// Compiles circuit text into schedule text.
#[pyfunction]
#[pyo3(signature = (circuit, gamma0 = std::f64::consts::FRAC_PI_2, d_min = 1.0))]
fn compile(circuit: &PyCircuit, gamma0: f64, d_min: f64) -> PyResult<String> {
    let p = ACParameters::with_gamma0(gamma0).map_err(err)?;
    let layout = Layout::line(circuit.inner.width(), d_min).map_err(err)?;
    let s = compile_circuit(&circuit.inner, &layout, &p).map_err(err)?;
    write_schedule(&s).map_err(err)
}

/// `(move, expected, realized, clearance)`.
type FaultRow = (usize, i64, Option<i64>, f64);

/// Executes schedule text; returns the realized circuit, the tracked global
/// phase and the fault log as `(move, expected, realized, clearance)` tuples.
#[pyfunction]
#[pyo3(signature = (schedule, sigma_path = 0.0, sigma_theta = 0.0, crosstalk_lambda = 0.0, seed = 0, gamma0 = std::f64::consts::FRAC_PI_2))]
fn execute(
    schedule: &str,
    sigma_path: f64,
    sigma_theta: f64,
    crosstalk_lambda: f64,
    seed: u64,
    gamma0: f64,
) -> PyResult<(PyCircuit, f64, Vec<FaultRow>)> {
    let s = parse_schedule(schedule).map_err(err)?;
    let p = ACParameters::with_gamma0(gamma0).map_err(err)?;
    let noise = NoiseSpec {
        sigma_path,
        sigma_theta,
        crosstalk_lambda,
    };
    let e = execute_schedule(&s, &p, &noise, seed).map_err(err)?;
    let faults = e
        .faults
        .entries
        .iter()
        .map(|f| (f.move_index, f.expected, f.realized, f.clearance))
        .collect();
    Ok((PyCircuit { inner: e.circuit }, e.global_phase, faults))
}

/// CSV text of a deformation sweep for the topological and comparator gates.
#[pyfunction]
#[pyo3(signature = (sigmas, trials, seed, radius = 1.0, samples_per_turn = 32, lambda_area = 10.0))]
fn sweep_deformation_csv(
    sigmas: Vec<f64>,
    trials: usize,
    seed: u64,
    radius: f64,
    samples_per_turn: usize,
    lambda_area: f64,
) -> PyResult<(String, String)> {
    let center = Point2::new(0.0, 0.0);
    let path = geometry::circle_path(center, radius, 1, samples_per_turn).map_err(err)?;
    let config = DeformationConfig {
        lambda_area,
        ..DeformationConfig::default()
    };
    let s = sweep_deformation(&path, center, &sigmas, trials, seed, &config).map_err(err)?;
    Ok((s.topological.to_csv(), s.dynamical.to_csv()))
}

#[pyfunction]
#[pyo3(signature = (n_values, sigma, trials, seed, radius = 1.0, samples_per_turn = 32))]
fn sweep_winding_csv(
    n_values: Vec<i64>,
    sigma: f64,
    trials: usize,
    seed: u64,
    radius: f64,
    samples_per_turn: usize,
) -> PyResult<String> {
    let config = WindingConfig {
        radius,
        samples_per_turn,
        ..WindingConfig::default()
    };
    Ok(sweep_winding(&n_values, sigma, trials, seed, &config)
        .map_err(err)?
        .to_csv())
}

#[pyfunction]
#[pyo3(signature = (oracle, seed = 0))]
fn demo_dj(oracle: &str, seed: u64) -> PyResult<String> {
    let o: Oracle = oracle.parse().map_err(err)?;
    Ok(demo_deutsch_jozsa(o, &ACParameters::default(), seed)
        .map_err(err)?
        .to_string())
}

#[pymodule]
fn acsim_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCircuit>()?;
    m.add_class::<PyStateVector>()?;
    m.add_function(wrap_pyfunction!(winding_number, m)?)?;
    m.add_function(wrap_pyfunction!(winding_number_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(enclosed_area, m)?)?;
    m.add_function(wrap_pyfunction!(circle_path, m)?)?;
    m.add_function(wrap_pyfunction!(perturb_path, m)?)?;
    m.add_function(wrap_pyfunction!(u_phase_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(u_swap_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(b_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(transmission, m)?)?;
    m.add_function(wrap_pyfunction!(euler_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(phase_distance, m)?)?;
    m.add_function(wrap_pyfunction!(cnot_construction, m)?)?;
    m.add_function(wrap_pyfunction!(compile, m)?)?;
    m.add_function(wrap_pyfunction!(execute, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_deformation_csv, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_winding_csv, m)?)?;
    m.add_function(wrap_pyfunction!(demo_dj, m)?)?;
    Ok(())
}
