//! Python bindings for the `alphapred` crate.

use alphapred::divergence::{self, Alpha, ProbabilityVector};
use alphapred::experiments::{self, Overrides, RunOptions};
use alphapred::model::{self, ParametricModel, Posterior};
use alphapred::operator::{eigh, HermitianOperator};
use alphapred::risk;
use alphapred::scenario;
use alphapred::state::{self, DensityOperator};
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

create_exception!(alphapred, AlphaPredError, PyException);

fn to_py(e: alphapred::Error) -> PyErr {
    AlphaPredError::new_err(e.to_string())
}

fn to_alpha(value: f64) -> PyResult<Alpha> {
    Alpha::new(value).map_err(to_py)
}

/// Row-major square matrix of complex entries.
fn operator_from_rows(rows: Vec<Vec<Complex64>>) -> alphapred::Result<HermitianOperator> {
    let dim = rows.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
        return Err(alphapred::Error::NotSquare {
            rows: dim,
            cols: bad.len(),
        });
    }
    let flat: Vec<Complex64> = rows.into_iter().flatten().collect();
    HermitianOperator::from_rows(dim, &flat)
}

fn rows_of(op: &HermitianOperator) -> Vec<Vec<Complex64>> {
    let m = op.matrix();
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// A validated density matrix.
#[pyclass(name = "DensityMatrix", module = "alphapred", frozen, from_py_object)]
#[derive(Clone)]
struct PyDensityMatrix(DensityOperator);

#[pymethods]
impl PyDensityMatrix {
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        operator_from_rows(rows)
            .and_then(DensityOperator::new)
            .map(Self)
            .map_err(to_py)
    }

    #[staticmethod]
    fn diagonal(probs: Vec<f64>) -> PyResult<Self> {
        DensityOperator::diagonal(&probs).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn qubit(bloch: [f64; 3]) -> PyResult<Self> {
        DensityOperator::qubit(bloch).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn maximally_mixed(dim: usize) -> Self {
        Self(DensityOperator::maximally_mixed(dim))
    }

    /// Full-rank Ginibre state from a seeded generator.
    #[staticmethod]
    fn random(dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self(state::random_state(&mut rng, dim))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn to_list(&self) -> Vec<Vec<Complex64>> {
        rows_of(self.0.operator())
    }

    /// Ascending eigenvalues.
    fn eigenvalues(&self) -> Vec<f64> {
        eigh(self.0.operator()).eigenvalues().to_vec()
    }

    fn trace_distance(&self, other: &PyDensityMatrix) -> PyResult<f64> {
        self.0.trace_distance(&other.0).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(dim={})", self.0.dim())
    }
}

#[pyfunction]
fn alpha_divergence(rho: &PyDensityMatrix, sigma: &PyDensityMatrix, alpha: f64) -> PyResult<f64> {
    divergence::quantum_alpha_divergence(&rho.0, &sigma.0, to_alpha(alpha)?).map_err(to_py)
}

#[pyfunction]
fn classical_alpha_divergence(p: Vec<f64>, q: Vec<f64>, alpha: f64) -> PyResult<f64> {
    let p = ProbabilityVector::new(p).map_err(to_py)?;
    let q = ProbabilityVector::new(q).map_err(to_py)?;
    divergence::classical_alpha_divergence(&p, &q, to_alpha(alpha)?).map_err(to_py)
}

#[pyfunction]
fn relative_entropy(rho: &PyDensityMatrix, sigma: &PyDensityMatrix) -> PyResult<f64> {
    divergence::relative_entropy(&rho.0, &sigma.0).map_err(to_py)
}

#[pyfunction]
fn fidelity(rho: &PyDensityMatrix, sigma: &PyDensityMatrix) -> PyResult<f64> {
    divergence::fidelity(&rho.0, &sigma.0).map_err(to_py)
}

/// The normalized α-mixture of `states` under `weights`, with its normalizer.
#[pyfunction]
fn predictive_operator(
    states: Vec<PyDensityMatrix>,
    weights: Vec<f64>,
    alpha: f64,
) -> PyResult<(PyDensityMatrix, f64)> {
    let states = states.into_iter().map(|s| s.0).collect();
    let model = ParametricModel::from_states(states, 1, 1).map_err(to_py)?;
    let post = Posterior::new(weights, 0).map_err(to_py)?;
    let pred = model::predictive_operator(&post, &model, to_alpha(alpha)?).map_err(to_py)?;
    Ok((PyDensityMatrix(pred.state), pred.normalizer))
}

/// A model, prior and measurement with its likelihood table.
#[pyclass(name = "Scenario", module = "alphapred", frozen)]
struct PyScenario(scenario::Scenario);

#[pymethods]
impl PyScenario {
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        match name {
            "s1" => Ok(Self(scenario::Scenario::s1())),
            "commuting" => Ok(Self(scenario::Scenario::commuting())),
            "bell" => Ok(Self(scenario::Scenario::bell())),
            other => Err(AlphaPredError::new_err(format!(
                "unknown scenario '{other}' (expected s1, commuting or bell)"
            ))),
        }
    }

    #[staticmethod]
    fn from_config(path: std::path::PathBuf) -> PyResult<Self> {
        experiments::parse_config(path)
            .and_then(|c| c.build_scenario())
            .map(Self)
            .map_err(to_py)
    }

    #[getter]
    fn id(&self) -> String {
        self.0.id().to_string()
    }

    #[getter]
    fn outcome_labels(&self) -> Vec<String> {
        self.0.povm().labels().to_vec()
    }

    #[getter]
    fn marginal(&self) -> Vec<f64> {
        self.0.marginal().to_vec()
    }

    fn posterior(&self, outcome: usize) -> PyResult<Vec<f64>> {
        if outcome >= self.0.n_outcomes() {
            return Err(AlphaPredError::new_err(format!(
                "outcome {outcome} out of range for {} outcomes",
                self.0.n_outcomes()
            )));
        }
        self.0
            .posterior(outcome)
            .map(|p| p.weights().to_vec())
            .map_err(to_py)
    }

    /// The predictive operator for every outcome; `None` where the outcome is impossible.
    fn bayes_predictor(&self, alpha: f64) -> PyResult<Vec<Option<PyDensityMatrix>>> {
        let bayes = risk::bayes_predictor(&self.0, to_alpha(alpha)?).map_err(to_py)?;
        Ok((0..self.0.n_outcomes())
            .map(|x| bayes.estimator.estimate(x).cloned().map(PyDensityMatrix))
            .collect())
    }

    fn bayes_risk(&self, alpha: f64) -> PyResult<f64> {
        let a = to_alpha(alpha)?;
        let bayes = risk::bayes_predictor(&self.0, a).map_err(to_py)?;
        risk::average_risk(&self.0, &bayes.estimator, a).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(id={:?}, grid={}, outcomes={})",
            self.0.id(),
            self.0.model().len(),
            self.0.n_outcomes()
        )
    }
}

/// Runs a configuration file; returns the exit status and the CSV rows as dicts.
#[pyfunction]
#[pyo3(signature = (path, seed=None, inject_suboptimal_bayes=false))]
fn verify(
    py: Python<'_>,
    path: std::path::PathBuf,
    seed: Option<u64>,
    inject_suboptimal_bayes: bool,
) -> PyResult<(i32, Vec<Py<PyDict>>)> {
    let overrides = Overrides {
        seed,
        ..Overrides::default()
    };
    let config = experiments::parse_config_with(path, &overrides).map_err(to_py)?;
    let options = RunOptions {
        inject_suboptimal_bayes,
        ..RunOptions::default()
    };
    let outcome = py
        .detach(|| experiments::run(&config, &options))
        .map_err(to_py)?;
    let mut rows = Vec::with_capacity(outcome.rows.len());
    for r in &outcome.rows {
        let d = PyDict::new(py);
        d.set_item("scenario", &r.scenario)?;
        d.set_item("alpha", r.alpha)?;
        d.set_item("estimator", &r.estimator)?;
        d.set_item("risk", r.risk)?;
        d.set_item("bayes_risk", r.bayes_risk)?;
        d.set_item("gap_direct", r.gap_direct)?;
        d.set_item("gap_identity", r.gap_identity)?;
        d.set_item("residual", r.residual)?;
        d.set_item("opt_trace_dist", r.opt_trace_dist)?;
        d.set_item("wall_time_s", r.wall_time_s)?;
        rows.push(d.unbind());
    }
    Ok((outcome.exit_code(), rows))
}

#[pymodule]
#[pyo3(name = "alphapred")]
fn alphapred_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("AlphaPredError", m.py().get_type::<AlphaPredError>())?;
    m.add_class::<PyDensityMatrix>()?;
    m.add_class::<PyScenario>()?;
    m.add_function(wrap_pyfunction!(alpha_divergence, m)?)?;
    m.add_function(wrap_pyfunction!(classical_alpha_divergence, m)?)?;
    m.add_function(wrap_pyfunction!(relative_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(predictive_operator, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
