//! Parametric state families on finite grids, Bayesian updating, and the
//! generalized Bayesian predictive density operator.
//!
//! A family `θ ↦ ρ_θ` is discretized to grid points `θ_1..θ_K` with prior
//! weights `π_i`. `N` copies are measured by a POVM `{E_x}` on `H^{⊗N}`,
//! giving `p(x|θ) = Tr ρ_θ^{⊗N} E_x`, and the `M` unmeasured copies are in
//! the state `σ_θ = ρ_θ^{⊗M}`. Given an outcome `x`, the α-mixture of the
//! `σ_θ` under the posterior is
//!
//! ```text
//! σ_π^(α)(x) = { Σ_i π(θ_i|x) σ_i^{(1−α)/2} }^{2/(1−α)}   (α ≠ 1)
//! σ_π^(1)(x) = exp{ Σ_i π(θ_i|x) ln σ_i }
//! ```
//!
//! and the predictive operator is `σ_π^(α)(x) / C_α(x)` with
//! `C_α(x) = Tr σ_π^(α)(x)`.

use crate::divergence::{Alpha, ProbabilityVector};
use crate::error::{Error, Result};
use crate::operator::{
    checked_power_dim, eigh, spectral_log, spectral_power, tensor_power_operator,
    HermitianOperator, DEFAULT_MAX_DIM,
};
use crate::povm::Povm;
use crate::state::{tensor_power, DensityOperator};

/// Posterior weights at or below this are dropped before mixing.
pub const WEIGHT_FLOOR: f64 = 1e-15;
/// Marginals at or below this make an outcome impossible.
pub const MARGINAL_FLOOR: f64 = 1e-300;
/// Tolerance on likelihood row sums.
pub const ROW_SUM_TOL: f64 = 1e-9;
/// Likelihood entries in `[-NEGATIVE_PROB_TOL, 0)` are clamped to zero.
pub const NEGATIVE_PROB_TOL: f64 = 1e-9;

/// Grid of parameter points, each mapped to a state, with copy counts.
#[derive(Clone, Debug)]
pub struct ParametricModel {
    grid: Vec<Vec<f64>>,
    states: Vec<DensityOperator>,
    future_states: Vec<DensityOperator>,
    n_copies: usize,
    m_copies: usize,
    max_dim: usize,
}

impl ParametricModel {
    /// Builds the model and materializes `σ_θ = ρ_θ^{⊗M}` for every grid point.
    pub fn new(
        grid: Vec<Vec<f64>>,
        states: Vec<DensityOperator>,
        n_copies: usize,
        m_copies: usize,
        max_dim: usize,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidModel(
                "model needs at least one grid point".into(),
            ));
        }
        if grid.len() != states.len() {
            return Err(Error::InvalidModel(format!(
                "{} grid points but {} states",
                grid.len(),
                states.len()
            )));
        }
        if n_copies == 0 || m_copies == 0 {
            return Err(Error::InvalidModel("copy counts must be positive".into()));
        }
        let d = states[0].dim();
        if let Some(bad) = states.iter().find(|s| s.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.dim(),
            });
        }
        checked_power_dim(d, n_copies, max_dim)?;
        let future_states = states
            .iter()
            .map(|s| tensor_power(s, m_copies, max_dim))
            .collect::<Result<_>>()?;
        Ok(Self {
            grid,
            states,
            future_states,
            n_copies,
            m_copies,
            max_dim,
        })
    }

    /// Grid points indexed `0..K` with the default dimension limit.
    pub fn from_states(
        states: Vec<DensityOperator>,
        n_copies: usize,
        m_copies: usize,
    ) -> Result<Self> {
        let grid = (0..states.len()).map(|i| vec![i as f64]).collect();
        Self::new(grid, states, n_copies, m_copies, DEFAULT_MAX_DIM)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn grid(&self) -> &[Vec<f64>] {
        &self.grid
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }

    /// `σ_θ = ρ_θ^{⊗M}` for every grid point.
    pub fn future_states(&self) -> &[DensityOperator] {
        &self.future_states
    }

    pub fn n_copies(&self) -> usize {
        self.n_copies
    }

    pub fn m_copies(&self) -> usize {
        self.m_copies
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    /// Dimension `d` of a single system.
    pub fn system_dim(&self) -> usize {
        self.states[0].dim()
    }

    /// Dimension `d^N` of the measured systems.
    pub fn measured_dim(&self) -> usize {
        self.system_dim().pow(self.n_copies as u32)
    }

    /// Dimension `d^M` of the predicted systems.
    pub fn future_dim(&self) -> usize {
        self.future_states[0].dim()
    }
}

/// Prior weights over the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Prior(ProbabilityVector);

impl Prior {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        Ok(Prior(ProbabilityVector::new(weights)?))
    }

    pub fn uniform(len: usize) -> Result<Self> {
        Ok(Prior(ProbabilityVector::uniform(len)?))
    }

    pub fn point_mass(len: usize, index: usize) -> Result<Self> {
        Ok(Prior(ProbabilityVector::point_mass(len, index)?))
    }

    pub fn weights(&self) -> &[f64] {
        self.0.weights()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn check_against(&self, model: &ParametricModel) -> Result<()> {
        if self.len() != model.len() {
            return Err(Error::DimensionMismatch {
                expected: model.len(),
                found: self.len(),
            });
        }
        Ok(())
    }
}

/// `K × X` table of `p(x | θ_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LikelihoodTable {
    probs: Vec<f64>,
    n_params: usize,
    n_outcomes: usize,
}

impl LikelihoodTable {
    /// Validates nonnegative entries and unit row sums.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n_params = rows.len();
        let n_outcomes = rows.first().map_or(0, Vec::len);
        if n_params == 0 || n_outcomes == 0 {
            return Err(Error::InvalidModel("empty likelihood table".into()));
        }
        let mut probs = Vec::with_capacity(n_params * n_outcomes);
        for (theta, row) in rows.into_iter().enumerate() {
            if row.len() != n_outcomes {
                return Err(Error::DimensionMismatch {
                    expected: n_outcomes,
                    found: row.len(),
                });
            }
            for (outcome, &value) in row.iter().enumerate() {
                if value < 0.0 || !value.is_finite() {
                    return Err(Error::NegativeProbability {
                        theta,
                        outcome,
                        value,
                    });
                }
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::Numerical(format!(
                    "likelihood row {theta} sums to {total}"
                )));
            }
            probs.extend(row);
        }
        Ok(Self {
            probs,
            n_params,
            n_outcomes,
        })
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn n_outcomes(&self) -> usize {
        self.n_outcomes
    }

    pub fn get(&self, theta: usize, outcome: usize) -> f64 {
        self.probs[theta * self.n_outcomes + outcome]
    }

    pub fn row(&self, theta: usize) -> &[f64] {
        &self.probs[theta * self.n_outcomes..(theta + 1) * self.n_outcomes]
    }

    pub fn column(&self, outcome: usize) -> Vec<f64> {
        (0..self.n_params).map(|i| self.get(i, outcome)).collect()
    }
}

/// Posterior weights over the grid given an outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct Posterior {
    weights: ProbabilityVector,
    outcome: usize,
}

impl Posterior {
    pub fn new(weights: Vec<f64>, outcome: usize) -> Result<Self> {
        Ok(Self {
            weights: ProbabilityVector::new(weights)?,
            outcome,
        })
    }

    pub fn weights(&self) -> &[f64] {
        self.weights.weights()
    }

    pub fn outcome(&self) -> usize {
        self.outcome
    }

    /// Index of the largest weight; ties go to the lowest index.
    pub fn mode(&self) -> usize {
        let w = self.weights();
        let mut best = 0;
        for (i, &wi) in w.iter().enumerate() {
            if wi > w[best] {
                best = i;
            }
        }
        best
    }
}

/// The normalized α-mixture together with its normalizer `C_α(x)`.
#[derive(Clone, Debug)]
pub struct PredictiveOperator {
    pub state: DensityOperator,
    pub normalizer: f64,
    pub alpha: Alpha,
}

/// `p(x|θ_i) = Re Tr(ρ_{θ_i}^{⊗N} E_x)` for every grid point and outcome.
pub fn likelihood_table(model: &ParametricModel, povm: &Povm) -> Result<LikelihoodTable> {
    if povm.dim() != model.measured_dim() {
        return Err(Error::DimensionMismatch {
            expected: model.measured_dim(),
            found: povm.dim(),
        });
    }
    let mut rows = Vec::with_capacity(model.len());
    for (theta, rho) in model.states().iter().enumerate() {
        let joint = tensor_power(rho, model.n_copies(), model.max_dim())?;
        let mut row = Vec::with_capacity(povm.len());
        for (outcome, element) in povm.elements().iter().enumerate() {
            let p = joint.operator().trace_product(element)?.re;
            if p < -NEGATIVE_PROB_TOL {
                return Err(Error::NegativeProbability {
                    theta,
                    outcome,
                    value: p,
                });
            }
            row.push(p.max(0.0));
        }
        rows.push(row);
    }
    LikelihoodTable::new(rows)
}

/// Exchangeable state `Σ_i π_i ρ_{θ_i}^{⊗n}`.
pub fn exchangeable_state(
    model: &ParametricModel,
    prior: &Prior,
    n: usize,
) -> Result<DensityOperator> {
    prior.check_against(model)?;
    let d = model.system_dim();
    let dim = checked_power_dim(d, n, model.max_dim())?;
    let mut acc = HermitianOperator::zeros(dim);
    for (rho, &w) in model.states().iter().zip(prior.weights()) {
        if w == 0.0 {
            continue;
        }
        let power = tensor_power_operator(rho.operator(), n, model.max_dim())?;
        acc = acc.add(&power.scale(w))?;
    }
    let tr = acc.trace().re;
    if (tr - 1.0).abs() > 1e-9 {
        return Err(Error::Numerical(format!(
            "exchangeable state has trace {tr}"
        )));
    }
    DensityOperator::normalized(acc)
}

/// Marginal outcome distribution `p_x = Σ_i π_i p(x|θ_i)`.
pub fn marginal(prior: &Prior, table: &LikelihoodTable) -> Result<ProbabilityVector> {
    if prior.len() != table.n_params() {
        return Err(Error::DimensionMismatch {
            expected: table.n_params(),
            found: prior.len(),
        });
    }
    let p: Vec<f64> = (0..table.n_outcomes())
        .map(|x| {
            prior
                .weights()
                .iter()
                .enumerate()
                .map(|(i, w)| w * table.get(i, x))
                .sum()
        })
        .collect();
    ProbabilityVector::with_tolerance(p, ROW_SUM_TOL)
}

/// Bayes rule on the grid for a single outcome.
pub fn posterior(prior: &Prior, table: &LikelihoodTable, outcome: usize) -> Result<Posterior> {
    if prior.len() != table.n_params() {
        return Err(Error::DimensionMismatch {
            expected: table.n_params(),
            found: prior.len(),
        });
    }
    if outcome >= table.n_outcomes() {
        return Err(Error::InvalidModel(format!(
            "outcome {outcome} out of range"
        )));
    }
    let joint: Vec<f64> = prior
        .weights()
        .iter()
        .enumerate()
        .map(|(i, w)| w * table.get(i, outcome))
        .collect();
    let p_x: f64 = joint.iter().sum();
    if p_x <= MARGINAL_FLOOR {
        return Err(Error::ZeroMarginal { outcome });
    }
    let weights: Vec<f64> = joint.iter().map(|j| j / p_x).collect();
    Posterior::new(weights, outcome)
}

/// Unnormalized α-mixture `σ_π^(α)` of `states` and its trace `C_α`.
pub fn alpha_mixture(
    posterior: &Posterior,
    states: &[DensityOperator],
    alpha: Alpha,
) -> Result<(HermitianOperator, f64)> {
    if states.len() != posterior.weights().len() {
        return Err(Error::DimensionMismatch {
            expected: posterior.weights().len(),
            found: states.len(),
        });
    }
    let dim = states[0].dim();
    let terms: Vec<(usize, f64)> = posterior
        .weights()
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, w)| w > WEIGHT_FLOOR)
        .collect();

    let mixture = if alpha.is_plus_one() {
        let mut log_sum = HermitianOperator::zeros(dim);
        for &(i, w) in &terms {
            let log = spectral_log(&states[i].spectrum())
                .map_err(|_| Error::SingularState { index: i })?;
            log_sum = log_sum.add(&log.scale(w))?;
        }
        eigh(&log_sum).map(f64::exp)
    } else if alpha.is_minus_one() {
        let mut sum = HermitianOperator::zeros(dim);
        for &(i, w) in &terms {
            sum = sum.add(&states[i].operator().scale(w))?;
        }
        sum
    } else {
        let inner = alpha.first_exponent();
        let mut sum = HermitianOperator::zeros(dim);
        for &(i, w) in &terms {
            let p = spectral_power(&states[i].spectrum(), inner)
                .map_err(|_| Error::SingularState { index: i })?;
            sum = sum.add(&p.scale(w))?;
        }
        spectral_power(&eigh(&sum), 1.0 / inner).map_err(|e| match e {
            Error::SingularPower { .. } => Error::NonPositiveNormalizer { value: 0.0 },
            other => other,
        })?
    };
    let normalizer = mixture.trace().re;
    if !normalizer.is_finite() || normalizer <= 0.0 {
        return Err(Error::NonPositiveNormalizer { value: normalizer });
    }
    Ok((mixture, normalizer))
}

/// The generalized Bayesian predictive density operator for one outcome.
pub fn predictive_operator(
    posterior: &Posterior,
    model: &ParametricModel,
    alpha: Alpha,
) -> Result<PredictiveOperator> {
    let (mixture, normalizer) = alpha_mixture(posterior, model.future_states(), alpha)?;
    let state = DensityOperator::new(mixture.scale(1.0 / normalizer))?;
    Ok(PredictiveOperator {
        state,
        normalizer,
        alpha,
    })
}

/// Classical α-mixture of finite densities; returns the raw vector and its sum.
pub fn classical_alpha_predictive(
    posterior: &Posterior,
    densities: &[ProbabilityVector],
    alpha: Alpha,
) -> Result<(Vec<f64>, f64)> {
    let weights = posterior.weights();
    if densities.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: weights.len(),
            found: densities.len(),
        });
    }
    let len = densities[0].len();
    if let Some(bad) = densities.iter().find(|d| d.len() != len) {
        return Err(Error::DimensionMismatch {
            expected: len,
            found: bad.len(),
        });
    }
    let floor = crate::operator::EIG_FLOOR;
    let mut raw = vec![0.0; len];
    for (y, out) in raw.iter_mut().enumerate() {
        let terms = weights
            .iter()
            .zip(densities)
            .filter(|(w, _)| **w > WEIGHT_FLOOR)
            .map(|(w, d)| (*w, d.weights()[y]));
        if alpha.is_plus_one() {
            let mut acc = 0.0;
            for (w, p) in terms {
                if p <= floor {
                    return Err(Error::SupportMismatch(format!(
                        "zero density at entry {y} under the log-mixture"
                    )));
                }
                acc += w * p.ln();
            }
            *out = acc.exp();
        } else {
            let inner = alpha.first_exponent();
            let mut acc = 0.0;
            for (w, p) in terms {
                if p <= floor {
                    if inner < 0.0 {
                        return Err(Error::SupportMismatch(format!(
                            "zero density at entry {y} under a negative power"
                        )));
                    }
                    continue;
                }
                acc += w * p.powf(inner);
            }
            *out = if acc <= 0.0 {
                0.0
            } else {
                acc.powf(1.0 / inner)
            };
        }
    }
    let normalizer: f64 = raw.iter().sum();
    Ok((raw, normalizer))
}
