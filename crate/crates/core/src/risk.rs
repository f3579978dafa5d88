//! Averaged α-divergence risk and numerical certification of Bayes optimality.
//!
//! For an estimator `x ↦ σ̂(x)` the averaged risk is
//! `Σ_i π_i Σ_x p(x|θ_i) D^(α)(σ_i ‖ σ̂(x))`. The gap to the predictive
//! operator `σ̃` telescopes into
//!
//! ```text
//! R(σ̂) − R(σ̃) = Σ_x p_x C_α(x)^{(1−α)/2} D^(α)(σ̃(x) ‖ σ̂(x))
//! ```
//!
//! which is evaluated here independently of the two risks. At `α = −1` the
//! weight is `C = 1`; at `α = +1` the exponent vanishes and the weight is
//! again 1, with the expected log-normalizer cancelling between the risks.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::divergence::{quantum_alpha_divergence, Alpha};
use crate::error::{Error, Result};
use crate::model::{alpha_mixture, exchangeable_state, predictive_operator, MARGINAL_FLOOR};
use crate::optim::{minimize_posterior_risk, OptimizerOptions};
use crate::scenario::Scenario;
use crate::state::{random_state, DensityOperator};

/// Smallest risk gap accepted as nonnegative.
pub const DOMINANCE_TOL: f64 = 1e-9;
/// Largest accepted `|gap_direct − gap_identity|`.
pub const IDENTITY_TOL: f64 = 1e-8;
/// Largest accepted trace distance between the optimizer and the closed form.
pub const ARGMIN_TOL: f64 = 1e-4;
/// Outcomes with smaller marginal are skipped by the optimizer cross-check.
pub const ARGMIN_MARGINAL_FLOOR: f64 = 1e-12;
/// Default seed for the perturbation family.
pub const DEFAULT_SEED: u64 = 0x5eed_a1fa_2024_0001;
pub const DEFAULT_PERTURB_RATES: [f64; 3] = [0.01, 0.05, 0.1];
pub const DEFAULT_N_PERTURB: usize = 32;

/// A predictive density operator per outcome; `None` for impossible outcomes.
#[derive(Clone, Debug)]
pub struct Estimator {
    name: String,
    estimates: Vec<Option<DensityOperator>>,
}

impl Estimator {
    pub fn new(name: impl Into<String>, estimates: Vec<Option<DensityOperator>>) -> Self {
        Self {
            name: name.into(),
            estimates,
        }
    }

    /// The same state for every outcome.
    pub fn constant(name: impl Into<String>, state: DensityOperator, n_outcomes: usize) -> Self {
        Self::new(name, vec![Some(state); n_outcomes])
    }

    /// Evaluates `f` on every outcome the scenario can produce.
    pub fn from_fn<F>(name: impl Into<String>, scenario: &Scenario, mut f: F) -> Result<Self>
    where
        F: FnMut(usize) -> Result<DensityOperator>,
    {
        let estimates = (0..scenario.n_outcomes())
            .map(|x| scenario.is_possible(x).then(|| f(x)).transpose())
            .collect::<Result<_>>()?;
        Ok(Self::new(name, estimates))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn estimate(&self, outcome: usize) -> Option<&DensityOperator> {
        self.estimates.get(outcome).and_then(Option::as_ref)
    }

    pub fn n_outcomes(&self) -> usize {
        self.estimates.len()
    }
}

/// The generalized Bayesian predictive operator with its normalizers `C_α(x)`.
#[derive(Clone, Debug)]
pub struct BayesPredictor {
    pub estimator: Estimator,
    pub normalizers: Vec<Option<f64>>,
    pub alpha: Alpha,
}

pub fn bayes_predictor(scenario: &Scenario, alpha: Alpha) -> Result<BayesPredictor> {
    let mut estimates = Vec::with_capacity(scenario.n_outcomes());
    let mut normalizers = Vec::with_capacity(scenario.n_outcomes());
    for x in 0..scenario.n_outcomes() {
        if scenario.is_possible(x) {
            let post = scenario.posterior(x)?;
            let pred = predictive_operator(&post, scenario.model(), alpha)?;
            estimates.push(Some(pred.state));
            normalizers.push(Some(pred.normalizer));
        } else {
            estimates.push(None);
            normalizers.push(None);
        }
    }
    Ok(BayesPredictor {
        estimator: Estimator::new("bayes", estimates),
        normalizers,
        alpha,
    })
}

fn missing_estimate(est: &Estimator, outcome: usize) -> Error {
    Error::InvalidModel(format!(
        "estimator {} has no estimate for possible outcome {outcome}",
        est.name()
    ))
}

/// `Σ_i π_i Σ_x p(x|θ_i) D^(α)(σ_i ‖ σ̂(x))` as an exact double sum.
pub fn average_risk(scenario: &Scenario, est: &Estimator, alpha: Alpha) -> Result<f64> {
    let futures = scenario.model().future_states();
    let table = scenario.table();
    let mut total = 0.0;
    for (theta, (&prior_w, sigma)) in scenario.prior().weights().iter().zip(futures).enumerate() {
        if prior_w == 0.0 {
            continue;
        }
        let mut inner = 0.0;
        for x in 0..scenario.n_outcomes() {
            let p = table.get(theta, x);
            if p <= MARGINAL_FLOOR {
                continue;
            }
            let hat = est.estimate(x).ok_or_else(|| missing_estimate(est, x))?;
            let d = quantum_alpha_divergence(sigma, hat, alpha).map_err(|e| Error::AtTerm {
                theta,
                outcome: x,
                source: Box::new(e),
            })?;
            inner += p * d;
        }
        total += prior_w * inner;
    }
    Ok(total)
}

/// `R(σ̂) − R(σ̃)` from two independent double sums.
pub fn risk_gap_direct(scenario: &Scenario, est: &Estimator, alpha: Alpha) -> Result<f64> {
    let bayes = bayes_predictor(scenario, alpha)?;
    Ok(average_risk(scenario, est, alpha)? - average_risk(scenario, &bayes.estimator, alpha)?)
}

/// `Σ_x p_x C_α(x)^{(1−α)/2} D^(α)(σ̃(x) ‖ σ̂(x))`.
pub fn risk_gap_identity(scenario: &Scenario, est: &Estimator, alpha: Alpha) -> Result<f64> {
    let bayes = bayes_predictor(scenario, alpha)?;
    gap_identity_with(scenario, &bayes, est)
}

fn gap_identity_with(scenario: &Scenario, bayes: &BayesPredictor, est: &Estimator) -> Result<f64> {
    let alpha = bayes.alpha;
    let mut total = 0.0;
    for (x, &p_x) in scenario.marginal().iter().enumerate() {
        if p_x <= MARGINAL_FLOOR {
            continue;
        }
        let (Some(tilde), Some(c)) = (bayes.estimator.estimate(x), bayes.normalizers[x]) else {
            return Err(missing_estimate(&bayes.estimator, x));
        };
        let hat = est.estimate(x).ok_or_else(|| missing_estimate(est, x))?;
        let weight = c.powf(alpha.first_exponent());
        let d = quantum_alpha_divergence(tilde, hat, alpha).map_err(|e| Error::AtOutcome {
            outcome: x,
            source: Box::new(e),
        })?;
        total += p_x * weight * d;
    }
    Ok(total)
}

#[derive(Clone, Debug)]
pub struct ZooOptions {
    pub seed: u64,
    /// Number of random directions; each is applied at every rate.
    pub n_perturb: usize,
    pub rates: Vec<f64>,
}

impl Default for ZooOptions {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            n_perturb: DEFAULT_N_PERTURB,
            rates: DEFAULT_PERTURB_RATES.to_vec(),
        }
    }
}

/// One random full-rank state per outcome.
#[derive(Clone, Debug)]
pub struct PerturbationDirection(Vec<DensityOperator>);

impl PerturbationDirection {
    pub fn random(rng: &mut ChaCha8Rng, n_outcomes: usize, dim: usize) -> Self {
        Self((0..n_outcomes).map(|_| random_state(rng, dim)).collect())
    }

    /// `(1 − rate) σ̂(x) + rate ω(x)` for every outcome.
    pub fn apply(&self, name: impl Into<String>, base: &Estimator, rate: f64) -> Result<Estimator> {
        let estimates = base
            .estimates
            .iter()
            .zip(&self.0)
            .map(|(e, w)| e.as_ref().map(|s| s.mix(w, rate)).transpose())
            .collect::<Result<_>>()?;
        Ok(Estimator::new(name, estimates))
    }
}

/// Seeded perturbation directions for a scenario.
pub fn perturbation_directions(
    scenario: &Scenario,
    options: &ZooOptions,
) -> Vec<PerturbationDirection> {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let dim = scenario.model().future_dim();
    (0..options.n_perturb)
        .map(|_| PerturbationDirection::random(&mut rng, scenario.n_outcomes(), dim))
        .collect()
}

/// Plug-in at the posterior mode.
pub fn plugin_mode_estimator(scenario: &Scenario) -> Result<Estimator> {
    let futures = scenario.model().future_states();
    Estimator::from_fn("plugin_mode", scenario, |x| {
        Ok(futures[scenario.posterior(x)?.mode()].clone())
    })
}

/// Posterior arithmetic mixture, the optimum under relative entropy.
pub fn posterior_mean_estimator(scenario: &Scenario) -> Result<Estimator> {
    Estimator::from_fn("posterior_mean", scenario, |x| {
        let post = scenario.posterior(x)?;
        let (mixture, _) =
            alpha_mixture(&post, scenario.model().future_states(), Alpha::MINUS_ONE)?;
        DensityOperator::normalized(mixture)
    })
}

/// The prior predictive state `Σ_i π_i σ_i`, ignoring the data.
pub fn prior_predictive_estimator(scenario: &Scenario) -> Result<Estimator> {
    let model = scenario.model();
    let state = exchangeable_state(model, scenario.prior(), model.m_copies())?;
    Ok(Estimator::constant(
        "prior_predictive",
        state,
        scenario.n_outcomes(),
    ))
}

fn perturbation_name(direction: usize, rate: f64) -> String {
    format!("perturb_{direction:02}_r{rate}")
}

/// Candidate estimators that the predictive operator must dominate.
///
/// Order: plug-in at the posterior mode, posterior mean, prior predictive,
/// then the perturbations of `bayes` direction by direction with rates in
/// the given order.
pub fn estimator_zoo(
    scenario: &Scenario,
    bayes: &Estimator,
    options: &ZooOptions,
) -> Result<Vec<Estimator>> {
    let mut zoo = vec![
        plugin_mode_estimator(scenario)?,
        posterior_mean_estimator(scenario)?,
        prior_predictive_estimator(scenario)?,
    ];
    for (k, direction) in perturbation_directions(scenario, options)
        .iter()
        .enumerate()
    {
        for &rate in &options.rates {
            zoo.push(direction.apply(perturbation_name(k, rate), bayes, rate)?);
        }
    }
    Ok(zoo)
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub zoo: ZooOptions,
    pub optimizer: OptimizerOptions,
    /// Replaces the predictive operator under test by a deliberately worse one.
    pub inject_suboptimal_bayes: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimatorRisk {
    pub name: String,
    pub risk: f64,
    pub gap_direct: f64,
    pub gap_identity: f64,
    pub residual: f64,
    /// Largest trace distance to the numerical minimizer over the checked outcomes.
    pub optimizer_distance: f64,
}

#[derive(Clone, Debug)]
pub struct OutcomeCheck {
    pub outcome: usize,
    pub marginal: f64,
    pub trace_distance: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Dominance,
    GapIdentity,
    Argmin,
}

impl Check {
    pub fn as_str(self) -> &'static str {
        match self {
            Check::Dominance => "dominance",
            Check::GapIdentity => "gap identity",
            Check::Argmin => "argmin agreement",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub check: Check,
    pub alpha: f64,
    pub estimator: String,
    pub outcome: Option<String>,
    pub value: f64,
}

impl Violation {
    pub fn to_error(&self) -> Error {
        let (bound, rel) = match self.check {
            Check::Dominance => (-DOMINANCE_TOL, "<"),
            Check::GapIdentity => (IDENTITY_TOL, ">"),
            Check::Argmin => (ARGMIN_TOL, ">"),
        };
        Error::VerificationFailure {
            check: self.check.as_str().into(),
            alpha: self.alpha,
            estimator: self.estimator.clone(),
            outcome: self.outcome.clone().unwrap_or_else(|| "all".into()),
            detail: format!("{:e} {rel} {bound:e}", self.value),
        }
    }
}

/// Per-α verification results.
#[derive(Clone, Debug)]
pub struct RiskReport {
    pub alpha: f64,
    pub bayes_risk: f64,
    /// The predictive operator under test is listed first under the name `bayes`.
    pub estimators: Vec<EstimatorRisk>,
    pub outcomes: Vec<OutcomeCheck>,
    pub violations: Vec<Violation>,
    pub wall_time: Duration,
}

impl RiskReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn max_optimizer_trace_distance(&self) -> f64 {
        self.outcomes
            .iter()
            .fold(0.0, |m, o| m.max(o.trace_distance))
    }

    pub fn max_residual(&self) -> f64 {
        self.estimators.iter().fold(0.0, |m, e| m.max(e.residual))
    }

    pub fn min_gap(&self) -> f64 {
        self.estimators
            .iter()
            .map(|e| e.gap_direct)
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether `|α| ≤ 3`.
    pub fn interpretable(&self) -> bool {
        self.alpha.abs() <= 3.0
    }
}

fn corrupt(bayes: &BayesPredictor, dim: usize) -> Result<Estimator> {
    let mut diag = vec![0.0; dim];
    diag[0] = 1.0;
    let spike = DensityOperator::diagonal(&diag)?;
    let estimates = bayes
        .estimator
        .estimates
        .iter()
        .map(|e| e.as_ref().map(|s| s.mix(&spike, 0.25)).transpose())
        .collect::<Result<_>>()?;
    Ok(Estimator::new("bayes", estimates))
}

/// Evaluates every check for one α and records violations instead of failing.
pub fn evaluate_alpha(
    scenario: &Scenario,
    alpha: Alpha,
    options: &VerifyOptions,
) -> Result<RiskReport> {
    let start = Instant::now();
    if !alpha.is_interpretable() {
        log::warn!("alpha = {alpha} lies outside |alpha| <= 3; the divergence is computed but has no interpretation as a measure");
    }
    let genuine = bayes_predictor(scenario, alpha)?;
    let mut zoo = estimator_zoo(scenario, &genuine.estimator, &options.zoo)?;
    let under_test = if options.inject_suboptimal_bayes {
        let mut honest = genuine.estimator.clone();
        honest.name = "uncorrupted_bayes".into();
        zoo.push(honest);
        corrupt(&genuine, scenario.model().future_dim())?
    } else {
        genuine.estimator.clone()
    };

    let init = DensityOperator::maximally_mixed(scenario.model().future_dim());
    let mut violations = Vec::new();
    let mut outcomes = Vec::new();
    let mut optima = Vec::new();
    for (x, &p_x) in scenario.marginal().iter().enumerate() {
        if p_x <= ARGMIN_MARGINAL_FLOOR {
            continue;
        }
        let post = scenario.posterior(x)?;
        let result = minimize_posterior_risk(
            &post,
            scenario.model().future_states(),
            alpha,
            &init,
            &options.optimizer,
        )?;
        if let Err(e) = result.check(&options.optimizer) {
            log::warn!("alpha = {alpha}, outcome {}: {e}", scenario.povm().label(x));
        }
        let closed = under_test
            .estimate(x)
            .ok_or_else(|| missing_estimate(&under_test, x))?;
        let trace_distance = result.state.trace_distance(closed)?;
        if trace_distance > ARGMIN_TOL {
            violations.push(Violation {
                check: Check::Argmin,
                alpha: alpha.value(),
                estimator: under_test.name().into(),
                outcome: Some(scenario.povm().label(x).into()),
                value: trace_distance,
            });
        }
        outcomes.push(OutcomeCheck {
            outcome: x,
            marginal: p_x,
            trace_distance,
            iterations: result.iterations,
            converged: result.converged,
        });
        optima.push((x, result.state));
    }
    let distance_to_optima = |est: &Estimator| -> Result<f64> {
        let mut worst = 0.0f64;
        for (x, optimum) in &optima {
            let e = est.estimate(*x).ok_or_else(|| missing_estimate(est, *x))?;
            worst = worst.max(optimum.trace_distance(e)?);
        }
        Ok(worst)
    };

    let bayes_risk = average_risk(scenario, &under_test, alpha)?;
    let mut estimators = Vec::with_capacity(zoo.len() + 1);
    let self_identity = gap_identity_with(scenario, &genuine, &under_test)?;
    estimators.push(EstimatorRisk {
        name: under_test.name().into(),
        risk: bayes_risk,
        gap_direct: 0.0,
        gap_identity: self_identity,
        residual: self_identity.abs(),
        optimizer_distance: distance_to_optima(&under_test)?,
    });
    for est in &zoo {
        let risk = average_risk(scenario, est, alpha)?;
        let gap_direct = risk - bayes_risk;
        let gap_identity = gap_identity_with(scenario, &genuine, est)?;
        estimators.push(EstimatorRisk {
            name: est.name().into(),
            risk,
            gap_direct,
            gap_identity,
            residual: (gap_direct - gap_identity).abs(),
            optimizer_distance: distance_to_optima(est)?,
        });
    }
    for e in &estimators {
        if e.gap_direct < -DOMINANCE_TOL {
            violations.push(Violation {
                check: Check::Dominance,
                alpha: alpha.value(),
                estimator: e.name.clone(),
                outcome: None,
                value: e.gap_direct,
            });
        }
        if e.residual > IDENTITY_TOL {
            violations.push(Violation {
                check: Check::GapIdentity,
                alpha: alpha.value(),
                estimator: e.name.clone(),
                outcome: None,
                value: e.residual,
            });
        }
    }

    Ok(RiskReport {
        alpha: alpha.value(),
        bayes_risk,
        estimators,
        outcomes,
        violations,
        wall_time: start.elapsed(),
    })
}

/// Runs [`evaluate_alpha`] for each α in order.
pub fn evaluate_theorem(
    scenario: &Scenario,
    alphas: &[Alpha],
    options: &VerifyOptions,
) -> Result<Vec<RiskReport>> {
    alphas
        .iter()
        .map(|&a| evaluate_alpha(scenario, a, options))
        .collect()
}

/// Like [`evaluate_theorem`] but fails on the first violated check.
pub fn verify_theorem(
    scenario: &Scenario,
    alphas: &[Alpha],
    options: &VerifyOptions,
) -> Result<Vec<RiskReport>> {
    let reports = evaluate_theorem(scenario, alphas, options)?;
    if let Some(v) = reports.iter().flat_map(|r| &r.violations).next() {
        return Err(v.to_error());
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ParametricModel, Prior};
    use crate::povm::{computational_basis, trivial};
    use approx::assert_abs_diff_eq;

    fn a(v: f64) -> Alpha {
        Alpha::new(v).unwrap()
    }

    fn single_point() -> Scenario {
        let state = DensityOperator::qubit([0.2, -0.3, 0.4]).unwrap();
        let model = ParametricModel::from_states(vec![state], 2, 1).unwrap();
        Scenario::new(
            "single",
            model,
            Prior::uniform(1).unwrap(),
            computational_basis(2, 2).unwrap(),
        )
        .unwrap()
    }

    fn uninformative() -> Scenario {
        let states = vec![
            DensityOperator::diagonal(&[0.3, 0.7]).unwrap(),
            DensityOperator::diagonal(&[0.7, 0.3]).unwrap(),
        ];
        let model = ParametricModel::from_states(states, 1, 1).unwrap();
        Scenario::new("flat", model, Prior::uniform(2).unwrap(), trivial(2)).unwrap()
    }

    #[test]
    fn perfect_estimator_has_zero_risk() {
        let s = single_point();
        let truth = s.model().future_states()[0].clone();
        let est = Estimator::constant("truth", truth, s.n_outcomes());
        for v in [-2.0, -1.0, 0.0, 0.5, 1.0, 2.0] {
            assert_abs_diff_eq!(average_risk(&s, &est, a(v)).unwrap(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn uninformative_relative_entropy_risk() {
        let s = uninformative();
        let est = Estimator::constant("half", DensityOperator::maximally_mixed(2), 1);
        let kl = |p: [f64; 2]| p.iter().map(|pi| pi * (pi / 0.5).ln()).sum::<f64>();
        let expected = 0.5 * kl([0.3, 0.7]) + 0.5 * kl([0.7, 0.3]);
        assert_abs_diff_eq!(expected, 0.0822829, epsilon = 1e-7);
        assert_abs_diff_eq!(
            average_risk(&s, &est, Alpha::MINUS_ONE).unwrap(),
            expected,
            epsilon = 1e-14
        );
        // the predictive operator is I/2 here, so the gap to it vanishes
        assert_abs_diff_eq!(
            risk_gap_direct(&s, &est, Alpha::MINUS_ONE).unwrap(),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn self_gap_is_zero() {
        let s = Scenario::bell();
        for v in [-1.0, 0.0, 0.5, 1.0] {
            let bayes = bayes_predictor(&s, a(v)).unwrap();
            assert_abs_diff_eq!(
                risk_gap_direct(&s, &bayes.estimator, a(v)).unwrap(),
                0.0,
                epsilon = 1e-10
            );
            assert_abs_diff_eq!(
                risk_gap_identity(&s, &bayes.estimator, a(v)).unwrap(),
                0.0,
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn missing_estimate_is_an_error() {
        let s = single_point();
        let est = Estimator::new("empty", vec![None; s.n_outcomes()]);
        assert!(average_risk(&s, &est, a(0.0)).is_err());
    }

    #[test]
    fn support_error_carries_context() {
        let s = single_point();
        let pure = DensityOperator::diagonal(&[1.0, 0.0]).unwrap();
        let est = Estimator::constant("pure", pure, s.n_outcomes());
        let err = average_risk(&s, &est, Alpha::MINUS_ONE).unwrap_err();
        assert!(matches!(
            err,
            Error::AtTerm {
                theta: 0,
                outcome: 0,
                ..
            }
        ));
    }

    #[test]
    fn zoo_layout() {
        let s = Scenario::s1();
        let bayes = bayes_predictor(&s, a(0.0)).unwrap();
        let zoo = estimator_zoo(&s, &bayes.estimator, &ZooOptions::default()).unwrap();
        assert_eq!(
            zoo.len(),
            3 + DEFAULT_N_PERTURB * DEFAULT_PERTURB_RATES.len()
        );
        assert_eq!(zoo[0].name(), "plugin_mode");
        assert_eq!(zoo[3].name(), "perturb_00_r0.01");
        let again = estimator_zoo(&s, &bayes.estimator, &ZooOptions::default()).unwrap();
        assert_eq!(zoo[10].estimate(2), again[10].estimate(2));
    }

    #[test]
    fn zero_rate_perturbation_is_bayes() {
        let s = Scenario::bell();
        let bayes = bayes_predictor(&s, a(0.5)).unwrap();
        let dirs = perturbation_directions(&s, &ZooOptions::default());
        let same = dirs[0].apply("p", &bayes.estimator, 0.0).unwrap();
        for x in 0..s.n_outcomes() {
            assert_eq!(same.estimate(x), bayes.estimator.estimate(x));
        }
    }

    #[test]
    fn degenerate_scenario_verifies_with_zero_bayes_risk() {
        let s = single_point();
        let reports =
            verify_theorem(&s, &[a(-1.0), a(0.0), a(1.0)], &VerifyOptions::default()).unwrap();
        for r in reports {
            assert_abs_diff_eq!(r.bayes_risk, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn injected_corruption_fails_verification() {
        let s = Scenario::bell();
        let options = VerifyOptions {
            inject_suboptimal_bayes: true,
            ..VerifyOptions::default()
        };
        let err = verify_theorem(&s, &[a(0.0)], &options).unwrap_err();
        assert!(matches!(err, Error::VerificationFailure { .. }));
    }
}
