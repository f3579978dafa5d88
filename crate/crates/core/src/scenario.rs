//! A model, prior and measurement bundled with their likelihood table.

use crate::divergence::ProbabilityVector;
use crate::error::Result;
use crate::families::{diagonal_qubit, rotating_qubit};
use crate::model::{
    likelihood_table, marginal, posterior, LikelihoodTable, ParametricModel, Posterior, Prior,
    MARGINAL_FLOOR,
};
use crate::operator::DEFAULT_MAX_DIM;
use crate::povm::{bell_basis, computational_basis, Povm};

#[derive(Clone, Debug)]
pub struct Scenario {
    id: String,
    model: ParametricModel,
    prior: Prior,
    povm: Povm,
    table: LikelihoodTable,
    marginal: ProbabilityVector,
}

impl Scenario {
    pub fn new(
        id: impl Into<String>,
        model: ParametricModel,
        prior: Prior,
        povm: Povm,
    ) -> Result<Self> {
        let table = likelihood_table(&model, &povm)?;
        let marginal = marginal(&prior, &table)?;
        Ok(Self {
            id: id.into(),
            model,
            prior,
            povm,
            table,
            marginal,
        })
    }

    /// Equatorial qubit family `½(I + 0.72(cos θ σx + sin θ σy))` on 8 angles,
    /// uniform prior, `N = 2`, `M = 1`, product z-basis readout.
    pub fn s1() -> Self {
        let (grid, states) = rotating_qubit(8, 0.8, 0.1).expect("valid family");
        let model = ParametricModel::new(grid, states, 2, 1, DEFAULT_MAX_DIM).expect("valid model");
        Self::new(
            "s1",
            model,
            Prior::uniform(8).expect("uniform"),
            computational_basis(2, 2).expect("z basis"),
        )
        .expect("valid scenario")
    }

    /// Commuting family `diag(p, 1 − p)` on 5 points, z-basis readout of two copies.
    pub fn commuting() -> Self {
        let (grid, states) = diagonal_qubit(5).expect("valid family");
        let model = ParametricModel::new(grid, states, 2, 1, DEFAULT_MAX_DIM).expect("valid model");
        Self::new(
            "commuting",
            model,
            Prior::uniform(5).expect("uniform"),
            computational_basis(2, 2).expect("z basis"),
        )
        .expect("valid scenario")
    }

    /// The S1 family measured in the entangled Bell basis.
    pub fn bell() -> Self {
        let (grid, states) = rotating_qubit(8, 0.8, 0.1).expect("valid family");
        let model = ParametricModel::new(grid, states, 2, 1, DEFAULT_MAX_DIM).expect("valid model");
        Self::new(
            "bell",
            model,
            Prior::uniform(8).expect("uniform"),
            bell_basis(),
        )
        .expect("valid scenario")
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn model(&self) -> &ParametricModel {
        &self.model
    }

    pub fn prior(&self) -> &Prior {
        &self.prior
    }

    pub fn povm(&self) -> &Povm {
        &self.povm
    }

    pub fn table(&self) -> &LikelihoodTable {
        &self.table
    }

    /// `p_x` for every outcome.
    pub fn marginal(&self) -> &[f64] {
        self.marginal.weights()
    }

    pub fn n_outcomes(&self) -> usize {
        self.povm.len()
    }

    /// Whether the outcome has positive probability under the prior predictive.
    pub fn is_possible(&self, outcome: usize) -> bool {
        self.marginal.weights()[outcome] > MARGINAL_FLOOR
    }

    pub fn posterior(&self, outcome: usize) -> Result<Posterior> {
        posterior(&self.prior, &self.table, outcome)
    }
}
