//! Density operators and random state generation.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::operator::{eigh, tensor_power_operator, CMatrix, HermitianOperator, Spectrum, PSD_TOL};

/// Tolerance on `|Re Tr ρ − 1|`.
pub const TRACE_TOL: f64 = 1e-10;
/// Tolerance on `|Im Tr ρ|`.
pub const TRACE_IM_TOL: f64 = 1e-12;

/// A positive semidefinite, unit-trace Hermitian operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    base: HermitianOperator,
}

impl DensityOperator {
    pub fn new(base: HermitianOperator) -> Result<Self> {
        let tr = base.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_IM_TOL {
            return Err(Error::InvalidTrace {
                re: tr.re,
                im: tr.im,
            });
        }
        let min_eigenvalue = base.min_eigenvalue();
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self { base })
    }

    pub fn from_matrix(mat: CMatrix) -> Result<Self> {
        Self::new(HermitianOperator::new(mat)?)
    }

    /// Divides a positive operator by its (real) trace and validates the result.
    pub fn normalized(op: HermitianOperator) -> Result<Self> {
        let tr = op.trace().re;
        if !tr.is_finite() || tr <= 0.0 {
            return Err(Error::InvalidTrace {
                re: tr,
                im: op.trace().im,
            });
        }
        Self::new(op.scale(1.0 / tr))
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(HermitianOperator::from_real_diagonal(probs))
    }

    pub fn pure(ket: &[Complex64]) -> Result<Self> {
        Self::new(HermitianOperator::projector(ket)?)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            base: HermitianOperator::identity(dim).scale(1.0 / dim as f64),
        }
    }

    /// Qubit state `½(I + r·σ)` for a Bloch vector with `|r| ≤ 1`.
    pub fn qubit(bloch: [f64; 3]) -> Result<Self> {
        let [x, y, z] = bloch;
        let entries = [
            Complex64::new(0.5 * (1.0 + z), 0.0),
            Complex64::new(0.5 * x, -0.5 * y),
            Complex64::new(0.5 * x, 0.5 * y),
            Complex64::new(0.5 * (1.0 - z), 0.0),
        ];
        Self::new(HermitianOperator::from_rows(2, &entries)?)
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.base
    }

    pub fn into_operator(self) -> HermitianOperator {
        self.base
    }

    pub fn matrix(&self) -> &CMatrix {
        self.base.matrix()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn spectrum(&self) -> Spectrum {
        eigh(&self.base)
    }

    /// `(1 − rate) self + rate other`, renormalized.
    pub fn mix(&self, other: &DensityOperator, rate: f64) -> Result<Self> {
        if rate == 0.0 {
            return Ok(self.clone());
        }
        let mixed = self.base.scale(1.0 - rate).add(&other.base.scale(rate))?;
        Self::normalized(mixed)
    }

    /// Trace-norm distance `‖self − other‖₁`.
    pub fn trace_distance(&self, other: &DensityOperator) -> Result<f64> {
        Ok(self.base.sub(&other.base)?.trace_norm())
    }

    pub fn is_full_rank(&self) -> bool {
        self.base.min_eigenvalue() > crate::operator::EIG_FLOOR
    }
}

/// `ρ^{⊗n}`, bounded by `max_dim`.
pub fn tensor_power(rho: &DensityOperator, n: usize, max_dim: usize) -> Result<DensityOperator> {
    let base = tensor_power_operator(rho.operator(), n, max_dim)?;
    let tr = base.trace();
    if (tr.re - 1.0).abs() > 1e-9 {
        return Err(Error::Numerical(format!(
            "tensor power lost unit trace ({})",
            tr.re
        )));
    }
    Ok(DensityOperator { base })
}

/// Random full-rank state `G G† / Tr(G G†)` from a complex Ginibre matrix.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityOperator {
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let gg = HermitianOperator::symmetrized(&g * g.adjoint());
    DensityOperator::normalized(gg).expect("Ginibre product is positive with positive trace")
}

/// Random pure state from a normalized complex Gaussian vector.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityOperator {
    let ket: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    DensityOperator::pure(&ket).expect("Gaussian vector is nonzero")
}

/// Random diagonal state with entries bounded below by `floor / dim` before normalization.
pub fn random_diagonal_state<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    floor: f64,
) -> DensityOperator {
    let raw: Vec<f64> = (0..dim).map(|_| floor + rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    let probs: Vec<f64> = raw.iter().map(|p| p / total).collect();
    DensityOperator::diagonal(&probs).expect("normalized positive diagonal")
}
