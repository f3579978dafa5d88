//! Quantum and classical α-divergences, relative entropy and fidelity.
//!
//! For `α ≠ ±1`
//!
//! ```text
//! D^(α)(ρ‖σ) = 4/(1 − α²) · (1 − Tr σ^{(1+α)/2} ρ^{(1−α)/2})
//! ```
//!
//! with `D^(−1)(ρ‖σ) = Tr ρ(ln ρ − ln σ)` and `D^(+1)(ρ‖σ) = D^(−1)(σ‖ρ)`.
//! The limit branches are selected by exact comparison on α. Logarithms are
//! natural, so relative entropies are in nats.
//!
//! The family is only interpretable as a measure for `|α| ≤ 3`; values
//! outside that range are still computed.

use crate::error::{Error, Result};
use crate::operator::{check_dims, spectral_power, EIG_FLOOR, PSD_TOL};
use crate::state::DensityOperator;

/// Slack below zero tolerated before a divergence value is treated as a failure.
pub const NEGATIVE_SLACK: f64 = 1e-9;
/// Largest imaginary residue accepted in a trace that is real in exact arithmetic.
pub const TRACE_IMAG_TOL: f64 = 1e-9;
/// Entries (or projected weights) at or below this count as outside the support.
pub const SUPPORT_TOL: f64 = PSD_TOL;

/// The divergence index α.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Alpha(f64);

impl Alpha {
    pub const MINUS_ONE: Alpha = Alpha(-1.0);
    pub const PLUS_ONE: Alpha = Alpha(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() {
            Ok(Alpha(value))
        } else {
            Err(Error::InvalidAlpha(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_plus_one(self) -> bool {
        self.0 == 1.0
    }

    pub fn is_minus_one(self) -> bool {
        self.0 == -1.0
    }

    /// Exponent `(1 − α)/2` applied to the first argument.
    pub fn first_exponent(self) -> f64 {
        (1.0 - self.0) / 2.0
    }

    /// Exponent `(1 + α)/2` applied to the second argument.
    pub fn second_exponent(self) -> f64 {
        (1.0 + self.0) / 2.0
    }

    /// `4 / (1 − α²)`; infinite at the limit branches.
    pub fn prefactor(self) -> f64 {
        4.0 / (1.0 - self.0 * self.0)
    }

    /// Whether `|α| ≤ 3`, the range where the divergence behaves as a measure.
    pub fn is_interpretable(self) -> bool {
        self.0.abs() <= 3.0
    }
}

impl TryFrom<f64> for Alpha {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Alpha::new(value)
    }
}

impl std::fmt::Display for Alpha {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Nonnegative weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub const SUM_TOL: f64 = 1e-10;

    pub fn new(weights: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(weights, Self::SUM_TOL)
    }

    pub(crate) fn with_tolerance(weights: Vec<f64>, tol: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidProbability("empty".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidProbability(format!(
                "entry {w} is not a nonnegative number"
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > tol {
            return Err(Error::InvalidProbability(format!("sums to {total}")));
        }
        Ok(Self(weights))
    }

    pub fn uniform(len: usize) -> Result<Self> {
        Self::new(vec![1.0 / len as f64; len])
    }

    pub fn point_mass(len: usize, index: usize) -> Result<Self> {
        let mut w = vec![0.0; len];
        *w.get_mut(index)
            .ok_or_else(|| Error::InvalidProbability(format!("index {index} out of range")))? = 1.0;
        Self::new(w)
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

fn clamp_result(value: f64) -> Result<f64> {
    if value.is_nan() {
        return Err(Error::Numerical("divergence is NaN".into()));
    }
    if value < -NEGATIVE_SLACK {
        return Err(Error::Numerical(format!(
            "divergence {value:e} is negative"
        )));
    }
    Ok(value.max(0.0))
}

/// `Tr ρ (ln ρ − ln σ)`, finite when `supp ρ ⊆ supp σ`.
pub fn relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    check_dims(rho.dim(), sigma.dim())?;
    let rho_spec = rho.spectrum();
    let entropy_term: f64 = rho_spec
        .eigenvalues()
        .iter()
        .filter(|&&l| l > EIG_FLOOR)
        .map(|&l| l * l.ln())
        .sum();

    // Tr ρ ln σ = Σ_j ln(s_j) ⟨v_j|ρ|v_j⟩ over the support of σ.
    let sigma_spec = sigma.spectrum();
    let vecs = sigma_spec.eigenvectors();
    let rho_m = rho.matrix();
    let mut cross = 0.0;
    for (j, &s) in sigma_spec.eigenvalues().iter().enumerate() {
        let v = vecs.column(j);
        let weight = (v.adjoint() * rho_m * v)[(0, 0)].re;
        if s <= EIG_FLOOR {
            if weight > SUPPORT_TOL {
                return Err(Error::SupportMismatch(format!(
                    "first argument has weight {weight:e} outside the support of the second"
                )));
            }
        } else {
            cross += s.ln() * weight;
        }
    }
    clamp_result(entropy_term - cross)
}

/// Quantum α-divergence `D^(α)(ρ‖σ)`.
pub fn quantum_alpha_divergence(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    alpha: Alpha,
) -> Result<f64> {
    check_dims(rho.dim(), sigma.dim())?;
    if alpha.is_minus_one() {
        return relative_entropy(rho, sigma);
    }
    if alpha.is_plus_one() {
        return relative_entropy(sigma, rho);
    }
    let overlap = alpha_overlap(rho, sigma, alpha)?;
    clamp_result(alpha.prefactor() * (1.0 - overlap))
}

/// `Re Tr σ^{(1+α)/2} ρ^{(1−α)/2}` for `α ≠ ±1`.
pub fn alpha_overlap(rho: &DensityOperator, sigma: &DensityOperator, alpha: Alpha) -> Result<f64> {
    check_dims(rho.dim(), sigma.dim())?;
    let rho_pow = spectral_power(&rho.spectrum(), alpha.first_exponent()).map_err(|_| {
        Error::SupportMismatch(format!(
            "first argument must be full rank for alpha = {alpha}"
        ))
    })?;
    let sigma_pow = spectral_power(&sigma.spectrum(), alpha.second_exponent()).map_err(|_| {
        Error::SupportMismatch(format!(
            "second argument must be full rank for alpha = {alpha}"
        ))
    })?;
    let t = sigma_pow.trace_product(&rho_pow)?;
    if t.im.abs() > TRACE_IMAG_TOL {
        return Err(Error::Numerical(format!(
            "overlap trace has imaginary part {:e}",
            t.im
        )));
    }
    Ok(t.re)
}

/// Classical α-divergence between finite distributions.
pub fn classical_alpha_divergence(
    p: &ProbabilityVector,
    q: &ProbabilityVector,
    alpha: Alpha,
) -> Result<f64> {
    check_dims(p.len(), q.len())?;
    if alpha.is_minus_one() {
        return classical_kl(p.weights(), q.weights());
    }
    if alpha.is_plus_one() {
        return classical_kl(q.weights(), p.weights());
    }
    let a = alpha.first_exponent();
    let b = alpha.second_exponent();
    let mut overlap = 0.0;
    for (&pi, &qi) in p.weights().iter().zip(q.weights()) {
        let pa = entry_power(pi, a, "first")?;
        let qb = entry_power(qi, b, "second")?;
        overlap += pa * qb;
    }
    clamp_result(alpha.prefactor() * (1.0 - overlap))
}

fn entry_power(x: f64, exponent: f64, which: &str) -> Result<f64> {
    if x <= EIG_FLOOR {
        if exponent < 0.0 {
            return Err(Error::SupportMismatch(format!(
                "{which} argument has a zero entry under a negative power"
            )));
        }
        return Ok(0.0);
    }
    Ok(x.powf(exponent))
}

fn classical_kl(p: &[f64], q: &[f64]) -> Result<f64> {
    let mut total = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi <= EIG_FLOOR {
            continue;
        }
        if qi <= EIG_FLOOR {
            return Err(Error::SupportMismatch(
                "first argument has mass outside the support of the second".into(),
            ));
        }
        total += pi * (pi.ln() - qi.ln());
    }
    clamp_result(total)
}

/// Fidelity `Tr|√ρ √σ|`, the sum of singular values of `√ρ √σ`.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    check_dims(rho.dim(), sigma.dim())?;
    let sqrt_rho = spectral_power(&rho.spectrum(), 0.5)?;
    let sqrt_sigma = spectral_power(&sigma.spectrum(), 0.5)?;
    let product = sqrt_rho.matrix() * sqrt_sigma.matrix();
    let f: f64 = product.singular_values().iter().sum();
    if !(-NEGATIVE_SLACK..=1.0 + NEGATIVE_SLACK).contains(&f) {
        return Err(Error::Numerical(format!("fidelity {f} outside [0, 1]")));
    }
    Ok(f.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn a(v: f64) -> Alpha {
        Alpha::new(v).unwrap()
    }

    fn ket0() -> DensityOperator {
        DensityOperator::diagonal(&[1.0, 0.0]).unwrap()
    }

    fn ket_plus() -> DensityOperator {
        DensityOperator::pure(&[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap()
    }

    /// Brute-force KL of two finite distributions.
    fn kl_oracle(p: &[f64], q: &[f64]) -> f64 {
        p.iter().zip(q).map(|(pi, qi)| pi * (pi / qi).ln()).sum()
    }

    #[test]
    fn self_divergence_vanishes() {
        let rho = DensityOperator::qubit([0.3, -0.2, 0.5]).unwrap();
        for v in [-1.0, 0.0, 0.5, 1.0, 2.0] {
            assert_abs_diff_eq!(
                quantum_alpha_divergence(&rho, &rho, a(v)).unwrap(),
                0.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn orthogonal_overlap_pure_states() {
        let d = quantum_alpha_divergence(&ket0(), &ket_plus(), a(0.0)).unwrap();
        assert_abs_diff_eq!(d, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn relative_entropy_diagonal() {
        let expected = kl_oracle(&[0.3, 0.7], &[0.6, 0.4]);
        assert_abs_diff_eq!(expected, 0.1837868973, epsilon = 1e-9);
        let rho = DensityOperator::diagonal(&[0.3, 0.7]).unwrap();
        let sigma = DensityOperator::diagonal(&[0.6, 0.4]).unwrap();
        let d = quantum_alpha_divergence(&rho, &sigma, Alpha::MINUS_ONE).unwrap();
        assert_abs_diff_eq!(d, expected, epsilon = 1e-14);
        let d = quantum_alpha_divergence(&sigma, &rho, Alpha::PLUS_ONE).unwrap();
        assert_abs_diff_eq!(d, expected, epsilon = 1e-14);
    }

    #[test]
    fn support_mismatch() {
        let full = DensityOperator::diagonal(&[0.5, 0.5]).unwrap();
        assert!(matches!(
            quantum_alpha_divergence(&full, &ket0(), Alpha::MINUS_ONE),
            Err(Error::SupportMismatch(_))
        ));
        // pure first argument inside a full-rank second is fine
        assert!(quantum_alpha_divergence(&ket0(), &full, Alpha::MINUS_ONE).is_ok());
        // α > 1 needs ρ full rank, α < −1 needs σ full rank
        assert!(matches!(
            quantum_alpha_divergence(&ket0(), &full, a(2.0)),
            Err(Error::SupportMismatch(_))
        ));
        assert!(matches!(
            quantum_alpha_divergence(&full, &ket0(), a(-2.0)),
            Err(Error::SupportMismatch(_))
        ));
        assert!(quantum_alpha_divergence(&full, &ket0(), a(2.0)).is_ok());
        let three = DensityOperator::maximally_mixed(3);
        assert!(matches!(
            quantum_alpha_divergence(&full, &three, a(0.0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn classical_examples() {
        let p = ProbabilityVector::new(vec![0.2, 0.5, 0.3]).unwrap();
        assert_abs_diff_eq!(
            classical_alpha_divergence(&p, &p, a(0.5)).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        let h = ProbabilityVector::uniform(2).unwrap();
        assert_abs_diff_eq!(
            classical_alpha_divergence(&h, &h, a(2.0)).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        let p = ProbabilityVector::new(vec![0.3, 0.7]).unwrap();
        let q = ProbabilityVector::new(vec![0.6, 0.4]).unwrap();
        assert_abs_diff_eq!(
            classical_alpha_divergence(&p, &q, Alpha::MINUS_ONE).unwrap(),
            kl_oracle(&[0.3, 0.7], &[0.6, 0.4]),
            epsilon = 1e-15
        );
        let z = ProbabilityVector::new(vec![1.0, 0.0]).unwrap();
        assert!(matches!(
            classical_alpha_divergence(&p, &z, Alpha::MINUS_ONE),
            Err(Error::SupportMismatch(_))
        ));
    }

    #[test]
    fn probability_vector_validation() {
        assert!(ProbabilityVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbabilityVector::new(vec![1.5, -0.5]).is_err());
        assert!(ProbabilityVector::new(vec![]).is_err());
        assert!(ProbabilityVector::point_mass(3, 3).is_err());
    }

    #[test]
    fn fidelity_examples() {
        let rho = DensityOperator::qubit([0.1, 0.4, -0.3]).unwrap();
        assert_abs_diff_eq!(fidelity(&rho, &rho).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            fidelity(&ket0(), &ket_plus()).unwrap(),
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-12
        );
        let expected = 0.45f64.sqrt() + 0.05f64.sqrt();
        assert_abs_diff_eq!(expected, 0.894427191, epsilon = 1e-9);
        let f = fidelity(
            &DensityOperator::diagonal(&[0.5, 0.5]).unwrap(),
            &DensityOperator::diagonal(&[0.9, 0.1]).unwrap(),
        )
        .unwrap();
        assert_abs_diff_eq!(f, expected, epsilon = 1e-14);
    }

    #[test]
    fn alpha_flags() {
        assert!(Alpha::new(f64::NAN).is_err());
        assert!(a(1.0).is_plus_one() && !a(0.999).is_plus_one());
        assert!(a(-1.0).is_minus_one());
        assert!(!a(3.5).is_interpretable());
    }
}
