//! Finite-outcome POVMs and a few standard measurements.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{eigh, tensor_product, CMatrix, HermitianOperator, PSD_TOL};

/// Tolerance on `‖Σ E_x − I‖_max`.
pub const COMPLETENESS_TOL: f64 = 1e-10;

/// A measurement with finitely many outcomes: positive elements summing to `I`.
#[derive(Clone, Debug)]
pub struct Povm {
    labels: Vec<String>,
    elements: Vec<HermitianOperator>,
}

impl Povm {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    pub fn element(&self, outcome: usize) -> &HermitianOperator {
        &self.elements[outcome]
    }

    pub fn label(&self, outcome: usize) -> &str {
        &self.labels[outcome]
    }

    /// Replaces the default `"0"`, `"1"`, ... labels.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.elements.len() {
            return Err(Error::DimensionMismatch {
                expected: self.elements.len(),
                found: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }
}

/// Checks positivity of every element and completeness of the family.
pub fn validate_povm(elements: Vec<HermitianOperator>) -> Result<Povm> {
    let Some(first) = elements.first() else {
        return Err(Error::EmptyPovm);
    };
    let dim = first.dim();
    let mut total = CMatrix::zeros(dim, dim);
    for (index, e) in elements.iter().enumerate() {
        if e.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: e.dim(),
            });
        }
        let min_eigenvalue = eigh(e).min();
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::PovmNotPositive {
                index,
                min_eigenvalue,
            });
        }
        total += e.matrix();
    }
    let identity = CMatrix::identity(dim, dim);
    let deviation = (total - identity)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if deviation > COMPLETENESS_TOL {
        return Err(Error::NotComplete { deviation });
    }
    let labels = (0..elements.len()).map(|i| i.to_string()).collect();
    Ok(Povm { labels, elements })
}

/// The one-outcome measurement `{I}`.
pub fn trivial(dim: usize) -> Povm {
    validate_povm(vec![HermitianOperator::identity(dim)])
        .expect("identity is a POVM")
        .with_labels(vec!["I".into()])
        .expect("one label")
}

/// `basis^{⊗copies}` where `basis` is a list of orthonormal single-system kets.
///
/// Outcome labels concatenate the per-system symbols, first system leftmost.
pub fn product_basis(kets: &[Vec<Complex64>], symbols: &[&str], copies: usize) -> Result<Povm> {
    let single: Vec<HermitianOperator> = kets
        .iter()
        .map(|k| HermitianOperator::projector(k))
        .collect::<Result<_>>()?;
    let mut elements = single.clone();
    let mut labels: Vec<String> = symbols.iter().map(|s| s.to_string()).collect();
    for _ in 1..copies {
        let mut next = Vec::with_capacity(elements.len() * single.len());
        let mut next_labels = Vec::with_capacity(next.capacity());
        for (e, l) in elements.iter().zip(&labels) {
            for (s, sym) in single.iter().zip(symbols) {
                next.push(tensor_product(e, s));
                next_labels.push(format!("{l}{sym}"));
            }
        }
        elements = next;
        labels = next_labels;
    }
    validate_povm(elements)?.with_labels(labels)
}

/// Computational-basis projective measurement on `copies` systems of dimension `dim`.
pub fn computational_basis(dim: usize, copies: usize) -> Result<Povm> {
    let kets: Vec<Vec<Complex64>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();
    let symbols: Vec<String> = (0..dim).map(|i| i.to_string()).collect();
    let symbols: Vec<&str> = symbols.iter().map(String::as_str).collect();
    product_basis(&kets, &symbols, copies)
}

/// Qubit x-basis `{|+⟩, |−⟩}` on every copy.
pub fn x_basis(copies: usize) -> Result<Povm> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let kets = vec![
        vec![Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
        vec![Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
    ];
    product_basis(&kets, &["+", "-"], copies)
}

/// Two-qubit Bell-basis measurement, an entangled collective POVM.
pub fn bell_basis() -> Povm {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64| Complex64::new(re, 0.0);
    let kets = [
        [c(h), c(0.0), c(0.0), c(h)],
        [c(h), c(0.0), c(0.0), c(-h)],
        [c(0.0), c(h), c(h), c(0.0)],
        [c(0.0), c(h), c(-h), c(0.0)],
    ];
    let elements = kets
        .iter()
        .map(|k| HermitianOperator::projector(k).expect("nonzero ket"))
        .collect();
    validate_povm(elements)
        .expect("Bell basis is complete")
        .with_labels(vec![
            "phi+".into(),
            "phi-".into(),
            "psi+".into(),
            "psi-".into(),
        ])
        .expect("four labels")
}
