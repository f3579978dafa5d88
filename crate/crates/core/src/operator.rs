//! Finite-dimensional Hermitian operator algebra.
//!
//! Every matrix function goes through the spectral decomposition
//! `A = U diag(λ) U†`, so `f(A) = U diag(f(λ)) U†`. The result is
//! re-symmetrized as `(B + B†)/2` to keep roundoff from drifting it off the
//! Hermitian subspace.
//!
//! Composite systems use the row-major Kronecker convention: the basis
//! vector `|i⟩ ⊗ |j⟩` has index `i * dim(B) + j`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Maximum entrywise deviation from `A = A†` accepted on construction.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues at or below this value are treated as outside the support.
pub const EIG_FLOOR: f64 = 1e-12;
/// Smallest eigenvalue still accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-10;
/// Default cap on the dimension of any tensor power.
pub const DEFAULT_MAX_DIM: usize = 4096;

/// A square complex matrix equal to its conjugate transpose.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    mat: CMatrix,
}

impl HermitianOperator {
    /// Validates that `mat` is square and Hermitian within [`HERMITIAN_TOL`].
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        let deviation = max_hermitian_deviation(&mat);
        if deviation > HERMITIAN_TOL {
            return Err(Error::NonHermitian { deviation });
        }
        Ok(Self { mat })
    }

    /// Symmetrizes `(m + m†)/2` without checking how far `m` was from Hermitian.
    pub(crate) fn symmetrized(mat: CMatrix) -> Self {
        debug_assert_eq!(mat.nrows(), mat.ncols());
        let adj = mat.adjoint();
        Self {
            mat: (mat + adj) * Complex64::new(0.5, 0.0),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let v = DVector::from_iterator(diag.len(), diag.iter().map(|&d| Complex64::new(d, 0.0)));
        Self {
            mat: CMatrix::from_diagonal(&v),
        }
    }

    /// Builds an operator from row-major entries.
    pub fn from_rows(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Self::new(CMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: CMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: CMatrix::zeros(dim, dim),
        }
    }

    /// Rank-one projector `|ψ⟩⟨ψ|` onto the normalized ket.
    pub fn projector(ket: &[Complex64]) -> Result<Self> {
        let v = DVector::from_column_slice(ket);
        let norm = v.norm();
        if norm <= 0.0 || !norm.is_finite() {
            return Err(Error::InvalidModel("projector onto a zero vector".into()));
        }
        let v = v.unscale(norm);
        Ok(Self::symmetrized(&v * v.adjoint()))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            mat: self.mat.scale(factor),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self {
            mat: &self.mat + &other.mat,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self {
            mat: &self.mat - &other.mat,
        })
    }

    /// `Tr(self · other)`; the trace of a product of two Hermitian operators.
    pub fn trace_product(&self, other: &Self) -> Result<Complex64> {
        check_dims(self.dim(), other.dim())?;
        let n = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.mat[(i, j)] * other.mat[(j, i)];
            }
        }
        Ok(acc)
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Sum of absolute eigenvalues.
    pub fn trace_norm(&self) -> f64 {
        eigh(self).eigenvalues().iter().map(|l| l.abs()).sum()
    }

    /// True when every off-diagonal entry is exactly zero.
    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.mat[(i, j)] == Complex64::new(0.0, 0.0)))
    }

    pub fn real_diagonal(&self) -> Vec<f64> {
        self.mat.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        eigh(self).eigenvalues()[0]
    }
}

fn max_hermitian_deviation(mat: &CMatrix) -> f64 {
    let n = mat.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((mat[(i, j)] - mat[(j, i)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Eigen-decomposition of a Hermitian operator, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Columns are orthonormal eigenvectors, in the order of [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// `U diag(f(λ)) U†`, symmetrized.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let n = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let fj = f(lambda);
            for i in 0..n {
                scaled[(i, j)] *= fj;
            }
        }
        HermitianOperator::symmetrized(scaled * self.eigenvectors.adjoint())
    }

    pub fn reconstruct(&self) -> HermitianOperator {
        self.map(|l| l)
    }
}

/// Spectral decomposition with eigenvalues sorted ascending.
pub fn eigh(a: &HermitianOperator) -> Spectrum {
    let n = a.dim();
    let decomposition = a.mat.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| decomposition.eigenvalues[i].total_cmp(&decomposition.eigenvalues[j]));
    let eigenvalues = order
        .iter()
        .map(|&i| decomposition.eigenvalues[i])
        .collect();
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &decomposition.eigenvectors.column(src));
    }
    Spectrum {
        eigenvalues,
        eigenvectors,
    }
}

/// Validates a raw matrix as Hermitian and decomposes it.
pub fn eigh_matrix(mat: &CMatrix) -> Result<Spectrum> {
    Ok(eigh(&HermitianOperator::new(mat.clone())?))
}

fn check_psd(spectrum: &Spectrum) -> Result<()> {
    if spectrum.min() < -PSD_TOL {
        return Err(Error::NotPositive {
            min_eigenvalue: spectrum.min(),
        });
    }
    Ok(())
}

/// Fractional power of a positive semidefinite operator.
///
/// For `p > 0` eigenvalues at or below [`EIG_FLOOR`] map to zero. For `p = 0`
/// the result is the projector onto the support. Negative powers of a
/// singular operator are an error rather than being clamped.
pub fn matrix_power(a: &HermitianOperator, p: f64) -> Result<HermitianOperator> {
    spectral_power(&eigh(a), p)
}

pub(crate) fn spectral_power(spectrum: &Spectrum, p: f64) -> Result<HermitianOperator> {
    check_psd(spectrum)?;
    if p < 0.0 && spectrum.min() <= EIG_FLOOR {
        return Err(Error::SingularPower {
            exponent: p,
            min_eigenvalue: spectrum.min(),
        });
    }
    Ok(spectrum.map(|l| if l <= EIG_FLOOR { 0.0 } else { l.powf(p) }))
}

/// Natural logarithm of a positive definite operator.
pub fn matrix_log(a: &HermitianOperator) -> Result<HermitianOperator> {
    spectral_log(&eigh(a))
}

pub(crate) fn spectral_log(spectrum: &Spectrum) -> Result<HermitianOperator> {
    if spectrum.min() <= EIG_FLOOR {
        return Err(Error::SingularLog {
            min_eigenvalue: spectrum.min(),
        });
    }
    Ok(spectrum.map(f64::ln))
}

pub fn matrix_exp(a: &HermitianOperator) -> HermitianOperator {
    eigh(a).map(f64::exp)
}

/// Kronecker product `A ⊗ B`.
pub fn tensor_product(a: &HermitianOperator, b: &HermitianOperator) -> HermitianOperator {
    HermitianOperator {
        mat: a.mat.kronecker(&b.mat),
    }
}

/// `A^{⊗n}`; fails if `dim(A)^n` exceeds `max_dim`.
pub fn tensor_power_operator(
    a: &HermitianOperator,
    n: usize,
    max_dim: usize,
) -> Result<HermitianOperator> {
    if n == 0 {
        return Err(Error::InvalidModel(
            "tensor power needs at least one copy".into(),
        ));
    }
    let dim = checked_power_dim(a.dim(), n, max_dim)?;
    let mut acc = a.clone();
    for _ in 1..n {
        acc = tensor_product(&acc, a);
    }
    debug_assert_eq!(acc.dim(), dim);
    Ok(acc)
}

/// `d^n`, or [`Error::DimensionOverflow`] if it exceeds `max_dim`.
pub fn checked_power_dim(d: usize, n: usize, max_dim: usize) -> Result<usize> {
    let exponent = u32::try_from(n).map_err(|_| Error::DimensionOverflow {
        dim: usize::MAX,
        max_dim,
    })?;
    match d.checked_pow(exponent) {
        Some(dim) if dim <= max_dim => Ok(dim),
        Some(dim) => Err(Error::DimensionOverflow { dim, max_dim }),
        None => Err(Error::DimensionOverflow {
            dim: usize::MAX,
            max_dim,
        }),
    }
}
