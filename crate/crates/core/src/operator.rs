//! Validated observables and statistical operators.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};
use crate::matrix::{vector_norm, CVector, ComplexMatrix};
use crate::tolerance::Tolerances;

/// A hermitian observable.
///
/// Input within the hermiticity tolerance is replaced by its hermitian part
/// `(M + M^dagger) / 2`; the size of that correction is kept in
/// [`HermitianOperator::correction`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(try_from = "ComplexMatrix", into = "ComplexMatrix")
)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    correction: f64,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, Tolerances::default().hermiticity)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        if defect > tol {
            return Err(Error::Input(format!(
                "matrix is not hermitian: max |M - M^dagger| = {defect:e} exceeds {tol:e}"
            )));
        }
        Ok(Self::symmetrized(matrix))
    }

    /// Takes the hermitian part unconditionally.
    pub fn symmetrized(matrix: ComplexMatrix) -> Self {
        let correction = matrix.hermiticity_defect() / 2.0;
        Self {
            matrix: matrix.hermitian_part(),
            correction,
        }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_rows(rows)?)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self::symmetrized(ComplexMatrix::from_real_diagonal(diag))
    }

    pub fn identity(dim: usize) -> Self {
        Self::symmetrized(ComplexMatrix::identity(dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self::symmetrized(ComplexMatrix::zeros(dim))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Largest entrywise change applied by symmetrization.
    pub fn correction(&self) -> f64 {
        self.correction
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `self + shift * I`.
    pub fn shifted(&self, shift: f64) -> Self {
        Self {
            matrix: self.matrix.shift_diagonal(Complex64::new(shift, 0.0)),
            correction: self.correction,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            matrix: self.matrix.scale_real(factor),
            correction: self.correction * factor.abs(),
        }
    }

    /// `U H U^dagger` for a unitary `U`.
    pub fn conjugated(&self, unitary: &ComplexMatrix) -> Result<Self> {
        let m = unitary.multiply(&self.matrix)?.multiply(&unitary.adjoint())?;
        Ok(Self::symmetrized(m))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(self.matrix.as_inner()).0
    }
}

impl From<HermitianOperator> for ComplexMatrix {
    fn from(op: HermitianOperator) -> Self {
        op.matrix
    }
}

impl TryFrom<ComplexMatrix> for HermitianOperator {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m)
    }
}

/// A statistical operator: hermitian, positive semidefinite, unit trace.
///
/// The spectrum is computed once at construction and cached.
#[derive(Debug, Clone)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(try_from = "ComplexMatrix", into = "ComplexMatrix")
)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    eigenvalues: Vec<f64>,
}

impl PartialEq for DensityMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerances(matrix, &Tolerances::default())
    }

    pub fn with_tolerances(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        if defect > tol.hermiticity {
            return Err(Error::Input(format!(
                "density matrix is not hermitian: max |rho - rho^dagger| = {defect:e}"
            )));
        }
        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > tol.trace {
            return Err(Error::Input(format!(
                "density matrix trace is {} + {}i, expected 1",
                trace.re, trace.im
            )));
        }
        let matrix = matrix.hermitian_part();
        let eigenvalues = hermitian_eigen(matrix.as_inner()).0;
        if let Some(&lowest) = eigenvalues.first() {
            if lowest < -tol.psd_slack {
                return Err(Error::Input(format!(
                    "density matrix has negative eigenvalue {lowest:e}"
                )));
            }
        }
        Ok(Self {
            matrix,
            eigenvalues,
        })
    }

    /// `|psi><psi|` for the normalized `psi`.
    pub fn pure(psi: &CVector) -> Result<Self> {
        Self::mixture(&[(1.0, psi.clone())])
    }

    /// `sum_k w_k |psi_k><psi_k|` with each `psi_k` normalized first.
    ///
    /// The components need not be orthogonal. Weights must be non-negative
    /// and sum to one.
    pub fn mixture(components: &[(f64, CVector)]) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::Input("mixture needs at least one component".into()))?;
        let dim = first.1.len();
        let mut total = 0.0;
        let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
        for (weight, psi) in components {
            check_dim(dim, psi.len())?;
            if !(*weight >= 0.0) {
                return Err(Error::Input(format!("mixture weight {weight} is negative")));
            }
            let norm = vector_norm(psi);
            if norm == 0.0 || !norm.is_finite() {
                return Err(Error::Input("mixture component is the zero vector".into()));
            }
            let unit = psi.unscale(norm);
            acc += (&unit * unit.adjoint()) * Complex64::new(*weight, 0.0);
            total += weight;
        }
        if (total - 1.0).abs() > Tolerances::default().trace {
            return Err(Error::Input(format!("mixture weights sum to {total}, expected 1")));
        }
        Self::new(ComplexMatrix::new(acc)?)
    }

    /// `L L^dagger / tr(L L^dagger)` for a `dim x rank` factor.
    pub fn from_factor(factor: &DMatrix<Complex64>) -> Result<Self> {
        let gram = factor * factor.adjoint();
        let trace = gram.trace().re;
        if !(trace > 0.0) || !trace.is_finite() {
            return Err(Error::Numerical(format!("factor has trace {trace}")));
        }
        Self::new(ComplexMatrix::new(gram.unscale(trace))?)
    }

    /// `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let matrix = ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64);
        Self {
            matrix,
            eigenvalues: alloc::vec![1.0 / dim as f64; dim],
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Spectrum in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        // tr(rho^2) = sum |rho_ij|^2 for hermitian rho
        self.matrix
            .as_inner()
            .iter()
            .map(|z| z.norm_sqr())
            .sum()
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|&&e| e > tol).count()
    }

    /// Orthonormal eigenvectors whose eigenvalue exceeds `tol`.
    pub fn support(&self, tol: f64) -> Vec<CVector> {
        let (values, vectors) = hermitian_eigen(self.matrix.as_inner());
        values
            .iter()
            .zip(vectors)
            .filter(|(&e, _)| e > tol)
            .map(|(_, v)| v)
            .collect()
    }

    /// `U rho U^dagger` for a unitary `U`.
    pub fn conjugated(&self, unitary: &ComplexMatrix) -> Result<Self> {
        let m = unitary.multiply(&self.matrix)?.multiply(&unitary.adjoint())?;
        Self::new(m.hermitian_part())
    }
}

impl From<DensityMatrix> for ComplexMatrix {
    fn from(state: DensityMatrix) -> Self {
        state.matrix
    }
}

impl TryFrom<ComplexMatrix> for DensityMatrix {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m)
    }
}

/// Ascending eigenvalues and matching unit eigenvectors of a hermitian matrix.
pub(crate) fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, Vec<CVector>) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();
    (values, vectors)
}
