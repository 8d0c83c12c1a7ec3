//! Dense complex square matrices.

use alloc::format;
use alloc::vec::Vec;
use core::ops::Index;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{check_dim, Error, Result};
#[cfg(not(any(feature = "std", test)))]
#[allow(unused_imports)]
use num_traits::Float;

/// Column vector of complex amplitudes.
pub type CVector = DVector<Complex64>;

/// Dense square complex matrix with finite entries.
///
/// Row `i`, column `j` refers to the computational basis ket `|i>` and bra
/// `<j|`. The JSON form is `{"dim": n, "entries": [[re, im], ...]}` with the
/// `n*n` entries in row-major order.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(try_from = "MatrixRepr", into = "MatrixRepr")
)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    /// Wraps an nalgebra matrix, checking that it is square and finite.
    pub fn new(inner: DMatrix<Complex64>) -> Result<Self> {
        if inner.nrows() != inner.ncols() {
            return Err(Error::Input(format!(
                "matrix is {}x{}, expected square",
                inner.nrows(),
                inner.ncols()
            )));
        }
        if inner.nrows() == 0 {
            return Err(Error::Input("matrix dimension must be positive".into()));
        }
        if let Some((idx, _)) = inner
            .iter()
            .enumerate()
            .find(|(_, z)| !z.re.is_finite() || !z.im.is_finite())
        {
            // nalgebra storage is column-major
            let (i, j) = (idx % inner.nrows(), idx / inner.nrows());
            return Err(Error::Input(format!("non-finite entry at ({i}, {j})")));
        }
        Ok(Self(inner))
    }

    /// Builds a `dim x dim` matrix from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Input("matrix dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::Input(format!(
                "expected {} entries for dim {dim}, found {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    /// Builds a matrix from a slice of rows.
    pub fn from_rows(rows: &[&[Complex64]]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Input(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        Self::from_row_major(dim, &entries)
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        let refs: Vec<&[Complex64]> = rows.iter().map(|r| r.as_slice()).collect();
        Self::from_rows(&refs)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let diag: Vec<Complex64> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_diagonal(&diag)
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &CVector, v: &CVector) -> Result<Self> {
        check_dim(u.len(), v.len())?;
        Ok(Self(u * v.adjoint()))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<Complex64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self(&self.0 * &other.0))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self(&self.0 - &other.0))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self(&self.0 * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// `self + shift * I`.
    pub fn shift_diagonal(&self, shift: Complex64) -> Self {
        let mut m = self.0.clone();
        for i in 0..self.dim() {
            m[(i, i)] += shift;
        }
        Self(m)
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self
            .0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `max |M - M^dagger|` over entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(M + M^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0))
    }

    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        check_dim(self.dim(), v.len())?;
        Ok(&self.0 * v)
    }

    /// `<u|M|v>`.
    pub fn sandwich(&self, u: &CVector, v: &CVector) -> Result<Complex64> {
        check_dim(self.dim(), u.len())?;
        check_dim(self.dim(), v.len())?;
        Ok(u.dotc(&(&self.0 * v)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.is_zero())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

/// `AB - BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dim(a.dim(), b.dim())?;
    Ok(ComplexMatrix(&a.0 * &b.0 - &b.0 * &a.0))
}

/// Unit basis vector `|index>` in `dim` dimensions.
pub fn basis_vector(dim: usize, index: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[index] = Complex64::new(1.0, 0.0);
    v
}

pub(crate) fn vector_norm(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(feature = "serde")]
#[derive(serde::Serialize, serde::Deserialize)]
struct MatrixRepr {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

#[cfg(feature = "serde")]
impl From<ComplexMatrix> for MatrixRepr {
    fn from(m: ComplexMatrix) -> Self {
        Self {
            dim: m.dim(),
            entries: m.row_major().into_iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

#[cfg(feature = "serde")]
impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = Error;

    fn try_from(repr: MatrixRepr) -> Result<Self> {
        let entries: Vec<Complex64> = repr
            .entries
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        Self::from_row_major(repr.dim, &entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_wrong_entry_count() {
        let err = ComplexMatrix::from_row_major(2, &[c(1.0, 0.0); 3]).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn rejects_non_finite() {
        let err = ComplexMatrix::from_row_major(1, &[c(f64::NAN, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
        let err = ComplexMatrix::from_row_major(1, &[c(0.0, f64::INFINITY)]).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn trace_of_identity() {
        for n in 1..6 {
            assert_eq!(ComplexMatrix::identity(n).trace(), c(n as f64, 0.0));
        }
    }

    #[test]
    fn self_commutator_vanishes() {
        let m = ComplexMatrix::from_rows(&[&[c(1.0, 2.0), c(0.5, 0.0)], &[c(-1.0, 3.0), c(0.0, -1.0)]])
            .unwrap();
        assert!(commutator(&m, &m).unwrap().is_zero());
    }

    #[test]
    fn commutator_of_three_level_pair() {
        // Hand multiplication: AB = [[i,0,0],[2i,-i,0],[0,0,0]], BA = [[-i,-2i,0],[0,i,0],[0,0,0]].
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[1.0, 2.0, 0.0], &[0.0, 0.0, 0.0]])
            .unwrap();
        let z = c(0.0, 0.0);
        let b = ComplexMatrix::from_rows(&[&[z, c(0.0, -1.0), z], &[c(0.0, 1.0), z, z], &[z, z, z]])
            .unwrap();
        let expected = ComplexMatrix::from_rows(&[
            &[c(0.0, 2.0), c(0.0, 2.0), z],
            &[c(0.0, 2.0), c(0.0, -2.0), z],
            &[z, z, z],
        ])
        .unwrap();
        let got = commutator(&a, &b).unwrap();
        assert!(got.max_abs_diff(&expected).unwrap() < 1e-15);
        // Oracle: explicit triple loop.
        let mut brute = [[z; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    brute[i][j] += a[(i, k)] * b[(k, j)] - b[(i, k)] * a[(k, j)];
                }
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(brute[i][j], got[(i, j)]);
            }
        }
        // Anti-hermitian.
        assert!(got.add(&got.adjoint()).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let err = ComplexMatrix::identity(2)
            .multiply(&ComplexMatrix::identity(3))
            .unwrap_err();
        assert_eq!(err, Error::Dimension { expected: 2, found: 3 });
    }

    #[test]
    fn row_major_order() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        assert_eq!(m[(0, 1)], c(2.0, 0.0));
        let flat: Vec<f64> = m.row_major().iter().map(|z| z.re).collect();
        assert_eq!(flat, [1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn frobenius_norm_matches_definition() {
        let m = ComplexMatrix::from_rows(&[&[c(3.0, 4.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]])
            .unwrap();
        assert!((m.frobenius_norm() - 5.0).abs() < 1e-15);
    }
}
