//! Angular-momentum matrices on direct sums of spin-`j` blocks (`hbar = 1`).
//!
//! Basis order: blocks follow the given `j` list, and inside a block the
//! kets `|j, m>` run from `m = j` down to `m = -j`.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{basis_vector, CVector, ComplexMatrix};
use crate::operator::{DensityMatrix, HermitianOperator};
#[cfg(not(any(feature = "std", test)))]
#[allow(unused_imports)]
use num_traits::Float;

/// A direct sum of angular-momentum multiplets.
///
/// Quantum numbers are stored doubled so half-integers stay exact.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpinSpace {
    twice_j: Vec<u32>,
}

/// Label `(j, m)` of one basis ket, doubled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinLabel {
    pub block: usize,
    pub twice_j: u32,
    pub twice_m: i32,
}

impl SpinLabel {
    pub fn j(&self) -> f64 {
        self.twice_j as f64 / 2.0
    }

    pub fn m(&self) -> f64 {
        self.twice_m as f64 / 2.0
    }
}

impl SpinSpace {
    /// Builds the space from `j` values, each a non-negative half-integer.
    pub fn new(j_list: &[f64]) -> Result<Self> {
        let mut twice_j = Vec::with_capacity(j_list.len());
        for &j in j_list {
            let doubled = 2.0 * j;
            if !(j >= 0.0) || doubled.fract() != 0.0 || doubled > 1e6 {
                return Err(Error::Input(format!(
                    "j = {j} is not a non-negative half-integer"
                )));
            }
            twice_j.push(doubled as u32);
        }
        Self::from_twice_j(twice_j)
    }

    pub fn from_twice_j(twice_j: Vec<u32>) -> Result<Self> {
        if twice_j.is_empty() {
            return Err(Error::Input("spin space needs at least one multiplet".into()));
        }
        Ok(Self { twice_j })
    }

    pub fn j_values(&self) -> Vec<f64> {
        self.twice_j.iter().map(|&t| t as f64 / 2.0).collect()
    }

    pub fn dim(&self) -> usize {
        self.twice_j.iter().map(|&t| t as usize + 1).sum()
    }

    /// Labels of all basis kets in matrix order.
    pub fn labels(&self) -> Vec<SpinLabel> {
        let mut out = Vec::with_capacity(self.dim());
        for (block, &tj) in self.twice_j.iter().enumerate() {
            let tj_signed = tj as i32;
            let mut tm = tj_signed;
            while tm >= -tj_signed {
                out.push(SpinLabel {
                    block,
                    twice_j: tj,
                    twice_m: tm,
                });
                tm -= 2;
            }
        }
        out
    }

    /// Matrix index of `|j, m>` in the given block.
    pub fn index_of(&self, block: usize, m: f64) -> Result<usize> {
        let tj = *self
            .twice_j
            .get(block)
            .ok_or_else(|| Error::Input(format!("no block {block}")))?;
        let tm = 2.0 * m;
        if tm.fract() != 0.0 || tm.abs() > tj as f64 || (tj as i64 - tm as i64) % 2 != 0 {
            return Err(Error::Input(format!("m = {m} is not valid for j = {}", tj as f64 / 2.0)));
        }
        let offset: usize = self.twice_j[..block].iter().map(|&t| t as usize + 1).sum();
        Ok(offset + ((tj as i64 - tm as i64) / 2) as usize)
    }

    /// Basis ket `|j, m>` of the given block.
    pub fn ket(&self, block: usize, m: f64) -> Result<CVector> {
        Ok(basis_vector(self.dim(), self.index_of(block, m)?))
    }

    /// Raising operator `J+ = Jx + i Jy`.
    pub fn raising(&self) -> ComplexMatrix {
        let labels = self.labels();
        let n = labels.len();
        let mut entries = alloc::vec![Complex64::new(0.0, 0.0); n * n];
        for (col, label) in labels.iter().enumerate() {
            let (tj, tm) = (label.twice_j as i64, label.twice_m as i64);
            if tm < tj {
                // <j, m+1| J+ |j, m> = sqrt(j(j+1) - m(m+1)); doubled: /4
                let value = (((tj * (tj + 2) - tm * (tm + 2)) as f64) / 4.0).sqrt();
                entries[(col - 1) * n + col] = Complex64::new(value, 0.0);
            }
        }
        ComplexMatrix::from_row_major(n, &entries).expect("finite ladder elements")
    }

    /// `J^2 = Jx^2 + Jy^2 + Jz^2`, block-scalar `j(j+1)`.
    pub fn casimir(&self) -> HermitianOperator {
        let diag: Vec<f64> = self
            .labels()
            .iter()
            .map(|l| {
                let tj = l.twice_j as f64;
                tj * (tj + 2.0) / 4.0
            })
            .collect();
        HermitianOperator::from_real_diagonal(&diag)
    }
}

/// Cartesian components `(Jx, Jy, Jz)`.
pub fn angular_momentum_ops(
    space: &SpinSpace,
) -> (HermitianOperator, HermitianOperator, HermitianOperator) {
    let raise = space.raising();
    let lower = raise.adjoint();
    let jx = raise
        .add(&lower)
        .expect("same dimension")
        .scale_real(0.5);
    // (J+ - J-) / (2i) = -i (J+ - J-) / 2
    let jy = raise
        .sub(&lower)
        .expect("same dimension")
        .scale(Complex64::new(0.0, -0.5));
    let jz_diag: Vec<f64> = space.labels().iter().map(|l| l.m()).collect();
    (
        HermitianOperator::symmetrized(jx),
        HermitianOperator::symmetrized(jy),
        HermitianOperator::from_real_diagonal(&jz_diag),
    )
}

/// The spin counterexample on `j = 0 (+) j = 1`: `A = Jx`, `B = Jy` and
/// `rho = (|0,0><0,0| + |1,1><1,1|) / 2`, which reaches the bound with
/// `dJx dJy = |<Jz>|/2 = 1/4`.
pub fn spin_example() -> (HermitianOperator, HermitianOperator, DensityMatrix) {
    let space = SpinSpace::from_twice_j(alloc::vec![0, 2]).expect("nonempty");
    let (jx, jy, _) = angular_momentum_ops(&space);
    let singlet = space.ket(0, 0.0).expect("|0,0>");
    let top = space.ket(1, 1.0).expect("|1,1>");
    let rho = DensityMatrix::mixture(&[(0.5, singlet), (0.5, top)]).expect("valid mixture");
    (jx, jy, rho)
}
