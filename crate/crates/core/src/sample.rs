//! Seeded random instances: hermitian pairs, density matrices, unitaries,
//! and pairs with a planted degenerate eigenspace.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::matrix::{CVector, ComplexMatrix};
use crate::operator::{DensityMatrix, HermitianOperator};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with independent standard complex normal entries.
pub fn ginibre(rng: &mut SampleRng, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    })
}

/// `(G + G^dagger) / 2` for a complex Gaussian `G`.
pub fn hermitian(rng: &mut SampleRng, dim: usize) -> HermitianOperator {
    let g = ginibre(rng, dim, dim);
    let h = (&g + g.adjoint()).unscale(2.0);
    HermitianOperator::symmetrized(ComplexMatrix::new(h).expect("finite square"))
}

/// `L L^dagger / tr` for a full-rank complex Gaussian `L`.
pub fn density(rng: &mut SampleRng, dim: usize) -> DensityMatrix {
    density_of_rank(rng, dim, dim)
}

pub fn density_of_rank(rng: &mut SampleRng, dim: usize, rank: usize) -> DensityMatrix {
    DensityMatrix::from_factor(&ginibre(rng, dim, rank)).expect("nonzero factor")
}

/// Haar-distributed unitary from the QR factorization of a Gaussian matrix.
pub fn unitary(rng: &mut SampleRng, dim: usize) -> ComplexMatrix {
    let qr = ginibre(rng, dim, dim).qr();
    let (q, r) = qr.unpack();
    let phases = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        dim,
        r.diagonal().iter().map(|d| if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) }),
    ));
    ComplexMatrix::new(q * phases).expect("finite square")
}

/// Hermitian `A`, `B` with `A + iB = R (I - P) + z I`, where `P` projects onto a
/// random `k`-dimensional subspace. That subspace lies in the kernel of
/// `A + iB - zI`, and the pair is generically non-commuting.
pub fn planted_pair(
    rng: &mut SampleRng,
    dim: usize,
    k: usize,
    z: Complex64,
) -> Result<(HermitianOperator, HermitianOperator, Vec<CVector>)> {
    let u = unitary(rng, dim);
    let basis: Vec<CVector> = (0..k).map(|i| u.as_inner().column(i).into_owned()).collect();
    let mut projector = DMatrix::<Complex64>::zeros(dim, dim);
    for v in &basis {
        projector += v * v.adjoint();
    }
    let r = ginibre(rng, dim, dim);
    let mut m = r * (DMatrix::identity(dim, dim) - projector);
    for i in 0..dim {
        m[(i, i)] += z;
    }
    let a = (&m + m.adjoint()).unscale(2.0);
    let b = (&m - m.adjoint()) * Complex64::new(0.0, -0.5);
    Ok((
        HermitianOperator::symmetrized(ComplexMatrix::new(a)?),
        HermitianOperator::symmetrized(ComplexMatrix::new(b)?),
        basis,
    ))
}
