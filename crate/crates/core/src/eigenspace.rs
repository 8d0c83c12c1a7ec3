//! Mixed states of minimum uncertainty built from degenerate eigenspaces of
//! the non-normal operator `M = A + i*lambda*B`.
//!
//! If every vector of a subspace `K` satisfies `M v = z v`, any density
//! matrix supported on `K` has `<A> + i*lambda*<B> = z`, so the operator
//! `(A - <A>) + i*lambda*(B - <B>)` annihilates the state and the
//! uncertainty relation holds with equality. When `dim K >= 2` such states
//! can be mixed. For hermitian `A`, `B` the operator `M` is normal exactly
//! when `[A, B] = 0`, so nontrivial examples need a non-normal `M` whose
//! eigenvalue `z` has geometric multiplicity at least two.
//!
//! Geometric multiplicity is measured directly as the dimension of the
//! numerical kernel of `M - zI` (via SVD) rather than by grouping
//! eigenvectors, which are ill-conditioned for non-normal `M`.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::linalg::Schur;
use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};
use crate::matrix::{basis_vector, vector_norm, CVector, ComplexMatrix};
use crate::operator::{DensityMatrix, HermitianOperator};
use crate::tolerance::SATURATION_TOL;
use crate::uncertainty::{uncertainty_report, UncertaintyReport};
#[cfg(not(any(feature = "std", test)))]
#[allow(unused_imports)]
use num_traits::Float;

const SCHUR_MAX_ITERS: usize = 100_000;
const SVD_MAX_ITERS: usize = 100_000;

/// The three-level counterexample: `A = [[0,1,0],[1,2,0],[0,0,0]]`,
/// `B = [[0,-i,0],[i,0,0],[0,0,0]]` and `rho = diag(1,0,1)/2`.
///
/// Here `(dA)^2 = (dB)^2 = |<i[A,B]>|/2 = 1/2` although `rho` is mixed.
pub fn three_level_example() -> (HermitianOperator, HermitianOperator, DensityMatrix) {
    let z = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[1.0, 2.0, 0.0], &[0.0, 0.0, 0.0]])
        .expect("3x3 literal");
    let b = ComplexMatrix::from_rows(&[&[z, -i, z], &[i, z, z], &[z, z, z]]).expect("3x3 literal");
    let rho = ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.5]);
    (
        HermitianOperator::new(a).expect("hermitian literal"),
        HermitianOperator::new(b).expect("hermitian literal"),
        DensityMatrix::new(rho).expect("valid state literal"),
    )
}

/// `A + i*lambda*B`.
pub fn combined_operator(
    a: &HermitianOperator,
    b: &HermitianOperator,
    lambda: f64,
) -> Result<ComplexMatrix> {
    a.matrix()
        .add(&b.matrix().scale(Complex64::new(0.0, lambda)))
}

/// `||M M^dagger - M^dagger M||_F <= tol * max(1, ||M||_F^2)`.
pub fn is_normal(m: &ComplexMatrix, tol: f64) -> bool {
    let adj = m.adjoint();
    let defect = m
        .multiply(&adj)
        .and_then(|l| l.sub(&adj.multiply(m)?))
        .map(|d| d.frobenius_norm())
        .unwrap_or(f64::INFINITY);
    let scale = m.frobenius_norm().powi(2).max(1.0);
    defect <= tol * scale
}

/// Outcome of testing whether a vector is an eigenket of a matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EigenketCheck {
    /// `||M v - (v^dagger M v) v||` for the normalized `v`.
    pub residual: f64,
    /// Rayleigh quotient `v^dagger M v`.
    #[cfg_attr(feature = "serde", serde(with = "complex_pair"))]
    pub eigenvalue: Complex64,
    pub is_eigenket: bool,
}

pub fn eigenket_check(m: &ComplexMatrix, v: &CVector, tol: f64) -> Result<EigenketCheck> {
    check_dim(m.dim(), v.len())?;
    let norm = vector_norm(v);
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::Input("eigenket check needs a nonzero vector".into()));
    }
    let unit = v.unscale(norm);
    let image = m.apply(&unit)?;
    let eigenvalue = unit.dotc(&image);
    let residual = vector_norm(&(image - &unit * eigenvalue));
    Ok(EigenketCheck {
        residual,
        eigenvalue,
        is_eigenket: residual <= tol,
    })
}

/// Knobs for [`find_saturating_mixed_states`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FinderOptions {
    /// A singular value of `M - zI` counts as zero below `kernel_tol * sigma_max`.
    pub kernel_tol: f64,
    /// Eigenvalues closer than `cluster_tol * (1 + ||M||_F)` are merged.
    pub cluster_tol: f64,
    /// Families are returned only if their canonical state has `|gap|` below this.
    pub saturation_tol: f64,
    /// Extra eigenvalue candidates examined alongside the computed spectrum.
    ///
    /// Useful when `M` is (close to) defective and the dense eigensolve
    /// scatters eigenvalues, e.g. for truncated oscillator operators.
    #[cfg_attr(feature = "serde", serde(with = "complex_pair_list"))]
    pub candidates: Vec<Complex64>,
}

impl Default for FinderOptions {
    fn default() -> Self {
        Self {
            kernel_tol: 1e-8,
            cluster_tol: 1e-8,
            saturation_tol: SATURATION_TOL,
            candidates: Vec::new(),
        }
    }
}

/// A degenerate eigenspace of `A + i*lambda*B` and the uniform mixture over it.
///
/// Any density matrix supported on `kernel_basis` reaches the bound; the
/// uniform mixture is just the canonical representative.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(try_from = "FamilyRepr", into = "FamilyRepr")
)]
pub struct SaturatingFamily {
    pub lambda: f64,
    /// Mean Rayleigh quotient of the kernel vectors.
    pub eigenvalue: Complex64,
    /// Orthonormal basis of the numerical kernel of `M - zI`.
    pub kernel_basis: Vec<CVector>,
    pub canonical_state: DensityMatrix,
    pub report: UncertaintyReport,
    /// Largest `||M v - z v||` over the basis.
    pub max_residual: f64,
}

impl SaturatingFamily {
    pub fn kernel_dim(&self) -> usize {
        self.kernel_basis.len()
    }

    pub fn is_nontrivial(&self) -> bool {
        self.report.nontrivial
    }
}

/// Eigenvalues of a general complex matrix from its complex Schur form.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if m.dim() == 1 {
        return Ok(alloc::vec![m[(0, 0)]]);
    }
    // QR iteration can stall on spectra symmetric about a point; retrying on
    // M + sI with an off-axis shift breaks the symmetry.
    let scale = 1.0 + m.frobenius_norm();
    let shifts = [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.1234, 0.0567) * scale,
        Complex64::new(-0.0711, 0.1893) * scale,
        Complex64::new(0.3157, -0.2468) * scale,
    ];
    let (shift, t) = shifts
        .iter()
        .find_map(|&s| {
            let shifted = m.shift_diagonal(s).into_inner();
            Schur::try_new(shifted, f64::EPSILON, SCHUR_MAX_ITERS).map(|schur| (s, schur.unpack().1))
        })
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let values: Vec<Complex64> = t.diagonal().iter().map(|z| z - shift).collect();
    if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numerical("eigensolve produced non-finite values".into()));
    }
    Ok(values)
}

/// Groups values closer than `tol` (single linkage) and returns the
/// centroid of each group, in order of first appearance after sorting.
#[allow(clippy::needless_range_loop)]
fn cluster_centroids(values: &[Complex64], tol: f64) -> Vec<Complex64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    let n = sorted.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (sorted[i] - sorted[j]).norm() <= tol {
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                if ri != rj {
                    parent[rj.max(ri)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..n {
        let r = root(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += sorted[i];
                g.2 += 1;
            }
            None => groups.push((r, sorted[i], 1)),
        }
    }
    // The centroid of a split defective cluster is far better conditioned
    // than any single member.
    groups
        .into_iter()
        .map(|(_, sum, count)| sum / count as f64)
        .collect()
}

/// Orthonormal basis of the numerical kernel of `M - zI` with residuals.
pub fn numerical_kernel(
    m: &ComplexMatrix,
    z: Complex64,
    kernel_tol: f64,
) -> Result<Vec<(CVector, f64)>> {
    let shifted = m.shift_diagonal(-z);
    let svd = shifted
        .as_inner()
        .clone()
        .try_svd(false, true, f64::EPSILON, SVD_MAX_ITERS)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let v_t = svd
        .v_t
        .as_ref()
        .ok_or_else(|| Error::Numerical("SVD returned no right singular vectors".into()))?;
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cutoff = kernel_tol * sigma_max;
    let mut kernel = Vec::new();
    for (k, &sigma) in svd.singular_values.iter().enumerate() {
        if sigma <= cutoff {
            let v: CVector = v_t.row(k).adjoint();
            let residual = vector_norm(&shifted.apply(&v)?);
            kernel.push((v, residual));
        }
    }
    Ok(kernel)
}

/// Builds the family for one eigenvalue candidate, if its kernel is at least
/// two-dimensional and the canonical state is certified to reach the bound.
pub fn family_at(
    a: &HermitianOperator,
    b: &HermitianOperator,
    lambda: f64,
    z: Complex64,
    opts: &FinderOptions,
) -> Result<Option<SaturatingFamily>> {
    let m = combined_operator(a, b, lambda)?;
    family_for_operator(a, b, &m, lambda, z, opts)
}

fn family_for_operator(
    a: &HermitianOperator,
    b: &HermitianOperator,
    m: &ComplexMatrix,
    lambda: f64,
    z: Complex64,
    opts: &FinderOptions,
) -> Result<Option<SaturatingFamily>> {
    let kernel = numerical_kernel(m, z, opts.kernel_tol)?;
    if kernel.len() < 2 {
        return Ok(None);
    }
    let basis: Vec<CVector> = kernel.into_iter().map(|(v, _)| v).collect();
    let mut refined = Complex64::new(0.0, 0.0);
    for v in &basis {
        refined += m.sandwich(v, v)?;
    }
    refined /= basis.len() as f64;
    let mut max_residual = 0.0f64;
    for v in &basis {
        let r = m.apply(v)? - v * refined;
        max_residual = max_residual.max(vector_norm(&r));
    }
    let weight = 1.0 / basis.len() as f64;
    let components: Vec<(f64, CVector)> = basis.iter().map(|v| (weight, v.clone())).collect();
    let state = DensityMatrix::mixture(&components)?;
    let report = uncertainty_report(a, b, &state, opts.saturation_tol)?;
    if !report.saturated {
        return Ok(None);
    }
    Ok(Some(SaturatingFamily {
        lambda,
        eigenvalue: refined,
        kernel_basis: basis,
        canonical_state: state,
        report,
        max_residual,
    }))
}

fn validate_lambda(lambda: f64) -> Result<()> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::Input(format!("lambda must be finite and nonzero, got {lambda}")));
    }
    Ok(())
}

/// All certified saturating families of `A + i*lambda*B`.
///
/// Steps: dense eigensolve of `M`, clustering of eigenvalues, SVD kernel of
/// `M - zI` at each cluster centroid (and at each extra candidate), then one
/// family per kernel of dimension two or more. A family is kept only if its
/// uniform mixture reaches the bound within `opts.saturation_tol`. An empty
/// result is a valid answer.
pub fn find_saturating_mixed_states(
    a: &HermitianOperator,
    b: &HermitianOperator,
    lambda: f64,
    opts: &FinderOptions,
) -> Result<Vec<SaturatingFamily>> {
    validate_lambda(lambda)?;
    check_dim(a.dim(), b.dim())?;
    let m = combined_operator(a, b, lambda)?;
    let scale = 1.0 + m.frobenius_norm();
    let cluster_radius = opts.cluster_tol * scale;
    let mut centers = cluster_centroids(&eigenvalues(&m)?, cluster_radius);
    for &probe in &opts.candidates {
        if centers.iter().all(|c| (c - probe).norm() > cluster_radius) {
            centers.push(probe);
        }
    }
    let mut families: Vec<SaturatingFamily> = Vec::new();
    for z in centers {
        if let Some(family) = family_for_operator(a, b, &m, lambda, z, opts)? {
            // distinct candidates can land on the same kernel
            let duplicate = families
                .iter()
                .any(|f| (f.eigenvalue - family.eigenvalue).norm() <= cluster_radius);
            if !duplicate {
                families.push(family);
            }
        }
    }
    Ok(families)
}

/// [`find_saturating_mixed_states`] over a grid of `lambda` values,
/// dropping repeats of the same `(lambda, z)` pair.
pub fn scan_lambda(
    a: &HermitianOperator,
    b: &HermitianOperator,
    lambdas: &[f64],
    opts: &FinderOptions,
) -> Result<Vec<SaturatingFamily>> {
    for &lambda in lambdas {
        validate_lambda(lambda)?;
    }
    let mut out: Vec<SaturatingFamily> = Vec::new();
    for &lambda in lambdas {
        let scale = 1.0 + combined_operator(a, b, lambda)?.frobenius_norm();
        for family in find_saturating_mixed_states(a, b, lambda, opts)? {
            let seen = out.iter().any(|f| {
                (f.lambda - lambda).abs() <= opts.cluster_tol
                    && (f.eigenvalue - family.eigenvalue).norm() <= opts.cluster_tol * scale
            });
            if !seen {
                out.push(family);
            }
        }
    }
    Ok(out)
}

/// `|i>` in the computational basis of `dim` levels.
pub fn ket(dim: usize, index: usize) -> CVector {
    basis_vector(dim, index)
}

#[cfg(feature = "serde")]
mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

#[cfg(feature = "serde")]
mod complex_pair_list {
    use alloc::vec::Vec;
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(zs: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = zs.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let pairs = <Vec<[f64; 2]>>::deserialize(d)?;
        Ok(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

#[cfg(feature = "serde")]
#[derive(serde::Serialize, serde::Deserialize)]
struct FamilyRepr {
    lambda: f64,
    eigenvalue: [f64; 2],
    kernel_basis: Vec<Vec<[f64; 2]>>,
    canonical_state: DensityMatrix,
    report: UncertaintyReport,
    max_residual: f64,
}

#[cfg(feature = "serde")]
impl From<SaturatingFamily> for FamilyRepr {
    fn from(f: SaturatingFamily) -> Self {
        Self {
            lambda: f.lambda,
            eigenvalue: [f.eigenvalue.re, f.eigenvalue.im],
            kernel_basis: f
                .kernel_basis
                .iter()
                .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            canonical_state: f.canonical_state,
            report: f.report,
            max_residual: f.max_residual,
        }
    }
}

#[cfg(feature = "serde")]
impl TryFrom<FamilyRepr> for SaturatingFamily {
    type Error = Error;

    fn try_from(r: FamilyRepr) -> Result<Self> {
        let dim = r.canonical_state.dim();
        let mut basis = Vec::with_capacity(r.kernel_basis.len());
        for v in r.kernel_basis {
            check_dim(dim, v.len())?;
            basis.push(CVector::from_iterator(
                dim,
                v.into_iter().map(|[re, im]| Complex64::new(re, im)),
            ));
        }
        Ok(Self {
            lambda: r.lambda,
            eigenvalue: Complex64::new(r.eigenvalue[0], r.eigenvalue[1]),
            kernel_basis: basis,
            canonical_state: r.canonical_state,
            report: r.report,
            max_residual: r.max_residual,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uncertainty::purity;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn combined_operator_of_three_level_pair() {
        let (a, b, _) = three_level_example();
        let m = combined_operator(&a, &b, 1.0).unwrap();
        // Entrywise: A + iB = [[0, 1 + 1, 0], [1 - 1, 2, 0], [0, 0, 0]].
        let expected =
            ComplexMatrix::from_real_rows(&[&[0.0, 2.0, 0.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 0.0]])
                .unwrap();
        assert_eq!(m, expected);
    }

    #[test]
    fn three_level_operator_is_not_normal() {
        let (a, b, _) = three_level_example();
        let m = combined_operator(&a, &b, 1.0).unwrap();
        // M M^dagger = [[4,4,0],[4,4,0],[0,0,0]], M^dagger M = diag(0,8,0).
        let left = m.multiply(&m.adjoint()).unwrap();
        let right = m.adjoint().multiply(&m).unwrap();
        assert_eq!(
            left,
            ComplexMatrix::from_real_rows(&[&[4.0, 4.0, 0.0], &[4.0, 4.0, 0.0], &[0.0, 0.0, 0.0]])
                .unwrap()
        );
        assert_eq!(right, ComplexMatrix::from_real_diagonal(&[0.0, 8.0, 0.0]));
        assert!(!is_normal(&m, 1e-12));
        assert!(is_normal(a.matrix(), 1e-12));
        assert!(is_normal(b.matrix(), 1e-12));
    }

    #[test]
    fn unitary_is_normal() {
        let s = 0.5f64.sqrt();
        let u = ComplexMatrix::from_rows(&[&[c(s, 0.0), c(0.0, s)], &[c(0.0, s), c(s, 0.0)]]).unwrap();
        assert!(is_normal(&u, 1e-12));
    }

    #[test]
    fn first_ket_is_eigenket_of_combination_only() {
        let (a, b, _) = three_level_example();
        let m = combined_operator(&a, &b, 1.0).unwrap();
        let one = ket(3, 0);
        let on_m = eigenket_check(&m, &one, 1e-12).unwrap();
        assert!(on_m.is_eigenket);
        assert_eq!(on_m.residual, 0.0);
        assert_eq!(on_m.eigenvalue, c(0.0, 0.0));
        // A|1> = |2>, B|1> = i|2>, Rayleigh quotients 0: residual exactly 1.
        let on_a = eigenket_check(a.matrix(), &one, 1e-12).unwrap();
        let on_b = eigenket_check(b.matrix(), &one, 1e-12).unwrap();
        assert!(!on_a.is_eigenket && !on_b.is_eigenket);
        assert!((on_a.residual - 1.0).abs() < 1e-15);
        assert!((on_b.residual - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigenket_check_rejects_zero_vector() {
        let m = ComplexMatrix::identity(2);
        assert!(matches!(
            eigenket_check(&m, &CVector::zeros(2), 1e-12),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn eigenket_check_normalizes() {
        let m = ComplexMatrix::from_real_diagonal(&[3.0, 1.0]);
        let v = CVector::from_vec(alloc::vec![c(5.0, 0.0), c(0.0, 0.0)]);
        let r = eigenket_check(&m, &v, 1e-12).unwrap();
        assert!(r.is_eigenket);
        assert!((r.eigenvalue - c(3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn recovers_three_level_state() {
        let (a, b, rho) = three_level_example();
        let families = find_saturating_mixed_states(&a, &b, 1.0, &FinderOptions::default()).unwrap();
        assert_eq!(families.len(), 1);
        let f = &families[0];
        assert!(f.eigenvalue.norm() < 1e-12);
        assert_eq!(f.kernel_dim(), 2);
        assert!(f.canonical_state.matrix().max_abs_diff(rho.matrix()).unwrap() < 1e-10);
        assert!(f.report.saturated && f.report.nontrivial);
        assert!((f.report.product - 0.5).abs() < 1e-12);
        assert!((purity(&f.canonical_state) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn commuting_diagonal_pair_has_no_family() {
        let a = HermitianOperator::from_real_diagonal(&[0.0, 1.0]);
        let b = HermitianOperator::from_real_diagonal(&[0.0, 2.0]);
        let families = find_saturating_mixed_states(&a, &b, 1.0, &FinderOptions::default()).unwrap();
        assert!(families.iter().all(|f| !f.is_nontrivial()));
        assert!(families.is_empty());
    }

    #[test]
    fn zero_b_gives_trivial_eigenspaces_of_a() {
        let a = HermitianOperator::from_real_diagonal(&[1.0, 1.0, 2.0, 3.0, 3.0, 3.0]);
        let b = HermitianOperator::zeros(6);
        let families = find_saturating_mixed_states(&a, &b, 1.0, &FinderOptions::default()).unwrap();
        let mut dims: Vec<usize> = families.iter().map(|f| f.kernel_dim()).collect();
        dims.sort();
        assert_eq!(dims, [2, 3]);
        assert!(families.iter().all(|f| !f.is_nontrivial() && f.report.saturated));
    }

    #[test]
    fn lambda_zero_is_rejected() {
        let (a, b, _) = three_level_example();
        assert!(matches!(
            find_saturating_mixed_states(&a, &b, 0.0, &FinderOptions::default()),
            Err(Error::Input(_))
        ));
        assert!(scan_lambda(&a, &b, &[1.0, 0.0], &FinderOptions::default()).is_err());
    }

    #[test]
    fn scan_over_grid_contains_unit_lambda() {
        let (a, b, _) = three_level_example();
        let families = scan_lambda(&a, &b, &[0.5, 1.0, 2.0], &FinderOptions::default()).unwrap();
        assert!(families
            .iter()
            .any(|f| f.lambda == 1.0 && f.eigenvalue.norm() < 1e-12 && f.kernel_dim() == 2));
        assert!(scan_lambda(&a, &b, &[], &FinderOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn scan_drops_repeated_lambda() {
        let (a, b, _) = three_level_example();
        let once = scan_lambda(&a, &b, &[1.0], &FinderOptions::default()).unwrap();
        let twice = scan_lambda(&a, &b, &[1.0, 1.0], &FinderOptions::default()).unwrap();
        assert_eq!(once.len(), twice.len());
    }

    #[test]
    fn clustering_merges_close_values() {
        let vals = [c(0.0, 0.0), c(1e-10, 0.0), c(1.0, 0.0), c(1.0, 1e-12), c(5.0, 0.0)];
        let centers = cluster_centroids(&vals, 1e-8);
        assert_eq!(centers.len(), 3);
        assert!((centers[0] - c(5e-11, 0.0)).norm() < 1e-20);
    }

    #[test]
    fn candidate_probe_is_examined() {
        // M = A + iB with a doubly degenerate eigenvalue 0 planted; a probe
        // at the exact eigenvalue must not duplicate the family.
        let (a, b, _) = three_level_example();
        let opts = FinderOptions {
            candidates: alloc::vec![c(0.0, 0.0), c(7.0, 0.0)],
            ..FinderOptions::default()
        };
        let families = find_saturating_mixed_states(&a, &b, 1.0, &opts).unwrap();
        assert_eq!(families.len(), 1);
    }

    #[test]
    fn eigenvalues_of_symmetric_spectrum() {
        // plain QR iteration stalls on 0, 0, +-sqrt(1 - l^2)
        let (jx, jy, _) = crate::spin::spin_example();
        let m = combined_operator(&jx, &jy, 0.5).unwrap();
        let mut values = eigenvalues(&m).unwrap();
        values.sort_by(|x, y| x.re.total_cmp(&y.re));
        let r = 0.75f64.sqrt();
        let expected = [-r, 0.0, 0.0, r];
        for (z, e) in values.iter().zip(expected) {
            assert!((z - Complex64::new(e, 0.0)).norm() < 1e-7, "{z} vs {e}");
        }
    }
}
