//! Expectation values, spreads and the Heisenberg-Robertson bound
//! `dA dB >= |<i[A,B]>| / 2`.

use alloc::format;

use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};
use crate::matrix::{commutator, ComplexMatrix};
use crate::operator::{DensityMatrix, HermitianOperator};
use crate::tolerance::{Tolerances, PURITY_TOL};
#[cfg(not(any(feature = "std", test)))]
#[allow(unused_imports)]
use num_traits::Float;

/// Audit of the uncertainty relation for one `(A, B, rho)` triple.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UncertaintyReport {
    pub mean_a: f64,
    pub mean_b: f64,
    pub spread_a: f64,
    pub spread_b: f64,
    /// `spread_a * spread_b`.
    pub product: f64,
    /// `|<i[A,B]>| / 2`.
    pub bound: f64,
    /// `product - bound`.
    pub gap: f64,
    pub purity: f64,
    /// `|gap| <= saturation_tol`.
    pub saturated: bool,
    /// `product > saturation_tol`; false when both sides vanish.
    pub nontrivial: bool,
}

impl UncertaintyReport {
    pub fn variance_a(&self) -> f64 {
        self.spread_a * self.spread_a
    }

    pub fn variance_b(&self) -> f64 {
        self.spread_b * self.spread_b
    }
}

/// `tr(M rho)` without any reality check.
pub fn trace_with(m: &ComplexMatrix, state: &DensityMatrix) -> Result<Complex64> {
    check_dim(m.dim(), state.dim())?;
    let (m, rho) = (m.as_inner(), state.matrix().as_inner());
    // tr(M rho) = sum_ij M_ij rho_ji
    let n = m.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += m[(i, j)] * rho[(j, i)];
        }
    }
    Ok(acc)
}

fn real_trace(m: &ComplexMatrix, state: &DensityMatrix, tol: f64, what: &str) -> Result<f64> {
    let t = trace_with(m, state)?;
    if t.im.abs() > tol * t.re.abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "{what}: trace has imaginary part {:e}",
            t.im
        )));
    }
    Ok(t.re)
}

/// `<A> = Re tr(A rho)`.
pub fn expectation(obs: &HermitianOperator, state: &DensityMatrix) -> Result<f64> {
    expectation_with(obs, state, &Tolerances::default())
}

pub fn expectation_with(
    obs: &HermitianOperator,
    state: &DensityMatrix,
    tol: &Tolerances,
) -> Result<f64> {
    real_trace(obs.matrix(), state, tol.imag, "expectation")
}

/// `<A^2> - <A>^2`, clamped to zero only inside the clamp window.
pub fn variance_with(
    obs: &HermitianOperator,
    state: &DensityMatrix,
    tol: &Tolerances,
) -> Result<f64> {
    let mean = expectation_with(obs, state, tol)?;
    let square = obs.matrix().multiply(obs.matrix())?;
    let second = real_trace(&square, state, tol.imag, "second moment")?;
    let raw = second - mean * mean;
    if raw >= 0.0 {
        Ok(raw)
    } else if raw >= -tol.variance_clamp {
        Ok(0.0)
    } else {
        Err(Error::Numerical(format!("variance is negative: {raw:e}")))
    }
}

/// `dA = sqrt(<A^2> - <A>^2)`.
pub fn spread(obs: &HermitianOperator, state: &DensityMatrix) -> Result<f64> {
    spread_with(obs, state, &Tolerances::default())
}

pub fn spread_with(
    obs: &HermitianOperator,
    state: &DensityMatrix,
    tol: &Tolerances,
) -> Result<f64> {
    Ok(variance_with(obs, state, tol)?.sqrt())
}

/// `|tr(rho i[A,B])| / 2`.
pub fn commutator_bound(
    a: &HermitianOperator,
    b: &HermitianOperator,
    state: &DensityMatrix,
) -> Result<f64> {
    commutator_bound_with(a, b, state, &Tolerances::default())
}

pub fn commutator_bound_with(
    a: &HermitianOperator,
    b: &HermitianOperator,
    state: &DensityMatrix,
    tol: &Tolerances,
) -> Result<f64> {
    Ok(0.5 * commutator_expectation(a, b, state, tol)?.abs())
}

/// `<i[A,B]>`, a real number for hermitian `A`, `B`.
pub fn commutator_expectation(
    a: &HermitianOperator,
    b: &HermitianOperator,
    state: &DensityMatrix,
    tol: &Tolerances,
) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    let comm = commutator(a.matrix(), b.matrix())?;
    let anti = comm.add(&comm.adjoint())?.max_abs();
    if anti > tol.hermiticity * comm.max_abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "commutator of hermitian operators is not anti-hermitian ({anti:e})"
        )));
    }
    let i_comm = comm.scale(Complex64::new(0.0, 1.0));
    real_trace(&i_comm, state, tol.imag, "commutator expectation")
}

/// Full audit of the uncertainty relation.
pub fn uncertainty_report(
    a: &HermitianOperator,
    b: &HermitianOperator,
    state: &DensityMatrix,
    saturation_tol: f64,
) -> Result<UncertaintyReport> {
    let tol = Tolerances {
        saturation: saturation_tol,
        ..Tolerances::default()
    };
    uncertainty_report_with(a, b, state, &tol)
}

pub fn uncertainty_report_with(
    a: &HermitianOperator,
    b: &HermitianOperator,
    state: &DensityMatrix,
    tol: &Tolerances,
) -> Result<UncertaintyReport> {
    if !(tol.saturation > 0.0) {
        return Err(Error::Input(format!(
            "saturation tolerance must be positive, got {}",
            tol.saturation
        )));
    }
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), state.dim())?;
    let mean_a = expectation_with(a, state, tol)?;
    let mean_b = expectation_with(b, state, tol)?;
    let spread_a = spread_with(a, state, tol)?;
    let spread_b = spread_with(b, state, tol)?;
    let product = spread_a * spread_b;
    let bound = commutator_bound_with(a, b, state, tol)?;
    let gap = product - bound;
    Ok(UncertaintyReport {
        mean_a,
        mean_b,
        spread_a,
        spread_b,
        product,
        bound,
        gap,
        purity: state.purity(),
        saturated: gap.abs() <= tol.saturation,
        nontrivial: product > tol.saturation,
    })
}

/// `Re tr(rho^2)`.
pub fn purity(state: &DensityMatrix) -> f64 {
    state.purity()
}

/// `1 - purity <= tol`.
pub fn is_pure(state: &DensityMatrix, tol: f64) -> bool {
    1.0 - state.purity() <= tol
}

/// [`is_pure`] at the default tolerance.
pub fn is_pure_default(state: &DensityMatrix) -> bool {
    is_pure(state, PURITY_TOL)
}
