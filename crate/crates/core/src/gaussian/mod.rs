//! Continuous-variable counterexample: two displaced ground-state Gaussians
//! `psi_a(x) = (kappa/pi)^(1/4) exp(-kappa (x - a)^2 / 2)` mixed with equal
//! weights, audited against `A = XP + PX` and `B = (hbar kappa X)^2 - P^2`.
//!
//! Three independent routes produce the moments needed for the uncertainty
//! relation:
//!
//! * closed forms from ladder-operator normal ordering ([`gaussian_moments_exact`]),
//! * a truncated Fock basis whose ladder operator `c` is matched to the
//!   width so that `|+-a>` are coherent states ([`fock_moments`]),
//! * Gauss-Hermite quadrature over the wavefunctions ([`quadrature::quadrature_moments`]).
//!
//! With `hbar kappa X + i P = hbar sqrt(2 kappa) c` one has
//! `A = i hbar (c^dag^2 - c^2)` and `B = hbar^2 kappa (c^2 + c^dag^2)`, so
//! `B + i hbar kappa A = (hbar kappa X + i P)^2` and both `|a>` and `|-a>`
//! are eigenkets of `A - i B / (hbar kappa)` with eigenvalue `-i hbar kappa a^2`.

pub mod quadrature;

use alloc::format;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{CVector, ComplexMatrix};
use crate::operator::{DensityMatrix, HermitianOperator};
use crate::tolerance::Tolerances;
use crate::uncertainty::{commutator_expectation, expectation};
#[cfg(not(any(feature = "std", test)))]
#[allow(unused_imports)]
use num_traits::Float;

/// Largest tail weight a truncated displaced Gaussian may drop.
pub const TAIL_WEIGHT_TOL: f64 = 1e-10;

/// Displacement and width of the Gaussian, and the value of `hbar`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GaussianParams {
    pub a: f64,
    pub kappa: f64,
    pub hbar: f64,
}

impl GaussianParams {
    pub fn new(a: f64, kappa: f64, hbar: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::Input(format!("displacement a = {a} is not finite")));
        }
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::Input(format!("kappa must be positive, got {kappa}")));
        }
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::Input(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self { a, kappa, hbar })
    }

    /// Coherent amplitude `beta = a sqrt(kappa / 2)` of `|a>`.
    pub fn beta(&self) -> f64 {
        self.a * (self.kappa / 2.0).sqrt()
    }

    /// For `a = 0` the two components coincide and the mixture is pure.
    pub fn is_degenerate(&self) -> bool {
        self.a == 0.0
    }

    /// The `lambda` for which `A + i lambda B` has `|a>` and `|-a>` as eigenkets.
    pub fn saturating_lambda(&self) -> f64 {
        -1.0 / (self.hbar * self.kappa)
    }

    /// Shared eigenvalue `-i hbar kappa a^2` of `|+-a>` under `A + i lambda B`.
    pub fn saturating_eigenvalue(&self) -> Complex64 {
        Complex64::new(0.0, -self.hbar * self.kappa * self.a * self.a)
    }

    /// Purity `(1 + exp(-2 kappa a^2)) / 2` of the equal mixture.
    pub fn mixture_purity(&self) -> f64 {
        0.5 * (1.0 + (-2.0 * self.kappa * self.a * self.a).exp())
    }

    /// Overlap `<a|-a> = exp(-kappa a^2)`.
    pub fn overlap(&self) -> f64 {
        (-self.kappa * self.a * self.a).exp()
    }
}

impl Default for GaussianParams {
    fn default() -> Self {
        Self {
            a: 1.0,
            kappa: 1.0,
            hbar: 1.0,
        }
    }
}

/// Number-state truncation `|0>, ..., |n_max - 1>`.
///
/// The top `convergence_margin` states are a guard band: a displaced
/// Gaussian must carry less than [`TAIL_WEIGHT_TOL`] of its weight there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FockTruncation {
    pub n_max: usize,
    pub convergence_margin: usize,
}

impl FockTruncation {
    pub fn new(n_max: usize, convergence_margin: usize) -> Result<Self> {
        if n_max < 2 {
            return Err(Error::Input(format!("n_max must be at least 2, got {n_max}")));
        }
        if convergence_margin >= n_max {
            return Err(Error::Input(format!(
                "convergence margin {convergence_margin} leaves no usable states below n_max {n_max}"
            )));
        }
        Ok(Self {
            n_max,
            convergence_margin,
        })
    }

    /// First index inside the guard band.
    pub fn cutoff(&self) -> usize {
        self.n_max - self.convergence_margin
    }
}

impl Default for FockTruncation {
    fn default() -> Self {
        Self {
            n_max: 64,
            convergence_margin: 8,
        }
    }
}

/// Which of the two displaced Gaussians.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Positive,
    Negative,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Positive => 1.0,
            Side::Negative => -1.0,
        }
    }
}

/// Truncated annihilation operator, `c|n> = sqrt(n)|n-1>`.
pub fn annihilation(n_max: usize) -> ComplexMatrix {
    let mut entries = alloc::vec![Complex64::new(0.0, 0.0); n_max * n_max];
    for n in 1..n_max {
        entries[(n - 1) * n_max + n] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    ComplexMatrix::from_row_major(n_max, &entries).expect("finite ladder elements")
}

/// Position and momentum on the truncated Fock space:
/// `X = (c + c^dag) / sqrt(2 kappa)`, `P = -i hbar sqrt(kappa/2) (c - c^dag)`.
///
/// `[X, P] = i hbar` holds exactly except in the last row and column.
pub fn quadrature_ops(
    p: &GaussianParams,
    t: &FockTruncation,
) -> Result<(HermitianOperator, HermitianOperator)> {
    if t.n_max < 2 {
        return Err(Error::Input(format!("n_max must be at least 2, got {}", t.n_max)));
    }
    let c = annihilation(t.n_max);
    let cd = c.adjoint();
    let x = c.add(&cd)?.scale_real(1.0 / (2.0 * p.kappa).sqrt());
    let mom = c
        .sub(&cd)?
        .scale(Complex64::new(0.0, -p.hbar * (p.kappa / 2.0).sqrt()));
    Ok((
        HermitianOperator::symmetrized(x),
        HermitianOperator::symmetrized(mom),
    ))
}

/// `A = XP + PX` and `B = (hbar kappa X)^2 - P^2` on the truncated space.
pub fn quadratic_observables(
    p: &GaussianParams,
    t: &FockTruncation,
) -> Result<(HermitianOperator, HermitianOperator)> {
    let (x, mom) = quadrature_ops(p, t)?;
    let (x, mom) = (x.matrix(), mom.matrix());
    let a = x.multiply(mom)?.add(&mom.multiply(x)?)?;
    let scaled_x = x.scale_real(p.hbar * p.kappa);
    let b = scaled_x.multiply(&scaled_x)?.sub(&mom.multiply(mom)?)?;
    Ok((
        HermitianOperator::symmetrized(a),
        HermitianOperator::symmetrized(b),
    ))
}

/// Fock amplitudes of `|+-a>`: `exp(-beta^2/2) (+-beta)^n / sqrt(n!)`,
/// renormalized after truncation.
///
/// Fails with [`Error::Truncation`] if the untruncated state puts
/// [`TAIL_WEIGHT_TOL`] or more of its weight at or above
/// `n_max - convergence_margin`.
pub fn displaced_gaussian(p: &GaussianParams, side: Side, t: &FockTruncation) -> Result<CVector> {
    let beta = side.sign() * p.beta();
    let cutoff = t.cutoff();
    let mut amps = alloc::vec![0.0f64; t.n_max];
    let mut amp = (-0.5 * beta * beta).exp();
    let mut tail = 0.0f64;
    let mut n = 0usize;
    loop {
        if n < t.n_max {
            amps[n] = amp;
        }
        if n >= cutoff {
            tail += amp * amp;
            // terms decay faster than geometrically once n > beta^2
            let past_peak = (n as f64) > 2.0 * beta * beta + 1.0;
            if past_peak && amp * amp <= f64::MIN_POSITIVE.max(tail * 1e-18) {
                break;
            }
            if n > cutoff + 100_000 {
                break;
            }
        }
        n += 1;
        amp *= beta / (n as f64).sqrt();
    }
    if tail >= TAIL_WEIGHT_TOL {
        return Err(Error::Truncation {
            tail_weight: tail,
            cutoff,
            n_max: t.n_max,
        });
    }
    let v = CVector::from_iterator(t.n_max, amps.into_iter().map(|x| Complex64::new(x, 0.0)));
    let norm = v.norm();
    Ok(v.unscale(norm))
}

/// Observables and the equal mixture `rho = (|a><a| + |-a><-a|) / 2`.
///
/// For `a = 0` the state is the pure ground state; see
/// [`GaussianParams::is_degenerate`].
pub fn gaussian_mixture_example(
    p: &GaussianParams,
    t: &FockTruncation,
) -> Result<(HermitianOperator, HermitianOperator, DensityMatrix)> {
    let (a, b) = quadratic_observables(p, t)?;
    let plus = displaced_gaussian(p, Side::Positive, t)?;
    let minus = displaced_gaussian(p, Side::Negative, t)?;
    let rho = DensityMatrix::mixture(&[(0.5, plus), (0.5, minus)])?;
    Ok((a, b, rho))
}

/// Moments of one state that enter the uncertainty relation for `A`, `B`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Moments {
    pub x: f64,
    pub p: f64,
    pub x2: f64,
    pub p2: f64,
    pub a: f64,
    pub a2: f64,
    pub b: f64,
    pub b2: f64,
    /// `<i[A, B]>`.
    pub commutator: f64,
}

impl Moments {
    pub fn variance_a(&self) -> f64 {
        self.a2 - self.a * self.a
    }

    pub fn variance_b(&self) -> f64 {
        self.b2 - self.b * self.b
    }

    pub fn product(&self) -> f64 {
        (self.variance_a().max(0.0) * self.variance_b().max(0.0)).sqrt()
    }

    pub fn bound(&self) -> f64 {
        0.5 * self.commutator.abs()
    }

    pub fn gap(&self) -> f64 {
        self.product() - self.bound()
    }

    /// Equal-weight average of two states' moments.
    pub fn average(&self, other: &Self) -> Self {
        let mid = |u: f64, v: f64| 0.5 * (u + v);
        Self {
            x: mid(self.x, other.x),
            p: mid(self.p, other.p),
            x2: mid(self.x2, other.x2),
            p2: mid(self.p2, other.p2),
            a: mid(self.a, other.a),
            a2: mid(self.a2, other.a2),
            b: mid(self.b, other.b),
            b2: mid(self.b2, other.b2),
            commutator: mid(self.commutator, other.commutator),
        }
    }

    /// Largest absolute difference over all entries.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            self.x - other.x,
            self.p - other.p,
            self.x2 - other.x2,
            self.p2 - other.p2,
            self.a - other.a,
            self.a2 - other.a2,
            self.b - other.b,
            self.b2 - other.b2,
            self.commutator - other.commutator,
        ]
        .iter()
        .fold(0.0f64, |m, d| m.max(d.abs()))
    }
}

/// Moments of `|a>`, `|-a>` and their equal mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MomentTable {
    pub positive: Moments,
    pub negative: Moments,
    pub mixture: Moments,
}

impl MomentTable {
    fn from_components(positive: Moments, negative: Moments) -> Self {
        Self {
            positive,
            negative,
            mixture: positive.average(&negative),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.positive
            .max_abs_diff(&other.positive)
            .max(self.negative.max_abs_diff(&other.negative))
            .max(self.mixture.max_abs_diff(&other.mixture))
    }
}

/// Closed-form moments of the displaced Gaussians.
///
/// With real `beta = a sqrt(kappa/2)`:
/// `<A> = 0`, `<A^2> = hbar^2 (4 beta^2 + 2)`, `<B> = 2 hbar^2 kappa beta^2`,
/// `<B^2> = hbar^4 kappa^2 (4 beta^4 + 4 beta^2 + 2)` and
/// `<i[A,B]> = 4 hbar^3 kappa (2 beta^2 + 1)`. Both components give the same
/// values for the parity-even `A` and `B`, so at `hbar = kappa = 1` the
/// mixture has `dA dB = |<i[A,B]>|/2 = 2 (a^2 + 1)`.
pub fn gaussian_moments_exact(p: &GaussianParams) -> MomentTable {
    let (h, k) = (p.hbar, p.kappa);
    let b2 = p.beta() * p.beta();
    let single = |sign: f64| Moments {
        x: sign * p.a,
        p: 0.0,
        x2: p.a * p.a + 1.0 / (2.0 * k),
        p2: h * h * k / 2.0,
        a: 0.0,
        a2: h * h * (4.0 * b2 + 2.0),
        b: 2.0 * h * h * k * b2,
        b2: h.powi(4) * k * k * (4.0 * b2 * b2 + 4.0 * b2 + 2.0),
        commutator: 4.0 * h.powi(3) * k * (2.0 * b2 + 1.0),
    };
    MomentTable::from_components(single(1.0), single(-1.0))
}

fn pure_moments(
    x: &HermitianOperator,
    mom: &HermitianOperator,
    a: &HermitianOperator,
    b: &HermitianOperator,
    state: &DensityMatrix,
) -> Result<Moments> {
    let square = |op: &HermitianOperator| -> Result<HermitianOperator> {
        Ok(HermitianOperator::symmetrized(op.matrix().multiply(op.matrix())?))
    };
    Ok(Moments {
        x: expectation(x, state)?,
        p: expectation(mom, state)?,
        x2: expectation(&square(x)?, state)?,
        p2: expectation(&square(mom)?, state)?,
        a: expectation(a, state)?,
        a2: expectation(&square(a)?, state)?,
        b: expectation(b, state)?,
        b2: expectation(&square(b)?, state)?,
        commutator: commutator_expectation(a, b, state, &Tolerances::default())?,
    })
}

/// Moments evaluated with truncated Fock matrices.
///
/// The mixture row is evaluated on the mixed density matrix itself, not
/// averaged, so it also exercises the non-orthogonal mixture.
pub fn fock_moments(p: &GaussianParams, t: &FockTruncation) -> Result<MomentTable> {
    let (x, mom) = quadrature_ops(p, t)?;
    let (a, b, rho) = gaussian_mixture_example(p, t)?;
    let plus = DensityMatrix::pure(&displaced_gaussian(p, Side::Positive, t)?)?;
    let minus = DensityMatrix::pure(&displaced_gaussian(p, Side::Negative, t)?)?;
    Ok(MomentTable {
        positive: pure_moments(&x, &mom, &a, &b, &plus)?,
        negative: pure_moments(&x, &mom, &a, &b, &minus)?,
        mixture: pure_moments(&x, &mom, &a, &b, &rho)?,
    })
}

/// Smallest power-of-two-ish basis size (at least `min_n`) for which both
/// displaced Gaussians pass the tail-weight guard.
pub fn auto_truncation(p: &GaussianParams, min_n: usize, margin: usize) -> Result<FockTruncation> {
    let mut n = min_n.max(margin + 2);
    loop {
        let t = FockTruncation::new(n, margin)?;
        match displaced_gaussian(p, Side::Positive, &t) {
            Ok(_) => return Ok(t),
            Err(Error::Truncation { .. }) if n < 4096 => n *= 2,
            Err(e) => return Err(e),
        }
    }
}

#[cfg(test)]
mod tests;
