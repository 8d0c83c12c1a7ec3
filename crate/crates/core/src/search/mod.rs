//! Direct numerical search for mixed states of minimum uncertainty.
//!
//! States are parametrized as `rho(L) = L L^dagger / tr(L L^dagger)` with a
//! `dim x rank` complex factor `L`, so every iterate is a valid density
//! matrix of rank at most `rank`. The objective is
//!
//! `f(L) = gap(rho) + w * max(0, purity(rho) - purity_max)^2`
//!
//! minimized by gradient descent with Barzilai-Borwein trial steps and
//! Armijo backtracking. The search never looks at eigenspaces of
//! `A + i*lambda*B`, which makes it an independent check on
//! [`crate::eigenspace`].

use alloc::format;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{check_dim, Error, Result};
use crate::matrix::commutator;
use crate::operator::{DensityMatrix, HermitianOperator};
use crate::tolerance::SATURATION_TOL;
use crate::uncertainty::{uncertainty_report, UncertaintyReport};
#[cfg(not(any(feature = "std", test)))]
#[allow(unused_imports)]
use num_traits::Float;

/// Slack on the purity cap when deciding convergence.
pub const PURITY_SLACK: f64 = 1e-6;
/// Neighbourhood of the `|<i[A,B]>|` and `sqrt` kinks skipped by [`gradient_check`].
pub const KINK_RADIUS: f64 = 1e-7;
/// Gradient-check deviation above which the search falls back to compass steps.
pub const GRADIENT_TRUST: f64 = 1e-4;
const DIRECTIONS: usize = 20;
const ARMIJO: f64 = 1e-4;

type Factor = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchConfig {
    /// Columns of `L`; caps the rank of the state.
    pub rank: usize,
    pub purity_max: f64,
    pub penalty_weight: f64,
    pub max_iters: usize,
    /// The search stops once a trial step shorter than this fails.
    pub step_tol: f64,
    pub gap_tol: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            rank: 2,
            purity_max: 0.9,
            penalty_weight: 1e4,
            max_iters: 20_000,
            step_tol: 1e-14,
            gap_tol: 1e-6,
            seed: 7,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.rank < 2 || self.rank > dim {
            return Err(Error::Input(format!(
                "rank must lie in [2, {dim}], got {}",
                self.rank
            )));
        }
        if !(self.purity_max >= 1.0 / dim as f64 && self.purity_max < 1.0) {
            return Err(Error::Input(format!(
                "purity_max must lie in [1/{dim}, 1), got {}",
                self.purity_max
            )));
        }
        if !(self.penalty_weight > 0.0) {
            return Err(Error::Input("penalty_weight must be positive".into()));
        }
        if !(self.step_tol > 0.0) || !(self.gap_tol > 0.0) {
            return Err(Error::Input("step_tol and gap_tol must be positive".into()));
        }
        Ok(())
    }
}

/// How the search moved through parameter space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum DescentMethod {
    Gradient,
    Compass,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchResult {
    pub state: DensityMatrix,
    pub report: UncertaintyReport,
    /// Objective after the start and after every accepted step.
    pub objective_trace: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub method: DescentMethod,
    pub seed: u64,
}

/// Pieces of `f` at one point, with the hermitian derivative `G = df/drho`.
struct Evaluation {
    value: f64,
    gap: f64,
    purity: f64,
    bound_signal: f64,
    product: f64,
    rho: DMatrix<Complex64>,
    trace: f64,
}

struct Objective<'a> {
    a: &'a DMatrix<Complex64>,
    b: &'a DMatrix<Complex64>,
    a2: DMatrix<Complex64>,
    b2: DMatrix<Complex64>,
    /// `i[A, B]`.
    comm: DMatrix<Complex64>,
    purity_max: f64,
    weight: f64,
}

fn re_trace_product(m: &DMatrix<Complex64>, rho: &DMatrix<Complex64>) -> f64 {
    // Re tr(M rho) for hermitian M, rho
    m.iter().zip(rho.transpose().iter()).map(|(x, y)| (x * y).re).sum()
}

fn real_inner(x: &Factor, y: &Factor) -> f64 {
    x.iter().zip(y.iter()).map(|(u, v)| (u.conj() * v).re).sum()
}

impl<'a> Objective<'a> {
    fn new(a: &'a HermitianOperator, b: &'a HermitianOperator, cfg: &SearchConfig) -> Result<Self> {
        let comm = commutator(a.matrix(), b.matrix())?
            .scale(Complex64::new(0.0, 1.0))
            .hermitian_part();
        let am = a.matrix().as_inner();
        let bm = b.matrix().as_inner();
        Ok(Self {
            a: am,
            b: bm,
            a2: am * am,
            b2: bm * bm,
            comm: comm.into_inner(),
            purity_max: cfg.purity_max,
            weight: cfg.penalty_weight,
        })
    }

    fn evaluate(&self, l: &Factor) -> Result<Evaluation> {
        let gram = l * l.adjoint();
        let trace = gram.trace().re;
        if !(trace > 0.0) || !trace.is_finite() {
            return Err(Error::Numerical(format!("factor has trace {trace}")));
        }
        let rho = gram.unscale(trace);
        let mean_a = re_trace_product(self.a, &rho);
        let mean_b = re_trace_product(self.b, &rho);
        let var_a = (re_trace_product(&self.a2, &rho) - mean_a * mean_a).max(0.0);
        let var_b = (re_trace_product(&self.b2, &rho) - mean_b * mean_b).max(0.0);
        let product = (var_a * var_b).sqrt();
        let bound_signal = re_trace_product(&self.comm, &rho);
        let gap = product - 0.5 * bound_signal.abs();
        let purity: f64 = rho.iter().map(|z| z.norm_sqr()).sum();
        let excess = (purity - self.purity_max).max(0.0);
        let value = gap + self.weight * excess * excess;
        if !value.is_finite() {
            return Err(Error::Numerical("objective is not finite".into()));
        }
        Ok(Evaluation {
            value,
            gap,
            purity,
            bound_signal,
            product,
            rho,
            trace,
        })
    }

    /// Euclidean gradient of `f` with respect to the real and imaginary parts of `L`.
    fn gradient(&self, l: &Factor, ev: &Evaluation) -> Factor {
        let rho = &ev.rho;
        let mean_a = re_trace_product(self.a, rho);
        let mean_b = re_trace_product(self.b, rho);
        let var_a = (re_trace_product(&self.a2, rho) - mean_a * mean_a).max(0.0);
        let var_b = (re_trace_product(&self.b2, rho) - mean_b * mean_b).max(0.0);
        let n = rho.nrows();
        let mut g = DMatrix::<Complex64>::zeros(n, n);
        if ev.product > 0.0 {
            let d_var_a = &self.a2 - self.a * Complex64::new(2.0 * mean_a, 0.0);
            let d_var_b = &self.b2 - self.b * Complex64::new(2.0 * mean_b, 0.0);
            g += (d_var_a * Complex64::new(var_b, 0.0) + d_var_b * Complex64::new(var_a, 0.0))
                / Complex64::new(2.0 * ev.product, 0.0);
        }
        // subgradient with sign(0) = +1
        let sign = if ev.bound_signal >= 0.0 { 1.0 } else { -1.0 };
        g -= &self.comm * Complex64::new(0.5 * sign, 0.0);
        let excess = ev.purity - self.purity_max;
        if excess > 0.0 {
            g += rho * Complex64::new(4.0 * self.weight * excess, 0.0);
        }
        // df = (2/t) Re tr(L^dagger (G - tr(G rho)) dL)
        let centre = re_trace_product(&g, rho);
        for i in 0..n {
            g[(i, i)] -= Complex64::new(centre, 0.0);
        }
        (g * l) * Complex64::new(2.0 / ev.trace, 0.0)
    }
}

fn random_factor(rng: &mut ChaCha8Rng, dim: usize, rank: usize) -> Factor {
    DMatrix::from_fn(dim, rank, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    })
}

fn normalized(l: Factor) -> Factor {
    let norm = l.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    l.unscale(norm)
}

fn is_converged(ev: &Evaluation, cfg: &SearchConfig) -> bool {
    ev.gap <= cfg.gap_tol && ev.purity <= cfg.purity_max + PURITY_SLACK
}

/// Searches for a rank-capped state of small uncertainty gap and purity at
/// most `purity_max`, starting from a seeded random factor.
///
/// Failure to converge is reported through `converged = false` together with
/// the best state found.
pub fn search_saturating_state(
    a: &HermitianOperator,
    b: &HermitianOperator,
    cfg: &SearchConfig,
) -> Result<SearchResult> {
    check_dim(a.dim(), b.dim())?;
    cfg.validate(a.dim())?;
    let objective = Objective::new(a, b, cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let start = normalized(random_factor(&mut rng, a.dim(), cfg.rank));
    let check = gradient_check_at(&objective, &start, 1e-5, cfg.seed)?;
    let method = if check <= GRADIENT_TRUST {
        DescentMethod::Gradient
    } else {
        DescentMethod::Compass
    };
    let (l, trace, iterations) = match method {
        DescentMethod::Gradient => gradient_descent(&objective, start, cfg)?,
        DescentMethod::Compass => compass_descent(&objective, start, cfg)?,
    };
    let ev = objective.evaluate(&l)?;
    let state = DensityMatrix::from_factor(&l)?;
    let report = uncertainty_report(a, b, &state, SATURATION_TOL)?;
    Ok(SearchResult {
        state,
        report,
        converged: is_converged(&ev, cfg),
        objective_trace: trace,
        iterations,
        method,
        seed: cfg.seed,
    })
}

fn assert_valid_state(l: &Factor) -> Result<()> {
    DensityMatrix::from_factor(l).map(|_| ())
}

fn gradient_descent(
    objective: &Objective<'_>,
    mut l: Factor,
    cfg: &SearchConfig,
) -> Result<(Factor, Vec<f64>, usize)> {
    let mut ev = objective.evaluate(&l)?;
    let mut grad = objective.gradient(&l, &ev);
    let mut trace = alloc::vec![ev.value];
    let mut step = 1.0 / real_inner(&grad, &grad).sqrt().max(1e-12);
    let mut iterations = 0;
    while iterations < cfg.max_iters && !is_converged(&ev, cfg) {
        let slope = real_inner(&grad, &grad);
        if slope == 0.0 {
            break;
        }
        let mut alpha = step;
        let accepted = loop {
            let trial = &l - &grad * Complex64::new(alpha, 0.0);
            let trial_ev = objective.evaluate(&trial)?;
            if trial_ev.value <= ev.value - ARMIJO * alpha * slope {
                break Some((trial, trial_ev));
            }
            alpha *= 0.5;
            if alpha * slope.sqrt() < cfg.step_tol {
                break None;
            }
        };
        let Some((next, next_ev)) = accepted else {
            break;
        };
        iterations += 1;
        let next_grad = objective.gradient(&next, &next_ev);
        // Barzilai-Borwein step for the next trial
        let s = &next - &l;
        let y = &next_grad - &grad;
        let sy = real_inner(&s, &y);
        step = if sy > 0.0 {
            real_inner(&s, &s) / sy
        } else {
            2.0 * alpha
        };
        step = step.clamp(1e-12, 1e6);
        // f is invariant under L -> cL; keep |L| = 1
        let norm = next.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        l = next.unscale(norm);
        grad = next_grad * Complex64::new(norm, 0.0);
        step /= norm * norm;
        ev = objective.evaluate(&l)?;
        assert_valid_state(&l)?;
        trace.push(ev.value);
    }
    Ok((l, trace, iterations))
}

fn compass_descent(
    objective: &Objective<'_>,
    mut l: Factor,
    cfg: &SearchConfig,
) -> Result<(Factor, Vec<f64>, usize)> {
    let mut ev = objective.evaluate(&l)?;
    let mut trace = alloc::vec![ev.value];
    let mut delta = 0.1;
    let mut iterations = 0;
    let units = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
    while iterations < cfg.max_iters && !is_converged(&ev, cfg) && delta >= cfg.step_tol {
        let mut improved = false;
        'scan: for idx in 0..l.len() {
            for unit in units {
                for sign in [1.0, -1.0] {
                    let mut trial = l.clone();
                    trial[idx] += unit * (sign * delta);
                    let trial_ev = objective.evaluate(&trial)?;
                    if trial_ev.value < ev.value {
                        l = normalized(trial);
                        ev = objective.evaluate(&l)?;
                        improved = true;
                        break 'scan;
                    }
                }
            }
        }
        if improved {
            iterations += 1;
            assert_valid_state(&l)?;
            trace.push(ev.value);
        } else {
            delta *= 0.5;
        }
    }
    Ok((l, trace, iterations))
}

fn gradient_check_at(objective: &Objective<'_>, l: &Factor, h: f64, seed: u64) -> Result<f64> {
    let ev = objective.evaluate(l)?;
    let grad = objective.gradient(l, &ev);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut worst = 0.0f64;
    for _ in 0..DIRECTIONS {
        let dir = normalized(random_factor(&mut rng, l.nrows(), l.ncols()));
        let plus = objective.evaluate(&(l + &dir * Complex64::new(h, 0.0)))?;
        let minus = objective.evaluate(&(l - &dir * Complex64::new(h, 0.0)))?;
        let near_kink = |e: &Evaluation| e.bound_signal.abs() < KINK_RADIUS || e.product < KINK_RADIUS;
        let crosses = plus.bound_signal.signum() != minus.bound_signal.signum();
        if near_kink(&ev) || near_kink(&plus) || near_kink(&minus) || crosses {
            continue;
        }
        let fd = (plus.value - minus.value) / (2.0 * h);
        let analytic = real_inner(&grad, &dir);
        let scale = fd.abs().max(analytic.abs()).max(1e-8);
        worst = worst.max((analytic - fd).abs() / scale);
    }
    Ok(worst)
}

/// Largest relative deviation between the analytic directional derivative
/// of the search objective and central differences with step `h`, over 20
/// random directions drawn from `cfg.seed`. Directions whose stencil touches
/// a kink of `f` are skipped.
pub fn gradient_check(
    a: &HermitianOperator,
    b: &HermitianOperator,
    cfg: &SearchConfig,
    factor: &DMatrix<Complex64>,
    h: f64,
) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), factor.nrows())?;
    if !(1e-8..=1e-3).contains(&h) {
        return Err(Error::Input(format!("step h = {h} outside [1e-8, 1e-3]")));
    }
    let objective = Objective::new(a, b, cfg)?;
    gradient_check_at(&objective, factor, h, cfg.seed)
}

/// Directional derivatives of the search objective at `factor` along
/// `count` seeded random directions.
pub fn directional_derivatives(
    a: &HermitianOperator,
    b: &HermitianOperator,
    cfg: &SearchConfig,
    factor: &DMatrix<Complex64>,
    count: usize,
) -> Result<Vec<f64>> {
    let objective = Objective::new(a, b, cfg)?;
    let ev = objective.evaluate(factor)?;
    let grad = objective.gradient(factor, &ev);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    Ok((0..count)
        .map(|_| real_inner(&grad, &random_factor(&mut rng, factor.nrows(), factor.ncols())))
        .collect())
}

/// Search objective `f(L)`.
pub fn objective_value(
    a: &HermitianOperator,
    b: &HermitianOperator,
    cfg: &SearchConfig,
    factor: &DMatrix<Complex64>,
) -> Result<f64> {
    Ok(Objective::new(a, b, cfg)?.evaluate(factor)?.value)
}

/// Seeded random `dim x rank` factor, the same draw the search starts from.
pub fn starting_factor(dim: usize, cfg: &SearchConfig) -> DMatrix<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    normalized(random_factor(&mut rng, dim, cfg.rank))
}

/// Factor whose columns are the given vectors.
pub fn factor_from_columns(columns: &[crate::matrix::CVector]) -> Result<DMatrix<Complex64>> {
    let first = columns
        .first()
        .ok_or_else(|| Error::Input("factor needs at least one column".into()))?;
    for col in columns {
        check_dim(first.len(), col.len())?;
    }
    Ok(DMatrix::from_columns(columns))
}

/// Largest principal angle between the column spans of two sets of orthonormal vectors.
pub fn largest_principal_angle(
    left: &[crate::matrix::CVector],
    right: &[crate::matrix::CVector],
) -> Result<f64> {
    if left.len() != right.len() || left.is_empty() {
        return Err(Error::Input("subspaces must have the same positive dimension".into()));
    }
    let k = left.len();
    let overlaps = DMatrix::from_fn(k, k, |i, j| left[i].dotc(&right[j]));
    let svd = overlaps
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let smallest = svd
        .singular_values
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
        .clamp(0.0, 1.0);
    // asin of the sine is accurate for small angles, unlike acos
    Ok((1.0 - smallest * smallest).max(0.0).sqrt().asin())
}
