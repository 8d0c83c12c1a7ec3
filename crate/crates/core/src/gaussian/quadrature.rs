//! Position-space moments by Gauss-Hermite quadrature.
//!
//! Every operator built from `X` and `P = -i hbar d/dx` maps
//! `psi(x) = N exp(-kappa (x - x0)^2 / 2)` to `q(x - x0) psi(x)` for a
//! polynomial `q`, so `<psi|O|psi>` is a Gaussian-weighted polynomial
//! integral that Gauss-Hermite quadrature evaluates exactly.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{GaussianParams, MomentTable, Moments, Side};
use crate::error::{Error, Result};
#[cfg(not(any(feature = "std", test)))]
#[allow(unused_imports)]
use num_traits::Float;

/// Nodes and weights for `int exp(-u^2) f(u) du`, exact up to degree `2n - 1`.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    /// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix with
    /// off-diagonal `sqrt(k/2)`, weights `sqrt(pi) * v_0^2`.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("quadrature needs at least one node".into()));
        }
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for k in 1..n {
            let off = (k as f64 / 2.0).sqrt();
            jacobi[(k - 1, k)] = off;
            jacobi[(k, k - 1)] = off;
        }
        let eig = jacobi.symmetric_eigen();
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let v0 = eig.eigenvectors[(0, i)];
                (eig.eigenvalues[i], core::f64::consts::PI.sqrt() * v0 * v0)
            })
            .collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        Ok(Self {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        })
    }

    pub fn integrate(&self, f: impl Fn(f64) -> Complex64) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&u, &w)| f(u) * w)
            .sum()
    }
}

/// Polynomial `sum_k coeffs[k] t^k` in the shifted coordinate `t = x - x0`.
#[derive(Debug, Clone, PartialEq)]
struct Poly(Vec<Complex64>);

impl Poly {
    fn one() -> Self {
        Poly(alloc::vec![Complex64::new(1.0, 0.0)])
    }

    fn eval(&self, t: f64) -> Complex64 {
        self.0
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * t + c)
    }

    fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let get = |p: &Poly, k: usize| p.0.get(k).copied().unwrap_or_default();
        Poly((0..n).map(|k| get(self, k) + get(other, k)).collect())
    }

    fn scale(&self, s: Complex64) -> Poly {
        Poly(self.0.iter().map(|&c| c * s).collect())
    }

    /// `t * q`.
    fn times_t(&self) -> Poly {
        let mut out = alloc::vec![Complex64::new(0.0, 0.0)];
        out.extend_from_slice(&self.0);
        Poly(out)
    }

    fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly(alloc::vec![Complex64::new(0.0, 0.0)]);
        }
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }
}

/// Operators acting on `q(t) psi` for a Gaussian centred at `x0`.
struct GaussianAlgebra {
    x0: f64,
    kappa: f64,
    hbar: f64,
}

impl GaussianAlgebra {
    fn x(&self, q: &Poly) -> Poly {
        q.times_t().add(&q.scale(Complex64::new(self.x0, 0.0)))
    }

    /// `-i hbar d/dx (q psi) = -i hbar (q' - kappa t q) psi`.
    fn p(&self, q: &Poly) -> Poly {
        let inner = q
            .derivative()
            .add(&q.times_t().scale(Complex64::new(-self.kappa, 0.0)));
        inner.scale(Complex64::new(0.0, -self.hbar))
    }

    fn a(&self, q: &Poly) -> Poly {
        self.x(&self.p(q)).add(&self.p(&self.x(q)))
    }

    fn b(&self, q: &Poly) -> Poly {
        let hk = self.hbar * self.kappa;
        let xx = self.x(&self.x(q)).scale(Complex64::new(hk * hk, 0.0));
        let pp = self.p(&self.p(q)).scale(Complex64::new(-1.0, 0.0));
        xx.add(&pp)
    }
}

/// `<psi|q|psi> = pi^(-1/2) int exp(-u^2) q(u / sqrt(kappa)) du`.
fn gaussian_average(rule: &GaussHermite, kappa: f64, q: &Poly) -> Complex64 {
    let s = 1.0 / kappa.sqrt();
    rule.integrate(|u| q.eval(u * s)) / core::f64::consts::PI.sqrt()
}

/// Moments of the Gaussian on `side`, from quadrature with `nodes` points.
pub fn component_moments(p: &GaussianParams, side: Side, nodes: usize) -> Result<Moments> {
    let rule = GaussHermite::new(nodes)?;
    let alg = GaussianAlgebra {
        x0: side.sign() * p.a,
        kappa: p.kappa,
        hbar: p.hbar,
    };
    let psi = Poly::one();
    let avg = |q: Poly| gaussian_average(&rule, p.kappa, &q).re;
    let a_psi = alg.a(&psi);
    let b_psi = alg.b(&psi);
    // <i[A,B]> = i (<AB> - <BA>)
    let ab = gaussian_average(&rule, p.kappa, &alg.a(&b_psi));
    let ba = gaussian_average(&rule, p.kappa, &alg.b(&a_psi));
    let commutator = (Complex64::new(0.0, 1.0) * (ab - ba)).re;
    Ok(Moments {
        x: avg(alg.x(&psi)),
        p: avg(alg.p(&psi)),
        x2: avg(alg.x(&alg.x(&psi))),
        p2: avg(alg.p(&alg.p(&psi))),
        a: avg(a_psi.clone()),
        a2: avg(alg.a(&a_psi)),
        b: avg(b_psi.clone()),
        b2: avg(alg.b(&b_psi)),
        commutator,
    })
}

/// Moments of `|a>`, `|-a>` and their equal mixture by quadrature.
pub fn quadrature_moments(p: &GaussianParams, nodes: usize) -> Result<MomentTable> {
    Ok(MomentTable::from_components(
        component_moments(p, Side::Positive, nodes)?,
        component_moments(p, Side::Negative, nodes)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_hermite_integrates_monomials() {
        // int exp(-u^2) u^(2k) du = Gamma(k + 1/2)
        let rule = GaussHermite::new(12).unwrap();
        let sqrt_pi = core::f64::consts::PI.sqrt();
        let mut gamma = sqrt_pi;
        for k in 0..12 {
            let got = rule.integrate(|u| Complex64::new(u.powi(2 * k), 0.0)).re;
            assert!((got - gamma).abs() < 1e-9 * gamma, "k = {k}: {got} vs {gamma}");
            let odd = rule.integrate(|u| Complex64::new(u.powi(2 * k + 1), 0.0)).re;
            assert!(odd.abs() < 1e-9 * gamma);
            gamma *= k as f64 + 0.5;
        }
    }

    #[test]
    fn ground_state_widths() {
        let p = GaussianParams::new(0.0, 2.0, 1.0).unwrap();
        let m = component_moments(&p, Side::Positive, 16).unwrap();
        assert!((m.x2 - 0.25).abs() < 1e-13);
        assert!((m.p2 - 1.0).abs() < 1e-13);
        assert!(m.a.abs() < 1e-13);
    }

    #[test]
    fn displaced_mean_position() {
        let p = GaussianParams::new(1.0, 1.0, 1.0).unwrap();
        let m = component_moments(&p, Side::Positive, 16).unwrap();
        assert!((m.x - 1.0).abs() < 1e-13);
        assert!(m.p.abs() < 1e-13);
        assert!((m.x2 - 1.5).abs() < 1e-13);
    }

    #[test]
    fn polynomial_helpers() {
        let q = Poly(alloc::vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(3.0, 0.0)]);
        assert_eq!(q.eval(2.0), Complex64::new(17.0, 0.0));
        assert_eq!(q.derivative().eval(2.0), Complex64::new(14.0, 0.0));
        assert_eq!(q.times_t().eval(2.0), Complex64::new(34.0, 0.0));
    }
}
