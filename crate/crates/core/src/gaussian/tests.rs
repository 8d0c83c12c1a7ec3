use super::quadrature::{component_moments, quadrature_moments};
use super::*;
use crate::eigenspace::{scan_lambda, FinderOptions};
use crate::matrix::{commutator, vector_norm};
use crate::uncertainty::{uncertainty_report, purity};

fn params(a: f64, kappa: f64, hbar: f64) -> GaussianParams {
    GaussianParams::new(a, kappa, hbar).unwrap()
}

fn trunc(n: usize) -> FockTruncation {
    FockTruncation::new(n, 8.min(n - 1)).unwrap()
}

#[test]
fn parameter_validation() {
    assert!(GaussianParams::new(1.0, 0.0, 1.0).is_err());
    assert!(GaussianParams::new(1.0, 1.0, -1.0).is_err());
    assert!(GaussianParams::new(f64::NAN, 1.0, 1.0).is_err());
    assert!(FockTruncation::new(1, 0).is_err());
    assert!(FockTruncation::new(8, 8).is_err());
}

#[test]
fn canonical_commutator_on_low_states() {
    let (x, mom) = quadrature_ops(&params(0.0, 1.0, 1.0), &trunc(4)).unwrap();
    let comm = commutator(x.matrix(), mom.matrix()).unwrap();
    assert!((comm[(0, 0)] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    // exact everywhere except the last diagonal entry
    for n in 0..3 {
        assert!((comm[(n, n)] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }
    assert!((comm[(3, 3)] - Complex64::new(0.0, -3.0)).norm() < 1e-12);
}

#[test]
fn ground_state_widths_match_kappa() {
    let t = trunc(16);
    let ground = DensityMatrix::pure(&crate::matrix::basis_vector(16, 0)).unwrap();
    let (x, _) = quadrature_ops(&params(0.0, 1.0, 1.0), &t).unwrap();
    let x2 = HermitianOperator::symmetrized(x.matrix().multiply(x.matrix()).unwrap());
    assert!((expectation(&x2, &ground).unwrap() - 0.5).abs() < 1e-14);

    let p = params(0.0, 2.0, 1.0);
    let (_, mom) = quadrature_ops(&p, &t).unwrap();
    let p2 = HermitianOperator::symmetrized(mom.matrix().multiply(mom.matrix()).unwrap());
    let fock = expectation(&p2, &ground).unwrap();
    let quad = component_moments(&p, Side::Positive, 16).unwrap().p2;
    assert!((fock - 1.0).abs() < 1e-14);
    assert!((fock - quad).abs() < 1e-13);
}

#[test]
fn squared_annihilator_identity() {
    // B + i hbar kappa A = (hbar kappa X + i P)^2, exactly even when truncated.
    for (kappa, hbar) in [(1.0, 1.0), (2.0, 0.5), (0.5, 1.0)] {
        let p = params(0.0, kappa, hbar);
        let t = trunc(20);
        let (x, mom) = quadrature_ops(&p, &t).unwrap();
        let (a, b) = quadratic_observables(&p, &t).unwrap();
        let lowering = x
            .matrix()
            .scale_real(hbar * kappa)
            .add(&mom.matrix().scale(Complex64::new(0.0, 1.0)))
            .unwrap();
        let square = lowering.multiply(&lowering).unwrap();
        let lhs = b
            .matrix()
            .add(&a.matrix().scale(Complex64::new(0.0, hbar * kappa)))
            .unwrap();
        assert!(lhs.max_abs_diff(&square).unwrap() < 1e-12);
        // and the lowering operator is hbar sqrt(2 kappa) c
        let c = annihilation(20).scale_real(hbar * (2.0 * kappa).sqrt());
        assert!(lowering.max_abs_diff(&c).unwrap() < 1e-12);
    }
}

#[test]
fn a_is_traceless_under_truncation() {
    for n in [16, 32, 64] {
        let (a, _) = quadratic_observables(&params(0.0, 1.0, 1.0), &trunc(n)).unwrap();
        assert!(a.matrix().trace().norm() < 1e-12, "n = {n}");
    }
}

#[test]
fn ground_state_has_zero_mean_a() {
    let t = trunc(16);
    let (a, _) = quadratic_observables(&params(0.0, 1.0, 1.0), &t).unwrap();
    let ground = DensityMatrix::pure(&crate::matrix::basis_vector(16, 0)).unwrap();
    assert!(expectation(&a, &ground).unwrap().abs() < 1e-15);
}

#[test]
fn zero_displacement_is_vacuum() {
    let v = displaced_gaussian(&params(0.0, 1.0, 1.0), Side::Positive, &trunc(10)).unwrap();
    assert_eq!(v[0], Complex64::new(1.0, 0.0));
    assert!(v.iter().skip(1).all(|z| *z == Complex64::new(0.0, 0.0)));
}

#[test]
fn displaced_gaussian_mean_and_overlap() {
    let p = params(1.0, 1.0, 1.0);
    let t = FockTruncation::default();
    let plus = displaced_gaussian(&p, Side::Positive, &t).unwrap();
    let minus = displaced_gaussian(&p, Side::Negative, &t).unwrap();
    let (x, _) = quadrature_ops(&p, &t).unwrap();
    let mean = expectation(&x, &DensityMatrix::pure(&plus).unwrap()).unwrap();
    let quad = component_moments(&p, Side::Positive, 20).unwrap().x;
    assert!((mean - 1.0).abs() < 1e-9);
    assert!((mean - quad).abs() < 1e-9);
    // Gaussian integral: <a|-a> = exp(-kappa a^2)
    let overlap = plus.dotc(&minus);
    assert!((overlap.re - (-1.0f64).exp()).abs() < 1e-9);
    assert!(overlap.im.abs() < 1e-15);
    assert!((p.overlap() - (-1.0f64).exp()).abs() < 1e-15);
}

#[test]
fn small_basis_reports_truncation() {
    let err = displaced_gaussian(&params(5.0, 1.0, 1.0), Side::Positive, &trunc(16)).unwrap_err();
    assert!(matches!(err, Error::Truncation { .. }));
    let auto = auto_truncation(&params(5.0, 1.0, 1.0), 16, 8).unwrap();
    assert!(auto.n_max > 16);
    assert!(displaced_gaussian(&params(5.0, 1.0, 1.0), Side::Negative, &auto).is_ok());
}

#[test]
fn mixture_reaches_bound_at_default_grid() {
    let p = GaussianParams::default();
    let (a, b, rho) = gaussian_mixture_example(&p, &FockTruncation::default()).unwrap();
    let r = uncertainty_report(&a, &b, &rho, 1e-9).unwrap();
    assert!((r.product - 4.0).abs() < 1e-8, "product {}", r.product);
    assert!((r.bound - 4.0).abs() < 1e-8, "bound {}", r.bound);
    assert!(r.saturated && r.nontrivial);
    let expected_purity = 0.5 * (1.0 + (-2.0f64).exp());
    assert!((purity(&rho) - expected_purity).abs() < 1e-8);
    assert!((p.mixture_purity() - expected_purity).abs() < 1e-15);
}

#[test]
fn zero_displacement_mixture_is_pure_and_saturates() {
    let p = params(0.0, 1.0, 1.0);
    assert!(p.is_degenerate());
    let (a, b, rho) = gaussian_mixture_example(&p, &FockTruncation::default()).unwrap();
    assert!((purity(&rho) - 1.0).abs() < 1e-12);
    let r = uncertainty_report(&a, &b, &rho, 1e-9).unwrap();
    assert!(r.saturated);
    assert!((r.bound - 2.0).abs() < 1e-10);
}

#[test]
fn closed_form_moments_at_unit_parameters() {
    let m = gaussian_moments_exact(&GaussianParams::default());
    assert_eq!(m.positive.x, 1.0);
    assert_eq!(m.negative.x, -1.0);
    assert_eq!(m.positive.p, 0.0);
    assert_eq!(m.positive.x2, 1.5);
    assert_eq!(m.mixture.bound(), 4.0);
    assert_eq!(m.mixture.product(), 4.0);
}

fn grid() -> impl Iterator<Item = GaussianParams> {
    let mut out = alloc::vec::Vec::new();
    for a in [0.0, 0.5, 1.0, 2.0] {
        for kappa in [0.5, 1.0, 2.0] {
            for hbar in [0.5, 1.0] {
                out.push(params(a, kappa, hbar));
            }
        }
    }
    out.into_iter()
}

#[test]
fn three_routes_agree_on_grid() {
    for p in grid() {
        let exact = gaussian_moments_exact(&p);
        let quad = quadrature_moments(&p, 24).unwrap();
        let t = auto_truncation(&p, 32, 8).unwrap();
        let fock = fock_moments(&p, &t).unwrap();
        assert!(exact.max_abs_diff(&quad) < 1e-8, "{p:?}: quadrature");
        assert!(exact.max_abs_diff(&fock) < 1e-8, "{p:?}: fock");
        for table in [&exact, &quad, &fock] {
            assert!(table.mixture.gap().abs() < 1e-8, "{p:?}");
        }
        // closed-form bound 2 hbar^3 kappa (kappa a^2 + 1)
        let bound = 2.0 * p.hbar.powi(3) * p.kappa * (p.kappa * p.a * p.a + 1.0);
        assert!((exact.mixture.bound() - bound).abs() < 1e-12 * bound.max(1.0));
    }
}

#[test]
fn parity_even_observables_have_equal_means() {
    for p in grid() {
        let t = auto_truncation(&p, 32, 8).unwrap();
        let fock = fock_moments(&p, &t).unwrap();
        assert!((fock.positive.a - fock.negative.a).abs() < 1e-10);
        assert!((fock.positive.b - fock.negative.b).abs() < 1e-10);
    }
}

#[test]
fn gap_converges_with_basis_size() {
    for p in [params(1.0, 1.0, 1.0), params(2.0, 0.5, 1.0), params(0.5, 2.0, 0.5)] {
        let base = auto_truncation(&p, 16, 8).unwrap().n_max;
        let gap = |n: usize| {
            let (a, b, rho) = gaussian_mixture_example(&p, &trunc(n)).unwrap();
            uncertainty_report(&a, &b, &rho, 1e-9).unwrap().gap
        };
        let gaps: alloc::vec::Vec<f64> = [base, 2 * base, 4 * base].iter().map(|&n| gap(n)).collect();
        let d1 = (gaps[0] - gaps[1]).abs();
        let d2 = (gaps[1] - gaps[2]).abs();
        assert!(d2 <= d1 + 1e-12, "{p:?}: {d1:e} then {d2:e}");
        assert!(d2 < 1e-8);
    }
}

#[test]
fn eigenspace_scan_recovers_both_gaussians() {
    let p = GaussianParams::default();
    let t = FockTruncation::default();
    let (a, b) = quadratic_observables(&p, &t).unwrap();
    let lambda = p.saturating_lambda();
    let opts = FinderOptions {
        candidates: alloc::vec![p.saturating_eigenvalue()],
        ..FinderOptions::default()
    };
    let families = scan_lambda(&a, &b, &[lambda], &opts).unwrap();
    let plus = displaced_gaussian(&p, Side::Positive, &t).unwrap();
    let minus = displaced_gaussian(&p, Side::Negative, &t).unwrap();
    let captures = |basis: &[CVector], v: &CVector| {
        let mut proj = CVector::zeros(v.len());
        for u in basis {
            proj += u * u.dotc(v);
        }
        vector_norm(&(v - proj))
    };
    let family = families
        .iter()
        .find(|f| captures(&f.kernel_basis, &plus) < 1e-7 && captures(&f.kernel_basis, &minus) < 1e-7)
        .expect("family containing both displaced Gaussians");
    assert!((family.eigenvalue - p.saturating_eigenvalue()).norm() < 1e-7);
    assert!(family.report.saturated && family.report.nontrivial);
}
