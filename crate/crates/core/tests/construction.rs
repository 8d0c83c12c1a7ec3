use minuncert_core::eigenspace::ket;
use minuncert_core::sample;
use minuncert_core::spin::spin_example;
use minuncert_core::{
    combined_operator, eigenket_check, find_saturating_mixed_states, search_saturating_state,
    three_level_example, uncertainty_report, CVector, Complex64, FinderOptions, HermitianOperator,
    SaturatingFamily, SearchConfig,
};

fn check_family(a: &HermitianOperator, b: &HermitianOperator, f: &SaturatingFamily) {
    let opts = FinderOptions::default();
    let report = uncertainty_report(a, b, &f.canonical_state, opts.saturation_tol).unwrap();
    assert!(report.gap <= opts.saturation_tol, "gap {:e}", report.gap);
    let k = f.kernel_dim();
    assert!(k >= 2);
    assert!((f.canonical_state.purity() - 1.0 / k as f64).abs() <= 1e-10);
    assert!(f.canonical_state.purity() <= 0.5 + 1e-10);
    // v^dagger A v = Re z and lambda v^dagger B v = Im z for kernel vectors
    for v in &f.kernel_basis {
        let mean_a = a.matrix().sandwich(v, v).unwrap().re;
        let mean_b = b.matrix().sandwich(v, v).unwrap().re;
        assert!((mean_a - f.eigenvalue.re).abs() <= 1e-9);
        assert!((f.lambda * mean_b - f.eigenvalue.im).abs() <= 1e-9);
    }
}

#[test]
fn random_pairs_yield_only_sound_families() {
    let mut rng = sample::rng(77);
    let mut total = 0;
    for trial in 0..100 {
        let dim = 2 + trial % 5;
        let a = sample::hermitian(&mut rng, dim);
        let b = sample::hermitian(&mut rng, dim);
        let families = find_saturating_mixed_states(&a, &b, 1.0, &FinderOptions::default()).unwrap();
        for f in &families {
            check_family(&a, &b, f);
        }
        total += families.len();
    }
    // generic pairs have no degenerate eigenvalues
    assert_eq!(total, 0);
}

#[test]
fn planted_degeneracies_are_found() {
    let mut rng = sample::rng(78);
    for trial in 0..40 {
        let dim = 3 + trial % 4;
        let k = 2 + trial % 2;
        let z = Complex64::new(0.3 * trial as f64 - 2.0, 0.7);
        let (a, b, planted) = sample::planted_pair(&mut rng, dim, k, z).unwrap();
        let families = find_saturating_mixed_states(&a, &b, 1.0, &FinderOptions::default()).unwrap();
        let hit = families
            .iter()
            .find(|f| (f.eigenvalue - z).norm() < 1e-8)
            .unwrap_or_else(|| panic!("trial {trial}: planted eigenvalue missing"));
        assert_eq!(hit.kernel_dim(), k, "trial {trial}");
        for v in &planted {
            let mut proj = CVector::zeros(dim);
            for u in &hit.kernel_basis {
                proj += u * u.dotc(v);
            }
            assert!((v - proj).norm() < 1e-8);
        }
        assert!(hit.is_nontrivial());
        for f in &families {
            check_family(&a, &b, f);
        }
    }
}

#[test]
fn unitary_conjugation_moves_canonical_states() {
    let (a, b, _) = three_level_example();
    let mut rng = sample::rng(5);
    let mut cases = vec![(a, b)];
    let (pa, pb, _) = sample::planted_pair(&mut rng, 5, 2, Complex64::new(1.0, -0.5)).unwrap();
    cases.push((pa, pb));
    for (a, b) in cases {
        let u = sample::unitary(&mut rng, a.dim());
        let opts = FinderOptions::default();
        let before = find_saturating_mixed_states(&a, &b, 1.0, &opts).unwrap();
        let after = find_saturating_mixed_states(
            &a.conjugated(&u).unwrap(),
            &b.conjugated(&u).unwrap(),
            1.0,
            &opts,
        )
        .unwrap();
        assert_eq!(before.len(), after.len());
        assert!(!before.is_empty());
        for f in &before {
            let g = after
                .iter()
                .find(|g| (g.eigenvalue - f.eigenvalue).norm() < 1e-8)
                .expect("matching eigenvalue");
            let moved = f.canonical_state.conjugated(&u).unwrap();
            assert!(moved.matrix().max_abs_diff(g.canonical_state.matrix()).unwrap() < 1e-8);
        }
    }
}

#[test]
fn first_ket_is_an_eigenket_of_the_sum_only() {
    let (a, b, _) = three_level_example();
    let m = combined_operator(&a, &b, 1.0).unwrap();
    let e1 = ket(3, 0);
    assert!(eigenket_check(&m, &e1, 1e-12).unwrap().is_eigenket);
    assert!(!eigenket_check(a.matrix(), &e1, 1e-12).unwrap().is_eigenket);
    assert!(!eigenket_check(b.matrix(), &e1, 1e-12).unwrap().is_eigenket);
}

#[test]
fn spin_mixture_is_recovered_at_unit_lambda() {
    let (jx, jy, rho) = spin_example();
    let families = find_saturating_mixed_states(&jx, &jy, 1.0, &FinderOptions::default()).unwrap();
    let hit = families
        .iter()
        .find(|f| f.canonical_state.matrix().max_abs_diff(rho.matrix()).unwrap() <= 1e-10)
        .expect("spin mixture among the families");
    assert!(hit.is_nontrivial());
    assert!(hit.eigenvalue.norm() < 1e-10);
}

/// Five fixed seeds used for statistical checks on the search.
const SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

#[test]
fn search_converges_where_construction_succeeds() {
    let mut rng = sample::rng(90);
    let (a, b, _) = three_level_example();
    let mut cases = vec![(a, b)];
    for trial in 0..4 {
        let (pa, pb, _) =
            sample::planted_pair(&mut rng, 3 + trial, 2, Complex64::new(0.5, 0.25)).unwrap();
        cases.push((pa, pb));
    }
    for (idx, (a, b)) in cases.iter().enumerate() {
        let families = find_saturating_mixed_states(a, b, 1.0, &FinderOptions::default()).unwrap();
        let Some(family) = families.iter().find(|f| f.is_nontrivial()) else {
            continue;
        };
        let converged = SEEDS
            .iter()
            .filter(|&&seed| {
                let cfg = SearchConfig {
                    rank: family.kernel_dim(),
                    purity_max: 1.0 / family.kernel_dim() as f64 + 0.4,
                    gap_tol: 1e-6,
                    seed,
                    ..SearchConfig::default()
                };
                search_saturating_state(a, b, &cfg).unwrap().converged
            })
            .count();
        assert!(converged >= 3, "case {idx}: {converged}/5");
    }
}

#[test]
fn spin_kernels_form_a_family_in_lambda() {
    let (jx, jy, _) = spin_example();
    let space = minuncert_core::spin::SpinSpace::new(&[0.0, 1.0]).unwrap();
    let singlet = space.ket(0, 0.0).unwrap();
    let up = space.ket(1, 1.0).unwrap();
    let down = space.ket(1, -1.0).unwrap();
    for lambda in [-3.0, -0.5, 0.25, 1.0, 2.0] {
        let psi = (&up * Complex64::new(1.0 + lambda, 0.0) - &down * Complex64::new(1.0 - lambda, 0.0))
            .unscale(((1.0 + lambda) * (1.0 + lambda) + (1.0 - lambda) * (1.0 - lambda)).sqrt());
        let families =
            find_saturating_mixed_states(&jx, &jy, lambda, &FinderOptions::default()).unwrap();
        let family = families
            .iter()
            .find(|f| f.eigenvalue.norm() < 1e-10)
            .unwrap_or_else(|| panic!("lambda {lambda}: no family at 0"));
        assert_eq!(family.kernel_dim(), 2);
        assert!(family.is_nontrivial());
        for v in [&singlet, &psi] {
            let mut proj = CVector::zeros(4);
            for u in &family.kernel_basis {
                proj += u * u.dotc(v);
            }
            assert!((v - proj).norm() < 1e-10, "lambda {lambda}");
        }
    }
}

