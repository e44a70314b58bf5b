use admix_core::criteria::{
    error_fraction_bound, estimate_volume_fraction, exact_criterion, semiregular_grid_agreement,
    uncertainty_width,
};
use admix_core::enumerate::{count_a1, count_a2};
use admix_core::MarginSpec;

#[test]
fn exact_decision_matches_counts() {
    for (n, p) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 4), (4, 1)] {
        for a in 0..=2 * p {
            for f0 in 0..=2 * n {
                for f1 in 0..=2 * n - f0 {
                    let spec = MarginSpec::semiregular(n, p, a, f0, f1).unwrap();
                    let report = exact_criterion(&spec);
                    assert_eq!(report.exact_decision, count_a1(&spec) > count_a2(&spec), "{spec:?}");
                }
            }
        }
    }
    let spec = MarginSpec::new(2, 3, vec![1, 5], vec![0, 2, 3], vec![4, 1, 0]).unwrap();
    assert_eq!(exact_criterion(&spec).exact_decision, count_a1(&spec) > count_a2(&spec));
}

#[test]
fn disagreements_sit_near_the_boundary() {
    for (n, p) in [(10, 10), (50, 20), (100, 100), (10, 300)] {
        let grid = semiregular_grid_agreement(n, p).unwrap();
        let width = uncertainty_width(n, p);
        for d in &grid.disagreements {
            assert!(d.score.abs() <= 10.0 * width, "N={n} P={p} {d:?}");
        }
        assert!(grid.fitted_constant() <= 10.0);
    }
}

#[test]
fn agreement_improves_with_size() {
    let small = semiregular_grid_agreement(20, 20).unwrap().fraction;
    let large = semiregular_grid_agreement(200, 200).unwrap().fraction;
    assert!(large > small);
    assert!((0.0..=1.0).contains(&small));
}

#[test]
fn volume_estimate_respects_bound() {
    for n in [100, 1000] {
        for p in [100, 1000] {
            let est = estimate_volume_fraction(n, p, 200_000, 17).unwrap();
            assert!(est.fraction <= error_fraction_bound(n, p) + 3.0 * est.std_error, "N={n} P={p}");
        }
    }
}

#[test]
fn volume_estimate_shrinks_as_size_doubles() {
    let sizes = [128u64, 256, 512, 1024];
    let est: Vec<_> = sizes
        .iter()
        .map(|&n| estimate_volume_fraction(n, n, 400_000, 23).unwrap())
        .collect();
    for w in est.windows(2) {
        let slack = 3.0 * (w[0].std_error.powi(2) + w[1].std_error.powi(2)).sqrt();
        assert!(w[1].fraction <= w[0].fraction + slack, "{w:?}");
    }
    assert!(est[3].fraction < est[0].fraction);
}
