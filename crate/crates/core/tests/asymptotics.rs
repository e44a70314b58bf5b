use admix_core::asymptotics::{
    alpha12_upper_bound, correction_log, independence_log_product, log2_binom, spa_alpha12,
    stirling_central_log, Mode, CORRECTION_LIMIT,
};
use admix_core::enumerate::count_a12;
use admix_core::MarginSpec;

#[test]
fn stirling_error_shrinks_cubically() {
    let mut prev = f64::INFINITY;
    for m in 2..400u64 {
        let err = (stirling_central_log(m) - log2_binom(2 * m, m).unwrap()).abs();
        if m >= 4 {
            assert!(err <= 1.0 / (m * m * m) as f64, "m={m} err={err}");
        }
        assert!(err < prev, "m={m}");
        prev = err;
    }
}

#[test]
fn exact_counts_sit_under_the_bound_and_near_the_saddle() {
    for n in 2..=4u64 {
        let spec = MarginSpec::semiregular_half(n as usize, n as usize).unwrap();
        let exact = count_a12(&spec).log2();
        assert!(exact <= alpha12_upper_bound(n, n), "n={n}");
        assert!((exact - spa_alpha12(n, n)).abs() <= 0.06, "n={n}");
    }
}

#[test]
fn correction_decreases_toward_limit() {
    let ns = [2u64, 3, 4, 5, 6, 7, 8, 9, 100, 1000, 10_000];
    let values: Vec<f64> = ns.iter().map(|&n| correction_log(n, n)).collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]));
    assert!(values.iter().all(|&v| v > CORRECTION_LIMIT));
    assert!((values[values.len() - 1] - CORRECTION_LIMIT).abs() < 1e-3);
}

#[test]
fn correction_is_spa_minus_independence() {
    for (n, p) in [(2u64, 2u64), (3, 5), (40, 7), (300, 300)] {
        let direct = spa_alpha12(n, p) - independence_log_product(n, p, Mode::Exact);
        assert!((direct - correction_log(n, p)).abs() < 1e-8, "N={n} P={p}");
    }
}

#[test]
fn asymmetric_correction_target() {
    // -(N-1)(P-1)/(4NP) log2(e) is the leading behaviour for unequal sides too.
    let (n, p) = (20_000u64, 5_000u64);
    let target = -(((n - 1) * (p - 1)) as f64) / (4 * n * p) as f64 * std::f64::consts::LOG2_E;
    assert!((correction_log(n, p) - target).abs() < 1e-3);
}
