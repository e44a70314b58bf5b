//! Saddle-point expansion of `log2 |A12|` in the semi-regular one-half case,
//! the matching upper bound, and the independence-heuristic comparison.
//!
//! All logarithms are base 2 unless a name says otherwise.

use core::f64::consts::{LN_2, LOG2_E, PI};

use crate::bigcount::BigCount;
use crate::{Error, Result};

/// Below this `n`, `log2_binom` goes through the exact integer.
const EXACT_BINOM_MAX_N: u64 = 1000;

/// Below this `m`, the Stirling remainder is taken from `ln m!` directly.
const REMAINDER_SERIES_MIN: u64 = 20;

/// `ln m!`.
pub fn ln_factorial(m: u64) -> f64 {
    if m < REMAINDER_SERIES_MIN {
        return (2..=m).map(|i| libm::log(i as f64)).sum();
    }
    stirling_main(m) + stirling_remainder(m)
}

// m ln m - m + ln(2 pi m) / 2
fn stirling_main(m: u64) -> f64 {
    let x = m as f64;
    x * libm::log(x) - x + 0.5 * libm::log(2.0 * PI * x)
}

// ln m! minus its leading Stirling terms.
fn stirling_remainder(m: u64) -> f64 {
    if m == 0 {
        // ln 0! = 0 and the main term is not defined; callers never need it.
        return 0.0;
    }
    if m < REMAINDER_SERIES_MIN {
        return ln_factorial(m) - stirling_main(m);
    }
    let x = m as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // Bernoulli series; the next term is below 1e-16 for m >= 20.
    inv * (1.0 / 12.0
        - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))))
}

/// `log2 C(n, k)`.
///
/// Exact big-integer logarithm for `n <= 1000`; above that, the entropy form
/// `k ln(n/k) + (n-k) ln(n/(n-k)) + ln(n / (2 pi k (n-k)))/2` plus Stirling
/// remainders, which keeps every term well conditioned.
pub fn log2_binom(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(Error::Domain(alloc::format!("log2_binom: k = {k} > n = {n}")));
    }
    if k == 0 || k == n {
        return Ok(0.0);
    }
    if n <= EXACT_BINOM_MAX_N {
        return Ok(BigCount::binomial(n, k).log2());
    }
    let (nf, kf, rf) = (n as f64, k as f64, (n - k) as f64);
    let entropy = kf * libm::log(nf / kf) - rf * libm::log1p(-kf / nf);
    let gauss = 0.5 * libm::log(nf / (2.0 * PI * kf * rf));
    let rem = stirling_remainder(n) - stirling_remainder(k) - stirling_remainder(n - k);
    Ok((entropy + gauss + rem) / LN_2)
}

/// Binary entropy `H(x)` in bits.
fn h2(x: f64) -> f64 {
    let term = |z: f64| if z <= 0.0 { 0.0 } else { -z * libm::log2(z) };
    term(x) + term(1.0 - x)
}

/// Information-theoretic sandwich for `log2 C(n, k)`, `0 < k < n`:
/// `nH(k/n) + log2(n / (8k(n-k)))/2 <= log2 C(n,k) <= nH(k/n) + log2(n / (2 pi k(n-k)))/2`.
pub fn binomial_entropy_bounds(n: u64, k: u64) -> Result<(f64, f64)> {
    if k == 0 || k >= n {
        return Err(Error::Domain(alloc::format!(
            "entropy bounds need 0 < k < n, got n = {n}, k = {k}"
        )));
    }
    let (nf, kf) = (n as f64, k as f64);
    let base = nf * h2(kf / nf);
    let spread = nf / (kf * (nf - kf));
    Ok((
        base + 0.5 * libm::log2(spread / 8.0),
        base + 0.5 * libm::log2(spread / (2.0 * PI)),
    ))
}

/// `2m - log2(pi m)/2 - log2(e)/(8m)`, the Stirling expansion of `log2 C(2m, m)`.
pub fn stirling_central_log(m: u64) -> f64 {
    let x = m as f64;
    2.0 * x - 0.5 * libm::log2(PI * x) - LOG2_E / (8.0 * x)
}

/// `log2 C(2m, m) - 2m`, computed without forming the `2m` term.
fn central_log_reduced(m: u64) -> f64 {
    if 2 * m <= EXACT_BINOM_MAX_N {
        return BigCount::binomial(2 * m, m).log2() - 2.0 * m as f64;
    }
    (-0.5 * libm::log(PI * m as f64) + stirling_remainder(2 * m) - 2.0 * stirling_remainder(m))
        / LN_2
}

// The part of the upper bound after 2NP.
fn upper_bound_tail(n: f64, p: f64) -> f64 {
    -0.5 * (n * libm::log2(PI * p) + p * libm::log2(PI * n)) + 0.5 * libm::log2(PI * n * p)
}

fn spa_shift(n: f64, p: f64) -> f64 {
    let s = n + p - 1.0;
    s * s / (8.0 * n * p) * LOG2_E
}

/// Upper bound on `log2 |A12|` for the semi-regular one-half margins:
/// `2NP - [N log2(pi P) + P log2(pi N)]/2 + log2(pi N P)/2`.
pub fn alpha12_upper_bound(n: u64, p: u64) -> f64 {
    let (nf, pf) = (n as f64, p as f64);
    2.0 * nf * pf + upper_bound_tail(nf, pf)
}

/// Saddle-point value of `log2 |A12|`: the upper bound minus
/// `(N+P-1)^2 / (8NP) log2(e)`.
pub fn spa_alpha12(n: u64, p: u64) -> f64 {
    let (nf, pf) = (n as f64, p as f64);
    2.0 * nf * pf + (upper_bound_tail(nf, pf) - spa_shift(nf, pf))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Binomials evaluated through [`log2_binom`].
    Exact,
    /// Closed form from the central-binomial Stirling expansion.
    Stirling,
}

// N r(P) + P r(N) - r(NP), with r(m) = log2 C(2m, m) - 2m.
fn independence_tail(n: u64, p: u64) -> f64 {
    n as f64 * central_log_reduced(p) + p as f64 * central_log_reduced(n)
        - central_log_reduced(n * p)
}

fn independence_tail_stirling(n: f64, p: f64) -> f64 {
    upper_bound_tail(n, p) - (n / (8.0 * p) + p / (8.0 * n) - 1.0 / (8.0 * n * p)) * LOG2_E
}

/// `alpha1 + alpha2 - log2 D` with `alpha1 = N log2 C(2P,P) + 2NP`,
/// `alpha2 = P log2 C(2N,N)` and `D = 2^(2NP) C(2NP, NP)`.
pub fn independence_log_product(n: u64, p: u64, mode: Mode) -> f64 {
    let (nf, pf) = (n as f64, p as f64);
    let tail = match mode {
        Mode::Exact => independence_tail(n, p),
        Mode::Stirling => independence_tail_stirling(nf, pf),
    };
    2.0 * nf * pf + tail
}

/// `spa_alpha12 - independence_log_product(Exact)`: the log of the factor
/// by which the independence heuristic misses the saddle-point value.
///
/// Evaluated on the reduced terms so the `2NP` parts cancel exactly.
pub fn correction_log(n: u64, p: u64) -> f64 {
    let (nf, pf) = (n as f64, p as f64);
    (upper_bound_tail(nf, pf) - spa_shift(nf, pf)) - independence_tail(n, p)
}

/// Limit of [`correction_log`]: `-log2(e)/4`.
pub const CORRECTION_LIMIT: f64 = -LOG2_E / 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table2Row {
    pub n: u64,
    pub alpha12_exact: Option<f64>,
    pub spa: f64,
    pub diff_vs_indep: f64,
}

/// One comparison row for `N = P = n`; `exact` is `|A12|` when it was counted.
pub fn table2_row(n: u64, exact: Option<&BigCount>) -> Table2Row {
    Table2Row {
        n,
        alpha12_exact: exact.map(BigCount::log2),
        spa: spa_alpha12(n, n),
        diff_vs_indep: correction_log(n, n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log2_binom_examples() {
        assert!((log2_binom(4, 2).unwrap() - 2.584962500721156).abs() < 1e-12);
        assert_eq!(log2_binom(17, 0).unwrap(), 0.0);
        assert_eq!(log2_binom(17, 17).unwrap(), 0.0);
        assert!(log2_binom(3, 4).is_err());
        let v = log2_binom(2000, 1000).unwrap();
        let (lo, hi) = binomial_entropy_bounds(2000, 1000).unwrap();
        assert!(lo <= v && v <= hi);
    }

    #[test]
    fn log2_binom_branches_agree() {
        // Compare the series branch against the exact integer just above the switch.
        for &(n, k) in &[(1001u64, 1), (1001, 20), (1500, 700), (4000, 3999), (3000, 19)] {
            let exact = BigCount::binomial(n, k).log2();
            let approx = log2_binom(n, k).unwrap();
            assert!((approx - exact).abs() <= 1e-11 * exact.max(1.0), "{n} {k}");
        }
    }

    #[test]
    fn ln_factorial_matches_sum() {
        for m in [0u64, 1, 5, 19, 20, 21, 50, 300] {
            let direct: f64 = (2..=m).map(|i| libm::log(i as f64)).sum();
            assert!((ln_factorial(m) - direct).abs() <= 1e-12 * direct.max(1.0));
        }
    }

    #[test]
    fn stirling_central_examples() {
        assert!((stirling_central_log(1) - 0.9939151).abs() < 1e-7);
        let m = 10_000;
        assert!((stirling_central_log(m) - log2_binom(2 * m, m).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn spa_examples() {
        assert!((spa_alpha12(2, 2) - 4.11700).abs() <= 5e-6);
        assert!((spa_alpha12(9, 9) - 121.95946).abs() <= 5e-6);
        assert!((spa_alpha12(10_000, 10_000) / 1.99851e8 - 1.0).abs() < 5e-6);
    }

    #[test]
    fn upper_bound_examples() {
        assert!((alpha12_upper_bound(2, 2) - 4.5228).abs() < 5e-5);
        assert!(libm::log2(18.0) <= alpha12_upper_bound(2, 2));
        for (n, p) in [(1, 1), (3, 7), (50, 2)] {
            let gap = alpha12_upper_bound(n, p) - spa_alpha12(n, p);
            let want = ((n + p - 1) * (n + p - 1)) as f64 / (8 * n * p) as f64 * LOG2_E;
            assert!((gap - want).abs() < 1e-9);
        }
    }

    #[test]
    fn independence_examples() {
        // 2 log2 C(4,2) + 8 + 2 log2 C(4,2) - (8 + log2 C(8,4))
        let want = 4.0 * libm::log2(6.0) - libm::log2(70.0);
        let exact = independence_log_product(2, 2, Mode::Exact);
        assert!((exact - want).abs() < 1e-12);
        assert!((exact - 4.21058).abs() < 2e-5);
        let lo = independence_log_product(100, 100, Mode::Exact);
        let hi = independence_log_product(100, 100, Mode::Stirling);
        assert!((lo - hi).abs() < 1e-3);
        let lo = independence_log_product(10_000, 10_000, Mode::Exact);
        let hi = independence_log_product(10_000, 10_000, Mode::Stirling);
        assert!((lo - hi).abs() < 1e-6);
    }

    #[test]
    fn correction_examples() {
        assert!((correction_log(2, 2) + 0.09357).abs() <= 5e-6);
        assert!((correction_log(1000, 1000) + 0.35995).abs() <= 5e-6);
        assert!((correction_log(10_000, 10_000) + 0.36060).abs() <= 5e-6);
        assert!((CORRECTION_LIMIT + 0.360674).abs() < 1e-6);
    }

    #[test]
    fn table2_row_with_exact() {
        let row = table2_row(2, Some(&BigCount::from(18)));
        assert!((row.alpha12_exact.unwrap() - 4.16993).abs() <= 5e-6);
        assert!((row.diff_vs_indep + 0.09357).abs() <= 5e-6);
        assert_eq!(table2_row(100, None).alpha12_exact, None);
    }
}
