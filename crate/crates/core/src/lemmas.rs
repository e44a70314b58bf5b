//! Numerical checks of the auxiliary lemmas behind the saddle-point bound.
//!
//! * ratio: `eps / ln[(1/2 + sqrt(c eps)) / (1/2 - sqrt(c eps))]` against `sqrt(eps/c)/2`;
//! * quadratic: `ln(cos^2(t/2)) <= -t^2/4` on `[-pi, pi]`;
//! * matrix: determinant and inverse of `B = [[P I_N, 1], [1, N I_(P-1)]]`;
//! * gaussian: `Cov(T1^4, T2^4) = sigma^8 (72 rho^2 + 24 rho^4)`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, Result};

pub const SIGMA_TOL: f64 = 1e-9;
pub const QUADRATIC_GRID: usize = 10_000;
pub const QUADRATIC_TOL: f64 = 1e-15;
pub const RATIO_TOL: f64 = 0.05;
pub const RATIO_EPS: [f64; 4] = [1e-3, 1e-4, 1e-5, 1e-6];
pub const GAUSSIAN_CASES: [(f64, f64); 3] = [(1.0, 0.0), (1.0, 0.5), (2.0, -0.75)];
pub const GAUSSIAN_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma {
    Ratio,
    Quadratic,
    Matrix,
    Gaussian,
}

impl Lemma {
    pub fn name(self) -> &'static str {
        match self {
            Lemma::Ratio => "ratio approximation",
            Lemma::Quadratic => "quadratic upper bound",
            Lemma::Matrix => "square matrix properties",
            Lemma::Gaussian => "gaussian fourth-power covariance",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaCheck {
    pub lemma: Lemma,
    pub location: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Reported but not counted towards the overall verdict.
    pub informational: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BMatrixReport {
    pub n: usize,
    pub p: usize,
    pub det_b: BigUint,
    /// `Sigma[0][0]`.
    pub sigma_diag_row: f64,
    /// `Sigma[N][N]`, absent when `P = 1`.
    pub sigma_diag_col: Option<f64>,
    /// Row-row, row-column and column-column off-diagonal entries, where they exist.
    pub off_diags: [Option<f64>; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub checks: Vec<LemmaCheck>,
    pub matrices: Vec<BMatrixReport>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.informational)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LemmaCheck> {
        self.checks.iter().filter(|c| !c.passed && !c.informational)
    }

    pub fn lemma_passed(&self, lemma: Lemma) -> bool {
        self.checks
            .iter()
            .filter(|c| c.lemma == lemma && !c.informational)
            .all(|c| c.passed)
    }
}

/// The `(N+P-1) x (N+P-1)` integer matrix `B`.
pub fn b_matrix(n: usize, p: usize) -> Vec<Vec<i64>> {
    let dim = n + p - 1;
    let mut b = vec![vec![0i64; dim]; dim];
    for (r, row) in b.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = match (r < n, c < n) {
                (true, true) if r == c => p as i64,
                (false, false) if r == c => n as i64,
                (true, false) | (false, true) => 1,
                _ => 0,
            };
        }
    }
    b
}

/// Fraction-free (Bareiss) elimination with row pivoting.
pub fn bareiss_determinant(m: &[Vec<i64>]) -> BigInt {
    let dim = m.len();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..dim {
        if a[k][k].is_zero() {
            match (k + 1..dim).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..dim {
            for j in k + 1..dim {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if dim == 0 {
        return BigInt::one();
    }
    sign * &a[dim - 1][dim - 1]
}

/// Gauss–Jordan inverse with partial pivoting.
pub fn invert(m: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let dim = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut inv: Vec<Vec<f64>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for col in 0..dim {
        let pivot = (col..dim)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap_or(col);
        if a[pivot][col] == 0.0 {
            return Err(Error::Domain(String::from("matrix is singular")));
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = a[col][col];
        for j in 0..dim {
            a[col][j] /= scale;
            inv[col][j] /= scale;
        }
        for r in 0..dim {
            if r != col && a[r][col] != 0.0 {
                let factor = a[r][col];
                for j in 0..dim {
                    a[r][j] -= factor * a[col][j];
                    inv[r][j] -= factor * inv[col][j];
                }
            }
        }
    }
    Ok(inv)
}

fn check(lemma: Lemma, location: String, residual: f64, tolerance: f64) -> LemmaCheck {
    LemmaCheck {
        lemma,
        location,
        residual,
        tolerance,
        passed: residual <= tolerance,
        informational: false,
    }
}

/// Expected `Sigma = 2 B^-1` entry at `(r, c)`.
fn sigma_expected(n: usize, p: usize, r: usize, c: usize) -> f64 {
    let (nf, pf) = (n as f64, p as f64);
    match (r < n, c < n) {
        (true, true) if r == c => 2.0 * (nf + pf - 1.0) / (nf * pf),
        (true, true) => 2.0 * (pf - 1.0) / (nf * pf),
        (false, false) if r == c => 4.0 / nf,
        (false, false) => 2.0 / nf,
        _ => -2.0 / nf,
    }
}

fn matrix_checks(n: usize, p: usize, checks: &mut Vec<LemmaCheck>) -> Result<BMatrixReport> {
    let b = b_matrix(n, p);
    let det = bareiss_determinant(&b);
    let want = BigInt::from(n).pow((p - 1) as u32) * BigInt::from(p).pow((n - 1) as u32);
    checks.push(check(
        Lemma::Matrix,
        alloc::format!("det B, N={n} P={p}: got {det}, want {want}"),
        if det == want { 0.0 } else { f64::INFINITY },
        0.0,
    ));

    let bf: Vec<Vec<f64>> = b
        .iter()
        .map(|row| row.iter().map(|&v| v as f64).collect())
        .collect();
    let sigma: Vec<Vec<f64>> = invert(&bf)?
        .into_iter()
        .map(|row| row.into_iter().map(|v| 2.0 * v).collect())
        .collect();
    let mut worst = 0.0f64;
    let mut at = (0, 0);
    for (r, row) in sigma.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            let err = (v - sigma_expected(n, p, r, c)).abs();
            if err > worst {
                worst = err;
                at = (r, c);
            }
        }
    }
    checks.push(check(
        Lemma::Matrix,
        alloc::format!("Sigma entries, N={n} P={p}, worst at ({}, {})", at.0, at.1),
        worst,
        SIGMA_TOL,
    ));

    let det_b = det
        .to_biguint()
        .ok_or_else(|| Error::Domain(String::from("negative determinant")))?;
    Ok(BMatrixReport {
        n,
        p,
        det_b,
        sigma_diag_row: sigma[0][0],
        sigma_diag_col: (p >= 2).then(|| sigma[n][n]),
        off_diags: [
            (n >= 2).then(|| sigma[0][1]),
            (p >= 2).then(|| sigma[0][n]),
            (p >= 3).then(|| sigma[n][n + 1]),
        ],
    })
}

fn quadratic_check() -> LemmaCheck {
    let mut worst = f64::NEG_INFINITY;
    let mut at = 0.0;
    for i in 0..QUADRATIC_GRID {
        let t = -PI + 2.0 * PI * i as f64 / (QUADRATIC_GRID - 1) as f64;
        let c = libm::cos(t / 2.0);
        let excess = libm::log(c * c) + t * t / 4.0;
        if excess > worst {
            worst = excess;
            at = t;
        }
    }
    check(
        Lemma::Quadratic,
        alloc::format!("max of ln(h(t)/4) + t^2/4 over {QUADRATIC_GRID} points, at t = {at:.6}"),
        worst,
        QUADRATIC_TOL,
    )
}

fn ratio(eps: f64, c: f64) -> f64 {
    let r = libm::sqrt(c * eps);
    eps / libm::log((0.5 + r) / (0.5 - r))
}

fn ratio_checks(checks: &mut Vec<LemmaCheck>) {
    for c in [core::f64::consts::LN_2, 1.0] {
        for eps in RATIO_EPS {
            let got = ratio(eps, c);
            let stated = 0.5 * libm::sqrt(eps / c);
            checks.push(check(
                Lemma::Ratio,
                alloc::format!("eps = {eps:e}, c = {c:.6}: ratio {got:.6e} vs sqrt(eps/c)/2"),
                (got / stated - 1.0).abs(),
                RATIO_TOL,
            ));
            let quarter = 0.25 * libm::sqrt(eps / c);
            let mut info = check(
                Lemma::Ratio,
                alloc::format!("eps = {eps:e}, c = {c:.6}: ratio {got:.6e} vs sqrt(eps/c)/4"),
                (got / quarter - 1.0).abs(),
                RATIO_TOL,
            );
            info.informational = true;
            checks.push(info);
        }
    }
}

/// Monte Carlo estimate of `Cov(T1^4, T2^4)` for a centred Gaussian pair with
/// variance `sigma2` and correlation `rho`, with its standard error.
pub fn fourth_power_covariance(sigma2: f64, rho: f64, samples: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = libm::sqrt(sigma2);
    let side = libm::sqrt(1.0 - rho * rho);
    let mut xs = Vec::with_capacity(samples);
    let mut ys = Vec::with_capacity(samples);
    for _ in 0..samples {
        let z1: f64 = StandardNormal.sample(&mut rng);
        let z2: f64 = StandardNormal.sample(&mut rng);
        let t1 = sigma * z1;
        let t2 = sigma * (rho * z1 + side * z2);
        xs.push(t1 * t1 * t1 * t1);
        ys.push(t2 * t2 * t2 * t2);
    }
    let m = samples as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let psi: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).collect();
    let cov = psi.iter().sum::<f64>() / m;
    let var = psi.iter().map(|v| (v - cov) * (v - cov)).sum::<f64>() / (m - 1.0);
    (cov, libm::sqrt(var / m))
}

fn gaussian_checks(samples: usize, seed: u64, checks: &mut Vec<LemmaCheck>) {
    for (idx, (sigma2, rho)) in GAUSSIAN_CASES.into_iter().enumerate() {
        let (est, se) = fourth_power_covariance(sigma2, rho, samples, seed.wrapping_add(idx as u64));
        let want = libm::pow(sigma2, 4.0) * (72.0 * rho * rho + 24.0 * libm::pow(rho, 4.0));
        checks.push(check(
            Lemma::Gaussian,
            alloc::format!(
                "sigma^2 = {sigma2}, rho = {rho}: estimate {est:.4} vs {want:.4} (se {se:.4}), residual in standard errors"
            ),
            (est - want).abs() / se,
            GAUSSIAN_SIGMAS,
        ));
    }
}

/// Runs every check. `max_dim` bounds `N, P` for the matrix lemma.
pub fn verify_lemmas(max_dim: usize, mc_samples: usize, seed: u64) -> Result<LemmaReport> {
    if max_dim < 2 {
        return Err(Error::OutOfRange(alloc::format!("max_dim must be >= 2, got {max_dim}")));
    }
    if mc_samples < 2 {
        return Err(Error::OutOfRange(alloc::format!(
            "need at least 2 Monte Carlo samples, got {mc_samples}"
        )));
    }
    let mut checks = Vec::new();
    let mut matrices = Vec::new();
    for n in 2..=max_dim {
        for p in 2..=max_dim {
            matrices.push(matrix_checks(n, p, &mut checks)?);
        }
    }
    checks.push(quadratic_check());
    ratio_checks(&mut checks);
    gaussian_checks(mc_samples, seed, &mut checks);
    Ok(LemmaReport { checks, matrices })
}
