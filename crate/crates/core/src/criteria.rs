//! Deciding `|A1| > |A2|`, exactly and through the entropy score
//! `H1 - H2 + fbar`.
//!
//! Since `|A1| = prod_n C(2P, a_n) 2^(2NP)` and
//! `|A2| = prod_p C(2N, s_p) C(s_p, phi1_p) 2^(2NP - s_p)`, the exact decision
//! is the integer comparison `prod_n C(2P, a_n) 2^(sum s) > prod_p C(2N, s_p) C(s_p, phi1_p)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::asymptotics::log2_binom;
use crate::bigcount::BigCount;
use crate::margins::{MarginSpec, NormalizedMargins};
use crate::{Error, Result};

const SIMPLEX_TOL: f64 = 1e-12;

/// Shannon entropy in bits of a probability vector.
pub fn shannon_entropy(probs: &[f64]) -> Result<f64> {
    if let Some(bad) = probs.iter().find(|&&z| !(z >= 0.0) || !z.is_finite()) {
        return Err(Error::NotOnSimplex(alloc::format!("entry {bad} is not a probability")));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::NotOnSimplex(alloc::format!("entries sum to {total}")));
    }
    Ok(entropy_unchecked(probs))
}

fn entropy_unchecked(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&z| z > 0.0)
        .map(|&z| -z * libm::log2(z))
        .sum()
}

/// `H(f0, f1, 1 - f0 - f1) - (f0 + f1)`, strictly concave with maximum 1 at
/// `(1/4, 1/4)`.
pub fn theta(f0: f64, f1: f64) -> Result<f64> {
    let rest = 1.0 - f0 - f1;
    if !(f0 >= 0.0 && f1 >= 0.0 && rest >= -SIMPLEX_TOL) {
        return Err(Error::Domain(alloc::format!(
            "theta needs f0, f1 >= 0 and f0 + f1 <= 1, got ({f0}, {f1})"
        )));
    }
    Ok(entropy_unchecked(&[f0, f1, rest.max(0.0)]) - (f0 + f1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropySummary {
    /// Mean row entropy `H(abar_n, 1 - abar_n)`.
    pub h1: f64,
    /// Mean locus entropy `H(f0, f1, 1 - f0 - f1)`.
    pub h2: f64,
    /// Mean of `f0 + f1` over loci.
    pub fbar: f64,
    pub score: f64,
}

pub fn entropy_summary(nm: &NormalizedMargins) -> EntropySummary {
    let h1 = nm
        .abar
        .iter()
        .map(|&a| entropy_unchecked(&[a, 1.0 - a]))
        .sum::<f64>()
        / nm.abar.len() as f64;
    let loci = nm.f0.len() as f64;
    let h2 = nm
        .f0
        .iter()
        .zip(&nm.f1)
        .map(|(&f0, &f1)| entropy_unchecked(&[f0, f1, (1.0 - f0 - f1).max(0.0)]))
        .sum::<f64>()
        / loci;
    let fbar = nm.f0.iter().zip(&nm.f1).map(|(a, b)| a + b).sum::<f64>() / loci;
    EntropySummary {
        h1,
        h2,
        fbar,
        score: h1 - h2 + fbar,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    /// `|A1| > |A2|`.
    pub exact_decision: bool,
    /// `score > 0`.
    pub approx_decision: bool,
    pub agree: bool,
    pub score: f64,
    pub summary: EntropySummary,
    pub margins: NormalizedMargins,
}

pub fn exact_criterion(spec: &MarginSpec) -> CriterionReport {
    let two_p = 2 * spec.p() as u64;
    let two_n = 2 * spec.n() as u64;
    let mut lhs: BigCount = spec
        .a()
        .iter()
        .map(|&a| BigCount::binomial(two_p, a as u64))
        .product();
    let dosage_total: usize = (0..spec.p()).map(|p| spec.dosage(p)).sum();
    lhs *= &BigCount::pow2(dosage_total as u64);
    let rhs: BigCount = (0..spec.p())
        .map(|p| {
            let s = spec.dosage(p) as u64;
            BigCount::binomial(two_n, s) * BigCount::binomial(s, spec.phi1()[p] as u64)
        })
        .product();
    let margins = spec.normalize();
    let summary = entropy_summary(&margins);
    let exact_decision = lhs > rhs;
    let approx_decision = summary.score > 0.0;
    CriterionReport {
        exact_decision,
        approx_decision,
        agree: exact_decision == approx_decision,
        score: summary.score,
        summary,
        margins,
    }
}

/// The limit criterion's score for semi-regular margins with
/// `f0 = f1 = f`: `H(abar, 1 - abar) - H(f, f, 1 - 2f) + 2f`.
pub fn semiregular_score(abar: f64, f: f64) -> f64 {
    entropy_unchecked(&[abar, 1.0 - abar]) - entropy_unchecked(&[f, f, (1.0 - 2.0 * f).max(0.0)])
        + 2.0 * f
}

/// `log N / N + log P / P`, the width of the uncertain band around score 0.
pub fn uncertainty_width(n: u64, p: u64) -> f64 {
    libm::log2(n as f64) / n as f64 + libm::log2(p as f64) / p as f64
}

/// Bins per axis of the heat map; `BINS_PER_AXIS^2 = 3600`.
pub const BINS_PER_AXIS: usize = 60;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GridBin {
    pub points: u32,
    /// Points with `|A1| > |A2|`.
    pub exact_larger: u32,
    /// Points with positive score.
    pub approx_larger: u32,
    /// Points where the two decisions agree.
    pub agree: u32,
}

impl GridBin {
    fn share(&self, count: u32) -> Option<f64> {
        (self.points > 0).then(|| count as f64 / self.points as f64)
    }

    pub fn fraction_a1_larger(&self) -> Option<f64> {
        self.share(self.exact_larger)
    }

    pub fn approx_pred(&self) -> Option<f64> {
        self.share(self.approx_larger)
    }

    pub fn exact_frac(&self) -> Option<f64> {
        self.share(self.agree)
    }

    pub fn disagree_frac(&self) -> Option<f64> {
        self.exact_frac().map(|f| 1.0 - f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disagreement {
    pub abar: f64,
    pub f: f64,
    pub score: f64,
    /// The exact decision at this point.
    pub a1_larger: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridAgreement {
    pub n: u64,
    pub p: u64,
    pub points: u64,
    pub agreeing: u64,
    pub fraction: f64,
    /// Row-major over `abar` bins, then `f` bins; `BINS_PER_AXIS^2` entries.
    pub bins: Vec<GridBin>,
    pub disagreements: Vec<Disagreement>,
}

impl GridAgreement {
    /// Lower corner `(abar, f)` of bin `index`; bins cover `[0,1] x [0,1/2]`.
    pub fn bin_origin(index: usize) -> (f64, f64) {
        let (i, j) = (index / BINS_PER_AXIS, index % BINS_PER_AXIS);
        (
            i as f64 / BINS_PER_AXIS as f64,
            j as f64 / (2 * BINS_PER_AXIS) as f64,
        )
    }

    /// Largest `|score| / width` over disagreeing points, or 0 if none.
    pub fn fitted_constant(&self) -> f64 {
        let width = uncertainty_width(self.n, self.p);
        self.disagreements
            .iter()
            .map(|d| d.score.abs() / width)
            .fold(0.0, f64::max)
    }
}

fn bin_of(x: f64, scale: f64) -> usize {
    ((x * scale) as usize).min(BINS_PER_AXIS - 1)
}

/// Semi-regular comparison over the grid `abar = i/(2P)`, `i = 1..2P-1`,
/// `f0 = f1 = j/(2N)`, `j = 1..N-1`.
///
/// The exact side decides `C(2P,i)^N 2^(2jP) > (C(2N,2j) C(2j,j))^P`. A float
/// comparison of logarithms settles almost every point; anything within a
/// safe margin of a tie is redone on gcd-reduced integer powers.
pub fn semiregular_grid_agreement(n: u64, p: u64) -> Result<GridAgreement> {
    if n < 2 || p < 2 {
        return Err(Error::Domain(alloc::format!(
            "grid needs N, P >= 2, got N = {n}, P = {p}"
        )));
    }
    let g = n.gcd(&p);
    let row_logs: Vec<f64> = (0..=2 * p).map(|i| log2_binom(2 * p, i)).collect::<Result<_>>()?;
    let col_logs: Vec<f64> = (0..n)
        .map(|j| Ok(log2_binom(2 * n, 2 * j)? + log2_binom(2 * j, j)?))
        .collect::<Result<_>>()?;
    let mut row_exact: Vec<Option<BigCount>> = vec![None; (2 * p + 1) as usize];
    let mut col_exact: Vec<Option<BigCount>> = vec![None; n as usize];

    let mut bins = vec![GridBin::default(); BINS_PER_AXIS * BINS_PER_AXIS];
    let mut disagreements = Vec::new();
    let (mut points, mut agreeing) = (0u64, 0u64);
    for i in 1..2 * p {
        let abar = i as f64 / (2 * p) as f64;
        let bin_row = bin_of(abar, BINS_PER_AXIS as f64);
        for j in 1..n {
            let f = j as f64 / (2 * n) as f64;
            let lhs = n as f64 * row_logs[i as usize] + (2 * j * p) as f64;
            let rhs = p as f64 * col_logs[j as usize];
            let margin = 1e-9 * (lhs.abs() + rhs.abs() + 1.0);
            let a1_larger = if lhs - rhs > margin {
                true
            } else if rhs - lhs > margin {
                false
            } else {
                let x = row_exact[i as usize]
                    .get_or_insert_with(|| BigCount::binomial(2 * p, i))
                    .clone();
                let y = col_exact[j as usize]
                    .get_or_insert_with(|| {
                        BigCount::binomial(2 * n, 2 * j) * BigCount::binomial(2 * j, j)
                    })
                    .clone();
                let left = x.pow((n / g) as u32) * BigCount::pow2(2 * j * p / g);
                left > y.pow((p / g) as u32)
            };
            let score = semiregular_score(abar, f);
            let approx = score > 0.0;
            let bin = &mut bins[bin_row * BINS_PER_AXIS + bin_of(f, (2 * BINS_PER_AXIS) as f64)];
            bin.points += 1;
            bin.exact_larger += a1_larger as u32;
            bin.approx_larger += approx as u32;
            points += 1;
            if approx == a1_larger {
                bin.agree += 1;
                agreeing += 1;
            } else {
                disagreements.push(Disagreement {
                    abar,
                    f,
                    score,
                    a1_larger,
                });
            }
        }
    }
    Ok(GridAgreement {
        n,
        p,
        points,
        agreeing,
        fraction: if points == 0 { 1.0 } else { agreeing as f64 / points as f64 },
        bins,
        disagreements,
    })
}

/// `K1 = 2 sqrt(ln 2)`.
pub fn k1() -> f64 {
    2.0 * libm::sqrt(LN_2)
}

/// `K2 = 2 (ln 2)^(3/2) (2 pi + 1/2)`.
pub fn k2() -> f64 {
    2.0 * libm::pow(LN_2, 1.5) * (2.0 * PI + 0.5)
}

/// Bound on the share of the semi-regular parameter volume where the
/// entropy criterion may be wrong: `K1 sqrt(eps) + K2 eps^(3/2)` with
/// `eps = log N / N + log P / P`.
pub fn error_fraction_bound(n: u64, p: u64) -> f64 {
    let eps = uncertainty_width(n, p);
    k1() * libm::sqrt(eps) + k2() * libm::pow(eps, 1.5)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeEstimate {
    pub fraction: f64,
    pub std_error: f64,
    pub samples: u64,
}

pub const MIN_VOLUME_SAMPLES: u64 = 10_000;

/// Monte Carlo share of `(abar, f0, f1)`, uniform on `(0,1) x {f0 + f1 < 1}`,
/// whose score `H(abar, 1-abar) - H(f0, f1, 1-f0-f1) + f0 + f1` lies in
/// `(-eps, eps]`. Deterministic in `seed`.
pub fn estimate_volume_fraction(n: u64, p: u64, samples: u64, seed: u64) -> Result<VolumeEstimate> {
    if samples < MIN_VOLUME_SAMPLES {
        return Err(Error::OutOfRange(alloc::format!(
            "need at least {MIN_VOLUME_SAMPLES} samples, got {samples}"
        )));
    }
    let eps = uncertainty_width(n, p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inside = 0u64;
    for _ in 0..samples {
        let abar: f64 = rng.random();
        let (f0, f1) = loop {
            let (f0, f1): (f64, f64) = (rng.random(), rng.random());
            if f0 + f1 < 1.0 {
                break (f0, f1);
            }
        };
        let score = entropy_unchecked(&[abar, 1.0 - abar]) - entropy_unchecked(&[f0, f1, 1.0 - f0 - f1])
            + f0
            + f1;
        if score > -eps && score <= eps {
            inside += 1;
        }
    }
    let fraction = inside as f64 / samples as f64;
    Ok(VolumeEstimate {
        fraction,
        std_error: libm::sqrt(fraction * (1.0 - fraction) / samples as f64),
        samples,
    })
}
