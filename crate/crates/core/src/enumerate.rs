//! Exact sizes of the constrained families.
//!
//! * A1: arrays whose row tallies equal `a`.
//! * A2: arrays whose ancestry-specific dosages equal `(phi0, phi1)`.
//! * A12: both at once.
//!
//! A12 is a weighted sum over the feasible set of column sums `(v1, v2)` of
//! `A`: each element contributes the number of binary matrices with rows `a`
//! and columns `v1 ++ v2`, times the ways to place the dosages in `X`. The sum
//! is split by the first locus's pair `(v1[0], v2[0])`; [`A12Plan`] hands out
//! those units and [`A12Worker`] evaluates them with private memo tables, one
//! per column-maximum group.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::bigcount::{BigCount, BinomialTable};
use crate::bincount::ExactCounter;
use crate::margins::{AdmixedArray, MarginSpec};
use crate::{Error, Result};

/// Default cap on the feasible-set size for [`count_a2_via_feasible`].
pub const DEFAULT_FEASIBLE_CAP: u128 = 100_000_000;

/// Largest `4NP` accepted by [`brute_force_count`].
pub const BRUTE_FORCE_MAX_CELLS: usize = 24;

/// Candidate column sums for the two haplotype halves of `A`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FeasiblePair {
    pub v1: Vec<usize>,
    pub v2: Vec<usize>,
}

/// `|A1| = prod_n C(2P, a_n) * 2^(2NP)`.
pub fn count_a1(spec: &MarginSpec) -> BigCount {
    let two_p = 2 * spec.p() as u64;
    let rows: BigCount = spec
        .a()
        .iter()
        .map(|&a| BigCount::binomial(two_p, a as u64))
        .product();
    rows * BigCount::pow2((2 * spec.n() * spec.p()) as u64)
}

/// `|A2| = prod_p C(2N, s_p) C(s_p, phi1_p) 2^(2N - s_p)` with
/// `s_p = phi0_p + phi1_p`.
pub fn count_a2(spec: &MarginSpec) -> BigCount {
    let two_n = 2 * spec.n() as u64;
    (0..spec.p())
        .map(|p| {
            let s = spec.dosage(p) as u64;
            BigCount::binomial(two_n, s)
                * BigCount::binomial(s, spec.phi1()[p] as u64)
                * BigCount::pow2(two_n - s)
        })
        .product()
}

/// `|A2|` by explicit summation over the feasible set; a cross-check for
/// [`count_a2`]. Refuses feasible sets larger than `cap`.
pub fn count_a2_via_feasible(spec: &MarginSpec, cap: u128) -> Result<BigCount> {
    let size = feasible_set_size(spec);
    let size_u128 = size.to_u128().unwrap_or(u128::MAX);
    if size_u128 > cap {
        return Err(Error::SizeCap {
            what: "feasible set",
            size: size_u128,
            cap,
        });
    }
    let n = spec.n();
    let table = BinomialTable::new(2 * n);
    let mut total = BigCount::zero();
    for pair in enumerate_feasible(spec) {
        let mut term = BigCount::one();
        for p in 0..spec.p() {
            let s = pair.v1[p] + pair.v2[p];
            term *= table.get(n, pair.v1[p]);
            term *= table.get(n, pair.v2[p]);
            term *= table.get(s, spec.phi1()[p]);
            term *= table.get(2 * n - s, spec.phi0()[p]);
        }
        total += term;
    }
    Ok(total)
}

/// `|S| = prod_p sum_{l = phi1_p}^{2N - phi0_p} (min(l, 2N - l) + 1)`.
pub fn feasible_set_size(spec: &MarginSpec) -> BigCount {
    let two_n = 2 * spec.n();
    (0..spec.p())
        .map(|p| {
            let per_locus: usize = (spec.phi1()[p]..=two_n - spec.phi0()[p])
                .map(|l| l.min(two_n - l) + 1)
                .sum();
            BigCount::from(per_locus as u64)
        })
        .product()
}

/// Iterates the feasible set in lexicographic order of `(v1, v2)`.
pub fn enumerate_feasible(spec: &MarginSpec) -> FeasibleIter {
    let two_n = 2 * spec.n();
    FeasibleIter {
        n: spec.n(),
        lo: spec.phi1().to_vec(),
        hi: spec.phi0().iter().map(|&f| two_n - f).collect(),
        v1: vec![0; spec.p()],
        v2: vec![0; spec.p()],
        state: IterState::Start,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum IterState {
    Start,
    Running,
    Done,
}

#[derive(Debug, Clone)]
pub struct FeasibleIter {
    n: usize,
    // Per-locus bounds on v1 + v2.
    lo: Vec<usize>,
    hi: Vec<usize>,
    v1: Vec<usize>,
    v2: Vec<usize>,
    state: IterState,
}

impl FeasibleIter {
    fn v2_range(&self, p: usize) -> (usize, usize) {
        let low = self.lo[p].saturating_sub(self.v1[p]);
        let high = self.n.min(self.hi[p].saturating_sub(self.v1[p]));
        (low, high)
    }

    fn v1_admissible(&self) -> bool {
        (0..self.v1.len()).all(|p| {
            let (low, high) = self.v2_range(p);
            self.hi[p] >= self.v1[p] && low <= high
        })
    }

    fn reset_v2(&mut self) {
        for p in 0..self.v2.len() {
            self.v2[p] = self.v2_range(p).0;
        }
    }

    fn bump_v1(&mut self) -> bool {
        for p in (0..self.v1.len()).rev() {
            if self.v1[p] < self.n {
                self.v1[p] += 1;
                return true;
            }
            self.v1[p] = 0;
        }
        false
    }

    fn bump_v2(&mut self) -> bool {
        for p in (0..self.v2.len()).rev() {
            let (low, high) = self.v2_range(p);
            if self.v2[p] < high {
                self.v2[p] += 1;
                return true;
            }
            self.v2[p] = low;
        }
        false
    }

    fn seek_v1(&mut self) -> bool {
        while !self.v1_admissible() {
            if !self.bump_v1() {
                return false;
            }
        }
        self.reset_v2();
        true
    }

    fn current(&self) -> FeasiblePair {
        FeasiblePair {
            v1: self.v1.clone(),
            v2: self.v2.clone(),
        }
    }
}

impl Iterator for FeasibleIter {
    type Item = FeasiblePair;

    fn next(&mut self) -> Option<FeasiblePair> {
        let found = match self.state {
            IterState::Done => false,
            IterState::Start => self.seek_v1(),
            IterState::Running => self.bump_v2() || (self.bump_v1() && self.seek_v1()),
        };
        if found {
            self.state = IterState::Running;
            Some(self.current())
        } else {
            self.state = IterState::Done;
            None
        }
    }
}

/// Shared, read-only description of an A12 computation.
#[derive(Debug, Clone)]
pub struct A12Plan {
    n: usize,
    p: usize,
    rows: Vec<usize>,
    total: usize,
    lo: Vec<usize>,
    hi: Vec<usize>,
    // weights[p][s] = C(s, phi1_p) C(2N - s, phi0_p) for the locus sum s.
    weights: Vec<Vec<BigCount>>,
}

impl A12Plan {
    pub fn new(spec: &MarginSpec) -> Self {
        let n = spec.n();
        let two_n = 2 * n;
        let mut rows = spec.a().to_vec();
        rows.sort_unstable_by(|a, b| b.cmp(a));
        let total = rows.iter().sum();
        let table = BinomialTable::new(two_n);
        let weights = (0..spec.p())
            .map(|p| {
                (0..=two_n)
                    .map(|s| table.get(s, spec.phi1()[p]) * table.get(two_n - s, spec.phi0()[p]))
                    .collect()
            })
            .collect();
        Self {
            n,
            p: spec.p(),
            rows,
            total,
            lo: spec.phi1().to_vec(),
            hi: spec.phi0().iter().map(|&f| two_n - f).collect(),
            weights,
        }
    }

    /// Work units: every admissible `(v1[0], v2[0])`, ordered by their sum
    /// and then by `v1[0]`.
    pub fn first_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for s in self.lo[0]..=self.hi[0] {
            for a in s.saturating_sub(self.n)..=self.n.min(s) {
                out.push((a, s - a));
            }
        }
        out
    }

    pub fn worker(&self) -> A12Worker<'_> {
        A12Worker {
            plan: self,
            counters: BTreeMap::new(),
            v1: vec![0; self.p],
            v2: vec![0; self.p],
            cols: vec![0; 2 * self.p],
            visited: 0,
        }
    }
}

/// Evaluates work units of an [`A12Plan`]. Holds its own memo tables, one
/// per group `L = max column sum + 2`, kept across the units it processes.
#[derive(Debug)]
pub struct A12Worker<'a> {
    plan: &'a A12Plan,
    counters: BTreeMap<usize, ExactCounter>,
    v1: Vec<usize>,
    v2: Vec<usize>,
    cols: Vec<usize>,
    visited: u64,
}

const CANCEL_POLL_EVERY: u64 = 1 << 12;

impl A12Worker<'_> {
    /// Sum of the A12 terms whose first locus is `first`.
    ///
    /// `cancel` is polled every few thousand feasible pairs; returning `true`
    /// aborts with [`Error::Cancelled`].
    pub fn sum_first_pair(
        &mut self,
        first: (usize, usize),
        cancel: &mut dyn FnMut() -> bool,
    ) -> Result<BigCount> {
        let plan = self.plan;
        let s0 = first.0 + first.1;
        if s0 < plan.lo[0] || s0 > plan.hi[0] || first.0 > plan.n || first.1 > plan.n {
            return Ok(BigCount::zero());
        }
        // Bounds on the sum of the remaining loci, for Σ-consistency pruning.
        let mut min_rest = vec![0usize; plan.p + 1];
        let mut max_rest = vec![0usize; plan.p + 1];
        for j in (1..plan.p).rev() {
            min_rest[j] = min_rest[j + 1] + plan.lo[j];
            max_rest[j] = max_rest[j + 1] + plan.hi[j];
        }
        if s0 + min_rest[1] > plan.total || s0 + max_rest[1] < plan.total {
            return Ok(BigCount::zero());
        }
        self.v1[0] = first.0;
        self.v2[0] = first.1;
        let weight = plan.weights[0][s0].clone();
        let mut acc = BigCount::zero();
        self.suffix(1, s0, &weight, &min_rest, &max_rest, &mut acc, cancel)?;
        Ok(acc)
    }

    #[allow(clippy::too_many_arguments)]
    fn suffix(
        &mut self,
        locus: usize,
        partial: usize,
        weight: &BigCount,
        min_rest: &[usize],
        max_rest: &[usize],
        acc: &mut BigCount,
        cancel: &mut dyn FnMut() -> bool,
    ) -> Result<()> {
        let plan = self.plan;
        if locus == plan.p {
            debug_assert_eq!(partial, plan.total);
            self.visited += 1;
            if (self.visited - 1) % CANCEL_POLL_EVERY == 0 && cancel() {
                return Err(Error::Cancelled);
            }
            self.cols[..plan.p].copy_from_slice(&self.v1);
            self.cols[plan.p..].copy_from_slice(&self.v2);
            let group = self.cols.iter().copied().max().unwrap_or(0) + 2;
            let counter = self
                .counters
                .entry(group)
                .or_insert_with(|| ExactCounter::new(&plan.rows));
            let count = counter.count(&self.cols);
            if !count.is_zero() {
                *acc += &(weight * &count);
            }
            return Ok(());
        }
        let need = plan.total - partial;
        let s_lo = plan.lo[locus].max(need.saturating_sub(max_rest[locus + 1]));
        let s_hi = plan.hi[locus].min(need.saturating_sub(min_rest[locus + 1]));
        if need < min_rest[locus + 1] {
            return Ok(());
        }
        for s in s_lo..=s_hi {
            let w = weight * &plan.weights[locus][s];
            if w.is_zero() {
                continue;
            }
            for a in s.saturating_sub(plan.n)..=plan.n.min(s) {
                self.v1[locus] = a;
                self.v2[locus] = s - a;
                self.suffix(locus + 1, partial + s, &w, min_rest, max_rest, acc, cancel)?;
            }
        }
        Ok(())
    }

    /// Number of feasible pairs reaching the matrix count so far.
    pub fn visited(&self) -> u64 {
        self.visited
    }

    /// Memo entries across all groups.
    pub fn memo_entries(&self) -> usize {
        self.counters.values().map(|c| c.memo().len()).sum()
    }
}

/// `|A12|` on the calling thread. The `admix` crate provides the
/// multi-worker version with the same result.
pub fn count_a12(spec: &MarginSpec) -> BigCount {
    let plan = A12Plan::new(spec);
    let mut worker = plan.worker();
    plan.first_pairs()
        .into_iter()
        .map(|pair| {
            worker
                .sum_first_pair(pair, &mut || false)
                .unwrap_or_else(|_| unreachable!("never cancelled"))
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    A1,
    A2,
    A12,
}

/// Counts matching arrays by sweeping all `2^(4NP)` of them. Test oracle;
/// refuses `4NP > 24`.
pub fn brute_force_count(spec: &MarginSpec, family: Family) -> Result<BigCount> {
    let dims = spec.dims();
    let half = dims.n * dims.width();
    let cells = 2 * half;
    if cells > BRUTE_FORCE_MAX_CELLS {
        return Err(Error::SizeCap {
            what: "array cells (4NP)",
            size: cells as u128,
            cap: BRUTE_FORCE_MAX_CELLS as u128,
        });
    }
    let want_rows = matches!(family, Family::A1 | Family::A12);
    let want_dosage = matches!(family, Family::A2 | Family::A12);
    let mut arr = AdmixedArray::zeros(dims);
    let mut hits = 0u64;
    for mask in 0u32..(1u32 << cells) {
        {
            let (a, x) = arr.cells_mut();
            for i in 0..half {
                a[i] = ((mask >> i) & 1) as u8;
                x[i] = ((mask >> (half + i)) & 1) as u8;
            }
        }
        let stats = arr.statistics();
        let rows_ok = !want_rows || stats.row_tallies == spec.a();
        let dosage_ok = !want_dosage || (stats.phi0 == spec.phi0() && stats.phi1 == spec.phi1());
        if rows_ok && dosage_ok {
            hits += 1;
        }
    }
    Ok(BigCount::from(hits))
}
