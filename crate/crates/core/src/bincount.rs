//! Exact counting of binary matrices with prescribed row and column sums.
//!
//! Rows are placed one at a time in non-increasing order of their sums. The
//! state between rows is the conjugate of the remaining column demands
//! (`counts[v]` = number of columns still needing `v` ones); placing a row of
//! sum `r` picks `t_v` columns from each class `v >= 1` with `sum t_v = r`,
//! weighted by `prod C(counts[v], t_v)`, and moves them to class `v - 1`.
//! Two column vectors with the same conjugate lead to the same count, which is
//! what the memo table exploits. Every node is pruned with the Gale–Ryser
//! condition on its residual problem.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::bigcount::{BigCount, BinomialTable};
use crate::{Error, Result};

/// Gale–Ryser: a binary matrix with row sums `rows` and column sums `cols`
/// exists iff the totals agree and the sorted row sums are dominated by the
/// conjugate of the column sums.
pub fn gale_ryser_feasible(rows: &[usize], cols: &[usize]) -> bool {
    if rows.iter().sum::<usize>() != cols.iter().sum::<usize>() {
        return false;
    }
    let mut sorted = rows.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let max_col = cols.iter().copied().max().unwrap_or(0);
    let counts: Vec<u32> = tally(cols, max_col).into_iter().map(|c| c as u32).collect();
    dominated(&sorted, &counts)
}

/// `counts[v] = |{j : cols[j] = v}|` for `v` in `0..=max_val`.
pub fn conjugate(cols: &[usize], max_val: usize) -> Result<Vec<usize>> {
    if let Some(&bad) = cols.iter().find(|&&c| c > max_val) {
        return Err(Error::Domain(alloc::format!(
            "column value {bad} exceeds max_val {max_val}"
        )));
    }
    Ok(tally(cols, max_val))
}

fn tally(cols: &[usize], max_val: usize) -> Vec<usize> {
    let mut counts = vec![0usize; max_val + 1];
    for &c in cols {
        counts[c] += 1;
    }
    counts
}

/// Dominance test for rows already sorted non-increasing against column
/// demands given in conjugate form. Totals are assumed equal.
fn dominated(sorted_rows: &[usize], counts: &[u32]) -> bool {
    // capacity(k) = sum_j min(c_j, k), grown by #{j : c_j >= k} per step.
    let mut at_least = counts[1..].iter().map(|&c| c as usize).sum::<usize>();
    let mut capacity = 0usize;
    let mut prefix = 0usize;
    for (k, &r) in sorted_rows.iter().enumerate() {
        let level = k + 1;
        capacity += at_least;
        if level < counts.len() {
            at_least -= counts[level] as usize;
        } else {
            at_least = 0;
        }
        prefix += r;
        if prefix > capacity {
            return false;
        }
    }
    true
}

/// Counts binary matrices with the given margins, using a fresh memo table.
pub fn count_binary_matrices(rows: &[usize], cols: &[usize]) -> BigCount {
    ExactCounter::new(rows).count(cols)
}

/// Memo table keyed by `(rows placed, conjugate counts)`.
///
/// An optional entry cap bounds memory; once full, new results are simply
/// not stored and get recomputed on the next visit.
#[derive(Debug, Clone, Default)]
pub struct Memo {
    map: HashMap<Vec<u32>, BigCount>,
    cap: Option<usize>,
    hits: u64,
    misses: u64,
}

impl Memo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_cap(cap: usize) -> Self {
        Self {
            cap: Some(cap),
            ..Self::default()
        }
    }

    /// A memo that never stores anything.
    pub fn disabled() -> Self {
        Self::with_cap(0)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    pub fn misses(&self) -> u64 {
        self.misses
    }

    fn get(&mut self, key: &[u32]) -> Option<BigCount> {
        match self.map.get(key) {
            Some(v) => {
                self.hits += 1;
                Some(v.clone())
            }
            None => {
                self.misses += 1;
                None
            }
        }
    }

    fn insert(&mut self, key: Vec<u32>, value: BigCount) {
        if self.cap.is_none_or(|cap| self.map.len() < cap) {
            self.map.insert(key, value);
        }
    }
}

/// Counter for a fixed row-sum vector, reusable across many column vectors.
///
/// The memo key only makes sense for one row vector, so the counter owns both.
#[derive(Debug, Clone)]
pub struct ExactCounter {
    rows: Vec<usize>,
    memo: Memo,
    binomials: BinomialTable,
}

impl ExactCounter {
    pub fn new(rows: &[usize]) -> Self {
        Self::with_memo(rows, Memo::new())
    }

    pub fn with_memo(rows: &[usize], memo: Memo) -> Self {
        let mut rows = rows.to_vec();
        rows.sort_unstable_by(|a, b| b.cmp(a));
        Self {
            rows,
            memo,
            binomials: BinomialTable::new(0),
        }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn memo(&self) -> &Memo {
        &self.memo
    }

    pub fn count(&mut self, cols: &[usize]) -> BigCount {
        let total: usize = cols.iter().sum();
        if total != self.rows.iter().sum::<usize>() {
            return BigCount::zero();
        }
        if self.rows.is_empty() || cols.is_empty() {
            // Totals agree, so both sides are all zero.
            return BigCount::one();
        }
        if self.binomials.max_n() < cols.len() {
            self.binomials = BinomialTable::new(cols.len());
        }
        let max_col = cols.iter().copied().max().unwrap_or(0);
        let mut counts = vec![0u32; max_col + 1];
        for &c in cols {
            counts[c] += 1;
        }
        self.solve(0, &counts)
    }

    fn solve(&mut self, row: usize, counts: &[u32]) -> BigCount {
        if row == self.rows.len() {
            return if counts[1..].iter().all(|&c| c == 0) {
                BigCount::one()
            } else {
                BigCount::zero()
            };
        }
        if !dominated(&self.rows[row..], counts) {
            return BigCount::zero();
        }

        // Trailing empty classes do not change the state.
        let used = counts.iter().rposition(|&c| c != 0).map_or(1, |i| i + 1);
        let mut key = Vec::with_capacity(used + 1);
        key.push(row as u32);
        key.extend_from_slice(&counts[..used]);
        if let Some(v) = self.memo.get(&key) {
            return v;
        }

        let mut next = counts.to_vec();
        let mut total = BigCount::zero();
        let top = counts.len() - 1;
        self.distribute(row, counts, top, self.rows[row], &mut next, &BigCount::one(), &mut total);

        self.memo.insert(key, total.clone());
        total
    }

    #[allow(clippy::too_many_arguments)]
    fn distribute(
        &mut self,
        row: usize,
        counts: &[u32],
        class: usize,
        remaining: usize,
        next: &mut Vec<u32>,
        weight: &BigCount,
        total: &mut BigCount,
    ) {
        if remaining == 0 {
            let sub = self.solve(row + 1, next);
            if !sub.is_zero() {
                *total += &(weight * &sub);
            }
            return;
        }
        if class == 0 {
            return;
        }
        let available: usize = counts[1..=class].iter().map(|&c| c as usize).sum();
        if available < remaining {
            return;
        }
        let here = counts[class] as usize;
        for take in 0..=here.min(remaining) {
            next[class] -= take as u32;
            next[class - 1] += take as u32;
            let w = if take == 0 {
                weight.clone()
            } else {
                weight * self.binomials.get(here, take)
            };
            self.distribute(row, counts, class - 1, remaining - take, next, &w, total);
            next[class] += take as u32;
            next[class - 1] -= take as u32;
        }
    }
}
