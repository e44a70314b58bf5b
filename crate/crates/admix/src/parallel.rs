//! Multi-threaded `|A12|`.
//!
//! First-locus pairs are dealt round-robin to a fixed pool of scoped threads.
//! Each thread owns its memo tables, and the partial sums are added in worker
//! order, so the result does not depend on the worker count or on scheduling.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use admix_core::enumerate::A12Plan;
use admix_core::{BigCount, MarginSpec};

use crate::error::{Error, Result};

/// Worker count used when the caller does not choose one.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

pub fn count_a12(spec: &MarginSpec, workers: usize) -> BigCount {
    match count_a12_within(spec, workers, None) {
        Ok(count) => count,
        Err(_) => unreachable!("no budget means no cancellation"),
    }
}

/// Like [`count_a12`], giving up with [`Error::Budget`] once `budget` has
/// elapsed.
pub fn count_a12_within(
    spec: &MarginSpec,
    workers: usize,
    budget: Option<Duration>,
) -> Result<BigCount> {
    let plan = A12Plan::new(spec);
    let pairs = plan.first_pairs();
    let workers = workers.clamp(1, pairs.len().max(1));
    let deadline = budget.map(|b| Instant::now() + b);
    let stop = AtomicBool::new(false);

    let run = |worker: usize| -> admix_core::Result<BigCount> {
        let mut state = plan.worker();
        let mut cancel = || {
            stop.load(Ordering::Relaxed) || deadline.is_some_and(|d| Instant::now() >= d)
        };
        let mut acc = BigCount::zero();
        for &pair in pairs.iter().skip(worker).step_by(workers) {
            match state.sum_first_pair(pair, &mut cancel) {
                Ok(part) => acc += part,
                Err(e) => {
                    stop.store(true, Ordering::Relaxed);
                    return Err(e);
                }
            }
        }
        Ok(acc)
    };

    let partials: Vec<admix_core::Result<BigCount>> = if workers == 1 {
        vec![run(0)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let run = &run;
                    scope.spawn(move || run(w))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().unwrap_or_else(|e| std::panic::resume_unwind(e)))
                .collect()
        })
    };

    let mut total = BigCount::zero();
    for part in partials {
        match part {
            Ok(v) => total += v,
            Err(admix_core::Error::Cancelled) => {
                return Err(Error::Budget(budget.unwrap_or_default()))
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(total)
}
