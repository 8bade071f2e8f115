//! Exhaustive day-by-day search over all schedules of small instances.
//! This is the ground truth the polynomial solvers, certificates and
//! reductions are validated against.

use std::fmt;

use crate::instance::Instance;
use crate::schedule::Schedule;

#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    /// Refuse instances with `workers * days` above this gate.
    pub max_cells: u64,
    /// Explore only one schedule per worker-permutation orbit. Off by
    /// default so enumeration counts are exact.
    pub symmetry: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            max_cells: 24,
            symmetry: false,
        }
    }
}

impl OracleOptions {
    pub fn with_max_cells(max_cells: u64) -> Self {
        OracleOptions {
            max_cells,
            ..OracleOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    TooLarge { workers: u64, days: usize, limit: u64 },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let OracleError::TooLarge { workers, days, limit } = self;
        write!(
            f,
            "instance with {workers} workers over {days} days exceeds the search gate of {limit} cells"
        )
    }
}

impl std::error::Error for OracleError {}

/// Is any feasible schedule reachable?
pub fn decide(instance: &Instance, options: &OracleOptions) -> Result<bool, OracleError> {
    let mut found = false;
    search(instance, options, &mut |_| {
        found = true;
        SearchFlow::Stop
    })?;
    Ok(found)
}

/// First feasible schedule in the deterministic search order, if any.
pub fn find_one(
    instance: &Instance,
    options: &OracleOptions,
) -> Result<Option<Schedule>, OracleError> {
    let mut result = None;
    search(instance, options, &mut |masks| {
        result = Some(masks_to_schedule(instance, masks));
        SearchFlow::Stop
    })?;
    Ok(result)
}

/// Every feasible schedule, in the deterministic search order.
pub fn enumerate_all(
    instance: &Instance,
    options: &OracleOptions,
) -> Result<Vec<Schedule>, OracleError> {
    let mut result = Vec::new();
    search(instance, options, &mut |masks| {
        result.push(masks_to_schedule(instance, masks));
        SearchFlow::Continue
    })?;
    Ok(result)
}

enum SearchFlow {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy, Default)]
struct WorkerState {
    on: bool,
    run: u16,
    total_on: u16,
}

struct Search<'a> {
    days: usize,
    workers: usize,
    work_min: u16,
    work_max: u16,
    off_min: u16,
    off_max: u16,
    total_work_max: u16,
    total_off_max: u16,
    req_min: Vec<u32>,
    req_max: Vec<u32>,
    symmetry: bool,
    // states[d * workers + w] is the state of worker w after day d (1-based).
    states: Vec<WorkerState>,
    // same_prefix[d] bit w set: rows of workers w and w+1 agree on days 1..=d.
    same_prefix: Vec<u64>,
    chosen: Vec<u64>,
    emit: &'a mut dyn FnMut(&[u64]) -> SearchFlow,
}

fn search(
    instance: &Instance,
    options: &OracleOptions,
    emit: &mut dyn FnMut(&[u64]) -> SearchFlow,
) -> Result<(), OracleError> {
    let cells = instance.workers().saturating_mul(instance.days() as u64);
    if cells > options.max_cells || instance.workers() > 63 {
        return Err(OracleError::TooLarge {
            workers: instance.workers(),
            days: instance.days(),
            limit: options.max_cells,
        });
    }

    let workers = instance.workers() as usize;
    let days = instance.days();
    let b = instance.bounds();
    let mut s = Search {
        days,
        workers,
        work_min: b.work_min as u16,
        work_max: b.work_max as u16,
        off_min: b.off_min as u16,
        off_max: b.off_max as u16,
        total_work_max: b.total_work_max as u16,
        total_off_max: b.total_off_max as u16,
        req_min: instance.requests().iter().map(|r| r.min as u32).collect(),
        req_max: instance
            .requests()
            .iter()
            .map(|r| r.max.min(instance.workers()) as u32)
            .collect(),
        symmetry: options.symmetry,
        states: vec![WorkerState::default(); (days + 1) * workers.max(1)],
        same_prefix: vec![0; days + 1],
        chosen: vec![0; days],
        emit,
    };
    // Before day 1 every pair of adjacent workers has an equal (empty) prefix.
    s.same_prefix[0] = if workers > 1 { (1 << (workers - 1)) - 1 } else { 0 };
    s.dfs(1);
    Ok(())
}

impl Search<'_> {
    fn dfs(&mut self, day: usize) -> SearchFlow {
        let lo = self.req_min[day - 1];
        let hi = self.req_max[day - 1];
        for k in lo..=hi {
            let mut mask_iter = KSubsets::new(self.workers as u32, k);
            while let Some(mask) = mask_iter.next() {
                if self.symmetry && !self.canonical(day, mask) {
                    continue;
                }
                if !self.apply(day, mask) {
                    continue;
                }
                self.chosen[day - 1] = mask;
                let flow = if day == self.days {
                    if self.final_runs_ok() {
                        (self.emit)(&self.chosen)
                    } else {
                        SearchFlow::Continue
                    }
                } else {
                    self.dfs(day + 1)
                };
                if matches!(flow, SearchFlow::Stop) {
                    return SearchFlow::Stop;
                }
            }
        }
        SearchFlow::Continue
    }

    /// Validates the transition into `day` under `mask` and, on success,
    /// writes the post-day states.
    fn apply(&mut self, day: usize, mask: u64) -> bool {
        let n = self.workers;
        for w in 0..n {
            let on = mask >> w & 1 == 1;
            let next = if day == 1 {
                WorkerState {
                    on,
                    run: 1,
                    total_on: on as u16,
                }
            } else {
                let prev = self.states[(day - 1) * n + w];
                if on == prev.on {
                    let run = prev.run + 1;
                    let cap = if on { self.work_max } else { self.off_max };
                    if run > cap {
                        return false;
                    }
                    WorkerState {
                        on,
                        run,
                        total_on: prev.total_on + on as u16,
                    }
                } else {
                    // Period switch: the closed run must meet its minimum.
                    let min = if prev.on { self.work_min } else { self.off_min };
                    if prev.run < min {
                        return false;
                    }
                    WorkerState {
                        on,
                        run: 1,
                        total_on: prev.total_on + on as u16,
                    }
                }
            };
            if next.total_on > self.total_work_max {
                return false;
            }
            if day as u16 - next.total_on > self.total_off_max {
                return false;
            }
            self.states[day * n + w] = next;
        }
        if self.symmetry {
            let prev_same = self.same_prefix[day - 1];
            let mut same = 0u64;
            for w in 0..n.saturating_sub(1) {
                if prev_same >> w & 1 == 1 && (mask >> w & 1) == (mask >> (w + 1) & 1) {
                    same |= 1 << w;
                }
            }
            self.same_prefix[day] = same;
        }
        true
    }

    /// Workers with identical prefixes must be assigned in index order.
    fn canonical(&self, day: usize, mask: u64) -> bool {
        let same = self.same_prefix[day - 1];
        for w in 0..self.workers.saturating_sub(1) {
            if same >> w & 1 == 1 && mask >> w & 1 == 0 && mask >> (w + 1) & 1 == 1 {
                return false;
            }
        }
        true
    }

    /// Boundary periods ending on the last day obey the same minima.
    fn final_runs_ok(&self) -> bool {
        let n = self.workers;
        for w in 0..n {
            let st = self.states[self.days * n + w];
            let min = if st.on { self.work_min } else { self.off_min };
            if st.run < min {
                return false;
            }
        }
        true
    }
}

/// Iterates all `k`-element subsets of `n` bits in increasing mask order.
struct KSubsets {
    mask: u64,
    limit: u64,
    done: bool,
}

impl KSubsets {
    fn new(n: u32, k: u32) -> Self {
        if k > n {
            return KSubsets { mask: 0, limit: 0, done: true };
        }
        KSubsets {
            mask: if k == 0 { 0 } else { (1u64 << k) - 1 },
            limit: 1u64.checked_shl(n).unwrap_or(u64::MAX),
            done: false,
        }
    }

    fn next(&mut self) -> Option<u64> {
        if self.done {
            return None;
        }
        let current = self.mask;
        if current == 0 {
            self.done = true;
            return Some(0);
        }
        // Gosper's hack: next subset of equal popcount.
        let c = current & current.wrapping_neg();
        let r = current + c;
        let next = (((r ^ current) >> 2) / c) | r;
        if next >= self.limit {
            self.done = true;
        } else {
            self.mask = next;
        }
        Some(current)
    }
}

fn masks_to_schedule(instance: &Instance, masks: &[u64]) -> Schedule {
    let n = instance.workers() as usize;
    let rows = (0..n)
        .map(|w| masks.iter().map(|m| m >> w & 1 == 1).collect())
        .collect();
    Schedule::from_rows(instance.days(), rows).expect("rows match horizon")
}
