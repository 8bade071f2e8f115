//! Solver for instances whose period minima are trivial (`lw = lo = 1`).
//!
//! With exact requests, feasibility reduces to four families of linear
//! inequalities over prefix request sums, and a feasible schedule is built
//! by assigning worker representatives cyclically. Interval requests are
//! first narrowed to exact ones by computing a feasible potential in a
//! difference-constraint graph over the prefix work counts.

use std::fmt;

use crate::diffcon::{
    solve_potential, AffineWeight, DiffConGraph, NegativeCycle, PotentialResult,
};
use crate::instance::Instance;
use crate::schedule::{CompactDay, Schedule};

/// Chosen prefix work counts: `prefix[d]` workers-on-duty-days over days
/// `1..=d`, with `prefix[0] = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkCounts {
    prefix: Vec<u64>,
}

impl WorkCounts {
    pub fn from_per_day(per_day: &[u64]) -> Self {
        let mut prefix = Vec::with_capacity(per_day.len() + 1);
        prefix.push(0);
        for &r in per_day {
            prefix.push(prefix.last().unwrap() + r);
        }
        WorkCounts { prefix }
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn per_day(&self) -> Vec<u64> {
        self.prefix.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// Which inequality family a graph edge encodes, for witness reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpperEdge {
    /// Total demand at most `N * Uw`.
    TotalWork,
    /// Total slack at most `N * Uo`.
    TotalOff,
    /// Demand of the window starting at `day` at most `N * uw`.
    WorkWindow { day: usize },
    /// Demand of the window starting at `day` at least `N`.
    OffWindow { day: usize },
    /// Day demand at least its lower request.
    RequestMin { day: usize },
    /// Day demand at most its upper request.
    RequestMax { day: usize },
    /// Day demand at most the worker count (parametric probing only).
    WorkerCap { day: usize },
}

impl fmt::Display for UpperEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpperEdge::TotalWork => write!(f, "total-work"),
            UpperEdge::TotalOff => write!(f, "total-off"),
            UpperEdge::WorkWindow { day } => write!(f, "work-window[{day}]"),
            UpperEdge::OffWindow { day } => write!(f, "off-window[{day}]"),
            UpperEdge::RequestMin { day } => write!(f, "request-min[{day}]"),
            UpperEdge::RequestMax { day } => write!(f, "request-max[{day}]"),
            UpperEdge::WorkerCap { day } => write!(f, "worker-cap[{day}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UpperBoundsError {
    /// The instance has nontrivial period minima and belongs elsewhere.
    WrongClass { work_min: usize, off_min: usize },
    /// Operation requires exact requests.
    NonExactRequests,
    /// The exact-request inequalities fail, so no schedule exists.
    Infeasible,
}

impl fmt::Display for UpperBoundsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpperBoundsError::WrongClass { work_min, off_min } => write!(
                f,
                "solver requires trivial period minima, got lw={work_min}, lo={off_min}"
            ),
            UpperBoundsError::NonExactRequests => {
                write!(f, "operation requires exact per-day requests")
            }
            UpperBoundsError::Infeasible => {
                write!(f, "exact requests violate the feasibility inequalities")
            }
        }
    }
}

impl std::error::Error for UpperBoundsError {}

fn require_class(instance: &Instance) -> Result<(), UpperBoundsError> {
    let b = instance.bounds();
    if b.work_min != 1 || b.off_min != 1 {
        return Err(UpperBoundsError::WrongClass {
            work_min: b.work_min,
            off_min: b.off_min,
        });
    }
    Ok(())
}

/// Decides an exact-request instance by evaluating the four inequality
/// families over prefix sums, in O(D).
pub fn check_exact(instance: &Instance) -> Result<bool, UpperBoundsError> {
    require_class(instance)?;
    let requests = instance
        .exact_requests()
        .ok_or(UpperBoundsError::NonExactRequests)?;
    Ok(exact_feasible(instance, &requests))
}

fn exact_feasible(instance: &Instance, requests: &[u64]) -> bool {
    let d = instance.days() as u64;
    let n = instance.workers();
    let b = instance.bounds();
    let counts = WorkCounts::from_per_day(requests);
    let prefix = counts.prefix();
    let total = prefix[instance.days()];

    if total > n * b.total_work_max as u64 {
        return false;
    }
    if n * d - total > n * b.total_off_max as u64 {
        return false;
    }
    // Windows of work_max + 1 consecutive days hold at most N * work_max
    // duty days; windows of off_max + 1 at least N.
    for start in 1..=instance.days().saturating_sub(b.work_max) {
        if prefix[start + b.work_max] - prefix[start - 1] > n * b.work_max as u64 {
            return false;
        }
    }
    for start in 1..=instance.days().saturating_sub(b.off_max) {
        if prefix[start + b.off_max] - prefix[start - 1] < n {
            return false;
        }
    }
    true
}

/// Builds the compact schedule that assigns each day's demand to the next
/// representatives in cyclic order: day `d` gets workers of representatives
/// `prefix[d-1] + 1 ..= prefix[d]`.
pub fn schedule_exact(instance: &Instance) -> Result<Schedule, UpperBoundsError> {
    require_class(instance)?;
    let requests = instance
        .exact_requests()
        .ok_or(UpperBoundsError::NonExactRequests)?;
    if !exact_feasible(instance, &requests) {
        return Err(UpperBoundsError::Infeasible);
    }
    Ok(cyclic_schedule(instance.workers(), &requests))
}

fn cyclic_schedule(workers: u64, requests: &[u64]) -> Schedule {
    let mut days = Vec::with_capacity(requests.len());
    let mut before = 0u64;
    for &r in requests {
        let offset = if workers == 0 { 0 } else { before % workers };
        days.push(CompactDay { offset, count: r });
        before += r;
    }
    Schedule::from_compact(workers, days).expect("requests fit workforce")
}

/// The difference-constraint graph over prefix work counts `W^0 ..= W^D`;
/// vertex `d` carries `W^d`, anchored at `W^0 = 0`.
pub fn build_interval_graph(instance: &Instance) -> DiffConGraph<UpperEdge> {
    build_graph(instance, false)
}

/// Same graph plus per-day `W^d - W^{d-1} <= N` cap edges. The caps are
/// implied by `ru <= N` on a fixed valid instance but keep the system
/// honest when probing worker counts other than the instance's own.
pub fn build_parametric_graph(instance: &Instance) -> DiffConGraph<UpperEdge> {
    build_graph(instance, true)
}

fn build_graph(instance: &Instance, caps: bool) -> DiffConGraph<UpperEdge> {
    let d = instance.days();
    let b = instance.bounds();
    let mut g = DiffConGraph::new(d + 1, 0);

    g.constrain(
        0,
        d,
        AffineWeight { a: b.total_work_max as i64, b: 0 },
        UpperEdge::TotalWork,
    );
    g.constrain(
        d,
        0,
        AffineWeight { a: b.total_off_max as i64 - d as i64, b: 0 },
        UpperEdge::TotalOff,
    );
    for start in 1..=d.saturating_sub(b.work_max) {
        g.constrain(
            start - 1,
            start + b.work_max,
            AffineWeight { a: b.work_max as i64, b: 0 },
            UpperEdge::WorkWindow { day: start },
        );
    }
    for start in 1..=d.saturating_sub(b.off_max) {
        g.constrain(
            start + b.off_max,
            start - 1,
            AffineWeight { a: -1, b: 0 },
            UpperEdge::OffWindow { day: start },
        );
    }
    for day in 1..=d {
        let req = instance.request(day);
        g.constrain(
            day,
            day - 1,
            AffineWeight::constant(-(req.min as i64)),
            UpperEdge::RequestMin { day },
        );
        g.constrain(
            day - 1,
            day,
            AffineWeight::constant(req.max as i64),
            UpperEdge::RequestMax { day },
        );
        if caps {
            g.constrain(
                day - 1,
                day,
                AffineWeight { a: 1, b: 0 },
                UpperEdge::WorkerCap { day },
            );
        }
    }
    g
}

#[derive(Debug, Clone)]
pub enum IntervalOutcome {
    Feasible(WorkCounts),
    Infeasible(NegativeCycle<UpperEdge>),
}

/// Narrows interval requests to integral per-day counts satisfying all four
/// inequality families, or produces a negative cycle as witness. O(D^2).
pub fn solve_intervals(instance: &Instance) -> Result<IntervalOutcome, UpperBoundsError> {
    require_class(instance)?;
    let graph = build_interval_graph(instance);
    match solve_potential(&graph, instance.workers()) {
        PotentialResult::Feasible(potential) => {
            let prefix: Vec<u64> = potential
                .iter()
                .map(|&w| u64::try_from(w).expect("work counts are nonnegative"))
                .collect();
            debug_assert!(prefix.windows(2).all(|w| w[0] <= w[1]));
            Ok(IntervalOutcome::Feasible(WorkCounts { prefix }))
        }
        PotentialResult::Infeasible(cycle) => Ok(IntervalOutcome::Infeasible(cycle)),
    }
}

#[derive(Debug, Clone)]
pub enum UpperOutcome {
    Feasible(Schedule),
    Infeasible(NegativeCycle<UpperEdge>),
}

/// Full solver for the class: narrow requests, then build the cyclic
/// schedule for the induced exact requests.
pub fn solve(instance: &Instance) -> Result<UpperOutcome, UpperBoundsError> {
    match solve_intervals(instance)? {
        IntervalOutcome::Feasible(counts) => {
            let schedule = cyclic_schedule(instance.workers(), &counts.per_day());
            Ok(UpperOutcome::Feasible(schedule))
        }
        IntervalOutcome::Infeasible(cycle) => Ok(UpperOutcome::Infeasible(cycle)),
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::check::{check_schedule, Violation};
    use crate::instance::{Bounds, BoundsSpec, DayRequest};
    use crate::oracle::{self, OracleOptions};

    /// Interval-request reference instance over nine days: feasible for
    /// four workers with work windows of four days and off windows of two.
    pub(crate) fn nine_day_instance() -> Instance {
        let spec = BoundsSpec {
            work_max: Some(4),
            off_max: Some(2),
            total_work_max: Some(6),
            total_off_max: Some(4),
            ..BoundsSpec::default()
        };
        let requests = [
            (1, 3),
            (1, 1),
            (1, 4),
            (2, 3),
            (4, 4),
            (1, 3),
            (2, 4),
            (2, 2),
            (1, 2),
        ];
        Instance::new(
            9,
            4,
            spec.resolve(9).unwrap(),
            requests
                .iter()
                .map(|&(min, max)| DayRequest { min, max })
                .collect(),
        )
        .unwrap()
    }

    fn exact(days: usize, workers: u64, spec: BoundsSpec, reqs: Vec<u64>) -> Instance {
        Instance::with_exact_requests(days, workers, spec.resolve(days).unwrap(), reqs).unwrap()
    }

    #[test]
    fn window_overload_fails_the_check() {
        let spec = BoundsSpec { work_max: Some(2), ..BoundsSpec::default() };
        let inst = exact(5, 2, spec, vec![1, 2, 1, 2, 1]);
        // Days 2..4 request 5 > N * uw = 4.
        assert!(!check_exact(&inst).unwrap());
    }

    #[test]
    fn zero_demand_with_free_off_days_passes() {
        let inst = exact(4, 2, BoundsSpec::default(), vec![0; 4]);
        assert!(check_exact(&inst).unwrap());
    }

    #[test]
    fn tight_totals_and_off_windows_pass() {
        let spec = BoundsSpec {
            total_work_max: Some(2),
            off_max: Some(2),
            ..BoundsSpec::default()
        };
        let inst = exact(4, 2, spec, vec![1, 1, 1, 1]);
        assert!(check_exact(&inst).unwrap());
    }

    #[test]
    fn check_requires_exact_requests() {
        let inst = Instance::new(
            2,
            1,
            Bounds::trivial(2),
            vec![DayRequest { min: 0, max: 1 }, DayRequest::exact(0)],
        )
        .unwrap();
        assert!(matches!(
            check_exact(&inst),
            Err(UpperBoundsError::NonExactRequests)
        ));
    }

    #[test]
    fn check_requires_trivial_minima() {
        let spec = BoundsSpec { work_min: Some(2), ..BoundsSpec::default() };
        let inst = exact(4, 1, spec, vec![0; 4]);
        assert!(matches!(
            check_exact(&inst),
            Err(UpperBoundsError::WrongClass { .. })
        ));
    }

    #[test]
    fn cyclic_constructor_alternates_workers() {
        let inst = exact(4, 2, BoundsSpec::default(), vec![1, 1, 1, 1]);
        let s = schedule_exact(&inst).unwrap();
        assert!(s.is_on(1, 1) && !s.is_on(2, 1));
        assert!(s.is_on(2, 2) && !s.is_on(1, 2));
        assert!(s.is_on(1, 3) && !s.is_on(2, 3));
        assert!(s.is_on(2, 4) && !s.is_on(1, 4));
    }

    #[test]
    fn full_demand_puts_everyone_on_duty() {
        let inst = exact(3, 3, BoundsSpec::default(), vec![3, 3, 3]);
        let s = schedule_exact(&inst).unwrap();
        for w in 1..=3 {
            for d in 1..=3 {
                assert!(s.is_on(w, d));
            }
        }
    }

    #[test]
    fn constructor_refuses_infeasible_requests() {
        let spec = BoundsSpec { work_max: Some(2), ..BoundsSpec::default() };
        let inst = exact(5, 2, spec, vec![1, 2, 1, 2, 1]);
        assert!(matches!(
            schedule_exact(&inst),
            Err(UpperBoundsError::Infeasible)
        ));
    }

    #[test]
    fn overlong_run_shows_up_in_the_schedule_check() {
        // Without the work-window inequality the cyclic schedule would give
        // worker 2 a three-day run; verify the diagnosis end to end.
        let inst = exact(5, 2, BoundsSpec::default(), vec![1, 2, 1, 2, 1]);
        let s = schedule_exact(&inst).unwrap();
        let tight = BoundsSpec { work_max: Some(2), ..BoundsSpec::default() };
        let tight_inst = exact(5, 2, tight, vec![1, 2, 1, 2, 1]);
        let report = check_schedule(&tight_inst, &s).unwrap();
        assert_eq!(
            report.violations,
            vec![Violation::WorkPeriodTooLong { worker: 2, first_day: 2, last_day: 4, max: 2 }]
        );
    }

    #[test]
    fn nine_day_instance_is_feasible_end_to_end() {
        let inst = nine_day_instance();
        match solve(&inst).unwrap() {
            UpperOutcome::Feasible(s) => {
                assert!(check_schedule(&inst, &s).unwrap().feasible());
            }
            UpperOutcome::Infeasible(_) => panic!("expected feasible"),
        }
    }

    #[test]
    fn degenerate_intervals_agree_with_exact_check() {
        let spec = BoundsSpec { work_max: Some(2), ..BoundsSpec::default() };
        for reqs in [vec![1, 2, 1, 2, 1], vec![1, 1, 0, 1, 1]] {
            let inst = exact(5, 2, spec, reqs.clone());
            let expected = check_exact(&inst).unwrap();
            match solve_intervals(&inst).unwrap() {
                IntervalOutcome::Feasible(counts) => {
                    assert!(expected);
                    assert_eq!(counts.per_day(), reqs);
                }
                IntervalOutcome::Infeasible(_) => assert!(!expected),
            }
        }
    }

    #[test]
    fn forced_window_contradiction_returns_cycle() {
        let spec = BoundsSpec { work_max: Some(1), ..BoundsSpec::default() };
        let inst = exact(2, 1, spec, vec![1, 1]);
        match solve_intervals(&inst).unwrap() {
            IntervalOutcome::Infeasible(cycle) => {
                assert!(cycle.evaluated_total < 0);
                assert!(cycle
                    .edges
                    .iter()
                    .any(|e| matches!(e.label, UpperEdge::WorkWindow { .. })));
            }
            IntervalOutcome::Feasible(_) => panic!("expected cycle"),
        }
    }

    #[test]
    fn all_zero_requests_solve_to_all_off() {
        let inst = exact(4, 3, BoundsSpec::default(), vec![0; 4]);
        match solve(&inst).unwrap() {
            UpperOutcome::Feasible(s) => {
                for d in 1..=4 {
                    assert_eq!(s.on_count(d), 0);
                }
            }
            UpperOutcome::Infeasible(_) => panic!("expected feasible"),
        }
    }

    #[test]
    fn workloads_stay_within_one_of_each_other() {
        let spec = BoundsSpec { off_max: Some(3), ..BoundsSpec::default() };
        let inst = exact(7, 3, spec, vec![1, 2, 3, 1, 2, 0, 2]);
        assert!(check_exact(&inst).unwrap());
        let s = schedule_exact(&inst).unwrap();
        for day in 1..=7 {
            let totals: Vec<usize> = (1..=3)
                .map(|w| (1..=day).filter(|&d| s.is_on(w, d)).count())
                .collect();
            let min = totals.iter().min().unwrap();
            let max = totals.iter().max().unwrap();
            assert!(max - min <= 1, "day {day}: prefix totals {totals:?}");
        }
    }

    #[test]
    fn other_workers_separate_repeat_duty() {
        // Between two duty days of one worker every other worker serves.
        let inst = exact(6, 3, BoundsSpec::default(), vec![2, 1, 2, 1, 2, 1]);
        let s = schedule_exact(&inst).unwrap();
        for w in 1..=3u64 {
            let on_days: Vec<usize> = (1..=6).filter(|&d| s.is_on(w, d)).collect();
            for pair in on_days.windows(2) {
                for other in (1..=3u64).filter(|&o| o != w) {
                    assert!(
                        (pair[0]..=pair[1]).any(|d| s.is_on(other, d)),
                        "worker {other} idle between days {pair:?} of worker {w}"
                    );
                }
            }
        }
    }

    #[test]
    fn interval_sweep_matches_oracle() {
        // All interval-request instances with D=4, N=2 over a few
        // upper-bound combinations.
        let d = 4usize;
        let n = 2u64;
        let pairs: Vec<DayRequest> = (0..=n)
            .flat_map(|min| (min..=n).map(move |max| DayRequest { min, max }))
            .collect();
        for uo in 1..=d {
            for total_w in 1..=d {
                let spec = BoundsSpec {
                    work_max: Some(3),
                    off_max: Some(uo),
                    total_work_max: Some(total_w),
                    ..BoundsSpec::default()
                };
                let bounds = spec.resolve(d).unwrap();
                for code in 0..pairs.len().pow(d as u32) {
                    let mut c = code;
                    let requests: Vec<DayRequest> = (0..d)
                        .map(|_| {
                            let r = pairs[c % pairs.len()];
                            c /= pairs.len();
                            r
                        })
                        .collect();
                    let inst = Instance::new(d, n, bounds, requests.clone()).unwrap();
                    let expected = oracle::decide(&inst, &OracleOptions::default()).unwrap();
                    match solve(&inst).unwrap() {
                        UpperOutcome::Feasible(s) => {
                            assert!(expected, "{requests:?} uo={uo} Uw={total_w}");
                            assert!(check_schedule(&inst, &s).unwrap().feasible());
                        }
                        UpperOutcome::Infeasible(_) => {
                            assert!(!expected, "{requests:?} uo={uo} Uw={total_w}")
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn small_sweep_matches_oracle() {
        // All exact instances with D=4, N=2 and a few upper-bound combos.
        let d = 4usize;
        let n = 2u64;
        for uw in 1..=d {
            for total_w in 1..=d {
                let spec = BoundsSpec {
                    work_max: Some(uw),
                    off_max: Some(3),
                    total_work_max: Some(total_w),
                    ..BoundsSpec::default()
                };
                let bounds = spec.resolve(d).unwrap();
                for code in 0..(n + 1).pow(d as u32) {
                    let mut c = code;
                    let mut reqs = Vec::with_capacity(d);
                    for _ in 0..d {
                        reqs.push(c % (n + 1));
                        c /= n + 1;
                    }
                    let inst =
                        Instance::with_exact_requests(d, n, bounds, reqs.clone()).unwrap();
                    let expected = oracle::decide(&inst, &OracleOptions::default()).unwrap();
                    assert_eq!(
                        check_exact(&inst).unwrap(),
                        expected,
                        "requests {reqs:?} uw={uw} Uw={total_w}"
                    );
                    match solve(&inst).unwrap() {
                        UpperOutcome::Feasible(s) => {
                            assert!(expected);
                            assert!(check_schedule(&inst, &s).unwrap().feasible());
                        }
                        UpperOutcome::Infeasible(_) => assert!(!expected),
                    }
                }
            }
        }
    }
}
