//! Solver for instances whose per-worker totals are trivial
//! (`Uw = Uo = D`).
//!
//! Instead of a schedule, the solver first determines period counters: for
//! each day `d`, how many work periods have started by `d` and how many
//! have ended strictly before `d`. Feasible counters are characterized by
//! a difference-constraint system and turned into a schedule by handing
//! each counted period to the next worker representative in cyclic order.

use std::fmt;

use crate::diffcon::{
    solve_potential, AffineWeight, DiffConGraph, NegativeCycle, PotentialResult,
};
use crate::instance::Instance;
use crate::schedule::{CompactDay, Schedule, Shift};

/// Prefix counts of work periods: entry `d - 1` covers day `d`.
/// `started[d-1]` counts periods with first day `<= d`; `ended_before[d-1]`
/// counts periods with last day `<= d - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodCounters {
    pub started: Vec<u64>,
    pub ended_before: Vec<u64>,
}

/// The same prefix counts for off periods.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OffPeriodCounters {
    pub started: Vec<u64>,
    pub ended_before: Vec<u64>,
}

impl PeriodCounters {
    pub fn days(&self) -> usize {
        self.started.len()
    }

    /// On-duty headcount of day `d`: periods started but not yet ended.
    pub fn on_duty(&self, day: usize) -> u64 {
        self.started[day - 1] - self.ended_before[day - 1]
    }

    /// Off-period counters of any schedule represented by these counters:
    /// a worker starts an off period on day 1 or right after ending a work
    /// period, and ends one right before starting a work period.
    pub fn off_counters(&self, workers: u64) -> OffPeriodCounters {
        let d = self.days();
        let s1 = self.started.first().copied().unwrap_or(0);
        let mut started = Vec::with_capacity(d);
        let mut ended_before = Vec::with_capacity(d);
        for i in 0..d {
            started.push(self.ended_before[i] + workers - s1);
            ended_before.push(self.started[i] - s1);
        }
        OffPeriodCounters {
            started,
            ended_before,
        }
    }
}

/// Counts periods of `kind` directly off a schedule.
fn count_periods(schedule: &Schedule, kind: Shift) -> (Vec<u64>, Vec<u64>) {
    let d = schedule.days();
    let mut starts = vec![0u64; d + 1];
    let mut ends = vec![0u64; d + 1];
    for p in schedule.periods() {
        if p.kind == kind {
            starts[p.first_day] += 1;
            ends[p.last_day] += 1;
        }
    }
    let mut started = Vec::with_capacity(d);
    let mut ended_before = Vec::with_capacity(d);
    let mut acc_start = 0u64;
    let mut acc_end = 0u64;
    for day in 1..=d {
        acc_start += starts[day];
        started.push(acc_start);
        ended_before.push(acc_end); // periods ending on days <= day - 1
        acc_end += ends[day];
    }
    (started, ended_before)
}

/// Work period counters of an arbitrary schedule.
pub fn counters_from_schedule(schedule: &Schedule) -> PeriodCounters {
    let (started, ended_before) = count_periods(schedule, Shift::On);
    PeriodCounters {
        started,
        ended_before,
    }
}

/// Off period counters of an arbitrary schedule, counted directly.
pub fn off_counters_from_schedule(schedule: &Schedule) -> OffPeriodCounters {
    let (started, ended_before) = count_periods(schedule, Shift::Off);
    OffPeriodCounters {
        started,
        ended_before,
    }
}

/// Day-indexed replacements for the four local bounds: entry `d - 1` maps
/// day `d` to the day the counting constraint compares against, in
/// `1..=D+1` and non-decreasing (`D + 1` disables the constraint for that
/// day). `work_max[d-1] = e` reads "a work period starting on day `d`
/// terminates before day `e`"; the other three replace `d + lw`, `d + lo`
/// and `d + uo` the same way.
#[derive(Debug, Clone, Default)]
pub struct GeneralizedBounds {
    pub work_min: Option<Vec<usize>>,
    pub work_max: Option<Vec<usize>>,
    pub off_min: Option<Vec<usize>>,
    pub off_max: Option<Vec<usize>>,
}

/// Which counter a raw injected constraint refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CounterRef {
    /// `started[day]`.
    Started(usize),
    /// `ended_before[day]`.
    EndedBefore(usize),
}

/// Raw extra constraint `lhs - rhs <= max_difference`, e.g. to force every
/// worker on duty within any week: `started[d] - started[d+7] <= -N` style
/// edges can be injected directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtraConstraint {
    pub lhs: CounterRef,
    pub rhs: CounterRef,
    pub max_difference: i64,
}

/// Constraint families of the counter graph, for witness reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalEdge {
    NonDecreasingStart { day: usize },
    NonDecreasingEnd { day: usize },
    /// Periods last at least one day.
    PositiveLength { day: usize },
    /// Consecutive periods of one worker are separated by a day off.
    SeparatedPeriods { day: usize },
    BoundaryWorkMin,
    CountWorkMin { day: usize },
    CountWorkMax { day: usize },
    BoundaryOffMin,
    CountOffMin { day: usize },
    CountOffMax { day: usize },
    RequestMin { day: usize },
    RequestMax { day: usize },
    /// Day headcount at most the worker count (parametric probing only).
    WorkerCap { day: usize },
    Extra { index: usize },
}

impl fmt::Display for LocalEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalEdge::NonDecreasingStart { day } => write!(f, "non-decreasing-starts[{day}]"),
            LocalEdge::NonDecreasingEnd { day } => write!(f, "non-decreasing-ends[{day}]"),
            LocalEdge::PositiveLength { day } => write!(f, "positive-length[{day}]"),
            LocalEdge::SeparatedPeriods { day } => write!(f, "separated-periods[{day}]"),
            LocalEdge::BoundaryWorkMin => write!(f, "boundary-work-min"),
            LocalEdge::CountWorkMin { day } => write!(f, "work-min[{day}]"),
            LocalEdge::CountWorkMax { day } => write!(f, "work-max[{day}]"),
            LocalEdge::BoundaryOffMin => write!(f, "boundary-off-min"),
            LocalEdge::CountOffMin { day } => write!(f, "off-min[{day}]"),
            LocalEdge::CountOffMax { day } => write!(f, "off-max[{day}]"),
            LocalEdge::RequestMin { day } => write!(f, "request-min[{day}]"),
            LocalEdge::RequestMax { day } => write!(f, "request-max[{day}]"),
            LocalEdge::WorkerCap { day } => write!(f, "worker-cap[{day}]"),
            LocalEdge::Extra { index } => write!(f, "extra[{index}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalBoundsError {
    /// The instance has nontrivial totals and belongs elsewhere.
    WrongClass {
        total_work_max: usize,
        total_off_max: usize,
    },
    /// A generalized bound table is malformed.
    BadBoundTable { which: &'static str, reason: String },
    /// An injected constraint points outside the horizon.
    BadExtraConstraint { index: usize },
    /// Counters handed to the schedule constructor violate a family.
    InvalidCounters { reason: String },
}

impl fmt::Display for LocalBoundsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalBoundsError::WrongClass {
                total_work_max,
                total_off_max,
            } => write!(
                f,
                "solver requires trivial totals, got Uw={total_work_max}, Uo={total_off_max}"
            ),
            LocalBoundsError::BadBoundTable { which, reason } => {
                write!(f, "bound table {which}: {reason}")
            }
            LocalBoundsError::BadExtraConstraint { index } => {
                write!(f, "extra constraint {index} references a day outside the horizon")
            }
            LocalBoundsError::InvalidCounters { reason } => {
                write!(f, "counters do not describe a feasible schedule: {reason}")
            }
        }
    }
}

impl std::error::Error for LocalBoundsError {}

// Vertex layout interleaves the two counter chains by day, so constraint
// edges stay short and relaxation sweeps cascade along the horizon. The
// anchor is ended_before[1], pinned to zero by translation.
fn s_vertex(day: usize) -> usize {
    2 * (day - 1)
}

fn t_vertex(day: usize) -> usize {
    2 * (day - 1) + 1
}

/// Printable name of a counter-graph vertex, for witness rendering.
pub fn vertex_label(vertex: usize) -> String {
    if vertex.is_multiple_of(2) {
        format!("S[{}]", vertex / 2 + 1)
    } else {
        format!("T[{}]", vertex / 2 + 1)
    }
}

fn check_table(
    which: &'static str,
    table: &[usize],
    days: usize,
) -> Result<(), LocalBoundsError> {
    if table.len() != days {
        return Err(LocalBoundsError::BadBoundTable {
            which,
            reason: format!("expected {days} entries, got {}", table.len()),
        });
    }
    let mut prev = 1;
    for (i, &v) in table.iter().enumerate() {
        if v < 1 || v > days + 1 {
            return Err(LocalBoundsError::BadBoundTable {
                which,
                reason: format!("entry for day {} is {v}, outside [1, {}]", i + 1, days + 1),
            });
        }
        if v < prev {
            return Err(LocalBoundsError::BadBoundTable {
                which,
                reason: format!("entries decrease at day {}", i + 1),
            });
        }
        prev = v;
    }
    Ok(())
}

/// Builds the counter graph. `generalized` replaces the counting families'
/// day arithmetic; boundary equalities keep the instance's plain bounds.
pub fn build_counter_graph(
    instance: &Instance,
    generalized: Option<&GeneralizedBounds>,
    extra: &[ExtraConstraint],
    caps: bool,
) -> Result<DiffConGraph<LocalEdge>, LocalBoundsError> {
    let d = instance.days();
    let b = instance.bounds();

    if let Some(g) = generalized {
        for (which, table) in [
            ("work-min", &g.work_min),
            ("work-max", &g.work_max),
            ("off-min", &g.off_min),
            ("off-max", &g.off_max),
        ] {
            if let Some(t) = table {
                check_table(which, t, d)?;
            }
        }
    }

    let mut graph = DiffConGraph::new(2 * d, t_vertex(1));
    let zero = AffineWeight::constant(0);
    let plus_n = AffineWeight { a: 1, b: 0 };

    for day in 1..d {
        graph.constrain(
            s_vertex(day + 1),
            s_vertex(day),
            zero,
            LocalEdge::NonDecreasingStart { day },
        );
        graph.constrain(
            t_vertex(day + 1),
            t_vertex(day),
            zero,
            LocalEdge::NonDecreasingEnd { day },
        );
        graph.constrain(
            s_vertex(day),
            t_vertex(day + 1),
            zero,
            LocalEdge::PositiveLength { day },
        );
        graph.constrain(
            t_vertex(day),
            s_vertex(day + 1),
            plus_n,
            LocalEdge::SeparatedPeriods { day },
        );
    }

    // Boundary equalities: no work period ends before day lw or starts
    // after day D - lw + 1; no work period starts on days 2..=lo and none
    // ends on days D - lo + 1 ..= D - 1.
    let equate = |u: usize, v: usize, label: LocalEdge, g: &mut DiffConGraph<LocalEdge>| {
        g.constrain(u, v, zero, label);
        g.constrain(v, u, zero, label);
    };
    if b.work_min > 1 {
        equate(
            t_vertex(1),
            t_vertex(b.work_min),
            LocalEdge::BoundaryWorkMin,
            &mut graph,
        );
        equate(
            s_vertex(d - b.work_min + 1),
            s_vertex(d),
            LocalEdge::BoundaryWorkMin,
            &mut graph,
        );
    }
    if b.off_min > 1 {
        equate(
            s_vertex(1),
            s_vertex(b.off_min),
            LocalEdge::BoundaryOffMin,
            &mut graph,
        );
        equate(
            t_vertex(d - b.off_min + 1),
            t_vertex(d),
            LocalEdge::BoundaryOffMin,
            &mut graph,
        );
    }

    // Counting families; `at(choice, bound, day)` is the replaced `day + bound`.
    fn at(choice: Option<&Vec<usize>>, bound: usize, day: usize) -> usize {
        match choice {
            Some(t) => t[day - 1],
            None => day + bound,
        }
    }
    let g = generalized;
    let work_min_at = |day| at(g.and_then(|g| g.work_min.as_ref()), b.work_min, day);
    let work_max_at = |day| at(g.and_then(|g| g.work_max.as_ref()), b.work_max, day);
    let off_min_at = |day| at(g.and_then(|g| g.off_min.as_ref()), b.off_min, day);
    let off_max_at = |day| at(g.and_then(|g| g.off_max.as_ref()), b.off_max, day);

    for day in 1..=d {
        let e = work_min_at(day);
        if e <= d {
            // Periods ended before day e started by `day`.
            graph.constrain(
                s_vertex(day),
                t_vertex(e),
                zero,
                LocalEdge::CountWorkMin { day },
            );
        }
        let e = work_max_at(day);
        if e <= d {
            // Periods started by `day` end before day e.
            graph.constrain(
                t_vertex(e),
                s_vertex(day),
                zero,
                LocalEdge::CountWorkMax { day },
            );
        }
        let e = off_min_at(day);
        if e <= d {
            // started[e] - N <= ended_before[day]
            graph.constrain(
                t_vertex(day),
                s_vertex(e),
                plus_n,
                LocalEdge::CountOffMin { day },
            );
        }
        let e = off_max_at(day);
        if e <= d {
            // ended_before[day] + N <= started[e]
            graph.constrain(
                s_vertex(e),
                t_vertex(day),
                AffineWeight { a: -1, b: 0 },
                LocalEdge::CountOffMax { day },
            );
        }
    }

    // No explicit "at most N periods open on day 1" constraint is needed:
    // with ended_before[1] anchored at zero, the day-1 request edge
    // (ru <= N) already caps started[1], which representability requires.
    for day in 1..=d {
        let req = instance.request(day);
        graph.constrain(
            s_vertex(day),
            t_vertex(day),
            AffineWeight::constant(-(req.min as i64)),
            LocalEdge::RequestMin { day },
        );
        graph.constrain(
            t_vertex(day),
            s_vertex(day),
            AffineWeight::constant(req.max as i64),
            LocalEdge::RequestMax { day },
        );
        if caps {
            graph.constrain(
                t_vertex(day),
                s_vertex(day),
                plus_n,
                LocalEdge::WorkerCap { day },
            );
        }
    }

    for (index, c) in extra.iter().enumerate() {
        let vertex = |r: CounterRef| -> Result<usize, LocalBoundsError> {
            let (CounterRef::Started(day) | CounterRef::EndedBefore(day)) = r;
            if day < 1 || day > d {
                return Err(LocalBoundsError::BadExtraConstraint { index });
            }
            Ok(match r {
                CounterRef::Started(day) => s_vertex(day),
                CounterRef::EndedBefore(day) => t_vertex(day),
            })
        };
        graph.constrain(
            vertex(c.rhs)?,
            vertex(c.lhs)?,
            AffineWeight::constant(c.max_difference),
            LocalEdge::Extra { index },
        );
    }

    Ok(graph)
}

#[derive(Debug, Clone)]
pub enum CounterOutcome {
    Feasible(PeriodCounters),
    Infeasible(NegativeCycle<LocalEdge>),
}

/// Solves the counter system of the instance in O(D^2). Global totals are
/// ignored: callers outside the local-bounds class get counters that honor
/// requests and local bounds only.
pub fn solve_counters(instance: &Instance) -> Result<CounterOutcome, LocalBoundsError> {
    solve_counters_with(instance, None, &[])
}

/// Counter solve with generalized per-day bound tables and raw injected
/// constraints.
pub fn solve_counters_with(
    instance: &Instance,
    generalized: Option<&GeneralizedBounds>,
    extra: &[ExtraConstraint],
) -> Result<CounterOutcome, LocalBoundsError> {
    let graph = build_counter_graph(instance, generalized, extra, false)?;
    let d = instance.days();
    match solve_potential(&graph, instance.workers()) {
        PotentialResult::Feasible(potential) => {
            let value = |v: usize| u64::try_from(potential[v]).expect("counters are nonnegative");
            let counters = PeriodCounters {
                started: (1..=d).map(|day| value(s_vertex(day))).collect(),
                ended_before: (1..=d).map(|day| value(t_vertex(day))).collect(),
            };
            Ok(CounterOutcome::Feasible(counters))
        }
        PotentialResult::Infeasible(cycle) => Ok(CounterOutcome::Infeasible(cycle)),
    }
}

/// Checks every counter family against the instance's plain bounds.
pub fn validate_counters(
    instance: &Instance,
    counters: &PeriodCounters,
) -> Result<(), LocalBoundsError> {
    let d = instance.days();
    let n = instance.workers();
    let b = instance.bounds();
    let s = &counters.started;
    let t = &counters.ended_before;
    let fail = |reason: String| Err(LocalBoundsError::InvalidCounters { reason });

    if s.len() != d || t.len() != d {
        return fail(format!("expected {d} days of counters"));
    }
    if t[0] != 0 {
        return fail("a period ends before day 1".into());
    }
    for day in 1..d {
        if s[day - 1] > s[day] || t[day - 1] > t[day] {
            return fail(format!("counters decrease at day {}", day + 1));
        }
        if t[day] > s[day - 1] {
            return fail(format!("period of non-positive length around day {day}"));
        }
        if s[day] > t[day - 1] + n {
            return fail(format!("unseparated periods of one worker around day {day}"));
        }
    }
    if b.work_min > 1 {
        if t[b.work_min - 1] != 0 {
            return fail(format!("work period shorter than {} at the start", b.work_min));
        }
        if s[d - b.work_min] != s[d - 1] {
            return fail(format!("work period shorter than {} at the end", b.work_min));
        }
    }
    if b.off_min > 1 {
        if s[b.off_min - 1] != s[0] {
            return fail(format!("off period shorter than {} at the start", b.off_min));
        }
        if t[d - b.off_min] != t[d - 1] {
            return fail(format!("off period shorter than {} at the end", b.off_min));
        }
    }
    for day in 1..=d {
        if day + b.work_min <= d && t[day + b.work_min - 1] > s[day - 1] {
            return fail(format!("work period shorter than {} around day {day}", b.work_min));
        }
        if day + b.work_max <= d && s[day - 1] > t[day + b.work_max - 1] {
            return fail(format!("work period longer than {} around day {day}", b.work_max));
        }
        if day + b.off_min <= d && s[day + b.off_min - 1] > t[day - 1] + n {
            return fail(format!("off period shorter than {} around day {day}", b.off_min));
        }
        if day + b.off_max <= d && t[day - 1] + n > s[day + b.off_max - 1] {
            return fail(format!("off period longer than {} around day {day}", b.off_max));
        }
        let req = instance.request(day);
        let on = s[day - 1] - t[day - 1].min(s[day - 1]);
        if t[day - 1] > s[day - 1] || on < req.min || on > req.max {
            return fail(format!("day {day} headcount outside its request"));
        }
    }
    Ok(())
}

/// Expands feasible counters into the compact schedule that assigns the
/// periods `ended_before[d] + 1 ..= started[d]` to the corresponding
/// worker representatives on each day.
pub fn counters_to_schedule(
    instance: &Instance,
    counters: &PeriodCounters,
) -> Result<Schedule, LocalBoundsError> {
    validate_counters(instance, counters)?;
    let n = instance.workers();
    let days = (0..instance.days())
        .map(|i| {
            let offset = if n == 0 { 0 } else { counters.ended_before[i] % n };
            CompactDay {
                offset,
                count: counters.started[i] - counters.ended_before[i],
            }
        })
        .collect();
    Ok(Schedule::from_compact(n, days).expect("headcounts fit workforce"))
}

#[derive(Debug, Clone)]
pub enum LocalOutcome {
    Feasible(Schedule),
    Infeasible(NegativeCycle<LocalEdge>),
}

/// Full solver for the class: solve the counter system, then expand.
pub fn solve(instance: &Instance) -> Result<LocalOutcome, LocalBoundsError> {
    let b = instance.bounds();
    if b.total_work_max != instance.days() || b.total_off_max != instance.days() {
        return Err(LocalBoundsError::WrongClass {
            total_work_max: b.total_work_max,
            total_off_max: b.total_off_max,
        });
    }
    match solve_counters(instance)? {
        CounterOutcome::Feasible(counters) => {
            let schedule = counters_to_schedule(instance, &counters)?;
            Ok(LocalOutcome::Feasible(schedule))
        }
        CounterOutcome::Infeasible(cycle) => Ok(LocalOutcome::Infeasible(cycle)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::{check_fifo, check_schedule};
    use crate::instance::{Bounds, BoundsSpec, DayRequest};
    use crate::oracle::{self, OracleOptions};

    fn exact(days: usize, workers: u64, spec: BoundsSpec, reqs: Vec<u64>) -> Instance {
        Instance::with_exact_requests(days, workers, spec.resolve(days).unwrap(), reqs).unwrap()
    }

    fn rows(rows: Vec<&str>) -> Schedule {
        let days = rows.first().map_or(0, |r| r.len());
        Schedule::from_rows(
            days,
            rows.iter()
                .map(|r| r.chars().map(|c| c == '1').collect())
            .collect(),
        )
        .unwrap()
    }

    #[test]
    fn counters_of_two_unit_periods() {
        let s = rows(vec!["101"]);
        let c = counters_from_schedule(&s);
        assert_eq!(c.started, vec![1, 1, 2]);
        assert_eq!(c.ended_before, vec![0, 1, 1]);
    }

    #[test]
    fn counters_of_idle_and_full_schedules() {
        let idle = Schedule::all_off(3, 4);
        let c = counters_from_schedule(&idle);
        assert_eq!(c.started, vec![0; 4]);
        assert_eq!(c.ended_before, vec![0; 4]);

        let full = rows(vec!["111", "111"]);
        let c = counters_from_schedule(&full);
        assert_eq!(c.started, vec![2, 2, 2]);
        assert_eq!(c.ended_before, vec![0, 0, 0]);
    }

    #[test]
    fn off_counter_identities_hold_on_arbitrary_schedules() {
        for s in [
            rows(vec!["10110", "01011", "00000"]),
            rows(vec!["111", "010"]),
            rows(vec!["0101", "1010", "1111"]),
        ] {
            let work = counters_from_schedule(&s);
            let off_direct = off_counters_from_schedule(&s);
            let off_derived = work.off_counters(s.workers());
            assert_eq!(off_direct, off_derived);
            assert_eq!(
                work.started[0] + off_direct.started[0],
                s.workers(),
                "every worker starts one period on day 1"
            );
        }
    }

    #[test]
    fn solver_finds_the_forced_counters() {
        let inst = exact(3, 1, BoundsSpec::default(), vec![1, 0, 1]);
        match solve_counters(&inst).unwrap() {
            CounterOutcome::Feasible(c) => {
                assert!(validate_counters(&inst, &c).is_ok());
                assert_eq!(c.started, vec![1, 1, 2]);
                assert_eq!(c.ended_before, vec![0, 1, 1]);
            }
            CounterOutcome::Infeasible(_) => panic!("expected feasible"),
        }
    }

    #[test]
    fn short_gap_between_demands_is_infeasible() {
        let spec = BoundsSpec { off_min: Some(2), ..BoundsSpec::default() };
        let inst = exact(3, 1, spec, vec![1, 0, 1]);
        match solve_counters(&inst).unwrap() {
            CounterOutcome::Infeasible(cycle) => {
                assert!(cycle.evaluated_total < 0);
            }
            CounterOutcome::Feasible(_) => panic!("expected infeasible"),
        }
    }

    #[test]
    fn zero_demand_solves_to_zero_counters() {
        let inst = Instance::new(
            4,
            2,
            Bounds::trivial(4),
            vec![DayRequest { min: 0, max: 2 }; 4],
        )
        .unwrap();
        match solve_counters(&inst).unwrap() {
            CounterOutcome::Feasible(c) => {
                assert_eq!(c.started, vec![0; 4]);
                assert_eq!(c.ended_before, vec![0; 4]);
            }
            CounterOutcome::Infeasible(_) => panic!("expected feasible"),
        }
    }

    #[test]
    fn expansion_recovers_the_unit_period_schedule() {
        let inst = exact(3, 1, BoundsSpec::default(), vec![1, 0, 1]);
        let counters = PeriodCounters {
            started: vec![1, 1, 2],
            ended_before: vec![0, 1, 1],
        };
        let s = counters_to_schedule(&inst, &counters).unwrap();
        assert!(s.is_on(1, 1));
        assert!(!s.is_on(1, 2));
        assert!(s.is_on(1, 3));
    }

    #[test]
    fn expansion_of_full_duty_counters() {
        let inst = exact(3, 2, BoundsSpec::default(), vec![2, 2, 2]);
        let counters = PeriodCounters {
            started: vec![2, 2, 2],
            ended_before: vec![0, 0, 0],
        };
        let s = counters_to_schedule(&inst, &counters).unwrap();
        for w in 1..=2 {
            for d in 1..=3 {
                assert!(s.is_on(w, d));
            }
        }
    }

    #[test]
    fn expansion_rejects_invalid_counters() {
        let inst = exact(3, 1, BoundsSpec::default(), vec![1, 0, 1]);
        let bad = PeriodCounters {
            started: vec![1, 0, 2],
            ended_before: vec![0, 1, 1],
        };
        assert!(matches!(
            counters_to_schedule(&inst, &bad),
            Err(LocalBoundsError::InvalidCounters { .. })
        ));
    }

    #[test]
    fn solve_composes_and_respects_all_bounds() {
        let spec = BoundsSpec {
            work_min: Some(2),
            work_max: Some(3),
            off_min: Some(2),
            ..BoundsSpec::default()
        };
        let inst = Instance::new(
            8,
            2,
            spec.resolve(8).unwrap(),
            vec![DayRequest { min: 1, max: 2 }; 8],
        )
        .unwrap();
        match solve(&inst).unwrap() {
            LocalOutcome::Feasible(s) => {
                assert!(check_schedule(&inst, &s).unwrap().feasible());
                assert!(check_fifo(&s));
            }
            LocalOutcome::Infeasible(_) => panic!("expected feasible"),
        }
    }

    #[test]
    fn solve_requires_trivial_totals() {
        let spec = BoundsSpec { total_work_max: Some(2), ..BoundsSpec::default() };
        let inst = exact(4, 1, spec, vec![0; 4]);
        assert!(matches!(
            solve(&inst),
            Err(LocalBoundsError::WrongClass { .. })
        ));
    }

    #[test]
    fn round_trip_preserves_solved_counters() {
        let spec = BoundsSpec {
            work_min: Some(2),
            off_min: Some(2),
            ..BoundsSpec::default()
        };
        let inst = exact(10, 2, spec, vec![0, 0, 1, 2, 1, 1, 2, 1, 1, 1]);
        match solve_counters(&inst).unwrap() {
            CounterOutcome::Feasible(c) => {
                let s = counters_to_schedule(&inst, &c).unwrap();
                assert_eq!(counters_from_schedule(&s), c);
                assert!(check_schedule(&inst, &s).unwrap().feasible());
                assert!(check_fifo(&s));
            }
            CounterOutcome::Infeasible(_) => panic!("expected feasible"),
        }
    }

    #[test]
    fn constant_tables_match_plain_bounds() {
        let spec = BoundsSpec {
            work_min: Some(2),
            work_max: Some(3),
            off_min: Some(2),
            off_max: Some(4),
            ..BoundsSpec::default()
        };
        let inst = Instance::new(
            7,
            2,
            spec.resolve(7).unwrap(),
            vec![DayRequest { min: 1, max: 2 }; 7],
        )
        .unwrap();
        let b = inst.bounds();
        let table = |x: usize| Some((1..=7).map(|d| (d + x).min(8)).collect::<Vec<_>>());
        let g = GeneralizedBounds {
            work_min: table(b.work_min),
            work_max: table(b.work_max),
            off_min: table(b.off_min),
            off_max: table(b.off_max),
        };
        let plain = match solve_counters(&inst).unwrap() {
            CounterOutcome::Feasible(c) => c,
            CounterOutcome::Infeasible(_) => panic!("expected feasible"),
        };
        let generalized = match solve_counters_with(&inst, Some(&g), &[]).unwrap() {
            CounterOutcome::Feasible(c) => c,
            CounterOutcome::Infeasible(_) => panic!("expected feasible"),
        };
        assert_eq!(plain, generalized);
    }

    #[test]
    fn varying_work_cap_shortens_runs_mid_horizon() {
        // Runs starting on days 3..=4 must end before day 5; elsewhere the
        // plain cap of 3 applies.
        let spec = BoundsSpec { work_max: Some(3), ..BoundsSpec::default() };
        let inst = Instance::new(
            6,
            1,
            spec.resolve(6).unwrap(),
            vec![DayRequest { min: 0, max: 1 }; 6],
        )
        .unwrap();
        let mut table: Vec<usize> = (1..=6).map(|d| (d + 3).min(7)).collect();
        table[2] = 5;
        table[3] = 5;
        let g = GeneralizedBounds {
            work_max: Some(table),
            ..GeneralizedBounds::default()
        };
        match solve_counters_with(&inst, Some(&g), &[]).unwrap() {
            CounterOutcome::Feasible(c) => {
                let s = counters_to_schedule(&inst, &c).unwrap();
                // Every emitted work period respects the generalized rule.
                for p in s.periods() {
                    if p.kind == Shift::On {
                        let cutoff = if p.first_day == 3 || p.first_day == 4 {
                            5
                        } else {
                            p.first_day + 3
                        };
                        assert!(p.last_day < cutoff);
                    }
                }
            }
            CounterOutcome::Infeasible(_) => panic!("expected feasible"),
        }
    }

    #[test]
    fn malformed_tables_are_rejected() {
        let inst = exact(3, 1, BoundsSpec::default(), vec![0, 0, 0]);
        let g = GeneralizedBounds {
            work_max: Some(vec![4, 2, 4]),
            ..GeneralizedBounds::default()
        };
        assert!(matches!(
            solve_counters_with(&inst, Some(&g), &[]),
            Err(LocalBoundsError::BadBoundTable { .. })
        ));
        let g = GeneralizedBounds {
            off_min: Some(vec![1, 2]),
            ..GeneralizedBounds::default()
        };
        assert!(matches!(
            solve_counters_with(&inst, Some(&g), &[]),
            Err(LocalBoundsError::BadBoundTable { .. })
        ));
    }

    #[test]
    fn injected_constraint_forces_weekly_duty() {
        // started[5] - started[1] >= N reads "every worker begins a second
        // period within the first five days"; injected as
        // started[1] - started[5] <= -N.
        let inst = Instance::new(
            6,
            1,
            Bounds::trivial(6),
            vec![DayRequest { min: 0, max: 1 }; 6],
        )
        .unwrap();
        let extra = [ExtraConstraint {
            lhs: CounterRef::Started(1),
            rhs: CounterRef::Started(5),
            max_difference: -1,
        }];
        match solve_counters_with(&inst, None, &extra).unwrap() {
            CounterOutcome::Feasible(c) => {
                assert!(c.started[4] > c.started[0]);
            }
            CounterOutcome::Infeasible(_) => panic!("expected feasible"),
        }
        // Demanding two extra period starts from one worker in two days is
        // impossible: periods need a separating day off.
        let extra = [ExtraConstraint {
            lhs: CounterRef::Started(1),
            rhs: CounterRef::Started(2),
            max_difference: -2,
        }];
        match solve_counters_with(&inst, None, &extra).unwrap() {
            CounterOutcome::Infeasible(cycle) => {
                assert!(cycle
                    .edges
                    .iter()
                    .any(|e| matches!(e.label, LocalEdge::Extra { index: 0 })));
            }
            CounterOutcome::Feasible(_) => panic!("expected infeasible"),
        }
    }

    #[test]
    fn out_of_horizon_extra_constraint_errors() {
        let inst = exact(3, 1, BoundsSpec::default(), vec![0, 0, 0]);
        let extra = [ExtraConstraint {
            lhs: CounterRef::Started(4),
            rhs: CounterRef::Started(1),
            max_difference: 0,
        }];
        assert!(matches!(
            solve_counters_with(&inst, None, &extra),
            Err(LocalBoundsError::BadExtraConstraint { index: 0 })
        ));
    }

    #[test]
    fn interval_sweep_matches_oracle() {
        // All interval-request instances with D=4, N=2 over a few
        // local-bound combinations.
        let d = 4usize;
        let n = 2u64;
        let pairs: Vec<DayRequest> = (0..=n)
            .flat_map(|min| (min..=n).map(move |max| DayRequest { min, max }))
            .collect();
        for lw in 1..=2usize {
            for uo in 1..=3usize {
                let spec = BoundsSpec {
                    work_min: Some(lw),
                    off_max: Some(uo),
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
                        LocalOutcome::Feasible(s) => {
                            assert!(expected, "{requests:?} lw={lw} uo={uo}");
                            assert!(check_schedule(&inst, &s).unwrap().feasible());
                        }
                        LocalOutcome::Infeasible(_) => {
                            assert!(!expected, "{requests:?} lw={lw} uo={uo}")
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn small_sweep_matches_oracle() {
        // All exact instances with D=4, N=2 over a few local-bound combos.
        let d = 4usize;
        let n = 2u64;
        for lw in 1..=2usize {
            for lo in 1..=2usize {
                for uo in lo..=d {
                    let spec = BoundsSpec {
                        work_min: Some(lw),
                        off_min: Some(lo),
                        off_max: Some(uo),
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
                        match solve(&inst).unwrap() {
                            LocalOutcome::Feasible(s) => {
                                assert!(expected, "requests {reqs:?} lw={lw} lo={lo} uo={uo}");
                                assert!(check_schedule(&inst, &s).unwrap().feasible());
                                assert!(check_fifo(&s));
                            }
                            LocalOutcome::Infeasible(_) => {
                                assert!(!expected, "requests {reqs:?} lw={lw} lo={lo} uo={uo}")
                            }
                        }
                    }
                }
            }
        }
    }
}
