//! Parameter optimization: extremal feasible values of a single bound via
//! binary search over a black-box feasibility check, and the minimal
//! workforce via sign-guided search on the parametric potential graph.
//!
//! Only minimization of the workforce is offered. The maximum can be
//! unbounded: idle workers may be free to add when off periods and totals
//! are trivial, and nothing caps the count when requests are open above.

use std::fmt;

use crate::classify::{classify_instance, ComplexityClass};
use crate::diffcon::{solve_potential, DiffConGraph, PotentialResult};
use crate::instance::{Bounds, Instance};
use crate::local_bounds::{self, LocalEdge};
use crate::oracle::{self, OracleOptions};
use crate::upper_bounds::{self, UpperEdge};

/// The bound to optimize. Maxima are minimized, minima are maximized;
/// feasibility is monotone in the right direction either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundTarget {
    WorkPeriodMax,
    OffPeriodMax,
    TotalWorkMax,
    TotalOffMax,
    WorkPeriodMin,
    OffPeriodMin,
}

impl BoundTarget {
    pub fn is_maximum_bound(&self) -> bool {
        matches!(
            self,
            BoundTarget::WorkPeriodMax
                | BoundTarget::OffPeriodMax
                | BoundTarget::TotalWorkMax
                | BoundTarget::TotalOffMax
        )
    }

    fn apply(&self, bounds: &Bounds, value: usize) -> Bounds {
        let mut b = *bounds;
        match self {
            BoundTarget::WorkPeriodMax => b.work_max = value,
            BoundTarget::OffPeriodMax => b.off_max = value,
            BoundTarget::TotalWorkMax => b.total_work_max = value,
            BoundTarget::TotalOffMax => b.total_off_max = value,
            BoundTarget::WorkPeriodMin => b.work_min = value,
            BoundTarget::OffPeriodMin => b.off_min = value,
        }
        b
    }

    /// Values that keep the instance well formed: maxima may not drop
    /// below their partner minimum and vice versa.
    fn range(&self, bounds: &Bounds, days: usize) -> (usize, usize) {
        match self {
            BoundTarget::WorkPeriodMax => (bounds.work_min, days),
            BoundTarget::OffPeriodMax => (bounds.off_min, days),
            BoundTarget::TotalWorkMax | BoundTarget::TotalOffMax => (1, days),
            BoundTarget::WorkPeriodMin => (1, bounds.work_max),
            BoundTarget::OffPeriodMin => (1, bounds.off_max),
        }
    }
}

impl fmt::Display for BoundTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            BoundTarget::WorkPeriodMax => "uw",
            BoundTarget::OffPeriodMax => "uo",
            BoundTarget::TotalWorkMax => "Uw",
            BoundTarget::TotalOffMax => "Uo",
            BoundTarget::WorkPeriodMin => "lw",
            BoundTarget::OffPeriodMin => "lo",
        };
        write!(f, "{name}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OptimizeError {
    /// The feasibility check needs exhaustive search beyond its gate.
    OracleTooExpensive(oracle::OracleError),
    /// Worker-count search needs a polynomial potential graph.
    NotPolynomialClass { class: ComplexityClass },
}

impl fmt::Display for OptimizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OptimizeError::OracleTooExpensive(e) => write!(f, "{e}"),
            OptimizeError::NotPolynomialClass { class } => {
                write!(f, "workforce search requires a polynomial class, instance is {class}")
            }
        }
    }
}

impl std::error::Error for OptimizeError {}

/// Routing feasibility check: polynomial solver when the class permits,
/// gated exhaustive search otherwise.
pub fn decide_feasible(instance: &Instance, gate: &OracleOptions) -> Result<bool, OptimizeError> {
    match classify_instance(instance) {
        ComplexityClass::UpperBoundsOnly => {
            match upper_bounds::solve_intervals(instance).expect("class was checked") {
                upper_bounds::IntervalOutcome::Feasible(_) => Ok(true),
                upper_bounds::IntervalOutcome::Infeasible(_) => Ok(false),
            }
        }
        ComplexityClass::LocalBoundsOnly => {
            match local_bounds::solve_counters(instance).expect("no custom tables") {
                local_bounds::CounterOutcome::Feasible(_) => Ok(true),
                local_bounds::CounterOutcome::Infeasible(_) => Ok(false),
            }
        }
        ComplexityClass::TrivialAllOff => Ok(true),
        ComplexityClass::GeneralHard => {
            oracle::decide(instance, gate).map_err(OptimizeError::OracleTooExpensive)
        }
    }
}

/// Finds the extremal feasible value of `target` within the instance's
/// well-formed range, using any feasibility check. Returns `None` when no
/// value in the range is feasible.
pub fn optimize_bound<E>(
    instance: &Instance,
    target: BoundTarget,
    mut feasible: impl FnMut(&Instance) -> Result<bool, E>,
) -> Result<Option<usize>, E> {
    let (lo, hi) = target.range(instance.bounds(), instance.days());
    let probe = |value: usize, feasible: &mut dyn FnMut(&Instance) -> Result<bool, E>| {
        let bounds = target.apply(instance.bounds(), value);
        let candidate = instance
            .with_bounds(bounds)
            .expect("range keeps the instance well formed");
        feasible(&candidate)
    };

    if target.is_maximum_bound() {
        // Loosest value first: infeasible there means infeasible everywhere.
        if !probe(hi, &mut feasible)? {
            return Ok(None);
        }
        let (mut lo, mut hi) = (lo, hi);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if probe(mid, &mut feasible)? {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(Some(lo))
    } else {
        if !probe(lo, &mut feasible)? {
            return Ok(None);
        }
        let (mut lo, mut hi) = (lo, hi);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if probe(mid, &mut feasible)? {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        Ok(Some(lo))
    }
}

/// Bound optimization with the routing check and a search gate for hard
/// instances.
pub fn optimize_bound_routed(
    instance: &Instance,
    target: BoundTarget,
    gate: &OracleOptions,
) -> Result<Option<usize>, OptimizeError> {
    optimize_bound(instance, target, |candidate| decide_feasible(candidate, gate))
}

/// Verdict on one probed worker count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorkerCountVerdict {
    Feasible,
    TooSmall,
    TooLarge,
    /// A negative cycle with no workforce dependence: no count helps.
    InfeasibleForAll,
}

/// The potential graph of a polynomial-class instance with the request cap
/// edges that keep it meaningful at any probed worker count.
#[derive(Debug, Clone)]
pub enum ParametricGraph {
    Upper(DiffConGraph<UpperEdge>),
    Local(DiffConGraph<LocalEdge>),
}

/// Builds the parametric graph, routing by which bounds are trivial.
pub fn build_parametric_graph(instance: &Instance) -> Result<ParametricGraph, OptimizeError> {
    let b = instance.bounds();
    if b.work_min == 1 && b.off_min == 1 {
        return Ok(ParametricGraph::Upper(upper_bounds::build_parametric_graph(
            instance,
        )));
    }
    if b.total_work_max == instance.days() && b.total_off_max == instance.days() {
        let graph = local_bounds::build_counter_graph(instance, None, &[], true)
            .expect("no custom tables");
        return Ok(ParametricGraph::Local(graph));
    }
    Err(OptimizeError::NotPolynomialClass {
        class: classify_instance(instance),
    })
}

/// Classifies one worker count by solving the potential graph there: a
/// feasible potential, or the sign of the returned cycle's workforce
/// coefficient.
pub fn classify_worker_count(graph: &ParametricGraph, count: u64) -> WorkerCountVerdict {
    let coefficient = match graph {
        ParametricGraph::Upper(g) => match solve_potential(g, count) {
            PotentialResult::Feasible(_) => return WorkerCountVerdict::Feasible,
            PotentialResult::Infeasible(cycle) => cycle.total.a,
        },
        ParametricGraph::Local(g) => match solve_potential(g, count) {
            PotentialResult::Feasible(_) => return WorkerCountVerdict::Feasible,
            PotentialResult::Infeasible(cycle) => cycle.total.a,
        },
    };
    match coefficient.cmp(&0) {
        std::cmp::Ordering::Greater => WorkerCountVerdict::TooSmall,
        std::cmp::Ordering::Less => WorkerCountVerdict::TooLarge,
        std::cmp::Ordering::Equal => WorkerCountVerdict::InfeasibleForAll,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorkforceOutcome {
    Minimum(u64),
    InfeasibleForAll,
}

/// Smallest worker count that admits a feasible schedule, searched over
/// `0 ..= sum of lower requests` (an upper bound on any minimal solution:
/// unmarked workers can be dropped). The instance's own worker count is
/// ignored; request maxima act as given, capped by the probed count.
pub fn minimize_workers(instance: &Instance) -> Result<WorkforceOutcome, OptimizeError> {
    let graph = build_parametric_graph(instance)?;
    let demand_sum: u64 = instance.requests().iter().map(|r| r.min).sum();

    let mut lo = 0u64;
    let mut hi = demand_sum;
    let mut best = None;
    while lo <= hi {
        let mid = lo + (hi - lo) / 2;
        match classify_worker_count(&graph, mid) {
            WorkerCountVerdict::Feasible => {
                best = Some(mid);
                if mid == 0 {
                    break;
                }
                hi = mid - 1;
            }
            WorkerCountVerdict::TooSmall => lo = mid + 1,
            WorkerCountVerdict::TooLarge => {
                if mid == 0 {
                    break;
                }
                hi = mid - 1;
            }
            WorkerCountVerdict::InfeasibleForAll => {
                return Ok(WorkforceOutcome::InfeasibleForAll)
            }
        }
    }
    Ok(match best {
        Some(n) => WorkforceOutcome::Minimum(n),
        // The feasible interval, if any, misses every integer in range.
        None => WorkforceOutcome::InfeasibleForAll,
    })
}
