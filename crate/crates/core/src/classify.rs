//! Routing of instances to the tractable special cases.

use std::fmt;

use crate::instance::Instance;

/// Which solver an instance admits, judging only by which bounds are
/// non-trivial and which request sides bind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexityClass {
    /// Period minima are trivial (`lw = lo = 1`); solvable in polynomial
    /// time via prefix work counts.
    UpperBoundsOnly,
    /// Global totals are trivial (`Uw = Uo = D`); solvable in polynomial
    /// time via period counters.
    LocalBoundsOnly,
    /// No lower requests and trivial off maxima: the all-OFF schedule is
    /// feasible no matter what else is set.
    TrivialAllOff,
    /// Everything else; decided only by exhaustive search.
    GeneralHard,
}

impl fmt::Display for ComplexityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexityClass::UpperBoundsOnly => write!(f, "upper-bounds-only (polynomial)"),
            ComplexityClass::LocalBoundsOnly => write!(f, "local-bounds-only (polynomial)"),
            ComplexityClass::TrivialAllOff => write!(f, "trivial (all-off schedule feasible)"),
            ComplexityClass::GeneralHard => write!(f, "general (NP-hard)"),
        }
    }
}

pub fn classify_instance(instance: &Instance) -> ComplexityClass {
    let b = instance.bounds();
    let d = instance.days();
    if b.work_min == 1 && b.off_min == 1 {
        return ComplexityClass::UpperBoundsOnly;
    }
    if b.total_work_max == d && b.total_off_max == d {
        return ComplexityClass::LocalBoundsOnly;
    }
    let no_demand = instance.requests().iter().all(|r| r.min == 0);
    if no_demand && b.off_max == d && b.total_off_max == d {
        return ComplexityClass::TrivialAllOff;
    }
    ComplexityClass::GeneralHard
}
