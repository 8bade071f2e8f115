//! Feasibility checking of candidate schedules against an instance, and the
//! first-in-first-out structure test on periods.

use std::fmt;

use crate::instance::Instance;
use crate::schedule::{Period, Schedule, Shift};

/// One violated constraint, with enough context to point at the culprit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    HeadcountBelowMin { day: usize, count: u64, min: u64 },
    HeadcountAboveMax { day: usize, count: u64, max: u64 },
    WorkPeriodTooShort { worker: u64, first_day: usize, last_day: usize, min: usize },
    WorkPeriodTooLong { worker: u64, first_day: usize, last_day: usize, max: usize },
    OffPeriodTooShort { worker: u64, first_day: usize, last_day: usize, min: usize },
    OffPeriodTooLong { worker: u64, first_day: usize, last_day: usize, max: usize },
    TotalWorkAboveMax { worker: u64, total: usize, max: usize },
    TotalOffAboveMax { worker: u64, total: usize, max: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::HeadcountBelowMin { day, count, min } => {
                write!(f, "day {day}: {count} workers on duty, at least {min} requested")
            }
            Violation::HeadcountAboveMax { day, count, max } => {
                write!(f, "day {day}: {count} workers on duty, at most {max} requested")
            }
            Violation::WorkPeriodTooShort { worker, first_day, last_day, min } => write!(
                f,
                "worker {worker}: work period {first_day}..{last_day} shorter than {min}"
            ),
            Violation::WorkPeriodTooLong { worker, first_day, last_day, max } => write!(
                f,
                "worker {worker}: work period {first_day}..{last_day} longer than {max}"
            ),
            Violation::OffPeriodTooShort { worker, first_day, last_day, min } => write!(
                f,
                "worker {worker}: off period {first_day}..{last_day} shorter than {min}"
            ),
            Violation::OffPeriodTooLong { worker, first_day, last_day, max } => write!(
                f,
                "worker {worker}: off period {first_day}..{last_day} longer than {max}"
            ),
            Violation::TotalWorkAboveMax { worker, total, max } => {
                write!(f, "worker {worker}: {total} total work days exceed {max}")
            }
            Violation::TotalOffAboveMax { worker, total, max } => {
                write!(f, "worker {worker}: {total} total days off exceed {max}")
            }
        }
    }
}

/// Exhaustive list of violations; empty means feasible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckError {
    DimensionMismatch {
        instance_days: usize,
        instance_workers: u64,
        schedule_days: usize,
        schedule_workers: u64,
    },
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let CheckError::DimensionMismatch {
            instance_days,
            instance_workers,
            schedule_days,
            schedule_workers,
        } = self;
        write!(
            f,
            "schedule is {schedule_workers} x {schedule_days}, instance wants {instance_workers} x {instance_days}"
        )
    }
}

impl std::error::Error for CheckError {}

/// Checks every constraint of the instance and reports all violations.
///
/// Boundary periods, including the single off period of a worker who never
/// works, are held to the same local bounds as interior ones.
pub fn check_schedule(
    instance: &Instance,
    schedule: &Schedule,
) -> Result<FeasibilityReport, CheckError> {
    if schedule.days() != instance.days() || schedule.workers() != instance.workers() {
        return Err(CheckError::DimensionMismatch {
            instance_days: instance.days(),
            instance_workers: instance.workers(),
            schedule_days: schedule.days(),
            schedule_workers: schedule.workers(),
        });
    }

    let bounds = instance.bounds();
    let mut violations = Vec::new();

    for day in 1..=instance.days() {
        let count = schedule.on_count(day);
        let req = instance.request(day);
        if count < req.min {
            violations.push(Violation::HeadcountBelowMin { day, count, min: req.min });
        }
        if count > req.max {
            violations.push(Violation::HeadcountAboveMax { day, count, max: req.max });
        }
    }

    let mut totals: Vec<usize> = vec![0; schedule.workers() as usize];
    for p in schedule.periods() {
        let len = p.days();
        match p.kind {
            Shift::On => {
                totals[p.worker as usize - 1] += len;
                if len < bounds.work_min {
                    violations.push(Violation::WorkPeriodTooShort {
                        worker: p.worker,
                        first_day: p.first_day,
                        last_day: p.last_day,
                        min: bounds.work_min,
                    });
                }
                if len > bounds.work_max {
                    violations.push(Violation::WorkPeriodTooLong {
                        worker: p.worker,
                        first_day: p.first_day,
                        last_day: p.last_day,
                        max: bounds.work_max,
                    });
                }
            }
            Shift::Off => {
                if len < bounds.off_min {
                    violations.push(Violation::OffPeriodTooShort {
                        worker: p.worker,
                        first_day: p.first_day,
                        last_day: p.last_day,
                        min: bounds.off_min,
                    });
                }
                if len > bounds.off_max {
                    violations.push(Violation::OffPeriodTooLong {
                        worker: p.worker,
                        first_day: p.first_day,
                        last_day: p.last_day,
                        max: bounds.off_max,
                    });
                }
            }
        }
    }

    for (w, &total) in totals.iter().enumerate() {
        if total > bounds.total_work_max {
            violations.push(Violation::TotalWorkAboveMax {
                worker: w as u64 + 1,
                total,
                max: bounds.total_work_max,
            });
        }
        let off = instance.days() - total;
        if off > bounds.total_off_max {
            violations.push(Violation::TotalOffAboveMax {
                worker: w as u64 + 1,
                total: off,
                max: bounds.total_off_max,
            });
        }
    }

    Ok(FeasibilityReport { violations })
}

/// True iff among same-kind periods of any two workers, an earlier start
/// never pairs with a later end: `first(P) < first(Q)` implies
/// `last(P) <= last(Q)`.
pub fn check_fifo(schedule: &Schedule) -> bool {
    let periods = schedule.periods();
    fifo_holds(&periods, Shift::On) && fifo_holds(&periods, Shift::Off)
}

fn fifo_holds(periods: &[Period], kind: Shift) -> bool {
    let mut spans: Vec<(usize, usize)> = periods
        .iter()
        .filter(|p| p.kind == kind)
        .map(|p| (p.first_day, p.last_day))
        .collect();
    spans.sort_unstable();
    let mut max_last_before = 0usize;
    let mut i = 0;
    while i < spans.len() {
        let first = spans[i].0;
        let mut group_max = 0usize;
        while i < spans.len() && spans[i].0 == first {
            if spans[i].1 < max_last_before {
                return false;
            }
            group_max = group_max.max(spans[i].1);
            i += 1;
        }
        max_last_before = max_last_before.max(group_max);
    }
    true
}
