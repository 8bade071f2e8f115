//! Schedules and their two representations: a dense ON/OFF matrix and a
//! compact per-day cyclic-interval form whose size is independent of the
//! workforce size.

use std::fmt;

/// Whether a worker is on duty or off on a given day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shift {
    On,
    Off,
}

/// One day of a compact schedule: workers `((offset + i - 1) mod N) + 1`
/// for `i = 1..=count` are on duty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompactDay {
    pub offset: u64,
    pub count: u64,
}

/// An inclusion-maximal run of equal assignment for one worker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Period {
    /// 1-based worker index.
    pub worker: u64,
    pub kind: Shift,
    /// 1-based first day of the run.
    pub first_day: usize,
    /// 1-based last day of the run (inclusive).
    pub last_day: usize,
}

impl Period {
    /// Number of days the period spans; at least one by construction.
    pub fn days(&self) -> usize {
        self.last_day - self.first_day + 1
    }
}

/// A complete assignment of every worker to ON or OFF on every day.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Schedule {
    Dense {
        days: usize,
        /// `rows[w][d]` is true when worker `w + 1` works on day `d + 1`.
        rows: Vec<Vec<bool>>,
    },
    Compact {
        workers: u64,
        days: Vec<CompactDay>,
    },
}

impl Schedule {
    pub fn from_rows(days: usize, rows: Vec<Vec<bool>>) -> Result<Self, ScheduleError> {
        for (w, row) in rows.iter().enumerate() {
            if row.len() != days {
                return Err(ScheduleError::RowLength {
                    worker: w as u64 + 1,
                    expected: days,
                    got: row.len(),
                });
            }
        }
        Ok(Schedule::Dense { days, rows })
    }

    pub fn from_compact(workers: u64, days: Vec<CompactDay>) -> Result<Self, ScheduleError> {
        for (d, cd) in days.iter().enumerate() {
            if cd.count > workers || (cd.offset > 0 && cd.offset >= workers.max(1)) {
                return Err(ScheduleError::BadCompactDay {
                    day: d + 1,
                    offset: cd.offset,
                    count: cd.count,
                    workers,
                });
            }
        }
        Ok(Schedule::Compact { workers, days })
    }

    /// The all-OFF schedule in compact form.
    pub fn all_off(workers: u64, days: usize) -> Self {
        Schedule::Compact {
            workers,
            days: vec![CompactDay { offset: 0, count: 0 }; days],
        }
    }

    pub fn workers(&self) -> u64 {
        match self {
            Schedule::Dense { rows, .. } => rows.len() as u64,
            Schedule::Compact { workers, .. } => *workers,
        }
    }

    pub fn days(&self) -> usize {
        match self {
            Schedule::Dense { days, .. } => *days,
            Schedule::Compact { days, .. } => days.len(),
        }
    }

    /// Is `worker` (1-based) on duty on `day` (1-based)?
    pub fn is_on(&self, worker: u64, day: usize) -> bool {
        match self {
            Schedule::Dense { rows, .. } => rows[worker as usize - 1][day - 1],
            Schedule::Compact { workers, days } => {
                let cd = days[day - 1];
                if cd.count == 0 {
                    return false;
                }
                let n = *workers as i128;
                let slot = (worker as i128 - cd.offset as i128 - 1).rem_euclid(n) as u64 + 1;
                slot <= cd.count
            }
        }
    }

    /// Number of workers on duty on `day` (1-based).
    pub fn on_count(&self, day: usize) -> u64 {
        match self {
            Schedule::Dense { rows, .. } => {
                rows.iter().filter(|row| row[day - 1]).count() as u64
            }
            Schedule::Compact { days, .. } => days[day - 1].count,
        }
    }

    /// Expands into per-worker rows. Pseudopolynomial for compact schedules
    /// with a large workforce.
    pub fn to_rows(&self) -> Vec<Vec<bool>> {
        match self {
            Schedule::Dense { rows, .. } => rows.clone(),
            Schedule::Compact { workers, days } => {
                let n = usize::try_from(*workers).expect("workforce fits usize");
                (1..=n as u64)
                    .map(|w| (1..=days.len()).map(|d| self.is_on(w, d)).collect())
                    .collect()
            }
        }
    }

    /// The compact form, when every day's ON set is a cyclic interval.
    /// Offsets are canonical: 0 for empty and full days, the unique interval
    /// start otherwise.
    pub fn compact_days(&self) -> Option<Vec<CompactDay>> {
        match self {
            Schedule::Compact { workers, days } => {
                let n = *workers;
                Some(
                    days.iter()
                        .map(|cd| {
                            if cd.count == 0 || cd.count == n {
                                CompactDay { offset: 0, count: cd.count }
                            } else {
                                *cd
                            }
                        })
                        .collect(),
                )
            }
            Schedule::Dense { days, rows } => {
                let n = rows.len() as u64;
                let mut out = Vec::with_capacity(*days);
                for d in 0..*days {
                    let count = rows.iter().filter(|r| r[d]).count() as u64;
                    if count == 0 || count == n {
                        out.push(CompactDay { offset: 0, count });
                        continue;
                    }
                    // A proper cyclic interval has exactly one OFF -> ON
                    // transition around the circle.
                    let mut start = None;
                    for w in 0..rows.len() {
                        let prev = (w + rows.len() - 1) % rows.len();
                        if rows[w][d] && !rows[prev][d] {
                            if start.is_some() {
                                return None;
                            }
                            start = Some(w as u64);
                        }
                    }
                    out.push(CompactDay {
                        offset: start?,
                        count,
                    });
                }
                Some(out)
            }
        }
    }

    /// All work and off periods of every worker, in worker order.
    pub fn periods(&self) -> Vec<Period> {
        let n = self.workers();
        let d = self.days();
        let mut out = Vec::new();
        for w in 1..=n {
            if d == 0 {
                continue;
            }
            let mut first = 1usize;
            let mut kind = if self.is_on(w, 1) { Shift::On } else { Shift::Off };
            for day in 2..=d {
                let k = if self.is_on(w, day) { Shift::On } else { Shift::Off };
                if k != kind {
                    out.push(Period {
                        worker: w,
                        kind,
                        first_day: first,
                        last_day: day - 1,
                    });
                    first = day;
                    kind = k;
                }
            }
            out.push(Period {
                worker: w,
                kind,
                first_day: first,
                last_day: d,
            });
        }
        out
    }

    /// Total days on duty for one worker.
    pub fn work_total(&self, worker: u64) -> usize {
        (1..=self.days()).filter(|&d| self.is_on(worker, d)).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScheduleError {
    RowLength {
        worker: u64,
        expected: usize,
        got: usize,
    },
    BadCompactDay {
        day: usize,
        offset: u64,
        count: u64,
        workers: u64,
    },
}

impl fmt::Display for ScheduleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScheduleError::RowLength {
                worker,
                expected,
                got,
            } => write!(f, "row of worker {worker} has {got} days, expected {expected}"),
            ScheduleError::BadCompactDay {
                day,
                offset,
                count,
                workers,
            } => write!(
                f,
                "compact day {day} (offset {offset}, count {count}) invalid for {workers} workers"
            ),
        }
    }
}

impl std::error::Error for ScheduleError {}
