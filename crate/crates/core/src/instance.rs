//! Problem instances: planning horizon, workforce size, period bounds and
//! per-day headcount requests.

use std::fmt;

/// Hard cap on `workers * days` so that all derived quantities (prefix
/// request sums, potential values, cycle weights) stay well inside `i64`.
pub const MAX_CELLS: u64 = 1 << 48;

/// Fully resolved period bounds. Construct via [`BoundsSpec::resolve`] to
/// apply the defaults that make absent bounds trivially satisfied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Minimum length of a work period (`lw`).
    pub work_min: usize,
    /// Maximum length of a work period (`uw`).
    pub work_max: usize,
    /// Minimum length of an off period (`lo`).
    pub off_min: usize,
    /// Maximum length of an off period (`uo`).
    pub off_max: usize,
    /// Maximum total work days per worker (`Uw`).
    pub total_work_max: usize,
    /// Maximum total days off per worker (`Uo`).
    pub total_off_max: usize,
}

impl Bounds {
    /// All bounds at their trivial values for a horizon of `days`: period
    /// minima 1, every maximum equal to `days`.
    pub fn trivial(days: usize) -> Self {
        Bounds {
            work_min: 1,
            work_max: days,
            off_min: 1,
            off_max: days,
            total_work_max: days,
            total_off_max: days,
        }
    }
}

/// Partial bounds as they appear in input files; `None` means "use the
/// trivial default".
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BoundsSpec {
    pub work_min: Option<usize>,
    pub work_max: Option<usize>,
    pub off_min: Option<usize>,
    pub off_max: Option<usize>,
    pub total_work_max: Option<usize>,
    pub total_off_max: Option<usize>,
}

impl BoundsSpec {
    /// Fills in defaults and validates every bound against the horizon.
    pub fn resolve(&self, days: usize) -> Result<Bounds, ValidationError> {
        if days == 0 {
            return Err(ValidationError::NoDays);
        }
        let pick = |name: &'static str, v: Option<usize>, default: usize| match v {
            None => Ok(default),
            Some(x) if x >= 1 && x <= days => Ok(x),
            Some(x) => Err(ValidationError::BoundOutOfRange {
                bound: name,
                value: x,
                days,
            }),
        };
        let bounds = Bounds {
            work_min: pick("lw", self.work_min, 1)?,
            work_max: pick("uw", self.work_max, days)?,
            off_min: pick("lo", self.off_min, 1)?,
            off_max: pick("uo", self.off_max, days)?,
            total_work_max: pick("Uw", self.total_work_max, days)?,
            total_off_max: pick("Uo", self.total_off_max, days)?,
        };
        bounds.validate(days)?;
        Ok(bounds)
    }
}

impl Bounds {
    pub fn validate(&self, days: usize) -> Result<(), ValidationError> {
        let in_range = |name: &'static str, v: usize| {
            if v >= 1 && v <= days {
                Ok(())
            } else {
                Err(ValidationError::BoundOutOfRange {
                    bound: name,
                    value: v,
                    days,
                })
            }
        };
        in_range("lw", self.work_min)?;
        in_range("uw", self.work_max)?;
        in_range("lo", self.off_min)?;
        in_range("uo", self.off_max)?;
        in_range("Uw", self.total_work_max)?;
        in_range("Uo", self.total_off_max)?;
        if self.work_min > self.work_max {
            return Err(ValidationError::BoundOrder {
                lower: "lw",
                upper: "uw",
            });
        }
        if self.off_min > self.off_max {
            return Err(ValidationError::BoundOrder {
                lower: "lo",
                upper: "uo",
            });
        }
        Ok(())
    }
}

/// Admissible headcount range for one day.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DayRequest {
    pub min: u64,
    pub max: u64,
}

impl DayRequest {
    pub fn exact(value: u64) -> Self {
        DayRequest {
            min: value,
            max: value,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.min == self.max
    }
}

/// A validated scheduling instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    days: usize,
    workers: u64,
    bounds: Bounds,
    requests: Vec<DayRequest>,
}

impl Instance {
    pub fn new(
        days: usize,
        workers: u64,
        bounds: Bounds,
        requests: Vec<DayRequest>,
    ) -> Result<Self, ValidationError> {
        if days == 0 {
            return Err(ValidationError::NoDays);
        }
        bounds.validate(days)?;
        if (days as u64).checked_mul(workers).is_none_or(|c| c > MAX_CELLS) {
            return Err(ValidationError::TooLarge { days, workers });
        }
        if requests.len() != days {
            return Err(ValidationError::RequestCount {
                expected: days,
                got: requests.len(),
            });
        }
        for (i, r) in requests.iter().enumerate() {
            if r.min > r.max || r.max > workers {
                return Err(ValidationError::RequestOutOfRange {
                    day: i + 1,
                    min: r.min,
                    max: r.max,
                    workers,
                });
            }
        }
        Ok(Instance {
            days,
            workers,
            bounds,
            requests,
        })
    }

    /// Convenience constructor for instances with exact per-day requests.
    pub fn with_exact_requests(
        days: usize,
        workers: u64,
        bounds: Bounds,
        requests: Vec<u64>,
    ) -> Result<Self, ValidationError> {
        let requests = requests.into_iter().map(DayRequest::exact).collect();
        Instance::new(days, workers, bounds, requests)
    }

    pub fn days(&self) -> usize {
        self.days
    }

    pub fn workers(&self) -> u64 {
        self.workers
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn requests(&self) -> &[DayRequest] {
        &self.requests
    }

    /// Request range of a 1-based day.
    pub fn request(&self, day: usize) -> DayRequest {
        self.requests[day - 1]
    }

    pub fn is_exact(&self) -> bool {
        self.requests.iter().all(DayRequest::is_exact)
    }

    /// The exact per-day requests, if every request interval is degenerate.
    pub fn exact_requests(&self) -> Option<Vec<u64>> {
        self.is_exact()
            .then(|| self.requests.iter().map(|r| r.min).collect())
    }

    /// Same instance with one bound replaced; fails if the result is invalid.
    pub fn with_bounds(&self, bounds: Bounds) -> Result<Self, ValidationError> {
        Instance::new(self.days, self.workers, bounds, self.requests.clone())
    }

    /// Same instance with a different workforce size. Request maxima above
    /// the new count are clamped to it; a request minimum above the new
    /// count is kept as is, which makes the instance invalid on purpose:
    /// callers probing worker counts treat that as infeasible.
    pub fn with_workers_clamped(&self, workers: u64) -> Option<Self> {
        let mut requests = Vec::with_capacity(self.days);
        for r in &self.requests {
            if r.min > workers {
                return None;
            }
            requests.push(DayRequest {
                min: r.min,
                max: r.max.min(workers),
            });
        }
        Some(
            Instance::new(self.days, workers, self.bounds, requests)
                .expect("clamped instance is valid"),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationError {
    NoDays,
    BoundOutOfRange {
        bound: &'static str,
        value: usize,
        days: usize,
    },
    BoundOrder {
        lower: &'static str,
        upper: &'static str,
    },
    RequestCount {
        expected: usize,
        got: usize,
    },
    RequestOutOfRange {
        day: usize,
        min: u64,
        max: u64,
        workers: u64,
    },
    TooLarge {
        days: usize,
        workers: u64,
    },
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationError::NoDays => write!(f, "instance must have at least one day"),
            ValidationError::BoundOutOfRange { bound, value, days } => {
                write!(f, "bound {bound}={value} outside [1, {days}]")
            }
            ValidationError::BoundOrder { lower, upper } => {
                write!(f, "bound {lower} exceeds {upper}")
            }
            ValidationError::RequestCount { expected, got } => {
                write!(f, "expected {expected} day requests, got {got}")
            }
            ValidationError::RequestOutOfRange {
                day,
                min,
                max,
                workers,
            } => write!(
                f,
                "request [{min}, {max}] on day {day} violates 0 <= min <= max <= {workers}"
            ),
            ValidationError::TooLarge { days, workers } => {
                write!(f, "instance with {workers} workers over {days} days is too large")
            }
        }
    }
}

impl std::error::Error for ValidationError {}
