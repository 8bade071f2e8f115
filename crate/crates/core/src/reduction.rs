//! Hard-instance generators: encode restricted 3-partition inputs as
//! scheduling instances whose feasibility answers the partition question,
//! and extract the partition back out of a feasible schedule.

use std::fmt;

use crate::instance::{Bounds, Instance};
use crate::schedule::Schedule;

/// A restricted 3-partition input: `3m` values, each strictly between a
/// quarter and half of the group sum `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreePartition {
    groups: usize,
    values: Vec<u64>,
    group_sum: u64,
}

impl ThreePartition {
    pub fn new(groups: usize, values: Vec<u64>) -> Result<Self, ReductionError> {
        if groups == 0 {
            return Err(ReductionError::InvalidInput("need at least one group".into()));
        }
        if values.len() != 3 * groups {
            return Err(ReductionError::InvalidInput(format!(
                "expected {} values, got {}",
                3 * groups,
                values.len()
            )));
        }
        let sum: u64 = values.iter().sum();
        if !sum.is_multiple_of(groups as u64) {
            return Err(ReductionError::InvalidInput(format!(
                "total {sum} is not divisible by {groups} groups"
            )));
        }
        let group_sum = sum / groups as u64;
        for &a in &values {
            if 4 * a <= group_sum || 2 * a >= group_sum {
                return Err(ReductionError::InvalidInput(format!(
                    "value {a} outside the open interval ({}/4, {}/2)",
                    group_sum, group_sum
                )));
            }
        }
        Ok(ThreePartition {
            groups,
            values,
            group_sum,
        })
    }

    pub fn groups(&self) -> usize {
        self.groups
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Group sum `T`.
    pub fn group_sum(&self) -> u64 {
        self.group_sum
    }

    /// The same input with every value multiplied by `factor`; partition
    /// answers are unchanged.
    pub fn scaled(&self, factor: u64) -> ThreePartition {
        ThreePartition {
            groups: self.groups,
            values: self.values.iter().map(|&a| a * factor).collect(),
            group_sum: self.group_sum * factor,
        }
    }
}

/// Which bound pair carries the hardness in the generated instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionVariant {
    /// Exact 0/1 requests; `Uw` and `lw` nontrivial.
    TotalWorkWorkMin,
    /// Exact N/N-1 requests; `Uw` and `lo` nontrivial.
    TotalWorkOffMin,
    /// Exact N/N-1 requests; `Uo` and `lo` nontrivial.
    TotalOffOffMin,
    /// Exact 0/1 requests; `Uo` and `lw` nontrivial.
    TotalOffWorkMin,
    /// Upper requests only; `Uw`, `uo` and `lw` nontrivial.
    OneSidedWorkMin,
    /// Upper requests only; `Uw`, `uo` and `lo` nontrivial.
    OneSidedOffMin,
}

impl ReductionVariant {
    pub const EXACT: [ReductionVariant; 4] = [
        ReductionVariant::TotalWorkWorkMin,
        ReductionVariant::TotalWorkOffMin,
        ReductionVariant::TotalOffOffMin,
        ReductionVariant::TotalOffWorkMin,
    ];

    /// Do the generated requests mark values by duty days (as opposed to
    /// days off)?
    fn values_are_work(&self) -> bool {
        matches!(
            self,
            ReductionVariant::TotalWorkWorkMin | ReductionVariant::TotalOffWorkMin
        )
    }
}

impl fmt::Display for ReductionVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ReductionVariant::TotalWorkWorkMin => "uw-lw",
            ReductionVariant::TotalWorkOffMin => "uw-lo",
            ReductionVariant::TotalOffOffMin => "uo-lo",
            ReductionVariant::TotalOffWorkMin => "uo-lw",
            ReductionVariant::OneSidedWorkMin => "onesided-uw-uo-lw",
            ReductionVariant::OneSidedOffMin => "onesided-uw-uo-lo",
        };
        write!(f, "{name}")
    }
}

/// 1-based day spans `(first, last)` of the encoded values in an
/// exact-request instance.
pub fn value_spans(tp: &ThreePartition) -> Vec<(usize, usize)> {
    let mut spans = Vec::with_capacity(tp.values.len());
    let mut cursor = 0usize;
    for &a in &tp.values {
        spans.push((cursor + 1, cursor + a as usize));
        cursor += a as usize + 1;
    }
    spans
}

/// Encodes the values in unary with a separator day after each: the
/// instance is feasible iff the partition exists. Value days request one
/// worker (or all but one, when values are marked by days off).
pub fn encode_exact(
    tp: &ThreePartition,
    variant: ReductionVariant,
) -> Result<Instance, ReductionError> {
    if !ReductionVariant::EXACT.contains(&variant) {
        return Err(ReductionError::WrongVariant { variant });
    }
    let m = tp.groups as u64;
    let t = tp.group_sum;
    let days = (m * t) as usize + 3 * tp.groups;
    let quarter = t.div_ceil(4) as usize;

    let separators: Vec<usize> = {
        let mut cursor = 0usize;
        tp.values
            .iter()
            .map(|&a| {
                cursor += a as usize + 1;
                cursor
            })
            .collect()
    };
    let mut requests = vec![if variant.values_are_work() { 1 } else { m - 1 }; days];
    for &s in &separators {
        requests[s - 1] = if variant.values_are_work() { 0 } else { m };
    }

    let mut bounds = Bounds::trivial(days);
    match variant {
        ReductionVariant::TotalWorkWorkMin => {
            bounds.total_work_max = t as usize;
            bounds.work_min = quarter;
        }
        ReductionVariant::TotalWorkOffMin => {
            bounds.total_work_max = days - t as usize;
            bounds.off_min = quarter;
        }
        ReductionVariant::TotalOffOffMin => {
            bounds.total_off_max = t as usize;
            bounds.off_min = quarter;
        }
        ReductionVariant::TotalOffWorkMin => {
            bounds.total_off_max = days - t as usize;
            bounds.work_min = quarter;
        }
        _ => unreachable!(),
    }
    Instance::with_exact_requests(days, m, bounds, requests)
        .map_err(|e| ReductionError::InvalidInput(e.to_string()))
}

/// The scale factor that makes the one-sided encodings' divisibility
/// preconditions hold.
fn onesided_scale(variant: ReductionVariant, group_sum: u64) -> u64 {
    match variant {
        ReductionVariant::OneSidedWorkMin => match group_sum % 4 {
            0 => 1,
            2 => 2,
            _ => 4,
        },
        ReductionVariant::OneSidedOffMin => {
            if group_sum.is_multiple_of(2) {
                1
            } else {
                2
            }
        }
        _ => 1,
    }
}

/// Encodes the values with upper request bounds only (`rl = 0`): request
/// blocks force one special worker through each value while the others
/// work a fixed pattern. Values are pre-scaled so the block arithmetic
/// divides evenly; the partition answer is unchanged by scaling.
pub fn encode_onesided(
    tp: &ThreePartition,
    variant: ReductionVariant,
) -> Result<Instance, ReductionError> {
    let scale = onesided_scale(variant, tp.group_sum);
    let tp = tp.scaled(scale);
    let m = tp.groups as u64;
    let t = tp.group_sum;

    let cores: Vec<Vec<u64>> = match variant {
        ReductionVariant::OneSidedWorkMin => {
            if !t.is_multiple_of(4) {
                return Err(ReductionError::InvalidInput(
                    "group sum not divisible by four after scaling".into(),
                ));
            }
            let quarter = t / 4;
            tp.values
                .iter()
                .map(|&a| {
                    let mut seq = Vec::new();
                    let block = |seq: &mut Vec<u64>, len: u64, v: u64| {
                        seq.extend(std::iter::repeat_n(v, len as usize));
                    };
                    block(&mut seq, quarter, m); // everyone on duty
                    block(&mut seq, quarter, 1); // the special worker only
                    block(&mut seq, quarter, 0);
                    block(&mut seq, quarter, m - 1); // everyone else
                    block(&mut seq, a, 1); // the value itself
                    block(&mut seq, quarter, m - 1);
                    block(&mut seq, quarter, 0);
                    block(&mut seq, quarter, 1);
                    block(&mut seq, quarter, m);
                    seq
                })
                .collect()
        }
        ReductionVariant::OneSidedOffMin => {
            if !t.is_multiple_of(2) {
                return Err(ReductionError::InvalidInput(
                    "group sum not even after scaling".into(),
                ));
            }
            let off_max = 3 * t / 2 + 1;
            tp.values
                .iter()
                .map(|&a| {
                    let mut seq = Vec::new();
                    seq.push(m); // everyone on duty
                    seq.push(1); // the special worker only
                    seq.extend(std::iter::repeat_n(0, (t - 1) as usize));
                    seq.push(m - 1); // everyone else
                    seq.extend(std::iter::repeat_n(0, (off_max - t) as usize));
                    seq.extend(std::iter::repeat_n(1, a as usize)); // the value
                    seq.extend(std::iter::repeat_n(0, (off_max - t) as usize));
                    seq.push(m - 1);
                    seq.extend(std::iter::repeat_n(0, (t - 1) as usize));
                    seq.push(1);
                    seq.push(m);
                    seq
                })
                .collect()
        }
        _ => return Err(ReductionError::WrongVariant { variant }),
    };

    // Join the per-value cores with single maximal zero runs: the shared
    // run is exactly as long as either side's trailing or leading zeros.
    let gap = match variant {
        ReductionVariant::OneSidedWorkMin => (t / 2) as usize,
        _ => (3 * t / 2 + 1) as usize,
    };
    let mut upper = vec![0u64; gap];
    for core in &cores {
        upper.extend_from_slice(core);
        upper.extend(std::iter::repeat_n(0, gap));
    }

    let days = upper.len();
    let mut bounds = Bounds::trivial(days);
    match variant {
        ReductionVariant::OneSidedWorkMin => {
            bounds.work_min = (t / 4) as usize;
            bounds.off_max = (t / 2) as usize;
            bounds.total_work_max = (3 * m * t + t) as usize;
        }
        _ => {
            bounds.off_min = t as usize;
            bounds.off_max = (3 * t / 2 + 1) as usize;
            bounds.total_work_max = (12 * m + t) as usize;
        }
    }
    let requests = upper
        .into_iter()
        .map(|max| crate::instance::DayRequest { min: 0, max })
        .collect();
    Instance::new(days, m, bounds, requests)
        .map_err(|e| ReductionError::InvalidInput(e.to_string()))
}

/// Reads the partition back out of a feasible schedule for an
/// exact-request encoding: each value span is covered by exactly one
/// worker, and each worker's values form a group summing to `T`.
pub fn extract_partition(
    tp: &ThreePartition,
    variant: ReductionVariant,
    schedule: &Schedule,
) -> Result<Vec<Vec<u64>>, ReductionError> {
    if !ReductionVariant::EXACT.contains(&variant) {
        return Err(ReductionError::WrongVariant { variant });
    }
    let covered = |worker: u64, day: usize| {
        if variant.values_are_work() {
            schedule.is_on(worker, day)
        } else {
            !schedule.is_on(worker, day)
        }
    };
    let workers = tp.groups as u64;
    let mut groups: Vec<Vec<u64>> = vec![Vec::new(); tp.groups];
    for (index, &(first, last)) in value_spans(tp).iter().enumerate() {
        let mut owner = None;
        for w in 1..=workers {
            if covered(w, first) {
                if owner.is_some() {
                    return Err(ReductionError::SharedValue { index });
                }
                owner = Some(w);
            }
        }
        let Some(owner) = owner else {
            return Err(ReductionError::UncoveredValue { index });
        };
        if !(first..=last).all(|d| covered(owner, d)) {
            return Err(ReductionError::SplitValue { index });
        }
        groups[owner as usize - 1].push(tp.values[index]);
    }
    for (w, group) in groups.iter().enumerate() {
        let sum: u64 = group.iter().sum();
        if group.len() != 3 || sum != tp.group_sum {
            return Err(ReductionError::BadGroup {
                worker: w as u64 + 1,
                size: group.len(),
                sum,
            });
        }
    }
    Ok(groups)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionError {
    InvalidInput(String),
    WrongVariant { variant: ReductionVariant },
    UncoveredValue { index: usize },
    SharedValue { index: usize },
    SplitValue { index: usize },
    BadGroup { worker: u64, size: usize, sum: u64 },
}

impl fmt::Display for ReductionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionError::InvalidInput(reason) => write!(f, "{reason}"),
            ReductionError::WrongVariant { variant } => {
                write!(f, "operation does not apply to variant {variant}")
            }
            ReductionError::UncoveredValue { index } => {
                write!(f, "value {index} is covered by no worker")
            }
            ReductionError::SharedValue { index } => {
                write!(f, "value {index} is covered by more than one worker")
            }
            ReductionError::SplitValue { index } => {
                write!(f, "value {index} is split between workers")
            }
            ReductionError::BadGroup { worker, size, sum } => write!(
                f,
                "worker {worker} collects {size} values summing to {sum}"
            ),
        }
    }
}

impl std::error::Error for ReductionError {}
