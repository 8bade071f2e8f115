//! File formats: JSON instances (with optional bounds and exact-request
//! shorthand), schedules as row strings or compact per-day records, and
//! certificates as vertex-named flow triples.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::certify::{CertNode, CertificateGraph, FlowCertificate, StateVertex};
use crate::instance::{BoundsSpec, DayRequest, Instance, ValidationError};
use crate::schedule::{CompactDay, Schedule, ScheduleError, Shift};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub days: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub requests: Option<Vec<RequestEntry>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct BoundsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lw: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uw: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uo: Option<usize>,
    #[serde(rename = "Uw", default, skip_serializing_if = "Option::is_none")]
    pub total_work: Option<usize>,
    #[serde(rename = "Uo", default, skip_serializing_if = "Option::is_none")]
    pub total_off: Option<usize>,
}

/// A request is either an exact headcount or a `[min, max]` interval.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RequestEntry {
    Exact(u64),
    Interval([u64; 2]),
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<Instance, IoError> {
        self.build(false)
    }

    /// Like [`Self::into_instance`] but a missing worker count defaults to
    /// the largest request bound, for workforce optimization inputs.
    pub fn into_instance_defaulting_workers(self) -> Result<Instance, IoError> {
        self.build(true)
    }

    fn build(self, default_workers: bool) -> Result<Instance, IoError> {
        let workers = match self.workers {
            Some(n) => n,
            None if default_workers => match &self.requests {
                Some(entries) => entries
                    .iter()
                    .map(|e| match e {
                        RequestEntry::Exact(v) => *v,
                        RequestEntry::Interval([lo, hi]) => (*lo).max(*hi),
                    })
                    .max()
                    .unwrap_or(0),
                None => return Err(IoError::MissingWorkers),
            },
            None => return Err(IoError::MissingWorkers),
        };
        let spec = self.bounds.map(BoundsFile::into_spec).unwrap_or_default();
        let bounds = spec.resolve(self.days).map_err(IoError::Validation)?;
        let requests = match self.requests {
            None => vec![DayRequest { min: 0, max: workers }; self.days],
            Some(entries) => entries
                .into_iter()
                .map(|e| match e {
                    RequestEntry::Exact(v) => DayRequest::exact(v),
                    RequestEntry::Interval([min, max]) => DayRequest { min, max },
                })
                .collect(),
        };
        Instance::new(self.days, workers, bounds, requests).map_err(IoError::Validation)
    }

    pub fn from_instance(instance: &Instance) -> Self {
        let b = instance.bounds();
        InstanceFile {
            days: instance.days(),
            workers: Some(instance.workers()),
            bounds: Some(BoundsFile {
                lw: Some(b.work_min),
                uw: Some(b.work_max),
                lo: Some(b.off_min),
                uo: Some(b.off_max),
                total_work: Some(b.total_work_max),
                total_off: Some(b.total_off_max),
            }),
            requests: Some(
                instance
                    .requests()
                    .iter()
                    .map(|r| {
                        if r.is_exact() {
                            RequestEntry::Exact(r.min)
                        } else {
                            RequestEntry::Interval([r.min, r.max])
                        }
                    })
                    .collect(),
            ),
        }
    }
}

impl BoundsFile {
    fn into_spec(self) -> BoundsSpec {
        BoundsSpec {
            work_min: self.lw,
            work_max: self.uw,
            off_min: self.lo,
            off_max: self.uo,
            total_work_max: self.total_work,
            total_off_max: self.total_off,
        }
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, IoError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(IoError::Parse)?;
    file.into_instance()
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance, IoError> {
    parse_instance(&std::fs::read_to_string(path).map_err(IoError::Io)?)
}

pub fn instance_to_json(instance: &Instance) -> String {
    serde_json::to_string_pretty(&InstanceFile::from_instance(instance))
        .expect("instance serializes")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScheduleFile {
    pub workers: u64,
    pub days: usize,
    /// One `'0'`/`'1'` string per worker.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compact: Option<Vec<CompactDayFile>>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CompactDayFile {
    pub day: usize,
    pub offset: u64,
    pub count: u64,
}

impl ScheduleFile {
    pub fn into_schedule(self) -> Result<Schedule, IoError> {
        match (self.rows, self.compact) {
            (Some(rows), None) => {
                if rows.len() as u64 != self.workers {
                    return Err(IoError::BadSchedule(format!(
                        "{} rows for {} workers",
                        rows.len(),
                        self.workers
                    )));
                }
                let mut parsed = Vec::with_capacity(rows.len());
                for (w, row) in rows.iter().enumerate() {
                    let mut bits = Vec::with_capacity(row.len());
                    for c in row.chars() {
                        match c {
                            '0' => bits.push(false),
                            '1' => bits.push(true),
                            other => {
                                return Err(IoError::BadSchedule(format!(
                                    "row {}: unexpected character {other:?}",
                                    w + 1
                                )))
                            }
                        }
                    }
                    parsed.push(bits);
                }
                Schedule::from_rows(self.days, parsed).map_err(IoError::Schedule)
            }
            (None, Some(compact)) => {
                if compact.len() != self.days {
                    return Err(IoError::BadSchedule(format!(
                        "{} compact records for {} days",
                        compact.len(),
                        self.days
                    )));
                }
                let mut days = vec![CompactDay { offset: 0, count: 0 }; self.days];
                let mut seen = vec![false; self.days];
                for record in compact {
                    if record.day < 1 || record.day > self.days {
                        return Err(IoError::BadSchedule(format!(
                            "record for day {} outside 1..={}",
                            record.day, self.days
                        )));
                    }
                    if seen[record.day - 1] {
                        return Err(IoError::BadSchedule(format!(
                            "duplicate record for day {}",
                            record.day
                        )));
                    }
                    seen[record.day - 1] = true;
                    days[record.day - 1] = CompactDay {
                        offset: record.offset,
                        count: record.count,
                    };
                }
                Schedule::from_compact(self.workers, days).map_err(IoError::Schedule)
            }
            _ => Err(IoError::BadSchedule(
                "expected exactly one of `rows` and `compact`".into(),
            )),
        }
    }

    pub fn dense(schedule: &Schedule) -> Self {
        let rows = schedule
            .to_rows()
            .into_iter()
            .map(|row| row.into_iter().map(|b| if b { '1' } else { '0' }).collect())
            .collect();
        ScheduleFile {
            workers: schedule.workers(),
            days: schedule.days(),
            rows: Some(rows),
            compact: None,
        }
    }

    /// Fails when some day's duty set is not a cyclic interval.
    pub fn compact(schedule: &Schedule) -> Option<Self> {
        let days = schedule.compact_days()?;
        Some(ScheduleFile {
            workers: schedule.workers(),
            days: schedule.days(),
            rows: None,
            compact: Some(
                days.iter()
                    .enumerate()
                    .map(|(i, d)| CompactDayFile {
                        day: i + 1,
                        offset: d.offset,
                        count: d.count,
                    })
                    .collect(),
            ),
        })
    }
}

pub fn parse_schedule(text: &str) -> Result<Schedule, IoError> {
    let file: ScheduleFile = serde_json::from_str(text).map_err(IoError::Parse)?;
    file.into_schedule()
}

pub fn read_schedule(path: impl AsRef<Path>) -> Result<Schedule, IoError> {
    parse_schedule(&std::fs::read_to_string(path).map_err(IoError::Io)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateFile {
    pub workers: u64,
    pub days: usize,
    pub edges: Vec<CertificateEdgeFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateEdgeFile {
    pub tail: VertexFile,
    pub head: VertexFile,
    pub flow: u64,
}

/// `"s"`, `"t"`, or `[day, "ON"|"OFF", run, worked]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexFile {
    Sentinel(String),
    State(u32, String, u32, u32),
}

impl VertexFile {
    fn into_node(self) -> Result<CertNode, IoError> {
        match self {
            VertexFile::Sentinel(s) if s == "s" => Ok(CertNode::Source),
            VertexFile::Sentinel(s) if s == "t" => Ok(CertNode::Sink),
            VertexFile::Sentinel(s) => Err(IoError::BadCertificate(format!(
                "unknown sentinel vertex {s:?}"
            ))),
            VertexFile::State(day, shift, run, worked) => {
                let shift = match shift.as_str() {
                    "ON" => Shift::On,
                    "OFF" => Shift::Off,
                    other => {
                        return Err(IoError::BadCertificate(format!(
                            "unknown shift {other:?}"
                        )))
                    }
                };
                Ok(CertNode::State(StateVertex {
                    day,
                    shift,
                    run,
                    worked,
                }))
            }
        }
    }

    fn from_node(node: &CertNode) -> Self {
        match node {
            CertNode::Source => VertexFile::Sentinel("s".into()),
            CertNode::Sink => VertexFile::Sentinel("t".into()),
            CertNode::State(v) => VertexFile::State(
                v.day,
                match v.shift {
                    Shift::On => "ON".into(),
                    Shift::Off => "OFF".into(),
                },
                v.run,
                v.worked,
            ),
        }
    }
}

/// Resolves a certificate file against the graph it claims to describe.
/// Unknown vertices or edges are structural errors, distinct from a flow
/// that merely fails verification.
pub fn certificate_from_file(
    file: CertificateFile,
    graph: &CertificateGraph,
) -> Result<FlowCertificate, IoError> {
    let mut flows = vec![0u64; graph.edge_count()];
    let mut seen = vec![false; graph.edge_count()];
    for edge in file.edges {
        let tail_node = edge.tail.into_node()?;
        let head_node = edge.head.into_node()?;
        let tail = graph
            .node_index(&tail_node)
            .ok_or_else(|| IoError::BadCertificate(format!("unknown vertex {tail_node}")))?;
        let head = graph
            .node_index(&head_node)
            .ok_or_else(|| IoError::BadCertificate(format!("unknown vertex {head_node}")))?;
        let index = graph.edge_index(tail, head).ok_or_else(|| {
            IoError::BadCertificate(format!("no edge {tail_node} -> {head_node}"))
        })?;
        if seen[index] {
            return Err(IoError::BadCertificate(format!(
                "duplicate edge {tail_node} -> {head_node}"
            )));
        }
        seen[index] = true;
        flows[index] = edge.flow;
    }
    Ok(FlowCertificate { flows })
}

/// Emits the positive-flow edges with printable vertex names.
pub fn certificate_to_file(
    graph: &CertificateGraph,
    flow: &FlowCertificate,
    workers: u64,
) -> CertificateFile {
    let edges = graph
        .edges()
        .iter()
        .zip(&flow.flows)
        .filter(|(_, &f)| f > 0)
        .map(|(&(tail, head), &f)| CertificateEdgeFile {
            tail: VertexFile::from_node(&graph.nodes()[tail as usize]),
            head: VertexFile::from_node(&graph.nodes()[head as usize]),
            flow: f,
        })
        .collect();
    CertificateFile {
        workers,
        days: graph.days(),
        edges,
    }
}

#[derive(Debug)]
pub enum IoError {
    Io(std::io::Error),
    Parse(serde_json::Error),
    Validation(ValidationError),
    Schedule(ScheduleError),
    MissingWorkers,
    BadSchedule(String),
    BadCertificate(String),
}

impl fmt::Display for IoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IoError::Io(e) => write!(f, "{e}"),
            IoError::Parse(e) => write!(f, "{e}"),
            IoError::Validation(e) => write!(f, "{e}"),
            IoError::Schedule(e) => write!(f, "{e}"),
            IoError::MissingWorkers => write!(f, "instance file is missing `workers`"),
            IoError::BadSchedule(reason) => write!(f, "schedule file: {reason}"),
            IoError::BadCertificate(reason) => write!(f, "certificate file: {reason}"),
        }
    }
}

impl std::error::Error for IoError {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::build_certificate_graph;

    #[test]
    fn parses_mixed_requests_and_partial_bounds() {
        let text = r#"{
            "days": 4,
            "workers": 2,
            "bounds": {"uw": 2, "Uo": 3},
            "requests": [1, [0, 2], 2, [1, 1]]
        }"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.days(), 4);
        assert_eq!(inst.workers(), 2);
        assert_eq!(inst.bounds().work_max, 2);
        assert_eq!(inst.bounds().total_off_max, 3);
        assert_eq!(inst.bounds().work_min, 1);
        assert_eq!(inst.request(1), DayRequest::exact(1));
        assert_eq!(inst.request(2), DayRequest { min: 0, max: 2 });
    }

    #[test]
    fn missing_requests_default_to_free() {
        let inst = parse_instance(r#"{"days": 3, "workers": 2}"#).unwrap();
        assert_eq!(inst.request(2), DayRequest { min: 0, max: 2 });
    }

    #[test]
    fn workers_are_required_unless_defaulted() {
        let text = r#"{"days": 2, "requests": [[1, 3], 2]}"#;
        assert!(matches!(parse_instance(text), Err(IoError::MissingWorkers)));
        let file: InstanceFile = serde_json::from_str(text).unwrap();
        let inst = file.into_instance_defaulting_workers().unwrap();
        assert_eq!(inst.workers(), 3);
    }

    #[test]
    fn out_of_range_bounds_are_validation_errors() {
        let text = r#"{"days": 2, "workers": 1, "bounds": {"uw": 5}}"#;
        assert!(matches!(parse_instance(text), Err(IoError::Validation(_))));
    }

    #[test]
    fn instance_round_trips_through_json() {
        let text = r#"{
            "days": 3,
            "workers": 2,
            "bounds": {"lw": 2},
            "requests": [[0, 2], 1, 0]
        }"#;
        let inst = parse_instance(text).unwrap();
        let again = parse_instance(&instance_to_json(&inst)).unwrap();
        assert_eq!(inst, again);
    }

    #[test]
    fn schedule_rows_round_trip() {
        let text = r#"{"workers": 2, "days": 3, "rows": ["101", "010"]}"#;
        let s = parse_schedule(text).unwrap();
        assert!(s.is_on(1, 1) && s.is_on(2, 2) && s.is_on(1, 3));
        let json = serde_json::to_string(&ScheduleFile::dense(&s)).unwrap();
        assert_eq!(parse_schedule(&json).unwrap().to_rows(), s.to_rows());
    }

    #[test]
    fn schedule_compact_round_trip() {
        let text = r#"{"workers": 3, "days": 2, "compact": [
            {"day": 1, "offset": 2, "count": 2},
            {"day": 2, "offset": 0, "count": 0}
        ]}"#;
        let s = parse_schedule(text).unwrap();
        assert!(s.is_on(3, 1) && s.is_on(1, 1) && !s.is_on(2, 1));
        let file = ScheduleFile::compact(&s).unwrap();
        let json = serde_json::to_string(&file).unwrap();
        assert_eq!(parse_schedule(&json).unwrap().to_rows(), s.to_rows());
    }

    #[test]
    fn malformed_schedules_are_rejected() {
        assert!(parse_schedule(r#"{"workers": 2, "days": 3, "rows": ["101"]}"#).is_err());
        assert!(parse_schedule(r#"{"workers": 1, "days": 1, "rows": ["2"]}"#).is_err());
        assert!(parse_schedule(r#"{"workers": 1, "days": 1}"#).is_err());
        assert!(parse_schedule(
            r#"{"workers": 1, "days": 2, "compact": [
                {"day": 1, "offset": 0, "count": 1},
                {"day": 1, "offset": 0, "count": 1}
            ]}"#
        )
        .is_err());
    }

    #[test]
    fn certificate_files_resolve_against_the_graph() {
        let inst = parse_instance(r#"{"days": 2, "workers": 1}"#).unwrap();
        let graph = build_certificate_graph(&inst);
        let schedule = parse_schedule(r#"{"workers": 1, "days": 2, "rows": ["10"]}"#).unwrap();
        let flow = graph.schedule_to_flow(&schedule).unwrap();
        let file = certificate_to_file(&graph, &flow, inst.workers());
        assert_eq!(file.edges.len(), 3);
        let back = certificate_from_file(file, &graph).unwrap();
        assert_eq!(back, flow);
    }

    #[test]
    fn unknown_certificate_edges_are_structural_errors() {
        let inst = parse_instance(r#"{"days": 2, "workers": 1, "bounds": {"lw": 2}}"#).unwrap();
        let graph = build_certificate_graph(&inst);
        // ON -> OFF switch after one day is not an edge under lw = 2.
        let file = CertificateFile {
            workers: 1,
            days: 2,
            edges: vec![CertificateEdgeFile {
                tail: VertexFile::State(1, "ON".into(), 1, 1),
                head: VertexFile::State(2, "OFF".into(), 1, 1),
                flow: 1,
            }],
        };
        assert!(matches!(
            certificate_from_file(file, &graph),
            Err(IoError::BadCertificate(_))
        ));
    }
}
