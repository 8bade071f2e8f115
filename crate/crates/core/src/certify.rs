//! The layered certificate graph: vertices describe a worker's situation on
//! one day (shift, length of the current period, duty days so far), edges
//! the legal day-to-day transitions. Single-worker plans are s-t paths, and
//! integral s-t flows of value N certify feasibility of a whole instance
//! once the per-day duty throughput matches the requests.

use std::collections::HashMap;
use std::fmt;

use crate::instance::Instance;
use crate::schedule::{Schedule, Shift};

/// One state vertex: on `day`, the worker is in the `run`-th day of the
/// current `shift` period and has worked `worked` days in total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateVertex {
    pub day: u32,
    pub shift: Shift,
    pub run: u32,
    pub worked: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertNode {
    Source,
    Sink,
    State(StateVertex),
}

impl fmt::Display for CertNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertNode::Source => write!(f, "s"),
            CertNode::Sink => write!(f, "t"),
            CertNode::State(v) => {
                let shift = match v.shift {
                    Shift::On => "ON",
                    Shift::Off => "OFF",
                };
                write!(f, "({}, {}, {}, {})", v.day, shift, v.run, v.worked)
            }
        }
    }
}

const SOURCE: u32 = 0;
const SINK: u32 = 1;

/// The certificate graph of one instance. Vertices and edges are sorted,
/// so edge indices are stable and path peeling is deterministic.
#[derive(Debug, Clone)]
pub struct CertificateGraph {
    days: usize,
    workers: u64,
    nodes: Vec<CertNode>,
    lookup: HashMap<StateVertex, u32>,
    /// Sorted lexicographically by (tail, head).
    edges: Vec<(u32, u32)>,
    /// Outgoing edge range of each node in `edges`.
    out_ranges: Vec<(u32, u32)>,
}

/// Integral flow on the edges of a [`CertificateGraph`], indexed like its
/// edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowCertificate {
    pub flows: Vec<u64>,
}

/// Builds the layered graph for the instance's bounds. States are pruned
/// to `run <= day` and `max(0, day - Uo) <= worked <= min(Uw, day)`; day 1
/// has exactly the two start states. Sink edges exist only where the final
/// period already meets its minimum length, so every s-t path is a valid
/// single-worker plan.
pub fn build_certificate_graph(instance: &Instance) -> CertificateGraph {
    let d = instance.days();
    let b = instance.bounds();

    let mut states = Vec::new();
    states.push(StateVertex { day: 1, shift: Shift::On, run: 1, worked: 1 });
    states.push(StateVertex { day: 1, shift: Shift::Off, run: 1, worked: 0 });
    for day in 2..=d as u32 {
        let worked_lo = (day as i64 - b.total_off_max as i64).max(0) as u32;
        let worked_hi = (b.total_work_max as u32).min(day);
        for shift in [Shift::On, Shift::Off] {
            let run_cap = match shift {
                Shift::On => b.work_max,
                Shift::Off => b.off_max,
            };
            for run in 1..=(run_cap as u32).min(day) {
                for worked in worked_lo..=worked_hi {
                    states.push(StateVertex { day, shift, run, worked });
                }
            }
        }
    }
    states.sort_unstable();

    let mut nodes = Vec::with_capacity(states.len() + 2);
    nodes.push(CertNode::Source);
    nodes.push(CertNode::Sink);
    let mut lookup = HashMap::with_capacity(states.len());
    for v in states {
        lookup.insert(v, nodes.len() as u32);
        nodes.push(CertNode::State(v));
    }

    let mut edges = Vec::new();
    for (idx, node) in nodes.iter().enumerate() {
        let CertNode::State(v) = node else { continue };
        if v.day == 1 {
            edges.push((SOURCE, idx as u32));
        }
        let run_min = match v.shift {
            Shift::On => b.work_min,
            Shift::Off => b.off_min,
        } as u32;
        if v.day as usize == d {
            if v.run >= run_min {
                edges.push((idx as u32, SINK));
            }
            continue;
        }
        // Stay in the period.
        let stay = StateVertex {
            day: v.day + 1,
            shift: v.shift,
            run: v.run + 1,
            worked: v.worked + (v.shift == Shift::On) as u32,
        };
        if let Some(&head) = lookup.get(&stay) {
            edges.push((idx as u32, head));
        }
        // Switch, if the period is long enough.
        if v.run >= run_min {
            let switched = match v.shift {
                Shift::On => Shift::Off,
                Shift::Off => Shift::On,
            };
            let switch = StateVertex {
                day: v.day + 1,
                shift: switched,
                run: 1,
                worked: v.worked + (switched == Shift::On) as u32,
            };
            if let Some(&head) = lookup.get(&switch) {
                edges.push((idx as u32, head));
            }
        }
    }
    edges.sort_unstable();

    let mut out_ranges = vec![(0u32, 0u32); nodes.len()];
    let mut i = 0;
    while i < edges.len() {
        let tail = edges[i].0 as usize;
        let start = i;
        while i < edges.len() && edges[i].0 as usize == tail {
            i += 1;
        }
        out_ranges[tail] = (start as u32, i as u32);
    }

    CertificateGraph {
        days: d,
        workers: instance.workers(),
        nodes,
        lookup,
        edges,
        out_ranges,
    }
}

impl CertificateGraph {
    pub fn days(&self) -> usize {
        self.days
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[CertNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn node_index(&self, node: &CertNode) -> Option<u32> {
        match node {
            CertNode::Source => Some(SOURCE),
            CertNode::Sink => Some(SINK),
            CertNode::State(v) => self.lookup.get(v).copied(),
        }
    }

    pub fn edge_index(&self, tail: u32, head: u32) -> Option<usize> {
        self.edges.binary_search(&(tail, head)).ok()
    }

    fn out_edges(&self, node: u32) -> std::ops::Range<usize> {
        let (a, b) = self.out_ranges[node as usize];
        a as usize..b as usize
    }

    /// Can a single worker get from day 1 to day D at all? With trivial
    /// requests this decides the whole instance: all workers may follow
    /// one path, and with no demand, zero workers are fine too.
    pub fn reaches_sink(&self) -> bool {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![SOURCE];
        seen[SOURCE as usize] = true;
        while let Some(v) = stack.pop() {
            if v == SINK {
                return true;
            }
            for e in self.out_edges(v) {
                let head = self.edges[e].1;
                if !seen[head as usize] {
                    seen[head as usize] = true;
                    stack.push(head);
                }
            }
        }
        false
    }

    /// Routes every worker's row along its state path and accumulates the
    /// flow. Fails on the first worker/day whose plan has no legal state or
    /// transition, i.e. violates a local or total bound.
    pub fn schedule_to_flow(&self, schedule: &Schedule) -> Result<FlowCertificate, CertifyError> {
        if schedule.days() != self.days || schedule.workers() != self.workers {
            return Err(CertifyError::DimensionMismatch {
                days: self.days,
                workers: self.workers,
            });
        }
        let mut flows = vec![0u64; self.edges.len()];
        for w in 1..=schedule.workers() {
            let mut run = 0u32;
            let mut worked = 0u32;
            let mut prev_on = false;
            let mut prev_idx = SOURCE;
            for day in 1..=self.days {
                let on = schedule.is_on(w, day);
                run = if day == 1 || on != prev_on { 1 } else { run + 1 };
                worked += on as u32;
                let state = StateVertex {
                    day: day as u32,
                    shift: if on { Shift::On } else { Shift::Off },
                    run,
                    worked,
                };
                let idx = *self
                    .lookup
                    .get(&state)
                    .ok_or(CertifyError::InfeasibleRow { worker: w, day })?;
                let edge = self
                    .edge_index(prev_idx, idx)
                    .ok_or(CertifyError::InfeasibleRow { worker: w, day })?;
                flows[edge] += 1;
                prev_on = on;
                prev_idx = idx;
            }
            let edge = self
                .edge_index(prev_idx, SINK)
                .ok_or(CertifyError::InfeasibleRow { worker: w, day: self.days })?;
            flows[edge] += 1;
        }
        Ok(FlowCertificate { flows })
    }

    /// Checks value, conservation and per-day duty throughput against the
    /// requests. Structural problems (wrong edge count) are errors; an
    /// exhaustive list of violations is returned otherwise.
    pub fn verify_certificate(
        &self,
        instance: &Instance,
        flow: &FlowCertificate,
    ) -> Result<Vec<CertificateIssue>, CertifyError> {
        if instance.days() != self.days || instance.workers() != self.workers {
            return Err(CertifyError::DimensionMismatch {
                days: self.days,
                workers: self.workers,
            });
        }
        if flow.flows.len() != self.edges.len() {
            return Err(CertifyError::FlowShape {
                expected: self.edges.len(),
                got: flow.flows.len(),
            });
        }

        let mut issues = Vec::new();
        let mut inflow = vec![0u64; self.nodes.len()];
        let mut outflow = vec![0u64; self.nodes.len()];
        for (e, &(tail, head)) in self.edges.iter().enumerate() {
            outflow[tail as usize] += flow.flows[e];
            inflow[head as usize] += flow.flows[e];
        }

        if outflow[SOURCE as usize] != self.workers {
            issues.push(CertificateIssue::Value {
                got: outflow[SOURCE as usize],
                want: self.workers,
            });
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if let CertNode::State(v) = node {
                if inflow[i] != outflow[i] {
                    issues.push(CertificateIssue::Conservation {
                        node: *v,
                        inflow: inflow[i],
                        outflow: outflow[i],
                    });
                }
            }
        }

        let mut duty = vec![0u64; self.days + 1];
        for (i, node) in self.nodes.iter().enumerate() {
            if let CertNode::State(v) = node {
                if v.shift == Shift::On {
                    duty[v.day as usize] += inflow[i];
                }
            }
        }
        for (day, &throughput) in duty.iter().enumerate().skip(1) {
            let req = instance.request(day);
            if throughput < req.min {
                issues.push(CertificateIssue::DutyBelowRequest {
                    day,
                    throughput,
                    min: req.min,
                });
            }
            if throughput > req.max {
                issues.push(CertificateIssue::DutyAboveRequest {
                    day,
                    throughput,
                    max: req.max,
                });
            }
        }
        Ok(issues)
    }

    /// Decomposes a verified flow into one row per worker by repeatedly
    /// peeling the path that always takes the smallest outgoing edge with
    /// remaining flow.
    pub fn flow_to_schedule(&self, flow: &FlowCertificate) -> Result<Schedule, CertifyError> {
        if flow.flows.len() != self.edges.len() {
            return Err(CertifyError::FlowShape {
                expected: self.edges.len(),
                got: flow.flows.len(),
            });
        }
        let mut remaining = flow.flows.clone();
        let n = usize::try_from(self.workers).expect("workforce fits usize");
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let mut row = Vec::with_capacity(self.days);
            let mut at = SOURCE;
            while at != SINK {
                let Some(e) = self.out_edges(at).find(|&e| remaining[e] > 0) else {
                    return Err(CertifyError::Stuck {
                        node: self.nodes[at as usize],
                    });
                };
                remaining[e] -= 1;
                at = self.edges[e].1;
                if let CertNode::State(v) = self.nodes[at as usize] {
                    row.push(v.shift == Shift::On);
                }
            }
            if row.len() != self.days {
                return Err(CertifyError::Stuck {
                    node: CertNode::Sink,
                });
            }
            rows.push(row);
        }
        Ok(Schedule::from_rows(self.days, rows).expect("peeled rows span the horizon"))
    }
}

/// Decides instances without request bounds: with `rl = 0` and `ru = N`,
/// feasibility is exactly s-t reachability in the certificate graph.
pub fn decide_unrequested(instance: &Instance) -> Result<bool, CertifyError> {
    let trivial = instance
        .requests()
        .iter()
        .all(|r| r.min == 0 && r.max == instance.workers());
    if !trivial {
        return Err(CertifyError::NontrivialRequests);
    }
    if instance.workers() == 0 {
        return Ok(true);
    }
    Ok(build_certificate_graph(instance).reaches_sink())
}

/// A failed certificate check; the list is exhaustive for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateIssue {
    Value { got: u64, want: u64 },
    Conservation { node: StateVertex, inflow: u64, outflow: u64 },
    DutyBelowRequest { day: usize, throughput: u64, min: u64 },
    DutyAboveRequest { day: usize, throughput: u64, max: u64 },
}

impl fmt::Display for CertificateIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateIssue::Value { got, want } => {
                write!(f, "flow value {got}, expected {want}")
            }
            CertificateIssue::Conservation { node, inflow, outflow } => write!(
                f,
                "conservation violated at {}: in {inflow}, out {outflow}",
                CertNode::State(*node)
            ),
            CertificateIssue::DutyBelowRequest { day, throughput, min } => {
                write!(f, "day {day}: duty throughput {throughput} below request {min}")
            }
            CertificateIssue::DutyAboveRequest { day, throughput, max } => {
                write!(f, "day {day}: duty throughput {throughput} above request {max}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertifyError {
    DimensionMismatch { days: usize, workers: u64 },
    /// Flow vector does not index the graph's edges.
    FlowShape { expected: usize, got: usize },
    /// A worker's row has no legal state path.
    InfeasibleRow { worker: u64, day: usize },
    /// Path peeling ran out of flow; the certificate was not verified.
    Stuck { node: CertNode },
    NontrivialRequests,
}

impl fmt::Display for CertifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertifyError::DimensionMismatch { days, workers } => {
                write!(f, "graph was built for {workers} workers over {days} days")
            }
            CertifyError::FlowShape { expected, got } => {
                write!(f, "flow indexes {got} edges, graph has {expected}")
            }
            CertifyError::InfeasibleRow { worker, day } => {
                write!(f, "worker {worker} has no legal transition into day {day}")
            }
            CertifyError::Stuck { node } => {
                write!(f, "path peeling stuck at {node} with no remaining flow")
            }
            CertifyError::NontrivialRequests => {
                write!(f, "decision by reachability requires trivial requests")
            }
        }
    }
}

impl std::error::Error for CertifyError {}
