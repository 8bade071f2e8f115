//! Difference-constraint systems as weighted digraphs with edge weights
//! affine in the workforce size, and a Bellman-Ford solver that produces
//! either an integral feasible potential or a negative cycle.
//!
//! An edge `(tail, head)` of weight `c` encodes the constraint
//! `potential(head) - potential(tail) <= c`. A feasible potential exists
//! iff no cycle of negative total weight exists.

use std::fmt;

/// Weight `a * n + b` evaluated at a concrete worker count `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AffineWeight {
    pub a: i64,
    pub b: i64,
}

impl AffineWeight {
    pub fn constant(b: i64) -> Self {
        AffineWeight { a: 0, b }
    }

    pub fn eval(&self, n: u64) -> i128 {
        self.a as i128 * n as i128 + self.b as i128
    }

    fn add(&self, other: &AffineWeight) -> AffineWeight {
        AffineWeight {
            a: self.a.checked_add(other.a).expect("cycle coefficient overflow"),
            b: self.b.checked_add(other.b).expect("cycle constant overflow"),
        }
    }
}

impl fmt::Display for AffineWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (0, b) => write!(f, "{b}"),
            (a, 0) => write!(f, "{a}*N"),
            (a, b) if b < 0 => write!(f, "{a}*N - {}", -(b as i128)),
            (a, b) => write!(f, "{a}*N + {b}"),
        }
    }
}

/// One difference constraint; the label says which constraint family the
/// edge came from, for witness reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffEdge<L> {
    pub tail: usize,
    pub head: usize,
    pub weight: AffineWeight,
    pub label: L,
}

/// A system of difference constraints over `vertex_count` variables.
/// Potentials are normalized so that the anchor vertex maps to zero.
#[derive(Debug, Clone)]
pub struct DiffConGraph<L> {
    vertex_count: usize,
    anchor: usize,
    edges: Vec<DiffEdge<L>>,
}

impl<L> DiffConGraph<L> {
    pub fn new(vertex_count: usize, anchor: usize) -> Self {
        assert!(vertex_count == 0 || anchor < vertex_count);
        DiffConGraph {
            vertex_count,
            anchor,
            edges: Vec::new(),
        }
    }

    /// Adds the constraint `potential(head) - potential(tail) <= weight`.
    pub fn constrain(&mut self, tail: usize, head: usize, weight: AffineWeight, label: L) {
        debug_assert!(tail < self.vertex_count && head < self.vertex_count);
        self.edges.push(DiffEdge {
            tail,
            head,
            weight,
            label,
        });
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[DiffEdge<L>] {
        &self.edges
    }
}

/// A simple cycle of negative total weight at the evaluated worker count,
/// together with its affine total; the sign of the coefficient tells
/// whether adding or removing workers could help.
#[derive(Debug, Clone)]
pub struct NegativeCycle<L> {
    pub edges: Vec<DiffEdge<L>>,
    pub total: AffineWeight,
    pub evaluated_at: u64,
    pub evaluated_total: i64,
}

#[derive(Debug, Clone)]
pub enum PotentialResult<L> {
    /// Integral feasible potential with `potential[anchor] == 0`.
    Feasible(Vec<i64>),
    Infeasible(NegativeCycle<L>),
}

impl<L> PotentialResult<L> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, PotentialResult::Feasible(_))
    }
}

/// Runs Bellman-Ford with an implicit super-source (all distances start at
/// zero), so disconnected graphs need no special casing. Returns a feasible
/// potential translated to the anchor, or extracts a simple negative cycle
/// by walking predecessor edges.
///
/// Each pass sweeps forward edges in ascending tail order, then backward
/// edges in descending order, so relaxation cascades along chains within a
/// single pass instead of one vertex per pass. Every edge is still relaxed
/// exactly once per pass, so after `k` passes the distances bound shortest
/// walks of at most `k` edges and a relaxation in pass `v` still proves a
/// negative cycle.
pub fn solve_potential<L: Clone>(graph: &DiffConGraph<L>, n: u64) -> PotentialResult<L> {
    let v = graph.vertex_count;
    if v == 0 {
        return PotentialResult::Feasible(Vec::new());
    }

    let weights: Vec<i128> = graph.edges.iter().map(|e| e.weight.eval(n)).collect();
    let mut forward: Vec<u32> = Vec::new();
    let mut backward: Vec<u32> = Vec::new();
    for (idx, e) in graph.edges.iter().enumerate() {
        if e.tail < e.head {
            forward.push(idx as u32);
        } else {
            backward.push(idx as u32);
        }
    }
    forward.sort_by_key(|&idx| graph.edges[idx as usize].tail);
    backward.sort_by_key(|&idx| usize::MAX - graph.edges[idx as usize].tail);

    let mut dist = vec![0i128; v];
    let mut pred: Vec<Option<usize>> = vec![None; v];
    let mut last_relaxed = None;

    for round in 0..v {
        let mut relaxed = false;
        for &idx in forward.iter().chain(&backward) {
            let e = &graph.edges[idx as usize];
            let candidate = dist[e.tail] + weights[idx as usize];
            if candidate < dist[e.head] {
                dist[e.head] = candidate;
                pred[e.head] = Some(idx as usize);
                relaxed = true;
                if round == v - 1 {
                    last_relaxed = Some(e.head);
                }
            }
        }
        if !relaxed {
            break;
        }
    }

    let Some(start) = last_relaxed else {
        let base = dist[graph.anchor];
        let potential = dist
            .iter()
            .map(|&d| i64::try_from(d - base).expect("potential fits i64"))
            .collect();
        return PotentialResult::Feasible(potential);
    };

    // Walk v predecessor steps to land on the cycle, then collect it.
    let mut on_cycle = start;
    for _ in 0..v {
        on_cycle = graph.edges[pred[on_cycle].expect("relaxed vertex has predecessor")].tail;
    }
    let mut cycle = Vec::new();
    let mut cur = on_cycle;
    loop {
        let idx = pred[cur].expect("cycle vertex has predecessor");
        cycle.push(graph.edges[idx].clone());
        cur = graph.edges[idx].tail;
        if cur == on_cycle {
            break;
        }
    }
    cycle.reverse();

    let total = cycle
        .iter()
        .fold(AffineWeight::default(), |acc, e| acc.add(&e.weight));
    let evaluated = total.eval(n);
    debug_assert!(evaluated < 0, "extracted cycle must be negative");
    PotentialResult::Infeasible(NegativeCycle {
        edges: cycle,
        total,
        evaluated_at: n,
        evaluated_total: i64::try_from(evaluated).expect("cycle weight fits i64"),
    })
}

/// Checks a potential edge by edge; used by tests and witness validation.
pub fn potential_is_feasible<L>(graph: &DiffConGraph<L>, n: u64, potential: &[i64]) -> bool {
    graph.edges.iter().all(|e| {
        potential[e.head] as i128 - potential[e.tail] as i128 <= e.weight.eval(n)
    })
}
