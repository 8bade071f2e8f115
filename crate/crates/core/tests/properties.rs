//! Randomized invariants: representation round trips, counter identities,
//! checker agreement against a from-scratch reimplementation, and the
//! difference-constraint solver's two-sided contract.

use proptest::prelude::*;

use dodosp::check::check_schedule;
use dodosp::diffcon::{
    potential_is_feasible, solve_potential, AffineWeight, DiffConGraph, PotentialResult,
};
use dodosp::instance::{Bounds, DayRequest, Instance};
use dodosp::local_bounds::{counters_from_schedule, off_counters_from_schedule};
use dodosp::schedule::{CompactDay, Schedule};
use dodosp::upper_bounds;

/// Straight-line re-statement of feasibility, sharing nothing with the
/// library's checker.
fn naive_feasible(instance: &Instance, rows: &[Vec<bool>]) -> bool {
    let b = instance.bounds();
    for day in 0..instance.days() {
        let count = rows.iter().filter(|r| r[day]).count() as u64;
        let req = instance.request(day + 1);
        if count < req.min || count > req.max {
            return false;
        }
    }
    for row in rows {
        let mut runs: Vec<(bool, usize)> = Vec::new();
        for &on in row {
            match runs.last_mut() {
                Some((kind, len)) if *kind == on => *len += 1,
                _ => runs.push((on, 1)),
            }
        }
        for &(on, len) in &runs {
            let (lo, hi) = if on {
                (b.work_min, b.work_max)
            } else {
                (b.off_min, b.off_max)
            };
            if len < lo || len > hi {
                return false;
            }
        }
        let on_total = row.iter().filter(|&&x| x).count();
        if on_total > b.total_work_max || row.len() - on_total > b.total_off_max {
            return false;
        }
    }
    true
}

fn bounds_strategy(days: usize) -> impl Strategy<Value = Bounds> {
    let day = 1..=days;
    (day.clone(), day.clone(), day.clone(), day.clone(), day.clone(), day).prop_map(
        move |(a, b, c, d, e, f)| Bounds {
            work_min: a.min(b),
            work_max: a.max(b),
            off_min: c.min(d),
            off_max: c.max(d),
            total_work_max: e,
            total_off_max: f,
        },
    )
}

fn instance_strategy() -> impl Strategy<Value = Instance> {
    (1usize..=6, 0u64..=3).prop_flat_map(|(days, workers)| {
        (
            bounds_strategy(days),
            proptest::collection::vec((0..=workers, 0..=workers), days),
        )
            .prop_map(move |(bounds, raw)| {
                let requests = raw
                    .into_iter()
                    .map(|(a, b)| DayRequest { min: a.min(b), max: a.max(b) })
                    .collect();
                Instance::new(days, workers, bounds, requests).unwrap()
            })
    })
}

fn rows_strategy(days: usize, workers: u64) -> impl Strategy<Value = Vec<Vec<bool>>> {
    proptest::collection::vec(
        proptest::collection::vec(proptest::bool::ANY, days),
        workers as usize,
    )
}

proptest! {
    #[test]
    fn compact_expansion_round_trips(
        workers in 1u64..=5,
        days in prop::collection::vec((0u64..5, 0u64..=5), 1..6),
    ) {
        let days: Vec<CompactDay> = days
            .into_iter()
            .map(|(offset, count)| {
                let count = count.min(workers);
                // Canonical form: offset 0 for empty and full days.
                if count == 0 || count == workers {
                    CompactDay { offset: 0, count }
                } else {
                    CompactDay { offset: offset % workers, count }
                }
            })
            .collect();
        let compact = Schedule::from_compact(workers, days.clone()).unwrap();
        let dense = Schedule::from_rows(days.len(), compact.to_rows()).unwrap();
        prop_assert_eq!(dense.compact_days(), Some(days));
    }

    #[test]
    fn checker_matches_the_naive_restatement(
        (instance, rows) in instance_strategy().prop_flat_map(|inst| {
            let days = inst.days();
            let workers = inst.workers();
            (Just(inst), rows_strategy(days, workers))
        }),
    ) {
        let schedule = Schedule::from_rows(instance.days(), rows.clone()).unwrap();
        let report = check_schedule(&instance, &schedule).unwrap();
        prop_assert_eq!(report.feasible(), naive_feasible(&instance, &rows));
    }

    #[test]
    fn counter_identities_hold_for_any_schedule(
        rows in (1usize..=6, 1u64..=3).prop_flat_map(|(d, w)| rows_strategy(d, w)),
    ) {
        let days = rows[0].len();
        let schedule = Schedule::from_rows(days, rows).unwrap();
        let n = schedule.workers();
        let work = counters_from_schedule(&schedule);
        let off = off_counters_from_schedule(&schedule);

        // Derived off counters equal direct counting.
        prop_assert_eq!(&work.off_counters(n), &off);

        // Structural inequalities of any representable counters.
        prop_assert_eq!(work.ended_before[0], 0);
        for d in 1..days {
            prop_assert!(work.started[d - 1] <= work.started[d]);
            prop_assert!(work.ended_before[d - 1] <= work.ended_before[d]);
            prop_assert!(work.ended_before[d] <= work.started[d - 1]);
            prop_assert!(work.started[d] <= work.ended_before[d - 1] + n);
        }
    }

    #[test]
    fn potentials_and_cycles_are_mutually_exclusive_witnesses(
        vertex_count in 1usize..=6,
        raw_edges in prop::collection::vec((0usize..6, 0usize..6, -4i64..=4, -6i64..=6), 0..12),
        n in 0u64..=3,
    ) {
        let mut graph = DiffConGraph::new(vertex_count, 0);
        for (i, (t, h, a, b)) in raw_edges.into_iter().enumerate() {
            graph.constrain(t % vertex_count, h % vertex_count, AffineWeight { a, b }, i);
        }
        match solve_potential(&graph, n) {
            PotentialResult::Feasible(potential) => {
                prop_assert_eq!(potential[0], 0);
                prop_assert!(potential_is_feasible(&graph, n, &potential));
            }
            PotentialResult::Infeasible(cycle) => {
                prop_assert!(cycle.evaluated_total < 0);
                let mut a_total = 0i64;
                let mut b_total = 0i64;
                let mut seen = std::collections::HashSet::new();
                for (i, edge) in cycle.edges.iter().enumerate() {
                    a_total += edge.weight.a;
                    b_total += edge.weight.b;
                    prop_assert!(seen.insert(edge.tail));
                    let next = &cycle.edges[(i + 1) % cycle.edges.len()];
                    prop_assert_eq!(edge.head, next.tail);
                }
                prop_assert_eq!(cycle.total, AffineWeight { a: a_total, b: b_total });
                prop_assert_eq!(cycle.total.eval(n), cycle.evaluated_total as i128);
            }
        }
    }

    #[test]
    fn accepted_exact_requests_build_feasible_balanced_schedules(
        (days, workers) in (1usize..=8, 1u64..=4),
        seed in 0u64..1000,
    ) {
        // Derive requests and upper bounds from the seed, keep minima trivial.
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut next = move |m: u64| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state % m
        };
        let requests: Vec<u64> = (0..days).map(|_| next(workers + 1)).collect();
        let mut bounds = Bounds::trivial(days);
        bounds.work_max = 1 + next(days as u64) as usize;
        bounds.off_max = 1 + next(days as u64) as usize;
        bounds.total_work_max = 1 + next(days as u64) as usize;
        bounds.total_off_max = 1 + next(days as u64) as usize;
        let instance =
            Instance::with_exact_requests(days, workers, bounds, requests).unwrap();
        if upper_bounds::check_exact(&instance).unwrap() {
            let schedule = upper_bounds::schedule_exact(&instance).unwrap();
            prop_assert!(check_schedule(&instance, &schedule).unwrap().feasible());
            // Prefix duty totals of any two workers differ by at most one.
            let mut totals = vec![0usize; workers as usize];
            for day in 1..=days {
                for w in 1..=workers {
                    totals[w as usize - 1] += schedule.is_on(w, day) as usize;
                }
                let hi = totals.iter().max().unwrap();
                let lo = totals.iter().min().unwrap();
                prop_assert!(hi - lo <= 1);
            }
        }
    }
}
