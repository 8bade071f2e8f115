//! Feasibility engine and schedule constructor for days-on/days-off
//! scheduling: a homogeneous workforce is assigned ON/OFF over a horizon of
//! days, subject to per-day headcount requests, minimum and maximum lengths
//! of work and off periods, and per-worker totals.
//!
//! The crate provides polynomial solvers for the two tractable special
//! cases (trivial period minima, trivial totals), an NP-certificate builder
//! and verifier based on a layered flow graph for the general case,
//! hard-instance generators from 3-partition encodings, bound and workforce
//! optimizers, and a brute-force oracle for desk-scale validation.

pub mod certify;
pub mod check;
pub mod classify;
pub mod diffcon;
pub mod instance;
pub mod io;
pub mod local_bounds;
pub mod optimize;
pub mod oracle;
pub mod reduction;
pub mod schedule;
pub mod upper_bounds;

pub use check::{check_fifo, check_schedule, FeasibilityReport, Violation};
pub use classify::{classify_instance, ComplexityClass};
pub use instance::{Bounds, BoundsSpec, DayRequest, Instance, ValidationError};
pub use schedule::{CompactDay, Period, Schedule, Shift};
