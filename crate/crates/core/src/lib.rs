//! Deadline-constrained task mapping and multi-resource allocation for
//! edge-cloud systems.
//!
//! Tasks arrive with a data size, a compute demand, a deadline and a profit;
//! each can be offloaded through one reachable access point and processed on
//! one server, paying two backhaul hops in between. The goal is to choose
//! mappings and strictly positive bandwidth/compute grants that maximize the
//! total profit of tasks finishing by their deadlines, subject to per-access-
//! point and per-server capacity budgets.
//!
//! The crate provides:
//! - [`model`]: the immutable problem instance, timing arithmetic and the
//!   objective, plus JSON (de)serialization in [`io`];
//! - [`verify`]: an independent feasibility checker used as the trust anchor
//!   for every solver;
//! - [`zsg`]: a zero-slack greedy heuristic that sizes resources so each
//!   provisioned task finishes exactly at its deadline;
//! - [`ldm`]: an exact linearization of the problem under minimum-unit
//!   discretization, with LP-format export;
//! - [`solver`]: desk-scale exact solvers (branch-and-bound and an
//!   enumeration oracle) for the discretized problem;
//! - [`taskgen`]: synthetic benchmark generation with controlled bandwidth
//!   and compute utilization;
//! - [`campaign`]: the experiment harness comparing algorithms by profit
//!   gain ratio, with CSV and SVG box-plot output.

pub mod campaign;
pub mod error;
pub mod io;
pub mod ldm;
pub mod model;
pub mod plot;
pub mod solver;
pub mod taskgen;
pub mod verify;
pub mod zsg;

pub use error::{Error, Result};
pub use model::{
    completion_time, objective_value, AccessPoint, Assignment, Instance, Server, ServerKind,
    Solution, Task, Topology, DEFAULT_TOL,
};
pub use verify::{ConstraintKind, VerificationReport};
