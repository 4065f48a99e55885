//! Problem data model and the closed-form timing/objective arithmetic shared
//! by all solvers.
//!
//! An [`Instance`] is immutable after construction: tasks, access points,
//! servers and the backhaul delay matrix are validated once and then shared
//! freely across concurrent solver runs. All quantities are dimensionless
//! nonnegative reals in double precision; feasibility comparisons use a
//! relative tolerance (default [`DEFAULT_TOL`]).

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Default relative tolerance for all feasibility comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// `value <= limit` up to relative tolerance `tol`, i.e. `value <= limit * (1 + tol)`.
///
/// Multiplicative rather than additive so that checks are scale-free.
#[inline]
pub fn within_limit(value: f64, limit: f64, tol: f64) -> bool {
    value <= limit * (1.0 + tol)
}

/// A task to be offloaded: data size, compute demand, deadline, profit and
/// the access points that cover it.
#[derive(Debug, Clone, PartialEq)]
pub struct Task {
    pub id: String,
    /// Amount of data to offload (s_i > 0).
    pub data_size: f64,
    /// CPU cycles required (q_i > 0).
    pub compute_demand: f64,
    /// End-to-end deadline (> 0).
    pub deadline: f64,
    /// Profit gained when the task completes by its deadline (>= 0).
    pub profit: f64,
    /// Indices into `Instance::aps` of the access points that can receive
    /// this task; nonempty, sorted, deduplicated.
    pub reachable_aps: Vec<usize>,
}

/// Wireless ingress node with a bandwidth capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct AccessPoint {
    pub id: String,
    /// Bandwidth capacity b_j (> 0).
    pub bandwidth_capacity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ServerKind {
    Edge,
    Cloud,
}

/// Compute node reachable from every access point over the backhaul.
#[derive(Debug, Clone, PartialEq)]
pub struct Server {
    pub id: String,
    /// Compute capacity c_k (> 0).
    pub compute_capacity: f64,
    pub kind: ServerKind,
    /// Index of the access point this server is deployed together with, if
    /// any. Colocation is declared explicitly rather than inferred from a
    /// zero delay, since sampled delays may coincidentally be zero.
    pub colocated_ap: Option<usize>,
}

/// Dense backhaul delay matrix, indexed (access point, server).
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    n_aps: usize,
    n_servers: usize,
    /// Row-major: rows are access points, columns are servers.
    delays: Vec<f64>,
}

impl Topology {
    /// Builds a topology from a row-major delay matrix.
    pub fn new(n_aps: usize, n_servers: usize, delays: Vec<f64>) -> Result<Self> {
        if delays.len() != n_aps * n_servers {
            return Err(Error::InvalidDocument(vec![format!(
                "delay matrix has {} entries, expected {} aps x {} servers = {}",
                delays.len(),
                n_aps,
                n_servers,
                n_aps * n_servers
            )]));
        }
        if let Some(bad) = delays.iter().find(|d| !d.is_finite() || **d < 0.0) {
            return Err(Error::InvalidDocument(vec![format!(
                "delays must be finite and nonnegative, found {bad}"
            )]));
        }
        Ok(Self {
            n_aps,
            n_servers,
            delays,
        })
    }

    /// One-way transmission delay between access point `ap` and server `server`.
    #[inline]
    pub fn delay(&self, ap: usize, server: usize) -> f64 {
        self.delays[ap * self.n_servers + server]
    }

    pub fn n_aps(&self) -> usize {
        self.n_aps
    }

    pub fn n_servers(&self) -> usize {
        self.n_servers
    }

    /// Mean delay over all (access point, server) pairs, colocated zeros included.
    pub fn mean_delay(&self) -> f64 {
        if self.delays.is_empty() {
            return 0.0;
        }
        self.delays.iter().sum::<f64>() / self.delays.len() as f64
    }

    /// Maximum delay over all (access point, server) pairs.
    pub fn max_delay(&self) -> f64 {
        self.delays.iter().copied().fold(0.0, f64::max)
    }

    /// Row-major view of the delay matrix.
    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.delays.chunks(self.n_servers.max(1))
    }
}

/// An immutable problem instance: the input shared by every solver.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    tasks: Vec<Task>,
    aps: Vec<AccessPoint>,
    servers: Vec<Server>,
    topology: Topology,
    task_index: HashMap<String, usize>,
    ap_index: HashMap<String, usize>,
    server_index: HashMap<String, usize>,
}

impl Instance {
    /// Validates and assembles an instance. All violations are collected and
    /// reported together.
    pub fn new(
        tasks: Vec<Task>,
        aps: Vec<AccessPoint>,
        servers: Vec<Server>,
        topology: Topology,
    ) -> Result<Self> {
        let mut violations = Vec::new();

        if topology.n_aps != aps.len() || topology.n_servers != servers.len() {
            violations.push(format!(
                "topology covers {}x{} but instance has {} aps and {} servers",
                topology.n_aps,
                topology.n_servers,
                aps.len(),
                servers.len()
            ));
        }

        let mut task_index = HashMap::new();
        for (i, t) in tasks.iter().enumerate() {
            if task_index.insert(t.id.clone(), i).is_some() {
                violations.push(format!("duplicate task id `{}`", t.id));
            }
            if !(t.data_size > 0.0) {
                violations.push(format!("task `{}`: data size {} must be > 0", t.id, t.data_size));
            }
            if !(t.compute_demand > 0.0) {
                violations.push(format!(
                    "task `{}`: compute demand {} must be > 0",
                    t.id, t.compute_demand
                ));
            }
            if !(t.deadline > 0.0) {
                violations.push(format!("task `{}`: deadline {} must be > 0", t.id, t.deadline));
            }
            if !(t.profit >= 0.0) {
                violations.push(format!("task `{}`: profit {} must be >= 0", t.id, t.profit));
            }
            if t.reachable_aps.is_empty() {
                violations.push(format!("task `{}`: reachable access point set is empty", t.id));
            }
            for &j in &t.reachable_aps {
                if j >= aps.len() {
                    violations.push(format!(
                        "task `{}`: reachable access point index {} out of range",
                        t.id, j
                    ));
                }
            }
        }

        let mut ap_index = HashMap::new();
        for (j, a) in aps.iter().enumerate() {
            if ap_index.insert(a.id.clone(), j).is_some() {
                violations.push(format!("duplicate access point id `{}`", a.id));
            }
            if !(a.bandwidth_capacity > 0.0) {
                violations.push(format!(
                    "access point `{}`: bandwidth capacity {} must be > 0",
                    a.id, a.bandwidth_capacity
                ));
            }
        }

        let mut server_index = HashMap::new();
        for (k, s) in servers.iter().enumerate() {
            if server_index.insert(s.id.clone(), k).is_some() {
                violations.push(format!("duplicate server id `{}`", s.id));
            }
            if !(s.compute_capacity > 0.0) {
                violations.push(format!(
                    "server `{}`: compute capacity {} must be > 0",
                    s.id, s.compute_capacity
                ));
            }
            if let Some(j) = s.colocated_ap {
                if j >= aps.len() {
                    violations.push(format!(
                        "server `{}`: colocated access point index {} out of range",
                        s.id, j
                    ));
                } else if topology.n_aps == aps.len()
                    && topology.n_servers == servers.len()
                    && topology.delay(j, k) != 0.0
                {
                    violations.push(format!(
                        "server `{}` is colocated with access point `{}` but delay is {}",
                        s.id,
                        aps[j].id,
                        topology.delay(j, k)
                    ));
                }
            }
        }

        if !violations.is_empty() {
            return Err(Error::InvalidDocument(violations));
        }

        Ok(Self {
            tasks,
            aps,
            servers,
            topology,
            task_index,
            ap_index,
            server_index,
        })
    }

    pub fn tasks(&self) -> &[Task] {
        &self.tasks
    }

    pub fn aps(&self) -> &[AccessPoint] {
        &self.aps
    }

    pub fn servers(&self) -> &[Server] {
        &self.servers
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn task_index(&self, id: &str) -> Option<usize> {
        self.task_index.get(id).copied()
    }

    pub fn ap_index(&self, id: &str) -> Option<usize> {
        self.ap_index.get(id).copied()
    }

    pub fn server_index(&self, id: &str) -> Option<usize> {
        self.server_index.get(id).copied()
    }

    /// Sum of all task profits; the denominator of the profit gain ratio.
    pub fn total_profit(&self) -> f64 {
        self.tasks.iter().map(|t| t.profit).sum()
    }
}

/// One committed mapping: a task offloaded to an access point, processed on a
/// server, with strictly positive resource grants.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub task: usize,
    pub ap: usize,
    pub server: usize,
    pub bandwidth_grant: f64,
    pub compute_grant: f64,
}

/// A (partial) solution: at most one assignment per task, plus the achieved
/// profit.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub assignments: Vec<Assignment>,
    pub profit: f64,
}

impl Solution {
    /// The empty solution: nothing assigned, zero profit.
    pub fn empty() -> Self {
        Self {
            assignments: Vec::new(),
            profit: 0.0,
        }
    }

    /// Builds a solution from assignments, computing the profit from the
    /// instance.
    pub fn from_assignments(instance: &Instance, assignments: Vec<Assignment>) -> Self {
        let profit = assignments
            .iter()
            .map(|a| instance.tasks()[a.task].profit)
            .sum();
        Self { assignments, profit }
    }
}

/// Total completion time of a task offloaded through access point `ap` to
/// server `server` with the given grants:
/// offload `s/b` + two backhaul hops `2*delay` + processing `q/c`.
pub fn completion_time(
    task: &Task,
    ap: usize,
    server: usize,
    b_grant: f64,
    c_grant: f64,
    topo: &Topology,
) -> Result<f64> {
    if !(b_grant > 0.0) {
        return Err(Error::NonPositiveGrant {
            task: task.id.clone(),
            kind: "bandwidth",
            value: b_grant,
        });
    }
    if !(c_grant > 0.0) {
        return Err(Error::NonPositiveGrant {
            task: task.id.clone(),
            kind: "compute",
            value: c_grant,
        });
    }
    Ok(task.data_size / b_grant + 2.0 * topo.delay(ap, server) + task.compute_demand / c_grant)
}

/// Sum of profits over assigned tasks; zero for the empty solution.
pub fn objective_value(instance: &Instance, solution: &Solution) -> Result<f64> {
    let mut total = 0.0;
    for a in &solution.assignments {
        let task = instance
            .tasks
            .get(a.task)
            .ok_or_else(|| Error::UnknownTask(format!("#{}", a.task)))?;
        total += task.profit;
    }
    Ok(total)
}
