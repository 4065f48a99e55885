//! Zero-slack greedy heuristic.
//!
//! For every (task, access point, server) option the deadline is split
//! between offloading and processing so that the task would finish exactly
//! at its deadline, which fixes the bandwidth and compute the option needs.
//! Options are then ranked by profit per fractional resource usage and
//! committed greedily while capacity remains.

use crate::model::{within_limit, AccessPoint, Assignment, Instance, Server, Solution, Task, Topology};

const ZSG_TOL: f64 = 1e-9;

/// A candidate mapping of one task to one access point-server pair, with the
/// zero-slack resource demands and the greedy priority score.
#[derive(Debug, Clone, PartialEq)]
pub struct OptionCandidate {
    pub task: usize,
    pub ap: usize,
    pub server: usize,
    /// Fraction of the non-transmission time budget spent offloading; in (0,1).
    pub gamma: f64,
    pub required_bandwidth: f64,
    pub required_compute: f64,
    pub priority: f64,
}

/// Fraction of the non-transmission time budget devoted to offloading.
///
/// Balances offload pressure `s/b_j` against processing pressure `q/c_k`;
/// the deadline cancels, leaving `s*c_k / (s*c_k + q*b_j)`.
pub fn gamma_split(task: &Task, ap: &AccessPoint, server: &Server) -> f64 {
    let sc = task.data_size * server.compute_capacity;
    let qb = task.compute_demand * ap.bandwidth_capacity;
    sc / (sc + qb)
}

/// Bandwidth that completes the offload within its share of the time budget:
/// `s / (gamma * (deadline - 2 delta))`.
///
/// Returns `None` when the deadline leaves no time after transmission
/// (`deadline <= 2 delta`): the option is infeasible, not an error.
pub fn required_bandwidth(
    task: &Task,
    ap: usize,
    server: usize,
    gamma: f64,
    topo: &Topology,
) -> Option<f64> {
    let budget = task.deadline - 2.0 * topo.delay(ap, server);
    if budget <= 0.0 {
        return None;
    }
    Some(task.data_size / (gamma * budget))
}

/// Compute that finishes processing within the remaining share:
/// `q / ((1 - gamma) * (deadline - 2 delta))`.
pub fn required_compute(
    task: &Task,
    ap: usize,
    server: usize,
    gamma: f64,
    topo: &Topology,
) -> Option<f64> {
    let budget = task.deadline - 2.0 * topo.delay(ap, server);
    if budget <= 0.0 {
        return None;
    }
    Some(task.compute_demand / ((1.0 - gamma) * budget))
}

/// Priority of an option: profit divided by the product of fractional
/// resource usages. Higher profit and lighter resource demands rank first.
pub fn priority(task: &Task, ap: &AccessPoint, server: &Server, b_req: f64, c_req: f64) -> f64 {
    task.profit / ((b_req / ap.bandwidth_capacity) * (c_req / server.compute_capacity))
}

/// Materializes every feasible option of the instance, in deterministic
/// (task, access point, server) declaration order.
pub fn candidates(instance: &Instance) -> Vec<OptionCandidate> {
    let topo = instance.topology();
    let mut out = Vec::new();
    for (i, task) in instance.tasks().iter().enumerate() {
        for &j in &task.reachable_aps {
            let ap = &instance.aps()[j];
            for (k, server) in instance.servers().iter().enumerate() {
                let gamma = gamma_split(task, ap, server);
                let Some(b_req) = required_bandwidth(task, j, k, gamma, topo) else {
                    continue;
                };
                let Some(c_req) = required_compute(task, j, k, gamma, topo) else {
                    continue;
                };
                if !b_req.is_finite() || !c_req.is_finite() {
                    continue;
                }
                out.push(OptionCandidate {
                    task: i,
                    ap: j,
                    server: k,
                    gamma,
                    required_bandwidth: b_req,
                    required_compute: c_req,
                    priority: priority(task, ap, server, b_req, c_req),
                });
            }
        }
    }
    out
}

/// Runs the greedy: sorts all options by priority (non-increasing, ties
/// broken by task/access-point/server declaration order) and commits each
/// option whose demands fit the remaining capacities, retiring the task.
///
/// Every committed task completes exactly at its deadline; the result always
/// verifies feasible. An instance where nothing fits yields the empty
/// solution.
pub fn zsg_solve(instance: &Instance) -> Solution {
    let mut options = candidates(instance);
    options.sort_by(|a, b| {
        b.priority
            .total_cmp(&a.priority)
            .then_with(|| (a.task, a.ap, a.server).cmp(&(b.task, b.ap, b.server)))
    });

    let mut remaining_b: Vec<f64> = instance
        .aps()
        .iter()
        .map(|a| a.bandwidth_capacity)
        .collect();
    let mut remaining_c: Vec<f64> = instance
        .servers()
        .iter()
        .map(|s| s.compute_capacity)
        .collect();
    let mut provisioned = vec![false; instance.tasks().len()];
    let mut assignments = Vec::new();

    for opt in options {
        if provisioned[opt.task] {
            continue;
        }
        // Tolerant comparison so an option demanding exactly the remaining
        // capacity still commits; grant sums stay within capacity * (1 + tol).
        if within_limit(opt.required_bandwidth, remaining_b[opt.ap], ZSG_TOL)
            && within_limit(opt.required_compute, remaining_c[opt.server], ZSG_TOL)
        {
            remaining_b[opt.ap] -= opt.required_bandwidth;
            remaining_c[opt.server] -= opt.required_compute;
            provisioned[opt.task] = true;
            assignments.push(Assignment {
                task: opt.task,
                ap: opt.ap,
                server: opt.server,
                bandwidth_grant: opt.required_bandwidth,
                compute_grant: opt.required_compute,
            });
        }
    }

    assignments.sort_by_key(|a| a.task);
    Solution::from_assignments(instance, assignments)
}
