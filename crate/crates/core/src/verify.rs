//! Independent feasibility checker for solutions.
//!
//! Checks every constraint family of the mapping/allocation problem: per-task
//! deadlines, at-most-one access point and server per task, reachability, and
//! access-point/server capacity budgets. The checker is read-only,
//! deterministic, and is used as the trust anchor for every solver's output.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{completion_time, within_limit, Instance, Solution};

/// Constraint families a solution can violate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    Deadline,
    ApUniqueness,
    ApReachability,
    ServerUniqueness,
    ApCapacity,
    ServerCapacity,
}

/// One detected violation: which constraint, the offending ids, and by how
/// much it is violated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub constraint: ConstraintKind,
    pub ids: Vec<String>,
    pub magnitude: f64,
}

/// Outcome of a feasibility check. `feasible` holds exactly when
/// `violations` is empty. Slack (deadline minus completion time) is reported
/// for every assigned task, including feasible ones, so that zero-slack
/// allocations can be asserted directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
    pub slack: BTreeMap<String, f64>,
}

/// Checks a solution against an instance with relative tolerance `tol`.
///
/// Deadline and capacity comparisons admit a multiplicative slack of
/// `1 + tol`; mapping uniqueness and reachability are exact. Dangling ids are
/// an error, not an infeasibility.
pub fn verify(instance: &Instance, solution: &Solution, tol: f64) -> Result<VerificationReport> {
    let n_tasks = instance.tasks().len();
    let n_aps = instance.aps().len();
    let n_servers = instance.servers().len();

    for a in &solution.assignments {
        if a.task >= n_tasks {
            return Err(Error::UnknownTask(format!("#{}", a.task)));
        }
        if a.ap >= n_aps {
            return Err(Error::UnknownAccessPoint(format!("#{}", a.ap)));
        }
        if a.server >= n_servers {
            return Err(Error::UnknownServer(format!("#{}", a.server)));
        }
    }

    let mut violations = Vec::new();
    let mut slack = BTreeMap::new();

    // Mapping uniqueness: at most one access point (1b) and one server (1d)
    // per task. Counted over distinct ids so that a duplicated task trips
    // exactly the families it violates.
    let mut aps_used: Vec<Vec<usize>> = vec![Vec::new(); n_tasks];
    let mut servers_used: Vec<Vec<usize>> = vec![Vec::new(); n_tasks];
    for a in &solution.assignments {
        if !aps_used[a.task].contains(&a.ap) {
            aps_used[a.task].push(a.ap);
        }
        if !servers_used[a.task].contains(&a.server) {
            servers_used[a.task].push(a.server);
        }
    }
    for (i, used) in aps_used.iter().enumerate() {
        if used.len() > 1 {
            let mut ids = vec![instance.tasks()[i].id.clone()];
            ids.extend(used.iter().map(|&j| instance.aps()[j].id.clone()));
            violations.push(Violation {
                constraint: ConstraintKind::ApUniqueness,
                ids,
                magnitude: (used.len() - 1) as f64,
            });
        }
    }
    for (i, used) in servers_used.iter().enumerate() {
        if used.len() > 1 {
            let mut ids = vec![instance.tasks()[i].id.clone()];
            ids.extend(used.iter().map(|&k| instance.servers()[k].id.clone()));
            violations.push(Violation {
                constraint: ConstraintKind::ServerUniqueness,
                ids,
                magnitude: (used.len() - 1) as f64,
            });
        }
    }

    let mut ap_load = vec![0.0; n_aps];
    let mut server_load = vec![0.0; n_servers];

    for a in &solution.assignments {
        let task = &instance.tasks()[a.task];

        // Reachability (1c): the offloading access point must cover the task.
        if !task.reachable_aps.contains(&a.ap) {
            violations.push(Violation {
                constraint: ConstraintKind::ApReachability,
                ids: vec![task.id.clone(), instance.aps()[a.ap].id.clone()],
                magnitude: 1.0,
            });
        }

        // Deadline (1a).
        let t_total = completion_time(
            task,
            a.ap,
            a.server,
            a.bandwidth_grant,
            a.compute_grant,
            instance.topology(),
        )?;
        slack.insert(task.id.clone(), task.deadline - t_total);
        if !within_limit(t_total, task.deadline, tol) {
            violations.push(Violation {
                constraint: ConstraintKind::Deadline,
                ids: vec![task.id.clone()],
                magnitude: t_total - task.deadline,
            });
        }

        ap_load[a.ap] += a.bandwidth_grant;
        server_load[a.server] += a.compute_grant;
    }

    // Capacity budgets (1e, 1f).
    for (j, ap) in instance.aps().iter().enumerate() {
        if !within_limit(ap_load[j], ap.bandwidth_capacity, tol) {
            violations.push(Violation {
                constraint: ConstraintKind::ApCapacity,
                ids: vec![ap.id.clone()],
                magnitude: ap_load[j] - ap.bandwidth_capacity,
            });
        }
    }
    for (k, server) in instance.servers().iter().enumerate() {
        if !within_limit(server_load[k], server.compute_capacity, tol) {
            violations.push(Violation {
                constraint: ConstraintKind::ServerCapacity,
                ids: vec![server.id.clone()],
                magnitude: server_load[k] - server.compute_capacity,
            });
        }
    }

    Ok(VerificationReport {
        feasible: violations.is_empty(),
        violations,
        slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AccessPoint, Assignment, Server, ServerKind, Task, Topology};

    /// Two tasks, two access points, two colocated servers; generous ranges
    /// so individual constraint families can be violated in isolation.
    fn fixture() -> Instance {
        let tasks = vec![
            Task {
                id: "t0".into(),
                data_size: 10.0,
                compute_demand: 20.0,
                deadline: 20.0,
                profit: 10.0,
                reachable_aps: vec![0],
            },
            Task {
                id: "t1".into(),
                data_size: 10.0,
                compute_demand: 20.0,
                deadline: 20.0,
                profit: 40.0,
                reachable_aps: vec![0, 1],
            },
        ];
        let aps = vec![
            AccessPoint {
                id: "ap0".into(),
                bandwidth_capacity: 40.0,
            },
            AccessPoint {
                id: "ap1".into(),
                bandwidth_capacity: 40.0,
            },
        ];
        let servers = vec![
            Server {
                id: "s0".into(),
                compute_capacity: 40.0,
                kind: ServerKind::Edge,
                colocated_ap: Some(0),
            },
            Server {
                id: "s1".into(),
                compute_capacity: 40.0,
                kind: ServerKind::Edge,
                colocated_ap: Some(1),
            },
        ];
        let topology = Topology::new(2, 2, vec![0.0, 2.0, 2.0, 0.0]).unwrap();
        Instance::new(tasks, aps, servers, topology).unwrap()
    }

    fn assign(task: usize, ap: usize, server: usize, b: f64, c: f64) -> Assignment {
        Assignment {
            task,
            ap,
            server,
            bandwidth_grant: b,
            compute_grant: c,
        }
    }

    #[test]
    fn empty_solution_is_feasible() {
        let inst = fixture();
        let report = verify(&inst, &Solution::empty(), 1e-9).unwrap();
        assert!(report.feasible);
        assert!(report.violations.is_empty());
        assert!(report.slack.is_empty());
    }

    #[test]
    fn zero_slack_grants_verify_with_slack_zero() {
        // Grants from the zero-slack sizing: s=10, q=20, deadline=20, delta=0,
        // b_j=c_k=40 gives gamma=1/3, b=1.5, c=1.5 and completion exactly at
        // the deadline.
        let inst = fixture();
        let sol = Solution::from_assignments(&inst, vec![assign(0, 0, 0, 1.5, 1.5)]);
        let report = verify(&inst, &sol, 1e-9).unwrap();
        assert!(report.feasible, "{:?}", report.violations);
        assert_eq!(report.slack["t0"], 0.0);
    }

    #[test]
    fn ap_capacity_overflow_reports_magnitude() {
        let inst = fixture();
        // Each task granted 0.6 * b_j on the same access point.
        let sol = Solution::from_assignments(
            &inst,
            vec![assign(0, 0, 0, 24.0, 10.0), assign(1, 0, 1, 24.0, 10.0)],
        );
        let report = verify(&inst, &sol, 1e-9).unwrap();
        assert!(!report.feasible);
        let v: Vec<_> = report
            .violations
            .iter()
            .filter(|v| v.constraint == ConstraintKind::ApCapacity)
            .collect();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].ids, vec!["ap0".to_string()]);
        assert!((v[0].magnitude - 8.0).abs() < 1e-9); // 0.2 * b_j
    }

    #[test]
    fn dangling_task_is_an_error_not_infeasibility() {
        let inst = fixture();
        let sol = Solution {
            assignments: vec![assign(9, 0, 0, 1.0, 1.0)],
            profit: 0.0,
        };
        assert!(matches!(
            verify(&inst, &sol, 1e-9),
            Err(Error::UnknownTask(_))
        ));
    }
}
