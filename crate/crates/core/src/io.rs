//! Loading and saving of instance and solution documents.
//!
//! One schema family, JSON, versioned with a `"schema": 1` field. The
//! instance document carries `tasks`, `access_points`, `servers` (with an
//! optional `colocated_ap`) and `delays` as a dense row-major matrix whose
//! rows are access points in declaration order and columns are servers.
//! Round-trip identity holds: `load(save(x))` equals `x` structurally.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    AccessPoint, Assignment, Instance, Server, ServerKind, Solution, Task, Topology,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct TaskDoc {
    id: String,
    data_size: f64,
    compute_demand: f64,
    deadline: f64,
    profit: f64,
    reachable_aps: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct AccessPointDoc {
    id: String,
    bandwidth_capacity: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct ServerDoc {
    id: String,
    compute_capacity: f64,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    colocated_ap: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceDoc {
    schema: u32,
    tasks: Vec<TaskDoc>,
    access_points: Vec<AccessPointDoc>,
    servers: Vec<ServerDoc>,
    delays: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct AssignmentDoc {
    task: String,
    access_point: String,
    server: String,
    bandwidth: f64,
    compute: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct SolutionDoc {
    schema: u32,
    assignments: Vec<AssignmentDoc>,
    profit: f64,
}

/// Parses and validates an instance document. All schema violations,
/// dangling ids and negative parameters found are reported together.
pub fn load_instance(text: &str) -> Result<Instance> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    let mut violations = Vec::new();

    if doc.schema != SCHEMA_VERSION {
        violations.push(format!(
            "unsupported schema version {}, expected {SCHEMA_VERSION}",
            doc.schema
        ));
    }

    let aps: Vec<AccessPoint> = doc
        .access_points
        .iter()
        .map(|a| AccessPoint {
            id: a.id.clone(),
            bandwidth_capacity: a.bandwidth_capacity,
        })
        .collect();
    let ap_lookup = |id: &str| aps.iter().position(|a| a.id == id);

    let mut servers = Vec::new();
    for s in &doc.servers {
        let kind = match s.kind.as_str() {
            "edge" => ServerKind::Edge,
            "cloud" => ServerKind::Cloud,
            other => {
                violations.push(format!(
                    "server `{}`: unknown kind `{other}` (expected `edge` or `cloud`)",
                    s.id
                ));
                ServerKind::Edge
            }
        };
        let colocated_ap = match &s.colocated_ap {
            None => None,
            Some(ap_id) => match ap_lookup(ap_id) {
                Some(j) => Some(j),
                None => {
                    violations.push(format!(
                        "server `{}`: colocated access point `{ap_id}` does not exist",
                        s.id
                    ));
                    None
                }
            },
        };
        servers.push(Server {
            id: s.id.clone(),
            compute_capacity: s.compute_capacity,
            kind,
            colocated_ap,
        });
    }

    let mut tasks = Vec::new();
    for t in &doc.tasks {
        let mut reachable = Vec::new();
        for ap_id in &t.reachable_aps {
            match ap_lookup(ap_id) {
                Some(j) => reachable.push(j),
                None => violations.push(format!(
                    "task `{}`: reachable access point `{ap_id}` does not exist",
                    t.id
                )),
            }
        }
        reachable.sort_unstable();
        reachable.dedup();
        tasks.push(Task {
            id: t.id.clone(),
            data_size: t.data_size,
            compute_demand: t.compute_demand,
            deadline: t.deadline,
            profit: t.profit,
            reachable_aps: reachable,
        });
    }

    let n_aps = doc.access_points.len();
    let n_servers = doc.servers.len();
    if doc.delays.len() != n_aps || doc.delays.iter().any(|row| row.len() != n_servers) {
        violations.push(format!(
            "delays must be a {n_aps}x{n_servers} matrix (rows = access points, columns = servers)"
        ));
        return Err(Error::InvalidDocument(violations));
    }
    let flat: Vec<f64> = doc.delays.into_iter().flatten().collect();
    let topology = match Topology::new(n_aps, n_servers, flat) {
        Ok(t) => t,
        Err(Error::InvalidDocument(mut v)) => {
            violations.append(&mut v);
            return Err(Error::InvalidDocument(violations));
        }
        Err(e) => return Err(e),
    };

    match Instance::new(tasks, aps, servers, topology) {
        Ok(instance) if violations.is_empty() => Ok(instance),
        Ok(_) => Err(Error::InvalidDocument(violations)),
        Err(Error::InvalidDocument(mut v)) => {
            violations.append(&mut v);
            Err(Error::InvalidDocument(violations))
        }
        Err(e) => Err(e),
    }
}

/// Serializes an instance to its canonical document form.
pub fn save_instance(instance: &Instance) -> String {
    let doc = InstanceDoc {
        schema: SCHEMA_VERSION,
        tasks: instance
            .tasks()
            .iter()
            .map(|t| TaskDoc {
                id: t.id.clone(),
                data_size: t.data_size,
                compute_demand: t.compute_demand,
                deadline: t.deadline,
                profit: t.profit,
                reachable_aps: t
                    .reachable_aps
                    .iter()
                    .map(|&j| instance.aps()[j].id.clone())
                    .collect(),
            })
            .collect(),
        access_points: instance
            .aps()
            .iter()
            .map(|a| AccessPointDoc {
                id: a.id.clone(),
                bandwidth_capacity: a.bandwidth_capacity,
            })
            .collect(),
        servers: instance
            .servers()
            .iter()
            .map(|s| ServerDoc {
                id: s.id.clone(),
                compute_capacity: s.compute_capacity,
                kind: match s.kind {
                    ServerKind::Edge => "edge".into(),
                    ServerKind::Cloud => "cloud".into(),
                },
                colocated_ap: s.colocated_ap.map(|j| instance.aps()[j].id.clone()),
            })
            .collect(),
        delays: instance.topology().rows().map(|r| r.to_vec()).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("instance serialization cannot fail")
}

/// Parses and validates a solution document against an instance.
pub fn load_solution(text: &str, instance: &Instance) -> Result<Solution> {
    let doc: SolutionDoc = serde_json::from_str(text)?;
    let mut violations = Vec::new();
    if doc.schema != SCHEMA_VERSION {
        violations.push(format!(
            "unsupported schema version {}, expected {SCHEMA_VERSION}",
            doc.schema
        ));
    }
    let mut assignments = Vec::new();
    for a in &doc.assignments {
        let task = instance.task_index(&a.task);
        let ap = instance.ap_index(&a.access_point);
        let server = instance.server_index(&a.server);
        if task.is_none() {
            violations.push(format!("assignment references unknown task `{}`", a.task));
        }
        if ap.is_none() {
            violations.push(format!(
                "assignment references unknown access point `{}`",
                a.access_point
            ));
        }
        if server.is_none() {
            violations.push(format!("assignment references unknown server `{}`", a.server));
        }
        if !(a.bandwidth > 0.0) {
            violations.push(format!(
                "task `{}`: bandwidth grant {} must be > 0",
                a.task, a.bandwidth
            ));
        }
        if !(a.compute > 0.0) {
            violations.push(format!(
                "task `{}`: compute grant {} must be > 0",
                a.task, a.compute
            ));
        }
        if let (Some(task), Some(ap), Some(server)) = (task, ap, server) {
            assignments.push(Assignment {
                task,
                ap,
                server,
                bandwidth_grant: a.bandwidth,
                compute_grant: a.compute,
            });
        }
    }
    if !violations.is_empty() {
        return Err(Error::InvalidDocument(violations));
    }
    Ok(Solution {
        assignments,
        profit: doc.profit,
    })
}

/// Serializes a solution referencing the instance's ids.
pub fn save_solution(instance: &Instance, solution: &Solution) -> String {
    let doc = SolutionDoc {
        schema: SCHEMA_VERSION,
        assignments: solution
            .assignments
            .iter()
            .map(|a| AssignmentDoc {
                task: instance.tasks()[a.task].id.clone(),
                access_point: instance.aps()[a.ap].id.clone(),
                server: instance.servers()[a.server].id.clone(),
                bandwidth: a.bandwidth_grant,
                compute: a.compute_grant,
            })
            .collect(),
        profit: solution.profit,
    };
    serde_json::to_string_pretty(&doc).expect("solution serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "schema": 1,
        "tasks": [
            {"id": "t0", "data_size": 10.0, "compute_demand": 20.0, "deadline": 20.0,
             "profit": 10.0, "reachable_aps": ["ap0"]}
        ],
        "access_points": [{"id": "ap0", "bandwidth_capacity": 40.0}],
        "servers": [
            {"id": "s0", "compute_capacity": 40.0, "kind": "edge", "colocated_ap": "ap0"},
            {"id": "s1", "compute_capacity": 90.0, "kind": "cloud"}
        ],
        "delays": [[0.0, 4.0]]
    }"#;

    #[test]
    fn load_save_round_trip() {
        let instance = load_instance(SAMPLE).unwrap();
        let text = save_instance(&instance);
        let again = load_instance(&text).unwrap();
        assert_eq!(instance, again);
        // Serialization is canonical: a second save is byte-identical.
        assert_eq!(text, save_instance(&again));
    }

    #[test]
    fn load_reports_all_violations() {
        let bad = r#"{
            "schema": 7,
            "tasks": [
                {"id": "t0", "data_size": -1.0, "compute_demand": 1.0, "deadline": 5.0,
                 "profit": 1.0, "reachable_aps": ["nope"]}
            ],
            "access_points": [{"id": "ap0", "bandwidth_capacity": 40.0}],
            "servers": [{"id": "s0", "compute_capacity": 40.0, "kind": "mainframe"}],
            "delays": [[1.0]]
        }"#;
        match load_instance(bad) {
            Err(Error::InvalidDocument(v)) => {
                assert!(v.iter().any(|m| m.contains("schema version")), "{v:?}");
                assert!(v.iter().any(|m| m.contains("nope")), "{v:?}");
                assert!(v.iter().any(|m| m.contains("mainframe")), "{v:?}");
                assert!(v.iter().any(|m| m.contains("data size")), "{v:?}");
            }
            other => panic!("expected InvalidDocument, got {other:?}"),
        }
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        assert!(matches!(load_instance("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn solution_round_trip() {
        let instance = load_instance(SAMPLE).unwrap();
        let sol = Solution {
            assignments: vec![Assignment {
                task: 0,
                ap: 0,
                server: 0,
                bandwidth_grant: 1.5,
                compute_grant: 1.5,
            }],
            profit: 10.0,
        };
        let text = save_solution(&instance, &sol);
        let again = load_solution(&text, &instance).unwrap();
        assert_eq!(sol, again);
    }

    #[test]
    fn solution_rejects_dangling_ids_and_bad_grants() {
        let instance = load_instance(SAMPLE).unwrap();
        let bad = r#"{
            "schema": 1,
            "assignments": [
                {"task": "ghost", "access_point": "ap0", "server": "s0",
                 "bandwidth": 0.0, "compute": 1.0}
            ],
            "profit": 0.0
        }"#;
        match load_solution(bad, &instance) {
            Err(Error::InvalidDocument(v)) => {
                assert!(v.iter().any(|m| m.contains("ghost")));
                assert!(v.iter().any(|m| m.contains("bandwidth")));
            }
            other => panic!("expected InvalidDocument, got {other:?}"),
        }
    }
}
