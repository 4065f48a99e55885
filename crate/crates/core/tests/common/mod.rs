//! Shared helpers for the integration suites: a small-instance sampler whose
//! discretized unit budgets stay tiny, and independent exhaustive oracles
//! that never touch the solver code paths they are used to check.

#![allow(dead_code)]

use edgealloc_core::ldm::IlpModel;
use edgealloc_core::model::{AccessPoint, Instance, Server, ServerKind, Task, Topology};
use edgealloc_core::solver::{OptionSet, Valuation};
use rand::Rng;

/// Samples an instance with at most 6 tasks, 3 access points and 3 servers;
/// with unit size 1 every capacity is an integer budget of at most 4.
pub fn small_random_instance<R: Rng>(rng: &mut R) -> Instance {
    let n_aps = rng.gen_range(1..=3);
    let n_servers = rng.gen_range(1..=3);
    let n_tasks = rng.gen_range(1..=6);

    let aps: Vec<AccessPoint> = (0..n_aps)
        .map(|j| AccessPoint {
            id: format!("ap{j}"),
            bandwidth_capacity: rng.gen_range(1..=4) as f64,
        })
        .collect();
    let servers: Vec<Server> = (0..n_servers)
        .map(|k| Server {
            id: format!("s{k}"),
            compute_capacity: rng.gen_range(1..=4) as f64,
            kind: ServerKind::Edge,
            colocated_ap: None,
        })
        .collect();
    let delays: Vec<f64> = (0..n_aps * n_servers)
        .map(|_| rng.gen_range(0..=2) as f64)
        .collect();
    let topology = Topology::new(n_aps, n_servers, delays).unwrap();

    let tasks: Vec<Task> = (0..n_tasks)
        .map(|i| {
            let mut reachable: Vec<usize> = (0..n_aps).filter(|_| rng.gen_bool(0.5)).collect();
            if reachable.is_empty() {
                reachable.push(rng.gen_range(0..n_aps));
            }
            Task {
                id: format!("t{i}"),
                data_size: rng.gen_range(0.5..4.0),
                compute_demand: rng.gen_range(0.5..4.0),
                deadline: rng.gen_range(3.0..14.0),
                profit: rng.gen_range(1..=100) as f64,
                reachable_aps: reachable,
            }
        })
        .collect();

    Instance::new(tasks, aps, servers, topology).unwrap()
}

/// One candidate with real-valued resource demands, for the continuous
/// oracle.
#[derive(Debug, Clone, Copy)]
pub struct ContOption {
    pub ap: usize,
    pub server: usize,
    pub bandwidth: f64,
    pub compute: f64,
    pub profit: f64,
}

/// Exhaustive maximum profit over per-task choices with real-valued capacity
/// accounting. Capacity checks admit a relative tolerance so that options
/// designed to bind exactly stay admissible.
pub fn continuous_brute_force(
    per_task: &[Vec<ContOption>],
    ap_caps: &[f64],
    server_caps: &[f64],
    tol: f64,
) -> f64 {
    fn fits(used: f64, demand: f64, cap: f64, tol: f64) -> bool {
        used + demand <= cap * (1.0 + tol)
    }

    fn recurse(
        per_task: &[Vec<ContOption>],
        task: usize,
        ap_used: &mut [f64],
        server_used: &mut [f64],
        ap_caps: &[f64],
        server_caps: &[f64],
        tol: f64,
        profit: f64,
        best: &mut f64,
    ) {
        if task == per_task.len() {
            *best = best.max(profit);
            return;
        }
        for o in &per_task[task] {
            if fits(ap_used[o.ap], o.bandwidth, ap_caps[o.ap], tol)
                && fits(server_used[o.server], o.compute, server_caps[o.server], tol)
            {
                ap_used[o.ap] += o.bandwidth;
                server_used[o.server] += o.compute;
                recurse(
                    per_task,
                    task + 1,
                    ap_used,
                    server_used,
                    ap_caps,
                    server_caps,
                    tol,
                    profit + o.profit,
                    best,
                );
                ap_used[o.ap] -= o.bandwidth;
                server_used[o.server] -= o.compute;
            }
        }
        recurse(
            per_task,
            task + 1,
            ap_used,
            server_used,
            ap_caps,
            server_caps,
            tol,
            profit,
            best,
        );
    }

    let mut best = 0.0;
    recurse(
        per_task,
        0,
        &mut vec![0.0; ap_caps.len()],
        &mut vec![0.0; server_caps.len()],
        ap_caps,
        server_caps,
        tol,
        0.0,
        &mut best,
    );
    best
}

/// Enumerates every 0/1 valuation of a (small) model and returns the best
/// feasible objective. Independent of the option-view solvers.
pub fn exhaustive_model_optimum(model: &IlpModel, tol: f64) -> f64 {
    let n = model.vars().len();
    assert!(n <= 22, "exhaustive enumeration limited to tiny models, got {n} vars");
    let mut best = 0.0_f64;
    let mut values = vec![0.0; n];
    for mask in 0u64..(1 << n) {
        for (bit, v) in values.iter_mut().enumerate() {
            *v = ((mask >> bit) & 1) as f64;
        }
        if model.violated_rows(&values, tol).is_empty() {
            best = best.max(model.objective_value(&values));
        }
    }
    best
}

/// All feasible 0/1 valuations of a (small) model.
pub fn feasible_valuations(model: &IlpModel, tol: f64) -> Vec<Vec<f64>> {
    let n = model.vars().len();
    assert!(n <= 22, "exhaustive enumeration limited to tiny models, got {n} vars");
    let mut out = Vec::new();
    let mut values = vec![0.0; n];
    for mask in 0u64..(1 << n) {
        for (bit, v) in values.iter_mut().enumerate() {
            *v = ((mask >> bit) & 1) as f64;
        }
        if model.violated_rows(&values, tol).is_empty() {
            out.push(values.clone());
        }
    }
    out
}

/// Translates an option-view valuation into a 0/1 vector over the model's
/// variables (x, y and z of each chosen option set to one).
pub fn valuation_to_model_values(
    model: &IlpModel,
    options: &OptionSet,
    valuation: &Valuation,
) -> Vec<f64> {
    let mut values = vec![0.0; model.vars().len()];
    for (task, choice) in valuation.iter().enumerate() {
        if let Some(idx) = *choice {
            let o = options.per_task[task][idx];
            let x = model
                .x_var(task, o.ap, o.m)
                .expect("chosen bandwidth variable exists in model");
            let y = model
                .y_var(task, o.server, o.n)
                .expect("chosen compute variable exists in model");
            let z = model
                .z_var(task, o.ap, o.server)
                .expect("chosen pair variable exists in model");
            values[x] = 1.0;
            values[y] = 1.0;
            values[z] = 1.0;
        }
    }
    values
}
