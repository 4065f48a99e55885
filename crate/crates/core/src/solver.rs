//! Exact desk-scale solvers for the discretized problem.
//!
//! Instead of handing the raw binary program to a matrix solver, the search
//! works on an equivalent per-task option view: every deadline-feasible
//! (access point, server, bandwidth units, compute units) combination of a
//! task is one option, and any consistent valuation of the model picks at
//! most one option per task under integer capacity budgets. Capacity
//! propagation is then integer-exact and needs no tolerances.
//!
//! Two solvers share this view: a depth-first branch-and-bound that proves
//! optimality (or honestly reports a exhausted budget), and a pure
//! enumeration oracle used by tests and acceptance runs.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::ldm::DiscretizationConfig;
use crate::model::{within_limit, Assignment, Instance, Solution};

const OPTION_TOL: f64 = 1e-9;

/// One deadline-feasible discretized choice for a task.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaskOption {
    pub task: usize,
    pub ap: usize,
    pub server: usize,
    /// Bandwidth units (1 ..= u_j).
    pub m: u32,
    /// Compute units (1 ..= v_k).
    pub n: u32,
    /// Profit contributed when this option is chosen (p_i of the task).
    pub profit: f64,
}

/// Per-task option lists plus the integer capacity budgets they are solved
/// against.
#[derive(Debug, Clone, PartialEq)]
pub struct OptionSet {
    pub per_task: Vec<Vec<TaskOption>>,
    pub ap_units: Vec<u32>,
    pub server_units: Vec<u32>,
}

impl OptionSet {
    /// Number of leaves of the full per-task choice tree (the +1 is the
    /// skip choice).
    pub fn enumeration_space(&self) -> f64 {
        self.per_task
            .iter()
            .map(|opts| opts.len() as f64 + 1.0)
            .product()
    }
}

/// Search budget for the branch-and-bound. Defaults mirror desk scale:
/// 10^7 nodes or 60 seconds, whichever comes first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_time: Duration,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_nodes: 10_000_000,
            max_time: Duration::from_secs(60),
        }
    }
}

/// Outcome statistics of one exact solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchStats {
    pub nodes: u64,
    /// (node count, incumbent profit) at every incumbent improvement.
    pub incumbent_trace: Vec<(u64, f64)>,
    pub wall_time: Duration,
    /// When set, the returned valuation is the exact optimum of the
    /// discretized model. Never silently suboptimal: a blown budget clears it.
    pub proven_optimal: bool,
}

/// A per-task choice among the option lists (`None` = task skipped).
pub type Valuation = Vec<Option<usize>>;

/// Enumerates every deadline-feasible option of every task, dominance-filtered:
/// within one (access point, server) pair an option using no more of both
/// resources than another (for the same profit) makes the larger one
/// pointless. Options differing in the pair are never compared.
pub fn enumerate_options(instance: &Instance, cfg: &DiscretizationConfig) -> OptionSet {
    build_options(instance, cfg, true)
}

/// As [`enumerate_options`] but keeping dominated options; the optimum must
/// not change, which the oracle tests assert.
pub fn enumerate_options_undominated(
    instance: &Instance,
    cfg: &DiscretizationConfig,
) -> OptionSet {
    build_options(instance, cfg, false)
}

fn build_options(instance: &Instance, cfg: &DiscretizationConfig, dominance: bool) -> OptionSet {
    let ap_units = cfg.ap_units(instance);
    let server_units = cfg.server_units(instance);
    let topo = instance.topology();

    let per_task = instance
        .tasks()
        .iter()
        .enumerate()
        .map(|(i, task)| {
            let mut options = Vec::new();
            for &j in &task.reachable_aps {
                if ap_units[j] == 0 {
                    continue;
                }
                for (k, &vk) in server_units.iter().enumerate() {
                    if vk == 0 {
                        continue;
                    }
                    let hops = 2.0 * topo.delay(j, k);
                    let mut best_n_so_far = u32::MAX;
                    for m in 1..=ap_units[j] {
                        let offload = task.data_size / (m as f64 * cfg.b_unit);
                        // Smallest compute unit count meeting the deadline at
                        // this bandwidth level.
                        let feasible_n = (1..=vk).find(|&n| {
                            let time =
                                offload + hops + task.compute_demand / (n as f64 * cfg.c_unit);
                            within_limit(time, task.deadline, OPTION_TOL)
                        });
                        match feasible_n {
                            None => continue,
                            Some(n_min) => {
                                if dominance {
                                    // (m, n_min) is on the Pareto frontier only
                                    // if it strictly improves on n at larger m.
                                    if n_min < best_n_so_far {
                                        best_n_so_far = n_min;
                                        options.push(TaskOption {
                                            task: i,
                                            ap: j,
                                            server: k,
                                            m,
                                            n: n_min,
                                            profit: task.profit,
                                        });
                                    }
                                } else {
                                    for n in n_min..=vk {
                                        options.push(TaskOption {
                                            task: i,
                                            ap: j,
                                            server: k,
                                            m,
                                            n,
                                            profit: task.profit,
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
            options
        })
        .collect();

    OptionSet {
        per_task,
        ap_units,
        server_units,
    }
}

struct SearchState<'a> {
    options: &'a OptionSet,
    /// Tasks in the order the search branches on them.
    order: Vec<usize>,
    /// Per-task option indices in exploration order (best reduced profit
    /// first). Valuations always store original option indices.
    child_order: Vec<Vec<usize>>,
    /// suffix_profit[d] = sum of profits of tasks at depth >= d that have
    /// at least one option.
    suffix_profit: Vec<f64>,
    residual_b: Vec<u32>,
    residual_c: Vec<u32>,
    chosen: Vec<Option<usize>>,
    best: Vec<Option<usize>>,
    best_profit: f64,
    /// Smallest profit increment a strictly better solution must add: 1 for
    /// all-integer profits (objective integrality), else effectively zero.
    profit_step: f64,
    /// Capacity prices from the root Lagrangian relaxation; any nonnegative
    /// prices give a valid bound, so root prices stay sound down the tree.
    ap_price: Vec<f64>,
    server_price: Vec<f64>,
    nodes: u64,
    trace: Vec<(u64, f64)>,
    budget: Budget,
    started: Instant,
    out_of_budget: bool,
}

/// Lagrangian dual value and subgradient at given capacity prices: every
/// task takes its best positive reduced profit `p - m*lambda - n*nu`, and
/// each unit of capacity earns its price.
fn lagrangian_value(
    options: &OptionSet,
    ap_price: &[f64],
    server_price: &[f64],
) -> (f64, Vec<f64>, Vec<f64>) {
    let mut value = 0.0;
    let mut g_ap: Vec<f64> = options.ap_units.iter().map(|&u| u as f64).collect();
    let mut g_server: Vec<f64> = options.server_units.iter().map(|&v| v as f64).collect();
    for (j, &u) in options.ap_units.iter().enumerate() {
        value += ap_price[j] * u as f64;
    }
    for (k, &v) in options.server_units.iter().enumerate() {
        value += server_price[k] * v as f64;
    }
    for opts in &options.per_task {
        let mut best_reduced = 0.0;
        let mut best_opt: Option<&TaskOption> = None;
        for o in opts {
            let reduced =
                o.profit - o.m as f64 * ap_price[o.ap] - o.n as f64 * server_price[o.server];
            if reduced > best_reduced {
                best_reduced = reduced;
                best_opt = Some(o);
            }
        }
        value += best_reduced;
        if let Some(o) = best_opt {
            g_ap[o.ap] -= o.m as f64;
            g_server[o.server] -= o.n as f64;
        }
    }
    (value, g_ap, g_server)
}

/// Polyak-style subgradient descent on the Lagrangian dual, targeting the
/// incumbent profit. Deterministic; returns the best prices seen.
fn optimize_prices(options: &OptionSet, incumbent: f64) -> (Vec<f64>, Vec<f64>) {
    let mut ap_price = vec![0.0; options.ap_units.len()];
    let mut server_price = vec![0.0; options.server_units.len()];
    let mut best_value = f64::INFINITY;
    let mut best = (ap_price.clone(), server_price.clone());
    let mut theta = 2.0;
    let mut stalled = 0;

    for _ in 0..200 {
        let (value, g_ap, g_server) = lagrangian_value(options, &ap_price, &server_price);
        if value < best_value {
            best_value = value;
            best = (ap_price.clone(), server_price.clone());
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= 12 {
                theta *= 0.5;
                stalled = 0;
                if theta < 1e-4 {
                    break;
                }
            }
        }
        let gap = value - incumbent;
        if gap <= 1e-9 {
            break; // dual already closed on the incumbent
        }
        let norm2: f64 = g_ap.iter().chain(g_server.iter()).map(|g| g * g).sum();
        if norm2 < 1e-12 {
            break;
        }
        let step = theta * gap / norm2;
        for (price, g) in ap_price.iter_mut().zip(&g_ap) {
            *price = (*price - step * g).max(0.0);
        }
        for (price, g) in server_price.iter_mut().zip(&g_server) {
            *price = (*price - step * g).max(0.0);
        }
    }
    best
}

impl SearchState<'_> {
    fn budget_exceeded(&mut self) -> bool {
        if self.out_of_budget {
            return true;
        }
        if self.nodes >= self.budget.max_nodes
            || (self.nodes % 1024 == 0 && self.started.elapsed() >= self.budget.max_time)
        {
            self.out_of_budget = true;
        }
        self.out_of_budget
    }

    /// Upper bound on the profit still reachable below `depth`: residual
    /// capacity valued at the root prices plus each remaining task's best
    /// reduced profit over its still-fitting options (capacities only shrink
    /// down the subtree, so an option that does not fit now never fits
    /// later).
    fn price_bound(&self, depth: usize) -> f64 {
        let mut bound = 0.0;
        for (j, &u) in self.residual_b.iter().enumerate() {
            bound += self.ap_price[j] * u as f64;
        }
        for (k, &v) in self.residual_c.iter().enumerate() {
            bound += self.server_price[k] * v as f64;
        }
        for &task in &self.order[depth..] {
            let mut best_reduced = 0.0;
            for o in &self.options.per_task[task] {
                if o.m <= self.residual_b[o.ap] && o.n <= self.residual_c[o.server] {
                    let reduced = o.profit
                        - o.m as f64 * self.ap_price[o.ap]
                        - o.n as f64 * self.server_price[o.server];
                    if reduced > best_reduced {
                        best_reduced = reduced;
                    }
                }
            }
            bound += best_reduced;
        }
        bound
    }

    fn dfs(&mut self, depth: usize, profit: f64) {
        self.nodes += 1;
        if self.budget_exceeded() {
            return;
        }
        if depth == self.order.len() {
            if profit > self.best_profit {
                self.best_profit = profit;
                self.best = self.chosen.clone();
                self.trace.push((self.nodes, profit));
            }
            return;
        }

        // A strictly better solution must reach best + profit_step; prune
        // when the bound falls short. Cheap static bound first; the priced
        // bound only when it fails to prune (it walks remaining options).
        let target = self.best_profit + self.profit_step;
        if profit + self.suffix_profit[depth] < target
            || profit + self.price_bound(depth) < target
        {
            return;
        }

        let task = self.order[depth];
        for pos in 0..self.child_order[task].len() {
            let idx = self.child_order[task][pos];
            let option = self.options.per_task[task][idx];
            if option.m <= self.residual_b[option.ap] && option.n <= self.residual_c[option.server]
            {
                self.residual_b[option.ap] -= option.m;
                self.residual_c[option.server] -= option.n;
                self.chosen[task] = Some(idx);
                self.dfs(depth + 1, profit + option.profit);
                self.chosen[task] = None;
                self.residual_b[option.ap] += option.m;
                self.residual_c[option.server] += option.n;
                if self.out_of_budget {
                    return;
                }
            }
        }
        self.dfs(depth + 1, profit);
    }

}

/// Greedy pass committing, task by task in `task_order`, the fitting option
/// that `score` ranks highest. Returns the valuation and its profit.
fn greedy_pass(
    options: &OptionSet,
    task_order: &[usize],
    score: impl Fn(&TaskOption) -> f64,
) -> (Valuation, f64) {
    let mut residual_b = options.ap_units.clone();
    let mut residual_c = options.server_units.clone();
    let mut chosen = vec![None; options.per_task.len()];
    let mut profit = 0.0;
    for &task in task_order {
        let mut pick: Option<(usize, f64)> = None;
        for (idx, o) in options.per_task[task].iter().enumerate() {
            if o.m <= residual_b[o.ap] && o.n <= residual_c[o.server] {
                let s = score(o);
                if pick.map_or(true, |(_, best)| s > best) {
                    pick = Some((idx, s));
                }
            }
        }
        if let Some((idx, _)) = pick {
            let o = options.per_task[task][idx];
            residual_b[o.ap] -= o.m;
            residual_c[o.server] -= o.n;
            chosen[task] = Some(idx);
            profit += o.profit;
        }
    }
    (chosen, profit)
}

/// Depth-first branch-and-bound over the per-task options.
///
/// The incumbent is seeded by two greedy passes (smallest footprint and best
/// reduced profit at the root Lagrangian prices); subtrees are pruned when
/// the priced relaxation bound cannot improve on it. With all-integer
/// profits the bound additionally exploits that any improvement is at least
/// one unit. Returns the best valuation found and whether it is provably
/// optimal (false exactly when the budget ran out).
pub fn branch_and_bound(options: &OptionSet, budget: &Budget) -> (Valuation, SearchStats) {
    let started = Instant::now();
    let n_tasks = options.per_task.len();

    // Footprint greedy for a first incumbent, then prices, then a
    // price-guided greedy that often lands very close to the optimum.
    let by_profit: Vec<usize> = {
        let mut order: Vec<usize> = (0..n_tasks)
            .filter(|&i| !options.per_task[i].is_empty())
            .collect();
        order.sort_by(|&a, &b| {
            options.per_task[b][0]
                .profit
                .total_cmp(&options.per_task[a][0].profit)
                .then(a.cmp(&b))
        });
        order
    };
    let (mut best, mut best_profit) =
        greedy_pass(options, &by_profit, |o| -((o.m + o.n) as f64));
    let mut trace = vec![(0, best_profit)];

    let (ap_price, server_price) = optimize_prices(options, best_profit);
    let reduced = |o: &TaskOption| {
        o.profit - o.m as f64 * ap_price[o.ap] - o.n as f64 * server_price[o.server]
    };

    // Reduced profit of each task's best fitting option, for ordering.
    let task_reduced: Vec<f64> = options
        .per_task
        .iter()
        .map(|opts| opts.iter().map(|o| reduced(o)).fold(0.0, f64::max))
        .collect();

    let (price_best, price_profit) = greedy_pass(options, &by_profit, reduced);
    if price_profit > best_profit {
        best = price_best;
        best_profit = price_profit;
        trace.push((0, best_profit));
    }

    // Branch on clear winners (large reduced profit) first.
    let mut order = by_profit;
    order.sort_by(|&a, &b| {
        task_reduced[b]
            .total_cmp(&task_reduced[a])
            .then(a.cmp(&b))
    });

    // Explore each task's options best-reduced-profit first.
    let child_order: Vec<Vec<usize>> = options
        .per_task
        .iter()
        .map(|opts| {
            let mut idx: Vec<usize> = (0..opts.len()).collect();
            idx.sort_by(|&a, &b| reduced(&opts[b]).total_cmp(&reduced(&opts[a])).then(a.cmp(&b)));
            idx
        })
        .collect();

    let mut suffix_profit = vec![0.0; order.len() + 1];
    for d in (0..order.len()).rev() {
        suffix_profit[d] = suffix_profit[d + 1] + options.per_task[order[d]][0].profit;
    }

    let integral_profits = options
        .per_task
        .iter()
        .flatten()
        .all(|o| o.profit.fract() == 0.0 && o.profit.abs() < 2e15);

    let mut state = SearchState {
        options,
        order,
        child_order,
        suffix_profit,
        residual_b: options.ap_units.clone(),
        residual_c: options.server_units.clone(),
        chosen: vec![None; n_tasks],
        best,
        best_profit,
        profit_step: if integral_profits { 1.0 - 1e-6 } else { 1e-9 },
        ap_price,
        server_price,
        nodes: 0,
        trace,
        budget: *budget,
        started,
        out_of_budget: false,
    };
    state.dfs(0, 0.0);

    let stats = SearchStats {
        nodes: state.nodes,
        incumbent_trace: state.trace,
        wall_time: state.started.elapsed(),
        proven_optimal: !state.out_of_budget,
    };
    (state.best, stats)
}

/// Exhaustive enumeration over all per-task choices; the oracle. Refuses to
/// run when the choice tree exceeds `cap` leaves.
pub fn brute_force(options: &OptionSet, cap: f64) -> Result<(Valuation, f64)> {
    let space = options.enumeration_space();
    if space > cap {
        return Err(Error::OracleCapExceeded { space, cap });
    }

    fn recurse(
        options: &OptionSet,
        task: usize,
        residual_b: &mut [u32],
        residual_c: &mut [u32],
        chosen: &mut Valuation,
        profit: f64,
        best: &mut (Valuation, f64),
    ) {
        if task == options.per_task.len() {
            if profit > best.1 {
                *best = (chosen.clone(), profit);
            }
            return;
        }
        for idx in 0..options.per_task[task].len() {
            let o = options.per_task[task][idx];
            if o.m <= residual_b[o.ap] && o.n <= residual_c[o.server] {
                residual_b[o.ap] -= o.m;
                residual_c[o.server] -= o.n;
                chosen[task] = Some(idx);
                recurse(
                    options,
                    task + 1,
                    residual_b,
                    residual_c,
                    chosen,
                    profit + o.profit,
                    best,
                );
                chosen[task] = None;
                residual_b[o.ap] += o.m;
                residual_c[o.server] += o.n;
            }
        }
        recurse(options, task + 1, residual_b, residual_c, chosen, profit, best);
    }

    let n_tasks = options.per_task.len();
    let mut best = (vec![None; n_tasks], 0.0);
    recurse(
        options,
        0,
        &mut options.ap_units.clone(),
        &mut options.server_units.clone(),
        &mut vec![None; n_tasks],
        0.0,
        &mut best,
    );
    Ok(best)
}

/// Profit of a valuation.
pub fn valuation_profit(options: &OptionSet, valuation: &Valuation) -> f64 {
    valuation
        .iter()
        .enumerate()
        .filter_map(|(task, choice)| choice.map(|idx| options.per_task[task][idx].profit))
        .sum()
}

/// Turns a valuation into grants: `m * b_unit` bandwidth and `n * c_unit`
/// compute per chosen option.
pub fn valuation_to_solution(
    instance: &Instance,
    cfg: &DiscretizationConfig,
    options: &OptionSet,
    valuation: &Valuation,
) -> Solution {
    let assignments = valuation
        .iter()
        .enumerate()
        .filter_map(|(task, choice)| {
            choice.map(|idx| {
                let o = options.per_task[task][idx];
                Assignment {
                    task,
                    ap: o.ap,
                    server: o.server,
                    bandwidth_grant: o.m as f64 * cfg.b_unit,
                    compute_grant: o.n as f64 * cfg.c_unit,
                }
            })
        })
        .collect();
    Solution::from_assignments(instance, assignments)
}

/// Result of one discretized solve: the extracted solution plus search
/// statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct LdmOutcome {
    pub solution: Solution,
    pub stats: SearchStats,
}

/// Full discretized pipeline: enumerate options (dominance-filtered unless
/// disabled), run branch-and-bound, extract the grants.
pub fn solve_ldm(
    instance: &Instance,
    cfg: &DiscretizationConfig,
    budget: &Budget,
    dominance: bool,
) -> LdmOutcome {
    let options = if dominance {
        enumerate_options(instance, cfg)
    } else {
        enumerate_options_undominated(instance, cfg)
    };
    let (valuation, stats) = branch_and_bound(&options, budget);
    let solution = valuation_to_solution(instance, cfg, &options, &valuation);
    LdmOutcome { solution, stats }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AccessPoint, Server, ServerKind, Task, Topology};

    fn instance(tasks: Vec<Task>, ap_caps: &[f64], server_caps: &[f64], delays: Vec<f64>) -> Instance {
        let aps = ap_caps
            .iter()
            .enumerate()
            .map(|(j, &b)| AccessPoint {
                id: format!("ap{j}"),
                bandwidth_capacity: b,
            })
            .collect();
        let servers = server_caps
            .iter()
            .enumerate()
            .map(|(k, &c)| Server {
                id: format!("s{k}"),
                compute_capacity: c,
                kind: ServerKind::Edge,
                colocated_ap: None,
            })
            .collect();
        let topology = Topology::new(ap_caps.len(), server_caps.len(), delays).unwrap();
        Instance::new(tasks, aps, servers, topology).unwrap()
    }

    fn task(id: &str, s: f64, q: f64, deadline: f64, profit: f64, aps: Vec<usize>) -> Task {
        Task {
            id: id.into(),
            data_size: s,
            compute_demand: q,
            deadline,
            profit,
            reachable_aps: aps,
        }
    }

    #[test]
    fn dominance_keeps_only_the_pareto_frontier() {
        // s = q = 10, deadline 6, one colocated pair, units of 5, u = v = 2:
        // all four (m, n) combinations meet the deadline; (1,1) dominates.
        let inst = instance(
            vec![task("t", 10.0, 10.0, 6.0, 1.0, vec![0])],
            &[10.0],
            &[10.0],
            vec![0.0],
        );
        let cfg = DiscretizationConfig::new(5.0, 5.0).unwrap();
        let dominated = enumerate_options(&inst, &cfg);
        assert_eq!(dominated.per_task[0].len(), 1);
        assert_eq!((dominated.per_task[0][0].m, dominated.per_task[0][0].n), (1, 1));

        let all = enumerate_options_undominated(&inst, &cfg);
        assert_eq!(all.per_task[0].len(), 4);
    }

    #[test]
    fn unreachable_deadline_gives_empty_options() {
        let inst = instance(
            vec![task("t", 1.0, 1.0, 3.0, 1.0, vec![0])],
            &[10.0],
            &[10.0],
            vec![2.0], // 2 * delta = 4 > 3
        );
        let cfg = DiscretizationConfig::new(5.0, 5.0).unwrap();
        let opts = enumerate_options(&inst, &cfg);
        assert!(opts.per_task[0].is_empty());
    }

    #[test]
    fn dominance_is_per_pair() {
        // Two servers at different delays: both pairs keep an option even
        // though one strictly needs more units, because dominance never
        // compares across pairs.
        let inst = instance(
            vec![task("t", 10.0, 10.0, 8.0, 1.0, vec![0])],
            &[10.0],
            &[10.0, 10.0],
            vec![0.0, 1.0],
        );
        let cfg = DiscretizationConfig::new(5.0, 5.0).unwrap();
        let opts = enumerate_options(&inst, &cfg);
        let pairs: Vec<usize> = opts.per_task[0].iter().map(|o| o.server).collect();
        assert!(pairs.contains(&0) && pairs.contains(&1));
    }

    #[test]
    fn disjoint_tasks_all_fit() {
        let tasks = vec![
            task("a", 5.0, 5.0, 10.0, 7.0, vec![0]),
            task("b", 5.0, 5.0, 10.0, 11.0, vec![1]),
        ];
        let inst = instance(tasks, &[10.0, 10.0], &[10.0, 10.0], vec![0.0; 4]);
        let cfg = DiscretizationConfig::new(5.0, 5.0).unwrap();
        let opts = enumerate_options(&inst, &cfg);
        let (valuation, stats) = branch_and_bound(&opts, &Budget::default());
        assert!(stats.proven_optimal);
        assert_eq!(valuation_profit(&opts, &valuation), 18.0);
    }

    #[test]
    fn contention_prefers_higher_profit() {
        // One access point with a single unit; only the 40-profit task wins.
        let tasks = vec![
            task("cheap", 4.0, 4.0, 10.0, 10.0, vec![0]),
            task("dear", 4.0, 4.0, 10.0, 40.0, vec![0]),
        ];
        let inst = instance(tasks, &[5.0], &[100.0], vec![0.0]);
        let cfg = DiscretizationConfig::new(5.0, 5.0).unwrap();
        let opts = enumerate_options(&inst, &cfg);
        assert!(opts.per_task.iter().all(|o| o.iter().all(|x| x.m == 1)));
        let (valuation, stats) = branch_and_bound(&opts, &Budget::default());
        assert!(stats.proven_optimal);
        assert_eq!(valuation_profit(&opts, &valuation), 40.0);
        assert!(valuation[0].is_none());
        assert!(valuation[1].is_some());
    }

    #[test]
    fn brute_force_empty_taskset_is_zero() {
        let opts = OptionSet {
            per_task: vec![],
            ap_units: vec![],
            server_units: vec![],
        };
        let (_, profit) = brute_force(&opts, 1e7).unwrap();
        assert_eq!(profit, 0.0);
    }

    #[test]
    fn brute_force_refuses_oversized_spaces() {
        let opts = OptionSet {
            per_task: vec![
                vec![
                    TaskOption {
                        task: 0,
                        ap: 0,
                        server: 0,
                        m: 1,
                        n: 1,
                        profit: 1.0
                    };
                    9
                ];
                10
            ],
            ap_units: vec![100],
            server_units: vec![100],
        };
        // 10^10 leaves > cap.
        assert!(matches!(
            brute_force(&opts, 1e7),
            Err(Error::OracleCapExceeded { .. })
        ));
    }

    #[test]
    fn node_budget_exhaustion_clears_proven_optimal() {
        // The seeded greedy takes the 100-profit task (3 of 4 bandwidth
        // units), locking out both 60-profit tasks; the true optimum skips
        // it. A tiny node budget stops the search before it can prove that.
        let tasks = vec![
            task("a", 3.0, 0.0001, 1.01, 100.0, vec![0]),
            task("b", 2.0, 0.0001, 1.01, 60.0, vec![0]),
            task("c", 2.0, 0.0001, 1.01, 60.0, vec![0]),
        ];
        let inst = instance(tasks, &[4.0], &[100.0], vec![0.0]);
        let cfg = DiscretizationConfig::new(1.0, 1.0).unwrap();
        let opts = enumerate_options(&inst, &cfg);

        let (valuation, stats) = branch_and_bound(&opts, &Budget::default());
        assert!(stats.proven_optimal);
        assert_eq!(valuation_profit(&opts, &valuation), 120.0);

        let tight = Budget {
            max_nodes: 3,
            max_time: Duration::from_secs(60),
        };
        let (incumbent, stats) = branch_and_bound(&opts, &tight);
        assert!(!stats.proven_optimal);
        assert_eq!(valuation_profit(&opts, &incumbent), 100.0);
    }

    #[test]
    fn solution_extraction_scales_units() {
        let inst = instance(
            vec![task("t", 10.0, 10.0, 6.0, 5.0, vec![0])],
            &[10.0],
            &[10.0],
            vec![0.0],
        );
        let cfg = DiscretizationConfig::new(5.0, 5.0).unwrap();
        let outcome = solve_ldm(&inst, &cfg, &Budget::default(), true);
        assert!(outcome.stats.proven_optimal);
        assert_eq!(outcome.solution.profit, 5.0);
        let a = &outcome.solution.assignments[0];
        assert_eq!(a.bandwidth_grant, 5.0);
        assert_eq!(a.compute_grant, 5.0);
    }
}
