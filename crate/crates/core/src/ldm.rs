//! Linear discretization of the mapping/allocation problem.
//!
//! Restricting grants to integer multiples of minimum units `b_unit` and
//! `c_unit` turns the nonconvex problem into a pure binary program: one
//! variable `x_{i,j,m}` per (task, access point, unit count), one `y_{i,k,n}`
//! per (task, server, unit count), and a linking variable `z_{i,j,k}` that is
//! forced to `min(sum_m x_ijm, sum_n y_ikn)` by its three linear rows. The
//! deadline constraint becomes linear because each unit count fixes its
//! reciprocal term, and capacities become integer budgets
//! `u_j = floor(b_j / b_unit)`, `v_k = floor(c_k / c_unit)`.
//!
//! The model is an interchange artifact: it can be exported in LP text format
//! for external solvers, while the in-process exact solver works on the
//! equivalent per-task option view (see [`crate::solver`]).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{within_limit, Assignment, Instance, Solution};

const LDM_TOL: f64 = 1e-9;

/// Minimum allocatable units of bandwidth and compute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscretizationConfig {
    pub b_unit: f64,
    pub c_unit: f64,
}

impl DiscretizationConfig {
    pub fn new(b_unit: f64, c_unit: f64) -> Result<Self> {
        if !(b_unit > 0.0) || !(c_unit > 0.0) {
            return Err(Error::NonPositiveUnit { b_unit, c_unit });
        }
        Ok(Self { b_unit, c_unit })
    }

    /// Integer bandwidth budget of each access point.
    pub fn ap_units(&self, instance: &Instance) -> Vec<u32> {
        instance
            .aps()
            .iter()
            .map(|a| (a.bandwidth_capacity / self.b_unit).floor() as u32)
            .collect()
    }

    /// Integer compute budget of each server.
    pub fn server_units(&self, instance: &Instance) -> Vec<u32> {
        instance
            .servers()
            .iter()
            .map(|s| (s.compute_capacity / self.c_unit).floor() as u32)
            .collect()
    }
}

/// Identity of one binary variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum VarKind {
    /// Task `task` offloads through access point `ap` with `units` bandwidth units.
    X { task: usize, ap: usize, units: u32 },
    /// Task `task` processes on server `server` with `units` compute units.
    Y {
        task: usize,
        server: usize,
        units: u32,
    },
    /// Task `task` uses the (access point, server) pair.
    Z {
        task: usize,
        ap: usize,
        server: usize,
    },
}

impl VarKind {
    pub fn lp_name(&self) -> String {
        match self {
            VarKind::X { task, ap, units } => format!("x_{task}_{ap}_{units}"),
            VarKind::Y {
                task,
                server,
                units,
            } => format!("y_{task}_{server}_{units}"),
            VarKind::Z { task, ap, server } => format!("z_{task}_{ap}_{server}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

/// Which constraint family a row belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowTag {
    /// Completion time of one task within its deadline.
    Deadline(usize),
    /// At most one access point per task.
    ApChoice(usize),
    /// At most one server per task.
    ServerChoice(usize),
    /// Unit budget of one access point.
    ApCapacity(usize),
    /// Unit budget of one server.
    ServerCapacity(usize),
    /// z >= sum x + sum y - 1 for one (task, ap, server).
    LinkLower(usize, usize, usize),
    /// z <= sum x for one (task, ap, server).
    LinkUpperX(usize, usize, usize),
    /// z <= sum y for one (task, ap, server).
    LinkUpperY(usize, usize, usize),
    /// Residue of a pruned z fixed to zero: the pair cannot be used jointly.
    PairExclusion(usize, usize, usize),
}

impl RowTag {
    fn lp_name(&self) -> String {
        match self {
            RowTag::Deadline(i) => format!("deadline_{i}"),
            RowTag::ApChoice(i) => format!("ap_choice_{i}"),
            RowTag::ServerChoice(i) => format!("server_choice_{i}"),
            RowTag::ApCapacity(j) => format!("ap_cap_{j}"),
            RowTag::ServerCapacity(k) => format!("server_cap_{k}"),
            RowTag::LinkLower(i, j, k) => format!("link_lo_{i}_{j}_{k}"),
            RowTag::LinkUpperX(i, j, k) => format!("link_ux_{i}_{j}_{k}"),
            RowTag::LinkUpperY(i, j, k) => format!("link_uy_{i}_{j}_{k}"),
            RowTag::PairExclusion(i, j, k) => format!("excl_{i}_{j}_{k}"),
        }
    }
}

/// One linear row: `sum coeff * var  (<=|>=|=)  rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub tag: RowTag,
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// Size summary of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelStats {
    pub variables: usize,
    pub rows: usize,
    pub nonzeros: usize,
}

/// The discretized binary program. Immutable after build.
#[derive(Debug, Clone, PartialEq)]
pub struct IlpModel {
    vars: Vec<VarKind>,
    rows: Vec<Row>,
    /// Maximize `sum coeff * var`.
    objective: Vec<(usize, f64)>,
    x_index: BTreeMap<(usize, usize, u32), usize>,
    y_index: BTreeMap<(usize, usize, u32), usize>,
    z_index: BTreeMap<(usize, usize, usize), usize>,
}

impl IlpModel {
    pub fn vars(&self) -> &[VarKind] {
        &self.vars
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn objective(&self) -> &[(usize, f64)] {
        &self.objective
    }

    pub fn x_var(&self, task: usize, ap: usize, units: u32) -> Option<usize> {
        self.x_index.get(&(task, ap, units)).copied()
    }

    pub fn y_var(&self, task: usize, server: usize, units: u32) -> Option<usize> {
        self.y_index.get(&(task, server, units)).copied()
    }

    pub fn z_var(&self, task: usize, ap: usize, server: usize) -> Option<usize> {
        self.z_index.get(&(task, ap, server)).copied()
    }

    pub fn stats(&self) -> ModelStats {
        ModelStats {
            variables: self.vars.len(),
            rows: self.rows.len(),
            nonzeros: self.rows.iter().map(|r| r.terms.len()).sum(),
        }
    }

    /// Objective value of a 0/1 valuation.
    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective
            .iter()
            .map(|&(v, coeff)| coeff * values[v])
            .sum()
    }

    /// Returns a description of every violated row (and of every variable
    /// that is not essentially binary). Empty means the valuation is feasible.
    pub fn violated_rows(&self, values: &[f64], tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        if values.len() != self.vars.len() {
            out.push(format!(
                "valuation has {} entries, model has {} variables",
                values.len(),
                self.vars.len()
            ));
            return out;
        }
        for (idx, v) in values.iter().enumerate() {
            if (v - 0.0).abs() > 1e-6 && (v - 1.0).abs() > 1e-6 {
                out.push(format!("{} = {v} is not binary", self.vars[idx].lp_name()));
            }
        }
        for row in &self.rows {
            let lhs: f64 = row.terms.iter().map(|&(v, c)| c * values[v]).sum();
            let slack_tol = tol * row.rhs.abs().max(1.0);
            let violated = match row.sense {
                Sense::Le => lhs > row.rhs + slack_tol,
                Sense::Ge => lhs < row.rhs - slack_tol,
                Sense::Eq => (lhs - row.rhs).abs() > slack_tol,
            };
            if violated {
                out.push(format!(
                    "{}: lhs {lhs} violates {} {}",
                    row.tag.lp_name(),
                    match row.sense {
                        Sense::Le => "<=",
                        Sense::Ge => ">=",
                        Sense::Eq => "=",
                    },
                    row.rhs
                ));
            }
        }
        out
    }

    /// Writes the model in LP text format: objective, subject-to rows and the
    /// binary section, with deterministic `x_i_j_m` / `y_i_k_n` / `z_i_j_k`
    /// variable names.
    pub fn export_lp(&self) -> String {
        let mut out = String::new();
        out.push_str("Maximize\n obj:");
        if self.objective.is_empty() {
            out.push_str(" 0");
        } else {
            for (pos, &(v, coeff)) in self.objective.iter().enumerate() {
                write_term(&mut out, pos == 0, coeff, &self.vars[v].lp_name());
            }
        }
        out.push_str("\nSubject To\n");
        for row in &self.rows {
            let _ = write!(out, " {}:", row.tag.lp_name());
            for (pos, &(v, coeff)) in row.terms.iter().enumerate() {
                write_term(&mut out, pos == 0, coeff, &self.vars[v].lp_name());
            }
            let sense = match row.sense {
                Sense::Le => "<=",
                Sense::Ge => ">=",
                Sense::Eq => "=",
            };
            let _ = writeln!(out, " {} {}", sense, row.rhs);
        }
        out.push_str("Binary\n");
        for var in &self.vars {
            let _ = writeln!(out, " {}", var.lp_name());
        }
        out.push_str("End\n");
        out
    }
}

fn write_term(out: &mut String, first: bool, coeff: f64, name: &str) {
    if coeff < 0.0 {
        let _ = write!(out, " - {} {}", -coeff, name);
    } else if first {
        let _ = write!(out, " {} {}", coeff, name);
    } else {
        let _ = write!(out, " + {} {}", coeff, name);
    }
}

/// Builds the full discretized model for an instance.
///
/// Variables exist only where they can be set: `x` for reachable access
/// points with at least one unit, `y` for servers with at least one unit,
/// and `z` where both sides exist (an empty side would force z to zero).
pub fn discretize(instance: &Instance, cfg: &DiscretizationConfig) -> Result<IlpModel> {
    if !(cfg.b_unit > 0.0) || !(cfg.c_unit > 0.0) {
        return Err(Error::NonPositiveUnit {
            b_unit: cfg.b_unit,
            c_unit: cfg.c_unit,
        });
    }
    Ok(build_model(instance, cfg, |_| true, &[]))
}

/// Removes variables that can never be 1 in a feasible valuation and rewrites
/// the affected rows, preserving the optimal objective value:
///
/// - `x_{i,j,m}` is dropped when even the most favorable partner cannot meet
///   the deadline: `s_i/(m b_unit) + 2 min_k delta_jk + q_i/(v_max c_unit)`
///   exceeds it; symmetrically for `y_{i,k,n}`;
/// - `z_{i,j,k}` is dropped when its pair's best case
///   `s_i/(u_j b_unit) + 2 delta_jk + q_i/(v_k c_unit)` exceeds the deadline,
///   or when either support side lost all variables. A dropped z with
///   surviving supports leaves behind its link row with z fixed to 0:
///   `sum_m x_ijm + sum_n y_ikn <= 1`.
pub fn prune(model: &IlpModel, instance: &Instance, cfg: &DiscretizationConfig) -> IlpModel {
    let u = cfg.ap_units(instance);
    let v = cfg.server_units(instance);
    let topo = instance.topology();

    let server_pool: Vec<usize> = (0..instance.servers().len())
        .filter(|&k| v[k] >= 1)
        .collect();
    let v_max = server_pool.iter().map(|&k| v[k]).max().unwrap_or(0);

    let keep = |kind: &VarKind| -> bool {
        match *kind {
            VarKind::X { task, ap, units } => {
                if server_pool.is_empty() {
                    return false;
                }
                let t = &instance.tasks()[task];
                let min_delay = server_pool
                    .iter()
                    .map(|&k| topo.delay(ap, k))
                    .fold(f64::INFINITY, f64::min);
                let best = t.data_size / (units as f64 * cfg.b_unit)
                    + 2.0 * min_delay
                    + t.compute_demand / (v_max as f64 * cfg.c_unit);
                within_limit(best, t.deadline, LDM_TOL)
            }
            VarKind::Y {
                task,
                server,
                units,
            } => {
                let t = &instance.tasks()[task];
                let ap_pool: Vec<usize> = t
                    .reachable_aps
                    .iter()
                    .copied()
                    .filter(|&j| u[j] >= 1)
                    .collect();
                if ap_pool.is_empty() {
                    return false;
                }
                let min_delay = ap_pool
                    .iter()
                    .map(|&j| topo.delay(j, server))
                    .fold(f64::INFINITY, f64::min);
                let u_max = ap_pool.iter().map(|&j| u[j]).max().unwrap_or(0);
                let best = t.data_size / (u_max as f64 * cfg.b_unit)
                    + 2.0 * min_delay
                    + t.compute_demand / (units as f64 * cfg.c_unit);
                within_limit(best, t.deadline, LDM_TOL)
            }
            VarKind::Z { task, ap, server } => {
                let t = &instance.tasks()[task];
                let best = t.data_size / (u[ap] as f64 * cfg.b_unit)
                    + 2.0 * topo.delay(ap, server)
                    + t.compute_demand / (v[server] as f64 * cfg.c_unit);
                within_limit(best, t.deadline, LDM_TOL)
            }
        }
    };

    // Pass 1: which variables of the input model pass their own bound.
    let mut x_alive: BTreeMap<(usize, usize), bool> = BTreeMap::new();
    let mut y_alive: BTreeMap<(usize, usize), bool> = BTreeMap::new();
    let mut passes: BTreeMap<VarKind, bool> = BTreeMap::new();
    for kind in model.vars() {
        let alive = keep(kind);
        passes.insert(*kind, alive);
        match *kind {
            VarKind::X { task, ap, .. } => {
                *x_alive.entry((task, ap)).or_insert(false) |= alive;
            }
            VarKind::Y { task, server, .. } => {
                *y_alive.entry((task, server)).or_insert(false) |= alive;
            }
            VarKind::Z { .. } => {}
        }
    }

    // Pass 2: a z additionally needs both support sides alive; a z pruned by
    // its pair bound while both sides survive leaves an exclusion row.
    let mut exclusions = Vec::new();
    for kind in model.vars() {
        if let VarKind::Z { task, ap, server } = *kind {
            let supported = x_alive.get(&(task, ap)).copied().unwrap_or(false)
                && y_alive.get(&(task, server)).copied().unwrap_or(false);
            if supported && !passes[kind] {
                exclusions.push((task, ap, server));
            }
        }
    }

    let filter = |kind: &VarKind| -> bool {
        // Restricting to the input model's variables keeps pruning idempotent.
        match passes.get(kind) {
            None => false,
            Some(false) => false,
            Some(true) => match *kind {
                VarKind::X { .. } | VarKind::Y { .. } => true,
                VarKind::Z { task, ap, server } => {
                    x_alive.get(&(task, ap)).copied().unwrap_or(false)
                        && y_alive.get(&(task, server)).copied().unwrap_or(false)
                }
            },
        }
    };

    build_model(instance, cfg, filter, &exclusions)
}

fn build_model(
    instance: &Instance,
    cfg: &DiscretizationConfig,
    filter: impl Fn(&VarKind) -> bool,
    exclusions: &[(usize, usize, usize)],
) -> IlpModel {
    let u = cfg.ap_units(instance);
    let v = cfg.server_units(instance);
    let n_tasks = instance.tasks().len();
    let n_servers = instance.servers().len();

    let mut vars = Vec::new();
    let mut x_index = BTreeMap::new();
    let mut y_index = BTreeMap::new();
    let mut z_index = BTreeMap::new();

    for (i, task) in instance.tasks().iter().enumerate() {
        for &j in &task.reachable_aps {
            for m in 1..=u[j] {
                let kind = VarKind::X {
                    task: i,
                    ap: j,
                    units: m,
                };
                if filter(&kind) {
                    x_index.insert((i, j, m), vars.len());
                    vars.push(kind);
                }
            }
        }
    }
    for i in 0..n_tasks {
        for (k, vk) in v.iter().enumerate() {
            for n in 1..=*vk {
                let kind = VarKind::Y {
                    task: i,
                    server: k,
                    units: n,
                };
                if filter(&kind) {
                    y_index.insert((i, k, n), vars.len());
                    vars.push(kind);
                }
            }
        }
    }
    for (i, task) in instance.tasks().iter().enumerate() {
        for &j in &task.reachable_aps {
            if u[j] == 0 {
                continue;
            }
            for k in 0..n_servers {
                if v[k] == 0 {
                    continue;
                }
                let kind = VarKind::Z {
                    task: i,
                    ap: j,
                    server: k,
                };
                if filter(&kind) {
                    z_index.insert((i, j, k), vars.len());
                    vars.push(kind);
                }
            }
        }
    }

    let objective: Vec<(usize, f64)> = z_index
        .iter()
        .map(|(&(i, _, _), &var)| (var, instance.tasks()[i].profit))
        .collect();

    let mut rows = Vec::new();

    // Deadline rows: offload reciprocal + two backhaul hops + processing
    // reciprocal, summed over every variable family of the task.
    for (i, task) in instance.tasks().iter().enumerate() {
        let mut terms = Vec::new();
        for &j in &task.reachable_aps {
            for m in 1..=u[j] {
                if let Some(&var) = x_index.get(&(i, j, m)) {
                    terms.push((var, task.data_size / (m as f64 * cfg.b_unit)));
                }
            }
        }
        for ((_, j, k), &var) in z_index.range((i, 0, 0)..(i + 1, 0, 0)) {
            let delay = instance.topology().delay(*j, *k);
            if delay != 0.0 {
                terms.push((var, 2.0 * delay));
            }
        }
        for (k, vk) in v.iter().enumerate() {
            for n in 1..=*vk {
                if let Some(&var) = y_index.get(&(i, k, n)) {
                    terms.push((var, task.compute_demand / (n as f64 * cfg.c_unit)));
                }
            }
        }
        if !terms.is_empty() {
            rows.push(Row {
                tag: RowTag::Deadline(i),
                terms,
                sense: Sense::Le,
                rhs: task.deadline,
            });
        }
    }

    // At most one access point / one server per task.
    for i in 0..n_tasks {
        let terms: Vec<_> = x_index
            .range((i, 0, 0)..(i + 1, 0, 0))
            .map(|(_, &var)| (var, 1.0))
            .collect();
        if !terms.is_empty() {
            rows.push(Row {
                tag: RowTag::ApChoice(i),
                terms,
                sense: Sense::Le,
                rhs: 1.0,
            });
        }
    }
    for i in 0..n_tasks {
        let terms: Vec<_> = y_index
            .range((i, 0, 0)..(i + 1, 0, 0))
            .map(|(_, &var)| (var, 1.0))
            .collect();
        if !terms.is_empty() {
            rows.push(Row {
                tag: RowTag::ServerChoice(i),
                terms,
                sense: Sense::Le,
                rhs: 1.0,
            });
        }
    }

    // Unit budgets.
    for (j, uj) in u.iter().enumerate() {
        let terms: Vec<_> = x_index
            .iter()
            .filter(|((_, ap, _), _)| *ap == j)
            .map(|((_, _, m), &var)| (var, *m as f64))
            .collect();
        if !terms.is_empty() {
            rows.push(Row {
                tag: RowTag::ApCapacity(j),
                terms,
                sense: Sense::Le,
                rhs: *uj as f64,
            });
        }
    }
    for (k, vk) in v.iter().enumerate() {
        let terms: Vec<_> = y_index
            .iter()
            .filter(|((_, server, _), _)| *server == k)
            .map(|((_, _, n), &var)| (var, *n as f64))
            .collect();
        if !terms.is_empty() {
            rows.push(Row {
                tag: RowTag::ServerCapacity(k),
                terms,
                sense: Sense::Le,
                rhs: *vk as f64,
            });
        }
    }

    // Linking: z = 1 exactly when both an x and a y of the pair are chosen.
    for (&(i, j, k), &z) in &z_index {
        let x_vars: Vec<usize> = x_index
            .range((i, j, 0)..(i, j, u32::MAX))
            .map(|(_, &var)| var)
            .collect();
        let y_vars: Vec<usize> = y_index
            .range((i, k, 0)..(i, k, u32::MAX))
            .map(|(_, &var)| var)
            .collect();

        let mut lower = Vec::with_capacity(x_vars.len() + y_vars.len() + 1);
        lower.extend(x_vars.iter().map(|&var| (var, 1.0)));
        lower.extend(y_vars.iter().map(|&var| (var, 1.0)));
        lower.push((z, -1.0));
        rows.push(Row {
            tag: RowTag::LinkLower(i, j, k),
            terms: lower,
            sense: Sense::Le,
            rhs: 1.0,
        });

        let mut upper_x = vec![(z, 1.0)];
        upper_x.extend(x_vars.iter().map(|&var| (var, -1.0)));
        rows.push(Row {
            tag: RowTag::LinkUpperX(i, j, k),
            terms: upper_x,
            sense: Sense::Le,
            rhs: 0.0,
        });

        let mut upper_y = vec![(z, 1.0)];
        upper_y.extend(y_vars.iter().map(|&var| (var, -1.0)));
        rows.push(Row {
            tag: RowTag::LinkUpperY(i, j, k),
            terms: upper_y,
            sense: Sense::Le,
            rhs: 0.0,
        });
    }

    // Link rows of pruned z variables with both supports alive, with z = 0
    // substituted: the pair cannot be selected jointly.
    for &(i, j, k) in exclusions {
        let mut terms: Vec<(usize, f64)> = x_index
            .range((i, j, 0)..(i, j, u32::MAX))
            .map(|(_, &var)| (var, 1.0))
            .collect();
        terms.extend(
            y_index
                .range((i, k, 0)..(i, k, u32::MAX))
                .map(|(_, &var)| (var, 1.0)),
        );
        if !terms.is_empty() {
            rows.push(Row {
                tag: RowTag::PairExclusion(i, j, k),
                terms,
                sense: Sense::Le,
                rhs: 1.0,
            });
        }
    }

    IlpModel {
        vars,
        rows,
        objective,
        x_index,
        y_index,
        z_index,
    }
}

/// Reads a feasible 0/1 valuation back into grants: for every selected pair,
/// the chosen unit counts scale the minimum units.
pub fn extract_solution(
    instance: &Instance,
    cfg: &DiscretizationConfig,
    model: &IlpModel,
    values: &[f64],
) -> Result<Solution> {
    if values.len() != model.vars.len() {
        return Err(Error::InconsistentValuation(format!(
            "valuation has {} entries, model has {} variables",
            values.len(),
            model.vars.len()
        )));
    }
    let selected = |idx: usize| values[idx] > 0.5;

    let mut assignments = Vec::new();
    let mut seen_task = vec![false; instance.tasks().len()];
    for (&(i, j, k), &z) in &model.z_index {
        if !selected(z) {
            continue;
        }
        if seen_task[i] {
            return Err(Error::InconsistentValuation(format!(
                "task `{}` selected through more than one pair",
                instance.tasks()[i].id
            )));
        }
        seen_task[i] = true;

        let chosen_m: Vec<u32> = model
            .x_index
            .range((i, j, 0)..(i, j, u32::MAX))
            .filter(|(_, &var)| selected(var))
            .map(|(&(_, _, m), _)| m)
            .collect();
        let chosen_n: Vec<u32> = model
            .y_index
            .range((i, k, 0)..(i, k, u32::MAX))
            .filter(|(_, &var)| selected(var))
            .map(|(&(_, _, n), _)| n)
            .collect();
        let (m, n) = match (chosen_m.as_slice(), chosen_n.as_slice()) {
            ([m], [n]) => (*m, *n),
            _ => {
                return Err(Error::InconsistentValuation(format!(
                    "task `{}` pair ({j}, {k}) selected with {} bandwidth and {} compute choices",
                    instance.tasks()[i].id,
                    chosen_m.len(),
                    chosen_n.len()
                )))
            }
        };
        assignments.push(Assignment {
            task: i,
            ap: j,
            server: k,
            bandwidth_grant: m as f64 * cfg.b_unit,
            compute_grant: n as f64 * cfg.c_unit,
        });
    }
    Ok(Solution::from_assignments(instance, assignments))
}
