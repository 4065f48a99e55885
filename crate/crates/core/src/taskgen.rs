//! Synthetic benchmark generation.
//!
//! Samples an edge-cloud architecture (integer capacities and delays from
//! fixed ranges, edge servers colocated one-per-access-point) and builds
//! tasksets with controlled resource pressure: per-access-point bandwidth
//! utilizations via Uunifast, system-wide compute utilizations via Stafford's
//! Randfixedsum, and bimodal deadlines anchored at either the maximum or the
//! mean backhaul delay.
//!
//! All sampling goes through a caller-supplied RNG; [`rng_from_seed`] returns
//! the fixed, portable generator (ChaCha12) so that a seed reproduces the
//! same instance byte-for-byte on any platform.

use rand::seq::index::sample as index_sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::model::{AccessPoint, Instance, Server, ServerKind, Task, Topology};

/// The deterministic RNG used throughout generation.
pub fn rng_from_seed(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Ranges and counts for architecture sampling. Capacities and delays are
/// integer-valued, drawn uniformly from closed ranges.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchitectureConfig {
    pub n_aps: usize,
    /// Edge servers are colocated with the first `n_edge_servers` access
    /// points, one per access point.
    pub n_edge_servers: usize,
    pub n_cloud_servers: usize,
    pub cloud_compute_range: (u32, u32),
    pub edge_compute_range: (u32, u32),
    pub bandwidth_range: (u32, u32),
    pub delay_range: (u32, u32),
}

impl Default for ArchitectureConfig {
    /// The full benchmark architecture: 20 access points, 20 colocated edge
    /// servers, 5 cloud servers.
    fn default() -> Self {
        Self {
            n_aps: 20,
            n_edge_servers: 20,
            n_cloud_servers: 5,
            cloud_compute_range: (80, 100),
            edge_compute_range: (40, 60),
            bandwidth_range: (40, 100),
            delay_range: (0, 10),
        }
    }
}

impl ArchitectureConfig {
    /// A small architecture (4 access points, 4 edge + 1 cloud server) for
    /// desk-scale experiment grids where exact solvers must finish.
    pub fn desk() -> Self {
        Self {
            n_aps: 4,
            n_edge_servers: 4,
            n_cloud_servers: 1,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        let mut violations = Vec::new();
        if self.n_edge_servers > self.n_aps {
            violations.push(format!(
                "{} edge servers cannot be colocated one-per-access-point with {} access points",
                self.n_edge_servers, self.n_aps
            ));
        }
        for (name, (lo, hi)) in [
            ("cloud compute", self.cloud_compute_range),
            ("edge compute", self.edge_compute_range),
            ("bandwidth", self.bandwidth_range),
            ("delay", self.delay_range),
        ] {
            if lo > hi {
                violations.push(format!("empty {name} range [{lo}, {hi}]"));
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidDocument(violations))
        }
    }
}

/// A sampled architecture, ready to receive tasksets.
#[derive(Debug, Clone, PartialEq)]
pub struct Architecture {
    pub aps: Vec<AccessPoint>,
    pub servers: Vec<Server>,
    pub topology: Topology,
}

/// Samples access points, servers and the backhaul delay matrix.
///
/// Colocated (access point, edge server) pairs get delay exactly 0; every
/// other pair draws an integer from the delay range (which may also be 0 --
/// colocation stays explicit in the server records).
pub fn sample_architecture<R: Rng>(cfg: &ArchitectureConfig, rng: &mut R) -> Result<Architecture> {
    cfg.validate()?;

    let aps: Vec<AccessPoint> = (0..cfg.n_aps)
        .map(|j| AccessPoint {
            id: format!("ap{j}"),
            bandwidth_capacity: rng.gen_range(cfg.bandwidth_range.0..=cfg.bandwidth_range.1) as f64,
        })
        .collect();

    let mut servers = Vec::with_capacity(cfg.n_edge_servers + cfg.n_cloud_servers);
    for e in 0..cfg.n_edge_servers {
        servers.push(Server {
            id: format!("edge{e}"),
            compute_capacity: rng.gen_range(cfg.edge_compute_range.0..=cfg.edge_compute_range.1)
                as f64,
            kind: ServerKind::Edge,
            colocated_ap: Some(e),
        });
    }
    for c in 0..cfg.n_cloud_servers {
        servers.push(Server {
            id: format!("cloud{c}"),
            compute_capacity: rng.gen_range(cfg.cloud_compute_range.0..=cfg.cloud_compute_range.1)
                as f64,
            kind: ServerKind::Cloud,
            colocated_ap: None,
        });
    }

    let n_servers = servers.len();
    let mut delays = Vec::with_capacity(cfg.n_aps * n_servers);
    for j in 0..cfg.n_aps {
        for server in &servers {
            if server.colocated_ap == Some(j) {
                delays.push(0.0);
            } else {
                delays.push(rng.gen_range(cfg.delay_range.0..=cfg.delay_range.1) as f64);
            }
        }
    }
    let topology = Topology::new(cfg.n_aps, n_servers, delays)?;

    Ok(Architecture {
        aps,
        servers,
        topology,
    })
}

/// Classic Uunifast: `n` positive values summing to `total`, unbiased over
/// the standard simplex.
pub fn uunifast<R: Rng>(n: usize, total: f64, rng: &mut R) -> Vec<f64> {
    assert!(n >= 1 && total > 0.0, "uunifast needs n >= 1 and total > 0");
    let mut values = Vec::with_capacity(n);
    let mut remaining = total;
    for count_left in (1..n).rev() {
        let u: f64 = rng.gen();
        let next = remaining * u.powf(1.0 / count_left as f64);
        values.push(remaining - next);
        remaining = next;
    }
    values.push(remaining);
    values
}

/// Stafford's Randfixedsum: `n` values in `(0, max_per]` summing to `total`,
/// uniform over that slice of the scaled simplex.
///
/// Direct port of the published construction: a probability table over
/// simplex regions is built once, then one region is selected and a point
/// placed inside it, which keeps the sampler unbiased even when
/// `total > max_per`.
pub fn randfixedsum<R: Rng>(n: usize, total: f64, max_per: f64, rng: &mut R) -> Result<Vec<f64>> {
    if n == 0 || !(total > 0.0) || !(max_per > 0.0) || total > n as f64 * max_per {
        return Err(Error::InfeasibleUtilization(format!(
            "randfixedsum needs 0 < total <= n * max_per, got n={n}, total={total}, max_per={max_per}"
        )));
    }
    if n == 1 {
        return Ok(vec![total]);
    }
    // Unique feasible point: every value pinned to the per-element cap.
    if total == n as f64 * max_per {
        return Ok(vec![max_per; n]);
    }

    // Work in the unit cube; rescale at the end.
    let s_target = total / max_per;
    let k = (s_target.floor() as usize).min(n - 1);
    let s = s_target.clamp(k as f64, (k + 1) as f64);

    let s1: Vec<f64> = (0..n).map(|i| s - (k as f64 - i as f64)).collect();
    let s2: Vec<f64> = (0..n).map(|i| (k + n - i) as f64 - s).collect();

    // Region probability table.
    let tiny = f64::MIN_POSITIVE;
    let mut w = vec![vec![0.0_f64; n + 1]; n];
    w[0][1] = f64::MAX;
    let mut t = vec![vec![0.0_f64; n]; n - 1];
    for i in 2..=n {
        for m in 1..=i {
            let m0 = m - 1;
            let tmp1 = w[i - 2][m] * s1[m0] / i as f64;
            let tmp2 = w[i - 2][m0] * s2[n - i + m0] / i as f64;
            w[i - 1][m] = tmp1 + tmp2;
            let tmp3 = w[i - 1][m] + tiny;
            t[i - 2][m0] = if s2[n - i + m0] > s1[m0] {
                tmp2 / tmp3
            } else {
                1.0 - tmp1 / tmp3
            };
        }
    }

    // Walk the table from the outermost dimension inwards.
    let mut x = vec![0.0_f64; n];
    let mut s_cur = s;
    let mut j1 = k + 1;
    let mut sum_acc = 0.0_f64;
    let mut prod_acc = 1.0_f64;
    for i in (1..n).rev() {
        let rt: f64 = rng.gen();
        let rs: f64 = rng.gen();
        let e = rt <= t[i - 1][j1 - 1];
        let sx = rs.powf(1.0 / i as f64);
        sum_acc += (1.0 - sx) * prod_acc * s_cur / (i + 1) as f64;
        prod_acc *= sx;
        x[n - i - 1] = sum_acc + prod_acc * if e { 1.0 } else { 0.0 };
        if e {
            s_cur -= 1.0;
            j1 -= 1;
        }
    }
    x[n - 1] = sum_acc + prod_acc * s_cur;

    // The construction is ordered; a random permutation restores
    // exchangeability.
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        x.swap(i, j);
    }

    for v in &mut x {
        *v *= max_per;
    }
    Ok(x)
}

/// Taskset shape and pressure knobs.
#[derive(Debug, Clone, PartialEq)]
pub struct TasksetGenConfig {
    pub n_tasks: usize,
    /// Target total bandwidth utilization per access point (`ub`, in (0, 1]).
    pub bandwidth_utilization: f64,
    /// Target total compute utilization of the whole system (`uc`, normalized
    /// by the smallest server capacity).
    pub compute_utilization: f64,
    /// Range of the number of access points covering a task.
    pub coverage_range: (usize, usize),
    pub profit_range: (u32, u32),
    /// Deadline = 2 * (max or mean delay) + offset, offset drawn from here.
    pub deadline_offset_range: (u32, u32),
}

impl TasksetGenConfig {
    pub fn new(n_tasks: usize, ub: f64, uc: f64) -> Self {
        Self {
            n_tasks,
            bandwidth_utilization: ub,
            compute_utilization: uc,
            coverage_range: (1, 2),
            profit_range: (10, 100),
            deadline_offset_range: (15, 45),
        }
    }

    fn validate(&self, arch: &Architecture) -> Result<()> {
        let mut violations = Vec::new();
        if self.n_tasks == 0 {
            violations.push("taskset must contain at least one task".to_string());
        }
        let ub = self.bandwidth_utilization;
        if !(ub > 0.0 && ub <= 1.0) {
            violations.push(format!("bandwidth utilization {ub} must be in (0, 1]"));
        }
        if !(self.compute_utilization > 0.0) {
            violations.push(format!(
                "compute utilization {} must be > 0",
                self.compute_utilization
            ));
        }
        if self.coverage_range.0 < 1 || self.coverage_range.0 > self.coverage_range.1 {
            violations.push(format!("bad coverage range {:?}", self.coverage_range));
        }
        if self.coverage_range.1 > arch.aps.len() {
            violations.push(format!(
                "coverage range {:?} exceeds the {} available access points",
                self.coverage_range,
                arch.aps.len()
            ));
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidDocument(violations))
        }
    }
}

/// The sampled utilizations behind a generated taskset, exposed so tests can
/// assert the sum and cap properties directly.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilizationProfile {
    /// Per access point: (task index, bandwidth utilization) for each covered
    /// task, in task order.
    pub bandwidth: Vec<Vec<(usize, f64)>>,
    /// Per task: compute utilization (each <= 1).
    pub compute: Vec<f64>,
    /// Per task: time window `tau = deadline - 2 * mean delay`.
    pub window: Vec<f64>,
}

/// Generates a taskset on a sampled architecture. See the module docs for
/// the sampling pipeline.
pub fn generate_taskset<R: Rng>(
    arch: &Architecture,
    cfg: &TasksetGenConfig,
    rng: &mut R,
) -> Result<Instance> {
    generate_taskset_with_profile(arch, cfg, rng).map(|(instance, _)| instance)
}

/// As [`generate_taskset`], additionally returning the utilization profile.
pub fn generate_taskset_with_profile<R: Rng>(
    arch: &Architecture,
    cfg: &TasksetGenConfig,
    rng: &mut R,
) -> Result<(Instance, UtilizationProfile)> {
    cfg.validate(arch)?;

    let delta_mean = arch.topology.mean_delay();
    let delta_max = arch.topology.max_delay();
    let n = cfg.n_tasks;

    let mut profits = Vec::with_capacity(n);
    let mut coverage: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut deadlines = Vec::with_capacity(n);
    let mut windows = Vec::with_capacity(n);
    for _ in 0..n {
        profits.push(rng.gen_range(cfg.profit_range.0..=cfg.profit_range.1) as f64);
        let k = rng.gen_range(cfg.coverage_range.0..=cfg.coverage_range.1);
        let mut reachable = index_sample(rng, arch.aps.len(), k).into_vec();
        reachable.sort_unstable();
        coverage.push(reachable);
        // Two deadline regimes with equal probability: anchored at the
        // largest delay (more time to spare) or at the mean delay (tighter).
        loop {
            let anchor = if rng.gen_bool(0.5) { delta_max } else { delta_mean };
            let offset = rng.gen_range(cfg.deadline_offset_range.0..=cfg.deadline_offset_range.1);
            let deadline = 2.0 * anchor + offset as f64;
            let tau = deadline - 2.0 * delta_mean;
            if tau > 0.0 {
                deadlines.push(deadline);
                windows.push(tau);
                break;
            }
        }
    }

    // Per-access-point bandwidth utilizations over the tasks it covers.
    let mut ub_per_ap: Vec<Vec<(usize, f64)>> = vec![Vec::new(); arch.aps.len()];
    for (j, entries) in ub_per_ap.iter_mut().enumerate() {
        let covered: Vec<usize> = (0..n).filter(|&i| coverage[i].contains(&j)).collect();
        if covered.is_empty() {
            continue; // vacuous total: this access point receives no tasks
        }
        let values = uunifast(covered.len(), cfg.bandwidth_utilization, rng);
        entries.extend(covered.into_iter().zip(values));
    }

    // System-wide compute utilizations, each capped at 1 so any server can
    // host any single task.
    let uc_values = randfixedsum(n, cfg.compute_utilization, 1.0, rng)?;
    let min_compute = arch
        .servers
        .iter()
        .map(|s| s.compute_capacity)
        .fold(f64::INFINITY, f64::min);

    let mut tasks = Vec::with_capacity(n);
    for i in 0..n {
        // Data size: the largest demand implied by any covering access point.
        let s_i = coverage[i]
            .iter()
            .map(|&j| {
                let ub_ji = ub_per_ap[j]
                    .iter()
                    .find(|(task, _)| *task == i)
                    .map(|(_, u)| *u)
                    .expect("covered task has a utilization entry");
                ub_ji * arch.aps[j].bandwidth_capacity * windows[i]
            })
            .fold(0.0, f64::max);
        let q_i = uc_values[i] * min_compute * windows[i];
        tasks.push(Task {
            id: format!("t{i}"),
            data_size: s_i,
            compute_demand: q_i,
            deadline: deadlines[i],
            profit: profits[i],
            reachable_aps: coverage[i].clone(),
        });
    }

    let instance = Instance::new(
        tasks,
        arch.aps.clone(),
        arch.servers.clone(),
        arch.topology.clone(),
    )?;
    let profile = UtilizationProfile {
        bandwidth: ub_per_ap,
        compute: uc_values,
        window: windows,
    };
    Ok((instance, profile))
}

/// Largest meaningful system compute utilization for an architecture:
/// total capacity normalized by the smallest server.
pub fn max_system_compute_utilization(arch: &Architecture) -> f64 {
    let total: f64 = arch.servers.iter().map(|s| s.compute_capacity).sum();
    let min = arch
        .servers
        .iter()
        .map(|s| s.compute_capacity)
        .fold(f64::INFINITY, f64::min);
    total / min
}

/// One-shot pipeline: seed -> architecture -> taskset.
pub fn generate_instance(
    arch_cfg: &ArchitectureConfig,
    cfg: &TasksetGenConfig,
    seed: u64,
) -> Result<Instance> {
    let mut rng = rng_from_seed(seed);
    let arch = sample_architecture(arch_cfg, &mut rng)?;
    generate_taskset(&arch, cfg, &mut rng)
}
