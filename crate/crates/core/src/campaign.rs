//! Experiment harness: runs the solvers across taskset grids and compares
//! them by profit gain ratio.
//!
//! One architecture is sampled from the master seed and kept fixed; tasksets
//! vary over a grid of (size, bandwidth utilization, compute utilization,
//! seed). Every solution is re-verified before its row is recorded. Output is
//! a CSV of per-(taskset, algorithm) rows, a JSON summary with mean/median
//! ratios bucketed by intensive-task percentage deciles and by taskset size,
//! and SVG box plots of the same buckets. All non-timing fields are a pure
//! function of the grid and seeds; `wall_ms` is informational.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ldm::DiscretizationConfig;
use crate::model::{objective_value, Instance, Solution, DEFAULT_TOL};
use crate::plot::{box_stats, render_box_plot, BoxGroup};
use crate::solver::{solve_ldm, brute_force, enumerate_options, valuation_to_solution, Budget};
use crate::taskgen::{generate_taskset, rng_from_seed, sample_architecture, ArchitectureConfig, TasksetGenConfig};
use crate::verify::verify;
use crate::zsg::zsg_solve;

/// Fraction of the minimum capacity above which a task's demand rate makes
/// it resource intensive.
const INTENSITY_THRESHOLD: f64 = 0.2;

/// Achieved profit over the taskset's total available profit.
///
/// A zero-profit taskset with a zero-profit solution counts as ratio 1; a
/// positive solution profit against zero total is a modeling error.
pub fn profit_gain_ratio(instance: &Instance, solution: &Solution) -> Result<f64> {
    let achieved = objective_value(instance, solution)?;
    let total = instance.total_profit();
    if total == 0.0 {
        return if achieved == 0.0 {
            Ok(1.0)
        } else {
            Err(Error::DegenerateInstance(achieved))
        };
    }
    Ok(achieved / total)
}

/// Per-task resource pressure flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TaskIntensity {
    pub computation: bool,
    pub bandwidth: bool,
}

/// Flags each task whose demand rate over its window `tau = deadline - 2 *
/// mean delay` exceeds 20% of the smallest relevant capacity (strictly).
pub fn classify_intensity(instance: &Instance) -> Vec<TaskIntensity> {
    let delta_mean = instance.topology().mean_delay();
    let min_compute = instance
        .servers()
        .iter()
        .map(|s| s.compute_capacity)
        .fold(f64::INFINITY, f64::min);
    instance
        .tasks()
        .iter()
        .map(|t| {
            let tau = t.deadline - 2.0 * delta_mean;
            let min_bandwidth = t
                .reachable_aps
                .iter()
                .map(|&j| instance.aps()[j].bandwidth_capacity)
                .fold(f64::INFINITY, f64::min);
            TaskIntensity {
                computation: t.compute_demand / tau > INTENSITY_THRESHOLD * min_compute,
                bandwidth: t.data_size / tau > INTENSITY_THRESHOLD * min_bandwidth,
            }
        })
        .collect()
}

/// Which algorithm a campaign cell runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlgoSpec {
    Zsg,
    Ldm { b_unit: f64, c_unit: f64 },
    /// Enumeration oracle at the given units; only sensible on tiny grids.
    Brute { b_unit: f64, c_unit: f64 },
}

impl AlgoSpec {
    pub fn tag(&self) -> &'static str {
        match self {
            AlgoSpec::Zsg => "zsg",
            AlgoSpec::Ldm { .. } => "ldm",
            AlgoSpec::Brute { .. } => "brute",
        }
    }

    pub fn units(&self) -> Option<(f64, f64)> {
        match *self {
            AlgoSpec::Zsg => None,
            AlgoSpec::Ldm { b_unit, c_unit } | AlgoSpec::Brute { b_unit, c_unit } => {
                Some((b_unit, c_unit))
            }
        }
    }

    /// Human label for plots and summaries, e.g. `ldm-5` or `ldm-5x15`.
    pub fn label(&self) -> String {
        match self.units() {
            None => self.tag().to_string(),
            Some((b, c)) if b == c => format!("{}-{}", self.tag(), b),
            Some((b, c)) => format!("{}-{}x{}", self.tag(), b, c),
        }
    }
}

/// One row of the campaign CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub taskset_id: String,
    pub seed: u64,
    pub n_tasks: usize,
    pub ub: f64,
    pub uc: f64,
    pub algo: String,
    pub b_unit: Option<f64>,
    pub c_unit: Option<f64>,
    pub profit: f64,
    pub ratio: f64,
    pub wall_ms: f64,
    pub optimal: bool,
    pub pct_ci: f64,
    pub pct_bi: f64,
}

pub const CSV_HEADER: &str =
    "taskset_id,seed,n_tasks,ub,uc,algo,b_unit,c_unit,profit,ratio,wall_ms,optimal,pct_ci,pct_bi";

impl RunRecord {
    pub fn csv_row(&self) -> String {
        let opt_unit = |u: Option<f64>| u.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{:.3},{},{},{}",
            self.taskset_id,
            self.seed,
            self.n_tasks,
            self.ub,
            self.uc,
            self.algo,
            opt_unit(self.b_unit),
            opt_unit(self.c_unit),
            self.profit,
            self.ratio,
            self.wall_ms,
            self.optimal,
            self.pct_ci,
            self.pct_bi
        )
    }

    /// Label matching [`AlgoSpec::label`].
    pub fn algo_label(&self) -> String {
        match (self.b_unit, self.c_unit) {
            (Some(b), Some(c)) if b == c => format!("{}-{}", self.algo, b),
            (Some(b), Some(c)) => format!("{}-{}x{}", self.algo, b, c),
            _ => self.algo.clone(),
        }
    }
}

/// Grid and solver settings of one campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub architecture: ArchitectureConfig,
    /// Seed for the one fixed architecture.
    pub master_seed: u64,
    pub sizes: Vec<usize>,
    pub ub_values: Vec<f64>,
    pub uc_values: Vec<f64>,
    /// Taskset seeds, reused across grid points (common random numbers).
    pub seeds: Vec<u64>,
    pub algorithms: Vec<AlgoSpec>,
    pub budget: Budget,
    /// When set, each exact solve's time budget becomes `multiplier x` the
    /// largest observed greedy runtime within the same taskset-size bucket
    /// (never below one second so desk-scale solves are not starved).
    pub ldm_budget_multiplier: Option<f64>,
    pub tol: f64,
}

impl CampaignConfig {
    /// The desk-scale default grid: 3 sizes x 3 ub x 3 uc x 10 seeds on the
    /// small architecture, comparing the greedy against exact solves at
    /// units 5 and 15.
    pub fn desk_default() -> Self {
        Self {
            architecture: ArchitectureConfig::desk(),
            master_seed: 7,
            sizes: vec![10, 20, 30],
            ub_values: vec![0.3, 0.6, 0.9],
            uc_values: vec![1.0, 2.5, 4.0],
            seeds: (0..10).collect(),
            algorithms: vec![
                AlgoSpec::Zsg,
                AlgoSpec::Ldm {
                    b_unit: 5.0,
                    c_unit: 5.0,
                },
                AlgoSpec::Ldm {
                    b_unit: 15.0,
                    c_unit: 15.0,
                },
            ],
            budget: Budget::default(),
            ldm_budget_multiplier: None,
            tol: DEFAULT_TOL,
        }
    }
}

struct Cell {
    taskset_id: String,
    seed: u64,
    n_tasks: usize,
    ub: f64,
    uc: f64,
    instance: Instance,
    pct_ci: f64,
    pct_bi: f64,
}

fn solve_cell(cell: &Cell, algo: &AlgoSpec, budget: &Budget, tol: f64) -> Result<RunRecord> {
    let started = Instant::now();
    let (solution, optimal) = match *algo {
        AlgoSpec::Zsg => (zsg_solve(&cell.instance), true),
        AlgoSpec::Ldm { b_unit, c_unit } => {
            let cfg = DiscretizationConfig::new(b_unit, c_unit)?;
            let outcome = solve_ldm(&cell.instance, &cfg, budget, true);
            (outcome.solution, outcome.stats.proven_optimal)
        }
        AlgoSpec::Brute { b_unit, c_unit } => {
            let cfg = DiscretizationConfig::new(b_unit, c_unit)?;
            let options = enumerate_options(&cell.instance, &cfg);
            let (valuation, _) = brute_force(&options, 1e7)?;
            (
                valuation_to_solution(&cell.instance, &cfg, &options, &valuation),
                true,
            )
        }
    };
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;

    let report = verify(&cell.instance, &solution, tol)?;
    if !report.feasible {
        return Err(Error::InconsistentValuation(format!(
            "{} produced an infeasible solution on {}: {:?}",
            algo.label(),
            cell.taskset_id,
            report.violations
        )));
    }

    let units = algo.units();
    Ok(RunRecord {
        taskset_id: cell.taskset_id.clone(),
        seed: cell.seed,
        n_tasks: cell.n_tasks,
        ub: cell.ub,
        uc: cell.uc,
        algo: algo.tag().to_string(),
        b_unit: units.map(|(b, _)| b),
        c_unit: units.map(|(_, c)| c),
        profit: solution.profit,
        ratio: profit_gain_ratio(&cell.instance, &solution)?,
        wall_ms,
        optimal,
        pct_ci: cell.pct_ci,
        pct_bi: cell.pct_bi,
    })
}

/// Runs the whole grid. Rows come back sorted by (taskset, algorithm) so the
/// output is order-independent of the parallel schedule.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<Vec<RunRecord>> {
    let mut arch_rng = rng_from_seed(cfg.master_seed);
    let arch = sample_architecture(&cfg.architecture, &mut arch_rng)?;

    let mut cells = Vec::new();
    for &n in &cfg.sizes {
        for &ub in &cfg.ub_values {
            for &uc in &cfg.uc_values {
                for &seed in &cfg.seeds {
                    let gen_cfg = TasksetGenConfig::new(n, ub, uc);
                    let mut rng = rng_from_seed(seed);
                    let instance = generate_taskset(&arch, &gen_cfg, &mut rng)?;
                    let intensity = classify_intensity(&instance);
                    let pct = |f: fn(&TaskIntensity) -> bool| {
                        100.0 * intensity.iter().filter(|t| f(t)).count() as f64 / n as f64
                    };
                    cells.push(Cell {
                        taskset_id: format!("n{n}-ub{ub}-uc{uc}-s{seed}"),
                        seed,
                        n_tasks: n,
                        ub,
                        uc,
                        instance,
                        pct_ci: pct(|t| t.computation),
                        pct_bi: pct(|t| t.bandwidth),
                    });
                }
            }
        }
    }

    // Exact-solver budgets, optionally scaled from observed greedy runtimes
    // per size bucket.
    let exact_budget: Box<dyn Fn(usize) -> Budget + Sync> = match cfg.ldm_budget_multiplier {
        None => Box::new(|_| cfg.budget),
        Some(multiplier) => {
            let mut max_by_size: Vec<(usize, f64)> = cfg.sizes.iter().map(|&n| (n, 0.0)).collect();
            let zsg_times: Vec<(usize, f64)> = cells
                .par_iter()
                .map(|cell| {
                    let started = Instant::now();
                    let _ = zsg_solve(&cell.instance);
                    (cell.n_tasks, started.elapsed().as_secs_f64())
                })
                .collect();
            for (n, secs) in zsg_times {
                if let Some(entry) = max_by_size.iter_mut().find(|(size, _)| *size == n) {
                    entry.1 = entry.1.max(secs);
                }
            }
            let base = cfg.budget;
            Box::new(move |n: usize| {
                let zsg_max = max_by_size
                    .iter()
                    .find(|(size, _)| *size == n)
                    .map(|(_, secs)| *secs)
                    .unwrap_or(0.0);
                Budget {
                    max_nodes: base.max_nodes,
                    max_time: Duration::from_secs_f64((multiplier * zsg_max).max(1.0)),
                }
            })
        }
    };

    let mut records: Vec<RunRecord> = cells
        .par_iter()
        .map(|cell| {
            cfg.algorithms
                .iter()
                .map(|algo| solve_cell(cell, algo, &exact_budget(cell.n_tasks), cfg.tol))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    records.sort_by(|a, b| {
        (&a.taskset_id, &a.algo, a.b_unit.unwrap_or(0.0))
            .partial_cmp(&(&b.taskset_id, &b.algo, b.b_unit.unwrap_or(0.0)))
            .expect("record keys are finite")
    });
    Ok(records)
}

/// Serializes records as the fixed-header campaign CSV.
pub fn records_to_csv(records: &[RunRecord]) -> String {
    let mut out = String::with_capacity(records.len() * 96);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct BucketSummary {
    pub bucket: String,
    pub algo: String,
    pub count: usize,
    pub mean_ratio: f64,
    pub median_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    /// How the intensity axes are bucketed.
    pub bucket_definition: String,
    pub by_computation_intensity: Vec<BucketSummary>,
    pub by_bandwidth_intensity: Vec<BucketSummary>,
    pub by_taskset_size: Vec<BucketSummary>,
    pub notes: Vec<String>,
}

fn decile_label(pct: f64) -> String {
    let d = ((pct / 10.0).floor() as usize).min(9);
    format!("{}-{}%", d * 10, (d + 1) * 10)
}

fn all_decile_labels() -> Vec<String> {
    (0..10).map(|d| format!("{}-{}%", d * 10, (d + 1) * 10)).collect()
}

fn bucketize(
    records: &[RunRecord],
    buckets: &[String],
    bucket_of: impl Fn(&RunRecord) -> String,
) -> (Vec<BucketSummary>, Vec<BoxGroup>, Vec<String>) {
    let mut algos: Vec<String> = Vec::new();
    for r in records {
        let label = r.algo_label();
        if !algos.contains(&label) {
            algos.push(label);
        }
    }

    let mut summaries = Vec::new();
    let mut groups = Vec::new();
    let mut empty = Vec::new();
    for bucket in buckets {
        let mut series = Vec::new();
        for algo in &algos {
            let values: Vec<f64> = records
                .iter()
                .filter(|r| &bucket_of(r) == bucket && &r.algo_label() == algo)
                .map(|r| r.ratio)
                .collect();
            if let Some(stats) = box_stats(&values) {
                summaries.push(BucketSummary {
                    bucket: bucket.clone(),
                    algo: algo.clone(),
                    count: stats.count,
                    mean_ratio: stats.mean,
                    median_ratio: stats.median,
                });
                series.push((algo.clone(), stats));
            }
        }
        if series.is_empty() {
            empty.push(bucket.clone());
        } else {
            groups.push(BoxGroup {
                bucket: bucket.clone(),
                series,
            });
        }
    }
    (summaries, groups, empty)
}

/// Aggregates records into the summary and the three figures' box groups.
pub fn summarize(records: &[RunRecord]) -> (Summary, Vec<(String, Vec<BoxGroup>)>) {
    let deciles = all_decile_labels();
    let (by_ci, groups_ci, empty_ci) =
        bucketize(records, &deciles, |r| decile_label(r.pct_ci));
    let (by_bi, groups_bi, empty_bi) =
        bucketize(records, &deciles, |r| decile_label(r.pct_bi));

    let mut sizes: Vec<usize> = records.iter().map(|r| r.n_tasks).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let size_buckets: Vec<String> = sizes.iter().map(|n| n.to_string()).collect();
    let (by_size, groups_size, _) =
        bucketize(records, &size_buckets, |r| r.n_tasks.to_string());

    let mut notes = Vec::new();
    for (axis, empties) in [("computation intensity", empty_ci), ("bandwidth intensity", empty_bi)]
    {
        if !empties.is_empty() {
            notes.push(format!(
                "empty {axis} buckets omitted from plots: {}",
                empties.join(", ")
            ));
        }
    }

    let summary = Summary {
        bucket_definition: "intensity axes bucketed by deciles of the percentage of intensive tasks; size axis bucketed by taskset size".to_string(),
        by_computation_intensity: by_ci,
        by_bandwidth_intensity: by_bi,
        by_taskset_size: by_size,
        notes,
    };
    let figures = vec![
        ("fig_ci.svg".to_string(), groups_ci),
        ("fig_bi.svg".to_string(), groups_bi),
        ("fig_size.svg".to_string(), groups_size),
    ];
    (summary, figures)
}

/// Writes records.csv, summary.json and the three SVG figures into `dir`.
pub fn write_campaign_outputs(dir: &Path, records: &[RunRecord]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("records.csv"), records_to_csv(records))?;

    let (summary, figures) = summarize(records);
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    std::fs::write(dir.join("summary.json"), json)?;

    for (name, groups) in figures {
        let (title, x_label) = match name.as_str() {
            "fig_ci.svg" => (
                "Profit gain ratio vs computation-intensive tasks",
                "% computation-intensive tasks",
            ),
            "fig_bi.svg" => (
                "Profit gain ratio vs bandwidth-intensive tasks",
                "% bandwidth-intensive tasks",
            ),
            _ => ("Profit gain ratio vs taskset size", "taskset size"),
        };
        let svg = render_box_plot(title, x_label, "profit gain ratio", &groups);
        std::fs::write(dir.join(&name), svg)?;
    }
    Ok(())
}

/// Mean profit gain ratio of one algorithm label across records.
pub fn mean_ratio(records: &[RunRecord], label: &str) -> Option<f64> {
    let values: Vec<f64> = records
        .iter()
        .filter(|r| r.algo_label() == label)
        .map(|r| r.ratio)
        .collect();
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

/// Writes one summary line per figure bucket to make grids self-describing.
pub fn summary_text(summary: &Summary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", summary.bucket_definition);
    for (axis, rows) in [
        ("computation intensity", &summary.by_computation_intensity),
        ("bandwidth intensity", &summary.by_bandwidth_intensity),
        ("taskset size", &summary.by_taskset_size),
    ] {
        for r in rows {
            let _ = writeln!(
                out,
                "{axis} {}: {} mean={:.4} median={:.4} n={}",
                r.bucket, r.algo, r.mean_ratio, r.median_ratio, r.count
            );
        }
    }
    for note in &summary.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AccessPoint, Assignment, Server, ServerKind, Task, Topology};

    fn two_task_instance() -> Instance {
        Instance::new(
            vec![
                Task {
                    id: "t0".into(),
                    data_size: 1.0,
                    compute_demand: 1.0,
                    deadline: 20.0,
                    profit: 10.0,
                    reachable_aps: vec![0],
                },
                Task {
                    id: "t1".into(),
                    data_size: 1.0,
                    compute_demand: 1.0,
                    deadline: 20.0,
                    profit: 40.0,
                    reachable_aps: vec![0],
                },
            ],
            vec![AccessPoint {
                id: "ap0".into(),
                bandwidth_capacity: 10.0,
            }],
            vec![Server {
                id: "s0".into(),
                compute_capacity: 10.0,
                kind: ServerKind::Edge,
                colocated_ap: Some(0),
            }],
            Topology::new(1, 1, vec![0.0]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn ratio_examples() {
        let inst = two_task_instance();
        assert_eq!(profit_gain_ratio(&inst, &Solution::empty()).unwrap(), 0.0);

        let only_dear = Solution::from_assignments(
            &inst,
            vec![Assignment {
                task: 1,
                ap: 0,
                server: 0,
                bandwidth_grant: 1.0,
                compute_grant: 1.0,
            }],
        );
        assert_eq!(profit_gain_ratio(&inst, &only_dear).unwrap(), 0.8);

        let both = Solution::from_assignments(
            &inst,
            vec![
                Assignment {
                    task: 0,
                    ap: 0,
                    server: 0,
                    bandwidth_grant: 1.0,
                    compute_grant: 1.0,
                },
                Assignment {
                    task: 1,
                    ap: 0,
                    server: 0,
                    bandwidth_grant: 1.0,
                    compute_grant: 1.0,
                },
            ],
        );
        assert_eq!(profit_gain_ratio(&inst, &both).unwrap(), 1.0);
    }

    #[test]
    fn intensity_boundary_is_strict() {
        // tau = 10, min capacity 10: the threshold demand rate is exactly 2.
        let make = |q: f64| {
            Instance::new(
                vec![Task {
                    id: "t0".into(),
                    data_size: 1.0,
                    compute_demand: q,
                    deadline: 10.0,
                    profit: 10.0,
                    reachable_aps: vec![0],
                }],
                vec![AccessPoint {
                    id: "ap0".into(),
                    bandwidth_capacity: 10.0,
                }],
                vec![Server {
                    id: "s0".into(),
                    compute_capacity: 10.0,
                    kind: ServerKind::Edge,
                    colocated_ap: Some(0),
                }],
                Topology::new(1, 1, vec![0.0]).unwrap(),
            )
            .unwrap()
        };
        let at_boundary = classify_intensity(&make(20.0));
        assert!(!at_boundary[0].computation); // exactly 20%, strict >
        let above = classify_intensity(&make(21.0));
        assert!(above[0].computation);
    }

    #[test]
    fn intensity_ignores_profit() {
        let inst = two_task_instance(); // different profits, same demands
        let flags = classify_intensity(&inst);
        assert_eq!(flags[0], flags[1]);
    }

    #[test]
    fn single_cell_grid_produces_one_row() {
        let cfg = CampaignConfig {
            sizes: vec![5],
            ub_values: vec![0.5],
            uc_values: vec![1.0],
            seeds: vec![0],
            algorithms: vec![AlgoSpec::Zsg],
            ..CampaignConfig::desk_default()
        };
        let records = run_campaign(&cfg).unwrap();
        assert_eq!(records.len(), 1);
        let r = &records[0];
        assert_eq!(r.algo, "zsg");
        assert!(r.optimal);
        assert!((0.0..=1.0).contains(&r.ratio));
        assert!(r.b_unit.is_none());
        let csv = records_to_csv(&records);
        assert!(csv.starts_with(CSV_HEADER));
        // zsg rows leave the unit columns empty.
        assert!(csv.lines().nth(1).unwrap().contains(",zsg,,,"));
    }

    #[test]
    fn campaign_rows_are_deterministic_across_runs() {
        let cfg = CampaignConfig {
            sizes: vec![6],
            ub_values: vec![0.4, 0.8],
            uc_values: vec![1.5],
            seeds: vec![0, 1],
            algorithms: vec![
                AlgoSpec::Zsg,
                AlgoSpec::Ldm {
                    b_unit: 15.0,
                    c_unit: 15.0,
                },
            ],
            ..CampaignConfig::desk_default()
        };
        let a = run_campaign(&cfg).unwrap();
        let b = run_campaign(&cfg).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.taskset_id, y.taskset_id);
            assert_eq!(x.profit, y.profit);
            assert_eq!(x.ratio, y.ratio);
            assert_eq!(x.optimal, y.optimal);
        }
    }

    #[test]
    fn summary_buckets_and_plots_agree() {
        let records = vec![
            RunRecord {
                taskset_id: "a".into(),
                seed: 0,
                n_tasks: 10,
                ub: 0.3,
                uc: 1.0,
                algo: "zsg".into(),
                b_unit: None,
                c_unit: None,
                profit: 50.0,
                ratio: 0.5,
                wall_ms: 1.0,
                optimal: true,
                pct_ci: 15.0,
                pct_bi: 95.0,
            },
            RunRecord {
                taskset_id: "b".into(),
                seed: 1,
                n_tasks: 10,
                ub: 0.3,
                uc: 1.0,
                algo: "zsg".into(),
                b_unit: None,
                c_unit: None,
                profit: 70.0,
                ratio: 0.7,
                wall_ms: 1.0,
                optimal: true,
                pct_ci: 12.0,
                pct_bi: 95.0,
            },
        ];
        let (summary, figures) = summarize(&records);
        let ci = &summary.by_computation_intensity;
        assert_eq!(ci.len(), 1);
        assert_eq!(ci[0].bucket, "10-20%");
        assert_eq!(ci[0].count, 2);
        assert!((ci[0].mean_ratio - 0.6).abs() < 1e-12);
        assert!((ci[0].median_ratio - 0.6).abs() < 1e-12);
        // Empty deciles are reported.
        assert!(!summary.notes.is_empty());

        let fig_ci = &figures[0].1;
        assert_eq!(fig_ci.len(), 1);
        assert_eq!(fig_ci[0].series[0].1.median, ci[0].median_ratio);
    }

    #[test]
    fn outputs_land_on_disk() {
        let cfg = CampaignConfig {
            sizes: vec![4],
            ub_values: vec![0.5],
            uc_values: vec![1.0],
            seeds: vec![0, 1, 2],
            algorithms: vec![AlgoSpec::Zsg],
            ..CampaignConfig::desk_default()
        };
        let records = run_campaign(&cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        write_campaign_outputs(dir.path(), &records).unwrap();
        for file in ["records.csv", "summary.json", "fig_ci.svg", "fig_bi.svg", "fig_size.svg"] {
            assert!(dir.path().join(file).exists(), "{file} missing");
        }
    }
}
