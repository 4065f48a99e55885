//! `edgealloc`: generate benchmark instances, solve them with the greedy or
//! the exact discretized solvers, verify solutions, export the binary program
//! in LP format, and run comparison campaigns.
//!
//! Exit codes: 0 success, 1 infeasible solution under `verify`, 2 usage or
//! input error, 3 solve budget exhausted without an optimality proof when
//! `--strict` is set. Machine-readable results go to stdout, diagnostics to
//! stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use edgealloc_core::campaign::{
    run_campaign, summarize, summary_text, write_campaign_outputs, AlgoSpec, CampaignConfig,
};
use edgealloc_core::io::{load_instance, load_solution, save_instance, save_solution};
use edgealloc_core::ldm::{discretize, prune, DiscretizationConfig};
use edgealloc_core::model::{Instance, DEFAULT_TOL};
use edgealloc_core::solver::{solve_ldm, brute_force, enumerate_options, valuation_to_solution, Budget};
use edgealloc_core::taskgen::{
    generate_taskset, rng_from_seed, sample_architecture, ArchitectureConfig, TasksetGenConfig,
};
use edgealloc_core::verify::verify;
use edgealloc_core::zsg::zsg_solve;

#[derive(Parser)]
#[command(
    name = "edgealloc",
    about = "Deadline-constrained task mapping and multi-resource allocation for edge-cloud systems",
    version,
    after_help = "Exit codes: 0 success, 1 infeasible-verify, 2 usage/input error, 3 budget exhausted without proof (--strict)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ArchArgs {
    /// Number of access points.
    #[arg(long, default_value_t = 20)]
    aps: usize,
    /// Number of edge servers (colocated one-per-access-point).
    #[arg(long, default_value_t = 20)]
    edge: usize,
    /// Number of cloud servers.
    #[arg(long, default_value_t = 5)]
    cloud: usize,
}

impl ArchArgs {
    fn config(&self) -> ArchitectureConfig {
        ArchitectureConfig {
            n_aps: self.aps,
            n_edge_servers: self.edge,
            n_cloud_servers: self.cloud,
            ..ArchitectureConfig::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic benchmark instance.
    Generate {
        /// RNG seed (architecture and taskset).
        #[arg(long, env = "EDGEALLOC_SEED", default_value_t = 0)]
        seed: u64,
        /// Number of tasks.
        #[arg(long)]
        tasks: usize,
        /// Target total bandwidth utilization per access point, in (0, 1].
        #[arg(long)]
        ub: f64,
        /// Target total system compute utilization (normalized by the
        /// smallest server capacity).
        #[arg(long)]
        uc: f64,
        #[command(flatten)]
        arch: ArchArgs,
        /// Output file (stdout when omitted).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Solve an instance and emit the solution document.
    Solve {
        /// Algorithm: zsg, ldm or brute.
        #[arg(long)]
        algo: String,
        /// Instance file.
        #[arg(short = 'i', long)]
        instance: PathBuf,
        /// Bandwidth minimum unit (required for ldm/brute).
        #[arg(long)]
        b_unit: Option<f64>,
        /// Compute minimum unit (required for ldm/brute).
        #[arg(long)]
        c_unit: Option<f64>,
        /// Node budget for the exact search.
        #[arg(long, default_value_t = 10_000_000)]
        budget_nodes: u64,
        /// Time budget in seconds for the exact search.
        #[arg(long, default_value_t = 60.0)]
        budget_secs: f64,
        /// Keep dominated options (ldm/brute solve the same optimum either way).
        #[arg(long)]
        no_prune: bool,
        /// Exit 3 when the budget runs out before optimality is proven.
        #[arg(long)]
        strict: bool,
        /// Feasibility tolerance (relative).
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Output file (stdout when omitted).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check a solution against an instance and report violations.
    Verify {
        /// Instance file.
        #[arg(short = 'i', long)]
        instance: PathBuf,
        /// Solution file.
        #[arg(short = 's', long)]
        solution: PathBuf,
        /// Feasibility tolerance (relative).
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Export the discretized binary program in LP text format.
    ExportLp {
        /// Instance file.
        #[arg(short = 'i', long)]
        instance: PathBuf,
        /// Bandwidth minimum unit.
        #[arg(long)]
        b_unit: f64,
        /// Compute minimum unit.
        #[arg(long)]
        c_unit: f64,
        /// Skip the optimality-preserving model pruning pass.
        #[arg(long)]
        no_prune: bool,
        /// Output file (stdout when omitted).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run a comparison campaign over a taskset grid.
    Bench {
        /// Taskset sizes, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = vec![10, 20, 30])]
        sizes: Vec<usize>,
        /// Bandwidth utilization levels, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.3, 0.6, 0.9])]
        ub: Vec<f64>,
        /// Compute utilization levels, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 2.5, 4.0])]
        uc: Vec<f64>,
        /// Number of taskset seeds per grid point.
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        /// First taskset seed.
        #[arg(long, env = "EDGEALLOC_SEED", default_value_t = 0)]
        seed_base: u64,
        /// Architecture seed.
        #[arg(long, default_value_t = 7)]
        master_seed: u64,
        /// Algorithms, comma separated: zsg, ldm-<unit>, ldm-<b>x<c>, brute-<unit>.
        #[arg(long, value_delimiter = ',', default_values_t = vec!["zsg".to_string(), "ldm-5".to_string(), "ldm-15".to_string()])]
        algos: Vec<String>,
        /// Small-architecture shape for the campaign.
        #[arg(long, default_value_t = 4)]
        aps: usize,
        #[arg(long, default_value_t = 4)]
        edge: usize,
        #[arg(long, default_value_t = 1)]
        cloud: usize,
        /// Node budget per exact solve.
        #[arg(long, default_value_t = 10_000_000)]
        budget_nodes: u64,
        /// Time budget in seconds per exact solve.
        #[arg(long, default_value_t = 60.0)]
        budget_secs: f64,
        /// Scale each exact solve's time budget to this multiple of the
        /// slowest greedy run in the same size bucket.
        #[arg(long)]
        ldm_budget_multiplier: Option<f64>,
        /// Output directory for records.csv, summary.json and the figures.
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading instance {}", path.display()))?;
    load_instance(&text).with_context(|| format!("parsing instance {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn parse_algo(token: &str) -> Result<AlgoSpec> {
    if token == "zsg" {
        return Ok(AlgoSpec::Zsg);
    }
    let (kind, units) = token
        .split_once('-')
        .with_context(|| format!("unknown algorithm `{token}`"))?;
    let (b, c) = match units.split_once('x') {
        Some((b, c)) => (b.parse()?, c.parse()?),
        None => {
            let u: f64 = units.parse()?;
            (u, u)
        }
    };
    match kind {
        "ldm" => Ok(AlgoSpec::Ldm { b_unit: b, c_unit: c }),
        "brute" => Ok(AlgoSpec::Brute { b_unit: b, c_unit: c }),
        other => bail!("unknown algorithm `{other}`"),
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Generate {
            seed,
            tasks,
            ub,
            uc,
            arch,
            out,
        } => {
            let mut rng = rng_from_seed(seed);
            let architecture = sample_architecture(&arch.config(), &mut rng)?;
            let cfg = TasksetGenConfig::new(tasks, ub, uc);
            let instance = generate_taskset(&architecture, &cfg, &mut rng)?;
            emit(out.as_deref(), &save_instance(&instance))?;
            eprintln!(
                "generated {} tasks, {} access points, {} servers (seed {seed})",
                tasks,
                architecture.aps.len(),
                architecture.servers.len()
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Solve {
            algo,
            instance,
            b_unit,
            c_unit,
            budget_nodes,
            budget_secs,
            no_prune,
            strict,
            tol,
            out,
        } => {
            let needs_units = matches!(algo.as_str(), "ldm" | "brute");
            if needs_units && (b_unit.is_none() || c_unit.is_none()) {
                bail!("--algo {algo} requires --b-unit and --c-unit");
            }
            if !needs_units && (b_unit.is_some() || c_unit.is_some()) {
                bail!("--b-unit/--c-unit only apply to --algo ldm or brute");
            }
            let inst = read_instance(&instance)?;
            let budget = Budget {
                max_nodes: budget_nodes,
                max_time: Duration::from_secs_f64(budget_secs),
            };

            let (solution, proven_optimal) = match algo.as_str() {
                "zsg" => (zsg_solve(&inst), true),
                "ldm" => {
                    let cfg = DiscretizationConfig::new(b_unit.unwrap(), c_unit.unwrap())?;
                    let outcome = solve_ldm(&inst, &cfg, &budget, !no_prune);
                    eprintln!(
                        "branch-and-bound: {} nodes in {:.1} ms, proven optimal: {}",
                        outcome.stats.nodes,
                        outcome.stats.wall_time.as_secs_f64() * 1e3,
                        outcome.stats.proven_optimal
                    );
                    (outcome.solution, outcome.stats.proven_optimal)
                }
                "brute" => {
                    let cfg = DiscretizationConfig::new(b_unit.unwrap(), c_unit.unwrap())?;
                    let options = if no_prune {
                        edgealloc_core::solver::enumerate_options_undominated(&inst, &cfg)
                    } else {
                        enumerate_options(&inst, &cfg)
                    };
                    let (valuation, _) = brute_force(&options, 1e7)?;
                    (valuation_to_solution(&inst, &cfg, &options, &valuation), true)
                }
                other => bail!("unknown algorithm `{other}` (expected zsg, ldm or brute)"),
            };

            let report = verify(&inst, &solution, tol)?;
            if !report.feasible {
                bail!("solver produced an infeasible solution: {:?}", report.violations);
            }
            emit(out.as_deref(), &save_solution(&inst, &solution))?;
            eprintln!("profit {}, {} tasks assigned", solution.profit, solution.assignments.len());
            if strict && !proven_optimal {
                eprintln!("budget exhausted before optimality was proven");
                return Ok(ExitCode::from(3));
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Verify {
            instance,
            solution,
            tol,
        } => {
            let inst = read_instance(&instance)?;
            let text = std::fs::read_to_string(&solution)
                .with_context(|| format!("reading solution {}", solution.display()))?;
            let sol = load_solution(&text, &inst)
                .with_context(|| format!("parsing solution {}", solution.display()))?;
            let report = verify(&inst, &sol, tol)?;
            let recomputed = edgealloc_core::model::objective_value(&inst, &sol)?;
            if (recomputed - sol.profit).abs() > tol * recomputed.abs().max(1.0) {
                eprintln!(
                    "warning: stored profit {} differs from recomputed {}",
                    sol.profit, recomputed
                );
            }
            println!("{}", serde_json::to_string_pretty(&report)?);
            if report.feasible {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("infeasible: {} violation(s)", report.violations.len());
                Ok(ExitCode::from(1))
            }
        }

        Command::ExportLp {
            instance,
            b_unit,
            c_unit,
            no_prune,
            out,
        } => {
            let inst = read_instance(&instance)?;
            let cfg = DiscretizationConfig::new(b_unit, c_unit)?;
            let mut model = discretize(&inst, &cfg)?;
            if !no_prune {
                model = prune(&model, &inst, &cfg);
            }
            let stats = model.stats();
            emit(out.as_deref(), &model.export_lp())?;
            eprintln!(
                "model: {} variables, {} rows, {} nonzeros",
                stats.variables, stats.rows, stats.nonzeros
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Bench {
            sizes,
            ub,
            uc,
            seeds,
            seed_base,
            master_seed,
            algos,
            aps,
            edge,
            cloud,
            budget_nodes,
            budget_secs,
            ldm_budget_multiplier,
            out_dir,
        } => {
            let algorithms = algos
                .iter()
                .map(|s| parse_algo(s))
                .collect::<Result<Vec<_>>>()?;
            let cfg = CampaignConfig {
                architecture: ArchitectureConfig {
                    n_aps: aps,
                    n_edge_servers: edge,
                    n_cloud_servers: cloud,
                    ..ArchitectureConfig::default()
                },
                master_seed,
                sizes,
                ub_values: ub,
                uc_values: uc,
                seeds: (seed_base..seed_base + seeds).collect(),
                algorithms,
                budget: Budget {
                    max_nodes: budget_nodes,
                    max_time: Duration::from_secs_f64(budget_secs),
                },
                ldm_budget_multiplier,
                tol: DEFAULT_TOL,
            };
            let records = run_campaign(&cfg)?;
            write_campaign_outputs(&out_dir, &records)?;
            let (summary, _) = summarize(&records);
            print!("{}", summary_text(&summary));
            eprintln!(
                "{} records written to {}",
                records.len(),
                out_dir.display()
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}
