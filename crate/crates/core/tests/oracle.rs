//! Exactness chain for the discretized solvers: branch-and-bound against the
//! enumeration oracle, dominance filtering against the full option set, and
//! the option view against the binary-program view (including pruning),
//! cross-checked by exhaustive valuation enumeration on micro models.

mod common;

use common::{
    exhaustive_model_optimum, feasible_valuations, small_random_instance,
    valuation_to_model_values,
};
use edgealloc_core::ldm::{discretize, extract_solution, prune, DiscretizationConfig};
use edgealloc_core::model::{AccessPoint, Instance, Server, ServerKind, Task, Topology};
use edgealloc_core::solver::{
    branch_and_bound, brute_force, enumerate_options, enumerate_options_undominated,
    valuation_profit, valuation_to_solution, Budget,
};
use edgealloc_core::taskgen::rng_from_seed;
use edgealloc_core::verify::verify;
use rand::Rng;

fn unit_cfg() -> DiscretizationConfig {
    DiscretizationConfig::new(1.0, 1.0).unwrap()
}

/// Draws a small instance whose enumeration space stays under the cap.
fn bounded_instance<R: Rng>(rng: &mut R, cap: f64) -> Instance {
    loop {
        let instance = small_random_instance(rng);
        let options = enumerate_options(&instance, &unit_cfg());
        if options.enumeration_space() <= cap {
            return instance;
        }
    }
}

#[test]
fn branch_and_bound_matches_brute_force() {
    let mut rng = rng_from_seed(0xB0B);
    for round in 0..60 {
        let instance = bounded_instance(&mut rng, 1e6);
        let options = enumerate_options(&instance, &unit_cfg());
        let (valuation, stats) = branch_and_bound(&options, &Budget::default());
        let (_, oracle_profit) = brute_force(&options, 1e6).unwrap();
        assert!(stats.proven_optimal, "round {round}");
        assert_eq!(
            valuation_profit(&options, &valuation),
            oracle_profit,
            "round {round}: bnb != brute force"
        );
    }
}

#[test]
fn dominance_filtering_never_changes_the_optimum() {
    let mut rng = rng_from_seed(0xD0D0);
    for round in 0..40 {
        let cfg = unit_cfg();
        let (filtered, full) = loop {
            let instance = small_random_instance(&mut rng);
            let full = enumerate_options_undominated(&instance, &cfg);
            if full.enumeration_space() <= 1e6 {
                break (enumerate_options(&instance, &cfg), full);
            }
        };
        for (f, a) in filtered.per_task.iter().zip(&full.per_task) {
            assert!(f.len() <= a.len());
        }
        let (_, profit_filtered) = brute_force(&filtered, 1e7).unwrap();
        let (_, profit_full) = brute_force(&full, 1e7).unwrap();
        assert_eq!(profit_filtered, profit_full, "round {round}");
    }
}

#[test]
fn optimal_valuations_satisfy_both_models_and_extract_identically() {
    let mut rng = rng_from_seed(0xCAFE);
    for round in 0..40 {
        let instance = bounded_instance(&mut rng, 1e6);
        let cfg = unit_cfg();
        let options = enumerate_options(&instance, &cfg);
        let (valuation, stats) = branch_and_bound(&options, &Budget::default());
        assert!(stats.proven_optimal);

        for model in [
            discretize(&instance, &cfg).unwrap(),
            prune(&discretize(&instance, &cfg).unwrap(), &instance, &cfg),
        ] {
            let values = valuation_to_model_values(&model, &options, &valuation);
            let violations = model.violated_rows(&values, 1e-9);
            assert!(violations.is_empty(), "round {round}: {violations:?}");
            assert_eq!(
                model.objective_value(&values),
                valuation_profit(&options, &valuation),
                "round {round}"
            );

            let extracted = extract_solution(&instance, &cfg, &model, &values).unwrap();
            let direct = valuation_to_solution(&instance, &cfg, &options, &valuation);
            assert_eq!(extracted, direct, "round {round}");

            let report = verify(&instance, &extracted, 1e-9).unwrap();
            assert!(report.feasible, "round {round}: {:?}", report.violations);
        }
    }
}

/// Instances small enough for exhaustive 0/1 valuation enumeration.
fn micro_instance<R: Rng>(rng: &mut R) -> Instance {
    let n_tasks = rng.gen_range(1..=2);
    let n_servers = rng.gen_range(1..=2);
    let aps = vec![AccessPoint {
        id: "ap0".into(),
        bandwidth_capacity: rng.gen_range(1..=2) as f64,
    }];
    let servers: Vec<Server> = (0..n_servers)
        .map(|k| Server {
            id: format!("s{k}"),
            compute_capacity: rng.gen_range(1..=2) as f64,
            kind: ServerKind::Edge,
            colocated_ap: None,
        })
        .collect();
    let delays: Vec<f64> = (0..n_servers).map(|_| rng.gen_range(0..=2) as f64).collect();
    let topology = Topology::new(1, n_servers, delays).unwrap();
    let tasks: Vec<Task> = (0..n_tasks)
        .map(|i| Task {
            id: format!("t{i}"),
            data_size: rng.gen_range(0.5..3.0),
            compute_demand: rng.gen_range(0.5..3.0),
            deadline: rng.gen_range(2.0..10.0),
            profit: rng.gen_range(1..=100) as f64,
            reachable_aps: vec![0],
        })
        .collect();
    Instance::new(tasks, aps, servers, topology).unwrap()
}

#[test]
fn micro_models_agree_with_exhaustive_enumeration() {
    let mut rng = rng_from_seed(0x5EED);
    let mut pruned_something = false;
    for round in 0..40 {
        let instance = micro_instance(&mut rng);
        let cfg = unit_cfg();
        let model = discretize(&instance, &cfg).unwrap();
        if model.vars().len() > 22 {
            continue;
        }
        let pruned = prune(&model, &instance, &cfg);
        pruned_something |= pruned.vars().len() < model.vars().len();

        let full_opt = exhaustive_model_optimum(&model, 1e-9);
        let pruned_opt = exhaustive_model_optimum(&pruned, 1e-9);
        assert_eq!(full_opt, pruned_opt, "round {round}: pruning changed the optimum");

        let options = enumerate_options(&instance, &cfg);
        let (valuation, stats) = branch_and_bound(&options, &Budget::default());
        assert!(stats.proven_optimal);
        assert_eq!(
            valuation_profit(&options, &valuation),
            full_opt,
            "round {round}: option view and model view disagree"
        );
    }
    assert!(pruned_something, "suite never exercised an actual prune");
}

#[test]
fn linking_variables_equal_conjunction_in_every_feasible_valuation() {
    let mut rng = rng_from_seed(0x1123);
    let mut checked = 0usize;
    for _ in 0..25 {
        let instance = micro_instance(&mut rng);
        let cfg = unit_cfg();
        let model = discretize(&instance, &cfg).unwrap();
        if model.vars().len() > 16 {
            continue;
        }
        let u = cfg.ap_units(&instance);
        let v = cfg.server_units(&instance);
        for values in feasible_valuations(&model, 1e-9) {
            for (i, task) in instance.tasks().iter().enumerate() {
                for &j in &task.reachable_aps {
                    for k in 0..instance.servers().len() {
                        let Some(z) = model.z_var(i, j, k) else { continue };
                        let x_sum: f64 = (1..=u[j])
                            .filter_map(|m| model.x_var(i, j, m))
                            .map(|var| values[var])
                            .sum();
                        let y_sum: f64 = (1..=v[k])
                            .filter_map(|n| model.y_var(i, k, n))
                            .map(|var| values[var])
                            .sum();
                        let expected = if x_sum > 0.5 && y_sum > 0.5 { 1.0 } else { 0.0 };
                        assert_eq!(values[z], expected);
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 0);
}
