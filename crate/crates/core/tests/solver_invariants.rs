mod common;

use amap_core::solver::{
    annealed_map_with, brute_force_map, hill_climb_map, AnnealOptions, AnnealSchedule, SolverError,
};
use amap_core::synth::{random_network, RandomNetworkSpec};
use common::{enumerate_map, log_close, random_problem};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn net_and_problem(seed: u64) -> (ChaCha8Rng, amap_core::BayesianNetwork, amap_core::MapProblem) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = RandomNetworkSpec {
        min_vars: 3,
        max_vars: 9,
        min_states: 2,
        max_states: 3,
        max_parents: 2,
        zero_prob: 0.1,
    };
    let net = random_network(&mut rng, &spec);
    let problem = random_problem(&mut rng, &net, 5, 3);
    (rng, net, problem)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn anneal_never_beats_the_oracle_and_reports_exact_values(seed in any::<u64>()) {
        let (mut rng, net, problem) = net_and_problem(seed);
        let opts = AnnealOptions { restarts: 3, record_trace: true, verify_each_sweep: true };
        let schedule = AnnealSchedule::default();
        let rep = annealed_map_with(&net, &problem, &schedule, &mut rng, &opts).unwrap();
        let (_, best_lp) = enumerate_map(&net, &problem);
        prop_assert!(rep.logp <= best_lp + 1e-9);
        let exact = amap_core::engine::map_posterior(&net, &rep.best, problem.evidence()).unwrap();
        prop_assert!(log_close(rep.logp, exact, 1e-9));
        prop_assert!(rep.max_tracking_error <= 1e-6);

        let trace = rep.trace.unwrap();
        prop_assert_eq!(trace.len() as u64, rep.sweeps);
        prop_assert!(rep.best_found_sweep <= rep.sweeps);
        for w in trace.windows(2) {
            if w[0].restart == w[1].restart {
                prop_assert!(w[1].best_logp >= w[0].best_logp);
                prop_assert_eq!(w[1].sweep, w[0].sweep + 1);
            }
        }
        for r in 1..=3u32 {
            let n = trace.iter().filter(|t| t.restart == r).count() as u64;
            prop_assert!(n >= schedule.stop);
            let reheats = trace.iter().filter(|t| t.restart == r && t.reheated).count();
            prop_assert!(reheats as u64 <= n / schedule.wait);
        }
    }

    #[test]
    fn hill_climb_is_bounded_by_the_oracle(seed in any::<u64>()) {
        let (_, net, problem) = net_and_problem(seed);
        let hill = hill_climb_map(&net, &problem, 25).unwrap();
        let exact = brute_force_map(&net, &problem).unwrap();
        prop_assert!(hill.logp <= exact.logp + 1e-12);
        prop_assert!(hill.sweeps <= 25);
    }
}

#[test]
fn same_seed_same_report() {
    let (_, net, problem) = net_and_problem(99);
    let run = |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        annealed_map_with(
            &net,
            &problem,
            &AnnealSchedule::default(),
            &mut rng,
            &AnnealOptions {
                restarts: 4,
                record_trace: true,
                verify_each_sweep: false,
            },
        )
        .unwrap()
    };
    assert_eq!(run(5), run(5));
}

#[test]
fn zero_restarts_and_bad_schedules_are_rejected() {
    let (mut rng, net, problem) = net_and_problem(1);
    let opts = AnnealOptions {
        restarts: 0,
        ..AnnealOptions::default()
    };
    assert!(matches!(
        annealed_map_with(&net, &problem, &AnnealSchedule::default(), &mut rng, &opts),
        Err(SolverError::Contract(_))
    ));
    let bad = AnnealSchedule {
        wait: 30,
        stop: 20,
        ..AnnealSchedule::default()
    };
    assert!(matches!(
        annealed_map_with(&net, &problem, &bad, &mut rng, &AnnealOptions::default()),
        Err(SolverError::Schedule(_))
    ));
}

#[test]
fn max_sweeps_caps_each_restart() {
    let (mut rng, net, problem) = net_and_problem(3);
    let schedule = AnnealSchedule {
        max_sweeps: Some(5),
        ..AnnealSchedule::default()
    };
    let rep = annealed_map_with(
        &net,
        &problem,
        &schedule,
        &mut rng,
        &AnnealOptions {
            restarts: 2,
            ..AnnealOptions::default()
        },
    )
    .unwrap();
    assert_eq!(rep.sweeps, 10);
}
