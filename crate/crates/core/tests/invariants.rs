use distcc_core::classical::{classical_frontier, classical_min_distinguishability, Encoding};
use distcc_core::graphs::{small_graph_catalog, Graph};
use distcc_core::linalg::{self, CMat};
use distcc_core::quantum::{
    graph_success_pure, haar_ket, helstrom_pair_success, optimal_discrimination, pairdist_states,
    quantum_distinguishability, quantum_success, rac_mub_strategy, PureStateFamily, QuantumStrategy,
};
use distcc_core::sdp::{hierarchy_max_success, hierarchy_min_distinguishability, seesaw_max_success, SeesawConfig};
use distcc_core::task::{graph_equality_task, pair_distinguishability_task, pair_list, rac_task, TaskSpec};
use distcc_core::Execution;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn uniform(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

fn mixed_state(d: usize, rng: &mut ChaCha8Rng) -> CMat {
    let rank = rng.gen_range(1..=d);
    let w: Vec<f64> = (0..rank).map(|_| rng.gen_range(0.05..1.0)).collect();
    let t: f64 = w.iter().sum();
    w.iter().fold(CMat::zeros(d, d), |a, wi| a + linalg::projector(&haar_ket(d, rng)).scale(wi / t))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn pure_graph_formula_matches_task_route(gi in 0usize..8, d in 2usize..5, seed in any::<u64>()) {
        let g: Graph = small_graph_catalog().swap_remove(gi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let family = PureStateFamily::new((0..g.n_vertices()).map(|_| haar_ket(d, &mut rng)).collect()).unwrap();
        let via_task = quantum_success(&graph_equality_task(&g).unwrap(), &family.with_projective_tests().unwrap()).unwrap();
        let via_overlaps = graph_success_pure(&g, &family).unwrap();
        prop_assert!((via_task - via_overlaps).abs() < 1e-12, "{} vs {}", via_task, via_overlaps);
    }

    #[test]
    fn helstrom_is_attained_by_pairwise_measurements(n in 2usize..6, d in 2usize..4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let states: Vec<CMat> = (0..n).map(|_| mixed_state(d, &mut rng)).collect();
        let measurements = pair_list(n)
            .into_iter()
            .map(|(a, b)| {
                let povm = optimal_discrimination(&[states[a].clone(), states[b].clone()], &[0.5, 0.5]).unwrap().povm;
                let mut elems = vec![CMat::zeros(d, d); n];
                elems[a] = povm[0].clone();
                elems[b] = povm[1].clone();
                elems
            })
            .collect();
        let strat = QuantumStrategy::from_approximate(states.clone(), measurements).unwrap();
        let s = quantum_success(&pair_distinguishability_task(n).unwrap(), &strat).unwrap();
        let h = helstrom_pair_success(&states).unwrap();
        prop_assert!((s - h).abs() < 1e-6, "{} vs {}", s, h);
    }

    #[test]
    fn mixing_never_increases_distinguishability(n in 2usize..6, d in 2usize..4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let states: Vec<CMat> = (0..n).map(|_| mixed_state(d, &mut rng)).collect();
        let sigma = mixed_state(d, &mut rng);
        let mut last = quantum_distinguishability(&states, &uniform(n)).unwrap();
        for lambda in [0.75, 0.5, 0.25, 0.0] {
            let mixed: Vec<CMat> = states.iter().map(|r| r.scale(lambda) + sigma.scale(1.0 - lambda)).collect();
            let v = quantum_distinguishability(&mixed, &uniform(n)).unwrap();
            prop_assert!(v <= last + 1e-7, "lambda {}: {} > {}", lambda, v, last);
            last = v;
        }
        prop_assert!((last - 1.0 / n as f64).abs() < 1e-7);
    }

    #[test]
    fn strategy_json_round_trip(d in 2usize..4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let states: Vec<CMat> = (0..3).map(|_| mixed_state(d, &mut rng)).collect();
        let povm = distcc_core::quantum::random_povm(d, 3, &mut rng);
        let strat = QuantumStrategy::new(states, vec![povm]).unwrap();
        let back = QuantumStrategy::from_json(&strat.to_json().unwrap()).unwrap();
        for (a, b) in strat.states().iter().zip(back.states()) {
            prop_assert_eq!(linalg::max_abs_diff(a, b), 0.0);
        }
    }
}

#[test]
fn pair_states_distinguishability() {
    for n in 3..=6 {
        let dq = quantum_distinguishability(&pairdist_states(n).unwrap().density_matrices(), &uniform(n)).unwrap();
        assert!((dq - 2.0 / n as f64).abs() < 1e-5, "N={n}: {dq}");
    }
}

#[test]
fn task_and_graph_json_round_trip() {
    for g in small_graph_catalog() {
        let back = Graph::from_json(&g.to_json().unwrap()).unwrap();
        assert_eq!(back.edges(), g.edges());
        let t = graph_equality_task(&g).unwrap();
        let tb = TaskSpec::from_json(&t.to_json().unwrap()).unwrap();
        assert_eq!(tb.coeffs(), t.coeffs());
    }
    let e = Encoding::identity(3);
    assert_eq!(e.to_json().unwrap(), "[[1.0,0.0,0.0],[0.0,1.0,0.0],[0.0,0.0,1.0]]");
}

#[test]
fn classical_directions_agree() {
    let t = rac_task(2, 2).unwrap();
    for p in [0.3, 0.5, 0.7, 0.9] {
        let s = classical_frontier(&t, p).unwrap().lp_value;
        let back = classical_min_distinguishability(&t, s).unwrap().dist_cap;
        assert!(back <= p + 1e-6, "p={p}: S={s}, inverse {back}");
    }
}

#[test]
fn hierarchy_directions_agree() {
    let t = rac_task(2, 2).unwrap();
    for p in [0.3, 0.4, 0.6] {
        let s = hierarchy_max_success(&t, 2, p).unwrap().bound;
        let back = hierarchy_min_distinguishability(&t, 2, s - 1e-7).unwrap().bound;
        assert!((back - p).abs() < 1e-4, "p={p}: S={s}, inverse {back}");
    }
}

#[test]
fn quantum_sandwich_across_caps() {
    let t = rac_task(2, 2).unwrap();
    for k in 0..=6 {
        let p = 0.25 + 0.125 * k as f64;
        let cfg = SeesawConfig { dim: 2, restarts: 4, ..SeesawConfig::default() };
        let lower = seesaw_max_success(&t, p, &cfg).unwrap().value;
        let upper = hierarchy_max_success(&t, 2, p).unwrap().bound;
        let classical = classical_frontier(&t, p).unwrap().lp_value;
        assert!(lower <= upper + 1e-6, "p={p}: {lower} > {upper}");
        assert!(classical <= upper + 1e-6, "p={p}: classical {classical} > {upper}");
    }
}

#[test]
fn mub_rac_matches_seesaw_optimum() {
    let t = rac_task(2, 3).unwrap();
    let mub = quantum_success(&t, &rac_mub_strategy(3).unwrap()).unwrap();
    let cfg = SeesawConfig { dim: 3, restarts: 6, ..SeesawConfig::default() };
    let ss = seesaw_max_success(&t, 1.0 / 3.0, &cfg).unwrap().value;
    assert!(ss >= mub - 1e-4, "{ss} < {mub}");
}

#[test]
fn execution_modes_agree() {
    let t = rac_task(2, 2).unwrap();
    let base = SeesawConfig { dim: 2, restarts: 4, max_iters: 50, ..SeesawConfig::default() };
    let par = seesaw_max_success(&t, 0.45, &SeesawConfig { execution: Execution::Parallel, ..base }).unwrap();
    let seq = seesaw_max_success(&t, 0.45, &SeesawConfig { execution: Execution::Sequential, ..base }).unwrap();
    assert_eq!(par.value.to_bits(), seq.value.to_bits());
    assert_eq!(par.runs.len(), seq.runs.len());
}
