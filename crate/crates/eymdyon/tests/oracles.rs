//! Cross-validation of adaptive runs against the independent fixed-step
//! oracle in `common`.

mod common;

use common::{floored_rel, rk4_oracle};
use eymdyon::{
    count_nodes, initial_state, integrate, IntegratorConfig, Params, SeedOptions, DEFAULT_W_FLOOR,
};

#[test]
fn node_counts_match_the_oracle_across_small_lambda() {
    for lambda in [0.0, 0.001, 0.0025, 0.00425] {
        let params = Params::new(lambda);
        let init = initial_state(&params, &SeedOptions::default()).expect("seed");
        let traj = integrate(&init, &params, &IntegratorConfig::default()).expect("run");
        let nodes = count_nodes(&traj, DEFAULT_W_FLOOR);
        let oracle = rk4_oracle(&init, &params, 1e-4, 50.0, 1e-8, 1e12);
        assert_eq!(
            nodes.count, oracle.nodes,
            "lambda = {lambda}: adaptive {} vs oracle {}",
            nodes.count, oracle.nodes
        );
    }
}

#[test]
fn endpoint_states_match_the_oracle() {
    let params = Params::new(0.001);
    let init = initial_state(&params, &SeedOptions::default()).expect("seed");
    let cfg = IntegratorConfig {
        r_max: 10.0,
        ..IntegratorConfig::default()
    };
    let traj = integrate(&init, &params, &cfg).expect("run");
    let oracle = rk4_oracle(&init, &params, 1e-4, 10.0, 1e-8, 1e12);
    let dev = floored_rel(&traj.last().components(), &oracle.end);
    assert!(dev < 1e-6, "endpoint deviation from oracle: {dev:.3e}");
}

#[test]
fn negative_lambda_crossings_match_the_oracle() {
    // the two early crossings survive in the frozen regime; the oracle and
    // the adaptive run must agree on where they sit
    let params = Params::new(-0.15);
    let init = initial_state(&params, &SeedOptions::default()).expect("seed");
    let traj = integrate(&init, &params, &IntegratorConfig::default()).expect("run");
    let nodes = count_nodes(&traj, DEFAULT_W_FLOOR);
    let oracle = rk4_oracle(&init, &params, 1e-4, 50.0, 1e-8, 1e12);
    assert_eq!(nodes.count, oracle.nodes);
    assert_eq!(nodes.count, 2);
    let expected = [1.709, 6.151];
    for (got, want) in nodes.radii.iter().zip(expected) {
        assert!(
            (got - want).abs() < 5e-3,
            "crossing at {got:.4}, expected near {want}"
        );
    }
}
