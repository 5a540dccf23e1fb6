//! Node counting of the magnetic amplitude at small positive Λ.
//!
//! For positive cosmological constant the magnetic amplitude W oscillates
//! around zero and the oscillation frequency rises with Λ; below the
//! horizon-forming range the node count grows monotonically.
//!
//! Run with:
//!   cargo run --release --example oscillation_nodes

use eymdyon::{
    count_nodes, initial_state, integrate, IntegratorConfig, Params, SeedOptions, DEFAULT_W_FLOOR,
};

fn main() {
    println!("lambda    reason          nodes  first crossings");
    for lambda in [0.0, 0.0005, 0.001, 0.0025, 0.0034, 0.00425] {
        let params = Params::new(lambda);
        let init = initial_state(&params, &SeedOptions::default()).expect("seed");
        let traj = integrate(&init, &params, &IntegratorConfig::default()).expect("integrate");
        let nodes = count_nodes(&traj, DEFAULT_W_FLOOR);
        let first: Vec<String> = nodes
            .radii
            .iter()
            .take(4)
            .map(|r| format!("{r:.3}"))
            .collect();
        println!(
            "{:<9} {:<15} {:<6} {}{}",
            lambda,
            traj.terminal().reason.to_string(),
            nodes.count,
            first.join(", "),
            if nodes.count > 4 { ", ..." } else { "" }
        );
    }
}
