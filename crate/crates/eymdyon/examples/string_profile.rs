//! Negative cosmological constant: the string-like regime.
//!
//! Small negative Λ still lets the magnetic amplitude oscillate a few times
//! before the exponentially growing C freezes it; strongly negative Λ
//! freezes it almost immediately and the profile resembles the Abelian
//! cosmic-string fields. The metric growth is physical, so the blowup guard
//! is lifted and the range shortened to keep C in floating-point reach.
//!
//! Run with:
//!   cargo run --release --example string_profile

use eymdyon::{
    classify, count_nodes, initial_state, integrate, IntegratorConfig, Params, SeedOptions,
    DEFAULT_W_FLOOR,
};

fn main() {
    println!("lambda   reason          r_end    nodes  classification  W(end)    Phi(end)");
    for lambda in [-0.01, -0.15, -0.25, -0.5, -1.0, -2.0] {
        let params = Params::new(lambda);
        let init = initial_state(&params, &SeedOptions::default()).expect("seed");
        let cfg = IntegratorConfig {
            r_max: 20.0,
            blowup_limit: 1e30,
            ..IntegratorConfig::default()
        };
        let traj = integrate(&init, &params, &cfg).expect("integrate");
        let nodes = count_nodes(&traj, DEFAULT_W_FLOOR);
        let class = classify(&traj, &nodes);
        let last = traj.last();
        println!(
            "{:<8} {:<15} {:<8.3} {:<6} {:<15} {:<9.4} {:<9.4}",
            lambda,
            traj.terminal().reason.to_string(),
            traj.terminal().r_end,
            nodes.count,
            class.to_string(),
            last.w,
            last.phi
        );
        if !nodes.radii.is_empty() {
            let radii: Vec<String> = nodes.radii.iter().map(|r| format!("{r:.3}")).collect();
            println!("         W crossings at r = {}", radii.join(", "));
        }
    }
    println!("\nThe crossing spacing stretches and the count drops as lambda");
    println!("becomes more negative: the oscillation dies and the fields freeze.");
}
