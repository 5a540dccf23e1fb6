//! The exact rescaling symmetry of the field equations.
//!
//! (C, Φ) → (γC, √γ·Φ) and (B, W) → (βB, βW) maps solutions to solutions.
//! Integrating a rescaled seed therefore reproduces the rescaled trajectory,
//! and every derived quantity (horizon radius, node count, classification)
//! is unchanged.
//!
//! Run with:
//!   cargo run --release --example scale_invariance

use eymdyon::{
    classify, count_nodes, initial_state, integrate, scale_transform, trajectory_discrepancy,
    FieldState, IntegratorConfig, Params, SeedOptions, DEFAULT_W_FLOOR,
};

fn scaled(s: &FieldState, gamma: f64, beta: f64) -> FieldState {
    let sg = gamma.sqrt();
    FieldState {
        r: s.r,
        b: beta * s.b,
        bp: beta * s.bp,
        c: gamma * s.c,
        cp: gamma * s.cp,
        w: beta * s.w,
        wp: beta * s.wp,
        phi: sg * s.phi,
        phip: sg * s.phip,
    }
}

fn main() {
    for lambda in [-0.01, 0.001, 0.015] {
        let params = Params::new(lambda);
        let init = initial_state(&params, &SeedOptions::default()).expect("seed");
        let cfg = IntegratorConfig::default();
        let base = integrate(&init, &params, &cfg).expect("integrate");
        let base_nodes = count_nodes(&base, DEFAULT_W_FLOOR);
        println!(
            "lambda = {lambda}: reason {}, r_h {:?}, {} nodes, {}",
            base.terminal().reason,
            base.terminal().r_h,
            base_nodes.count,
            classify(&base, &base_nodes)
        );
        for (gamma, beta) in [(4.0, 2.0), (0.25, 3.0), (10.0, 0.1)] {
            let run = integrate(&scaled(&init, gamma, beta), &params, &cfg).expect("integrate");
            let reference = scale_transform(&base, gamma, beta).expect("transform");
            let dev = trajectory_discrepancy(&run, &reference, 1.0);
            let nodes = count_nodes(&run, DEFAULT_W_FLOOR * beta);
            println!(
                "  (gamma, beta) = ({gamma}, {beta}): profile deviation {dev:.2e}, \
                 reason {}, r_h {:?}, {} nodes, {}",
                run.terminal().reason,
                run.terminal().r_h,
                nodes.count,
                classify(&run, &nodes)
            );
        }
    }
}
