//! Cosmological horizon detection.
//!
//! At large enough positive Λ the temporal metric function C collapses at a
//! finite radius. The integrator detects the crossing of
//! C = horizon_epsilon · C(r0), refines it on the dense interpolant to
//! 1e-10, and reports the run as horizon-terminated.
//!
//! Run with:
//!   cargo run --release --example horizon_hunt

use eymdyon::{initial_state, integrate, IntegratorConfig, Params, SeedOptions, TerminalReason};

fn main() {
    let params = Params::new(0.015);
    let init = initial_state(&params, &SeedOptions::default()).expect("seed");
    let cfg = IntegratorConfig::default();
    let traj = integrate(&init, &params, &cfg).expect("integrate");

    assert_eq!(traj.terminal().reason, TerminalReason::Horizon);
    let r_h = traj.terminal().r_h.expect("horizon radius");
    let threshold = cfg.horizon_epsilon * init.c;

    println!("lambda          = {}", params.lambda);
    println!("horizon radius  = {r_h:.12}");
    println!(
        "C threshold     = {threshold:e}  (epsilon {} x C(r0) {})",
        cfg.horizon_epsilon, init.c
    );
    println!("C at the end    = {:e}", traj.last().c);
    println!("accepted steps  = {}", traj.accepted_steps());

    // the last few samples show C collapsing through eight orders of magnitude
    println!("\n      r            C              W          Phi");
    let n = traj.len();
    for s in &traj.samples()[n.saturating_sub(6)..] {
        println!(
            "{:>12.6}  {:>13.6e}  {:>9.5}  {:>9.5}",
            s.r, s.c, s.w, s.phi
        );
    }

    // tightening the threshold moves the detected radius only slightly:
    // C falls steeply, so r_h is insensitive to epsilon
    println!("\nepsilon sensitivity:");
    for eps in [1e-6, 1e-8, 1e-10] {
        let cfg = IntegratorConfig {
            horizon_epsilon: eps,
            ..IntegratorConfig::default()
        };
        let traj = integrate(&init, &params, &cfg).expect("integrate");
        println!(
            "  epsilon {eps:e}: r_h = {}",
            traj.terminal()
                .r_h
                .map(|v| format!("{v:.10}"))
                .unwrap_or_else(|| "none".into())
        );
    }
}
