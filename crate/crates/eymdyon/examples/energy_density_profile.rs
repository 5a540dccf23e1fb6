//! Energy density along a run and its finite core limit.
//!
//! T_tt = (B²r²(Φ')² + Φ²W² + C(W')²) / (2g²B²r²) stays finite as the core
//! radius shrinks: at the seed it approaches a² + 2b²·C(r0) for g = 1.
//!
//! Run with:
//!   cargo run --release --example energy_density_profile

use eymdyon::{energy_density, initial_state, integrate, IntegratorConfig, Params, SeedOptions};

fn main() {
    println!("seed-point energy density against the series limit:");
    for r0 in [1e-2, 1e-4, 1e-6, 1e-8] {
        let params = Params {
            r0,
            ..Params::new(0.0)
        };
        let s = initial_state(&params, &SeedOptions::default()).expect("seed");
        let t = energy_density(&s, &params).expect("energy density");
        let limit = params.a * params.a + 2.0 * params.b * params.b * s.c;
        println!(
            "  r0 = {r0:<6e}  T_tt = {t:.12}  limit a^2 + 2 b^2 C = {limit}  (rel dev {:.1e})",
            (t - limit).abs() / limit
        );
    }

    let params = Params::new(0.001);
    let init = initial_state(&params, &SeedOptions::default()).expect("seed");
    let cfg = IntegratorConfig {
        r_max: 10.0,
        ..IntegratorConfig::default()
    };
    let traj = integrate(&init, &params, &cfg).expect("integrate");
    println!(
        "\nprofile at lambda = {} (every 1000th sample):",
        params.lambda
    );
    println!("      r          T_tt");
    for s in traj.samples().iter().step_by(1000) {
        println!(
            "{:>10.4}  {:>12.6e}",
            s.r,
            energy_density(s, &params).expect("energy density")
        );
    }
}
