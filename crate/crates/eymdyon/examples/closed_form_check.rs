//! Closed-form benchmark of the integrator.
//!
//! With W = Φ = 0 and Λ = 0 the temporal metric equation decouples to
//! C'' = (C')²/(4C), solved by C(r) = (1 + 0.75(r − r0))^{4/3} for
//! C(r0) = C'(r0) = 1. This run measures the deviation of the integrated C
//! from that closed form and the observed convergence order of both
//! embedded pairs.
//!
//! Run with:
//!   cargo run --release --example closed_form_check

use eymdyon::{integrate, self_convergence, FieldState, IntegratorConfig, Method, Params};

fn main() {
    let initial = FieldState {
        r: 0.01,
        b: 1.0,
        bp: 0.0,
        c: 1.0,
        cp: 1.0,
        w: 0.0,
        wp: 0.0,
        phi: 0.0,
        phip: 0.0,
    };
    let params = Params {
        a: 0.0,
        b: 0.0,
        ..Params::new(0.0)
    };
    let closed = |r: f64| (1.0 + 0.75 * (r - 0.01)).powf(4.0 / 3.0);

    for method in [Method::Verner65, Method::Dopri54] {
        let cfg = IntegratorConfig {
            method,
            r_max: 10.0,
            ..IntegratorConfig::default()
        };
        let start = std::time::Instant::now();
        let traj = integrate(&initial, &params, &cfg).expect("closed-form run");
        let elapsed = start.elapsed();
        let mut worst: f64 = 0.0;
        for s in traj.samples() {
            let exact = closed(s.r);
            worst = worst.max((s.c - exact).abs() / exact);
        }
        let order = self_convergence(&initial, &params, &cfg, &[1e-7, 1e-9, 1e-11])
            .expect("convergence study")
            .order()
            .expect("non-degenerate");
        println!(
            "{:<9} max |C/C_exact - 1| = {:.3e} over [0.01, 10] in {} steps ({:.1?}); \
             observed order {:.2} (nominal {})",
            method.name(),
            worst,
            traj.accepted_steps(),
            elapsed,
            order,
            method.nominal_order()
        );
    }

    println!("\nC(10) integrated  = {:.15}", {
        let cfg = IntegratorConfig {
            r_max: 10.0,
            ..IntegratorConfig::default()
        };
        integrate(&initial, &params, &cfg).unwrap().last().c
    });
    println!("C(10) closed form = {:.15}", closed(10.0));
}
