//! Horizon radius against the cosmological constant, for two core radii.
//!
//! Over the small-Λ grid the horizon recedes smoothly as Λ grows. In the
//! window Λ ≈ 0.15–0.55 the horizon repeatedly dissolves (C dips close to
//! zero but recovers) and reappears farther out: the curve has gaps and
//! upward jumps. With the default core normalization C(r0) = 1 the two core
//! radii produce nearly identical curves.
//!
//! Writes sweep_r0p01.csv, sweep_r0em8.csv and rh_curve.svg next to the
//! current directory.
//!
//! Run with:
//!   cargo run --release --example lambda_sweep

use eymdyon::output::{write_rh_curve_svg, write_sweep_csv};
use eymdyon::{rh_curve, run_sweep, Params, SweepSpec};
use std::path::Path;

fn main() {
    // coarse low grid plus a fine grid across the first dissolution window
    let mut grid: Vec<f64> = (1..=8).map(|i| i as f64 * 0.0025).collect();
    grid.extend((0..=30).map(|i| 0.14 + i as f64 * 0.005));

    for (r0, csv_name) in [(0.01, "sweep_r0p01.csv"), (1e-8, "sweep_r0em8.csv")] {
        let base = Params {
            r0,
            ..Params::new(0.0)
        };
        let mut spec = SweepSpec::new(grid.clone(), base);
        spec.workers = std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1);
        let start = std::time::Instant::now();
        let rows = run_sweep(&spec).expect("sweep");
        println!(
            "r0 = {r0:<7e}: {} rows in {:.2?}",
            rows.len(),
            start.elapsed()
        );

        let curve = rh_curve(&rows);
        let mut jumps = 0;
        for w in curve.windows(2) {
            if w[1].1 > w[0].1 {
                jumps += 1;
                println!(
                    "  horizon pushed outward: r_h({:.4}) = {:.3} -> r_h({:.4}) = {:.3}",
                    w[0].0, w[0].1, w[1].0, w[1].1
                );
            }
        }
        if jumps == 0 {
            println!("  r_h monotone over this grid");
        }

        write_sweep_csv(Path::new(csv_name), &rows).expect("write csv");
        if r0 == 0.01 {
            write_rh_curve_svg(Path::new("rh_curve.svg"), &curve).expect("write svg");
        }
        println!("  -> {csv_name}");
    }
    println!("-> rh_curve.svg");
}
