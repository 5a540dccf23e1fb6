//! The closed-form core constant for C(r0) and why it is not used.
//!
//! The closed-form metric seed C(r0) = 1 − a²/(8b²)·(√3·ln(3 − 1.5√3) + 6)
//! evaluates to ≈ −3.51 for the reference shooting parameters
//! (a = 1, b = 0.35): negative, hence unusable as a metric component.
//! The solver therefore defaults to C(r0) = 1 (legitimate by the rescaling
//! freedom in C) and keeps the formula behind a flag, which errors exactly
//! when the constant is non-positive.
//!
//! Run with:
//!   cargo run --release --example core_constant

use eymdyon::{core_c_constant, initial_state, Params, SeedOptions};

fn main() {
    println!("C(r0) closed-form constant:");
    for (a, b) in [
        (0.0, 1.0),
        (0.5, 0.35),
        (1.0, 1.0),
        (1.0, 0.35),
        (2.0, 0.35),
    ] {
        match core_c_constant(a, b) {
            Ok(c) => println!("  a = {a:<4} b = {b:<5} -> {c:.6}"),
            Err(e) => println!("  a = {a:<4} b = {b:<5} -> error: {e}"),
        }
    }

    println!("\nseeding with the formula enabled:");
    let opts = SeedOptions {
        use_closed_form_c0: true,
        ..SeedOptions::default()
    };
    for (a, b) in [(1.0, 1.0), (1.0, 0.35)] {
        let params = Params {
            a,
            b,
            ..Params::new(0.0)
        };
        match initial_state(&params, &opts) {
            Ok(s) => println!("  a = {a}, b = {b}: C(r0) = {:.6}", s.c),
            Err(e) => println!("  a = {a}, b = {b}: {e}"),
        }
    }
}
