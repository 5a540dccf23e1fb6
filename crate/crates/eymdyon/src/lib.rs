//! Solver and experiment harness for SU(2) Einstein-Yang-Mills dyon fields
//! on a cylindrically symmetric spacetime with cosmological constant.
//!
//! The library integrates the coupled radial field equations for the two
//! metric functions `B`, `C` and the two Yang-Mills amplitudes `W` (magnetic)
//! and `Phi` (electric) outward from a small core radius, detects
//! cosmological horizons where `C` collapses, counts the zero crossings of
//! the oscillating magnetic amplitude, and sweeps families of runs over the
//! cosmological constant to produce horizon and node tables.
//!
//! Start with the runnable programs under `examples/`, one per capability:
//!
//! ```bash
//! cargo run --release --example closed_form_check
//! cargo run --release --example string_profile
//! cargo run --release --example oscillation_nodes
//! cargo run --release --example horizon_hunt
//! cargo run --release --example lambda_sweep
//! cargo run --release --example scale_invariance
//! cargo run --release --example dual_method_crosscheck
//! cargo run --release --example energy_density_profile
//! cargo run --release --example core_constant
//! ```
//!
//! A thin `eymdyon` binary wraps the same functionality as `run`, `sweep`
//! and `validate` subcommands for batch use; see the README.

// validation guards are written as negated comparisons (`!(x > 0.0)`) so a
// NaN fails them too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod diagnostics;
pub mod integrator;
pub mod model;
pub mod output;
pub mod seed;
pub mod sweep;
pub mod validate;

pub use diagnostics::{
    classify, count_nodes, energy_density, scale_transform, Classification, NodeReport,
    DEFAULT_W_FLOOR,
};
pub use integrator::{
    crosscheck, integrate, integrate_with, self_convergence, trajectory_discrepancy,
    ConvergenceEstimate, Crosscheck, IntegrateError, IntegratorConfig, Method, TerminalReason,
    TerminalRecord, Trajectory,
};
pub use model::{Derivatives, FieldState, ModelError, Params};
pub use seed::{core_c_constant, initial_state, SeedError, SeedOptions};
pub use sweep::{rh_curve, run_sweep, SweepRow, SweepSpec};
