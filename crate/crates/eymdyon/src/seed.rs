//! Near-core series initial data.
//!
//! The fields are started at the small core radius `r0` from truncated
//! series: `W = 1 − b·r0²`, `Phi = a·r0`, `B = 1 − b·r0²/2`, with the first
//! derivatives taken as the exact derivatives of those truncations.
//!
//! The closed-form seed constant for `C(r0)` evaluates negative for the
//! reference shooting parameters, which is unusable as a metric component.
//! We therefore default to `C(r0) = 1`, `C'(r0) = 0` (legitimate thanks to
//! the scale freedom that rescales `C`), keep the closed form available
//! behind a flag, and expose it as a diagnostic so the inconsistency stays
//! reproducible.

use crate::model::{FieldState, Params};
use serde::Serialize;
use thiserror::Error;

/// Metric initial values, where the series leave a free choice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeedOptions {
    /// Initial `C(r0)`.
    pub c0: f64,
    /// Initial `C'(r0)`.
    pub cp0: f64,
    /// Take `C(r0)` from the closed-form constant instead of `c0`.
    /// Errors when that constant is not a positive metric value.
    pub use_closed_form_c0: bool,
}

impl Default for SeedOptions {
    fn default() -> Self {
        SeedOptions {
            c0: 1.0,
            cp0: 0.0,
            use_closed_form_c0: false,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SeedError {
    #[error("closed-form C(r0) constant is {value} for a = {a}, b = {b}: not usable as a metric component")]
    UnusableCFormula { a: f64, b: f64, value: f64 },
    #[error("closed-form C(r0) constant is undefined for b = 0")]
    ZeroB,
    #[error("initial C(r0) must be positive, got {0}")]
    NonPositiveC(f64),
}

/// The closed-form constant `1 − a²/(8b²)·(√3·ln(3 − 1.5√3) + 6)`.
///
/// Exposed as a diagnostic: for the reference shooting parameters
/// (a = 1, b = 0.35) it evaluates to ≈ −3.5115, i.e. no valid metric seed.
pub fn core_c_constant(a: f64, b: f64) -> Result<f64, SeedError> {
    if b == 0.0 {
        return Err(SeedError::ZeroB);
    }
    let sqrt3 = 3.0f64.sqrt();
    let inner = sqrt3 * (3.0 - 1.5 * sqrt3).ln() + 6.0;
    Ok(1.0 - a * a / (8.0 * b * b) * inner)
}

/// Builds the state at `r = r0` from the shooting parameters.
pub fn initial_state(params: &Params, opts: &SeedOptions) -> Result<FieldState, SeedError> {
    let Params { a, b, r0, .. } = *params;
    let (c0, cp0) = if opts.use_closed_form_c0 {
        let c = core_c_constant(a, b)?;
        if c <= 0.0 {
            return Err(SeedError::UnusableCFormula { a, b, value: c });
        }
        (c, opts.cp0)
    } else {
        if opts.c0 <= 0.0 {
            return Err(SeedError::NonPositiveC(opts.c0));
        }
        (opts.c0, opts.cp0)
    };
    Ok(FieldState {
        r: r0,
        b: 1.0 - 0.5 * b * r0 * r0,
        bp: -b * r0,
        c: c0,
        cp: cp0,
        w: 1.0 - b * r0 * r0,
        wp: -2.0 * b * r0,
        phi: a * r0,
        phip: a,
    })
}

/// Warns when the truncated series is stretched: the dropped terms are
/// O((b·r0²)²), so b·r0² above 0.1 is no longer a small correction.
pub fn truncation_warning(params: &Params) -> Option<String> {
    let q = params.b * params.r0 * params.r0;
    if q.abs() > 0.1 {
        Some(format!(
            "b*r0^2 = {q:.3} exceeds 0.1: the truncated core series is questionable at r0 = {}",
            params.r0
        ))
    } else {
        None
    }
}
