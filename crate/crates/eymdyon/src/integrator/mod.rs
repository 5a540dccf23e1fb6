//! Adaptive integration of the field equations with dense output and
//! terminal-event detection.
//!
//! The system is advanced outward from the core radius with an embedded
//! explicit Runge-Kutta pair; dense samples are emitted at fixed spacing
//! through the method's own continuous extension. Integration stops at the
//! first of: the configured radial range end, the temporal metric function
//! `C` crossing its horizon threshold (refined on the interpolant), a field
//! component exceeding the blowup guard, or the step size hitting its floor.
//! Two distinct pairs are provided so independent runs can cross-check each
//! other, echoing the dual-solver validation the problem calls for.

mod tableau;

use crate::model::{Derivatives, FieldState, ModelError, Params};
use serde::Serialize;
use tableau::*;
use thiserror::Error;

/// Width to which a horizon crossing is bracketed on the dense interpolant.
pub const HORIZON_REFINE_TOL: f64 = 1e-10;

/// Default disagreement threshold above which a cross-check is flagged.
pub const DEFAULT_CROSSCHECK_THRESHOLD: f64 = 1e-6;

/// The two embedded explicit pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub enum Method {
    /// Verner 6(5) with 5th-order continuous extension; the default.
    #[default]
    Verner65,
    /// Dormand-Prince 5(4) with the classic 4th-order interpolant;
    /// the cross-check partner.
    Dopri54,
}

impl Method {
    /// Order of the propagated solution.
    pub fn nominal_order(&self) -> usize {
        match self {
            Method::Verner65 => 6,
            Method::Dopri54 => 5,
        }
    }

    /// Order of the embedded error estimator.
    pub fn embedded_order(&self) -> usize {
        match self {
            Method::Verner65 => 5,
            Method::Dopri54 => 4,
        }
    }

    /// The other pair of the two.
    pub fn partner(&self) -> Method {
        match self {
            Method::Verner65 => Method::Dopri54,
            Method::Dopri54 => Method::Verner65,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::Verner65 => "verner65",
            Method::Dopri54 => "dopri54",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "verner65" => Ok(Method::Verner65),
            "dopri54" => Ok(Method::Dopri54),
            other => Err(format!(
                "unknown method '{other}' (expected 'verner65' or 'dopri54')"
            )),
        }
    }
}

/// Step control, range, guard and output settings of one integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegratorConfig {
    pub method: Method,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// First trial step size.
    pub h_init: f64,
    /// Step floor; falling below it terminates the run.
    pub h_min: f64,
    pub h_max: f64,
    /// Outer radius at which a run ends regularly.
    pub r_max: f64,
    /// Any field component reaching this magnitude terminates the run.
    pub blowup_limit: f64,
    /// Horizon threshold on `C`, relative to `C(r0)`.
    pub horizon_epsilon: f64,
    /// Output sample spacing.
    pub dense_dr: f64,
    /// Hard cap on accepted steps; exceeding it is an error, which keeps
    /// sweeps over pathological parameter corners bounded.
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            method: Method::Verner65,
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            h_init: 1e-6,
            h_min: 1e-14,
            h_max: 0.1,
            r_max: 50.0,
            blowup_limit: 1e12,
            horizon_epsilon: 1e-8,
            dense_dr: 1e-3,
            max_steps: 10_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<(), IntegrateError> {
        let bad = |what: &str| Err(IntegrateError::InvalidConfig(what.to_string()));
        if !(self.h_min > 0.0 && self.h_min < self.h_init && self.h_init <= self.h_max) {
            return bad("step sizes must satisfy 0 < h_min < h_init <= h_max");
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return bad("tolerances must be positive");
        }
        if !(self.r_max > 0.0) {
            return bad("r_max must be positive");
        }
        if !(self.horizon_epsilon > 0.0 && self.horizon_epsilon < 1.0) {
            return bad("horizon_epsilon must lie in (0, 1)");
        }
        if !(self.dense_dr > 0.0) {
            return bad("dense_dr must be positive");
        }
        if !(self.blowup_limit > 0.0) {
            return bad("blowup_limit must be positive");
        }
        if self.max_steps == 0 {
            return bad("max_steps must be at least 1");
        }
        Ok(())
    }
}

/// Why a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalReason {
    ReachedRMax,
    Horizon,
    Blowup,
    StepUnderflow,
}

impl std::fmt::Display for TerminalReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TerminalReason::ReachedRMax => "reached_r_max",
            TerminalReason::Horizon => "horizon",
            TerminalReason::Blowup => "blowup",
            TerminalReason::StepUnderflow => "step_underflow",
        })
    }
}

/// Terminal record of a run. `r_h` is present exactly when the run ended on
/// the horizon threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TerminalRecord {
    pub reason: TerminalReason,
    pub r_end: f64,
    pub r_h: Option<f64>,
}

/// Dense output of one integration: samples at `dense_dr` spacing plus the
/// exact terminal point, strictly increasing in radius.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    samples: Vec<FieldState>,
    terminal: TerminalRecord,
    accepted_steps: usize,
}

impl Trajectory {
    pub(crate) fn from_parts(
        samples: Vec<FieldState>,
        terminal: TerminalRecord,
        accepted_steps: usize,
    ) -> Self {
        Trajectory {
            samples,
            terminal,
            accepted_steps,
        }
    }

    /// All samples including the terminal point.
    pub fn samples(&self) -> &[FieldState] {
        &self.samples
    }

    /// The uniformly spaced prefix (everything but the terminal point),
    /// suitable for finite-difference residuals.
    pub fn dense_samples(&self) -> &[FieldState] {
        &self.samples[..self.samples.len().saturating_sub(1)]
    }

    pub fn terminal(&self) -> &TerminalRecord {
        &self.terminal
    }

    pub fn first(&self) -> &FieldState {
        &self.samples[0]
    }

    pub fn last(&self) -> &FieldState {
        self.samples.last().expect("trajectory is never empty")
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn accepted_steps(&self) -> usize {
        self.accepted_steps
    }
}

#[derive(Debug, Error)]
pub enum IntegrateError {
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid initial state: {0}")]
    InitialState(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("step budget of {max_steps} accepted steps exhausted at r = {r}")]
    StepBudget { max_steps: usize, r: f64 },
    #[error("convergence study failed: {0}")]
    ConvergenceStudy(String),
}

/// Result of estimating the observed convergence order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvergenceEstimate {
    /// Observed order from endpoint differences against mean step size.
    Order(f64),
    /// All endpoint differences were at rounding level; no order can be
    /// measured (e.g. on an exact fixed point).
    Degenerate,
}

impl ConvergenceEstimate {
    pub fn order(&self) -> Option<f64> {
        match self {
            ConvergenceEstimate::Order(p) => Some(*p),
            ConvergenceEstimate::Degenerate => None,
        }
    }
}

/// Both trajectories of a dual-method run plus their maximum discrepancy
/// over shared dense radii.
#[derive(Debug, Clone)]
pub struct Crosscheck {
    pub primary: Trajectory,
    pub alternate: Trajectory,
    /// Maximum component discrepancy over the full shared range, relative
    /// to the larger magnitude with a floor of one.
    pub max_discrepancy: f64,
}

impl Crosscheck {
    /// Discrepancy restricted to the first `fraction` of the shorter
    /// trajectory's radial range.
    pub fn discrepancy_over(&self, fraction: f64) -> f64 {
        trajectory_discrepancy(&self.primary, &self.alternate, fraction)
    }

    /// Whether the full-range disagreement stays below `threshold`.
    pub fn is_reliable(&self, threshold: f64) -> bool {
        self.max_discrepancy <= threshold
    }
}

/// Maximum componentwise discrepancy between two trajectories over their
/// shared dense radii, restricted to the first `fraction` of the shorter
/// radial range. Relative to the larger field magnitude, floored at one so
/// zero crossings do not blow the measure up (fields are order-one in the
/// seed normalization).
pub fn trajectory_discrepancy(a: &Trajectory, b: &Trajectory, fraction: f64) -> f64 {
    let sa = a.dense_samples();
    let sb = b.dense_samples();
    let n = sa.len().min(sb.len());
    if n == 0 {
        return 0.0;
    }
    let r0 = sa[0].r;
    let shared_end = a.terminal().r_end.min(b.terminal().r_end);
    let r_cut = r0 + fraction * (shared_end - r0);
    let mut worst: f64 = 0.0;
    for i in 0..n {
        if sa[i].r > r_cut {
            break;
        }
        let ya = sa[i].components();
        let yb = sb[i].components();
        for j in 0..8 {
            let scale = ya[j].abs().max(yb[j].abs()).max(1.0);
            worst = worst.max((ya[j] - yb[j]).abs() / scale);
        }
    }
    worst
}

/// Integrates the field equations from `initial` outward.
pub fn integrate(
    initial: &FieldState,
    params: &Params,
    config: &IntegratorConfig,
) -> Result<Trajectory, IntegrateError> {
    integrate_with(crate::model::rhs, initial, params, config)
}

/// As [`integrate`], but with a caller-supplied right-hand side. The
/// validation battery uses this to drive deliberately perturbed systems
/// through the same machinery.
pub fn integrate_with<F>(
    rhs: F,
    initial: &FieldState,
    params: &Params,
    config: &IntegratorConfig,
) -> Result<Trajectory, IntegrateError>
where
    F: Fn(&FieldState, &Params) -> Result<Derivatives, ModelError>,
{
    config.validate()?;
    params.validate()?;
    if !initial.is_finite() {
        return Err(IntegrateError::InitialState(
            "initial state contains a non-finite component".into(),
        ));
    }
    if !(initial.r > 0.0) {
        return Err(IntegrateError::InitialState(format!(
            "initial radius must be positive, got {}",
            initial.r
        )));
    }
    if initial.r >= config.r_max {
        return Err(IntegrateError::InitialState(format!(
            "initial radius {} is already at or beyond r_max {}",
            initial.r, config.r_max
        )));
    }
    let horizon_threshold = config.horizon_epsilon * initial.c;
    if initial.c <= horizon_threshold {
        return Err(IntegrateError::InitialState(format!(
            "initial C = {} already violates the horizon condition",
            initial.c
        )));
    }
    if initial
        .components()
        .iter()
        .any(|v| v.abs() >= config.blowup_limit)
    {
        return Err(IntegrateError::InitialState(
            "initial state already violates the blowup guard".into(),
        ));
    }

    let eval = |t: f64, y: &[f64; 8]| -> Result<[f64; 8], ModelError> {
        let state = FieldState::from_components(t, y);
        rhs(&state, params).map(|d| d.components())
    };

    let mut t = initial.r;
    let mut y = initial.components();
    // first derivative evaluation validates the chart at the seed
    let mut k0 = eval(t, &y)?;

    let mut samples = Vec::with_capacity(1024);
    samples.push(*initial);

    let r0 = initial.r;
    let dr = config.dense_dr;
    // index of the next dense grid radius r0 + next_idx * dr to emit
    let mut next_idx: u64 = 1;
    // grid points this close to the terminal radius are dropped in favor of
    // the exact terminal sample
    let collision_margin = dr * 1e-9;

    let mut h = config.h_init.min(config.h_max).min(config.r_max - t);
    let mut accepted: usize = 0;
    let mut rejected_last = false;

    let stages = match config.method {
        Method::Verner65 => V65_STAGES,
        Method::Dopri54 => DP54_STAGES,
    };
    let err_exponent = -1.0 / (config.method.embedded_order() as f64 + 1.0);
    let mut k = [[0.0f64; 8]; V65_DENSE_STAGES];

    loop {
        if accepted >= config.max_steps {
            return Err(IntegrateError::StepBudget {
                max_steps: config.max_steps,
                r: t,
            });
        }

        let mut clamped_to_end = false;
        if t + h >= config.r_max {
            h = config.r_max - t;
            clamped_to_end = true;
        }

        // ---- trial step ------------------------------------------------
        k[0] = k0;
        let mut failed = false;
        match config.method {
            Method::Verner65 => {
                for i in 1..stages {
                    let mut ys = y;
                    for (j, yj) in ys.iter_mut().enumerate() {
                        let mut acc = 0.0;
                        for (l, kl) in k.iter().enumerate().take(i) {
                            acc += V65_A[i][l] * kl[j];
                        }
                        *yj += h * acc;
                    }
                    match eval(t + V65_C[i] * h, &ys) {
                        Ok(ki) => k[i] = ki,
                        Err(_) => {
                            failed = true;
                            break;
                        }
                    }
                }
            }
            Method::Dopri54 => {
                for i in 1..stages {
                    let mut ys = y;
                    for (j, yj) in ys.iter_mut().enumerate() {
                        let mut acc = 0.0;
                        for (l, kl) in k.iter().enumerate().take(i) {
                            acc += DP54_A[i][l] * kl[j];
                        }
                        *yj += h * acc;
                    }
                    match eval(t + DP54_C[i] * h, &ys) {
                        Ok(ki) => k[i] = ki,
                        Err(_) => {
                            failed = true;
                            break;
                        }
                    }
                }
            }
        }

        let (b_high, b_low): (&[f64], &[f64]) = match config.method {
            Method::Verner65 => (&V65_B, &V65_B_LOW),
            Method::Dopri54 => (&DP54_B, &DP54_B_LOW),
        };

        let mut y_new = [0.0f64; 8];
        let mut err_norm = f64::INFINITY;
        if !failed {
            let mut finite = true;
            for j in 0..8 {
                let mut hi = 0.0;
                let mut lo = 0.0;
                for i in 0..stages {
                    hi += b_high[i] * k[i][j];
                    lo += b_low[i] * k[i][j];
                }
                y_new[j] = y[j] + h * hi;
                if !y_new[j].is_finite() {
                    finite = false;
                }
                let err = h * (hi - lo);
                let scale = config.abs_tol + config.rel_tol * y[j].abs().max(y_new[j].abs());
                if j == 0 {
                    err_norm = (err / scale).abs();
                } else {
                    err_norm = err_norm.max((err / scale).abs());
                }
            }
            if !finite || !err_norm.is_finite() {
                failed = true;
            }
        }

        if failed || err_norm > 1.0 {
            // reject: shrink and retry, or give up at the floor
            if h <= config.h_min * (1.0 + 1e-12) {
                let state = FieldState::from_components(t, &y);
                return Ok(finish(
                    samples,
                    state,
                    TerminalReason::StepUnderflow,
                    None,
                    accepted,
                    collision_margin,
                ));
            }
            let shrink = if failed {
                0.5
            } else {
                (0.9 * err_norm.powf(err_exponent)).max(0.2)
            };
            h = (h * shrink).max(config.h_min);
            rejected_last = true;
            continue;
        }

        // ---- accepted --------------------------------------------------
        accepted += 1;
        let t_new = if clamped_to_end { config.r_max } else { t + h };

        // FSAL: the last stage of both pairs is f(t_new, y_new)
        let k_end = k[stages - 1];

        // dense context for this step
        let dense = match config.method {
            Method::Verner65 => {
                // one extra mid-step stage for the 5th-order interpolant
                let mut ys = y;
                for (j, yj) in ys.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for (l, kl) in k.iter().enumerate().take(V65_STAGES) {
                        acc += V65_A_DENSE[l] * kl[j];
                    }
                    *yj += h * acc;
                }
                match eval(t + V65_C_DENSE * h, &ys) {
                    Ok(k_extra) => {
                        k[V65_STAGES] = k_extra;
                        DenseCtx::Verner { k: &k, y0: y, h }
                    }
                    // mid-step chart breakdown: degrade this step's
                    // interpolation to cubic Hermite rather than lose the run
                    Err(_) => DenseCtx::Hermite {
                        y0: y,
                        y1: y_new,
                        k0,
                        k1: k_end,
                        h,
                    },
                }
            }
            Method::Dopri54 => {
                let mut cont3 = [0.0f64; 8];
                let mut cont4 = [0.0f64; 8];
                for j in 0..8 {
                    let ydiff = y_new[j] - y[j];
                    let bspl = h * k[0][j] - ydiff;
                    cont3[j] = ydiff - h * k[6][j] - bspl;
                    let mut q = 0.0;
                    for i in 0..DP54_STAGES {
                        q += DP54_D[i] * k[i][j];
                    }
                    cont4[j] = h * q;
                }
                DenseCtx::DormandPrince {
                    y0: y,
                    y1: y_new,
                    k0,
                    cont3,
                    cont4,
                    h,
                }
            }
        };

        // ---- events within / at the end of the step --------------------
        let crossed_horizon = y[2] > horizon_threshold && y_new[2] <= horizon_threshold;
        if crossed_horizon {
            let r_h = bisect_crossing(&dense, t, t_new, horizon_threshold);
            let state_h = FieldState::from_components(r_h, &dense.eval(t, r_h));
            emit_until(
                &mut samples,
                &dense,
                t,
                r0,
                dr,
                &mut next_idx,
                r_h,
                collision_margin,
            );
            return Ok(finish(
                samples,
                state_h,
                TerminalReason::Horizon,
                Some(r_h),
                accepted,
                collision_margin,
            ));
        }

        let blown = y_new.iter().any(|v| v.abs() >= config.blowup_limit);
        let stop_here = clamped_to_end || blown;
        // on a terminal step the exact terminal sample lands at t_new, so
        // grid points are kept strictly below it
        let emit_to = if stop_here {
            t_new - collision_margin
        } else {
            t_new
        };
        emit_until(
            &mut samples,
            &dense,
            t,
            r0,
            dr,
            &mut next_idx,
            emit_to,
            collision_margin,
        );

        if stop_here {
            let reason = if blown {
                TerminalReason::Blowup
            } else {
                TerminalReason::ReachedRMax
            };
            let state_end = FieldState::from_components(t_new, &y_new);
            return Ok(finish(
                samples,
                state_end,
                reason,
                None,
                accepted,
                collision_margin,
            ));
        }

        // ---- roll forward -----------------------------------------------
        t = t_new;
        y = y_new;
        k0 = k_end;

        let mut scale = 0.9 * err_norm.powf(err_exponent);
        if !scale.is_finite() {
            scale = 5.0; // err_norm == 0
        }
        scale = scale.clamp(0.2, 5.0);
        if rejected_last {
            scale = scale.min(1.0);
            rejected_last = false;
        }
        h = (h * scale).clamp(config.h_min, config.h_max);
    }
}

/// Interpolation context of one accepted step.
enum DenseCtx<'a> {
    Verner {
        k: &'a [[f64; 8]; V65_DENSE_STAGES],
        y0: [f64; 8],
        h: f64,
    },
    DormandPrince {
        y0: [f64; 8],
        y1: [f64; 8],
        k0: [f64; 8],
        cont3: [f64; 8],
        cont4: [f64; 8],
        h: f64,
    },
    /// Fallback when the extra interpolation stage cannot be evaluated.
    Hermite {
        y0: [f64; 8],
        y1: [f64; 8],
        k0: [f64; 8],
        k1: [f64; 8],
        h: f64,
    },
}

impl DenseCtx<'_> {
    /// State at radius `r` within the step starting at `t0`.
    fn eval(&self, t0: f64, r: f64) -> [f64; 8] {
        match self {
            DenseCtx::Verner { k, y0, h } => {
                // the interpolation weights reach 2e4 and cancel to O(1);
                // Neumaier accumulation keeps that cancellation from
                // injecting weight-scale rounding noise into the samples
                let s = (r - t0) / h;
                let mut sum = *y0;
                let mut comp = [0.0f64; 8];
                for (i, ki) in k.iter().enumerate() {
                    let p = &V65_B_DENSE[i];
                    let mut w = p[5];
                    for c in p[..5].iter().rev() {
                        w = w * s + c;
                    }
                    w *= s;
                    for j in 0..8 {
                        let term = h * w * ki[j];
                        let t = sum[j] + term;
                        comp[j] += if sum[j].abs() >= term.abs() {
                            (sum[j] - t) + term
                        } else {
                            (term - t) + sum[j]
                        };
                        sum[j] = t;
                    }
                }
                for j in 0..8 {
                    sum[j] += comp[j];
                }
                sum
            }
            DenseCtx::DormandPrince {
                y0,
                y1,
                k0,
                cont3,
                cont4,
                h,
            } => {
                let s = (r - t0) / h;
                let s1 = 1.0 - s;
                let mut out = [0.0f64; 8];
                for j in 0..8 {
                    let ydiff = y1[j] - y0[j];
                    let bspl = h * k0[j] - ydiff;
                    out[j] = y0[j] + s * (ydiff + s1 * (bspl + s * (cont3[j] + s1 * cont4[j])));
                }
                out
            }
            DenseCtx::Hermite { y0, y1, k0, k1, h } => {
                let s = (r - t0) / h;
                let s2 = s * s;
                let s3 = s2 * s;
                let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
                let h10 = s3 - 2.0 * s2 + s;
                let h01 = -2.0 * s3 + 3.0 * s2;
                let h11 = s3 - s2;
                let mut out = [0.0f64; 8];
                for j in 0..8 {
                    out[j] = h00 * y0[j] + h * h10 * k0[j] + h01 * y1[j] + h * h11 * k1[j];
                }
                out
            }
        }
    }
}

/// Emits dense grid samples with radius `<= limit` from the current step.
#[allow(clippy::too_many_arguments)]
fn emit_until(
    samples: &mut Vec<FieldState>,
    dense: &DenseCtx<'_>,
    t0: f64,
    r0: f64,
    dr: f64,
    next_idx: &mut u64,
    limit: f64,
    collision_margin: f64,
) {
    loop {
        let r = r0 + (*next_idx as f64) * dr;
        if r > limit {
            break;
        }
        // keep strict monotonicity even if a grid point collides with t0
        if let Some(last) = samples.last() {
            if r <= last.r + collision_margin {
                *next_idx += 1;
                continue;
            }
        }
        let y = dense.eval(t0, r);
        let state = FieldState::from_components(r, &y);
        if !state.is_finite() {
            break;
        }
        samples.push(state);
        *next_idx += 1;
    }
}

/// Appends the exact terminal sample and closes the trajectory.
fn finish(
    mut samples: Vec<FieldState>,
    terminal_state: FieldState,
    reason: TerminalReason,
    r_h: Option<f64>,
    accepted_steps: usize,
    collision_margin: f64,
) -> Trajectory {
    while samples
        .last()
        .is_some_and(|s| s.r >= terminal_state.r - collision_margin)
    {
        samples.pop();
    }
    samples.push(terminal_state);
    Trajectory::from_parts(
        samples,
        TerminalRecord {
            reason,
            r_end: terminal_state.r,
            r_h,
        },
        accepted_steps,
    )
}

/// Refines a downward threshold crossing of `C` on the interpolant to
/// [`HORIZON_REFINE_TOL`], returning the first radius at which the
/// interpolated `C` sits at or below the threshold.
fn bisect_crossing(dense: &DenseCtx<'_>, mut lo: f64, mut hi: f64, threshold: f64) -> f64 {
    let t0 = lo;
    for _ in 0..200 {
        if hi - lo <= HORIZON_REFINE_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bracket at floating-point resolution
        }
        if dense.eval(t0, mid)[2] > threshold {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Runs both methods on identical inputs and reports their maximum relative
/// discrepancy over shared dense radii. Disagreement above the threshold in
/// [`Crosscheck::is_reliable`] flags an unreliable solution.
pub fn crosscheck(
    initial: &FieldState,
    params: &Params,
    config: &IntegratorConfig,
) -> Result<Crosscheck, IntegrateError> {
    let primary = integrate(initial, params, config)?;
    let alt_config = IntegratorConfig {
        method: config.method.partner(),
        ..*config
    };
    let alternate = integrate(initial, params, &alt_config)?;
    let max_discrepancy = trajectory_discrepancy(&primary, &alternate, 1.0);
    Ok(Crosscheck {
        primary,
        alternate,
        max_discrepancy,
    })
}

/// Estimates the observed convergence order from endpoint differences
/// across a ladder of tolerance levels on one horizon-free run.
///
/// Each level `i` runs with `abs_tol = rel_tol = tolerances[i]`. The
/// error-per-step controller keeps the accepted step at
/// `h ∝ tol^(1/(q+1))` with `q` the embedded order, so a method of true
/// order `p` leaves endpoint errors scaling as `tol^(p/(q+1))`; the observed
/// order is therefore `(q+1)` times the regression slope of the
/// log endpoint differences against the log tolerances. The study lifts the
/// caller's step ceiling: the measurement is only meaningful while the
/// tolerance, not `h_max`, limits the step.
pub fn self_convergence(
    initial: &FieldState,
    params: &Params,
    config: &IntegratorConfig,
    tolerances: &[f64],
) -> Result<ConvergenceEstimate, IntegrateError> {
    if tolerances.len() < 3 {
        return Err(IntegrateError::ConvergenceStudy(format!(
            "need at least 3 tolerance levels, got {}",
            tolerances.len()
        )));
    }
    if tolerances.iter().any(|t| !(*t > 0.0)) {
        return Err(IntegrateError::ConvergenceStudy(
            "tolerance levels must be positive".into(),
        ));
    }
    let ratio = tolerances[0] / tolerances[1];
    for w in tolerances.windows(2) {
        let r = w[0] / w[1];
        if !(r > 1.0) || (r / ratio - 1.0).abs() > 0.1 {
            return Err(IntegrateError::ConvergenceStudy(
                "tolerance levels must decrease by a fixed factor".into(),
            ));
        }
    }

    let span = config.r_max - initial.r;
    let mut runs = Vec::with_capacity(tolerances.len());
    for &tol in tolerances {
        let cfg = IntegratorConfig {
            abs_tol: tol,
            rel_tol: tol,
            h_max: config.h_max.max(span / 4.0),
            // endpoints are exact step endpoints; coarse samples suffice
            dense_dr: config.dense_dr.max(span / 64.0),
            ..*config
        };
        runs.push(integrate(initial, params, &cfg)?);
    }

    let reason = runs[0].terminal().reason;
    if runs.iter().any(|r| r.terminal().reason != reason) {
        let reasons: Vec<String> = runs
            .iter()
            .map(|r| r.terminal().reason.to_string())
            .collect();
        return Err(IntegrateError::ConvergenceStudy(format!(
            "runs terminated for different reasons across levels: {}",
            reasons.join(", ")
        )));
    }

    // endpoint differences between consecutive levels, attributed to the
    // coarser level's error
    let mut points = Vec::new();
    let y_scale = runs
        .last()
        .unwrap()
        .last()
        .components()
        .iter()
        .fold(1.0f64, |m, v| m.max(v.abs()));
    for i in 0..runs.len() - 1 {
        let a = runs[i].last().components();
        let b = runs[i + 1].last().components();
        let d = a
            .iter()
            .zip(b.iter())
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        points.push((tolerances[i].ln(), d));
    }
    if points
        .iter()
        .all(|(_, d)| *d <= 64.0 * f64::EPSILON * y_scale)
    {
        return Ok(ConvergenceEstimate::Degenerate);
    }
    if points.iter().any(|(_, d)| *d <= 0.0) {
        return Err(IntegrateError::ConvergenceStudy(
            "endpoint differences straddle rounding level; use coarser tolerances".into(),
        ));
    }

    // least-squares slope of ln(diff) against ln(tol)
    let n = points.len() as f64;
    let mean_x = points.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = points.iter().map(|(_, d)| d.ln()).sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, d) in &points {
        sxy += (x - mean_x) * (d.ln() - mean_y);
        sxx += (x - mean_x) * (x - mean_x);
    }
    if sxx == 0.0 {
        return Err(IntegrateError::ConvergenceStudy(
            "tolerance levels must differ".into(),
        ));
    }
    let slope = sxy / sxx;
    let order = (config.method.embedded_order() as f64 + 1.0) * slope;
    Ok(ConvergenceEstimate::Order(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::{initial_state, SeedOptions};

    fn reference_params(lambda: f64) -> Params {
        Params::new(lambda)
    }

    fn closed_form_c(r: f64) -> f64 {
        (1.0 + 0.75 * (r - 0.01)).powf(4.0 / 3.0)
    }

    fn decoupled_initial() -> FieldState {
        FieldState {
            r: 0.01,
            b: 1.0,
            bp: 0.0,
            c: 1.0,
            cp: 1.0,
            w: 0.0,
            wp: 0.0,
            phi: 0.0,
            phip: 0.0,
        }
    }

    #[test]
    fn vacuum_seed_stays_put() {
        let params = Params {
            a: 0.0,
            b: 0.0,
            ..reference_params(0.0)
        };
        let init = initial_state(&params, &SeedOptions::default()).unwrap();
        let cfg = IntegratorConfig {
            r_max: 10.0,
            ..IntegratorConfig::default()
        };
        let traj = integrate(&init, &params, &cfg).unwrap();
        assert_eq!(traj.terminal().reason, TerminalReason::ReachedRMax);
        assert_eq!(traj.terminal().r_end, 10.0);
        let y0 = init.components();
        let mut worst: f64 = 0.0;
        for s in traj.samples() {
            for (a, b) in s.components().iter().zip(y0.iter()) {
                worst = worst.max((a - b).abs());
            }
        }
        assert!(worst < 1e-10, "vacuum drifted by {worst}");
    }

    #[test]
    fn matches_the_closed_form_on_the_decoupled_c_equation() {
        for method in [Method::Verner65, Method::Dopri54] {
            let params = Params {
                a: 0.0,
                b: 0.0,
                ..reference_params(0.0)
            };
            let cfg = IntegratorConfig {
                method,
                r_max: 10.0,
                ..IntegratorConfig::default()
            };
            let traj = integrate(&decoupled_initial(), &params, &cfg).unwrap();
            assert_eq!(traj.terminal().reason, TerminalReason::ReachedRMax);
            let mut worst: f64 = 0.0;
            for s in traj.samples() {
                let exact = closed_form_c(s.r);
                worst = worst.max((s.c - exact).abs() / exact);
            }
            assert!(worst < 1e-8, "{method:?} deviates by {worst}");
        }
    }

    #[test]
    fn samples_are_on_the_grid_and_strictly_increasing() {
        let params = reference_params(0.001);
        let init = initial_state(&params, &SeedOptions::default()).unwrap();
        let cfg = IntegratorConfig {
            r_max: 2.0,
            ..IntegratorConfig::default()
        };
        let traj = integrate(&init, &params, &cfg).unwrap();
        assert_eq!(traj.first().r, params.r0);
        for w in traj.samples().windows(2) {
            assert!(w[1].r > w[0].r);
        }
        for (i, s) in traj.dense_samples().iter().enumerate() {
            let expected = params.r0 + i as f64 * cfg.dense_dr;
            assert!((s.r - expected).abs() < 1e-12);
            assert!(s.is_finite());
        }
        assert_eq!(traj.last().r, 2.0);
    }

    #[test]
    fn detects_the_horizon_and_brackets_it() {
        let params = reference_params(0.015);
        let init = initial_state(&params, &SeedOptions::default()).unwrap();
        let cfg = IntegratorConfig::default();
        let traj = integrate(&init, &params, &cfg).unwrap();
        assert_eq!(traj.terminal().reason, TerminalReason::Horizon);
        let r_h = traj.terminal().r_h.expect("horizon radius present");
        assert_eq!(traj.terminal().r_end, r_h);
        assert!(r_h > params.r0 && r_h < cfg.r_max);
        let threshold = cfg.horizon_epsilon * init.c;
        let last = traj.last();
        assert_eq!(last.r, r_h);
        assert!(last.c <= threshold);
        // the preceding grid sample is still above the threshold
        let prev = &traj.samples()[traj.len() - 2];
        assert!(prev.c > threshold);
    }

    #[test]
    fn runs_are_bit_for_bit_deterministic() {
        let params = reference_params(0.0025);
        let init = initial_state(&params, &SeedOptions::default()).unwrap();
        let cfg = IntegratorConfig {
            r_max: 5.0,
            ..IntegratorConfig::default()
        };
        let a = integrate(&init, &params, &cfg).unwrap();
        let b = integrate(&init, &params, &cfg).unwrap();
        assert_eq!(a.samples(), b.samples());
        assert_eq!(a.terminal(), b.terminal());
    }

    #[test]
    fn step_floor_terminates_an_unresolvable_run() {
        // a step floor far above what the oscillation needs
        let params = reference_params(0.0025);
        let init = initial_state(&params, &SeedOptions::default()).unwrap();
        let cfg = IntegratorConfig {
            h_min: 0.05,
            h_init: 0.06,
            ..IntegratorConfig::default()
        };
        let traj = integrate(&init, &params, &cfg).unwrap();
        assert_eq!(traj.terminal().reason, TerminalReason::StepUnderflow);
        assert!(traj.terminal().r_h.is_none());
    }

    #[test]
    fn blowup_guard_fires_on_growing_metric() {
        // strongly negative lambda grows C exponentially past the guard
        let params = reference_params(-1.0);
        let init = initial_state(&params, &SeedOptions::default()).unwrap();
        let cfg = IntegratorConfig::default();
        let traj = integrate(&init, &params, &cfg).unwrap();
        assert_eq!(traj.terminal().reason, TerminalReason::Blowup);
        assert!(traj.terminal().r_end < cfg.r_max);
        assert!(traj
            .last()
            .components()
            .iter()
            .any(|v| v.abs() >= cfg.blowup_limit));
    }

    #[test]
    fn rejects_broken_initial_states_and_configs() {
        let params = reference_params(0.0);
        let mut init = initial_state(&params, &SeedOptions::default()).unwrap();
        init.c = -1.0;
        assert!(matches!(
            integrate(&init, &params, &IntegratorConfig::default()),
            Err(IntegrateError::InitialState(_))
        ));

        let init = initial_state(&params, &SeedOptions::default()).unwrap();
        let cfg = IntegratorConfig {
            h_min: 1.0,
            ..IntegratorConfig::default()
        };
        assert!(matches!(
            integrate(&init, &params, &cfg),
            Err(IntegrateError::InvalidConfig(_))
        ));

        let cfg = IntegratorConfig {
            max_steps: 10,
            ..IntegratorConfig::default()
        };
        assert!(matches!(
            integrate(&init, &params, &cfg),
            Err(IntegrateError::StepBudget { .. })
        ));
    }

    #[test]
    fn residual_shrinks_quadratically_in_the_sample_spacing() {
        let params = reference_params(0.001);
        let init = initial_state(&params, &SeedOptions::default()).unwrap();
        let mut residuals = Vec::new();
        // the residual maximum sits at the first interior grid point r0 + dr
        // where the fields still carry the 1/r core scales, so the spacing
        // must stay well below r0 for the O(dr²) regime to show cleanly
        for dr in [2e-4, 1e-4] {
            let cfg = IntegratorConfig {
                r_max: 3.0,
                dense_dr: dr,
                ..IntegratorConfig::default()
            };
            let traj = integrate(&init, &params, &cfg).unwrap();
            residuals.push(crate::model::residual(traj.dense_samples(), &params).unwrap());
        }
        let factor = residuals[0] / residuals[1];
        assert!(
            factor >= 3.5,
            "expected >= 3.5x shrink, got {factor} ({residuals:?})"
        );
    }

    #[test]
    fn crosscheck_agrees_on_the_closed_form() {
        let params = Params {
            a: 0.0,
            b: 0.0,
            ..reference_params(0.0)
        };
        let cfg = IntegratorConfig {
            r_max: 10.0,
            ..IntegratorConfig::default()
        };
        let check = crosscheck(&decoupled_initial(), &params, &cfg).unwrap();
        assert!(check.max_discrepancy < 1e-8, "{}", check.max_discrepancy);
        assert!(check.is_reliable(DEFAULT_CROSSCHECK_THRESHOLD));
        for traj in [&check.primary, &check.alternate] {
            let mut worst: f64 = 0.0;
            for s in traj.samples() {
                let exact = closed_form_c(s.r);
                worst = worst.max((s.c - exact).abs() / exact);
            }
            assert!(worst < 1e-8);
        }
    }

    #[test]
    fn crosscheck_is_exact_on_the_vacuum_fixed_point() {
        let params = Params {
            a: 0.0,
            b: 0.0,
            ..reference_params(0.0)
        };
        let init = initial_state(&params, &SeedOptions::default()).unwrap();
        let cfg = IntegratorConfig {
            r_max: 5.0,
            ..IntegratorConfig::default()
        };
        let check = crosscheck(&init, &params, &cfg).unwrap();
        assert_eq!(check.max_discrepancy, 0.0);
    }

    #[test]
    fn self_convergence_reports_degenerate_on_the_fixed_point() {
        let params = Params {
            a: 0.0,
            b: 0.0,
            ..reference_params(0.0)
        };
        let init = initial_state(&params, &SeedOptions::default()).unwrap();
        let cfg = IntegratorConfig {
            r_max: 5.0,
            ..IntegratorConfig::default()
        };
        let est = self_convergence(&init, &params, &cfg, &[1e-6, 1e-8, 1e-10]).unwrap();
        assert_eq!(est, ConvergenceEstimate::Degenerate);
    }

    #[test]
    fn self_convergence_recovers_the_nominal_order() {
        let params = Params {
            a: 0.0,
            b: 0.0,
            ..reference_params(0.0)
        };
        let cfg = IntegratorConfig {
            r_max: 10.0,
            ..IntegratorConfig::default()
        };
        let est =
            self_convergence(&decoupled_initial(), &params, &cfg, &[1e-7, 1e-9, 1e-11]).unwrap();
        let order = est.order().expect("non-degenerate");
        let nominal = cfg.method.nominal_order() as f64;
        assert!(
            (order - nominal).abs() <= 0.5,
            "observed {order} vs nominal {nominal}"
        );
    }

    #[test]
    fn self_convergence_is_finite_on_the_oscillatory_seed() {
        let params = reference_params(-0.01);
        let init = initial_state(&params, &SeedOptions::default()).unwrap();
        let cfg = IntegratorConfig {
            r_max: 5.0,
            ..IntegratorConfig::default()
        };
        let est = self_convergence(&init, &params, &cfg, &[1e-6, 1e-8, 1e-10]).unwrap();
        let order = est.order().expect("non-degenerate");
        assert!(order >= 4.0, "observed order {order}");
    }

    #[test]
    fn self_convergence_rejects_bad_ladders() {
        let params = reference_params(0.0);
        let init = initial_state(&params, &SeedOptions::default()).unwrap();
        let cfg = IntegratorConfig::default();
        assert!(matches!(
            self_convergence(&init, &params, &cfg, &[1e-6, 1e-8]),
            Err(IntegrateError::ConvergenceStudy(_))
        ));
        assert!(matches!(
            self_convergence(&init, &params, &cfg, &[1e-6, 1e-8, 1e-9]),
            Err(IntegrateError::ConvergenceStudy(_))
        ));
    }
}
