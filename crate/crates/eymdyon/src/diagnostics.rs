//! Physical diagnostics over states and trajectories: energy density, node
//! counting of the magnetic amplitude, the exact rescaling map, and a coarse
//! solution classification.

use crate::integrator::{TerminalReason, Trajectory};
use crate::model::{FieldState, ModelError, Params, MAGNITUDE_FLOOR};
use serde::Serialize;
use thiserror::Error;

/// Default floor below which `|W|` samples are ignored by the node counter,
/// so numerical zero-grazing is not counted as a crossing.
pub const DEFAULT_W_FLOOR: f64 = 1e-10;

/// Zero crossings of `W` over a trajectory's interior.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeReport {
    /// Number of strict sign changes.
    pub count: usize,
    /// Crossing radii, linearly interpolated between the bracketing samples,
    /// strictly increasing.
    pub radii: Vec<f64>,
}

/// Coarse shape of a completed run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// Ran out to the range end with at most one node and monotone
    /// `W`, `Phi` tails: the cosmic-string-like profile.
    StringLike,
    /// Two or more nodes of `W`.
    Oscillatory,
    /// Ended on the horizon threshold.
    HorizonTerminated,
    Indeterminate,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::StringLike => "string_like",
            Classification::Oscillatory => "oscillatory",
            Classification::HorizonTerminated => "horizon_terminated",
            Classification::Indeterminate => "indeterminate",
        })
    }
}

/// Thresholds behind [`classify`]; the defaults operationalize "behaves like
/// a string solution" as machine-checkable conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    /// Maximum node count still considered string-like.
    pub max_string_nodes: usize,
    /// Fraction of the radial range, measured from the end, over which the
    /// string-like tails must be monotone.
    pub tail_fraction: f64,
    /// Relative slack when testing tail monotonicity.
    pub monotone_slack: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            max_string_nodes: 1,
            tail_fraction: 0.2,
            monotone_slack: 1e-12,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum DiagnosticsError {
    #[error("scale factors must be positive, got gamma = {gamma}, beta = {beta}")]
    NonPositiveScale { gamma: f64, beta: f64 },
}

/// The `T_tt` energy density
/// `(B²r²(Φ')² + Φ²W² + C(W')²) / (2g²B²r²)`.
///
/// Non-negative wherever `C ≥ 0`, and finite at the seed point: as the core
/// radius shrinks it approaches `a² + 2b²·C(r0)` for `g = 1`.
pub fn energy_density(state: &FieldState, params: &Params) -> Result<f64, ModelError> {
    if !(state.r.abs() > MAGNITUDE_FLOOR) {
        return Err(ModelError::OutsideChart {
            name: "r",
            value: state.r,
            floor: MAGNITUDE_FLOOR,
            r: state.r,
        });
    }
    if state.b.abs() < MAGNITUDE_FLOOR {
        return Err(ModelError::OutsideChart {
            name: "B",
            value: state.b,
            floor: MAGNITUDE_FLOOR,
            r: state.r,
        });
    }
    let b2r2 = state.b * state.b * state.r * state.r;
    let num = b2r2 * state.phip * state.phip
        + state.phi * state.phi * state.w * state.w
        + state.c * state.wp * state.wp;
    Ok(num / (2.0 * params.g * params.g * b2r2))
}

/// Counts strict sign changes of `W` between consecutive samples, ignoring
/// samples with `|W| <= w_floor`; each crossing radius is refined by linear
/// interpolation between the bracketing kept samples.
pub fn count_nodes(traj: &Trajectory, w_floor: f64) -> NodeReport {
    let mut radii = Vec::new();
    let mut prev: Option<&FieldState> = None;
    for s in traj.samples() {
        if s.w.abs() <= w_floor {
            continue;
        }
        if let Some(p) = prev {
            if p.w * s.w < 0.0 {
                let t = p.w / (p.w - s.w);
                radii.push(p.r + t * (s.r - p.r));
            }
        }
        prev = Some(s);
    }
    NodeReport {
        count: radii.len(),
        radii,
    }
}

/// Applies the exact symmetry of the field equations to a recorded
/// trajectory: `C -> γC`, `Φ -> √γ·Φ`, `B -> βB`, `W -> βW` (derivatives
/// alike). Radii and the terminal record are untouched.
pub fn scale_transform(
    traj: &Trajectory,
    gamma: f64,
    beta: f64,
) -> Result<Trajectory, DiagnosticsError> {
    if !(gamma > 0.0) || !(beta > 0.0) {
        return Err(DiagnosticsError::NonPositiveScale { gamma, beta });
    }
    let sg = gamma.sqrt();
    let samples = traj
        .samples()
        .iter()
        .map(|s| FieldState {
            r: s.r,
            b: beta * s.b,
            bp: beta * s.bp,
            c: gamma * s.c,
            cp: gamma * s.cp,
            w: beta * s.w,
            wp: beta * s.wp,
            phi: sg * s.phi,
            phip: sg * s.phip,
        })
        .collect();
    Ok(Trajectory::from_parts(
        samples,
        *traj.terminal(),
        traj.accepted_steps(),
    ))
}

/// Classifies a completed run with the default thresholds.
pub fn classify(traj: &Trajectory, nodes: &NodeReport) -> Classification {
    classify_with(traj, nodes, &ClassifyOptions::default())
}

/// Classifies a completed run.
pub fn classify_with(
    traj: &Trajectory,
    nodes: &NodeReport,
    opts: &ClassifyOptions,
) -> Classification {
    if traj.terminal().reason == TerminalReason::Horizon {
        return Classification::HorizonTerminated;
    }
    if nodes.count > opts.max_string_nodes.max(1) {
        return Classification::Oscillatory;
    }
    if traj.terminal().reason == TerminalReason::ReachedRMax && nodes.count <= opts.max_string_nodes
    {
        let r0 = traj.first().r;
        let r_end = traj.terminal().r_end;
        let tail_start = r_end - opts.tail_fraction * (r_end - r0);
        let tail: Vec<&FieldState> = traj
            .samples()
            .iter()
            .filter(|s| s.r >= tail_start)
            .collect();
        let w_mono = is_monotone(tail.iter().map(|s| s.w), opts.monotone_slack);
        let phi_mono = is_monotone(tail.iter().map(|s| s.phi), opts.monotone_slack);
        if w_mono && phi_mono {
            return Classification::StringLike;
        }
    }
    Classification::Indeterminate
}

/// Non-strict monotonicity (either direction) with a relative slack against
/// rounding ripple.
fn is_monotone(values: impl Iterator<Item = f64> + Clone, rel_slack: f64) -> bool {
    let scale = values
        .clone()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let slack = rel_slack * scale;
    let mut up = false;
    let mut down = false;
    let mut prev: Option<f64> = None;
    for v in values {
        if let Some(p) = prev {
            if v > p + slack {
                up = true;
            }
            if v < p - slack {
                down = true;
            }
        }
        prev = Some(v);
    }
    !(up && down)
}

/// Maximum [`crate::model::residual`] over the uniform dense prefix of a
/// trajectory; `None` when there are too few samples.
pub fn trajectory_residual(traj: &Trajectory, params: &Params) -> Option<f64> {
    let window = traj.dense_samples();
    if window.len() < 3 {
        return None;
    }
    crate::model::residual(window, params).ok()
}
