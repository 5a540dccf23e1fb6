//! Built-in reliability battery: the checks a fresh build must pass before
//! its numbers are worth reading.
//!
//! Four checks: the decoupled metric equation against its closed form, the
//! exact rescaling symmetry end to end, the observed convergence order, and
//! the dual-method cross-check. A test-fixture flag can corrupt the
//! right-hand side to prove the battery actually detects broken dynamics.

use crate::integrator::{
    crosscheck, integrate, integrate_with, self_convergence, trajectory_discrepancy,
    ConvergenceEstimate, IntegratorConfig,
};
use crate::model::{rhs, Derivatives, FieldState, ModelError, Params};
use crate::seed::{initial_state, SeedOptions};
use serde::Serialize;
use std::time::Instant;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// The measured figure of merit, compared against `threshold`.
    pub measured: Option<f64>,
    pub threshold: f64,
    pub detail: String,
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
    pub all_passed: bool,
}

/// Runs the battery. `corrupt_rhs` injects a small spurious term into the
/// metric equation (test fixture): the closed-form check must then fail.
pub fn run_battery(corrupt_rhs: bool) -> ValidationReport {
    let checks = vec![
        check_closed_form(corrupt_rhs),
        check_scale_invariance(),
        check_self_convergence(),
        check_crosscheck(),
    ];
    let all_passed = checks.iter().all(|c| c.passed);
    ValidationReport { checks, all_passed }
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

fn vacuum_params() -> Params {
    Params {
        a: 0.0,
        b: 0.0,
        ..Params::new(0.0)
    }
}

/// With W = Φ = 0 and Λ = 0 the metric equation decouples and
/// C(r) = (1 + 0.75 (r − r0))^{4/3} solves it with C(r0) = C'(r0) = 1.
fn check_closed_form(corrupt: bool) -> CheckResult {
    let start = Instant::now();
    let threshold = 1e-8;
    let params = vacuum_params();
    let cfg = IntegratorConfig {
        r_max: 10.0,
        ..IntegratorConfig::default()
    };
    let system = move |state: &FieldState, params: &Params| -> Result<Derivatives, ModelError> {
        let mut d = rhs(state, params)?;
        if corrupt {
            d.dcp += 1e-3 * state.c;
        }
        Ok(d)
    };
    let result = integrate_with(system, &decoupled_initial(), &params, &cfg);
    let (passed, measured, detail) = match result {
        Ok(traj) => {
            let mut worst: f64 = 0.0;
            for s in traj.samples() {
                let exact = (1.0 + 0.75 * (s.r - 0.01)).powf(4.0 / 3.0);
                worst = worst.max((s.c - exact).abs() / exact);
            }
            (
                worst <= threshold,
                Some(worst),
                format!("max relative C deviation over [0.01, 10] = {worst:.3e}"),
            )
        }
        Err(e) => (false, None, format!("integration failed: {e}")),
    };
    CheckResult {
        name: "closed_form_metric",
        passed,
        measured,
        threshold,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

/// Integrating the (γ, β)-rescaled seed must reproduce the rescaled
/// trajectory.
fn check_scale_invariance() -> CheckResult {
    let start = Instant::now();
    let threshold = 1e-8;
    let params = Params::new(0.001);
    let cfg = IntegratorConfig {
        r_max: 20.0,
        ..IntegratorConfig::default()
    };
    let run = || -> Result<f64, String> {
        let init = initial_state(&params, &SeedOptions::default()).map_err(|e| e.to_string())?;
        let base = integrate(&init, &params, &cfg).map_err(|e| e.to_string())?;
        let mut worst: f64 = 0.0;
        for (gamma, beta) in [(4.0, 2.0), (0.25, 3.0)] {
            let scaled_init = scale_state(&init, gamma, beta);
            let scaled_run = integrate(&scaled_init, &params, &cfg).map_err(|e| e.to_string())?;
            let reference = crate::diagnostics::scale_transform(&base, gamma, beta)
                .map_err(|e| e.to_string())?;
            worst = worst.max(trajectory_discrepancy(&scaled_run, &reference, 1.0));
        }
        Ok(worst)
    };
    let (passed, measured, detail) = match run() {
        Ok(worst) => (
            worst <= threshold,
            Some(worst),
            format!("max deviation from exactly rescaled trajectory = {worst:.3e}"),
        ),
        Err(e) => (false, None, e),
    };
    CheckResult {
        name: "scale_invariance",
        passed,
        measured,
        threshold,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

fn check_self_convergence() -> CheckResult {
    let start = Instant::now();
    let threshold = 0.5;
    let params = vacuum_params();
    let cfg = IntegratorConfig {
        r_max: 10.0,
        ..IntegratorConfig::default()
    };
    let nominal = cfg.method.nominal_order() as f64;
    let est = self_convergence(&decoupled_initial(), &params, &cfg, &[1e-7, 1e-9, 1e-11]);
    let (passed, measured, detail) = match est {
        Ok(ConvergenceEstimate::Order(p)) => (
            (p - nominal).abs() <= threshold,
            Some((p - nominal).abs()),
            format!("observed order {p:.2} vs nominal {nominal:.0}"),
        ),
        Ok(ConvergenceEstimate::Degenerate) => {
            (false, None, "degenerate: no differences to measure".into())
        }
        Err(e) => (false, None, format!("study failed: {e}")),
    };
    CheckResult {
        name: "self_convergence",
        passed,
        measured,
        threshold,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

fn check_crosscheck() -> CheckResult {
    let start = Instant::now();
    let threshold = 1e-6;
    let params = Params::new(0.0025);
    let run = || -> Result<f64, String> {
        let init = initial_state(&params, &SeedOptions::default()).map_err(|e| e.to_string())?;
        let chk =
            crosscheck(&init, &params, &IntegratorConfig::default()).map_err(|e| e.to_string())?;
        Ok(chk.discrepancy_over(0.99))
    };
    let (passed, measured, detail) = match run() {
        Ok(d) => (
            d <= threshold,
            Some(d),
            format!("dual-method disagreement over 99% of range = {d:.3e}"),
        ),
        Err(e) => (false, None, e),
    };
    CheckResult {
        name: "dual_method_crosscheck",
        passed,
        measured,
        threshold,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

fn scale_state(s: &FieldState, gamma: f64, beta: f64) -> FieldState {
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_build_passes_the_battery() {
        let report = run_battery(false);
        for c in &report.checks {
            assert!(c.passed, "{} failed: {}", c.name, c.detail);
        }
        assert!(report.all_passed);
    }

    #[test]
    fn corrupted_rhs_is_detected() {
        let report = run_battery(true);
        assert!(!report.all_passed);
        let closed_form = &report.checks[0];
        assert_eq!(closed_form.name, "closed_form_metric");
        assert!(!closed_form.passed, "corruption went unnoticed");
    }
}
