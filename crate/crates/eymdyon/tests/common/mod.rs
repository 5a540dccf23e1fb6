//! Shared test oracles, independent of the library's integration path.
#![allow(dead_code)] // each test target compiles its own subset

use eymdyon::{FieldState, Params};

/// Closed-form solution of the decoupled metric equation with
/// C(r0) = C'(r0) = 1 at r0 = 0.01.
pub fn closed_form_c(r: f64) -> f64 {
    (1.0 + 0.75 * (r - 0.01)).powf(4.0 / 3.0)
}

/// Independent transcription of the field equations for the oracle
/// integrator below; deliberately not routed through the library.
fn oracle_rhs(r: f64, y: &[f64; 8], lambda: f64, kappa: f64) -> [f64; 8] {
    let [b, bp, c, cp, w, wp, phi, phip] = *y;
    let b2r2 = b * b * r * r;
    let cpp = cp * cp / (4.0 * c)
        - kappa / b2r2 * (phi * phi * w * w - b2r2 * phip * phip - c * wp * wp)
        - lambda * c;
    let bpp = b * cp * cp / (4.0 * c * c) - 2.0 / r * bp
        + kappa / (b * c * r * r) * (phi * phi * w * w + b2r2 * phip * phip - 2.0 * c * wp * wp);
    let phipp = phi * w * w / b2r2 - phip * (1.0 / r + bp / b);
    let wpp = -phi * phi * w / c + wp * (bp / b + 1.0 / r - cp / c);
    [bp, bpp, cp, cpp, wp, wpp, phip, phipp]
}

pub struct OracleOutcome {
    pub nodes: usize,
    pub r_end: f64,
    pub r_h: Option<f64>,
    pub end: [f64; 8],
}

/// Classical fixed-step 4th-order integration with step-level node counting
/// and threshold detection. Used as the independent cross-validation of the
/// adaptive runs.
pub fn rk4_oracle(
    init: &FieldState,
    params: &Params,
    h: f64,
    r_max: f64,
    horizon_epsilon: f64,
    blowup_limit: f64,
) -> OracleOutcome {
    let mut r = init.r;
    let mut y = init.components();
    let threshold = horizon_epsilon * init.c;
    let lambda = params.lambda;
    let kappa = params.kappa;
    let w_floor = 1e-10;

    let mut nodes = 0usize;
    let mut w_kept = if y[4].abs() > w_floor {
        Some(y[4])
    } else {
        None
    };

    loop {
        let hh = h.min(r_max - r);
        if hh <= 0.0 {
            return OracleOutcome {
                nodes,
                r_end: r,
                r_h: None,
                end: y,
            };
        }
        let k1 = oracle_rhs(r, &y, lambda, kappa);
        let mut y2 = y;
        for i in 0..8 {
            y2[i] += 0.5 * hh * k1[i];
        }
        let k2 = oracle_rhs(r + 0.5 * hh, &y2, lambda, kappa);
        let mut y3 = y;
        for i in 0..8 {
            y3[i] += 0.5 * hh * k2[i];
        }
        let k3 = oracle_rhs(r + 0.5 * hh, &y3, lambda, kappa);
        let mut y4 = y;
        for i in 0..8 {
            y4[i] += hh * k3[i];
        }
        let k4 = oracle_rhs(r + hh, &y4, lambda, kappa);
        let c_prev = y[2];
        for i in 0..8 {
            y[i] += hh / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        r += hh;

        if y[4].abs() > w_floor {
            if let Some(prev) = w_kept {
                if prev * y[4] < 0.0 {
                    nodes += 1;
                }
            }
            w_kept = Some(y[4]);
        }
        if c_prev > threshold && y[2] <= threshold {
            // linear refinement between the two steps
            let frac = (c_prev - threshold) / (c_prev - y[2]);
            let r_h = r - hh + frac * hh;
            return OracleOutcome {
                nodes,
                r_end: r_h,
                r_h: Some(r_h),
                end: y,
            };
        }
        if y.iter().any(|v| v.abs() >= blowup_limit) || y.iter().any(|v| !v.is_finite()) {
            return OracleOutcome {
                nodes,
                r_end: r,
                r_h: None,
                end: y,
            };
        }
    }
}

/// Componentwise discrepancy relative to the larger magnitude floored at
/// one; the same measure the library uses for dual-method comparisons.
pub fn floored_rel(a: &[f64; 8], b: &[f64; 8]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..8 {
        let scale = a[i].abs().max(b[i].abs()).max(1.0);
        worst = worst.max((a[i] - b[i]).abs() / scale);
    }
    worst
}
