//! Field equations of the cylindrically symmetric SU(2) dyon system.
//!
//! The metric carries two radial functions `B` (angular) and `C`
//! (temporal/axial); the Yang-Mills sector reduces to a magnetic amplitude
//! `W(r)` and an electric amplitude `Phi(r)`. The four coupled second-order
//! equations are evaluated here in explicit first-order form, together with
//! a finite-difference residual that checks a sampled trajectory against
//! those same equations.

use serde::Serialize;
use thiserror::Error;

/// Magnitude below which `r`, `B` or `C` is treated as a chart breakdown
/// rather than fed into a division.
pub const MAGNITUDE_FLOOR: f64 = 1e-30;

/// Relative non-uniformity tolerated between consecutive sample spacings
/// in [`residual`].
pub const SPACING_TOLERANCE: f64 = 1e-6;

/// Physical constants of a run.
///
/// `kappa` is the combined coupling 4πG/g²; it is the only combination the
/// field equations see. `g` enters the energy density normalization alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Params {
    /// Cosmological constant (dimensionless in code units).
    pub lambda: f64,
    /// Gravitational coupling 4πG/g².
    pub kappa: f64,
    /// Gauge coupling; normalizes the energy density only.
    pub g: f64,
    /// Electric shooting parameter: Phi ~ a·r near the core.
    pub a: f64,
    /// Magnetic shooting parameter: W ~ 1 − b·r² near the core.
    pub b: f64,
    /// Core radius where series initial data are imposed.
    pub r0: f64,
}

impl Params {
    /// The reference dyon configuration (a = 1, b = 0.35, r0 = 0.01, κ = 1)
    /// at the given cosmological constant.
    pub fn new(lambda: f64) -> Self {
        Params {
            lambda,
            kappa: 1.0,
            g: 1.0,
            a: 1.0,
            b: 0.35,
            r0: 0.01,
        }
    }

    /// Checks the structural invariants (r0 > 0, kappa > 0, g != 0).
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.r0 > 0.0) {
            return Err(ModelError::BadParameter {
                name: "r0",
                value: self.r0,
                requirement: "> 0",
            });
        }
        if !(self.kappa > 0.0) {
            return Err(ModelError::BadParameter {
                name: "kappa",
                value: self.kappa,
                requirement: "> 0",
            });
        }
        if self.g == 0.0 || !self.g.is_finite() {
            return Err(ModelError::BadParameter {
                name: "g",
                value: self.g,
                requirement: "!= 0",
            });
        }
        Ok(())
    }
}

impl Default for Params {
    fn default() -> Self {
        Params::new(0.0)
    }
}

/// One point of the 9-component phase space: the radius plus the four field
/// amplitudes and their first radial derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldState {
    pub r: f64,
    pub b: f64,
    pub bp: f64,
    pub c: f64,
    pub cp: f64,
    pub w: f64,
    pub wp: f64,
    pub phi: f64,
    pub phip: f64,
}

impl FieldState {
    /// Field components (everything but `r`) in integration order.
    pub fn components(&self) -> [f64; 8] {
        [
            self.b, self.bp, self.c, self.cp, self.w, self.wp, self.phi, self.phip,
        ]
    }

    /// Rebuilds a state from the integration-order component vector.
    pub fn from_components(r: f64, y: &[f64; 8]) -> Self {
        FieldState {
            r,
            b: y[0],
            bp: y[1],
            c: y[2],
            cp: y[3],
            w: y[4],
            wp: y[5],
            phi: y[6],
            phip: y[7],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.r.is_finite() && self.components().iter().all(|v| v.is_finite())
    }
}

/// First-order reduction of the field equations at one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    pub db: f64,
    pub dbp: f64,
    pub dc: f64,
    pub dcp: f64,
    pub dw: f64,
    pub dwp: f64,
    pub dphi: f64,
    pub dphip: f64,
}

impl Derivatives {
    pub fn components(&self) -> [f64; 8] {
        [
            self.db, self.dbp, self.dc, self.dcp, self.dw, self.dwp, self.dphi, self.dphip,
        ]
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    /// `r`, `B` or `C` fell below the magnitude floor where the equations divide by it.
    #[error("field equations evaluated outside the valid chart: |{name}| = {value:e} < {floor:e} at r = {r}")]
    OutsideChart {
        name: &'static str,
        value: f64,
        floor: f64,
        r: f64,
    },
    #[error("invalid parameter {name} = {value}: must be {requirement}")]
    BadParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("residual window needs at least 3 samples, got {0}")]
    WindowTooShort(usize),
    #[error("residual window is not uniformly spaced: spacing {found:e} vs {expected:e} at index {index}")]
    NonUniformWindow {
        index: usize,
        found: f64,
        expected: f64,
    },
}

/// Right-hand side of the first-order system with the default chart floor.
pub fn rhs(state: &FieldState, params: &Params) -> Result<Derivatives, ModelError> {
    rhs_with_floor(state, params, MAGNITUDE_FLOOR)
}

/// Right-hand side of the first-order system.
///
/// The second-derivative components are
///
/// ```text
/// C'' = (C')²/(4C) − κ/(B²r²)·[Φ²W² − B²r²(Φ')² − C(W')²] − ΛC
/// B'' = B(C')²/(4C²) − (2/r)B' + κ/(BCr²)·[Φ²W² + B²r²(Φ')² − 2C(W')²]
/// Φ'' = ΦW²/(B²r²) − Φ'(1/r + B'/B)
/// W'' = −Φ²W/C + W'(B'/B + 1/r − C'/C)
/// ```
///
/// where the Φ and W lines are the expanded forms of the self-adjoint
/// equations (rBΦ')' = ΦW²/(Br) and (CW'/(Br))' = −Φ²W/(Br).
pub fn rhs_with_floor(
    state: &FieldState,
    params: &Params,
    floor: f64,
) -> Result<Derivatives, ModelError> {
    let FieldState {
        r,
        b,
        bp,
        c,
        cp,
        w,
        wp,
        phi,
        phip,
    } = *state;

    if !(r > floor) {
        return Err(ModelError::OutsideChart {
            name: "r",
            value: r,
            floor,
            r,
        });
    }
    if b.abs() < floor {
        return Err(ModelError::OutsideChart {
            name: "B",
            value: b,
            floor,
            r,
        });
    }
    if c.abs() < floor {
        return Err(ModelError::OutsideChart {
            name: "C",
            value: c,
            floor,
            r,
        });
    }

    let kappa = params.kappa;
    let b2r2 = b * b * r * r;
    let phi2w2 = phi * phi * w * w;
    let phip2 = phip * phip;
    let wp2 = wp * wp;

    let dcp =
        cp * cp / (4.0 * c) - kappa / b2r2 * (phi2w2 - b2r2 * phip2 - c * wp2) - params.lambda * c;
    let dbp = b * cp * cp / (4.0 * c * c) - 2.0 / r * bp
        + kappa / (b * c * r * r) * (phi2w2 + b2r2 * phip2 - 2.0 * c * wp2);
    let dphip = phi * w * w / b2r2 - phip * (1.0 / r + bp / b);
    let dwp = -phi * phi * w / c + wp * (bp / b + 1.0 / r - cp / c);

    Ok(Derivatives {
        db: bp,
        dbp,
        dc: cp,
        dcp,
        dw: wp,
        dwp,
        dphi: phip,
        dphip,
    })
}

/// Maximum deviation, over the window's interior points and all four
/// equations, between the central-finite-difference second derivative of the
/// sampled fields and the second derivative the field equations demand.
///
/// Converges as O(h²) on a true solution, so halving the sample spacing of a
/// converged trajectory should shrink the result by about 4.
pub fn residual(window: &[FieldState], params: &Params) -> Result<f64, ModelError> {
    if window.len() < 3 {
        return Err(ModelError::WindowTooShort(window.len()));
    }
    let h = window[1].r - window[0].r;
    for i in 1..window.len() {
        let dr = window[i].r - window[i - 1].r;
        if (dr - h).abs() > SPACING_TOLERANCE * h.abs() {
            return Err(ModelError::NonUniformWindow {
                index: i,
                found: dr,
                expected: h,
            });
        }
    }

    let h2 = h * h;
    let mut worst: f64 = 0.0;
    for i in 1..window.len() - 1 {
        let d = rhs(&window[i], params)?;
        let model = [d.dbp, d.dcp, d.dwp, d.dphip];
        let prev = window[i - 1].components();
        let here = window[i].components();
        let next = window[i + 1].components();
        // second differences of B, C, W, Phi (component slots 0, 2, 4, 6)
        for (eq, slot) in [0usize, 2, 4, 6].iter().enumerate() {
            let fd = (next[*slot] - 2.0 * here[*slot] + prev[*slot]) / h2;
            worst = worst.max((fd - model[eq]).abs());
        }
    }
    Ok(worst)
}
