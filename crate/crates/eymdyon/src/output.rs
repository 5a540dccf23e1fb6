//! Table and plot writers: CSV for bulk samples, JSON for structured
//! summaries, and dependency-free SVG line plots.
//!
//! Numbers are written in Rust's shortest round-trip representation, so
//! re-parsing a table reproduces the in-memory values exactly and identical
//! inputs produce byte-identical files.

use crate::diagnostics::{Classification, NodeReport};
use crate::integrator::{Method, TerminalRecord, Trajectory};
use crate::model::Params;
use crate::seed::SeedOptions;
use crate::sweep::SweepRow;
use serde::Serialize;
use std::io::{self, Write};
use std::path::Path;

/// Machine-readable summary of one run, written as `summary.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub params: Params,
    pub seed: SeedOptions,
    pub method: Method,
    pub terminal: TerminalRecord,
    pub nodes: NodeReport,
    pub classification: Classification,
    /// Maximum field-equation residual over the dense samples.
    pub residual_norm: Option<f64>,
    /// The closed-form core constant diagnostic for these (a, b).
    pub core_c_constant: Option<f64>,
    pub samples: usize,
    pub accepted_steps: usize,
}

/// `trajectory.csv`: one row per sample, with the energy density appended.
pub fn write_trajectory_csv(path: &Path, traj: &Trajectory, params: &Params) -> io::Result<()> {
    let mut out = io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "r,B,Bp,C,Cp,W,Wp,Phi,Phip,T_tt")?;
    for s in traj.samples() {
        let ttt = crate::diagnostics::energy_density(s, params).unwrap_or(f64::NAN);
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            s.r, s.b, s.bp, s.c, s.cp, s.w, s.wp, s.phi, s.phip, ttt
        )?;
    }
    out.flush()
}

/// `sweep.csv`: one row per grid point; absent horizon radii are written as
/// the empty string.
pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> io::Result<()> {
    let mut out = io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(
        out,
        "lambda,r_h,node_count,terminal_reason,classification,wall_time_ms"
    )?;
    for row in rows {
        let rh = row.r_h.map(|v| v.to_string()).unwrap_or_default();
        let reason = row
            .terminal_reason
            .map(|r| r.to_string())
            .unwrap_or_else(|| "error".to_string());
        writeln!(
            out,
            "{},{},{},{},{},{}",
            row.lambda,
            rh,
            row.node_count,
            reason,
            row.classification,
            row.wall_time.as_millis()
        )?;
    }
    out.flush()
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
    std::fs::write(path, text + "\n")
}

// ------------------------------------------------------------------ SVG

const PANEL_W: f64 = 560.0;
const PANEL_H: f64 = 380.0;
const MARGIN: f64 = 60.0;

struct Panel<'a> {
    title: &'a str,
    points: Vec<(f64, f64)>,
}

/// `profile.svg`: the four field profiles B, C, W, Φ against radius, one
/// panel each.
pub fn write_profile_svg(path: &Path, traj: &Trajectory) -> io::Result<()> {
    let pick = |f: fn(&crate::model::FieldState) -> f64| -> Vec<(f64, f64)> {
        decimate(traj.samples().iter().map(|s| (s.r, f(s))).collect())
    };
    let panels = [
        Panel {
            title: "B(r)",
            points: pick(|s| s.b),
        },
        Panel {
            title: "C(r)",
            points: pick(|s| s.c),
        },
        Panel {
            title: "W(r)",
            points: pick(|s| s.w),
        },
        Panel {
            title: "Phi(r)",
            points: pick(|s| s.phi),
        },
    ];
    let width = 2.0 * (PANEL_W + MARGIN) + MARGIN;
    let height = 2.0 * (PANEL_H + MARGIN) + MARGIN;
    let mut svg = svg_header(width, height);
    for (i, panel) in panels.iter().enumerate() {
        let x0 = MARGIN + (i % 2) as f64 * (PANEL_W + MARGIN);
        let y0 = MARGIN + (i / 2) as f64 * (PANEL_H + MARGIN);
        draw_panel(&mut svg, panel, x0, y0);
    }
    svg.push_str("</svg>\n");
    std::fs::write(path, svg)
}

/// `rh_curve.svg`: horizon radius against the cosmological constant. The
/// line breaks where the lambda spacing jumps (horizon-free windows between
/// grid points), so dissolution gaps stay visible; every point is also
/// marked so isolated horizons show up.
pub fn write_rh_curve_svg(path: &Path, curve: &[(f64, f64)]) -> io::Result<()> {
    let width = PANEL_W + 2.0 * MARGIN;
    let height = PANEL_H + 2.0 * MARGIN;
    let mut svg = svg_header(width, height);
    let panel = Panel {
        title: "r_h vs lambda",
        points: curve.to_vec(),
    };
    draw_frame(&mut svg, &panel, MARGIN, MARGIN);
    if let Some(((xmin, xmax), (ymin, ymax))) = bounds(&panel.points) {
        let sx = PANEL_W / (xmax - xmin).max(f64::MIN_POSITIVE);
        let sy = PANEL_H / (ymax - ymin).max(f64::MIN_POSITIVE);
        let to_px = |x: f64, y: f64| (MARGIN + (x - xmin) * sx, MARGIN + PANEL_H - (y - ymin) * sy);
        // typical grid spacing; gaps well beyond it indicate horizon-free
        // windows and break the line
        let mut gaps: Vec<f64> = curve.windows(2).map(|w| w[1].0 - w[0].0).collect();
        gaps.sort_by(|a, b| a.total_cmp(b));
        let typical_gap = gaps.get(gaps.len() / 2).copied().unwrap_or(f64::INFINITY);
        let mut segment: Vec<(f64, f64)> = Vec::new();
        let flush = |svg: &mut String, seg: &mut Vec<(f64, f64)>| {
            if seg.len() >= 2 {
                let coords: Vec<String> =
                    seg.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                svg.push_str(&format!(
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f77b4\" \
                     stroke-width=\"1.5\"/>\n",
                    coords.join(" ")
                ));
            }
            seg.clear();
        };
        for (i, (x, y)) in curve.iter().enumerate() {
            if i > 0 && x - curve[i - 1].0 > 1.5 * typical_gap {
                flush(&mut svg, &mut segment);
            }
            segment.push(to_px(*x, *y));
        }
        flush(&mut svg, &mut segment);
        for (x, y) in curve {
            let (px, py) = to_px(*x, *y);
            svg.push_str(&format!(
                "<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"3\" fill=\"#c0392b\"/>\n"
            ));
        }
    }
    svg.push_str("</svg>\n");
    std::fs::write(path, svg)
}

fn svg_header(width: f64, height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\">\n\
         <rect width=\"{width:.0}\" height=\"{height:.0}\" fill=\"white\"/>\n"
    )
}

fn bounds(points: &[(f64, f64)]) -> Option<((f64, f64), (f64, f64))> {
    let finite: Vec<&(f64, f64)> = points
        .iter()
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .collect();
    if finite.is_empty() {
        return None;
    }
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for (x, y) in finite {
        xmin = xmin.min(*x);
        xmax = xmax.max(*x);
        ymin = ymin.min(*y);
        ymax = ymax.max(*y);
    }
    if ymin == ymax {
        ymin -= 0.5;
        ymax += 0.5;
    }
    if xmin == xmax {
        xmin -= 0.5;
        xmax += 0.5;
    }
    Some(((xmin, xmax), (ymin, ymax)))
}

/// Panel border, title and data-range corner labels.
fn draw_frame(svg: &mut String, panel: &Panel<'_>, x0: f64, y0: f64) {
    svg.push_str(&format!(
        "<rect x=\"{x0:.2}\" y=\"{y0:.2}\" width=\"{PANEL_W:.2}\" height=\"{PANEL_H:.2}\" \
         fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"16\" \
         text-anchor=\"middle\">{}</text>\n",
        x0 + PANEL_W / 2.0,
        y0 - 12.0,
        panel.title
    ));
    let Some(((xmin, xmax), (ymin, ymax))) = bounds(&panel.points) else {
        return;
    };
    for (label, x, y, anchor) in [
        (format!("{xmin:.4}"), x0, y0 + PANEL_H + 18.0, "start"),
        (
            format!("{xmax:.4}"),
            x0 + PANEL_W,
            y0 + PANEL_H + 18.0,
            "end",
        ),
        (format!("{ymin:.4}"), x0 - 6.0, y0 + PANEL_H, "end"),
        (format!("{ymax:.4}"), x0 - 6.0, y0 + 12.0, "end"),
    ] {
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{y:.2}\" font-family=\"monospace\" font-size=\"12\" \
             text-anchor=\"{anchor}\">{label}</text>\n"
        ));
    }
}

fn draw_panel(svg: &mut String, panel: &Panel<'_>, x0: f64, y0: f64) {
    draw_frame(svg, panel, x0, y0);
    let Some(((xmin, xmax), (ymin, ymax))) = bounds(&panel.points) else {
        return;
    };
    let sx = PANEL_W / (xmax - xmin).max(f64::MIN_POSITIVE);
    let sy = PANEL_H / (ymax - ymin).max(f64::MIN_POSITIVE);
    let mut coords = String::new();
    for (x, y) in &panel.points {
        if !x.is_finite() || !y.is_finite() {
            continue;
        }
        let px = x0 + (x - xmin) * sx;
        let py = y0 + PANEL_H - (y - ymin) * sy;
        coords.push_str(&format!("{px:.2},{py:.2} "));
    }
    svg.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n",
        coords.trim_end()
    ));
}

/// Keeps plots bounded: at most ~2000 points per polyline, first and last
/// always retained.
fn decimate(points: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    const MAX_POINTS: usize = 2000;
    if points.len() <= MAX_POINTS {
        return points;
    }
    let stride = points.len().div_ceil(MAX_POINTS);
    let last = *points.last().unwrap();
    let mut out: Vec<(f64, f64)> = points.into_iter().step_by(stride).collect();
    if out.last() != Some(&last) {
        out.push(last);
    }
    out
}
