//! Families of runs over a grid of cosmological constants, producing the
//! horizon-radius and node-count tables.

use crate::diagnostics::{classify, count_nodes, Classification, DEFAULT_W_FLOOR};
use crate::integrator::{integrate, IntegratorConfig, TerminalReason};
use crate::model::Params;
use crate::seed::{initial_state, SeedOptions};
use serde::Serialize;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

/// A grid of runs: one integration per value of the cosmological constant.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    /// Grid values, strictly increasing. May be empty.
    pub lambda_values: Vec<f64>,
    /// Run parameters; the `lambda` field is overwritten per row.
    pub base: Params,
    pub seed_opts: SeedOptions,
    pub integ: IntegratorConfig,
    /// Worker threads; results are independent of this.
    pub workers: usize,
    /// Rows exceeding this budget are marked indeterminate.
    pub row_budget: Duration,
}

impl SweepSpec {
    pub fn new(lambda_values: Vec<f64>, base: Params) -> Self {
        SweepSpec {
            lambda_values,
            base,
            seed_opts: SeedOptions::default(),
            integ: IntegratorConfig::default(),
            workers: 1,
            row_budget: Duration::from_secs(30),
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.workers == 0 {
            return Err("workers must be at least 1".into());
        }
        for w in self.lambda_values.windows(2) {
            if !(w[1] > w[0]) {
                return Err(format!(
                    "lambda grid must be strictly increasing, got {} then {}",
                    w[0], w[1]
                ));
            }
        }
        Ok(())
    }
}

/// Outcome of one grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub lambda: f64,
    /// Horizon radius, present exactly when the run ended on the horizon.
    pub r_h: Option<f64>,
    pub node_count: usize,
    /// `None` when the row failed to run at all (seed or setup error).
    pub terminal_reason: Option<TerminalReason>,
    pub classification: Classification,
    #[serde(rename = "wall_time_ms", serialize_with = "millis")]
    pub wall_time: Duration,
}

fn millis<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u128(d.as_millis())
}

/// Runs the grid. Each row is seed → integrate → count nodes → classify;
/// per-row failures are recorded in the row and never abort the sweep. Rows
/// come back in grid order and do not depend on the worker count.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, String> {
    spec.validate()?;
    let n = spec.lambda_values.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let workers = spec.workers.min(n);
    if workers == 1 {
        return Ok(spec
            .lambda_values
            .iter()
            .map(|&l| run_row(spec, l))
            .collect());
    }

    let slots: Mutex<Vec<Option<SweepRow>>> = Mutex::new(vec![None; n]);
    let cursor = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = cursor.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let row = run_row(spec, spec.lambda_values[i]);
                slots.lock().expect("sweep worker poisoned")[i] = Some(row);
            });
        }
    });
    let rows = slots
        .into_inner()
        .expect("sweep collection poisoned")
        .into_iter()
        .map(|r| r.expect("all rows computed"))
        .collect();
    Ok(rows)
}

fn run_row(spec: &SweepSpec, lambda: f64) -> SweepRow {
    let start = Instant::now();
    let params = Params {
        lambda,
        ..spec.base
    };
    let failed = |start: Instant| SweepRow {
        lambda,
        r_h: None,
        node_count: 0,
        terminal_reason: None,
        classification: Classification::Indeterminate,
        wall_time: start.elapsed(),
    };

    let init = match initial_state(&params, &spec.seed_opts) {
        Ok(s) => s,
        Err(_) => return failed(start),
    };
    let traj = match integrate(&init, &params, &spec.integ) {
        Ok(t) => t,
        Err(_) => return failed(start),
    };
    let nodes = count_nodes(&traj, DEFAULT_W_FLOOR);
    let wall_time = start.elapsed();
    let classification = if wall_time > spec.row_budget {
        Classification::Indeterminate
    } else {
        classify(&traj, &nodes)
    };
    SweepRow {
        lambda,
        r_h: traj.terminal().r_h,
        node_count: nodes.count,
        terminal_reason: Some(traj.terminal().reason),
        classification,
        wall_time,
    }
}

/// Filters the rows with a horizon and returns (lambda, r_h) pairs in grid
/// order.
pub fn rh_curve(rows: &[SweepRow]) -> Vec<(f64, f64)> {
    rows.iter()
        .filter_map(|r| r.r_h.map(|rh| (r.lambda, rh)))
        .collect()
}
