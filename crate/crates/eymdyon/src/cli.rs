//! Batch command-line front end: `run`, `sweep`, `validate`.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical
//! failure, 3 validation failure. Errors print one machine-parsable line to
//! stderr: `error: <category>: <detail>`.

use crate::config::RunConfig;
use crate::diagnostics::{classify, count_nodes, DEFAULT_W_FLOOR};
use crate::integrator::integrate;
use crate::output;
use crate::seed::{core_c_constant, initial_state, truncation_warning};
use crate::sweep::{rh_curve, run_sweep, SweepSpec};
use crate::validate::run_battery;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

const HELP: &str = "\
eymdyon - cylindrically symmetric Einstein-Yang-Mills dyon solver

USAGE:
    eymdyon <COMMAND> [OPTIONS]

COMMANDS:
    run         integrate one configuration; writes trajectory.csv and summary.json
    sweep       run a grid of cosmological constants; writes sweep.csv
    validate    run the built-in reliability battery

GLOBAL OPTIONS:
    --config <path>      key = value configuration file (see below)
    --out <dir>          output directory (default: current directory)
    --set <key=value>    override one config key; repeatable
    --plot               also write SVG plots (profile.svg / rh_curve.svg)
    --json               machine-readable stdout (run summary, sweep rows,
                         validation report)
    -h, --help           this text

SWEEP OPTIONS:
    --lambda-min <x> --lambda-max <x> --lambda-step <x>
                         inclusive arithmetic grid of cosmological constants
    --lambda-list <a,b,...>
                         explicit grid (strictly increasing; empty list allowed)
                         default grid: 0 to 0.02 in steps of 2.5e-4

VALIDATE OPTIONS:
    --corrupt-rhs        test fixture: corrupt the field equations and expect
                         the battery to notice

CONFIG KEYS (key = value, '#' comments; unknown keys are rejected):
    lambda           cosmological constant            default 0.001
    kappa            gravitational coupling 4piG/g^2  default 1
    g                gauge coupling                   default 1
    a                electric shooting parameter      default 1
    b                magnetic shooting parameter      default 0.35
    r0               core radius                      default 0.01
    c0               initial C(r0)                    default 1
    cp0              initial C'(r0)                   default 0
    abs_tol          absolute step tolerance          default 1e-12
    rel_tol          relative step tolerance          default 1e-12
    r_max            outer radius                     default 50
    horizon_epsilon  horizon threshold on C/C(r0)     default 1e-8
    dense_dr         output sample spacing            default 1e-3
    method           verner65 | dopri54               default verner65
    workers          sweep worker threads             default: CPU count

EXIT CODES:
    0 success, 1 usage/config error, 2 numerical failure, 3 validation failure
";

enum LambdaGrid {
    Default,
    List(Vec<f64>),
    Range { min: f64, max: f64, step: f64 },
}

struct Invocation {
    command: String,
    config_path: Option<PathBuf>,
    out_dir: PathBuf,
    overrides: Vec<(String, String)>,
    plot: bool,
    json: bool,
    corrupt_rhs: bool,
    lambda_list: Option<String>,
    lambda_min: Option<f64>,
    lambda_max: Option<f64>,
    lambda_step: Option<f64>,
}

fn usage_error(detail: &str) -> i32 {
    eprintln!("error: usage: {detail}");
    EXIT_USAGE
}

/// Parses arguments and dispatches; returns the process exit code.
pub fn run(args: &[String]) -> i32 {
    if args.is_empty() || args[0] == "-h" || args[0] == "--help" {
        print!("{HELP}");
        return if args.is_empty() { EXIT_USAGE } else { EXIT_OK };
    }
    let command = args[0].clone();
    if !["run", "sweep", "validate"].contains(&command.as_str()) {
        return usage_error(&format!(
            "unknown command '{command}' (expected run, sweep or validate)"
        ));
    }

    let mut inv = Invocation {
        command,
        config_path: None,
        out_dir: PathBuf::from("."),
        overrides: Vec::new(),
        plot: false,
        json: false,
        corrupt_rhs: false,
        lambda_list: None,
        lambda_min: None,
        lambda_max: None,
        lambda_step: None,
    };

    let mut i = 1;
    let take_value = |args: &[String], i: &mut usize, flag: &str| -> Result<String, String> {
        *i += 1;
        args.get(*i)
            .cloned()
            .ok_or_else(|| format!("{flag} needs a value"))
    };
    while i < args.len() {
        let arg = args[i].as_str();
        let result: Result<(), String> = match arg {
            "-h" | "--help" => {
                print!("{HELP}");
                return EXIT_OK;
            }
            "--config" => take_value(args, &mut i, arg).map(|v| inv.config_path = Some(v.into())),
            "--out" => take_value(args, &mut i, arg).map(|v| inv.out_dir = v.into()),
            "--set" => take_value(args, &mut i, arg).and_then(|v| {
                let (k, val) = v
                    .split_once('=')
                    .ok_or_else(|| format!("--set expects key=value, got '{v}'"))?;
                inv.overrides.push((k.trim().into(), val.trim().into()));
                Ok(())
            }),
            "--plot" => {
                inv.plot = true;
                Ok(())
            }
            "--json" => {
                inv.json = true;
                Ok(())
            }
            "--corrupt-rhs" => {
                inv.corrupt_rhs = true;
                Ok(())
            }
            "--lambda-list" => take_value(args, &mut i, arg).map(|v| inv.lambda_list = Some(v)),
            "--lambda-min" => parse_flag_f64(args, &mut i, arg).map(|v| inv.lambda_min = Some(v)),
            "--lambda-max" => parse_flag_f64(args, &mut i, arg).map(|v| inv.lambda_max = Some(v)),
            "--lambda-step" => parse_flag_f64(args, &mut i, arg).map(|v| inv.lambda_step = Some(v)),
            other => Err(format!("unknown option '{other}'")),
        };
        if let Err(detail) = result {
            return usage_error(&detail);
        }
        i += 1;
    }

    match inv.command.as_str() {
        "run" => cmd_run(&inv),
        "sweep" => cmd_sweep(&inv),
        "validate" => cmd_validate(&inv),
        _ => unreachable!(),
    }
}

fn parse_flag_f64(args: &[String], i: &mut usize, flag: &str) -> Result<f64, String> {
    *i += 1;
    let v = args
        .get(*i)
        .ok_or_else(|| format!("{flag} needs a value"))?;
    v.parse::<f64>()
        .map_err(|e| format!("{flag}: {e} (got '{v}')"))
}

fn load_config(inv: &Invocation) -> Result<RunConfig, String> {
    let mut cfg = match &inv.config_path {
        Some(path) => RunConfig::from_file(path).map_err(|e| e.to_string())?,
        None => RunConfig::default(),
    };
    for (k, v) in &inv.overrides {
        cfg.set(k, v).map_err(|e| e.to_string())?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn ensure_out_dir(dir: &Path) -> Result<(), String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("cannot create '{}': {e}", dir.display()))
}

fn cmd_run(inv: &Invocation) -> i32 {
    let cfg = match load_config(inv) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: config: {e}");
            return EXIT_USAGE;
        }
    };
    if let Err(e) = ensure_out_dir(&inv.out_dir) {
        eprintln!("error: config: {e}");
        return EXIT_USAGE;
    }
    if let Some(warning) = truncation_warning(&cfg.params) {
        eprintln!("warning: {warning}");
    }

    let init = match initial_state(&cfg.params, &cfg.seed) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: numerical: seed: {e}");
            return EXIT_NUMERICAL;
        }
    };
    let traj = match integrate(&init, &cfg.params, &cfg.integ) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: numerical: {e}");
            return EXIT_NUMERICAL;
        }
    };
    let nodes = count_nodes(&traj, DEFAULT_W_FLOOR);
    let classification = classify(&traj, &nodes);
    let summary = output::RunSummary {
        params: cfg.params,
        seed: cfg.seed,
        method: cfg.integ.method,
        terminal: *traj.terminal(),
        classification,
        residual_norm: crate::diagnostics::trajectory_residual(&traj, &cfg.params),
        core_c_constant: core_c_constant(cfg.params.a, cfg.params.b).ok(),
        samples: traj.len(),
        accepted_steps: traj.accepted_steps(),
        nodes,
    };

    let csv_path = inv.out_dir.join("trajectory.csv");
    let json_path = inv.out_dir.join("summary.json");
    if let Err(e) = output::write_trajectory_csv(&csv_path, &traj, &cfg.params) {
        eprintln!("error: numerical: writing {}: {e}", csv_path.display());
        return EXIT_NUMERICAL;
    }
    if let Err(e) = output::write_json(&json_path, &summary) {
        eprintln!("error: numerical: writing {}: {e}", json_path.display());
        return EXIT_NUMERICAL;
    }
    let mut written = vec![
        csv_path.display().to_string(),
        json_path.display().to_string(),
    ];
    if inv.plot {
        let svg_path = inv.out_dir.join("profile.svg");
        if let Err(e) = output::write_profile_svg(&svg_path, &traj) {
            eprintln!("error: numerical: writing {}: {e}", svg_path.display());
            return EXIT_NUMERICAL;
        }
        written.push(svg_path.display().to_string());
    }
    if inv.json {
        match serde_json::to_string_pretty(&summary) {
            Ok(text) => println!("{text}"),
            Err(e) => {
                eprintln!("error: numerical: serializing summary: {e}");
                return EXIT_NUMERICAL;
            }
        }
    } else {
        println!(
            "run: lambda={} reason={} r_h={} nodes={} classification={} -> {}",
            cfg.params.lambda,
            traj.terminal().reason,
            traj.terminal()
                .r_h
                .map(|v| v.to_string())
                .unwrap_or_else(|| "-".into()),
            summary.nodes.count,
            classification,
            written.join(" ")
        );
    }
    EXIT_OK
}

fn build_grid(inv: &Invocation) -> Result<Vec<f64>, String> {
    let grid = match (
        &inv.lambda_list,
        inv.lambda_min,
        inv.lambda_max,
        inv.lambda_step,
    ) {
        (Some(_), min, max, step) if min.is_some() || max.is_some() || step.is_some() => {
            return Err("--lambda-list conflicts with --lambda-min/max/step".into())
        }
        (Some(list), ..) => LambdaGrid::List(parse_lambda_list(list)?),
        (None, None, None, None) => LambdaGrid::Default,
        (None, Some(min), Some(max), Some(step)) => LambdaGrid::Range { min, max, step },
        _ => return Err("--lambda-min, --lambda-max and --lambda-step go together".into()),
    };
    let values = match grid {
        LambdaGrid::Default => arithmetic_grid(0.0, 0.02, 2.5e-4)?,
        LambdaGrid::Range { min, max, step } => arithmetic_grid(min, max, step)?,
        LambdaGrid::List(v) => v,
    };
    for w in values.windows(2) {
        if !(w[1] > w[0]) {
            return Err(format!(
                "lambda grid must be strictly increasing, got {} then {}",
                w[0], w[1]
            ));
        }
    }
    Ok(values)
}

fn parse_lambda_list(list: &str) -> Result<Vec<f64>, String> {
    if list.trim().is_empty() {
        return Ok(Vec::new());
    }
    list.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| format!("--lambda-list: {e} (got '{}')", s.trim()))
        })
        .collect()
}

fn arithmetic_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>, String> {
    if !(step > 0.0) {
        return Err("--lambda-step must be positive".into());
    }
    if max < min {
        return Err("--lambda-max must not be below --lambda-min".into());
    }
    let n = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| min + i as f64 * step).collect())
}

fn cmd_sweep(inv: &Invocation) -> i32 {
    let cfg = match load_config(inv) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: config: {e}");
            return EXIT_USAGE;
        }
    };
    let grid = match build_grid(inv) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: config: {e}");
            return EXIT_USAGE;
        }
    };
    if let Err(e) = ensure_out_dir(&inv.out_dir) {
        eprintln!("error: config: {e}");
        return EXIT_USAGE;
    }
    if let Some(warning) = truncation_warning(&cfg.params) {
        eprintln!("warning: {warning}");
    }

    let spec = SweepSpec {
        lambda_values: grid,
        base: cfg.params,
        seed_opts: cfg.seed,
        integ: cfg.integ,
        workers: cfg.workers,
        ..SweepSpec::new(Vec::new(), cfg.params)
    };
    let rows = match run_sweep(&spec) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: config: {e}");
            return EXIT_USAGE;
        }
    };

    let csv_path = inv.out_dir.join("sweep.csv");
    if let Err(e) = output::write_sweep_csv(&csv_path, &rows) {
        eprintln!("error: numerical: writing {}: {e}", csv_path.display());
        return EXIT_NUMERICAL;
    }
    let curve = rh_curve(&rows);
    let mut written = vec![csv_path.display().to_string()];
    if inv.plot {
        let svg_path = inv.out_dir.join("rh_curve.svg");
        if let Err(e) = output::write_rh_curve_svg(&svg_path, &curve) {
            eprintln!("error: numerical: writing {}: {e}", svg_path.display());
            return EXIT_NUMERICAL;
        }
        written.push(svg_path.display().to_string());
    }
    if inv.json {
        match serde_json::to_string_pretty(&rows) {
            Ok(text) => println!("{text}"),
            Err(e) => {
                eprintln!("error: numerical: serializing rows: {e}");
                return EXIT_NUMERICAL;
            }
        }
    } else {
        println!(
            "sweep: {} rows, {} horizons -> {}",
            rows.len(),
            curve.len(),
            written.join(" ")
        );
    }
    EXIT_OK
}

fn cmd_validate(inv: &Invocation) -> i32 {
    let report = run_battery(inv.corrupt_rhs);
    if inv.json {
        match serde_json::to_string_pretty(&report) {
            Ok(text) => println!("{text}"),
            Err(e) => {
                eprintln!("error: validation: serializing report: {e}");
                return EXIT_VALIDATION;
            }
        }
    } else {
        for c in &report.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            println!(
                "{status} {name:<24} {detail} [threshold {threshold:e}, {ms} ms]",
                name = c.name,
                detail = c.detail,
                threshold = c.threshold,
                ms = c.millis
            );
        }
    }
    if report.all_passed {
        EXIT_OK
    } else {
        EXIT_VALIDATION
    }
}
