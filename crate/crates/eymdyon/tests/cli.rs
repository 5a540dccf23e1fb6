//! End-to-end tests of the `eymdyon` binary surface: config files, output
//! formats, exit codes, determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eymdyon"))
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "eymdyon-cli-{tag}-{}-{:?}",
        std::process::id(),
        std::thread::current().id()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("reading {path:?}: {e}"))
}

fn assert_exit(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn run_vacuum_config_produces_constant_columns() {
    let dir = temp_dir("vacuum");
    let config = dir.join("vacuum.cfg");
    std::fs::write(
        &config,
        "# vacuum seed\na = 0\nb = 0\nlambda = 0\nr_max = 10\n",
    )
    .unwrap();
    let out = bin()
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert_exit(&out, 0);

    let csv = read(&dir.join("trajectory.csv"));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("r,B,Bp,C,Cp,W,Wp,Phi,Phip,T_tt"));
    let first: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    for line in csv.lines().skip(2) {
        let row: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        for i in 1..10 {
            assert!(
                (row[i] - first[i]).abs() <= 1e-10,
                "column {i} drifted: {} vs {}",
                row[i],
                first[i]
            );
        }
    }

    let summary = read(&dir.join("summary.json"));
    let json: serde_json::Value = serde_json::from_str(&summary).unwrap();
    assert_eq!(json["terminal"]["reason"], "reached_r_max");
    assert_eq!(json["classification"], "string_like");
    assert_eq!(json["nodes"]["count"], 0);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn run_is_byte_identical_across_invocations() {
    let dir_a = temp_dir("det-a");
    let dir_b = temp_dir("det-b");
    for dir in [&dir_a, &dir_b] {
        let out = bin()
            .args(["run", "--set", "lambda=0.0025", "--set", "r_max=5", "--out"])
            .arg(dir)
            .output()
            .unwrap();
        assert_exit(&out, 0);
    }
    assert_eq!(
        read(&dir_a.join("trajectory.csv")),
        read(&dir_b.join("trajectory.csv"))
    );
    assert_eq!(
        read(&dir_a.join("summary.json")),
        read(&dir_b.join("summary.json"))
    );
    std::fs::remove_dir_all(&dir_a).ok();
    std::fs::remove_dir_all(&dir_b).ok();
}

#[test]
fn run_spans_the_full_range_at_negative_lambda() {
    let dir = temp_dir("negative");
    let out = bin()
        .args(["run", "--set", "lambda=-0.01", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_exit(&out, 0);
    let csv = read(&dir.join("trajectory.csv"));
    let first_r: f64 = csv
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    let last_r: f64 = csv
        .lines()
        .last()
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(first_r, 0.01);
    assert_eq!(last_r, 50.0);
    let json: serde_json::Value = serde_json::from_str(&read(&dir.join("summary.json"))).unwrap();
    assert_eq!(json["terminal"]["reason"], "reached_r_max");
    // measured behavior at this lambda: the oscillation has not yet frozen
    assert_eq!(json["classification"], "oscillatory");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn run_horizon_case_reports_radius_and_plot() {
    let dir = temp_dir("horizon");
    let out = bin()
        .args(["run", "--set", "lambda=0.015", "--plot", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_exit(&out, 0);
    let json: serde_json::Value = serde_json::from_str(&read(&dir.join("summary.json"))).unwrap();
    assert_eq!(json["terminal"]["reason"], "horizon");
    let r_h = json["terminal"]["r_h"].as_f64().unwrap();
    assert!(r_h > 30.0 && r_h < 34.0, "r_h = {r_h}");
    assert!(json["nodes"]["count"].as_u64().unwrap() >= 1);
    assert_eq!(json["classification"], "horizon_terminated");
    let svg = read(&dir.join("profile.svg"));
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn sweep_grid_flags_and_determinism() {
    let dir = temp_dir("sweep");
    let grid = "0,0.0005,0.001,0.0025,0.0034,0.00425,0.0075,0.0125,0.014,0.015";
    let mut csvs = Vec::new();
    for _ in 0..2 {
        let out = bin()
            .args(["sweep", "--lambda-list", grid, "--plot", "--out"])
            .arg(&dir)
            .output()
            .unwrap();
        assert_exit(&out, 0);
        csvs.push(read(&dir.join("sweep.csv")));
    }
    let strip_wall_time = |csv: &str| -> String {
        csv.lines()
            .map(|l| {
                l.rsplit_once(',')
                    .map(|(head, _)| head.to_string())
                    .unwrap()
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    // physical columns are deterministic; the trailing wall-time column is not
    assert_eq!(strip_wall_time(&csvs[0]), strip_wall_time(&csvs[1]));

    let lines: Vec<&str> = csvs[0].lines().collect();
    assert_eq!(lines.len(), 11);
    assert_eq!(
        lines[0],
        "lambda,r_h,node_count,terminal_reason,classification,wall_time_ms"
    );
    let horizons = lines[1..]
        .iter()
        .filter(|l| l.contains(",horizon,"))
        .count();
    assert!(horizons >= 1, "expected horizons in the grid");
    assert!(read(&dir.join("rh_curve.svg")).starts_with("<svg"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn sweep_empty_list_writes_header_only() {
    let dir = temp_dir("empty");
    let out = bin()
        .args(["sweep", "--lambda-list", "", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_exit(&out, 0);
    assert_eq!(
        read(&dir.join("sweep.csv")),
        "lambda,r_h,node_count,terminal_reason,classification,wall_time_ms\n"
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn sweep_range_flags_build_the_grid() {
    let dir = temp_dir("range");
    let out = bin()
        .args([
            "sweep",
            "--lambda-min",
            "0.001",
            "--lambda-max",
            "0.003",
            "--lambda-step",
            "0.001",
            "--set",
            "r_max=5",
            "--out",
        ])
        .arg(&dir)
        .output()
        .unwrap();
    assert_exit(&out, 0);
    let csv = read(&dir.join("sweep.csv"));
    let lambdas: Vec<&str> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(lambdas, ["0.001", "0.002", "0.003"]);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_codes_follow_the_contract() {
    // usage errors
    let out = bin().arg("frobnicate").output().unwrap();
    assert_exit(&out, 1);
    let out = bin()
        .args(["run", "--set", "no_such_key=1"])
        .output()
        .unwrap();
    assert_exit(&out, 1);
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("no_such_key"),
        "error must name the offending key"
    );
    let out = bin()
        .args(["sweep", "--lambda-list", "0.2,0.1"])
        .output()
        .unwrap();
    assert_exit(&out, 1);

    // numerical failure: non-positive metric seed
    let dir = temp_dir("numfail");
    let out = bin()
        .args(["run", "--set", "c0=-1", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_exit(&out, 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.starts_with("error: numerical:"), "got: {stderr}");
    std::fs::remove_dir_all(&dir).ok();

    // help is not an error
    let out = bin().arg("--help").output().unwrap();
    assert_exit(&out, 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("CONFIG KEYS"));
}

#[test]
fn validate_passes_and_corruption_is_detected() {
    let out = bin().arg("validate").output().unwrap();
    assert_exit(&out, 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.matches("PASS").count(), 4, "stdout: {stdout}");

    let out = bin().args(["validate", "--json"]).output().unwrap();
    assert_exit(&out, 0);
    let report: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(report["checks"].as_array().unwrap().len(), 4);
    assert_eq!(report["all_passed"], true);

    let out = bin().args(["validate", "--corrupt-rhs"]).output().unwrap();
    assert_exit(&out, 3);
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn json_stdout_modes_are_machine_readable() {
    let dir = temp_dir("json");
    let out = bin()
        .args([
            "run",
            "--set",
            "lambda=0.0025",
            "--set",
            "r_max=3",
            "--json",
            "--out",
        ])
        .arg(&dir)
        .output()
        .unwrap();
    assert_exit(&out, 0);
    let summary: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(summary["params"]["lambda"], 0.0025);
    assert_eq!(summary["terminal"]["reason"], "reached_r_max");

    let out = bin()
        .args([
            "sweep",
            "--lambda-list",
            "0.001,0.0025",
            "--set",
            "r_max=3",
            "--json",
            "--out",
        ])
        .arg(&dir)
        .output()
        .unwrap();
    assert_exit(&out, 0);
    let rows: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["lambda"], 0.0025);
    assert!(rows[1]["wall_time_ms"].is_u64());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn trajectory_csv_round_trips_at_full_precision() {
    let dir = temp_dir("roundtrip");
    let out = bin()
        .args(["run", "--set", "lambda=0.001", "--set", "r_max=2", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_exit(&out, 0);
    let csv = read(&dir.join("trajectory.csv"));
    for line in csv.lines().skip(1) {
        for field in line.split(',') {
            let v: f64 = field.parse().expect("parseable float");
            // shortest round-trip formatting: printing the parsed value
            // reproduces the text exactly
            assert_eq!(format!("{v}"), field);
        }
    }
    std::fs::remove_dir_all(&dir).ok();
}
