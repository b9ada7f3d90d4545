use std::process::{Command, Output};

use serde_json::Value;

fn eulercc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eulercc"))
        .args(args)
        .env_remove("EULERCC_WORKERS")
        .output()
        .expect("the binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = eulercc(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn solve_equal_masses_in_the_vortex_range() {
    let v = json(&["solve", "-m", "1,1,1", "-b", "-2"]);
    assert_eq!(v["total"], 3);
    for cell in ["e1", "e2", "e3"] {
        assert_eq!(v[cell], 1);
    }
    let solutions = v["solutions"].as_array().unwrap();
    assert_eq!(solutions.len(), 3);
    let middle = solutions.iter().find(|s| s["cell"] == 2).unwrap();
    assert!((middle["s"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(middle["positions"][1].as_f64(), Some(1.0));
    assert_eq!(v["degenerate_family"], Value::Null);
}

#[test]
fn solve_without_configurations() {
    let v = json(&["solve", "-m", "0,-1,1", "-b", "-2"]);
    assert_eq!(v["total"], 0);
    assert!(v["solutions"].as_array().unwrap().is_empty());
}

#[test]
fn solve_degenerate_family() {
    let v = json(&["solve", "-m", "1,1,1", "-b", "1"]);
    assert_eq!(v["degenerate_family"], "iii");
    assert_eq!(v["total"], "inf");
}

#[test]
fn solve_output_round_trips_and_is_deterministic() {
    let args = ["solve", "-m", "1,-0.9,1", "-b", "0.5"];
    let (a, b) = (eulercc(&args), eulercc(&args));
    assert_eq!(a.stdout, b.stdout);
    let census: eulercc::euler::Census = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(census.counts.total, eulercc::euler::Count::Finite(5));
    let direct = eulercc::euler::solve(
        eulercc::euler::MassTriple::new(1.0, -0.9, 1.0),
        0.5,
        eulercc::signomial::DEFAULT_TOL,
    )
    .unwrap();
    assert_eq!(census, direct);
}

#[test]
fn solve_writes_to_a_file() {
    let path = std::env::temp_dir().join(format!("eulercc-solve-{}.json", std::process::id()));
    let o = eulercc(&[
        "solve",
        "-m",
        "1,2,-3",
        "-b",
        "-2",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(v["total"], 1);
}

#[test]
fn parse_errors_exit_with_two() {
    for args in [
        &["solve", "-m", "1,1", "-b", "-2"][..],
        &["solve", "-m", "1,1,1", "-b", "two"],
        &["solve", "-m", "1,1,1", "-b", "1", "--tol", "0"],
        &["grid", "--m2", "2:-4", "--b", "0:1", "-n", "3x3"],
        &["grid", "--m2", "-4:2", "--b", "0:1", "-n", "0x3"],
        &["signomial", "[[1,2"],
        &["bounds", "straight", "-n", "200"],
        &["verify", "--criterion", "12"],
        &["frobnicate"],
    ] {
        let o = eulercc(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn grid_row_crosses_the_curve() {
    let o = eulercc(&["grid", "--m2", "-2:-1", "--b", "-2:-2", "-n", "10x1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m2,b,e1,e2,e3,total,on_frontier"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 10);
    let curve = -(0.25 + 4.0) / 3.0;
    for r in &rows[..9] {
        let m2: f64 = r[0].parse().unwrap();
        assert_eq!(r[1].parse::<f64>().unwrap(), -2.0);
        assert_eq!(r[3], if m2 < curve { "1" } else { "3" }, "{r:?}");
        assert_eq!(r[6], "false");
    }
    // m2 = −1 is the lower half-line
    assert_eq!(rows[9][6], "true");
}

#[test]
fn grid_on_the_infinite_line() {
    let o = eulercc(&["grid", "--m2", "0:0", "--b", "1:1", "-n", "1x1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    let cols: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(&cols[2..], ["inf", "inf", "inf", "inf", "true"]);
}

#[test]
fn grid_cross_check_and_workers_agree() {
    let args = [
        "grid", "--m2", "-4:2", "--b", "-4:4", "-n", "50x50", "--check", "--margin", "0.05",
    ];
    let sequential = eulercc(&args);
    assert_eq!(
        sequential.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&sequential.stderr)
    );
    let parallel = Command::new(env!("CARGO_BIN_EXE_eulercc"))
        .args(args)
        .env("EULERCC_WORKERS", "4")
        .output()
        .unwrap();
    assert_eq!(parallel.status.code(), Some(0));
    assert_eq!(sequential.stdout, parallel.stdout);
    assert_eq!(stdout(&sequential).lines().count(), 2501);
}

#[test]
fn grid_json_format() {
    let v = json(&[
        "grid", "--m2", "-1:1", "--b", "0.5:0.5", "-n", "3x1", "--format", "json",
    ]);
    let points = v["points"].as_array().unwrap();
    assert_eq!(points.len(), 3);
    assert_eq!(points[2]["class"]["e2"], 1);
}

#[test]
fn bad_worker_count_is_a_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_eulercc"))
        .args(["grid", "--m2", "0:1", "--b", "0:1", "-n", "2x2"])
        .env("EULERCC_WORKERS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn signomial_examples() {
    let quintic = json(&["signomial", "[[2,0],[5,1],[4,2],[-4,3],[-5,4],[-2,5]]"]);
    assert_eq!(quintic["sign_variations"], 1);
    assert_eq!(quintic["count"], 1);
    assert!((quintic["roots"][0]["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let three = json(&["signomial", "[[1,0.5],[-3,1],[1,2]]"]);
    assert_eq!(three["count"], 2);
    assert_eq!(three["laguerre_bound"], 2);
    let roots = three["roots"].as_array().unwrap();
    let first = roots[0]["value"].as_f64().unwrap();
    let second = roots[1]["value"].as_f64().unwrap();
    assert!(first > 0.0 && first < 1.0);
    assert!(second > 1.0 && second < 4.0);

    let zero = json(&["signomial", "[]"]);
    assert_eq!(zero["count"], "identically_zero");
}

#[test]
fn signomial_on_a_subinterval() {
    let v = json(&[
        "signomial",
        "[[1,0.5],[-3,1],[1,2]]",
        "--lo",
        "1",
        "--hi",
        "4",
    ]);
    assert_eq!(v["count"], 1);
}

#[test]
fn bounds_examples() {
    for (args, want) in [
        (&["bounds", "straight", "-n", "6"][..], "62"),
        (&["bounds", "khovanskii", "-d", "1,2", "-k", "4"], "32768"),
        (&["bounds", "straight", "-n", "1"], "0"),
    ] {
        let o = eulercc(args);
        assert!(o.status.success());
        assert_eq!(stdout(&o).trim(), want);
    }
}

#[test]
fn verify_single_criterion() {
    let o = eulercc(&["verify", "--criterion", "11"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("criterion 11 PASS"));
    assert!(text.contains("1/1 criteria passed"));
}
