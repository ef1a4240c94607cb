use std::process::{Command, Output};

use qht_core::sweep::CSV_HEADER;
use serde_json::Value;

fn qht(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qht"))
        .args(args)
        .output()
        .expect("run qht")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("JSON output")
}

#[test]
fn bound_coincident_sources() {
    let out = qht(&[
        "bound", "--k", "0", "--gamma", "0.1", "--theta", "0", "--p", "0.5", "--format", "json",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["a_qod"].as_f64(), Some(1.0));
    assert_eq!(v["useless"], Value::Bool(true));
}

#[test]
fn bound_incoherent_k2() {
    let out = qht(&[
        "bound", "--k", "2", "--gamma", "0", "--theta", "0", "--p", "0.5",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("o_err = 0.301234976"), "{text}");
    assert!(text.contains("a_qod = 1.65983382"), "{text}");
    assert!(text.contains("p_star = 0.666666667"), "{text}");
}

#[test]
fn bound_near_degenerate_is_finite() {
    let out = qht(&[
        "bound",
        "--k",
        "1",
        "--gamma",
        "1",
        "--theta",
        "3.14159265",
        "--p",
        "0.5",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    for key in ["delta", "n", "o_err", "a_qod", "p_star"] {
        assert!(v[key].as_f64().unwrap().is_finite(), "{key}");
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| qht(args).status.code().unwrap();
    assert_eq!(
        code(&[
            "bound",
            "--k",
            "0",
            "--gamma",
            "1",
            "--theta",
            "1",
            "--theta-pi"
        ]),
        3
    );
    assert_eq!(code(&["bound", "--k", "1", "--gamma", "1.5"]), 2);
    assert_eq!(code(&["bound", "--k", "abc"]), 2);
    assert_eq!(code(&["bound"]), 2);
    assert_eq!(code(&["advantage-map", "--p-range", "0:1:1"]), 2);
    assert_eq!(
        code(&[
            "advantage-map",
            "--k-range",
            "0:1:3",
            "--output",
            "/nonexistent-dir/out.csv"
        ]),
        4
    );
    assert_eq!(code(&["simulate", "--k", "1", "--photons", "0"]), 2);
    assert_eq!(code(&["verify", "--grid-points", "101"]), 5);
}

#[test]
fn theta_pi_scales_phase() {
    let a = json(&qht(&[
        "bound",
        "--k",
        "1.5",
        "--gamma",
        "0.9",
        "--theta",
        "1",
        "--theta-pi",
        "--format",
        "json",
    ]));
    let b = json(&qht(&[
        "bound",
        "--k",
        "1.5",
        "--gamma",
        "0.9",
        "--theta",
        "3.141592653589793",
        "--format",
        "json",
    ]));
    assert_eq!(a, b);
    assert_eq!(a["c"].as_f64(), Some(-0.9));
}

#[test]
fn advantage_map_small_grid() {
    let out = qht(&[
        "advantage-map",
        "--k-range",
        "0:2:2",
        "--p-range",
        "0.2:0.8:2",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 5);
    assert!(!text.contains('\r'));
}

#[test]
fn advantage_map_incoherent_useless_rows() {
    let out = qht(&[
        "advantage-map",
        "--gamma",
        "0",
        "--k-range",
        "0.5:5:10",
        "--p-range",
        "0:1:21",
    ]);
    for line in stdout(&out).lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let p: f64 = f[1].parse().unwrap();
        if p > 2.0 / 3.0 {
            assert_eq!(f[10], "true", "{line}");
            assert_eq!(f[7], "1.00000000", "{line}");
        }
    }
}

#[test]
fn degenerate_rows_do_not_abort() {
    let out = qht(&[
        "advantage-map",
        "--gamma",
        "1",
        "--theta",
        "1",
        "--theta-pi",
        "--k-range",
        "0:1:2",
        "--p-range",
        "0.5:0.5:1",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(
        rows[0],
        "0,0.500000000,1.00000000,3.14159265,,,,,,,degenerate"
    );
    assert!(rows[1].ends_with("false"));
}

#[test]
fn spade_sweep_rows() {
    let out = qht(&["spade", "--gamma", "0", "--k-range", "0:2:3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 3);
    // k = 0: both advantages are one
    assert_eq!((rows[0][7], rows[0][9]), ("1.00000000", "1.00000000"));
    // k = 2
    assert_eq!(rows[2][1], "0.500000000");
    assert_eq!(rows[2][7], "1.65983382");
    assert_eq!(rows[2][8], "0.341969860");
    assert_eq!(rows[2][9], "1.46211716");
}

#[test]
fn spade_out_of_phase_never_beats_optimum() {
    let out = qht(&[
        "spade",
        "--gamma",
        "0.9",
        "--theta",
        "1",
        "--theta-pi",
        "--k-range",
        "0:5:51",
        "--format",
        "json",
    ]);
    let rows = json(&out);
    for row in rows.as_array().unwrap() {
        assert!(
            row["a_d"].as_f64().unwrap() <= row["a_qod"].as_f64().unwrap(),
            "{row}"
        );
    }
    // k = 1: the sorter sits within 0.1% of the optimum
    let k1 = &rows[10];
    assert_eq!(k1["k"].as_f64(), Some(1.0));
    assert_eq!(k1["p_err_spade"].as_f64(), Some(0.23123181));
    assert_eq!(k1["a_d"].as_f64(), Some(2.16233225));
    assert_eq!(k1["a_qod"].as_f64(), Some(2.16407352));
}

#[test]
fn simulate_is_deterministic_and_calibrated() {
    let args = [
        "simulate",
        "--k",
        "2",
        "--gamma",
        "0",
        "--theta",
        "0",
        "--p",
        "0.5",
        "--photons",
        "200000",
        "--seed",
        "7",
    ];
    let a = qht(&args);
    let b = qht(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["n_trials"].as_u64(), Some(200_000));
    assert!(v["z_score"].as_f64().unwrap().abs() <= 3.0);
}

#[test]
fn simulate_zero_prior_never_errs() {
    let v = json(&qht(&[
        "simulate",
        "--k",
        "2",
        "--p",
        "0",
        "--photons",
        "10000",
    ]));
    assert_eq!(v["error_rate"].as_f64(), Some(0.0));
    assert_eq!(v["n_errors"].as_u64(), Some(0));
}

#[test]
fn simulate_with_vacuum() {
    let v = json(&qht(&[
        "simulate",
        "--k",
        "1",
        "--gamma",
        "0.5",
        "--photons",
        "50000",
        "--epsilon",
        "0.1",
    ]));
    assert_eq!(v["n_trials"].as_u64(), Some(50_000));
    assert!(v["n_emissions"].as_u64().unwrap() > 400_000);
    assert!(v["z_score"].as_f64().unwrap().abs() <= 3.0);
}

#[test]
fn verify_default_passes() {
    let out = qht(&["verify"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("result = PASS"));
}
