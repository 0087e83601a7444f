use std::path::PathBuf;
use std::process::{Command, Output};

use specdiff::experiment::parse_csv;

fn specdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specdiff"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("specdiff-{}-{name}", std::process::id()))
}

#[test]
fn transition_writes_parseable_csv() {
    let path = scratch("transition.csv");
    let out = specdiff(&[
        "transition",
        "--m",
        "2",
        "--nmin",
        "8",
        "--nmax",
        "20",
        "--nstride",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = parse_csv(&path).unwrap();
    assert_eq!(
        report.rows.iter().map(|r| r.n).collect::<Vec<_>>(),
        vec![8, 12, 16, 20]
    );
    assert!(report.comments.iter().any(|c| c == "m=2"));
    assert!(report.rows.iter().all(|r| r.ur.is_some() && r.ud.is_some()));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn output_is_deterministic() {
    let args = ["transition", "--nmin", "10", "--nmax", "14"];
    assert_eq!(specdiff(&args).stdout, specdiff(&args).stdout);
}

#[test]
fn mapped_emits_one_curve_per_beta() {
    let out = specdiff(&[
        "mapped",
        "--method",
        "dct",
        "--m",
        "3",
        "--nmin",
        "32",
        "--nmax",
        "48",
        "--nstride",
        "16",
        "--beta",
        "0,0.5",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with(char::is_numeric))
        .collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.contains(",dct,")));
}

#[test]
fn alpha_prints_closed_form_value() {
    let out = specdiff(&["alpha", "--n", "53", "--beta", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().nth(1).unwrap();
    let alpha: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
    assert!((alpha - 0.8).abs() < 1e-15);
}

#[test]
fn bounds_reports_all_models() {
    let out = specdiff(&[
        "bounds",
        "--n",
        "24",
        "--m",
        "3",
        "--function",
        "sinscaled",
        "--eta",
        "6",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for key in ["UR ", "URprime", "UR_asym", "UD ", "UD_asym", "D2", "D4"] {
        assert!(text.contains(key), "missing {key}");
    }
}

#[test]
fn config_errors_exit_with_one() {
    assert_eq!(specdiff(&["transition", "--m", "9"]).status.code(), Some(1));
    assert_eq!(
        specdiff(&["transition", "--function", "cosine"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        specdiff(&["alpha", "--n", "8", "--beta", "40"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        specdiff(&["transition", "--nstride", "0"]).status.code(),
        Some(1)
    );
    let missing = scratch("no-such-dir").join("out.csv");
    let out = specdiff(&[
        "transition",
        "--nmin",
        "8",
        "--nmax",
        "8",
        "--out",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no-such-dir"));
}

#[test]
fn empty_range_is_header_only() {
    let out = specdiff(&["transition", "--nmin", "20", "--nmax", "10"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body.len(), 1);
    assert!(body[0].starts_with("n,actual,UR,URprime,UR_asym,UD,UD_asym,alpha,beta,method"));
}

#[test]
fn non_finite_results_exit_with_two() {
    let out = specdiff(&[
        "transition",
        "--function",
        "sinscaled",
        "--eta",
        "1e-300",
        "--nmin",
        "8",
        "--nmax",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
