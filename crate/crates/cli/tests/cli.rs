use std::fs;
use std::process::{Command, Output};

use swipt_core::sweep::read_csv;

fn swipt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swipt"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn analytic_prints_both_modes() {
    let o = swipt(&["analytic"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("DF:") && s.contains("AF:"));
    assert!(s.contains("pu_outage  8.929671220e-3"), "{s}");
    assert!(s.contains("df_bc_su2") && s.contains("af_spu"));
}

#[test]
fn set_overrides_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("p.cfg");
    fs::write(&cfg, "# test\nalpha = 0.2\n").unwrap();
    let gated = stdout(&swipt(&[
        "--config",
        cfg.to_str().unwrap(),
        "analytic",
        "--mode",
        "df",
    ]));
    assert!(gated.contains("pu_outage  1.000000000e0"), "{gated}");
    let fixed = stdout(&swipt(&[
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "alpha=0.81",
        "analytic",
        "--mode",
        "df",
    ]));
    assert!(fixed.contains("pu_outage  8.929671220e-3"), "{fixed}");
}

#[test]
fn bad_input_exits_with_error() {
    let o = swipt(&["--set", "alpha=1.5", "analytic"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    let o = swipt(&["--set", "bogus=1", "analytic"]);
    assert_eq!(o.status.code(), Some(2));
    let o = swipt(&["sweep", "--preset", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_passes_at_reference_point() {
    let o = swipt(&["validate", "--samples", "200000", "--seed", "5"]);
    let s = stdout(&o);
    assert!(o.status.success(), "{s}");
    assert!(s.contains("overall: PASS"));
    assert_eq!(s.matches("closed-form").count(), 9);
}

#[test]
fn validate_fails_with_nonzero_exit() {
    let o = swipt(&["validate", "--samples", "20000", "--oracle-tol=-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("overall: FAIL"));
}

#[test]
fn simulate_is_seeded() {
    let args = [
        "simulate",
        "--samples",
        "50000",
        "--seed",
        "3",
        "--components",
    ];
    let a = stdout(&swipt(&args));
    let b = stdout(&swipt(&[&args[..], &["--sequential"]].concat()));
    assert_eq!(a, b);
    assert!(a.contains("q1") && a.contains("pu_outage"));
}

#[test]
fn oracle_matches_analytic_outage() {
    let s = stdout(&swipt(&["oracle", "--mode", "df"]));
    assert!(s.contains("pu_outage  8.92967"), "{s}");
}

#[test]
fn sweep_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("s.cfg");
    fs::write(&spec, "variable = alpha\ngrid = 0.3:0.9:0.2\nmodes = df, af\nmethods = analytic, mc\nmc_samples = 20000\n").unwrap();
    let csv = dir.path().join("out.csv");
    let svg = dir.path().join("out.svg");
    let o = swipt(&[
        "sweep",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
        "--seed",
        "4",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read_csv(fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows
        .iter()
        .all(|r| r.pu_mc.is_some() && r.methods == "analytic+mc"));
    assert!(fs::read_to_string(&svg).unwrap().contains("</svg>"));

    let again = dir.path().join("again.csv");
    swipt(&[
        "sweep",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        again.to_str().unwrap(),
        "--seed",
        "4",
    ]);
    assert_eq!(fs::read(&csv).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn preset_to_stdout_with_overrides() {
    let o = swipt(&["--set", "grid=-30,-20", "sweep", "--preset", "fig6"]);
    let s = stdout(&o);
    assert!(o.status.success());
    assert_eq!(s.lines().count(), 1 + 4);
    assert!(s.starts_with("variable,value,mode,"));
}
