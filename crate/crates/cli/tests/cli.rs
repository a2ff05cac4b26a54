use std::fs;
use std::process::{Command, Output};

fn fnk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fnk")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

const STD2: &str = r#"{"kind":"representable","negs":[{"kind":"standard"},{"kind":"standard"}]}"#;

#[test]
fn eval_negation_and_automorphism() {
    let o = fnk(&["eval", "--neg", STD2, "--point", "0.2,0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0.5,0.8");
    let o = fnk(&[
        "eval",
        "--auto",
        r#"{"kind":"from_unit","psi":{"kind":"power","p":2},"n":2}"#,
        "--point",
        "0.3,0.6",
    ]);
    assert_eq!(stdout(&o), "0.09,0.36");
}

#[test]
fn exit_codes() {
    assert_eq!(fnk(&["eval", "--neg", STD2, "--point", "0.5,0.2"]).status.code(), Some(3));
    assert_eq!(fnk(&["eval", "--neg", "{not json", "--point", "0.5"]).status.code(), Some(2));
    assert_eq!(fnk(&["check", "--neg", STD2, "--props", "nosuch"]).status.code(), Some(2));
    assert_eq!(fnk(&["eval", "--neg", "@/no/such/file", "--point", "0.5"]).status.code(), Some(4));
    assert_eq!(fnk(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(fnk(&["theorems", "--suite", "nosuch"]).status.code(), Some(2));
}

#[test]
fn check_reports_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = fnk(&[
        "check",
        "--neg",
        r#"{"kind":"bottom_n","n":2}"#,
        "--props",
        "representable",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(!report["reports"][0]["witness"].is_null());

    let o = fnk(&["check", "--neg", "gen:strong", "--seed", "7", "--props", "strong,dp,representable"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn equilibrium_prints_degenerate_points() {
    let ck = r#"{"kind":"ck","n":3,"k":1}"#;
    let neg = format!(r#"{{"kind":"representable","negs":[{ck},{ck},{ck}]}}"#);
    let o = fnk(&["equilibrium", "--neg", &neg]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "/0.793700525984/");
    let o = fnk(&["equilibrium", "--neg", r#"{"kind":"bottom_n","n":2}"#]);
    assert_eq!(stdout(&o), "none");
}

#[test]
fn complement_twice_restores_the_set() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    let once = dir.path().join("once.csv");
    let twice = dir.path().join("twice.csv");
    let neg_file = dir.path().join("neg.json");
    fs::write(&input, "element,mu1,mu2\ne1,0.2,0.5\ne2,0,1\n").unwrap();
    fs::write(
        &neg_file,
        r#"{"kind":"strong_from_auto","phi":{"kind":"from_unit","psi":{"kind":"identity"},"n":2}}"#,
    )
    .unwrap();
    let neg = format!("@{}", neg_file.display());
    for (from, to) in [(&input, &once), (&once, &twice)] {
        let o = fnk(&["complement", "--set", from.to_str().unwrap(), "--neg", &neg, "--out", to.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(fs::read_to_string(&once).unwrap(), "element,mu1,mu2\ne1,0.5,0.8\ne2,0,1\n");
    assert_eq!(fs::read_to_string(&twice).unwrap(), fs::read_to_string(&input).unwrap());

    fs::write(&input, "element,mu1,mu2\ne1,0.5,0.3\n").unwrap();
    let o = fnk(&["complement", "--set", input.to_str().unwrap(), "--neg", &neg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("row 1"));
}

#[test]
fn grid_info_counts_points() {
    let o = fnk(&["grid-info", "--n", "2", "--m", "9"]);
    assert!(stdout(&o).contains("points=45"));
    assert!(stdout(&o).contains("pairs=1035"));
}

#[test]
fn theorems_are_deterministic_and_respect_thread_caps() {
    let args = ["theorems", "--suite", "core-lattice", "--n", "2", "--m", "5", "--redact", "--format", "json"];
    let a = fnk(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_fnk")).args(args).env("FNK_THREADS", "1").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_fnk")).args(args).env("FNK_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
