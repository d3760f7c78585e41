use std::fs;
use std::process::{Command, Output};

fn rispaces(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rispaces")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn lebesgue_norm_of_indicator() {
    let out = rispaces(&["norm", "--space", r#"{"space":"lebesgue","p":2}"#, "--fn", r#"{"kind":"char","a":0.25}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out)["value"].as_f64().unwrap();
    assert!((v - 0.5).abs() < 1e-15, "{v}");
}

#[test]
fn grand_norm_of_constant() {
    let out = rispaces(&["norm", "--space", r#"{"space":"grand","p":2,"alpha":2}"#, "--fn", r#"{"kind":"constant","c":1}"#]);
    assert_eq!(out.status.code(), Some(0));
    // sup_u u^{-1} (1 - e^{1-u})^{1/2}
    let v = stdout_json(&out)["value"].as_f64().unwrap();
    assert!((v - 0.419_876_460_6).abs() < 1e-9, "{v}");
}

#[test]
fn malformed_json_is_a_config_error() {
    let out = rispaces(&["norm", "--space", r#"{"space":"#, "--fn", r#"{"kind":"constant","c":1}"#]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--space"));
}

#[test]
fn function_read_from_sample_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("s.csv"), "value,weight\n1,0.25\n3,0.25\n0,0.5\n").unwrap();
    let spec = dir.path().join("f.json");
    fs::write(&spec, r#"{"kind":"samples","path":"s.csv"}"#).unwrap();
    let out = rispaces(&["norm", "--space", r#"{"space":"lebesgue","p":1}"#, "--fn", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!((stdout_json(&out)["value"].as_f64().unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn k_table_of_indicator() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.csv");
    let out = rispaces(&[
        "kfunc",
        "--couple",
        r#"{"couple":"lp_lq","p":1,"q":"inf"}"#,
        "--fn",
        r#"{"kind":"char","a":0.5}"#,
        "--k-nodes",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,K_oracle,K_explicit,ratio"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    for row in rows {
        assert!((row[1] - row[0].min(0.5)).abs() < 1e-15);
    }
}

#[test]
fn hypothesis_violation_exits_two() {
    let out = rispaces(&["experiment", "grand-grand-lorentz-zygmund", "theta=1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hypothesis violated"));
}

#[test]
fn unknown_experiment_exits_two() {
    assert_eq!(rispaces(&["experiment", "no-such-thing"]).status.code(), Some(2));
}

#[test]
fn divergent_norm_exits_one() {
    // θ = 1 with r = ∞ and α > 0 grows without bound
    let out = rispaces(&[
        "interp",
        "--couple",
        r#"{"couple":"grand_grand","p":2,"q":4,"alpha":1}"#,
        "--fn",
        r#"{"kind":"constant","c":1}"#,
        "--theta",
        "1",
        "--r",
        "inf",
        "--alpha",
        "1",
        "--panels",
        "40",
        "--k-nodes",
        "40",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("diverges"));
}

#[test]
fn discretization_experiment_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = rispaces(&["experiment", "discretization", "lambda=1", "q=1", "--panels", "160", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["experiment"], "discretization");
}

#[test]
fn failed_report_exits_three() {
    let out = rispaces(&["experiment", "discretization", "count=3", "--panels", "40", "--ceiling", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout_json(&out)["pass"], false);
}

#[test]
fn identical_seed_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str, seed: &str| {
        let json = dir.path().join(format!("{tag}.json"));
        let csv = dir.path().join(format!("{tag}.csv"));
        let out = Command::new(env!("CARGO_BIN_EXE_rispaces"))
            .args(["experiment", "discretization", "count=4", "--panels", "40"])
            .args(["--out", json.to_str().unwrap(), "--csv", csv.to_str().unwrap()])
            .env("RISPACES_SEED", seed)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        (fs::read(json).unwrap(), fs::read(csv).unwrap())
    };
    let a = run("a", "11");
    assert_eq!(a, run("b", "11"));
    assert_ne!(a.1, run("c", "12").1);
    assert!(String::from_utf8(a.1).unwrap().starts_with("function_id,lhs,rhs,ratio\n"));
}

#[test]
fn list_names_every_experiment() {
    let out = rispaces(&["list-experiments"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["grand-endpoint-of-grand-lq", "grand-small-z", "discretization", "k-bracket"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}
