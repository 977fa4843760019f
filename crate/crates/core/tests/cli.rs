use std::process::{Command, Output};

fn renyi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_renyi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn profile_writes_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.csv");
    let out = renyi(&[
        "profile",
        "--alpha",
        "0.8",
        "--grid-n",
        "101",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,f_maxent"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 101);
    // symmetric about the mean, peak in the middle
    assert_eq!(rows[0][1], rows[100][1]);
    assert!(rows.iter().all(|r| r[1] <= rows[50][1]));
}

#[test]
fn profile_outside_window_is_usage_error() {
    let out = renyi(&["profile", "--alpha", "0.2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("valid window"), "{err}");
    assert_eq!(renyi(&["profile"]).status.code(), Some(2));
    assert_eq!(renyi(&["bogus"]).status.code(), Some(2));
    assert_eq!(
        renyi(&["profile", "--alpha", "0.8", "--dim", "4"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn figure_is_byte_identical_across_runs() {
    let a = renyi(&["figure", "2"]);
    let b = renyi(&["figure", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("x,f_maxent,u_zkb\n"));
    assert_eq!(text.lines().count(), 1002);
}

#[test]
fn threshold_json_and_missing_root() {
    let out = renyi(&["threshold", "--dim", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["alpha_th"].as_f64().unwrap() - 2.87597).abs() < 1e-4);
    assert!((v["companion_supnorm_root"].as_f64().unwrap() - 1.37021).abs() < 1e-4);
    let none = renyi(&["threshold", "--dim", "3"]);
    assert_eq!(none.status.code(), Some(1));
    assert!(json(&none)["alpha_th"].is_null());
    assert_eq!(renyi(&["threshold", "--tol", "-1"]).status.code(), Some(2));
}

#[test]
fn report_json_moments() {
    let out = renyi(&["report", "--alpha", "1.5", "--mu2", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["h_alpha"].as_f64().unwrap().is_finite());
    let csv = renyi(&["report", "--alpha", "1.5", "--mu2", "2", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("quantity,value\nh_alpha,"));
}

#[test]
fn verify_selected_suites() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.json");
    let out = renyi(&[
        "verify",
        "--suite",
        "specfun,properties",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    let suites = v["suites"].as_object().unwrap();
    assert_eq!(suites.len(), 2);
    assert!(suites.contains_key("specfun") && suites.contains_key("properties"));
    // printed formulas that disagree with the oracle are surfaced as warnings
    let warnings: Vec<&str> = v["warnings"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w.as_str().unwrap())
        .collect();
    assert!(warnings.contains(&"specfun/rational_moment_as_printed"));
    assert!(warnings
        .iter()
        .any(|w| w.contains("kl_escort_printed_bound")));
}
