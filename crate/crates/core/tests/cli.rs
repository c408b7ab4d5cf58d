use expcone::cli::run;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("expcone").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = call(args);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "1");
    v
}

fn write_problem(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn project_polar_point() {
    let v = json(&["project", "--point", "0,0,-1"]);
    assert_eq!(v["primal"], serde_json::json!([0.0, 0.0, 0.0]));
    assert_eq!(v["polar"], serde_json::json!([0.0, 0.0, -1.0]));
    assert_eq!(v["distance"], 1.0);
}

#[test]
fn classify_faces() {
    assert_eq!(json(&["classify", "--z", "0,1,0"])["face"], "FNegInf");
    let v = json(&["classify", "--z", "-1,-1,1"]);
    assert_eq!(v["face"], "FBeta");
    assert!((v["beta"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(json(&["classify", "--z", "0,0,1"])["face"], "FInf");
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        &["project", "--point", "1,2"][..],
        &["project", "--point", "a,b,c"],
        &["classify", "--z", "1,0,0"],
        &["project"],
        &["project", "--pint", "0,0,0"],
        &["frobnicate"],
        &["demo", "log", "--kmin", "9", "--kmax", "3"],
        &["gamma", "--z", "0,1,0", "--g", "power:3"],
    ] {
        let (code, out, err) = call(args);
        assert_eq!(code, 2, "{args:?}: {out} {err}");
        assert!(!err.is_empty());
    }
    let (_, _, err) = call(&["project", "--pint", "0,0,0"]);
    assert!(err.contains("Usage"), "{err}");
}

#[test]
fn help_exits_0() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("demo"));
}

#[test]
fn missing_problem_file() {
    let (code, _, err) = call(&["chain", "--problem", "/nonexistent/p.json"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn infeasible_problem_reports_non_convergence() {
    let dir = tempfile::tempdir().unwrap();
    // (t, 0, -1) misses K, and the chain oracle alternates forever.
    let p = write_problem(&dir, "p.json", r#"{"m":1,"L_basis":[[1,0,0]],"a":[0,0,-1]}"#);
    let (code, _, err) = call(&["verify", "--problem", &p, "--samples", "64"]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn chain_and_verify_on_entropic_problem() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_problem(&dir, "p.json", r#"{"m":1,"L_basis":[[1,0,0],[0,0,1]],"a":[0,0,0]}"#);
    let v = json(&["chain", "--problem", &p]);
    assert_eq!(v["regime"]["regime"], "Entropic");
    assert_eq!(v["chain"]["d_pps"], 1);

    let out = dir.path().join("v.json");
    let (code, stdout, err) =
        call(&["verify", "--problem", &p, "--samples", "512", "--seed", "9", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["seed"], 9);
    assert_eq!(v["report"]["seed"], 9);
    assert_eq!(v["report"]["tight"], true);
}

#[test]
fn same_seed_same_output() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_problem(&dir, "p.json", r#"{"m":1,"L_basis":[[1,0,0],[0,1,0]],"a":[0,0,0]}"#);
    let a = call(&["verify", "--problem", &p, "--samples", "256", "--seed", "4"]);
    let b = call(&["verify", "--problem", &p, "--samples", "256", "--seed", "4"]);
    assert_eq!(a.0, 0);
    assert_eq!(a, b);
}

fn csv(args: &[&str]) -> Vec<[f64; 4]> {
    let (code, out, err) = call(args);
    assert_eq!(code, 0, "{err}");
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("k,lhs,dK,ratio"));
    lines
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
            [v[0], v[1], v[2], v[3]]
        })
        .collect()
}

#[test]
fn entropic_demo_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("entropic.csv");
    let (code, _, err) = call(&["demo", "entropic", "--kmax", "1000000", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.starts_with("k,lhs,dK,ratio\n"));
    let rows = csv(&["demo", "entropic", "--kmax", "1000000"]);
    assert_eq!(rows.first().unwrap()[0], 10.0);
    assert_eq!(rows.last().unwrap()[0], 1e6);
    for r in rows {
        assert_eq!(r[1], r[0].ln() / r[0]);
        assert!(r[2] <= 1.0 / r[0]);
        assert!((0.5..=4.0).contains(&r[3]), "{r:?}");
    }
}

#[test]
fn other_demos() {
    let beta = csv(&["demo", "beta", "--beta", "1"]);
    let last = beta.last().unwrap();
    assert!((last[3] / 3f64.powf(-0.75) - 1.0).abs() < 0.01);
    for r in csv(&["demo", "log"]) {
        assert!((0.8..=1.2).contains(&r[3]), "{r:?}");
    }
    let nh = csv(&["demo", "nonholder", "--alpha", "0.25"]);
    // The ratio peaks near k = (1 - α)/α = 3 before it decays.
    assert!(nh[2..].windows(2).all(|w| w[1][3] < w[0][3]));
    assert!(nh.last().unwrap()[3] < 1e-4);
    let kl = csv(&["demo", "kl", "--kmax", "1e4"]);
    assert!(kl.windows(2).all(|w| w[1][3] <= w[0][3]));
    let neg = csv(&["demo", "beta", "--beta", "-2", "--kmax", "1000"]);
    assert!(neg.iter().all(|r| r[3].is_finite()));
}

#[test]
fn gamma_and_frf() {
    let v = json(&["gamma", "--z", "0,1,1", "--g", "identity"]);
    assert!(v["estimate"]["gamma_hat"].as_f64().unwrap() >= 1.0 / 8f64.sqrt() - 0.01);
    let v = json(&["frf", "--z", "-1,-1,1", "--eval", "0,1"]);
    assert_eq!(v["value"], 0.0);
    assert_eq!(v["g"]["kind"], "Power");
}
