use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn adelic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adelic")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn zeros_copy(dir: &Path) -> PathBuf {
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/zeros_10k.txt");
    let dst = dir.join("zeros.txt");
    fs::copy(src, &dst).unwrap();
    dst
}

const CURVE: &str = r#"{"p":2,"k":1,"modulus":[0,1],"monomials":[
  {"coeff":[1],"ex":0,"ey":2,"ez":1},{"coeff":[1],"ex":0,"ey":1,"ez":2},{"coeff":[1],"ex":3,"ey":0,"ez":0}]}"#;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn thermo_grid_is_monotone_and_matches_oracle() {
    let o = adelic(&["thermo", "--p", "3", "--beta", "1.2", "--grid", "27", "--oracle"]);
    assert_eq!(code(&o), 0);
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let headers = r.headers().unwrap().clone();
    assert_eq!(&headers, vec!["lambda_num", "lambda_den", "beta", "Zp", "tail_bound", "zeta_p", "oracle"]);
    let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 27);
    let mut prev = 0.0;
    for row in &rows {
        let z: f64 = row[3].parse().unwrap();
        let oracle: f64 = row[6].parse().unwrap();
        assert!(z >= prev);
        assert!((z - oracle).abs() <= 1e-12 * z);
        prev = z;
    }
}

#[test]
fn thermo_rejects_the_pole() {
    let o = adelic(&["thermo", "--p", "3", "--beta", "1", "--grid", "5"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("pole"));
    assert_eq!(code(&adelic(&["thermo", "--p", "4", "--beta", "2", "--lambda", "2"])), 2);
    assert_eq!(code(&adelic(&["thermo", "--p", "3", "--beta", "2", "--lambda", "7/2"])), 2);
    assert_eq!(code(&adelic(&["thermo", "--p", "3"])), 2);
}

#[test]
fn digits_command() {
    let o = adelic(&["digits", "--p", "3", "--lambda", "2", "--k", "4"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["digits"], serde_json::json!([1, 2, 2, 2, 2]));
}

#[test]
fn ff_specs() {
    let dir = tempfile::tempdir().unwrap();
    let curve = write(dir.path(), "curve.json", CURVE);
    let o = adelic(&["ff", &curve]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["P"], serde_json::json!([1, 0, 2]));
    assert!(v["rh_deviation"].as_f64().unwrap() < 1e-10);

    let g0 = write(dir.path(), "g0.json", r#"{"q":3,"g":0,"counts":[4]}"#);
    let v: serde_json::Value = serde_json::from_slice(&adelic(&["ff", &g0]).stdout).unwrap();
    assert_eq!(v["P"], serde_json::json!([1]));

    let tampered = write(dir.path(), "bad.json", r#"{"q":2,"g":1,"counts":[3,8]}"#);
    assert_eq!(code(&adelic(&["ff", &tampered])), 1);
    let outside = write(dir.path(), "bad2.json", r#"{"q":2,"g":1,"counts":[6]}"#);
    assert_eq!(code(&adelic(&["ff", &outside])), 1);
    let garbage = write(dir.path(), "bad3.json", "{not json");
    assert_eq!(code(&adelic(&["ff", &garbage])), 2);
    assert_eq!(code(&adelic(&["ff", "/nonexistent/spec.json"])), 2);
}

#[test]
fn points_command() {
    let dir = tempfile::tempdir().unwrap();
    let curve = write(dir.path(), "curve.json", CURVE);
    let v: serde_json::Value = serde_json::from_slice(&adelic(&["points", &curve, "--n", "2"]).stdout).unwrap();
    assert_eq!(v["count"], 9);
    assert_eq!(code(&adelic(&["points", &curve, "--n", "2", "--modulus", "1,0,1"])), 2);
}

#[test]
fn explicit_command() {
    let dir = tempfile::tempdir().unwrap();
    let zeros = zeros_copy(dir.path());
    let z = zeros.to_str().unwrap();
    let o = adelic(&["explicit", "--zeros", z, "--num-zeros", "1000", "--tol", "1e-3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    // the pairing needs c_∞, which is absent until calibrated
    let o = adelic(&["explicit", "--zeros", z, "--num-zeros", "1000", "--positivity"]);
    assert_eq!(code(&o), 2);
    let o = adelic(&["explicit", "--zeros", z, "--num-zeros", "1000", "--calibrate", "--positivity", "--fubini"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("zeros.txt.calibration.json").exists());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let at1 = v["fubini"]["theta_mellin_at_1"]["closed_form"].as_f64().unwrap();
    assert!((at1 - 0.125).abs() < 1e-6);
    for row in v["positivity"].as_array().unwrap() {
        assert!(row["spectral"].as_f64().unwrap() >= -1e-12);
    }

    let o = adelic(&["explicit", "--zeros", z, "--num-zeros", "1000", "--sweep", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("N,discrepancy\n"));

    let comma = adelic(&["explicit", "--zeros", z, "--num-zeros", "300", "--support", "3,9"]);
    let spaced = adelic(&["explicit", "--zeros", z, "--num-zeros", "300", "--support", "3", "9"]);
    assert_eq!(code(&comma), 0);
    assert_eq!(comma.stdout, spaced.stdout);
    assert_eq!(code(&adelic(&["explicit", "--zeros", z, "--support", "3"])), 2);

    assert_eq!(code(&adelic(&["explicit", "--zeros", "/nonexistent/zeros.txt"])), 2);
    let bad = write(dir.path(), "bad.txt", "14.1\nabc\n");
    assert_eq!(code(&adelic(&["explicit", "--zeros", &bad])), 2);
    // an impossible tolerance is reported as an inconsistency
    assert_eq!(code(&adelic(&["explicit", "--zeros", z, "--num-zeros", "100", "--tol", "1e-30"])), 1);
}

#[test]
fn demos() {
    let o = adelic(&["bc", "--n", "2", "--level", "4"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rho_images"].as_array().unwrap().len(), 4);
    assert_eq!(v["idempotent"]["squares_to_itself"], true);
    assert_eq!(code(&adelic(&["bc", "--n", "2", "--level", "4", "--u", "2"])), 2);

    let o = adelic(&["semilocal", "--mode", "quad", "--point", "1.7", "3.2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["fiber"]["variant"], "Generic");
    assert!((v["fiber"]["value"].as_f64().unwrap() - 5.44).abs() < 1e-12);

    let o = adelic(&["semilocal", "--mode", "padic", "--p", "3", "--xval", "1", "--y", "2"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["holonomy"]["holds"], true);
    assert_eq!(code(&adelic(&["semilocal", "--mode", "padic", "--p", "4", "--xval", "1", "--y", "2"])), 2);
    assert_eq!(code(&adelic(&["semilocal", "--mode", "padic", "--p", "3", "--xval", "1", "--xunit", "3", "--y", "2"])), 2);
}

#[test]
fn identical_runs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let zeros = zeros_copy(dir.path());
    let curve = write(dir.path(), "curve.json", CURVE);
    let runs: Vec<Vec<String>> = vec![
        vec!["thermo", "--p", "5", "--beta", "2", "--grid", "40", "--oracle"],
        vec!["thermo", "--p", "2", "--beta", "3", "--grid", "8", "--format", "json"],
        vec!["ff", &curve],
        vec!["bc", "--n", "3", "--level", "6"],
        vec!["explicit", "--zeros", zeros.to_str().unwrap(), "--num-zeros", "500", "--sweep"],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(String::from).collect())
    .collect();
    for args in &runs {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = adelic(&a);
        let second = adelic(&a);
        assert_eq!(code(&first), 0, "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
    // --output writes the same bytes as stdout
    let out = dir.path().join("t.csv");
    let o = adelic(&["thermo", "--p", "3", "--beta", "2", "--grid", "9", "--output", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let stdout = adelic(&["thermo", "--p", "3", "--beta", "2", "--grid", "9"]).stdout;
    assert_eq!(fs::read(&out).unwrap(), stdout);
}
