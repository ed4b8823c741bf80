use std::process::{Command, Output};

use serde_json::Value;

fn msrs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msrs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

const SD44: [&str; 6] = ["--family", "sd", "--n", "4", "--c", "4"];

fn with<'a>(cmd: &'a str, model: &[&'a str], rest: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd];
    v.extend_from_slice(model);
    v.extend_from_slice(rest);
    v
}

#[test]
fn classify_json_reports_bands_and_boundaries() {
    let o = msrs(&with("classify", &SD44, &["--out", "json"]));
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let bands: Vec<(u64, u64)> = v["bands"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| (b["e"].as_u64().unwrap(), b["s"].as_u64().unwrap()))
        .collect();
    assert_eq!(bands, [(1, 1), (9, 5), (15, 4)]);
    let bs = v["boundaries"].as_array().unwrap();
    assert_eq!(bs.len(), 2);
    assert!(bs[0]["approx"].as_str().unwrap().starts_with("1.30333134"));
    assert_eq!(bs[1]["exact"], Value::Bool(true));
    assert_eq!(bs[1]["lo"], "4");
    assert!(bs.iter().all(|b| b["flag"] == "verified_change"));
    assert_eq!(v["diagnostics"]["B_degree"], 68);
    assert!(v.get("timing").is_none());
}

#[test]
fn critical_polynomial_coefficients_round_trip() {
    let v = json(&msrs(&with("classify", &SD44, &["--out", "json"])));
    let coeffs: Vec<num_bigint::BigInt> = v["B"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap().parse().unwrap())
        .collect();
    assert_eq!(coeffs.len(), 69);
    // B vanishes at σ = 4
    let at4 = coeffs
        .iter()
        .rev()
        .fold(num_bigint::BigInt::from(0), |acc, c| acc * 4 + c);
    assert_eq!(at4, 0.into());
}

#[test]
fn timing_flag_adds_phases() {
    let v = json(&msrs(&with("classify", &SD44, &["--out", "json", "--timing"])));
    for k in ["reduction", "elimination", "isolation", "counting"] {
        assert!(v["timing"][k].as_f64().unwrap() >= 0.0);
    }
}

#[test]
fn model_file_matches_family_flags() {
    let dir = std::env::temp_dir().join(format!("msrs-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sd33.json");
    std::fs::write(&path, r#"{"family":"simultaneous_decision","n":3,"c":"3"}"#).unwrap();
    let a = msrs(&["classify", "--model", path.to_str().unwrap(), "--out", "csv"]);
    let b = msrs(&["classify", "--family", "sd", "--n", "3", "--c", "3", "--out", "csv"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn count_text_and_csv() {
    let o = msrs(&with("count", &SD44, &["--sigma", "2"]));
    assert_eq!(stdout(&o), "e=9 s=5\n");
    let o = msrs(&with("count", &SD44, &["--sigma", "5", "--out", "csv"]));
    assert_eq!(stdout(&o), "sigma,e,s\n5,15,4\n");
}

#[test]
fn count_on_a_boundary_is_refused() {
    // equilibria collide at σ = 4, so no certified count exists there
    let o = msrs(&with("count", &SD44, &["--sigma", "4", "--out", "json"]));
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["error"]["kind"], "degenerate_solution");
}

#[test]
fn sweep_csv_has_one_row_per_boundary() {
    let o = msrs(&[
        "sweep", "--family", "sd", "--n", "4", "--c-min", "3", "--c-max", "4", "--out", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(
        out.lines().next().unwrap(),
        "n,c,k,sigma,lo,hi,e_below,s_below,e_above,s_above,residual"
    );
    let c4: Vec<&Vec<&str>> = rows.iter().filter(|r| r[1] == "4").collect();
    assert_eq!(c4.len(), 2);
    // top boundary of c = n carries a vanishing residual
    let res: f64 = c4[1][10].parse().unwrap();
    assert!(res.abs() < 1e-4);
    assert_eq!(c4[1][9], "4");
    assert!(c4[0][10].is_empty());
}

#[test]
fn oracle_check_agrees() {
    let o = msrs(&[
        "oracle-check",
        "--family",
        "sd",
        "--n",
        "3",
        "--c",
        "2",
        "--starts",
        "500",
        "--out",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    for s in v["samples"].as_array().unwrap() {
        assert_eq!(s["match"], Value::Bool(true));
        assert!(s["violations"].as_array().unwrap().is_empty());
    }
}

#[test]
fn errors_are_structured() {
    let o = msrs(&["classify", "--family", "nope", "--n", "4", "--c", "4", "--out", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["error"]["kind"], "parse");

    let o = msrs(&with("count", &SD44, &["--sigma", "-1", "--out", "json"]));
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["error"]["kind"], "bad_parameter");

    let o = msrs(&["classify", "--family", "sd", "--c", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error [bad_parameter]"));

    let o = msrs(&["classify", "--model", "/nonexistent/model.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unverified_boundary_sets_exit_code() {
    let o = msrs(&[
        "classify", "--family", "bhlh", "--n", "3", "--K2", "1/10", "--a-t", "1", "--out", "json",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let v = json(&o);
    assert!(v["boundaries"]
        .as_array()
        .unwrap()
        .iter()
        .any(|b| b["flag"] == "kept_unverified"));
}
