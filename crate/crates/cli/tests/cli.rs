use lcong::padic::Verdict;
use lcong::pipeline::{verdicts_from_fields, RowRecord};
use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn cache_dir() -> PathBuf {
    let d = std::env::temp_dir().join(format!("lcong-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn lcong(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcong"))
        .args(args)
        .env("LCONG_CACHE_DIR", cache_dir())
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn first_coeffs(form: &str, n: &str) -> Vec<i64> {
    let out = lcong(&["coeffs", "--form", form, "--n", n, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    json(&out)[0]["first"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().parse().unwrap()).collect()
}

#[test]
fn coeffs_examples() {
    let a = first_coeffs("5w4", "10");
    assert_eq!(a[9], a[1] * a[4]);
    assert_eq!(a[9], 20);
    assert_eq!(first_coeffs("121w4", "16")[15], 64);
    assert_eq!(first_coeffs("7w4", "1"), vec![1]);
    assert!(cache_dir().join("5w4.qser").exists());
}

fn rows(args: &[&str]) -> (Option<i32>, Vec<RowRecord>) {
    let mut all = vec!["table-row", "--format", "json"];
    all.extend_from_slice(args);
    let out = lcong(&all);
    let recs: Vec<RowRecord> = serde_json::from_slice(&out.stdout).expect("row records");
    (out.status.code(), recs)
}

#[test]
fn table_row_examples() {
    let (code, r) = rows(&["--form", "5w4", "--m", "3", "--n", "1"]);
    assert_eq!(code, Some(0));
    assert_eq!(r[0].lstar_rho.exact.as_deref(), Some("-2^4*5^4*13*41"));
    assert_eq!((r[0].residue_sigma.as_str(), r[0].residue_rho.as_str()), ("2+O(3)", "2+O(3)"));

    let (code, r) = rows(&["--form", "7w4", "--m", "28", "--n", "1"]);
    assert_eq!(code, Some(0));
    assert_eq!(r[0].lstar_rho.exact.as_deref(), Some("2^4*5*7^2*13"));
    assert_eq!(r[0].residue_sigma, "1*3^1+O(3^2)");
    assert_eq!(r[0].residue_rho, "1*3^1+O(3^2)");

    let (code, r) = rows(&["--form", "5w4", "--m", "5", "--n", "2"]);
    assert_eq!(code, Some(0));
    assert_eq!((r[0].residue_sigma.as_str(), r[0].residue_rho.as_str()), ("1*3^1+O(3^2)", "0"));

    let (code, r) = rows(&["--form", "5w6", "--m", "5", "--n", "2,3"]);
    assert_eq!(code, Some(0));
    assert_eq!((r[0].residue_sigma.as_str(), r[0].residue_rho.as_str()), ("0", "2*3^1+O(3^2)"));
    assert_eq!((r[1].residue_sigma.as_str(), r[1].residue_rho.as_str()), ("1*3^1+O(3^2)", "0"));
}

#[test]
fn json_round_trip_reproduces_verdicts() {
    let (_, recs) = rows(&["--form", "7w4", "--m", "2,3"]);
    assert!(!recs.is_empty());
    for r in &recs {
        let text = serde_json::to_string(r).unwrap();
        let back: RowRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(verdicts_from_fields(&back), (r.verdict_mod_p, r.verdict_mod_p2));
        assert_eq!(r.verdict_mod_p2, Verdict::Holds);
    }
}

#[test]
fn exit_codes() {
    let refused = lcong(&["table-row", "--form", "5w4", "--m", "2", "--budget", "1000"]);
    assert_eq!(refused.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("needs"));

    let low = lcong(&["table-row", "--form", "5w4", "--m", "2", "--n", "1", "--digits", "8"]);
    assert_eq!(low.status.code(), Some(2));

    let bad = lcong(&["table-row", "--form", "5w4", "--m", "2", "--periods", "canonical"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn verify_suite_on_level_seven() {
    let out = lcong(&["verify", "--form", "7w4", "--m", "2,3,7", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let checks = json(&out);
    let suites: Vec<&str> = checks.as_array().unwrap().iter().map(|c| c["suite"].as_str().unwrap()).collect();
    for s in ["root-number", "congruence", "b-table"] {
        assert!(suites.contains(&s), "{s} missing");
    }
}

#[test]
fn root_numbers_match() {
    let out = lcong(&["root-numbers", "--form", "121w4", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("121w4 sigma_3\tPass\tclosed Some(-1)"), "{text}");
}

#[test]
fn output_is_thread_count_independent() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_lcong"))
            .args(["lambda", "--form", "5w4", "--rep", "rho", "--m", "2", "--s", "1,1.5,2.25", "--digits", "25"])
            .env("LCONG_CACHE_DIR", cache_dir())
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    let one = run("1");
    assert!(!one.is_empty());
    assert_eq!(one, run("4"));
}
