use std::process::{Command, Output};

use cuemom::parallel::{self, Progress};
use cuemom_core::mc::{estimate_moment, moment_sample, McConfig};
use num_complex::Complex64;
use serde_json::Value;

fn cuemom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuemom")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn without_timestamp(out: &Output) -> Value {
    let mut v = json(out);
    v.as_object_mut().unwrap().remove("timestamp").expect("timestamp present");
    v
}

#[test]
fn exact_first_moment_on_the_circle() {
    let out = cuemom(&["exact", "--N", "2", "--s", "1", "--u", "1", "--mode", "exact"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let first = &v["results"][0];
    assert_eq!(first["value"]["num"], "5");
    assert_eq!(first["value"]["den"], "1");
    assert_eq!(first["text"], "5");
    assert_eq!(v["config"]["N"], 2);
    assert_eq!(v["command"], "exact");
    assert!(v["version"].is_string());
}

#[test]
fn exact_rationals_are_num_den_strings() {
    let out = cuemom(&["exact", "--N", "3", "--s", "1", "--r", "1/2"]);
    let value = &json(&out)["results"][0]["value"];
    // 1 + 4/4 + 9/16
    assert_eq!(value["num"], "41");
    assert_eq!(value["den"], "16");
    let csv = cuemom(&["exact", "--N", "3", "--s", "1", "--r", "1/2", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("moment,41/16,"));
}

#[test]
fn microscopic_coefficient_with_label() {
    let out = cuemom(&["asympt", "--regime", "micro", "--s", "1", "--c", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let first = &v["results"][0];
    assert!((first["value"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert!(first["formula"].as_str().unwrap().contains("b_s(c)"));
    let exact = v["results"].as_array().unwrap().iter().find(|e| e["name"] == "coefficient_exact").unwrap();
    assert_eq!(exact["text"], "1/3");
}

#[test]
fn compare_exact_and_monte_carlo() {
    let args = ["compare", "--routes", "exact,mc", "--N", "6", "--s", "1", "--r", "0.5", "--samples", "100000", "--seed", "7", "--quiet"];
    let out = cuemom(&args);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    let d = v["results"].as_array().unwrap().last().unwrap().clone();
    assert!(d["se_normalized"].as_f64().unwrap() <= 4.0);
}

#[test]
fn compare_exact_routes_agree_exactly() {
    let out = cuemom(&["compare", "--routes", "exact,structure", "--N", "5", "--s", "2", "--r", "3/4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"][2]["criterion"], "exact rational equality");
    let out = cuemom(&["compare", "--routes", "closed,exact", "--N", "7", "--s", "1", "--r", "1/3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn failed_comparison_has_its_own_exit_code() {
    // finite N against the N → ∞ limit at the default tolerance
    let out = cuemom(&["compare", "--routes", "exact,limit", "--N", "10", "--s", "1", "--r", "0.5", "--mode", "float"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn usage_and_capability_exit_codes() {
    assert_eq!(cuemom(&["exact", "--N", "3"]).status.code(), Some(1));
    assert_eq!(cuemom(&["exact", "--N", "3", "--s", "1", "--bogus"]).status.code(), Some(1));
    assert_eq!(cuemom(&["asympt", "--regime", "global", "--s", "1", "--r", "1.5"]).status.code(), Some(1));
    assert_eq!(cuemom(&["nonsense"]).status.code(), Some(1));
    let cap = cuemom(&["exact", "--N", "3", "--s", "9", "--u", "1/2"]);
    assert_eq!(cap.status.code(), Some(2));
    assert!(String::from_utf8(cap.stderr).unwrap().contains("capability"));
    assert_eq!(cuemom(&["zeta", "--quantity", "divisor-table", "--n-max", "2000000"]).status.code(), Some(2));
    assert_eq!(cuemom(&["--help"]).status.code(), Some(0));
}

#[test]
fn reports_are_byte_identical_apart_from_timestamp() {
    let args = ["mc", "--N", "12", "--s", "1.5", "--r", "0.6", "--samples", "3000", "--seed", "11", "--quiet"];
    let a = cuemom(&args);
    let b = cuemom(&args);
    assert_eq!(without_timestamp(&a), without_timestamp(&b));
    let strip = |o: &Output| {
        let text = String::from_utf8(o.stdout.clone()).unwrap();
        text.lines().filter(|l| !l.trim_start().starts_with("\"timestamp\"")).collect::<Vec<_>>().join("\n")
    };
    assert_eq!(strip(&a), strip(&b));
    let mut threaded: Vec<&str> = args.to_vec();
    threaded.extend(["--threads", "3"]);
    assert_eq!(strip(&a), strip(&cuemom(&threaded)));
}

#[test]
fn thread_count_comes_from_the_environment() {
    let args = ["zeros", "--N", "20", "--samples", "500", "--seed", "2", "--format", "csv", "--quiet"];
    let base = cuemom(&args);
    let env = Command::new(env!("CARGO_BIN_EXE_cuemom")).args(args).env("CUEMOM_THREADS", "2").output().unwrap();
    assert_eq!(env.status.code(), Some(0));
    assert_eq!(base.stdout, env.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_cuemom")).args(args).env("CUEMOM_THREADS", "many").output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn progress_goes_to_stderr_only() {
    let out = cuemom(&["mc", "--N", "8", "--r", "0.5", "--samples", "20000", "--format", "csv"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("batches"));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains("batches"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn parallel_estimate_equals_sequential() {
    let z = Complex64::new(0.2, 0.5);
    let config = McConfig::new(5, 4500).unwrap().with_batch_size(400).unwrap();
    let sequential = estimate_moment(9, 2.0, z, &config).unwrap();
    for threads in [1, 2, 4] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let progress = Progress::new("test", config.batches(), false);
        let par = pool
            .install(|| parallel::estimate(9, &config, false, |x| moment_sample(x, 2.0, z), &progress))
            .unwrap();
        assert_eq!(par, sequential);
    }
}

#[test]
fn zero_sweep_tracks_the_limit_density() {
    let out = cuemom(&["zeros", "--N", "40", "--samples", "2000", "--seed", "4", "--radii", "0.5,0.7", "--quiet"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for row in rows {
        let mean = row["value"].as_f64().unwrap();
        let se = row["std_error"].as_f64().unwrap();
        let limit = row["limit"].as_f64().unwrap();
        assert!((mean - limit).abs() < 5.0 * se + 0.05 * limit, "{row}");
        let jensen = row["log_integral"].as_f64().unwrap();
        let jensen_limit = row["log_integral_limit"].as_f64().unwrap();
        assert!((jensen - jensen_limit).abs() < 0.1 * jensen_limit, "{row}");
    }
}
