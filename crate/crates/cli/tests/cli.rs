//! End-to-end tests of the `coincirc` binary: output contents, exit codes,
//! and file layouts for each subcommand.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_coincirc"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    if dir.exists() {
        std::fs::remove_dir_all(&dir).unwrap();
    }
    dir
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "expected success for {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn exit_code(args: &[&str]) -> i32 {
    bin().args(args).output().expect("binary runs").status.code().unwrap()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const TD_PARAMS: &str = "0.714,0.891,0.766,0.107,0.419";

#[test]
fn evaluate_td_reference_circuit() {
    let out = run_ok(&["evaluate", "--params", TD_PARAMS]);
    let doc = stdout_json(&out);
    let v = doc["v"].as_array().unwrap();
    assert!((v[0].as_f64().unwrap() - 0.500131522).abs() < 1e-9);
    assert!((v[1].as_f64().unwrap() - 0.166644478).abs() < 1e-9);
    assert!(doc["kl_nats"].as_f64().unwrap() < 1e-6);
    assert!((doc["fairness"].as_f64().unwrap() - 1.131).abs() < 1e-12);
    assert!((doc["energy_fj"].as_f64().unwrap() - 145.49).abs() < 1e-9);
}

#[test]
fn evaluate_fitness_recombines_from_its_own_components() {
    let out = run_ok(&["evaluate", "--params", "0.5,0.5,0.5,0.5,0.5"]);
    let doc = stdout_json(&out);
    assert!((doc["kl_nats"].as_f64().unwrap() - 0.130812035941137).abs() < 1e-12);
    let recombined = doc["weights"]["w1"].as_f64().unwrap() * doc["kl_nats"].as_f64().unwrap()
        + doc["weights"]["w2"].as_f64().unwrap() * doc["fairness"].as_f64().unwrap()
        + doc["weights"]["w3"].as_f64().unwrap() * doc["energy_fj"].as_f64().unwrap();
    assert_eq!(recombined, doc["fitness"].as_f64().unwrap());
}

#[test]
fn evaluate_rejects_out_of_range_params() {
    assert_eq!(exit_code(&["evaluate", "--params", "1.2,0.5,0.5,0.5,0.5"]), 2);
    assert_eq!(exit_code(&["evaluate", "--params", "0.5,0.5,0.5,0.5"]), 2);
}

#[test]
fn solve_reports_the_overconstrained_die() {
    let out = run_ok(&["solve", "--target", "0.5,0.1666667,0.1666667,0.1666667"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["solvable"], serde_json::Value::Bool(false));
    assert!(doc["p"].is_null());
    let residual = doc["consistency_residual"].as_f64().unwrap();
    assert!((residual - 1.0 / 18.0).abs() < 1e-6, "residual {residual}");
    assert!(doc["message"].as_str().unwrap().contains("no independent two-coin solution"));
}

#[test]
fn solve_factors_product_targets() {
    let out = run_ok(&["solve", "--target", "0.25,0.25,0.25,0.25"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["p"].as_f64().unwrap(), 0.5);
    assert_eq!(doc["q"].as_f64().unwrap(), 0.5);

    let out = run_ok(&["solve", "--target", "0.42,0.28,0.18,0.12"]);
    let doc = stdout_json(&out);
    assert!((doc["p"].as_f64().unwrap() - 0.7).abs() < 1e-9);
    assert!((doc["q"].as_f64().unwrap() - 0.6).abs() < 1e-9);
}

#[test]
fn solve_rejects_non_distributions() {
    assert_eq!(exit_code(&["solve", "--target", "0.9,0.9,0.9,0.9"]), 2);
    assert_eq!(exit_code(&["solve", "--target", "0.5,0.5,-0.25,0.25"]), 2);
}

#[test]
fn optimize_writes_best_history_and_manifest() {
    let dir = tmp("optimize");
    run_ok(&[
        "optimize", "--device", "td", "--generations", "40", "--population", "20",
        "--seed", "5", "--out", dir.to_str().unwrap(),
    ]);
    let best: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("best.json")).unwrap()).unwrap();
    assert_eq!(best["seed"], serde_json::json!(5));
    assert_eq!(best["config"]["generations"], serde_json::json!(40));
    let recombined = best["weights"]["w1"].as_f64().unwrap() * best["kl_nats"].as_f64().unwrap()
        + best["weights"]["w2"].as_f64().unwrap() * best["fairness"].as_f64().unwrap()
        + best["weights"]["w3"].as_f64().unwrap() * best["energy_fj"].as_f64().unwrap();
    let fitness = best["fitness"].as_f64().unwrap();
    assert!((recombined - fitness).abs() <= 1e-12 * fitness.abs());

    let history = std::fs::read_to_string(dir.join("history.csv")).unwrap();
    let mut lines = history.lines();
    assert_eq!(
        lines.next().unwrap(),
        "generation,best_fitness,best_kl_nats,best_fairness,best_energy_fj,w,p1,q1,p2,q2"
    );
    assert_eq!(lines.count(), 40);

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["subcommand"], serde_json::json!("optimize"));
    assert_eq!(manifest["master_seed"], serde_json::json!(5));
    assert_eq!(manifest["outputs"], serde_json::json!(["best.json", "history.csv"]));
}

#[test]
fn sample_writes_report_and_histogram() {
    let dir = tmp("sample");
    run_ok(&[
        "sample", "--params", TD_PARAMS, "--n", "500", "--seed", "3",
        "--out", dir.to_str().unwrap(),
    ]);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("sample.json")).unwrap()).unwrap();
    let counts: Vec<u64> =
        report["counts"].as_array().unwrap().iter().map(|c| c.as_u64().unwrap()).collect();
    assert_eq!(counts.iter().sum::<u64>(), 500);
    assert_eq!(report["count_hidden_energy"], serde_json::Value::Bool(true));
    assert!(report["exact_kl_nats"].as_f64().unwrap() < 1e-6);

    let csv = std::fs::read_to_string(dir.join("sample.csv")).unwrap();
    assert!(csv.starts_with("outcome,count,frequency,target\n"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn sample_hidden_energy_flag_changes_totals() {
    let with_dir = tmp("sample_hidden_on");
    let without_dir = tmp("sample_hidden_off");
    run_ok(&["sample", "--params", TD_PARAMS, "--n", "200", "--seed", "8",
             "--out", with_dir.to_str().unwrap()]);
    run_ok(&["sample", "--params", TD_PARAMS, "--n", "200", "--seed", "8",
             "--count-hidden-energy", "false", "--out", without_dir.to_str().unwrap()]);
    let read = |d: &Path| -> serde_json::Value {
        serde_json::from_str(&std::fs::read_to_string(d.join("sample.json")).unwrap()).unwrap()
    };
    let on = read(&with_dir);
    let off = read(&without_dir);
    // same draws, so the counts agree and only the energy accounting differs
    assert_eq!(on["counts"], off["counts"]);
    assert!(on["total_energy_fj"].as_f64().unwrap() > off["total_energy_fj"].as_f64().unwrap());
}

#[test]
fn sweep_writes_expected_rows() {
    let dir = tmp("sweep");
    run_ok(&[
        "sweep", "--params", TD_PARAMS, "--sizes", "10,50", "--trials", "2",
        "--seed", "1", "--out", dir.to_str().unwrap(),
    ]);
    let csv = std::fs::read_to_string(dir.join("sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "device,sample_size,trial,substream_seed,kl_nats,total_energy_fj,count0,count1,count2,count3"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("td,10,0,"));
    assert!(rows[3].starts_with("td,50,1,"));
}

#[test]
fn sweep_rejects_bad_sizes() {
    let dir = tmp("sweep_bad");
    let code = exit_code(&[
        "sweep", "--params", TD_PARAMS, "--sizes", "50,10",
        "--out", dir.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(!dir.exists(), "no partial outputs on validation failure");
}

#[test]
fn weight_sweep_writes_all_rep_rows() {
    let dir = tmp("weight_sweep");
    run_ok(&[
        "weight-sweep", "--device", "mtj_she", "--population", "10", "--generations", "5",
        "--w1-grid", "75,7500", "--w2-grid", "0.005", "--w3-grid", "0.5",
        "--reps", "2", "--seed", "4", "--out", dir.to_str().unwrap(),
    ]);
    let csv = std::fs::read_to_string(dir.join("weight_sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "varied_omega,omega1,omega2,omega3,rep,best_kl_nats,best_energy_fj"
    );
    // (2 + 1 + 1) grid points x 2 reps
    assert_eq!(lines.count(), 8);
}

#[test]
fn runs_writes_one_row_per_run() {
    let dir = tmp("runs");
    run_ok(&[
        "runs", "--device", "td", "--runs", "3", "--population", "10",
        "--generations", "5", "--seed", "2", "--out", dir.to_str().unwrap(),
    ]);
    let csv = std::fs::read_to_string(dir.join("runs.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "device,run,seed,w,p1,q1,p2,q2,kl_nats,energy_fj,fitness"
    );
    assert_eq!(lines.count(), 3);
}

#[test]
fn plot_renders_both_csv_kinds() {
    let data = tmp("plot_inputs");
    std::fs::create_dir_all(&data).unwrap();

    let sweep_dir = tmp("plot_sweep_src");
    run_ok(&["sweep", "--params", TD_PARAMS, "--sizes", "10,100", "--trials", "3",
             "--seed", "6", "--out", sweep_dir.to_str().unwrap()]);
    let out1 = tmp("plot_sweep");
    run_ok(&["plot", "--input", sweep_dir.join("sweep.csv").to_str().unwrap(),
             "--out", out1.to_str().unwrap()]);
    let svg = std::fs::read_to_string(out1.join("plot.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("polyline"));

    let sample_dir = tmp("plot_sample_src");
    run_ok(&["sample", "--params", TD_PARAMS, "--n", "100", "--seed", "6",
             "--out", sample_dir.to_str().unwrap()]);
    let out2 = tmp("plot_hist");
    run_ok(&["plot", "--input", sample_dir.join("sample.csv").to_str().unwrap(),
             "--out", out2.to_str().unwrap()]);
    let svg = std::fs::read_to_string(out2.join("plot.svg")).unwrap();
    assert!(svg.contains("rect") && svg.contains("target"));
}

#[test]
fn plot_fails_cleanly_on_bad_input() {
    let data = tmp("plot_bad");
    std::fs::create_dir_all(&data).unwrap();
    let empty = data.join("empty.csv");
    std::fs::write(&empty, "outcome,count,frequency,target\n").unwrap();
    let out = tmp("plot_bad_out");
    assert_eq!(
        exit_code(&["plot", "--input", empty.to_str().unwrap(), "--out", out.to_str().unwrap()]),
        3
    );
    assert!(!out.exists(), "no output directory on failure");

    assert_eq!(
        exit_code(&["plot", "--input", data.join("missing.csv").to_str().unwrap(),
                    "--out", out.to_str().unwrap()]),
        3
    );
}

#[test]
fn unknown_device_name_is_a_usage_error() {
    let dir = tmp("unknown_device");
    assert_eq!(
        exit_code(&["sample", "--params", TD_PARAMS, "--device", "nvram",
                    "--out", dir.to_str().unwrap()]),
        2
    );
    // a path that does not exist is a data error instead
    assert_eq!(
        exit_code(&["sample", "--params", TD_PARAMS, "--device", "./no/such.json",
                    "--out", dir.to_str().unwrap()]),
        3
    );
}

#[test]
fn optimize_at_full_scale_reaches_low_kl() {
    let dir = tmp("optimize_full");
    run_ok(&[
        "optimize", "--device", "td", "--generations", "1000", "--population", "100",
        "--w1", "7500", "--w2", "0.005", "--w3", "0.5", "--seed", "42",
        "--out", dir.to_str().unwrap(),
    ]);
    let best: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("best.json")).unwrap()).unwrap();
    assert!(best["kl_nats"].as_f64().unwrap() <= 0.01);
}

#[test]
fn sample_she_reference_matches_multinomial_bands() {
    let dir = tmp("sample_she");
    run_ok(&[
        "sample", "--params", "0.306,0.448,0.439,0.746,0.749", "--device", "mtj_she",
        "--n", "2000", "--seed", "12", "--out", dir.to_str().unwrap(),
    ]);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("sample.json")).unwrap()).unwrap();
    let expected = [0.447956908_f64, 0.206855092, 0.206183092, 0.139004908];
    for (i, v) in expected.iter().enumerate() {
        let freq = report["frequencies"][i].as_f64().unwrap();
        let sigma = (v * (1.0 - v) / 2000.0).sqrt();
        assert!((freq - v).abs() < 3.0 * sigma, "bin {i}: {freq} vs {v}");
    }
}

#[test]
fn thread_cap_does_not_change_results() {
    let a = tmp("threads_default");
    let b = tmp("threads_capped");
    run_ok(&["sweep", "--params", TD_PARAMS, "--sizes", "10,100", "--trials", "4",
             "--seed", "77", "--out", a.to_str().unwrap()]);
    run_ok(&["--threads", "1", "sweep", "--params", TD_PARAMS, "--sizes", "10,100",
             "--trials", "4", "--seed", "77", "--out", b.to_str().unwrap()]);
    assert_eq!(
        std::fs::read_to_string(a.join("sweep.csv")).unwrap(),
        std::fs::read_to_string(b.join("sweep.csv")).unwrap()
    );
}

#[test]
fn custom_device_config_loads_from_path() {
    let data = tmp("custom_device");
    std::fs::create_dir_all(&data).unwrap();
    let path = data.join("device.json");
    std::fs::write(
        &path,
        r#"{"name":"custom","model":"linear_heads_tails","energy_heads_fj":5.0,"energy_tails_fj":1.0}"#,
    )
    .unwrap();
    let out = run_ok(&["evaluate", "--params", "0.5,1,1,1,1", "--device", path.to_str().unwrap()]);
    let doc = stdout_json(&out);
    assert_eq!(doc["device"]["name"], serde_json::json!("custom"));
    assert_eq!(doc["energy_fj"].as_f64().unwrap(), 20.0);

    // malformed document -> data error
    std::fs::write(&path, r#"{"name":"x","model":"constant"}"#).unwrap();
    assert_eq!(exit_code(&["evaluate", "--params", "0.5,1,1,1,1",
                           "--device", path.to_str().unwrap()]), 3);
}
