use nslab::report::CampaignReport;
use std::fs;
use std::path::Path;
use std::process::Command;

fn nslab(out: &Path, args: &[&str]) -> i32 {
    let mut argv = vec!["nslab", "--out", out.to_str().unwrap()];
    argv.extend_from_slice(args);
    nslab_cli::run(argv)
}

fn report(dir: &Path, name: &str) -> CampaignReport {
    let text = fs::read_to_string(dir.join(format!("{name}.json"))).unwrap();
    CampaignReport::from_json(&text).unwrap()
}

#[test]
fn ledger_verify_writes_round_tripping_report() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(nslab(dir.path(), &["ledger", "verify"]), 0);
    let text = fs::read_to_string(dir.path().join("ledger_verify.json")).unwrap();
    let rep = CampaignReport::from_json(&text).unwrap();
    assert_eq!(rep.to_json(), text);
    assert!(rep.all_pass());
    assert_eq!(rep.records.len(), 10);
    assert!(dir.path().join("ledger_tables.json").exists());
    assert!(dir.path().join("ledger_tables.txt").exists());
}

#[test]
fn ledger_sum_converges_and_rejects_divergent_alpha() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(nslab(dir.path(), &["ledger", "sum", "--alpha", "1/4", "--k0", "0", "--kmax", "40"]), 0);
    assert!(report(dir.path(), "ledger_sum").all_pass());
    assert_eq!(nslab(dir.path(), &["ledger", "sum", "--alpha", "-1/4", "--k0", "0", "--kmax", "40"]), 2);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(nslab(dir.path(), &["--delta", "1/3", "ledger", "verify"]), 2);
    assert_eq!(nslab(dir.path(), &["--delta", "0.7", "ledger", "verify"]), 2);
    assert_eq!(nslab(dir.path(), &["--dyads", "5..3", "ledger", "verify"]), 2);
    assert_eq!(nslab(dir.path(), &["ledger", "verify", "--bogus"]), 2);
    assert_eq!(nslab(dir.path(), &["kernels", "scan", "--kind", "wave"]), 2);
    assert_eq!(nslab(dir.path(), &[]), 2);
}

#[test]
fn missing_or_malformed_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.json");
    assert_eq!(nslab(dir.path(), &["fields", "run", "--config", missing.to_str().unwrap()]), 2);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ grid: ").unwrap();
    assert_eq!(nslab(dir.path(), &["fields", "run", "--config", bad.to_str().unwrap()]), 2);
    let coarse = dir.path().join("coarse.json");
    fs::write(&coarse, r#"{"grid": 8}"#).unwrap();
    assert_eq!(nslab(dir.path(), &["fields", "run", "--config", coarse.to_str().unwrap()]), 2);
}

#[test]
fn fields_run_then_scaling() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"grid": 16, "horizon": 0.1, "snapshots": 6}"#).unwrap();
    assert_eq!(nslab(dir.path(), &["fields", "run", "--config", cfg.to_str().unwrap()]), 0);
    let traj = dir.path().join("trajectory");
    assert!(traj.join("manifest.json").exists());

    let out = dir.path().join("scaling");
    assert_eq!(nslab(&out, &["fields", "scaling", "--traj", traj.to_str().unwrap()]), 0);
    let csv = fs::read_to_string(out.join("fields_scaling.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("N,A_N,r_N"));
    assert_eq!(lines.clone().filter(|l| !l.starts_with('#')).count(), 3);
    assert!(csv.lines().last().unwrap().starts_with("# slope,"));
}

#[test]
fn scaling_on_missing_trajectory_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("nowhere");
    assert_eq!(nslab(dir.path(), &["fields", "scaling", "--traj", traj.to_str().unwrap()]), 2);
}

#[test]
fn delta_override_reaches_symbols_campaign() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(nslab(dir.path(), &["--delta", "1/2", "symbols", "corona", "--N", "256", "--samples", "200"]), 0);
    let rep = report(dir.path(), "symbols_corona");
    assert_eq!(rep.parameters.get("delta").map(String::as_str), Some("1/2"));
    assert!(dir.path().join("symbols_corona.csv").exists());
}

#[test]
fn reports_are_deterministic_apart_from_wall_time() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["--seed", "3", "freqgeo", "check", "--N", "64", "--samples", "300"];
    assert_eq!(nslab(a.path(), &args), 0);
    assert_eq!(nslab(b.path(), &args), 0);
    let mut ra = report(a.path(), "freqgeo_check");
    let mut rb = report(b.path(), "freqgeo_check");
    ra.wall_time_s = 0.0;
    rb.wall_time_s = 0.0;
    assert_eq!(ra.to_json(), rb.to_json());
    assert_eq!(
        fs::read(a.path().join("tiling_N64.csv")).unwrap(),
        fs::read(b.path().join("tiling_N64.csv")).unwrap()
    );
}

#[test]
fn binary_honors_env_out_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let env_dir = dir.path().join("from_env");
    let flag_dir = dir.path().join("from_flag");
    let bin = env!("CARGO_BIN_EXE_nslab");

    let st = Command::new(bin).args(["ledger", "verify"]).env("NSLAB_OUT", &env_dir).output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    assert!(env_dir.join("ledger_verify.json").exists());
    assert!(String::from_utf8_lossy(&st.stdout).contains("ledger_verify"));

    let st = Command::new(bin)
        .args(["ledger", "verify", "--out"])
        .arg(&flag_dir)
        .env("NSLAB_OUT", dir.path().join("ignored"))
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));
    assert!(flag_dir.join("ledger_verify.json").exists());
    assert!(!dir.path().join("ignored").exists());

    let st = Command::new(bin).args(["--delta", "1/3", "ledger", "verify"]).env("NSLAB_OUT", &env_dir).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
}

#[test]
fn all_quick_parallel_passes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(nslab(dir.path(), &["--quick", "--parallel", "all"]), 0);
    for name in [
        "ledger_verify",
        "freqgeo_check",
        "phase_verify",
        "symbols_corona",
        "symbols_corona_half",
        "kernels_schrodinger",
        "kernels_heat",
        "packets_decoupling",
        "fields_run",
        "fields_scaling",
    ] {
        let rep = report(dir.path(), name);
        assert!(rep.all_pass(), "{name} failed:\n{}", rep.summary());
    }
}
