use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ionrate(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ionrate"))
        .args(args)
        .current_dir(dir)
        .env_remove("IONRATE_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn period_from(text: &str) -> f64 {
    let line = text
        .lines()
        .find(|l| l.starts_with("modulation period:"))
        .expect("period line");
    line.split_whitespace().nth(2).unwrap().parse().unwrap()
}

#[test]
fn scan_reports_the_modulation_period() {
    let dir = tempfile::tempdir().unwrap();
    let o = ionrate(
        dir.path(),
        &[
            "scan",
            "--engine",
            "semiclassical",
            "--gamma",
            "0.7",
            "--z",
            "6:20:0.01",
            "--cycles",
            "1",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let dz = period_from(&stdout(&o));
    assert!((dz / 0.505_050_5 - 1.0).abs() < 0.02, "{dz}");
    let csv = fs::read_to_string(dir.path().join("scan_semiclassical.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1402);
    assert_eq!(
        csv.lines().next().unwrap(),
        "z,gamma_param,Gamma_raw,Gamma_smooth,is_peak,nearest_threshold_k"
    );
    let meta: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("scan_semiclassical.meta.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(meta["schema_version"], "deltaion.rate-scan/1");
    assert_eq!(meta["n_samples"], 1401);
}

#[test]
fn fixed_nio_scan_has_unit_threshold_spacing() {
    let dir = tempfile::tempdir().unwrap();
    let o = ionrate(
        dir.path(),
        &[
            "scan",
            "--n-io",
            "9.8",
            "--z",
            "2:12:0.01",
            "--format",
            "json",
            "--out",
            "nio.json",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("nio.json")).unwrap()).unwrap();
    assert_eq!(doc["threshold_spacing"], 1.0);
    assert_eq!(doc["samples"].as_array().unwrap().len(), 1001);
    let t = doc["thresholds"].as_array().unwrap();
    let z0 = t[0]["z"].as_f64().unwrap();
    let z1 = t[1]["z"].as_f64().unwrap();
    assert!((z1 - z0 - 1.0).abs() < 1e-12);
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        ionrate(dir.path(), &["scan", "--z", "6:5:0.1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        ionrate(dir.path(), &["scan", "--no-such-flag"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        ionrate(dir.path(), &["scan", "--gamma", "-1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        ionrate(dir.path(), &["scan", "--gamma", "0.7", "--n-io", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        ionrate(dir.path(), &["scan", "--sg-window", "30"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(ionrate(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let o = ionrate(dir.path(), &["scan", "--z", "8:12:0.02", "--out", name]);
        assert!(o.status.success());
        (
            fs::read(dir.path().join(name)).unwrap(),
            fs::read(dir.path().join(Path::new(name).with_extension("meta.json"))).unwrap(),
        )
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("run.conf"),
        "# test run\ngamma = 1.1\nz = 6:8:0.5\ncycles = 2\nformat = json\n",
    )
    .unwrap();
    let o = ionrate(
        dir.path(),
        &[
            "--config", "run.conf", "scan", "--cycles", "1", "--out", "r.json",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(doc["n_cycles"], 1);
    assert_eq!(doc["mode"]["gamma"], 1.1);
    assert_eq!(doc["samples"].as_array().unwrap().len(), 5);

    fs::write(
        dir.path().join("run.json"),
        r#"{"gamma": 0.5, "z": "6:7:0.5"}"#,
    )
    .unwrap();
    let o = ionrate(
        dir.path(),
        &["--config", "run.json", "scan", "--out", "j.csv"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        fs::read_to_string(dir.path().join("j.csv"))
            .unwrap()
            .lines()
            .count(),
        4
    );

    fs::write(dir.path().join("bad.conf"), "colour = blue\n").unwrap();
    assert_eq!(
        ionrate(dir.path(), &["--config", "bad.conf", "scan"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn output_directory_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let o = Command::new(env!("CARGO_BIN_EXE_ionrate"))
        .args(["scan", "--z", "6:7:0.1"])
        .current_dir(dir.path())
        .env("IONRATE_OUT_DIR", &out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(out.join("scan_semiclassical.csv").exists());
}

#[test]
fn field_off_compare_gives_zero_rates() {
    let dir = tempfile::tempdir().unwrap();
    let o = ionrate(
        dir.path(),
        &[
            "compare",
            "--field-off",
            "--z",
            "8,8.5",
            "--oracle-dt-divisor",
            "10",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("compare.report.json")).unwrap())
            .unwrap();
    for p in report["points"].as_array().unwrap() {
        assert!(p["semiclassical_smooth"].as_f64().unwrap().abs() < 1e-9);
        assert!(p["oracle_smooth"].as_f64().unwrap().abs() < 1e-9);
        assert!(p["ratio"].is_null());
    }
}

#[test]
fn compare_warns_beyond_the_validated_gamma() {
    let dir = tempfile::tempdir().unwrap();
    let o = ionrate(
        dir.path(),
        &[
            "compare",
            "--gamma",
            "2.6",
            "--z",
            "8:8.05:0.05",
            "--cycles",
            "1",
            "--burn-in",
            "0",
            "--oracle-dt-divisor",
            "5",
        ],
    );
    assert!(
        stderr(&o).contains("exceeds the validated range"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn selfcheck_passes_and_negative_controls_fail() {
    let dir = tempfile::tempdir().unwrap();
    let o = ionrate(dir.path(), &["selfcheck"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));

    let o = ionrate(dir.path(), &["selfcheck", "--debug-branch", "principal"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("FAIL  branch convention"));

    let o = ionrate(dir.path(), &["selfcheck", "--oracle-dt", "0.05"]);
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    let line = text
        .lines()
        .find(|l| l.starts_with("FAIL  oracle convergence"))
        .expect("convergence probe fails");
    assert!(line.contains("step not converged"), "{line}");
}

#[test]
fn barrier_demo_prints_i_pi() {
    let dir = tempfile::tempdir().unwrap();
    let o = ionrate(dir.path(), &["demo-appendix-c", "--out", "demo.json"]);
    assert!(o.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("demo.json")).unwrap()).unwrap();
    assert!((doc["traversal_time"][1].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-10);
    assert!(doc["traversal_time"][0].as_f64().unwrap().abs() < 1e-10);
}

#[test]
fn thresholds_are_listed() {
    let dir = tempfile::tempdir().unwrap();
    let o = ionrate(
        dir.path(),
        &["thresholds", "--gamma", "0.7", "--z", "0.4:1.2:0.1"],
    );
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("1,0.5050505"));
}

#[test]
fn oracle_scan_resumes_from_checkpoints() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "scan",
        "--engine",
        "oracle",
        "--z",
        "6:6.1:0.1",
        "--oracle-dt-divisor",
        "10",
        "--checkpoint-dir",
        "ck",
        "--out",
        "o.csv",
    ];
    let o = ionrate(dir.path(), &args);
    assert!(o.status.success(), "{}", stderr(&o));
    let first = fs::read(dir.path().join("o.csv")).unwrap();
    assert_eq!(fs::read_dir(dir.path().join("ck")).unwrap().count(), 2);
    let o = ionrate(dir.path(), &args);
    assert!(o.status.success());
    assert_eq!(fs::read(dir.path().join("o.csv")).unwrap(), first);
}
