//! End-to-end runs of the `cstirap` binary.

use std::path::Path;
use std::process::{Command, Output};

use cstirap::config::RunConfig;
use cstirap::ensemble::{EfficiencyMap, CSV_HEADER};
use cstirap::run::{cmd_sweep, config_from_map, SimulationRecord};
use serde_json::json;

fn cstirap(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cstirap"))
        .args(args)
        .current_dir(cwd)
        .env("RUST_LOG", "warn")
        .output()
        .unwrap()
}

fn write_config(dir: &Path, value: serde_json::Value) -> String {
    let path = dir.join("run.json");
    std::fs::write(&path, serde_json::to_string_pretty(&value).unwrap()).unwrap();
    path.to_str().unwrap().to_owned()
}

fn detuned_config() -> serde_json::Value {
    json!({
        "label": "d3",
        "rabi_pump_hz": 640e3,
        "rabi_stokes_hz": 550e3,
        "stokes_detuning_hz": 1.75e6,
        "fwhm_s": 14e-6,
        "family": "D3",
        "decay_enabled": true,
        "ensemble_enabled": true,
        "optical_step_hz": 150e3,
        "hyperfine_step_hz": 30e3,
        "sweep_delay_s": [-6e-6, 0.0, 6e-6],
    })
}

#[test]
fn unknown_key_exits_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), json!({ "rabi_pump_khz": 600.0 }));
    let out = cstirap(&["simulate", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rabi_pump_khz"));
}

#[test]
fn invalid_value_and_usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), json!({ "fwhm_s": -1.0 }));
    assert_eq!(cstirap(&["simulate", "--config", &cfg], dir.path()).status.code(), Some(2));
    assert_eq!(cstirap(&["simulate", "--preset", "fig9"], dir.path()).status.code(), Some(2));
    assert_eq!(cstirap(&["simulate"], dir.path()).status.code(), Some(2));
    assert_eq!(cstirap(&["frobnicate"], dir.path()).status.code(), Some(2));
}

#[test]
fn integration_failure_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        json!({ "rabi_pump_hz": 5e6, "rabi_stokes_hz": 5e6, "step_s": 2e-6 }),
    );
    let out = cstirap(&["simulate", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn zero_drive_simulation_transfers_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), json!({ "label": "idle" }));
    let out = cstirap(&["simulate", "--config", &cfg, "--out", "res"], dir.path());
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("res/idle.json")).unwrap();
    let record: SimulationRecord = serde_json::from_str(&text).unwrap();
    assert_eq!(record.efficiency, 0.0);
    assert_eq!(record.probe_efficiency, Some(0.0));
    assert_eq!(record.config, RunConfig::from_json(&serde_json::to_string(&json!({ "label": "idle" })).unwrap()).unwrap());
}

#[test]
fn sweep_writes_matching_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), detuned_config());
    let out = cstirap(&["sweep", "--config", &cfg, "--out", "res", "--threads", "2"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(dir.path().join("res/d3.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(", ").map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);

    let map: EfficiencyMap = serde_json::from_str(&std::fs::read_to_string(dir.path().join("res/d3.json")).unwrap()).unwrap();
    for (row, (tau, scale, eta)) in rows.iter().zip(map.points()) {
        assert_eq!(row[0].to_bits(), tau.to_bits());
        assert_eq!(row[1].to_bits(), scale.to_bits());
        assert_eq!(row[2].to_bits(), eta.unwrap().to_bits());
        assert!((0.0..=1.0).contains(&row[2]));
    }

    // Re-running from the embedded config reproduces the map exactly.
    let embedded = config_from_map(&map).unwrap();
    let rerun = cmd_sweep(&embedded, &dir.path().join("rerun")).unwrap();
    assert_eq!(rerun.efficiency, map.efficiency);
    assert_eq!(rerun.metadata, map.metadata);
    assert_eq!(
        std::fs::read(dir.path().join("rerun/d3.csv")).unwrap(),
        std::fs::read(dir.path().join("res/d3.csv")).unwrap()
    );
}

#[test]
fn design_phases_reports_universal_sets() {
    let dir = tempfile::tempdir().unwrap();
    let out = cstirap(&["design-phases", "--scaling", "u5a", "--out", "res"], dir.path());
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("u5a") && stdout.contains("u5b"), "{stdout}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("res/design_phases.json")).unwrap()).unwrap();
    assert_eq!(report["solutions"].as_array().unwrap().len(), 2);
    assert!(report["scaling"]["fit"]["slope"].as_f64().unwrap() >= 5.5);
}

#[test]
fn preset_writes_one_record_per_curve() {
    let dir = tempfile::tempdir().unwrap();
    let out = cstirap(&["simulate", "--preset", "fig4a", "--out", "res"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for label in ["fig4a_single", "fig4a_repeat3", "fig4a_d3", "fig4a_u3"] {
        assert!(dir.path().join(format!("res/{label}.json")).exists(), "{label}");
    }
}
