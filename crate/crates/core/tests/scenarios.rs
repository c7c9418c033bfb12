use std::path::Path;
use std::process::Command;

use cqed_feedback::scenario::{self, OutputFormat, PlotSeries, Scenario, ScenarioConfig};

fn resolve(json: &str, s: Scenario) -> scenario::ResolvedConfig {
    ScenarioConfig::from_json(json).unwrap().resolve(s).unwrap()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cqed-feedback"))
}

#[test]
fn fig2_resonance_row_has_optimal_values() {
    let series = scenario::run(&resolve("{}", Scenario::Fig2)).unwrap();
    let s = &series[0];
    let dk = s.column("dk").unwrap();
    let i = dk.iter().position(|&x| x == 0.0).expect("grid hits resonance");
    assert!(s.column("abs_cl_sq").unwrap()[i] < 1e-28);
    assert!((s.column("abs_cr_sq").unwrap()[i] - 1.0).abs() < 1e-14);
    assert!((s.column("abs_dl_sq").unwrap()[i] - 0.25).abs() < 1e-14);
    assert!((s.column("abs_dr_sq").unwrap()[i] - 0.25).abs() < 1e-14);
}

#[test]
fn fig3_grid_mass_matches_exact_window_mass() {
    let series = scenario::run(&resolve(r#"{"snapshot_rounds": [1, 2, 5]}"#, Scenario::Fig3)).unwrap();
    let s = &series[0];
    for name in ["abs_fc_sq", "abs_f1_sq", "abs_f2_sq", "abs_f5_sq"] {
        assert!(s.column(name).is_some(), "missing {name}");
    }
    let checks = s.metadata["normalization_checks"].as_array().unwrap();
    assert_eq!(checks.len(), 4);
    for c in checks {
        assert_eq!(c["within_tolerance"], true, "{c}");
        assert!((c["full_line_norm"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    }
}

#[test]
fn fig4_reports_baseline_and_saturation() {
    let s = &scenario::run(&resolve(r#"{"rounds": 100, "lambda_ratios": [2.5]}"#, Scenario::Fig4)).unwrap()[0];
    assert_eq!(s.column("baseline_p_0.5").unwrap()[9], 0.9990234375);
    let p = s.column("P_R_lambda_2.5").unwrap();
    assert_eq!(p.len(), 100);
    assert!(p[99] - p[9] < 0.05 && 1.0 - p[99] > 0.01);
    let residual = s.metadata["telescoping_max_residual"]["P_R_lambda_2.5"].as_f64().unwrap();
    assert!(residual < 1e-7);
}

#[test]
fn fig4_requires_ten_rounds() {
    let err = ScenarioConfig::from_json(r#"{"rounds": 5}"#).unwrap().resolve(Scenario::Fig4);
    assert!(matches!(err, Err(cqed_feedback::Error::Config(_))));
}

#[test]
fn fig5_curves_are_bounded_and_monotone() {
    let s = &scenario::run(&resolve("{}", Scenario::Fig5)).unwrap()[0];
    for r in ["0.1", "0.5", "2.5"] {
        let p = s.column(&format!("P_R1_lambda_{r}")).unwrap();
        assert!(p[0] > 0.99);
        assert!(p.iter().all(|&v| (0.0..=1.0).contains(&v)));
        assert!(p.windows(2).all(|w| w[1] <= w[0] + 1e-9));
    }
    let flags = s.metadata["monotone_nonincreasing"].as_object().unwrap();
    assert_eq!(flags.len(), 3);
    assert!(flags.values().all(|v| v == true));
}

#[test]
fn modes_report_matches_closed_form_peak() {
    let series = scenario::run(&resolve("{}", Scenario::Modes)).unwrap();
    let fit = series.iter().find(|s| s.name == "modes_quasimode").unwrap();
    let get = |c: &str| fit.column(c).unwrap()[0];
    assert!(get("fit_residual") < 0.02);
    assert!((get("peak_spacing") - std::f64::consts::PI).abs() < 1e-9);
    assert!((get("abs_i_max") - get("abs_i_max_closed_form")).abs() < 1e-9 * get("abs_i_max"));
}

#[test]
fn written_series_round_trip_in_both_formats() {
    let series = scenario::run(&resolve("{}", Scenario::Sweep)).unwrap();
    for format in [OutputFormat::Csv, OutputFormat::Json] {
        let dir = tempfile::tempdir().unwrap();
        let paths = scenario::write_all(&series, dir.path(), format).unwrap();
        let back = PlotSeries::read(&paths[0]).unwrap();
        assert_eq!(back, series[0]);
    }
}

#[test]
fn unknown_config_fields_are_rejected() {
    assert!(ScenarioConfig::from_json(r#"{"kappa": 1}"#).is_err());
    assert!(ScenarioConfig::from_json(r#"{"params": {"kappa": 1, "k_c": 0, "delta_e": 0, "lambda_l": 1, "lambda_r": 1, "x": 2}}"#).is_err());
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn cli_writes_outputs_and_prints_paths() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["fig2", "--out"])
        .arg(dir.path())
        .args(["--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let printed = String::from_utf8(out.stdout).unwrap();
    let path = Path::new(printed.trim());
    assert!(path.ends_with("fig2_transfer.json"));
    assert_eq!(PlotSeries::read(path).unwrap().rows(), 2001);
}

#[test]
fn cli_uses_config_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("nested");
    let config = write_config(
        dir.path(),
        &format!(r#"{{"scenario": "modes", "output": {{"dir": {:?}}}}}"#, out_dir.to_str().unwrap()),
    );
    let status = bin().arg("modes").arg("--config").arg(&config).status().unwrap();
    assert!(status.success());
    assert!(out_dir.join("modes_quasimode.csv").exists());
    assert!(out_dir.join("modes_quasimode.meta.json").exists());
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad_params = write_config(
        dir.path(),
        r#"{"params": {"kappa": -1, "k_c": 0, "delta_e": 0, "lambda_l": 1, "lambda_r": 1}}"#,
    );
    let code = |args: &[&std::ffi::OsStr]| bin().args(args).output().unwrap().status.code();
    let out = dir.path().as_os_str();
    assert_eq!(code(&["fig2".as_ref(), "--config".as_ref(), bad_params.as_os_str(), "--out".as_ref(), out]), Some(2));
    assert_eq!(code(&["fig2".as_ref()]), Some(2), "missing output directory");
    let mismatched = write_config(dir.path(), r#"{"scenario": "fig5"}"#);
    assert_eq!(code(&["fig2".as_ref(), "--config".as_ref(), mismatched.as_os_str(), "--out".as_ref(), out]), Some(2));
    // Tolerance below round-off cannot be met.
    assert_eq!(code(&["sweep".as_ref(), "--tolerance".as_ref(), "1e-30".as_ref(), "--out".as_ref(), out]), Some(3));
    assert_ne!(code(&["nonsense".as_ref()]), Some(0));
}
