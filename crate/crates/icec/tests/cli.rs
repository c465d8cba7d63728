//! End-to-end checks of the command layer: file formats, determinism,
//! truncation warnings, and exit codes of the installed binary.

use icec::config::RunConfig;
use icec::presets;
use icec::runner::{cmd_spectrum, cmd_total, cmd_validate, config_hash};
use std::path::Path;
use std::process::Command;

fn small_preset() -> RunConfig {
    let mut cfg = presets::h_plus_lih_run_config();
    // keep the suite quick: a coarse box is plenty for plumbing checks
    cfg.box_config.n_grid = 1200;
    cfg.run.eps_steps = 3;
    cfg.run.eps_min_eV = 0.5;
    cfg.run.eps_max_eV = 1.5;
    cfg.run.spectrum_points = Some(400);
    cfg
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.contains("eps"))
        .collect()
}

#[test]
fn total_writes_header_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_preset();
    let path = cmd_total(&cfg, dir.path(), 2).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    let comment = lines.next().unwrap();
    assert!(comment.starts_with("# icec "));
    assert!(comment.contains(&config_hash(&cfg)));
    assert_eq!(
        lines.next().unwrap(),
        "eps_eV,sigma_electronic_Mb,sigma_bb_Mb,sigma_bd_Mb,sigma_total_Mb,sigma_pr_Mb"
    );
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 3);
    // the transferred-energy power law makes every column fall with eps here
    let totals: Vec<f64> = rows
        .iter()
        .map(|r| r.split(',').nth(4).unwrap().parse().unwrap())
        .collect();
    assert!(totals.windows(2).all(|w| w[1] < w[0]), "{totals:?}");
}

#[test]
fn rerun_is_byte_identical() {
    let cfg = small_preset();
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let p1 = cmd_total(&cfg, d1.path(), 1).unwrap();
    let p2 = cmd_total(&cfg, d2.path(), 4).unwrap();
    assert_eq!(
        std::fs::read(&p1).unwrap(),
        std::fs::read(&p2).unwrap(),
        "total.csv differs between reruns"
    );

    let s1 = cmd_spectrum(&cfg, d1.path(), 1).unwrap();
    let s2 = cmd_spectrum(&cfg, d2.path(), 1).unwrap();
    for (a, b) in s1.iter().zip(&s2) {
        assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    }
}

#[test]
fn sweep_beyond_table_range_omits_rows() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_preset();
    // the donor window tops out at 16.6 eV of transferred energy, so the
    // upper half of the sweep must be dropped with a warning
    cfg.system.donor.pi.window_eV = Some([5.0, 16.6]);
    cfg.run.eps_min_eV = 0.5;
    cfg.run.eps_max_eV = 6.0;
    cfg.run.eps_steps = 12;
    let path = cmd_total(&cfg, dir.path(), 2).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let rows = data_rows(&text);
    assert!(!rows.is_empty());
    assert!(rows.len() < 12, "expected truncation, got {} rows", rows.len());
    for row in rows {
        let eps: f64 = row.split(',').next().unwrap().parse().unwrap();
        assert!(eps + 13.6 <= 16.6 + 1e-9);
    }
}

#[test]
fn spectrum_files_per_temperature() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_preset();
    cfg.run.temperatures_K = vec![15.0, 300.0];
    let paths = cmd_spectrum(&cfg, dir.path(), 1).unwrap();
    assert_eq!(paths.len(), 2);
    assert!(paths[0].ends_with("spectrum_T15K.csv"));
    assert!(paths[1].ends_with("spectrum_T300K.csv"));
    for p in &paths {
        assert!(p.with_extension("channels.json").exists() || {
            // sidecar name is <tag>.channels.json
            let tag = p.file_stem().unwrap().to_string_lossy().into_owned();
            p.parent().unwrap().join(format!("{tag}.channels.json")).exists()
        });
    }

    // without temperatures: a single ground-state spectrum
    let mut cfg2 = small_preset();
    cfg2.run.temperatures_K = vec![];
    let paths2 = cmd_spectrum(&cfg2, dir.path(), 1).unwrap();
    assert_eq!(paths2.len(), 1);
    assert!(paths2[0].ends_with("spectrum.csv"));
}

#[test]
fn zero_incoming_energy_is_a_valid_run() {
    // the acceptor's attachment energy alone already opens the channels
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_preset();
    cfg.run.eps_fixed_eV = 0.0;
    cfg.run.temperatures_K = vec![];
    let paths = cmd_spectrum(&cfg, dir.path(), 1).unwrap();
    let text = std::fs::read_to_string(&paths[0]).unwrap();
    let any_signal = data_rows(&text).iter().any(|row| {
        row.split(',')
            .skip(1)
            .any(|v| v.parse::<f64>().unwrap() > 0.0)
    });
    assert!(any_signal, "eps = 0 spectrum is empty");
}

#[test]
fn tables_resolve_relative_to_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let mut table = String::from("energy_eV,sigma_Mb\n");
    for i in 0..40 {
        table.push_str(&format!("{},7.13\n", 5.0 + i as f64));
    }
    std::fs::write(dir.path().join("lih_pi.csv"), table).unwrap();
    let mut cfg = small_preset();
    cfg.system.donor.pi = icec::config::PiConfig {
        table: Some("lih_pi.csv".into()),
        constant_Mb: None,
        window_eV: None,
    };
    let cfg_path = dir.path().join("run.toml");
    std::fs::write(&cfg_path, cfg.to_toml()).unwrap();
    // the process cwd is unrelated to the config location; loading and
    // running must both resolve the table against the config's directory
    let loaded = RunConfig::from_path(&cfg_path).unwrap();
    let out = tempfile::tempdir().unwrap();
    let path = cmd_total(&loaded, out.path(), 1).unwrap();
    assert_eq!(data_rows(&std::fs::read_to_string(path).unwrap()).len(), 3);
}

#[test]
fn validate_passes_on_preset() {
    let report = cmd_validate(&small_preset(), None).unwrap();
    assert!(report.all_passed(), "checks failed");
    assert!(report.checks.len() >= 8);
}

#[test]
fn validate_dumps_fc_tables_when_asked() {
    let dir = tempfile::tempdir().unwrap();
    let report = cmd_validate(&small_preset(), Some(dir.path())).unwrap();
    assert!(report.all_passed());
    for nu in 0..3 {
        let p = dir.path().join(format!("fc_nu{nu}.csv"));
        let text = std::fs::read_to_string(&p).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("# icec "));
        assert_eq!(lines.next().unwrap(), "energy_eV,fc_density_per_eV");
    }
}

#[test]
fn validate_reports_degraded_box() {
    let mut cfg = small_preset();
    cfg.box_config.r_max_angstrom = 4.0;
    let report = cmd_validate(&cfg, None).unwrap();
    assert!(!report.all_passed(), "halved box must degrade the sum rule");
    let sum_rule = report
        .checks
        .iter()
        .find(|c| c.name == "completeness sum rule")
        .unwrap();
    assert!(!sum_rule.passed);
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_icec"))
}

#[test]
fn binary_exit_codes() {
    // unknown preset name: input error
    let out = bin().args(["total", "--config", "no_such_preset.toml"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // preset dump succeeds and parses back
    let out = bin().args(["preset", "h_plus_lih"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    RunConfig::from_str(&text, Path::new(".")).unwrap();

    // validate on a deliberately broken config: physics failure, exit 1
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_preset();
    cfg.box_config.r_max_angstrom = 4.0;
    let cfg_path = dir.path().join("degraded.toml");
    std::fs::write(&cfg_path, cfg.to_toml()).unwrap();
    let out = bin()
        .args(["validate", "--config"])
        .arg(&cfg_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("FAIL completeness sum rule"), "{stdout}");

    // malformed config file: input error with a parse message
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "schema_version = 1\n[system\n").unwrap();
    let out = bin().args(["total", "--config"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
