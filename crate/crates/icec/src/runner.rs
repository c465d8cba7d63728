//! Command implementations behind the CLI: the ε sweep, spectrum runs, and
//! the internal consistency suite. Data goes to files, warnings to stderr,
//! and every output embeds the artifact version and a hash of the
//! configuration it came from.

use crate::config::{ConfigError, RunConfig};
use crate::engine::{Engine, EngineError};
use crate::franck_condon::fc_table;
use crate::morse::{bound_spectrum, bound_wavefunction, trapezoid_overlap};
use crate::spectrum::{electron_spectrum, thermal_spectrum, Spectrum};
use crate::units::{convert, Unit, HARTREE_EV};
use crate::xs_data::pr_from_pi;
use crate::continuum::{bound_box_states, box_states, BoxSpec};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Morse(#[from] crate::morse::MorseError),
    #[error(transparent)]
    Continuum(#[from] crate::continuum::ContinuumError),
    #[error(transparent)]
    Fc(#[from] crate::franck_condon::FcError),
    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// First 16 hex digits of the SHA-256 of the canonical serialized config.
pub fn config_hash(config: &RunConfig) -> String {
    let mut hasher = Sha256::new();
    hasher.update(config.to_toml().as_bytes());
    let digest = hasher.finalize();
    let mut s = String::new();
    for b in &digest[..8] {
        write!(s, "{b:02x}").unwrap();
    }
    s
}

fn header_comment(config: &RunConfig) -> String {
    format!(
        "# icec {ARTIFACT_VERSION} config={}\n",
        config_hash(config)
    )
}

fn write_file(path: &Path, contents: &str) -> Result<(), RunError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|source| RunError::Io {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    std::fs::write(path, contents).map_err(|source| RunError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// One ε row of the sweep output.
struct TotalRow {
    eps: f64,
    electronic: f64,
    bound_bound: f64,
    dissociative: f64,
    total: f64,
    pr: f64,
}

/// Sweep the incoming energy and write
/// `eps_eV, sigma_electronic_Mb, sigma_bb_Mb, sigma_bd_Mb, sigma_total_Mb,
/// sigma_pr_Mb`. Rows whose transferred energy leaves a table's range are
/// omitted with a warning on stderr naming the limiting table. Returns the
/// written file.
pub fn cmd_total(
    config: &RunConfig,
    out_dir: &Path,
    threads: usize,
) -> Result<PathBuf, RunError> {
    let engine = Engine::new(config.engine_config()?)?;
    let initial = config.initial();
    let n = config.run.eps_steps;
    let grid: Vec<f64> = (0..n)
        .map(|i| {
            if n == 1 {
                config.run.eps_min_eV
            } else {
                config.run.eps_min_eV
                    + (config.run.eps_max_eV - config.run.eps_min_eV) * i as f64 / (n - 1) as f64
            }
        })
        .collect();

    let rows = parallel_map(&grid, threads, |&eps| -> Result<TotalRow, EngineError> {
        let breakdown = engine.enumerate_channels(eps, initial)?;
        Ok(TotalRow {
            eps,
            electronic: engine.electronic_xs(eps)?,
            bound_bound: breakdown.bound_bound_total(),
            dissociative: breakdown.dissociative_total(),
            total: breakdown.total(),
            pr: engine.pr_xs(eps)?,
        })
    });

    let mut text = header_comment(config);
    text.push_str("eps_eV,sigma_electronic_Mb,sigma_bb_Mb,sigma_bd_Mb,sigma_total_Mb,sigma_pr_Mb\n");
    for (i, row) in rows.into_iter().enumerate() {
        match row {
            Ok(r) => {
                writeln!(
                    text,
                    "{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e}",
                    r.eps, r.electronic, r.bound_bound, r.dissociative, r.total, r.pr
                )
                .unwrap();
            }
            Err(e) => {
                eprintln!(
                    "warning: omitting eps = {:.6} eV: {e}",
                    grid[i]
                );
            }
        }
    }
    let path = out_dir.join("total.csv");
    write_file(&path, &text)?;
    Ok(path)
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct SidecarChannel {
    label: String,
    eps_out_eV: f64,
    sigma_Mb: f64,
    fold_cutoff_eV: Option<f64>,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct SidecarFamily {
    label: String,
    double_dissociative: bool,
    points: usize,
    sigma_Mb: f64,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct Sidecar {
    artifact_version: String,
    config_hash: String,
    epsilon_eV: f64,
    temperature_K: Option<f64>,
    gamma_eV: f64,
    sticks: Vec<SidecarChannel>,
    density_families: Vec<SidecarFamily>,
}

/// Spectrum at the configured fixed ε; one CSV (+ channel sidecar JSON) per
/// temperature, or a single ground-state pair when no temperatures are
/// listed. Returns the written CSV paths.
pub fn cmd_spectrum(
    config: &RunConfig,
    out_dir: &Path,
    _threads: usize,
) -> Result<Vec<PathBuf>, RunError> {
    let engine = Engine::new(config.engine_config()?)?;
    let eps = config.run.eps_fixed_eV;
    let gamma = config.gamma_ev();
    let n_points = config.spectrum_points();

    let mut jobs: Vec<(Option<f64>, Spectrum)> = Vec::new();
    if config.run.temperatures_K.is_empty() {
        jobs.push((None, electron_spectrum(&engine, eps, config.initial())?));
    } else {
        for &t in &config.run.temperatures_K {
            jobs.push((Some(t), thermal_spectrum(&engine, eps, t)?));
        }
    }

    let mut written = Vec::new();
    for (temperature, spectrum) in jobs {
        let tag = match temperature {
            None => "spectrum".to_string(),
            Some(t) => format!("spectrum_T{}K", format_temperature(t)),
        };
        let grid = spectrum.default_grid(gamma, n_points);
        let sticks = spectrum.sticks_on_grid(&grid);
        let density = spectrum.density_on_grid(&grid);
        let folded = spectrum.folded_on_grid(&grid, gamma);

        let mut text = header_comment(config);
        text.push_str("eps_out_eV,sticks_Mb,density_Mb_per_eV,folded_Mb_per_eV\n");
        for i in 0..grid.len() {
            writeln!(
                text,
                "{:.10e},{:.10e},{:.10e},{:.10e}",
                grid[i], sticks[i], density[i], folded[i]
            )
            .unwrap();
        }
        let csv_path = out_dir.join(format!("{tag}.csv"));
        write_file(&csv_path, &text)?;

        let sidecar = Sidecar {
            artifact_version: ARTIFACT_VERSION.to_string(),
            config_hash: config_hash(config),
            epsilon_eV: eps,
            temperature_K: temperature,
            gamma_eV: gamma,
            sticks: spectrum
                .sticks
                .iter()
                .map(|s| SidecarChannel {
                    label: s.label.clone(),
                    eps_out_eV: s.eps_out,
                    sigma_Mb: s.sigma,
                    fold_cutoff_eV: s.cutoff,
                })
                .collect(),
            density_families: spectrum
                .density
                .iter()
                .map(|f| SidecarFamily {
                    label: f.label.clone(),
                    double_dissociative: f.double,
                    points: f.points.len(),
                    sigma_Mb: f.integral(),
                })
                .collect(),
        };
        let json = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
        write_file(&out_dir.join(format!("{tag}.channels.json")), &json)?;
        written.push(csv_path);
    }
    Ok(written)
}

fn format_temperature(t: f64) -> String {
    if (t - t.round()).abs() < 1e-9 {
        format!("{}", t.round() as i64)
    } else {
        format!("{t}")
    }
}

/// One check of the consistency suite.
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub measured: String,
}

pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn print(&self) {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            println!("{tag} {}: {}", c.name, c.measured);
        }
    }
}

/// Run the internal consistency suite on the configured system: unit round
/// trips, level counts, orthonormality, solver cross-validation, completeness
/// sum rules, energy closure, box convergence, detailed-balance scalings and
/// the spectrum decomposition. Optionally dumps the donor's continuum
/// Franck-Condon tables as CSV into `dump_dir`.
pub fn cmd_validate(
    config: &RunConfig,
    dump_dir: Option<&Path>,
) -> Result<ValidationReport, RunError> {
    let mut checks = Vec::new();
    let engine_config = config.engine_config()?;
    let engine = Engine::new(engine_config.clone())?;

    // unit round trips
    {
        let pairs = [
            (Unit::Hartree, Unit::ElectronVolt),
            (Unit::Hartree, Unit::Wavenumber),
            (Unit::Bohr, Unit::Angstrom),
            (Unit::BohrSquared, Unit::Megabarn),
        ];
        let mut worst: f64 = 0.0;
        for (a, b) in pairs {
            for x in [1.0, 3.95, 1406.18] {
                let y = convert(convert(x, a, b).unwrap(), b, a).unwrap();
                worst = worst.max(((y - x) / x).abs());
            }
        }
        checks.push(CheckResult {
            name: "unit round trips",
            passed: worst < 1e-12,
            measured: format!("worst relative error {worst:.3e} (limit 1e-12)"),
        });
    }

    let diatomic = engine_config.donor.initial_curve.zip(engine_config.donor.final_curve);
    if let Some((initial, final_curve)) = diatomic {
        let box_spec = engine_config.box_spec;
        let grid = box_spec.grid();

        // bound-state counts
        let n_initial = bound_spectrum(&initial).len();
        let n_final = bound_spectrum(&final_curve).len();
        checks.push(CheckResult {
            name: "donor bound-state counts",
            passed: n_initial > 0 && n_final > 0,
            measured: format!("initial curve {n_initial}, final curve {n_final}"),
        });

        // orthonormality among states the grid resolves
        {
            let mut wfs = Vec::new();
            for nu in 0..n_initial as u32 {
                let wf = bound_wavefunction(&initial, nu, &grid)?;
                if wf.grid_adequate() {
                    wfs.push(wf);
                }
            }
            let mut worst: f64 = 0.0;
            for i in 0..wfs.len() {
                for j in i..wfs.len() {
                    let ov = trapezoid_overlap(&grid, &wfs[i].amplitudes, &wfs[j].amplitudes);
                    let expect = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((ov - expect).abs());
                }
            }
            checks.push(CheckResult {
                name: "orthonormality",
                passed: worst < 1e-5,
                measured: format!(
                    "{} grid-resolved states, worst defect {worst:.3e} (limit 1e-5)",
                    wfs.len()
                ),
            });
        }

        // boundary-value solver vs analytic levels
        {
            let numeric = bound_box_states(&final_curve, &box_spec);
            let analytic = bound_spectrum(&final_curve);
            let mut worst: f64 = 0.0;
            let count_match = numeric.states.len() == analytic.len();
            for (s, a) in numeric.states.iter().zip(&analytic) {
                worst = worst.max((s.energy - a.energy).abs() * HARTREE_EV);
            }
            checks.push(CheckResult {
                name: "box solver vs analytic levels",
                passed: count_match && worst < 1e-4,
                measured: format!(
                    "{} vs {} levels, worst |dE| {worst:.3e} eV (limit 1e-4)",
                    numeric.states.len(),
                    analytic.len()
                ),
            });
        }

        // completeness sum rules for the three lowest initial states
        let continuum = box_states(&final_curve, &box_spec)?;
        let mut worst_sum: f64 = 0.0;
        let n_check = 3.min(n_initial as u32);
        for nu in 0..n_check {
            let t = fc_table(&initial, &final_curve, &continuum, nu)?;
            worst_sum = worst_sum.max((t.sum_rule - 1.0).abs());
            if let Some(dir) = dump_dir {
                let mut buf = Vec::new();
                t.write_csv(&mut buf).map_err(|e| RunError::Io {
                    path: dir.join(format!("fc_nu{nu}.csv")),
                    source: std::io::Error::other(e.to_string()),
                })?;
                let text = header_comment(config) + std::str::from_utf8(&buf).unwrap();
                write_file(&dir.join(format!("fc_nu{nu}.csv")), &text)?;
            }
        }
        checks.push(CheckResult {
            name: "completeness sum rule",
            passed: worst_sum < 1e-3,
            measured: format!("worst |sum - 1| {worst_sum:.3e} over nu 0..{n_check} (limit 1e-3)"),
        });

        // box convergence: the sum rule must not move when the box grows
        {
            let bigger = BoxSpec::new(
                box_spec.r_min,
                box_spec.r_max * 1.5,
                (box_spec.n_grid as f64 * 1.5) as usize,
                box_spec.e_max,
            )
            .map_err(EngineError::from)?;
            let set_big = box_states(&final_curve, &bigger)?;
            let t_ref = fc_table(&initial, &final_curve, &continuum, 0)?;
            let t_big = fc_table(&initial, &final_curve, &set_big, 0)?;
            let drift = (t_ref.sum_rule - t_big.sum_rule).abs();
            checks.push(CheckResult {
                name: "box convergence",
                passed: drift < 1e-3,
                measured: format!(
                    "sum rule {:.6} at {:.2} bohr vs {:.6} at {:.2} bohr, drift {drift:.3e} (limit 1e-3)",
                    t_ref.sum_rule, box_spec.r_max, t_big.sum_rule, bigger.r_max
                ),
            });
        }
    }

    // energy-balance closure on the generated channels
    {
        let eps = config.run.eps_fixed_eV;
        let breakdown = engine.enumerate_channels(eps, config.initial())?;
        let mut worst: f64 = 0.0;
        let mut count = 0usize;
        for c in breakdown
            .bound_bound
            .iter()
            .chain(breakdown.donor_continuum.iter().map(|w| &w.result))
            .chain(breakdown.acceptor_continuum.iter().map(|w| &w.result))
            .chain(breakdown.double_continuum.iter().map(|w| &w.result))
        {
            let via_asym = engine.outgoing_energy_asymptotic(
                engine.transferred_energy_asymptotic(eps, c.spec.initial_acceptor, c.spec.final_acceptor),
                c.spec.initial_donor,
                c.spec.final_donor,
            );
            worst = worst.max((via_asym - c.eps_out).abs() / HARTREE_EV);
            count += 1;
        }
        checks.push(CheckResult {
            name: "energy-balance closure",
            passed: worst < 1e-12 && count > 0,
            measured: format!("worst residual {worst:.3e} Hartree over {count} channels (limit 1e-12)"),
        });
    }

    // detailed-balance scalings
    {
        let base = pr_from_pi(5.0, 14.0, 1.0, 2.0).unwrap();
        let lin_sigma = (pr_from_pi(10.0, 14.0, 1.0, 2.0).unwrap() - 2.0 * base).abs();
        let lin_g = (pr_from_pi(5.0, 14.0, 1.0, 4.0).unwrap() - 2.0 * base).abs();
        let quad_omega = (pr_from_pi(5.0, 28.0, 1.0, 2.0).unwrap() - 4.0 * base).abs();
        let inv_eps = (pr_from_pi(5.0, 14.0, 2.0, 2.0).unwrap() - 0.5 * base).abs();
        let worst = lin_sigma.max(lin_g).max(quad_omega).max(inv_eps) / base;
        checks.push(CheckResult {
            name: "detailed-balance scalings",
            passed: worst < 1e-12,
            measured: format!("worst relative deviation {worst:.3e} (limit 1e-12)"),
        });
    }

    // the spectrum is a decomposition of the total
    {
        let eps = config.run.eps_fixed_eV;
        let s = electron_spectrum(&engine, eps, config.initial())?;
        let total = engine.total_xs(eps, config.initial())?;
        let rel = ((s.total() - total) / total).abs();
        checks.push(CheckResult {
            name: "spectrum decomposition",
            passed: rel < 1e-6,
            measured: format!("|spectrum - total| / total = {rel:.3e} (limit 1e-6)"),
        });
    }

    Ok(ValidationReport { checks })
}

/// Map a slice through `f` on `threads` workers, preserving input order.
fn parallel_map<T, U, F>(items: &[T], threads: usize, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    let threads = threads.max(1).min(items.len().max(1));
    if threads == 1 {
        return items.iter().map(&f).collect();
    }
    let mut out: Vec<Option<U>> = (0..items.len()).map(|_| None).collect();
    let chunk = items.len().div_ceil(threads);
    let f = &f;
    std::thread::scope(|scope| {
        for (slot_chunk, item_chunk) in out.chunks_mut(chunk).zip(items.chunks(chunk)) {
            scope.spawn(move || {
                for (slot, item) in slot_chunk.iter_mut().zip(item_chunk) {
                    *slot = Some(f(item));
                }
            });
        }
    });
    out.into_iter().map(|o| o.expect("worker filled slot")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn parallel_map_preserves_order() {
        let items: Vec<usize> = (0..101).collect();
        let doubled = parallel_map(&items, 7, |&x| 2 * x);
        assert_eq!(doubled, items.iter().map(|x| 2 * x).collect::<Vec<_>>());
    }

    #[test]
    fn config_hash_stable_and_sensitive() {
        let cfg = presets::h_plus_lih_run_config();
        let h1 = config_hash(&cfg);
        let h2 = config_hash(&cfg);
        assert_eq!(h1, h2);
        assert_eq!(h1.len(), 16);
        let mut other = cfg.clone();
        other.run.eps_fixed_eV = 2.0;
        assert_ne!(h1, config_hash(&other));
    }

    #[test]
    fn temperature_tags() {
        assert_eq!(format_temperature(300.0), "300");
        assert_eq!(format_temperature(15.0), "15");
        assert_eq!(format_temperature(77.35), "77.35");
    }
}
