//! Run configuration: a single human-editable TOML file describing the
//! system, the radial box, the requested sweep or spectrum, and the output
//! location. Every field name carries its unit. Referenced files are loaded
//! and validated when the configuration is.

// field names carry their units verbatim (eV, Mb, K)
#![allow(non_snake_case)]

use crate::continuum::BoxSpec;
use crate::engine::{EngineConfig, Mode};
use crate::morse::MorseParams;
use crate::units::{ANGSTROM_PER_BOHR, HARTREE_EV, WAVENUMBER_PER_HARTREE};
use crate::xs_data::{
    load_table_from_path, CrossSectionTable, ResolvedPiSet, Role, SpeciesSpec, XsError,
};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parsing config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("unsupported schema_version {found} (this build reads {supported})")]
    SchemaVersion { found: u32, supported: u32 },
    #[error("config: {0}")]
    Invalid(String),
    #[error("loading table {path}: {source}")]
    Table { path: PathBuf, source: XsError },
    #[error(transparent)]
    Xs(#[from] XsError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub system: SystemConfig,
    #[serde(rename = "box")]
    pub box_config: BoxConfig,
    pub run: RunBlock,
    pub output: OutputConfig,
    /// Directory that relative file references resolve against: the config
    /// file's parent. Not part of the serialized document.
    #[serde(skip, default = "default_base_dir")]
    pub base_dir: PathBuf,
}

fn default_base_dir() -> PathBuf {
    PathBuf::from(".")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub r_ad_angstrom: f64,
    /// "fc" (Condon factorization) or "resolved" (external vibrationally
    /// resolved donor tables).
    pub mode: String,
    pub acceptor: SpeciesConfig,
    pub donor: SpeciesConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesConfig {
    /// "atomic" or "diatomic".
    pub kind: String,
    pub ip_eV: f64,
    pub multiplicity_ratio: f64,
    pub pi: PiConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_curve: Option<CurveConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_curve: Option<CurveConfig>,
    /// Directory of `pi_nu{ν}_nup{ν₊}.csv` tables.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolved_dir: Option<PathBuf>,
}

/// Photoionization input: either a CSV table or a constant anchor value with
/// an explicit validity window.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant_Mb: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_eV: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    pub d_e_eV: f64,
    pub omega_e_cm1: f64,
    pub r_e_bohr: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_au: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxConfig {
    pub r_min_bohr: f64,
    pub r_max_angstrom: f64,
    pub n_grid: usize,
    /// Highest continuum energy retained; defaults to the largest
    /// transferable energy of the run (max ε + acceptor anchor).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_max_eV: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunBlock {
    /// Sweep grid for the total cross section.
    pub eps_min_eV: f64,
    pub eps_max_eV: f64,
    pub eps_steps: usize,
    /// Fixed incoming energy for spectra.
    pub eps_fixed_eV: f64,
    /// Spectrum temperatures; empty means a single ground-state spectrum.
    #[serde(default)]
    pub temperatures_K: Vec<f64>,
    /// Lorentz half-width for folding; 2γ defaults to 0.16 eV.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_eV: Option<f64>,
    /// Points of the uniform outgoing-energy grid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum_points: Option<usize>,
    /// Initial vibrational states (acceptor, donor) when not thermal.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<[u32; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: PathBuf,
}

impl RunConfig {
    /// Parse and validate; relative file references resolve against
    /// `base_dir`.
    pub fn from_str(text: &str, base_dir: &Path) -> Result<Self, ConfigError> {
        let mut cfg: RunConfig = toml::from_str(text)?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(ConfigError::SchemaVersion {
                found: cfg.schema_version,
                supported: SCHEMA_VERSION,
            });
        }
        cfg.base_dir = base_dir.to_path_buf();
        cfg.validate(base_dir)?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_str(&text, base)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    fn validate(&self, base_dir: &Path) -> Result<(), ConfigError> {
        if !(self.system.r_ad_angstrom > 0.0) {
            return Err(ConfigError::Invalid("r_ad_angstrom must be positive".into()));
        }
        self.mode()?;
        for (name, sp) in [("acceptor", &self.system.acceptor), ("donor", &self.system.donor)] {
            sp.validate(name, base_dir)?;
        }
        if self.run.eps_steps == 0 {
            return Err(ConfigError::Invalid("eps_steps must be at least 1".into()));
        }
        if !(self.run.eps_min_eV >= 0.0 && self.run.eps_max_eV >= self.run.eps_min_eV) {
            return Err(ConfigError::Invalid(
                "need 0 <= eps_min_eV <= eps_max_eV".into(),
            ));
        }
        if self.run.temperatures_K.iter().any(|&t| !(t >= 0.0)) {
            return Err(ConfigError::Invalid("temperatures must be >= 0 K".into()));
        }
        if let Some(g) = self.run.gamma_eV {
            if !(g > 0.0) {
                return Err(ConfigError::Invalid(format!(
                    "gamma_eV must be positive, got {g}"
                )));
            }
        }
        if self.mode()? == Mode::AbInitioResolved && self.system.donor.resolved_dir.is_none() {
            return Err(ConfigError::Invalid(
                "mode = \"resolved\" requires donor.resolved_dir".into(),
            ));
        }
        Ok(())
    }

    pub fn mode(&self) -> Result<Mode, ConfigError> {
        match self.system.mode.as_str() {
            "fc" => Ok(Mode::FranckCondon),
            "resolved" => Ok(Mode::AbInitioResolved),
            other => Err(ConfigError::Invalid(format!(
                "mode must be \"fc\" or \"resolved\", got \"{other}\""
            ))),
        }
    }

    /// Largest transferable energy of the run, the default continuum cap.
    fn default_e_max_ev(&self) -> f64 {
        self.run.eps_max_eV.max(self.run.eps_fixed_eV) + self.system.acceptor.ip_eV
    }

    /// Build the engine configuration, loading any referenced tables.
    pub fn engine_config(&self) -> Result<EngineConfig, ConfigError> {
        let mode = self.mode()?;
        let acceptor = self.system.acceptor.species(Role::Acceptor, &self.base_dir)?;
        let donor = self.system.donor.species(Role::Donor, &self.base_dir)?;
        let e_max = self.box_config.e_max_eV.unwrap_or_else(|| self.default_e_max_ev());
        let box_spec = BoxSpec::new(
            self.box_config.r_min_bohr,
            self.box_config.r_max_angstrom / ANGSTROM_PER_BOHR,
            self.box_config.n_grid,
            e_max / HARTREE_EV,
        )
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(EngineConfig {
            acceptor,
            donor,
            r_ad_angstrom: self.system.r_ad_angstrom,
            box_spec,
            mode,
        })
    }

    pub fn gamma_ev(&self) -> f64 {
        self.run.gamma_eV.unwrap_or(crate::spectrum::DEFAULT_GAMMA_EV)
    }

    pub fn spectrum_points(&self) -> usize {
        self.run.spectrum_points.unwrap_or(2000)
    }

    pub fn initial(&self) -> (u32, u32) {
        let [a, d] = self.run.initial.unwrap_or([0, 0]);
        (a, d)
    }
}

impl SpeciesConfig {
    fn validate(&self, name: &str, base_dir: &Path) -> Result<(), ConfigError> {
        match self.kind.as_str() {
            "atomic" => {
                if self.initial_curve.is_some() || self.final_curve.is_some() {
                    return Err(ConfigError::Invalid(format!(
                        "{name}: atomic species carries no potential curves"
                    )));
                }
            }
            "diatomic" => {
                if self.initial_curve.is_none() || self.final_curve.is_none() {
                    return Err(ConfigError::Invalid(format!(
                        "{name}: diatomic species needs initial_curve and final_curve"
                    )));
                }
                if self.initial_curve.as_ref().unwrap().mu_au.is_none() {
                    return Err(ConfigError::Invalid(format!(
                        "{name}: initial_curve.mu_au is required"
                    )));
                }
            }
            other => {
                return Err(ConfigError::Invalid(format!(
                    "{name}: kind must be \"atomic\" or \"diatomic\", got \"{other}\""
                )))
            }
        }
        self.pi.validate(name)?;
        // referenced files must exist and validate now, not at run time
        if let Some(table) = &self.pi.table {
            let path = resolve(base_dir, table);
            load_table_from_path(&path).map_err(|source| ConfigError::Table { path, source })?;
        }
        if let Some(dir) = &self.resolved_dir {
            let path = resolve(base_dir, dir);
            let set = ResolvedPiSet::load_dir(&path).map_err(|source| ConfigError::Table {
                path: path.clone(),
                source,
            })?;
            if set.tables.is_empty() {
                return Err(ConfigError::Invalid(format!(
                    "{name}: resolved_dir {} holds no pi_nu*_nup*.csv tables",
                    path.display()
                )));
            }
        }
        Ok(())
    }

    fn curve(cfg: &CurveConfig, mu_default: Option<f64>) -> Result<MorseParams, ConfigError> {
        let mu = cfg
            .mu_au
            .or(mu_default)
            .ok_or_else(|| ConfigError::Invalid("curve needs mu_au".into()))?;
        MorseParams::new(
            cfg.d_e_eV / HARTREE_EV,
            cfg.omega_e_cm1 / WAVENUMBER_PER_HARTREE,
            cfg.r_e_bohr,
            mu,
        )
        .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    fn species(&self, role: Role, base_dir: &Path) -> Result<SpeciesSpec, ConfigError> {
        let label = match role {
            Role::Acceptor => "sigma_pi_acceptor",
            Role::Donor => "sigma_pi_donor",
        };
        let table = self.pi.build(label, base_dir)?;
        let mut spec = match self.kind.as_str() {
            "atomic" => SpeciesSpec::atomic(role, self.ip_eV, self.multiplicity_ratio, table)?,
            _ => {
                let initial = Self::curve(self.initial_curve.as_ref().unwrap(), None)?;
                let final_curve = Self::curve(
                    self.final_curve.as_ref().unwrap(),
                    Some(initial.mu),
                )?;
                SpeciesSpec::diatomic(
                    role,
                    self.ip_eV,
                    self.multiplicity_ratio,
                    table,
                    initial,
                    final_curve,
                )?
            }
        };
        if let Some(dir) = &self.resolved_dir {
            spec = spec.with_resolved_pi(ResolvedPiSet::load_dir(&resolve(base_dir, dir))?);
        }
        Ok(spec)
    }
}

impl PiConfig {
    fn validate(&self, name: &str) -> Result<(), ConfigError> {
        match (&self.table, &self.constant_Mb) {
            (Some(_), Some(_)) => Err(ConfigError::Invalid(format!(
                "{name}: give either pi.table or pi.constant_Mb, not both"
            ))),
            (None, None) => Err(ConfigError::Invalid(format!(
                "{name}: pi needs a table path or a constant_Mb anchor"
            ))),
            (None, Some(_)) if self.window_eV.is_none() => Err(ConfigError::Invalid(format!(
                "{name}: constant_Mb requires window_eV"
            ))),
            _ => Ok(()),
        }
    }

    fn build(&self, label: &str, base_dir: &Path) -> Result<CrossSectionTable, ConfigError> {
        if let Some(path) = &self.table {
            return Ok(load_table_from_path(&resolve(base_dir, path))?);
        }
        let value = self.constant_Mb.expect("validated");
        let [lo, hi] = self.window_eV.expect("validated");
        Ok(CrossSectionTable::constant(value, (lo, hi), label)?)
    }
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}
