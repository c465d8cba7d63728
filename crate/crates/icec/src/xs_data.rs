//! Photoionization cross-section data: tabulated curves, interpolation,
//! detailed-balance conversion to photorecombination, vibrationally resolved
//! sets and branching-ratio resolution.
//!
//! Tables are stored in external units (photon energy in eV, cross section
//! in Mb). No extrapolation is ever performed: querying outside a table's
//! energy range is a hard error.

use crate::morse::MorseParams;
use crate::units::{HARTREE_EV, SPEED_OF_LIGHT_AU};
use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum XsError {
    #[error("row {row}: {msg}")]
    Malformed { row: usize, msg: String },
    #[error("row {row}: energies must be strictly increasing")]
    NonMonotone { row: usize },
    #[error("row {row}: negative cross section {value}")]
    Negative { row: usize, value: f64 },
    #[error("table '{label}' needs at least 2 rows (got {rows}); one-row tables require a validity window")]
    TooShort { label: String, rows: usize },
    #[error("energy {omega} eV outside table '{label}' range [{lo}, {hi}] eV")]
    OutOfRange {
        omega: f64,
        lo: f64,
        hi: f64,
        label: String,
    },
    #[error("outgoing electron energy must be positive, got {0} eV")]
    NonPositiveEpsilon(f64),
    #[error("branching ratios at {omega} eV sum to {sum}, expected 1 within 1e-3")]
    BranchingSum { omega: f64, sum: f64 },
    #[error("v-ratio system is singular (ratios sum to zero)")]
    SingularRatios,
    #[error("species spec: {0}")]
    BadSpecies(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Tabulated cross section vs photon energy with piecewise-linear
/// interpolation. A degenerate one-point table is allowed and treated as
/// constant over a declared validity window.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossSectionTable {
    /// Photon energies, eV, strictly increasing.
    pub energies: Vec<f64>,
    /// Cross sections, Mb, non-negative.
    pub values: Vec<f64>,
    pub label: String,
    /// Validity window for one-point constant tables.
    pub window: Option<(f64, f64)>,
}

impl CrossSectionTable {
    pub fn new(energies: Vec<f64>, values: Vec<f64>, label: &str) -> Result<Self, XsError> {
        if energies.len() < 2 {
            return Err(XsError::TooShort {
                label: label.to_string(),
                rows: energies.len(),
            });
        }
        Self::validate(&energies, &values)?;
        Ok(CrossSectionTable {
            energies,
            values,
            label: label.to_string(),
            window: None,
        })
    }

    /// Constant cross section over the window [lo, hi] eV.
    pub fn constant(value: f64, window: (f64, f64), label: &str) -> Result<Self, XsError> {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(XsError::Negative { row: 1, value });
        }
        if !(window.1 > window.0) {
            return Err(XsError::Malformed {
                row: 1,
                msg: format!("empty validity window [{}, {}]", window.0, window.1),
            });
        }
        Ok(CrossSectionTable {
            energies: vec![0.5 * (window.0 + window.1)],
            values: vec![value],
            label: label.to_string(),
            window: Some(window),
        })
    }

    fn validate(energies: &[f64], values: &[f64]) -> Result<(), XsError> {
        for (i, w) in energies.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(XsError::NonMonotone { row: i + 2 });
            }
        }
        for (i, &v) in values.iter().enumerate() {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(XsError::Negative { row: i + 1, value: v });
            }
        }
        Ok(())
    }

    pub fn range(&self) -> (f64, f64) {
        match self.window {
            Some(w) => w,
            None => (self.energies[0], *self.energies.last().unwrap()),
        }
    }

    /// Piecewise-linear value at `omega` (eV); out-of-range is an error.
    pub fn interpolate(&self, omega: f64) -> Result<f64, XsError> {
        let (lo, hi) = self.range();
        if omega < lo || omega > hi {
            return Err(XsError::OutOfRange {
                omega,
                lo,
                hi,
                label: self.label.clone(),
            });
        }
        if self.window.is_some() {
            return Ok(self.values[0]);
        }
        // partition_point gives the first node >= omega
        let idx = self.energies.partition_point(|&e| e < omega);
        if idx == 0 {
            return Ok(self.values[0]);
        }
        if idx == self.energies.len() {
            return Ok(*self.values.last().unwrap());
        }
        let (e0, e1) = (self.energies[idx - 1], self.energies[idx]);
        let (v0, v1) = (self.values[idx - 1], self.values[idx]);
        let t = (omega - e0) / (e1 - e0);
        Ok(v0 + t * (v1 - v0))
    }
}

/// Parse a `energy_eV,sigma_Mb` CSV stream into a validated table. Leading
/// `#` comment lines are skipped; parse failures carry the line number.
pub fn load_table<R: Read>(source: R, label: &str) -> Result<CrossSectionTable, XsError> {
    let reader = BufReader::new(source);
    let mut energies = Vec::new();
    let mut values = Vec::new();
    let mut saw_header = false;
    for (i, line) in reader.lines().enumerate() {
        let row = i + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if !saw_header {
            let norm: String = trimmed.split(',').map(str::trim).collect::<Vec<_>>().join(",");
            if norm != "energy_eV,sigma_Mb" {
                return Err(XsError::Malformed {
                    row,
                    msg: format!("expected header 'energy_eV,sigma_Mb', got '{trimmed}'"),
                });
            }
            saw_header = true;
            continue;
        }
        let mut parts = trimmed.split(',');
        let e: f64 = parts
            .next()
            .unwrap_or("")
            .trim()
            .parse()
            .map_err(|e| XsError::Malformed {
                row,
                msg: format!("bad energy field: {e}"),
            })?;
        let v: f64 = parts
            .next()
            .ok_or(XsError::Malformed {
                row,
                msg: "missing sigma_Mb field".into(),
            })?
            .trim()
            .parse()
            .map_err(|e| XsError::Malformed {
                row,
                msg: format!("bad sigma field: {e}"),
            })?;
        if let Some(&last) = energies.last() {
            if !(e > last) {
                return Err(XsError::NonMonotone { row });
            }
        }
        if !(v >= 0.0) || !v.is_finite() {
            return Err(XsError::Negative { row, value: v });
        }
        energies.push(e);
        values.push(v);
    }
    CrossSectionTable::new(energies, values, label)
}

pub fn load_table_from_path(path: &Path) -> Result<CrossSectionTable, XsError> {
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    let file = std::fs::File::open(path)?;
    load_table(file, &label)
}

/// Photorecombination cross section from photoionization by detailed
/// balance: σ_PR = ω²/(2 ε c²) · (g⁻/g) · σ_PI, with ω and ε in eV and the
/// cross sections in Mb. The ratio is dimensionless in atomic units, so the
/// Mb scale passes straight through.
pub fn pr_from_pi(sigma_pi: f64, omega: f64, epsilon: f64, g_ratio: f64) -> Result<f64, XsError> {
    if epsilon <= 0.0 {
        return Err(XsError::NonPositiveEpsilon(epsilon));
    }
    let w = omega / HARTREE_EV;
    let e = epsilon / HARTREE_EV;
    let c2 = SPEED_OF_LIGHT_AU * SPEED_OF_LIGHT_AU;
    Ok(w * w / (2.0 * e * c2) * g_ratio * sigma_pi)
}

/// Key of one vibrationally resolved channel (initial ν, final ν₊).
pub type ChannelKey = (u32, u32);

/// Vibrationally resolved photoionization tables σ_{ν ν₊}(ω).
#[derive(Debug, Clone, Default)]
pub struct ResolvedPiSet {
    pub tables: BTreeMap<ChannelKey, CrossSectionTable>,
}

impl ResolvedPiSet {
    pub fn get(&self, nu: u32, nu_plus: u32) -> Option<&CrossSectionTable> {
        self.tables.get(&(nu, nu_plus))
    }

    /// Load every `pi_nu{ν}_nup{ν₊}.csv` in a directory.
    pub fn load_dir(dir: &Path) -> Result<Self, XsError> {
        let mut tables = BTreeMap::new();
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            let name = match path.file_name().and_then(|n| n.to_str()) {
                Some(n) => n,
                None => continue,
            };
            if let Some(key) = parse_resolved_name(name) {
                tables.insert(key, load_table_from_path(&path)?);
            }
        }
        Ok(ResolvedPiSet { tables })
    }

    /// Write the set back out in the `pi_nu{ν}_nup{ν₊}.csv` layout.
    pub fn write_dir(&self, dir: &Path) -> Result<(), XsError> {
        std::fs::create_dir_all(dir)?;
        for (&(nu, nup), table) in &self.tables {
            let mut text = String::from("energy_eV,sigma_Mb\n");
            for (e, v) in table.energies.iter().zip(&table.values) {
                text.push_str(&format!("{e:.10e},{v:.10e}\n"));
            }
            std::fs::write(dir.join(format!("pi_nu{nu}_nup{nup}.csv")), text)?;
        }
        Ok(())
    }
}

fn parse_resolved_name(name: &str) -> Option<ChannelKey> {
    let stem = name.strip_suffix(".csv")?;
    let rest = stem.strip_prefix("pi_nu")?;
    let (nu, nup) = rest.split_once("_nup")?;
    Some((nu.parse().ok()?, nup.parse().ok()?))
}

/// Resolve a per-ν partial cross section into per-(ν, ν₊) tables from
/// branching fractions BR_{νν₊}(ω) that sum to 1 at every queried ω.
///
/// Output tables live on the energy grid of `sigma_nu`.
pub fn resolve_branching_fractions(
    sigma_nu: &CrossSectionTable,
    nu: u32,
    fractions: &BTreeMap<u32, CrossSectionTable>,
) -> Result<ResolvedPiSet, XsError> {
    let grid = output_grid(sigma_nu);
    let mut per_channel: BTreeMap<u32, Vec<f64>> =
        fractions.keys().map(|&k| (k, Vec::new())).collect();
    for &omega in &grid {
        let sigma = sigma_nu.interpolate(omega)?;
        let mut sum = 0.0;
        for (&nup, table) in fractions {
            let br = table.interpolate(omega)?;
            sum += br;
            per_channel.get_mut(&nup).unwrap().push(br * sigma);
        }
        if (sum - 1.0).abs() > 1e-3 {
            return Err(XsError::BranchingSum { omega, sum });
        }
    }
    assemble_resolved(nu, grid, per_channel, sigma_nu)
}

/// Resolve from v-ratios r_{ν₊}(ω) = σ_{νν₊}/σ_{ν,ref}: the per-ω linear
/// system σ_ref Σ r = σ_ν is solved, with the reference channel's ratio
/// fixed at 1. `sigma_nu` may be the per-ν partial cross section or the
/// unresolved table standing in for it.
pub fn resolve_branching_vratios(
    sigma_nu: &CrossSectionTable,
    nu: u32,
    reference_nup: u32,
    ratios: &BTreeMap<u32, CrossSectionTable>,
) -> Result<ResolvedPiSet, XsError> {
    let grid = output_grid(sigma_nu);
    let mut channels: Vec<u32> = ratios.keys().copied().collect();
    if !channels.contains(&reference_nup) {
        channels.push(reference_nup);
        channels.sort_unstable();
    }
    let mut per_channel: BTreeMap<u32, Vec<f64>> =
        channels.iter().map(|&k| (k, Vec::new())).collect();
    for &omega in &grid {
        let sigma = sigma_nu.interpolate(omega)?;
        let mut rsum = 0.0;
        let mut rs = BTreeMap::new();
        for &nup in &channels {
            let r = if nup == reference_nup {
                1.0
            } else {
                ratios[&nup].interpolate(omega)?
            };
            rsum += r;
            rs.insert(nup, r);
        }
        if rsum <= 0.0 || !rsum.is_finite() {
            return Err(XsError::SingularRatios);
        }
        let sigma_ref = sigma / rsum;
        for (&nup, &r) in &rs {
            per_channel.get_mut(&nup).unwrap().push(r * sigma_ref);
        }
    }
    assemble_resolved(nu, grid, per_channel, sigma_nu)
}

fn output_grid(sigma_nu: &CrossSectionTable) -> Vec<f64> {
    match sigma_nu.window {
        Some((lo, hi)) => vec![lo, hi],
        None => sigma_nu.energies.clone(),
    }
}

fn assemble_resolved(
    nu: u32,
    grid: Vec<f64>,
    per_channel: BTreeMap<u32, Vec<f64>>,
    sigma_nu: &CrossSectionTable,
) -> Result<ResolvedPiSet, XsError> {
    let mut tables = BTreeMap::new();
    for (nup, values) in per_channel {
        tables.insert(
            (nu, nup),
            CrossSectionTable::new(
                grid.clone(),
                values,
                &format!("{}_nu{nu}_nup{nup}", sigma_nu.label),
            )?,
        );
    }
    Ok(ResolvedPiSet { tables })
}

/// Which side of the capture a species sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Acceptor,
    Donor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpeciesKind {
    Atomic,
    Diatomic,
}

/// Everything the engine needs to know about one partner: the ionization
/// anchor, statistical weights, the photoionization table, and for a
/// diatomic the two potential curves (initial electronic state and the
/// post-transition state).
#[derive(Debug, Clone)]
pub struct SpeciesSpec {
    pub role: Role,
    pub kind: SpeciesKind,
    /// Ionization potential / electron-affinity anchor, eV. For a diatomic
    /// this is the minimum-to-minimum separation of the two curves.
    pub ip_reference: f64,
    /// g(final)/g(initial) ratio entering detailed balance.
    pub multiplicity_ratio: f64,
    pub pi_table: CrossSectionTable,
    /// Initial electronic curve (atomic units), diatomic only.
    pub initial_curve: Option<MorseParams>,
    /// Final (ionized/attached) electronic curve, diatomic only.
    pub final_curve: Option<MorseParams>,
    pub resolved_pi: Option<ResolvedPiSet>,
}

impl SpeciesSpec {
    pub fn atomic(
        role: Role,
        ip_reference: f64,
        multiplicity_ratio: f64,
        pi_table: CrossSectionTable,
    ) -> Result<Self, XsError> {
        if !(ip_reference > 0.0) {
            return Err(XsError::BadSpecies(format!(
                "ip_reference must be positive, got {ip_reference}"
            )));
        }
        Ok(SpeciesSpec {
            role,
            kind: SpeciesKind::Atomic,
            ip_reference,
            multiplicity_ratio,
            pi_table,
            initial_curve: None,
            final_curve: None,
            resolved_pi: None,
        })
    }

    pub fn diatomic(
        role: Role,
        ip_reference: f64,
        multiplicity_ratio: f64,
        pi_table: CrossSectionTable,
        initial_curve: MorseParams,
        final_curve: MorseParams,
    ) -> Result<Self, XsError> {
        if !(ip_reference > 0.0) {
            return Err(XsError::BadSpecies(format!(
                "ip_reference must be positive, got {ip_reference}"
            )));
        }
        Ok(SpeciesSpec {
            role,
            kind: SpeciesKind::Diatomic,
            ip_reference,
            multiplicity_ratio,
            pi_table,
            initial_curve: Some(initial_curve),
            final_curve: Some(final_curve),
            resolved_pi: None,
        })
    }

    pub fn with_resolved_pi(mut self, set: ResolvedPiSet) -> Self {
        self.resolved_pi = Some(set);
        self
    }
}
