//! Shipped system parameters.
//!
//! The proton/lithium-hydride pair is the bundled worked system: an atomic
//! electron acceptor (H⁺, whose attached species H anchors the energy
//! bookkeeping at 13.6 eV) next to a diatomic donor (LiH) with Morse fits of
//! the neutral and cationic ground-state curves. The photoionization tables
//! are single-anchor constants, which is exact for every observable that
//! depends only on peak positions and ratios.

use crate::continuum::BoxSpec;
use crate::engine::{EngineConfig, Mode};
use crate::morse::MorseParams;
use crate::units::{ANGSTROM_PER_BOHR, HARTREE_EV, WAVENUMBER_PER_HARTREE};
use crate::xs_data::{CrossSectionTable, Role, SpeciesSpec};

/// H: ionization potential, eV.
pub const H_IP_EV: f64 = 13.6;
/// H: photoionization cross section at 14.6 eV, Mb.
pub const H_SIGMA_PI_MB: f64 = 5.23;
/// g(H)/g(H⁺) entering detailed balance.
pub const H_MULTIPLICITY_RATIO: f64 = 2.0;

/// LiH: ionization potential (minimum-to-minimum), eV.
pub const LIH_IP_EV: f64 = 7.7;
/// LiH: photoionization cross section at 14.6 eV, Mb.
pub const LIH_SIGMA_PI_MB: f64 = 7.13;
/// LiH: reduced mass, atomic units.
pub const LIH_MU_AU: f64 = 1618.09;
/// LiH X¹Σ⁺: equilibrium distance (Bohr), well depth (eV), frequency (cm⁻¹).
pub const LIH_RE_BOHR: f64 = 3.0148;
pub const LIH_DE_EV: f64 = 2.4924;
pub const LIH_OMEGA_CM1: f64 = 1406.18;
/// LiH⁺ X²Σ⁺ equivalents; the reduced mass is taken from the neutral.
pub const LIH_CATION_RE_BOHR: f64 = 4.136;
pub const LIH_CATION_DE_EV: f64 = 0.14374;
pub const LIH_CATION_OMEGA_CM1: f64 = 442.9;

/// Center-of-mass separation of the pair, Å.
pub const R_AD_ANGSTROM: f64 = 3.95;

pub fn lih_curve() -> MorseParams {
    MorseParams::new(
        LIH_DE_EV / HARTREE_EV,
        LIH_OMEGA_CM1 / WAVENUMBER_PER_HARTREE,
        LIH_RE_BOHR,
        LIH_MU_AU,
    )
    .expect("LiH curve parameters are valid")
}

pub fn lih_cation_curve() -> MorseParams {
    MorseParams::new(
        LIH_CATION_DE_EV / HARTREE_EV,
        LIH_CATION_OMEGA_CM1 / WAVENUMBER_PER_HARTREE,
        LIH_CATION_RE_BOHR,
        LIH_MU_AU,
    )
    .expect("LiH+ curve parameters are valid")
}

/// Default box: walls at 0.3 Bohr and 8 Å, 4000 grid points, continuum kept
/// up to the largest transferable energy of the run.
pub fn default_box(eps_max_ev: f64) -> BoxSpec {
    BoxSpec::new(
        0.3,
        8.0 / ANGSTROM_PER_BOHR,
        4000,
        (eps_max_ev + H_IP_EV) / HARTREE_EV,
    )
    .expect("default box is valid")
}

/// The H⁺ + LiH engine configuration with constant-anchor PI tables valid
/// for incoming electron energies up to `eps_max_ev`.
pub fn h_plus_lih_engine_config(eps_max_ev: f64) -> EngineConfig {
    let window = (5.0, H_IP_EV + eps_max_ev + 10.0);
    let acceptor = SpeciesSpec::atomic(
        Role::Acceptor,
        H_IP_EV,
        H_MULTIPLICITY_RATIO,
        CrossSectionTable::constant(H_SIGMA_PI_MB, window, "sigma_pi_H").unwrap(),
    )
    .unwrap();
    let donor = SpeciesSpec::diatomic(
        Role::Donor,
        LIH_IP_EV,
        1.0,
        CrossSectionTable::constant(LIH_SIGMA_PI_MB, window, "sigma_pi_LiH").unwrap(),
        lih_curve(),
        lih_cation_curve(),
    )
    .unwrap();
    EngineConfig {
        acceptor,
        donor,
        r_ad_angstrom: R_AD_ANGSTROM,
        box_spec: default_box(eps_max_ev),
        mode: Mode::FranckCondon,
    }
}

/// The shipped run configuration for the H⁺ + LiH system: an ε sweep to
/// 4 eV, a 1 eV spectrum at 15/300/1500 K, the 8 Å box.
pub fn h_plus_lih_run_config() -> crate::config::RunConfig {
    use crate::config::*;
    let window = [5.0, 30.0];
    RunConfig {
        schema_version: SCHEMA_VERSION,
        system: SystemConfig {
            r_ad_angstrom: R_AD_ANGSTROM,
            mode: "fc".into(),
            acceptor: SpeciesConfig {
                kind: "atomic".into(),
                ip_eV: H_IP_EV,
                multiplicity_ratio: H_MULTIPLICITY_RATIO,
                pi: PiConfig {
                    table: None,
                    constant_Mb: Some(H_SIGMA_PI_MB),
                    window_eV: Some(window),
                },
                initial_curve: None,
                final_curve: None,
                resolved_dir: None,
            },
            donor: SpeciesConfig {
                kind: "diatomic".into(),
                ip_eV: LIH_IP_EV,
                multiplicity_ratio: 1.0,
                pi: PiConfig {
                    table: None,
                    constant_Mb: Some(LIH_SIGMA_PI_MB),
                    window_eV: Some(window),
                },
                initial_curve: Some(CurveConfig {
                    d_e_eV: LIH_DE_EV,
                    omega_e_cm1: LIH_OMEGA_CM1,
                    r_e_bohr: LIH_RE_BOHR,
                    mu_au: Some(LIH_MU_AU),
                }),
                final_curve: Some(CurveConfig {
                    d_e_eV: LIH_CATION_DE_EV,
                    omega_e_cm1: LIH_CATION_OMEGA_CM1,
                    r_e_bohr: LIH_CATION_RE_BOHR,
                    mu_au: None,
                }),
                resolved_dir: None,
            },
        },
        box_config: BoxConfig {
            r_min_bohr: 0.3,
            r_max_angstrom: 8.0,
            n_grid: 4000,
            e_max_eV: None,
        },
        run: RunBlock {
            eps_min_eV: 0.1,
            eps_max_eV: 4.0,
            eps_steps: 40,
            eps_fixed_eV: 1.0,
            temperatures_K: vec![15.0, 300.0, 1500.0],
            gamma_eV: None,
            spectrum_points: None,
            initial: None,
        },
        output: OutputConfig {
            directory: std::path::PathBuf::from("out"),
        },
        base_dir: std::path::PathBuf::from("."),
    }
}

/// A synthetic system with the molecular species on the acceptor side and an
/// atomic donor; exercises the acceptor-side dissociation algebra. The
/// molecular curves reuse the LiH fits with the shallow curve as the initial
/// (capturing) state.
pub fn swapped_roles_engine_config(eps_max_ev: f64) -> EngineConfig {
    let window = (0.5, 40.0);
    let anchor_ev = 7.7;
    let donor_ip_ev = 4.0;
    let acceptor = SpeciesSpec::diatomic(
        Role::Acceptor,
        anchor_ev,
        1.0,
        CrossSectionTable::constant(6.0, window, "sigma_pi_acceptor").unwrap(),
        lih_cation_curve(),
        lih_curve(),
    )
    .unwrap();
    let donor = SpeciesSpec::atomic(
        Role::Donor,
        donor_ip_ev,
        2.0,
        CrossSectionTable::constant(5.0, window, "sigma_pi_donor").unwrap(),
    )
    .unwrap();
    EngineConfig {
        acceptor,
        donor,
        r_ad_angstrom: 4.0,
        box_spec: BoxSpec::new(
            0.3,
            8.0 / ANGSTROM_PER_BOHR,
            2000,
            (eps_max_ev + anchor_ev) / HARTREE_EV,
        )
        .unwrap(),
        mode: Mode::FranckCondon,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_curves_construct() {
        assert!(lih_curve().lambda() > 28.0);
        assert!(lih_cation_curve().lambda() > 5.0);
    }

    #[test]
    fn preset_window_covers_run_range() {
        let cfg = h_plus_lih_engine_config(4.0);
        let (lo, hi) = cfg.acceptor.pi_table.range();
        assert!(lo <= H_IP_EV && hi >= H_IP_EV + 4.0);
    }
}
