//! Shared synthetic systems for unit tests.

use crate::continuum::BoxSpec;
use crate::engine::{EngineConfig, Mode};
use crate::presets;
use crate::units::{ANGSTROM_PER_BOHR, HARTREE_EV};
use crate::xs_data::{CrossSectionTable, Role, SpeciesSpec};

/// Both partners molecular, with a low synthetic donor ionization anchor so
/// the ~6.7 eV released by the acceptor's capture opens all four channel
/// families, including double dissociation.
pub(crate) fn both_molecular_config(n_grid: usize, r_max_scale: f64) -> EngineConfig {
    let window = (0.5, 40.0);
    let acceptor = SpeciesSpec::diatomic(
        Role::Acceptor,
        7.7,
        1.0,
        CrossSectionTable::constant(6.0, window, "pi_a").unwrap(),
        presets::lih_cation_curve(),
        presets::lih_curve(),
    )
    .unwrap();
    let donor = SpeciesSpec::diatomic(
        Role::Donor,
        3.0,
        1.0,
        CrossSectionTable::constant(7.13, window, "pi_d").unwrap(),
        presets::lih_curve(),
        presets::lih_cation_curve(),
    )
    .unwrap();
    EngineConfig {
        acceptor,
        donor,
        r_ad_angstrom: 4.0,
        box_spec: BoxSpec::new(
            0.3,
            r_max_scale * 8.0 / ANGSTROM_PER_BOHR,
            n_grid,
            10.0 / HARTREE_EV,
        )
        .unwrap(),
        mode: Mode::FranckCondon,
    }
}
