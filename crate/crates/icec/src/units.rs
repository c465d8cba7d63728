//! Physical constants and unit conversions.
//!
//! All internal computation is carried out in Hartree atomic units; external
//! interfaces use eV, Å, cm⁻¹, Mb and K. Constant values are CODATA 2018 and
//! live in this one table only.

use thiserror::Error;

/// eV per Hartree.
pub const HARTREE_EV: f64 = 27.211386245988;
/// Å per Bohr radius.
pub const ANGSTROM_PER_BOHR: f64 = 0.529177210903;
/// cm⁻¹ per Hartree.
pub const WAVENUMBER_PER_HARTREE: f64 = 219474.6313632;
/// Speed of light in atomic units (inverse fine-structure constant).
pub const SPEED_OF_LIGHT_AU: f64 = 137.035999084;
/// Boltzmann constant in eV/K.
pub const BOLTZMANN_EV_PER_K: f64 = 8.617333262e-5;

/// Collection of conversion factors between atomic units and the external
/// unit system. One megabarn is 10⁻¹⁸ cm².
#[derive(Debug, Clone, Copy)]
pub struct UnitSystem {
    /// Hartree per eV.
    pub hartree_per_ev: f64,
    /// Bohr per Å.
    pub bohr_per_angstrom: f64,
    /// Hartree per cm⁻¹.
    pub hartree_per_wavenumber: f64,
    /// Mb per Bohr².
    pub megabarn_per_bohr2: f64,
    /// Speed of light, atomic units.
    pub speed_of_light_au: f64,
    /// Boltzmann constant in Hartree/K.
    pub boltzmann_constant: f64,
}

impl UnitSystem {
    pub const fn codata2018() -> Self {
        UnitSystem {
            hartree_per_ev: 1.0 / HARTREE_EV,
            bohr_per_angstrom: 1.0 / ANGSTROM_PER_BOHR,
            hartree_per_wavenumber: 1.0 / WAVENUMBER_PER_HARTREE,
            // (0.529177210903e-8 cm)^2 / 1e-18 cm^2
            megabarn_per_bohr2: ANGSTROM_PER_BOHR * ANGSTROM_PER_BOHR * 100.0,
            speed_of_light_au: SPEED_OF_LIGHT_AU,
            boltzmann_constant: BOLTZMANN_EV_PER_K / HARTREE_EV,
        }
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::codata2018()
    }
}

/// Units supported by [`convert`], grouped by dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Hartree,
    ElectronVolt,
    /// cm⁻¹ treated as an energy through hc.
    Wavenumber,
    Bohr,
    Angstrom,
    BohrSquared,
    Megabarn,
    Kelvin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dimension {
    Energy,
    Length,
    Area,
    Temperature,
}

impl Unit {
    fn dimension(self) -> Dimension {
        match self {
            Unit::Hartree | Unit::ElectronVolt | Unit::Wavenumber => Dimension::Energy,
            Unit::Bohr | Unit::Angstrom => Dimension::Length,
            Unit::BohrSquared | Unit::Megabarn => Dimension::Area,
            Unit::Kelvin => Dimension::Temperature,
        }
    }

    /// Value of one of this unit expressed in the atomic unit of its dimension.
    fn in_atomic_units(self) -> f64 {
        match self {
            Unit::Hartree => 1.0,
            Unit::ElectronVolt => 1.0 / HARTREE_EV,
            Unit::Wavenumber => 1.0 / WAVENUMBER_PER_HARTREE,
            Unit::Bohr => 1.0,
            Unit::Angstrom => 1.0 / ANGSTROM_PER_BOHR,
            Unit::BohrSquared => 1.0,
            Unit::Megabarn => 1.0 / (ANGSTROM_PER_BOHR * ANGSTROM_PER_BOHR * 100.0),
            Unit::Kelvin => 1.0,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UnitsError {
    #[error("cannot convert {from:?} to {to:?}: incompatible dimensions")]
    IncompatibleDimensions { from: Unit, to: Unit },
}

/// Exact ratio conversion between two units of the same dimension.
pub fn convert(value: f64, from: Unit, to: Unit) -> Result<f64, UnitsError> {
    if from.dimension() != to.dimension() {
        return Err(UnitsError::IncompatibleDimensions { from, to });
    }
    Ok(value * (from.in_atomic_units() / to.in_atomic_units()))
}

/// kT in Hartree for a temperature in Kelvin.
pub fn thermal_energy_hartree(temperature_k: f64) -> f64 {
    temperature_k * BOLTZMANN_EV_PER_K / HARTREE_EV
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hartree_ev_definition() {
        let x = convert(27.2114, Unit::ElectronVolt, Unit::Hartree).unwrap();
        assert_relative_eq!(x, 1.0, max_relative = 1e-4);
    }

    #[test]
    fn wavenumber_to_hartree() {
        // 1406.18 / 219474.63... = 6.407028e-3
        let x = convert(1406.18, Unit::Wavenumber, Unit::Hartree).unwrap();
        assert!((x - 0.0064070).abs() < 5e-8, "got {x}");
    }

    #[test]
    fn zero_maps_to_zero() {
        for u in [Unit::Hartree, Unit::Angstrom, Unit::Megabarn, Unit::Kelvin] {
            assert_eq!(convert(0.0, u, u).unwrap(), 0.0);
        }
    }

    #[test]
    fn incompatible_dimensions_rejected() {
        let err = convert(1.0, Unit::ElectronVolt, Unit::Bohr).unwrap_err();
        assert!(matches!(err, UnitsError::IncompatibleDimensions { .. }));
    }

    #[test]
    fn round_trips_to_1e12() {
        let pairs = [
            (Unit::Hartree, Unit::ElectronVolt),
            (Unit::Hartree, Unit::Wavenumber),
            (Unit::ElectronVolt, Unit::Wavenumber),
            (Unit::Bohr, Unit::Angstrom),
            (Unit::BohrSquared, Unit::Megabarn),
            (Unit::Kelvin, Unit::Kelvin),
        ];
        for &(a, b) in &pairs {
            for &x in &[1.0, 3.95, 1406.18, 1.7e-6, 8.4e7] {
                let y = convert(convert(x, a, b).unwrap(), b, a).unwrap();
                assert_relative_eq!(y, x, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn megabarn_consistent_with_bohr() {
        // 1 Mb = 1e-18 cm^2; bohr in cm = ANGSTROM_PER_BOHR * 1e-8
        let bohr_cm = ANGSTROM_PER_BOHR * 1e-8;
        let mb_per_bohr2 = bohr_cm * bohr_cm / 1e-18;
        let table = UnitSystem::codata2018().megabarn_per_bohr2;
        assert_relative_eq!(table, mb_per_bohr2, max_relative = 1e-10);
        assert_relative_eq!(table, 28.002852053908, max_relative = 1e-10);
    }

    #[test]
    fn boltzmann_constant_value() {
        let u = UnitSystem::codata2018();
        assert_relative_eq!(u.boltzmann_constant, 3.1668115634e-6, max_relative = 1e-9);
    }
}
