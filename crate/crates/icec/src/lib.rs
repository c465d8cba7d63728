//! Vibrationally resolved intermolecular Coulombic electron capture (ICEC).
//!
//! An electron attaches to an acceptor species while the released energy
//! ionizes a neighboring donor. This crate computes the asymptotic
//! (virtual-photon) cross section for that process with the internal
//! vibrational motion of both partners included: per-channel cross sections,
//! totals with bound and dissociative final states, outgoing-electron
//! spectra, and thermally averaged results.
//!
//! All internal computation is in Hartree atomic units; public interfaces
//! speak eV, Å, cm⁻¹, Mb and K.

pub mod config;
pub mod continuum;
pub mod engine;
pub mod franck_condon;
pub mod morse;
pub mod presets;
pub mod runner;
pub mod special;
#[cfg(test)]
pub(crate) mod test_fixtures;
pub mod spectrum;
pub mod tridiag;
pub mod units;
pub mod xs_data;
