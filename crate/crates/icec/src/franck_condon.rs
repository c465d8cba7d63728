//! Franck–Condon overlap factors between vibrational states of two
//! electronic curves: bound–bound factors and energy-normalized
//! bound–dissociative densities.

use crate::continuum::ContinuumSet;
use crate::morse::{bound_spectrum, bound_wavefunction, trapezoid_overlap, MorseError, MorseParams};
use std::io::Write;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FcError {
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error("continuum set is empty")]
    EmptyContinuum,
    #[error("writing table: {0}")]
    Io(#[from] std::io::Error),
}

/// |⟨ν_i | ν_f⟩|² between bound states of two curves, by trapezoidal
/// quadrature on a shared grid.
pub fn fc_bound_bound(
    p_i: &MorseParams,
    p_f: &MorseParams,
    nu_i: u32,
    nu_f: u32,
    grid: &[f64],
) -> Result<f64, FcError> {
    let wi = bound_wavefunction(p_i, nu_i, grid)?;
    let wf = bound_wavefunction(p_f, nu_f, grid)?;
    let ov = trapezoid_overlap(grid, &wi.amplitudes, &wf.amplitudes);
    Ok(ov * ov)
}

/// One sampled point of the bound→continuum factor density.
#[derive(Debug, Clone, Copy)]
pub struct FcDensityPoint {
    /// Continuum energy (Hartree, relative to the final-curve asymptote).
    pub energy: f64,
    /// |⟨ν_i|E⟩|² ρ(E), per Hartree.
    pub density: f64,
    /// Quadrature weight 1/ρ(E) of this box state (Hartree).
    pub weight: f64,
}

/// Energy-normalized factors |⟨ν_i|E⟩|²ρ(E) over the box-discretized
/// continuum of the final curve, tabulated on the box energies.
pub fn fc_bound_continuum(
    p_i: &MorseParams,
    continuum: &ContinuumSet,
    nu_i: u32,
) -> Result<Vec<FcDensityPoint>, FcError> {
    if continuum.states.is_empty() {
        return Err(FcError::EmptyContinuum);
    }
    let wi = bound_wavefunction(p_i, nu_i, &continuum.grid)?;
    let mut out = Vec::with_capacity(continuum.states.len());
    for s in &continuum.states {
        let ov = trapezoid_overlap(&continuum.grid, &wi.amplitudes, &s.wavefunction);
        out.push(FcDensityPoint {
            energy: s.energy,
            density: ov * ov * s.dos,
            weight: 1.0 / s.dos,
        });
    }
    Ok(out)
}

/// Bound factors, continuum factor density and the completeness sum for one
/// initial state.
#[derive(Debug, Clone)]
pub struct FcTable {
    pub initial_nu: u32,
    /// ν_f → |⟨ν_i|ν_f⟩|², indexed by the final-curve quantum number.
    pub bound_factors: Vec<f64>,
    pub continuum_density: Vec<FcDensityPoint>,
    /// Bound sum + continuum integral; 1 to within the box truncation.
    pub sum_rule: f64,
}

impl FcTable {
    pub fn bound_sum(&self) -> f64 {
        self.bound_factors.iter().sum()
    }

    /// ∫ density dE over the discretized energies with ρ weights, which for
    /// the box states reduces to the plain sum of squared overlaps.
    pub fn continuum_integral(&self) -> f64 {
        self.continuum_density
            .iter()
            .map(|p| p.density * p.weight)
            .sum()
    }

    /// CSV dump of the continuum factor density (energies in eV, density per
    /// eV) for plotting.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<(), FcError> {
        use crate::units::HARTREE_EV;
        writeln!(w, "energy_eV,fc_density_per_eV")?;
        for p in &self.continuum_density {
            writeln!(
                w,
                "{:.10e},{:.10e}",
                p.energy * HARTREE_EV,
                p.density / HARTREE_EV
            )?;
        }
        Ok(())
    }
}

/// Assemble bound and continuum factors plus the sum rule for initial state
/// `nu_i` of `p_i` against the bound spectrum of `p_f` and the given
/// continuum set of the same final curve.
pub fn fc_table(
    p_i: &MorseParams,
    p_f: &MorseParams,
    continuum: &ContinuumSet,
    nu_i: u32,
) -> Result<FcTable, FcError> {
    let n_f = bound_spectrum(p_f).len();
    let mut bound_factors = Vec::with_capacity(n_f);
    for nu_f in 0..n_f as u32 {
        bound_factors.push(fc_bound_bound(p_i, p_f, nu_i, nu_f, &continuum.grid)?);
    }
    let continuum_density = fc_bound_continuum(p_i, continuum, nu_i)?;
    let sum_rule = bound_factors.iter().sum::<f64>()
        + continuum_density
            .iter()
            .map(|p| p.density * p.weight)
            .sum::<f64>();
    Ok(FcTable {
        initial_nu: nu_i,
        bound_factors,
        continuum_density,
        sum_rule,
    })
}
