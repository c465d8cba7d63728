//! Box-discretized dissociative nuclear states.
//!
//! Continuum (E > 0) solutions of the radial Schrödinger equation are
//! represented by Dirichlet eigenstates of a finite box, unit-normalized in
//! the box, with the energy normalization carried by the density of states
//! ρ(E_f) = 1/|E_{f+1} − E_f|.

use crate::morse::{potential_value, trapezoid_overlap, uniform_grid, MorseParams};
use crate::tridiag;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ContinuumError {
    #[error("invalid box: {0}")]
    BadBox(String),
    #[error("need at least two continuum states for a density of states, got {0}")]
    TooFewStates(usize),
    #[error("eigensolver returned no states in (0, {e_max}] Hartree")]
    NoStates { e_max: f64 },
}

/// Radial box for the discretization. Lengths in Bohr, energy in Hartree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub n_grid: usize,
    /// Highest continuum energy retained, relative to the curve asymptote.
    pub e_max: f64,
}

impl BoxSpec {
    pub fn new(r_min: f64, r_max: f64, n_grid: usize, e_max: f64) -> Result<Self, ContinuumError> {
        if !(r_min > 0.0 && r_max > r_min) {
            return Err(ContinuumError::BadBox(format!(
                "need 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if n_grid < 500 {
            return Err(ContinuumError::BadBox(format!(
                "n_grid = {n_grid} too coarse (minimum 500)"
            )));
        }
        if !(e_max > 0.0) {
            return Err(ContinuumError::BadBox(format!("e_max = {e_max} must be > 0")));
        }
        Ok(BoxSpec {
            r_min,
            r_max,
            n_grid,
            e_max,
        })
    }

    pub fn grid(&self) -> Vec<f64> {
        uniform_grid(self.r_min, self.r_max, self.n_grid)
    }

    pub fn step(&self) -> f64 {
        (self.r_max - self.r_min) / (self.n_grid - 1) as f64
    }
}

/// One box-discretized state: energy relative to the curve asymptote,
/// wavefunction sampled on the full box grid (zero at both walls),
/// density of states from the local level spacing.
#[derive(Debug, Clone)]
pub struct ContinuumState {
    pub energy: f64,
    pub wavefunction: Vec<f64>,
    pub dos: f64,
}

/// The set of continuum states of one curve, together with the grid they are
/// sampled on.
#[derive(Debug, Clone)]
pub struct ContinuumSet {
    pub grid: Vec<f64>,
    pub states: Vec<ContinuumState>,
}

/// Eigenpairs of the three-point finite-difference radial Hamiltonian with
/// Dirichlet walls, restricted to energies in (e_lo, e_hi].
fn solve_box(
    p: &MorseParams,
    spec: &BoxSpec,
    e_lo: f64,
    e_hi: f64,
) -> (Vec<f64>, Vec<f64>, Vec<Vec<f64>>) {
    let grid = spec.grid();
    let h = spec.step();
    let n_int = spec.n_grid - 2;
    let kin = 1.0 / (p.mu * h * h);
    let diag: Vec<f64> = (1..=n_int)
        .map(|i| kin + potential_value(p, grid[i]))
        .collect();
    let off = vec![-0.5 * kin; n_int - 1];

    let energies = tridiag::eigenvalues_in_window(&diag, &off, e_lo, e_hi);
    let mut vectors = Vec::with_capacity(energies.len());
    for &e in &energies {
        let v = tridiag::eigenvector(&diag, &off, e);
        // embed with the Dirichlet zeros and renormalize by trapezoid
        let mut full = vec![0.0; spec.n_grid];
        full[1..=n_int].copy_from_slice(&v);
        let norm = trapezoid_overlap(&grid, &full, &full).sqrt();
        for x in &mut full {
            *x /= norm;
        }
        vectors.push(full);
    }
    (grid, energies, vectors)
}

/// All dissociative box states with 0 < E ≤ e_max, energy-ordered.
///
/// One extra eigenvalue above `e_max` is solved for so that the last retained
/// state still gets a forward level spacing for its density of states; if the
/// window ends exactly at the spectrum top, the preceding gap is used.
pub fn box_states(p: &MorseParams, spec: &BoxSpec) -> Result<ContinuumSet, ContinuumError> {
    // a few free-particle level spacings past e_max for the last gap
    let spacing = std::f64::consts::PI * (2.0 * spec.e_max / p.mu).sqrt() / (spec.r_max - spec.r_min);
    let (grid, energies, vectors) = solve_box(p, spec, 0.0, spec.e_max + 10.0 * spacing);
    let retained: Vec<usize> = energies
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0.0 && e <= spec.e_max)
        .map(|(i, _)| i)
        .collect();
    if retained.is_empty() {
        return Err(ContinuumError::NoStates { e_max: spec.e_max });
    }
    let mut states = Vec::with_capacity(retained.len());
    for &i in &retained {
        let gap = if i + 1 < energies.len() {
            energies[i + 1] - energies[i]
        } else if i > 0 {
            energies[i] - energies[i - 1]
        } else {
            return Err(ContinuumError::TooFewStates(energies.len()));
        };
        states.push(ContinuumState {
            energy: energies[i],
            wavefunction: vectors[i].clone(),
            dos: 1.0 / gap.abs(),
        });
    }
    Ok(ContinuumSet { grid, states })
}

/// Bound (E < 0) solutions from the same boundary-value solver; these are the
/// cross-validation oracle against the analytic Morse spectrum.
pub fn bound_box_states(p: &MorseParams, spec: &BoxSpec) -> ContinuumSet {
    let (grid, energies, vectors) = solve_box(p, spec, -p.d_e, 0.0);
    let states = energies
        .into_iter()
        .zip(vectors)
        .map(|(energy, wavefunction)| ContinuumState {
            energy,
            wavefunction,
            dos: 0.0,
        })
        .collect();
    ContinuumSet { grid, states }
}

/// ρ(E_index) from the spacing to the next state; the last state reuses the
/// preceding gap.
pub fn density_of_states(states: &[ContinuumState], index: usize) -> Result<f64, ContinuumError> {
    if states.len() < 2 {
        return Err(ContinuumError::TooFewStates(states.len()));
    }
    assert!(index < states.len(), "index {index} out of bounds");
    let gap = if index + 1 < states.len() {
        states[index + 1].energy - states[index].energy
    } else {
        states[index].energy - states[index - 1].energy
    };
    Ok(1.0 / gap.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morse::bound_spectrum;
    use crate::units::{HARTREE_EV, WAVENUMBER_PER_HARTREE};
    use std::f64::consts::PI;

    fn lih_cation() -> MorseParams {
        MorseParams::new(
            0.14374 / HARTREE_EV,
            442.9 / WAVENUMBER_PER_HARTREE,
            4.136,
            1618.09,
        )
        .unwrap()
    }

    fn angstrom(a: f64) -> f64 {
        a / crate::units::ANGSTROM_PER_BOHR
    }

    #[test]
    fn free_particle_limit() {
        // nearly flat potential: levels must approach n²π²/(2 μ L²)
        let mu = 100.0;
        let p = MorseParams::new(1e-12, 1e-13, 5.0, mu).unwrap();
        let l = 20.0;
        let spec = BoxSpec::new(1.0, 1.0 + l, 2000, 1.0).unwrap();
        let set = box_states(&p, &spec).unwrap();
        for (n, s) in set.states.iter().take(20).enumerate() {
            let nf = (n + 1) as f64;
            let exact = nf * nf * PI * PI / (2.0 * mu * l * l);
            let rel = (s.energy - exact).abs() / exact;
            assert!(rel < 1e-3, "n = {} rel = {rel}", n + 1);
        }
    }

    #[test]
    fn states_positive_and_orthogonal() {
        let spec = BoxSpec::new(0.5, angstrom(8.0), 1500, 6.0 / HARTREE_EV).unwrap();
        let set = box_states(&lih_cation(), &spec).unwrap();
        assert!(set.states.len() > 20);
        for s in &set.states {
            assert!(s.energy > 0.0 && s.dos > 0.0);
            assert_eq!(s.wavefunction.first().copied(), Some(0.0));
            assert_eq!(s.wavefunction.last().copied(), Some(0.0));
        }
        for i in 0..set.states.len() {
            for j in (i + 1)..set.states.len() {
                let ov = trapezoid_overlap(
                    &set.grid,
                    &set.states[i].wavefunction,
                    &set.states[j].wavefunction,
                );
                assert!(ov.abs() < 1e-4, "<{i}|{j}> = {ov}");
            }
        }
    }

    #[test]
    fn state_count_scales_with_box_size() {
        // density of states grows linearly with the box length: equal box
        // increments add equal state counts (the inner wall contributes a
        // constant offset). Same grid step everywhere so the discretization
        // error matches.
        let e_cut = 6.0 / HARTREE_EV;
        let p = lih_cation();
        let count = |r_max: f64, n: usize| {
            let spec = BoxSpec::new(0.3, r_max, n, e_cut).unwrap();
            box_states(&p, &spec).unwrap().states.len() as i64
        };
        let n1 = count(15.0, 1600);
        let n2 = count(22.35, 2400);
        let n3 = count(29.7, 3200);
        assert!(n2 > n1 && n3 > n2);
        let (d1, d2) = (n2 - n1, n3 - n2);
        assert!((d2 - d1).abs() <= 2, "increments {d1} vs {d2}");
    }

    #[test]
    fn dos_definition() {
        let mk = |e: f64| ContinuumState {
            energy: e,
            wavefunction: vec![],
            dos: 0.0,
        };
        let states = vec![mk(1.0), mk(1.5)];
        assert_eq!(density_of_states(&states, 0).unwrap(), 2.0);
        assert_eq!(density_of_states(&states, 1).unwrap(), 2.0);
        assert!(matches!(
            density_of_states(&states[..1], 0),
            Err(ContinuumError::TooFewStates(1))
        ));
    }

    #[test]
    fn dos_times_gap_is_one() {
        let spec = BoxSpec::new(0.5, angstrom(8.0), 1200, 4.0 / HARTREE_EV).unwrap();
        let set = box_states(&lih_cation(), &spec).unwrap();
        for i in 0..set.states.len() - 1 {
            let gap = set.states[i + 1].energy - set.states[i].energy;
            let prod = set.states[i].dos * gap;
            assert!((prod - 1.0).abs() < 1e-9, "i = {i}: {prod}");
        }
    }

    #[test]
    fn dos_decreases_with_energy() {
        let spec = BoxSpec::new(0.5, angstrom(8.0), 2000, 6.0 / HARTREE_EV).unwrap();
        let set = box_states(&lih_cation(), &spec).unwrap();
        // spacing widens as sqrt(E) for free asymptotics
        let first = set.states.first().unwrap().dos;
        let last = set.states.last().unwrap().dos;
        assert!(first > last);
        for w in set.states.windows(2) {
            assert!(w[1].dos <= w[0].dos * 1.0001, "{} -> {}", w[0].dos, w[1].dos);
        }
    }

    #[test]
    fn box_bound_states_match_analytic_levels() {
        let p = lih_cation();
        let spec = BoxSpec::new(0.3, angstrom(8.0), 4000, 1.0).unwrap();
        let set = bound_box_states(&p, &spec);
        let analytic = bound_spectrum(&p);
        assert_eq!(set.states.len(), analytic.len());
        for (s, a) in set.states.iter().zip(&analytic) {
            let diff_ev = (s.energy - a.energy).abs() * HARTREE_EV;
            assert!(diff_ev < 1e-4, "nu = {}: diff {diff_ev} eV", a.nu);
        }
    }

    #[test]
    fn bad_box_rejected() {
        assert!(BoxSpec::new(0.0, 10.0, 1000, 1.0).is_err());
        assert!(BoxSpec::new(0.5, 10.0, 100, 1.0).is_err());
        assert!(BoxSpec::new(0.5, 10.0, 1000, 0.0).is_err());
    }
}
