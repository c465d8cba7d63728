//! Morse potential with its analytic bound spectrum and eigenfunctions.
//!
//! The asymptote convention is V(R→∞) = 0, so bound levels carry negative
//! energies and dissociative states positive ones. All quantities are in
//! Hartree atomic units.

use crate::special::{laguerre, ln_gamma};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MorseError {
    #[error("invalid Morse parameters: {0}")]
    InvalidParams(String),
    #[error("vibrational quantum number {nu} out of range (potential supports {count} bound states)")]
    NuOutOfRange { nu: u32, count: usize },
    #[error("grid must be strictly increasing and positive")]
    BadGrid,
}

/// One electronic potential-energy curve in Morse form.
///
/// `v_inf` is the absolute offset of the R → ∞ asymptote, used when taking
/// differences between two curves; the potential and level energies returned
/// here are always relative to this curve's own asymptote.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorseParams {
    /// Dissociation depth D_e > 0 (Hartree).
    pub d_e: f64,
    /// Harmonic frequency ω_e (Hartree).
    pub omega_e: f64,
    /// Equilibrium separation R_e (Bohr).
    pub r_e: f64,
    /// Reduced mass (electron masses).
    pub mu: f64,
    /// Absolute asymptote offset (Hartree).
    pub v_inf: f64,
}

impl MorseParams {
    pub fn new(d_e: f64, omega_e: f64, r_e: f64, mu: f64) -> Result<Self, MorseError> {
        if !(d_e > 0.0) || !(omega_e > 0.0) || !(r_e > 0.0) || !(mu > 0.0) {
            return Err(MorseError::InvalidParams(format!(
                "D_e, omega_e, R_e, mu must all be positive (got {d_e}, {omega_e}, {r_e}, {mu})"
            )));
        }
        let x_e = omega_e / (4.0 * d_e);
        if x_e >= 0.5 {
            return Err(MorseError::InvalidParams(format!(
                "anharmonicity x_e = {x_e:.4} >= 1/2: potential supports no bound state"
            )));
        }
        Ok(MorseParams {
            d_e,
            omega_e,
            r_e,
            mu,
            v_inf: 0.0,
        })
    }

    pub fn with_v_inf(mut self, v_inf: f64) -> Self {
        self.v_inf = v_inf;
        self
    }

    /// Exponential range parameter a = ω_e √(μ / 2D_e).
    pub fn range_parameter(&self) -> f64 {
        self.omega_e * (self.mu / (2.0 * self.d_e)).sqrt()
    }

    /// Depth parameter λ = 2D_e/ω_e = √(2 μ D_e)/a.
    pub fn lambda(&self) -> f64 {
        2.0 * self.d_e / self.omega_e
    }

    /// Anharmonicity constant x_e = ω_e/(4D_e).
    pub fn x_e(&self) -> f64 {
        self.omega_e / (4.0 * self.d_e)
    }
}

/// A bound vibrational level; `energy` < 0 relative to the curve's asymptote.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundLevel {
    pub nu: u32,
    pub energy: f64,
}

/// Value of the potential at separation R, relative to the asymptote.
pub fn potential_value(p: &MorseParams, r: f64) -> f64 {
    let a = p.range_parameter();
    let e = (-a * (r - p.r_e)).exp();
    p.d_e * (1.0 - e) * (1.0 - e) - p.d_e
}

/// All bound levels E_ν = −(ω_e²/4D_e)(λ − ν − ½)², ordered by ν.
pub fn bound_spectrum(p: &MorseParams) -> Vec<BoundLevel> {
    let lambda = p.lambda();
    let scale = p.omega_e * p.omega_e / (4.0 * p.d_e);
    let mut out = Vec::new();
    let mut nu = 0u32;
    while (nu as f64 + 0.5) < lambda {
        let d = lambda - nu as f64 - 0.5;
        out.push(BoundLevel {
            nu,
            energy: -scale * d * d,
        });
        nu += 1;
    }
    out
}

/// An analytic bound eigenfunction sampled on a radial grid and renormalized
/// to unity under trapezoidal quadrature on that grid.
#[derive(Debug, Clone)]
pub struct BoundWavefunction {
    pub nu: u32,
    pub amplitudes: Vec<f64>,
    /// |1 − ∫ψ² dR| of the analytically normalized form before grid
    /// renormalization; large values flag a grid that truncates or
    /// under-resolves the state.
    pub norm_defect: f64,
}

impl BoundWavefunction {
    /// True when the grid reproduced the analytic normalization to 1e-6.
    pub fn grid_adequate(&self) -> bool {
        self.norm_defect < 1e-6
    }
}

/// Sample the analytic Morse eigenfunction for level `nu` on `grid`.
///
/// The amplitude at R is N z^s e^{−z/2} L_ν^{(2s)}(z) with z = 2λ e^{−a(R−R_e)}
/// and s = λ − ν − ½; the prefactor is assembled in log space so that high
/// levels do not overflow.
pub fn bound_wavefunction(
    p: &MorseParams,
    nu: u32,
    grid: &[f64],
) -> Result<BoundWavefunction, MorseError> {
    let count = bound_spectrum(p).len();
    if (nu as usize) >= count {
        return Err(MorseError::NuOutOfRange { nu, count });
    }
    if grid.len() < 2 || grid[0] <= 0.0 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(MorseError::BadGrid);
    }

    let a = p.range_parameter();
    let lambda = p.lambda();
    let s = lambda - nu as f64 - 0.5;
    let alpha = 2.0 * s;
    // N² = a (2λ − 2ν − 1) ν! / Γ(2λ − ν)
    let log_norm = 0.5
        * (a.ln() + (2.0 * s).ln() + ln_gamma(nu as f64 + 1.0) - ln_gamma(2.0 * lambda - nu as f64));

    let mut amplitudes = Vec::with_capacity(grid.len());
    for &r in grid {
        let z = 2.0 * lambda * (-a * (r - p.r_e)).exp();
        let log_pref = log_norm + s * z.ln() - 0.5 * z;
        let value = if log_pref < -700.0 {
            0.0
        } else {
            laguerre(nu, alpha, z) * log_pref.exp()
        };
        amplitudes.push(value);
    }

    let norm = trapezoid_norm(grid, &amplitudes);
    let norm_defect = (norm - 1.0).abs();
    if norm <= 0.0 || !norm.is_finite() {
        return Err(MorseError::BadGrid);
    }
    let scale = norm.sqrt().recip();
    for v in &mut amplitudes {
        *v *= scale;
    }
    Ok(BoundWavefunction {
        nu,
        amplitudes,
        norm_defect,
    })
}

/// ∫ f g dR by the trapezoidal rule on a shared (not necessarily uniform) grid.
pub fn trapezoid_overlap(grid: &[f64], f: &[f64], g: &[f64]) -> f64 {
    debug_assert_eq!(grid.len(), f.len());
    debug_assert_eq!(grid.len(), g.len());
    let mut acc = 0.0;
    for i in 1..grid.len() {
        let h = grid[i] - grid[i - 1];
        acc += 0.5 * h * (f[i] * g[i] + f[i - 1] * g[i - 1]);
    }
    acc
}

fn trapezoid_norm(grid: &[f64], f: &[f64]) -> f64 {
    trapezoid_overlap(grid, f, f)
}

/// Uniform radial grid helper. The default covers the classical turning
/// points of every bound state of the shipped LiH/LiH⁺ curves.
pub fn uniform_grid(r_min: f64, r_max: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && r_max > r_min && r_min > 0.0);
    let h = (r_max - r_min) / (n - 1) as f64;
    (0..n).map(|i| r_min + h * i as f64).collect()
}

pub fn default_grid() -> Vec<f64> {
    uniform_grid(0.3, 16.0, 4000)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{HARTREE_EV, WAVENUMBER_PER_HARTREE};
    use approx::assert_relative_eq;

    fn lih() -> MorseParams {
        MorseParams::new(
            2.4924 / HARTREE_EV,
            1406.18 / WAVENUMBER_PER_HARTREE,
            3.0148,
            1618.09,
        )
        .unwrap()
    }

    fn lih_cation() -> MorseParams {
        // reduced mass taken from the neutral; the electron's absence is
        // negligible at the stated precision
        MorseParams::new(
            0.14374 / HARTREE_EV,
            442.9 / WAVENUMBER_PER_HARTREE,
            4.136,
            1618.09,
        )
        .unwrap()
    }

    #[test]
    fn potential_minimum_is_minus_de() {
        let p = lih();
        let v = potential_value(&p, p.r_e) * HARTREE_EV;
        assert_relative_eq!(v, -2.4924, max_relative = 1e-12);
    }

    #[test]
    fn potential_asymptote_is_zero() {
        let p = lih();
        let v = potential_value(&p, 50.0) * HARTREE_EV;
        assert!(v.abs() < 1e-10, "got {v}");
    }

    #[test]
    fn cation_potential_at_neutral_equilibrium() {
        // direct evaluation of the Morse form with a⁺ = ω_e⁺ √(μ/2D_e⁺)
        let p = lih_cation();
        let v = potential_value(&p, 3.0148) * HARTREE_EV;
        assert!((v - 0.1478).abs() < 1e-3, "got {v}");
    }

    #[test]
    fn bound_state_counts() {
        assert_eq!(bound_spectrum(&lih_cation()).len(), 5);
        // λ = 28.592 for the neutral fit, i.e. 29 levels
        let n = bound_spectrum(&lih()).len();
        assert!((n as i64 - 30).abs() <= 1, "got {n}");
        assert_eq!(n, 29);
    }

    #[test]
    fn ground_level_energy() {
        let levels = bound_spectrum(&lih());
        let e0 = levels[0].energy * HARTREE_EV;
        assert!((e0 - (-2.4060)).abs() < 1e-3, "got {e0}");
    }

    #[test]
    fn levels_negative_and_increasing() {
        for p in [lih(), lih_cation()] {
            let levels = bound_spectrum(&p);
            assert!(!levels.is_empty());
            for w in levels.windows(2) {
                assert!(w[0].energy < w[1].energy);
            }
            for l in &levels {
                assert!(l.energy > -p.d_e && l.energy < 0.0);
            }
        }
    }

    #[test]
    fn harmonic_limit_spacing() {
        // deep well at fixed omega_e: E1 − E0 → omega_e
        let omega = 0.005;
        let d_e = omega / (4.0 * 5e-4); // x_e = 5e-4
        let p = MorseParams::new(d_e, omega, 2.0, 1000.0).unwrap();
        assert!(p.x_e() < 1e-3);
        let levels = bound_spectrum(&p);
        let gap = levels[1].energy - levels[0].energy;
        assert_relative_eq!(gap, omega, max_relative = 1e-3);
    }

    #[test]
    fn no_bound_state_rejected() {
        let err = MorseParams::new(0.001, 0.01, 2.0, 100.0).unwrap_err();
        assert!(matches!(err, MorseError::InvalidParams(_)));
    }

    fn node_count(psi: &[f64]) -> usize {
        // ignore the numerically-zero tails
        let max = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let cut = 1e-8 * max;
        let mut last = 0.0f64;
        let mut nodes = 0;
        for &v in psi {
            if v.abs() < cut {
                continue;
            }
            if last != 0.0 && v.signum() != last.signum() {
                nodes += 1;
            }
            last = v;
        }
        nodes
    }

    #[test]
    fn node_counts_match_quantum_number() {
        let p = lih();
        let grid = default_grid();
        for nu in [0u32, 1, 2, 7, 15, 28] {
            let wf = bound_wavefunction(&p, nu, &grid).unwrap();
            assert_eq!(node_count(&wf.amplitudes), nu as usize, "nu = {nu}");
        }
    }

    #[test]
    fn ground_state_normalization_on_coarser_grid() {
        let p = lih();
        let grid = uniform_grid(0.5, 15.0, 4000);
        let wf = bound_wavefunction(&p, 0, &grid).unwrap();
        assert!(wf.norm_defect < 1e-6, "defect {}", wf.norm_defect);
        assert!(wf.grid_adequate());
    }

    fn assert_orthonormal(grid: &[f64], wfs: &[BoundWavefunction], tol: f64) {
        for i in 0..wfs.len() {
            for j in i..wfs.len() {
                let ov = trapezoid_overlap(grid, &wfs[i].amplitudes, &wfs[j].amplitudes);
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ov - expect).abs() < tol, "<{i}|{j}> = {ov}");
            }
        }
    }

    #[test]
    fn orthonormality_on_default_grid() {
        // the default grid holds every level whose outer turning point it
        // contains; the top two LiH levels (nu = 27, 28) are bound by less
        // than 1e-4 eV and need the extended grid below
        let p = lih();
        let grid = default_grid();
        let wfs: Vec<_> = (0..27)
            .map(|nu| bound_wavefunction(&p, nu, &grid).unwrap())
            .collect();
        assert_orthonormal(&grid, &wfs, 1e-5);
    }

    #[test]
    fn orthonormality_all_levels_on_extended_grid() {
        let p = lih();
        let grid = uniform_grid(0.3, 120.0, 24000);
        let wfs: Vec<_> = (0..29)
            .map(|nu| bound_wavefunction(&p, nu, &grid).unwrap())
            .collect();
        assert_orthonormal(&grid, &wfs, 1e-5);
    }

    #[test]
    fn invariants_hold_across_parameter_space() {
        // (D_e, omega_e, R_e, mu): shallow/deep wells, light/heavy masses
        let cases = [
            (0.002, 0.0008, 5.0, 3000.0),
            (0.01, 0.004, 1.5, 900.0),
            (0.05, 0.002, 2.5, 5000.0),
            (0.2, 0.01, 1.2, 1836.0),
            (0.09, 0.0064, 3.0, 1618.0),
            (0.0053, 0.002, 4.1, 1618.0),
            (0.5, 0.02, 0.9, 10000.0),
        ];
        for &(d_e, omega_e, r_e, mu) in &cases {
            let p = MorseParams::new(d_e, omega_e, r_e, mu).unwrap();
            let levels = bound_spectrum(&p);
            assert!(!levels.is_empty());
            assert_relative_eq!(potential_value(&p, r_e), -d_e, max_relative = 1e-12);
            for w in levels.windows(2) {
                assert!(w[0].energy < w[1].energy);
            }
            for l in &levels {
                assert!(l.energy > -d_e && l.energy < 0.0);
            }
            // a grid wide enough for the low states of every case
            let a = p.range_parameter();
            let grid = uniform_grid(
                (r_e - 8.0 / a).max(0.05 * r_e),
                r_e + 14.0 / a,
                6000,
            );
            let n_check = 3.min(levels.len());
            let wfs: Vec<_> = (0..n_check as u32)
                .map(|nu| bound_wavefunction(&p, nu, &grid).unwrap())
                .collect();
            for (i, wf) in wfs.iter().enumerate() {
                assert_eq!(node_count(&wf.amplitudes), i, "{d_e} {omega_e}");
                for (j, other) in wfs.iter().enumerate() {
                    let ov = trapezoid_overlap(&grid, &wf.amplitudes, &other.amplitudes);
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (ov - expect).abs() < 1e-6,
                        "case {d_e} {omega_e}: <{i}|{j}> = {ov}"
                    );
                }
            }
        }
    }

    #[test]
    fn nu_out_of_range_is_error() {
        let p = lih_cation();
        let grid = default_grid();
        let err = bound_wavefunction(&p, 5, &grid).unwrap_err();
        assert!(matches!(err, MorseError::NuOutOfRange { nu: 5, count: 5 }));
    }

    #[test]
    fn shallow_grid_flags_truncation() {
        // highest cation level leaks past 15 bohr; the defect must say so
        let p = lih_cation();
        let grid = uniform_grid(0.3, 15.0, 4000);
        let wf = bound_wavefunction(&p, 4, &grid).unwrap();
        assert!(wf.norm_defect > 1e-6);
        // still unit-normalized on the grid after rescaling
        let n = trapezoid_overlap(&grid, &wf.amplitudes, &wf.amplitudes);
        assert_relative_eq!(n, 1.0, max_relative = 1e-12);
    }
}
