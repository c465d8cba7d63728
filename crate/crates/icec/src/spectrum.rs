//! Outgoing-electron spectra at fixed incoming energy: bound-bound sticks,
//! bound-dissociative differential densities, Lorentz folding with
//! threshold cutoffs, and thermal superpositions.

use crate::engine::{Engine, EngineError, FinalState};
use crate::units::HARTREE_EV;
use std::f64::consts::PI;

/// Default Lorentzian half-width γ (eV); the full width 2γ is 0.16 eV.
pub const DEFAULT_GAMMA_EV: f64 = 0.08;

/// One bound-bound line.
#[derive(Debug, Clone)]
pub struct Stick {
    /// Outgoing electron energy, eV.
    pub eps_out: f64,
    /// Cross section, Mb (thermal weight already applied if any).
    pub sigma: f64,
    /// Folding cutoff: the dissociation edge of this stick's initial state.
    /// The folded line is suppressed below it, where the dissociative
    /// continuum takes over.
    pub cutoff: Option<f64>,
    pub label: String,
}

/// One sampled point of a differential density family.
#[derive(Debug, Clone, Copy)]
pub struct DensityPoint {
    /// Outgoing electron energy, eV.
    pub eps_out: f64,
    /// dσ/dε′, Mb/eV (Mb/eV² for double-dissociative families).
    pub value: f64,
    /// Energy-integration weight, eV (eV² for double-dissociative).
    pub weight: f64,
    /// Fragment kinetic energy of the dissociating species (the donor's for
    /// double-dissociative families), eV.
    pub fragment: f64,
}

/// A contiguous dissociative family: one continuum axis at fixed everything
/// else, sampled on the box energies, ascending in ε′.
#[derive(Debug, Clone)]
pub struct DensityFamily {
    pub label: String,
    /// True when both species dissociate (values are per eV²).
    pub double: bool,
    pub points: Vec<DensityPoint>,
}

impl DensityFamily {
    pub fn integral(&self) -> f64 {
        self.points.iter().map(|p| p.value * p.weight).sum()
    }
}

/// Decomposition of the outgoing-electron spectrum: sticks plus
/// differential densities, at one incoming energy (optionally thermally
/// averaged).
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub epsilon_in: f64,
    pub temperature: Option<f64>,
    pub sticks: Vec<Stick>,
    pub density: Vec<DensityFamily>,
}

impl Spectrum {
    /// Stick sum plus density integrals: the total cross section this
    /// spectrum decomposes.
    pub fn total(&self) -> f64 {
        self.sticks.iter().map(|s| s.sigma).sum::<f64>()
            + self.density.iter().map(|f| f.integral()).sum::<f64>()
    }

    pub fn max_eps_out(&self) -> f64 {
        let stick_max = self
            .sticks
            .iter()
            .map(|s| s.eps_out)
            .fold(0.0f64, f64::max);
        let dens_max = self
            .density
            .iter()
            .flat_map(|f| f.points.iter().map(|p| p.eps_out))
            .fold(0.0f64, f64::max);
        stick_max.max(dens_max)
    }

    /// Uniform output grid [0, ε′_max + 10γ].
    pub fn default_grid(&self, gamma: f64, n: usize) -> Vec<f64> {
        let hi = self.max_eps_out() + 10.0 * gamma;
        let n = n.max(2);
        (0..n)
            .map(|i| hi * i as f64 / (n - 1) as f64)
            .collect()
    }

    /// Total differential density sampled on an ascending grid: linear
    /// interpolation within each single-dissociative family (zero outside
    /// its support), double-dissociative weight binned.
    pub fn density_on_grid(&self, grid: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; grid.len()];
        for family in &self.density {
            if family.double {
                bin_family(family, grid, &mut out);
            } else {
                interpolate_family(family, grid, &mut out);
            }
        }
        out
    }

    /// Stick cross sections deposited at the nearest grid point.
    pub fn sticks_on_grid(&self, grid: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; grid.len()];
        for s in &self.sticks {
            let i = nearest_index(grid, s.eps_out);
            out[i] += s.sigma;
        }
        out
    }

    /// Lorentz-folded sticks on the grid.
    pub fn folded_on_grid(&self, grid: &[f64], gamma: f64) -> Vec<f64> {
        lorentz_fold(&self.sticks, gamma, grid)
    }
}

fn nearest_index(grid: &[f64], x: f64) -> usize {
    let idx = grid.partition_point(|&g| g < x);
    if idx == 0 {
        return 0;
    }
    if idx >= grid.len() {
        return grid.len() - 1;
    }
    if (x - grid[idx - 1]) <= (grid[idx] - x) {
        idx - 1
    } else {
        idx
    }
}

fn interpolate_family(family: &DensityFamily, grid: &[f64], out: &mut [f64]) {
    let pts = &family.points;
    if pts.is_empty() {
        return;
    }
    let (lo, hi) = (pts[0].eps_out, pts[pts.len() - 1].eps_out);
    for (i, &x) in grid.iter().enumerate() {
        if x < lo || x > hi {
            continue;
        }
        let k = pts.partition_point(|p| p.eps_out < x);
        if k == 0 {
            out[i] += pts[0].value;
        } else if k == pts.len() {
            out[i] += pts[pts.len() - 1].value;
        } else {
            let (a, b) = (&pts[k - 1], &pts[k]);
            let t = (x - a.eps_out) / (b.eps_out - a.eps_out);
            out[i] += a.value + t * (b.value - a.value);
        }
    }
}

fn bin_family(family: &DensityFamily, grid: &[f64], out: &mut [f64]) {
    if grid.len() < 2 {
        return;
    }
    let bin = grid[1] - grid[0];
    for p in &family.points {
        let i = nearest_index(grid, p.eps_out);
        out[i] += p.value * p.weight / bin;
    }
}

/// Σ σ_i (γ/π)/((ε′ − ε′_i)² + γ²) H(ε′ − cutoff_i) sampled on `grid`.
pub fn lorentz_fold(sticks: &[Stick], gamma: f64, grid: &[f64]) -> Vec<f64> {
    assert!(gamma > 0.0, "Lorentz width must be positive");
    let mut out = vec![0.0; grid.len()];
    for s in sticks {
        for (i, &x) in grid.iter().enumerate() {
            if let Some(cut) = s.cutoff {
                if x < cut {
                    continue;
                }
            }
            let d = x - s.eps_out;
            out[i] += s.sigma * (gamma / PI) / (d * d + gamma * gamma);
        }
    }
    out
}

/// Strict interior local maxima of a sampled curve whose height reaches
/// `floor_frac` of the global maximum; returns (x, y) pairs.
pub fn find_peaks(xs: &[f64], ys: &[f64], floor_frac: f64) -> Vec<(f64, f64)> {
    assert_eq!(xs.len(), ys.len());
    let global = ys.iter().fold(0.0f64, |m, &v| m.max(v));
    if global <= 0.0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for i in 1..ys.len().saturating_sub(1) {
        if ys[i] > ys[i - 1] && ys[i] > ys[i + 1] && ys[i] >= floor_frac * global {
            out.push((xs[i], ys[i]));
        }
    }
    out
}

/// Spectrum of one initial state: sticks at the open bound-bound channel
/// energies, densities from the dissociative channels mapped E ↦ ε′
/// (the Jacobian is one by the linearity of the energy balance).
pub fn electron_spectrum(
    engine: &Engine,
    epsilon: f64,
    initial: (u32, u32),
) -> Result<Spectrum, EngineError> {
    let breakdown = engine.enumerate_channels(epsilon, initial)?;
    let (nu_a, nu_d) = initial;

    let mut sticks = Vec::new();
    for c in &breakdown.bound_bound {
        let cutoff =
            engine.fold_cutoff(epsilon, nu_a, nu_d, c.spec.final_acceptor, c.spec.final_donor);
        sticks.push(Stick {
            eps_out: c.eps_out,
            sigma: c.sigma,
            cutoff,
            label: channel_label(c.spec.final_acceptor, c.spec.final_donor, initial),
        });
    }

    let mut density: Vec<DensityFamily> = Vec::new();

    // donor dissociates: group by the acceptor's final state
    let mut current: Option<(FinalState, Vec<DensityPoint>)> = None;
    for w in &breakdown.donor_continuum {
        let fa = w.result.spec.final_acceptor;
        let FinalState::Continuum { index } = w.result.spec.final_donor else {
            unreachable!()
        };
        let fragment = engine
            .donor_continuum_set()
            .expect("donor continuum exists")
            .states[index]
            .energy
            * HARTREE_EV;
        let point = DensityPoint {
            eps_out: w.result.eps_out,
            value: w.result.sigma,
            weight: w.weight,
            fragment,
        };
        match &mut current {
            Some((key, pts)) if *key == fa => pts.push(point),
            _ => {
                flush_family(&mut density, &mut current, initial, false);
                current = Some((fa, vec![point]));
            }
        }
    }
    flush_family(&mut density, &mut current, initial, false);

    // acceptor dissociates: group by the donor's final state
    let mut current: Option<(FinalState, Vec<DensityPoint>)> = None;
    for w in &breakdown.acceptor_continuum {
        let fd = w.result.spec.final_donor;
        let FinalState::Continuum { index } = w.result.spec.final_acceptor else {
            unreachable!()
        };
        let point = DensityPoint {
            eps_out: w.result.eps_out,
            value: w.result.sigma,
            weight: w.weight,
            fragment: acceptor_fragment_ev(engine, index),
        };
        match &mut current {
            Some((key, pts)) if *key == fd => pts.push(point),
            _ => {
                flush_acceptor_family(&mut density, &mut current, initial);
                current = Some((fd, vec![point]));
            }
        }
    }
    flush_acceptor_family(&mut density, &mut current, initial);

    // both dissociate: one flat family, binned on export
    if !breakdown.double_continuum.is_empty() {
        let mut pts = Vec::with_capacity(breakdown.double_continuum.len());
        for w in &breakdown.double_continuum {
            let FinalState::Continuum { index } = w.result.spec.final_donor else {
                unreachable!()
            };
            pts.push(DensityPoint {
                eps_out: w.result.eps_out,
                value: w.result.sigma,
                weight: w.weight,
                fragment: engine
                    .donor_continuum_set()
                    .expect("donor continuum exists")
                    .states[index]
                    .energy
                    * HARTREE_EV,
            });
        }
        pts.sort_by(|a, b| a.eps_out.partial_cmp(&b.eps_out).unwrap());
        density.push(DensityFamily {
            label: format!("init A{} D{} double-dissociative", initial.0, initial.1),
            double: true,
            points: pts,
        });
    }

    Ok(Spectrum {
        epsilon_in: epsilon,
        temperature: None,
        sticks,
        density,
    })
}

fn acceptor_fragment_ev(engine: &Engine, index: usize) -> f64 {
    engine
        .acceptor_continuum_set()
        .expect("acceptor continuum exists")
        .states[index]
        .energy
        * HARTREE_EV
}

fn channel_label(fa: FinalState, fd: FinalState, initial: (u32, u32)) -> String {
    let fmt = |f: FinalState| match f {
        FinalState::Bound { nu } => format!("b{nu}"),
        FinalState::Continuum { index } => format!("c{index}"),
    };
    format!(
        "init A{} D{} -> A {}, D {}",
        initial.0,
        initial.1,
        fmt(fa),
        fmt(fd)
    )
}

fn flush_family(
    density: &mut Vec<DensityFamily>,
    current: &mut Option<(FinalState, Vec<DensityPoint>)>,
    initial: (u32, u32),
    _double: bool,
) {
    if let Some((fa, mut pts)) = current.take() {
        pts.sort_by(|a, b| a.eps_out.partial_cmp(&b.eps_out).unwrap());
        density.push(DensityFamily {
            label: format!(
                "init A{} D{} -> A {}, D dissociative",
                initial.0,
                initial.1,
                match fa {
                    FinalState::Bound { nu } => format!("b{nu}"),
                    FinalState::Continuum { index } => format!("c{index}"),
                }
            ),
            double: false,
            points: pts,
        });
    }
}

fn flush_acceptor_family(
    density: &mut Vec<DensityFamily>,
    current: &mut Option<(FinalState, Vec<DensityPoint>)>,
    initial: (u32, u32),
) {
    if let Some((fd, mut pts)) = current.take() {
        pts.sort_by(|a, b| a.eps_out.partial_cmp(&b.eps_out).unwrap());
        density.push(DensityFamily {
            label: format!(
                "init A{} D{} -> A dissociative, D {}",
                initial.0,
                initial.1,
                match fd {
                    FinalState::Bound { nu } => format!("b{nu}"),
                    FinalState::Continuum { index } => format!("c{index}"),
                }
            ),
            double: false,
            points: pts,
        });
    }
}

/// Boltzmann-weighted superposition of the per-initial-state spectra, with
/// the same population truncation rule as the thermal cross section.
pub fn thermal_spectrum(
    engine: &Engine,
    epsilon: f64,
    temperature: f64,
) -> Result<Spectrum, EngineError> {
    let pops = engine.thermal_populations(temperature)?;
    let mut sticks = Vec::new();
    let mut density = Vec::new();
    for (initial, w) in pops {
        let s = electron_spectrum(engine, epsilon, initial)?;
        for mut stick in s.sticks {
            stick.sigma *= w;
            sticks.push(stick);
        }
        for mut family in s.density {
            for p in &mut family.points {
                p.value *= w;
            }
            density.push(family);
        }
    }
    Ok(Spectrum {
        epsilon_in: epsilon,
        temperature: Some(temperature),
        sticks,
        density,
    })
}
