//! The cross-section engine: per-channel ICEC cross sections, energy
//! bookkeeping, channel enumeration with energy-conservation limits, and
//! thermal averaging.
//!
//! Both partners may be molecular; an atomic species degenerates to a single
//! trivial "vibrational" channel with no continuum. External quantities are
//! eV / Å / Mb / K, everything inside is atomic units.

use crate::continuum::{box_states, BoxSpec, ContinuumError, ContinuumSet};
use crate::franck_condon::{fc_table, FcError, FcTable};
use crate::morse::{bound_spectrum, MorseError};
use crate::units::{thermal_energy_hartree, ANGSTROM_PER_BOHR, HARTREE_EV, SPEED_OF_LIGHT_AU};
use crate::xs_data::{pr_from_pi, Role, SpeciesKind, SpeciesSpec, XsError};
use std::f64::consts::PI;
use thiserror::Error;

/// Mb per Bohr².
const MEGABARN_PER_BOHR2: f64 = ANGSTROM_PER_BOHR * ANGSTROM_PER_BOHR * 100.0;
/// Channels with |ε′| below this (eV) count as closed.
const OPEN_THRESHOLD_EV: f64 = 1e-9;
/// Thermal averaging stops once this much cumulative population is covered.
const THERMAL_CUTOFF: f64 = 1.0 - 1e-6;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("engine configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Xs(#[from] XsError),
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error(transparent)]
    Continuum(#[from] ContinuumError),
    #[error(transparent)]
    Fc(#[from] FcError),
    #[error("no vibrationally resolved table for donor channel nu={nu} -> nu+={nu_plus}")]
    MissingResolved { nu: u32, nu_plus: u32 },
    #[error("temperature must be non-negative, got {0} K")]
    NegativeTemperature(f64),
    #[error("initial vibrational state nu={nu} out of range for the {role} (bound count {count})")]
    InitialOutOfRange {
        nu: u32,
        role: &'static str,
        count: usize,
    },
}

/// How the donor's vibrationally resolved photoionization is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Condon factorization: unresolved tables times Franck-Condon factors.
    FranckCondon,
    /// Externally supplied vibrationally resolved donor PI tables
    /// (bound-bound only; no tables exist for dissociative channels).
    AbInitioResolved,
}

/// Full problem statement for one acceptor/donor pair.
#[derive(Debug, Clone)]
pub struct EngineConfig {
    pub acceptor: SpeciesSpec,
    pub donor: SpeciesSpec,
    /// Center-of-mass separation, Å.
    pub r_ad_angstrom: f64,
    pub box_spec: BoxSpec,
    pub mode: Mode,
}

/// A final state on one side of the transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FinalState {
    Bound { nu: u32 },
    /// Index into the species' box-continuum set.
    Continuum { index: usize },
}

/// One initial→final vibronic channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelSpec {
    pub initial_acceptor: u32,
    pub initial_donor: u32,
    pub final_acceptor: FinalState,
    pub final_donor: FinalState,
}

/// Evaluated channel. For continuum final states `sigma` is a density:
/// Mb/eV per dissociating species (Mb/eV² when both dissociate).
#[derive(Debug, Clone)]
pub struct ChannelResult {
    pub spec: ChannelSpec,
    /// Transferred energy, eV.
    pub omega: f64,
    /// Outgoing electron energy, eV (negative for closed channels).
    pub eps_out: f64,
    pub sigma: f64,
    pub open: bool,
}

/// Channel density together with its energy-integration weight (eV, or eV²
/// for the double-dissociative family). The channel's σ contribution to a
/// total is `result.sigma * weight`.
#[derive(Debug, Clone)]
pub struct WeightedChannel {
    pub result: ChannelResult,
    pub weight: f64,
}

/// All open channels of one initial state at one incoming energy.
#[derive(Debug, Clone, Default)]
pub struct ChannelBreakdown {
    pub bound_bound: Vec<ChannelResult>,
    /// Acceptor dissociates, donor bound.
    pub acceptor_continuum: Vec<WeightedChannel>,
    /// Donor dissociates, acceptor bound.
    pub donor_continuum: Vec<WeightedChannel>,
    /// Both dissociate.
    pub double_continuum: Vec<WeightedChannel>,
}

impl ChannelBreakdown {
    pub fn bound_bound_total(&self) -> f64 {
        self.bound_bound.iter().map(|c| c.sigma).sum()
    }

    pub fn dissociative_total(&self) -> f64 {
        let one = |v: &[WeightedChannel]| -> f64 {
            v.iter().map(|w| w.result.sigma * w.weight).sum()
        };
        one(&self.acceptor_continuum) + one(&self.donor_continuum) + one(&self.double_continuum)
    }

    pub fn total(&self) -> f64 {
        self.bound_bound_total() + self.dissociative_total()
    }
}

/// Precomputed vibrational structure of one species.
struct SpeciesState {
    spec: SpeciesSpec,
    /// Asymptote of the initial curve (Hartree, absolute).
    v_inf_initial: f64,
    /// Asymptote of the final curve.
    v_inf_final: f64,
    /// Bound levels of the initial curve, relative to its asymptote.
    levels_initial: Vec<f64>,
    /// Bound levels of the final curve.
    levels_final: Vec<f64>,
    /// Box-discretized dissociative states of the final curve.
    continuum: Option<ContinuumSet>,
    /// Franck-Condon tables per initial bound state (Condon mode), indexed
    /// by the initial quantum number.
    fc: Vec<FcTable>,
}

impl SpeciesState {
    fn build(spec: &SpeciesSpec, box_spec: &BoxSpec, with_fc: bool) -> Result<Self, EngineError> {
        // The anchor is minimum-to-minimum. The donor's transition costs
        // energy (its final asymptote lies above the initial one); the
        // acceptor's releases it.
        match spec.kind {
            SpeciesKind::Atomic => {
                let anchor = spec.ip_reference / HARTREE_EV;
                let (v_i, v_f) = match spec.role {
                    Role::Acceptor => (anchor, 0.0),
                    Role::Donor => (0.0, anchor),
                };
                Ok(SpeciesState {
                    spec: spec.clone(),
                    v_inf_initial: v_i,
                    v_inf_final: v_f,
                    levels_initial: vec![0.0],
                    levels_final: vec![0.0],
                    continuum: None,
                    fc: Vec::new(),
                })
            }
            SpeciesKind::Diatomic => {
                let initial = spec.initial_curve.ok_or_else(|| {
                    EngineError::BadConfig("diatomic species needs an initial curve".into())
                })?;
                let final_curve = spec.final_curve.ok_or_else(|| {
                    EngineError::BadConfig("diatomic species needs a final curve".into())
                })?;
                let anchor = spec.ip_reference / HARTREE_EV;
                // anchor = |(V∞_i − D_i) − (V∞_f − D_f)|
                let (v_i, v_f) = match spec.role {
                    Role::Acceptor => (anchor + initial.d_e - final_curve.d_e, 0.0),
                    Role::Donor => (0.0, anchor - initial.d_e + final_curve.d_e),
                };
                let levels_initial: Vec<f64> =
                    bound_spectrum(&initial).iter().map(|l| l.energy).collect();
                let levels_final: Vec<f64> = bound_spectrum(&final_curve)
                    .iter()
                    .map(|l| l.energy)
                    .collect();
                let continuum = Some(box_states(&final_curve, box_spec)?);
                let fc = if with_fc {
                    let set = continuum.as_ref().unwrap();
                    (0..levels_initial.len() as u32)
                        .map(|nu| fc_table(&initial, &final_curve, set, nu))
                        .collect::<Result<Vec<_>, _>>()?
                } else {
                    Vec::new()
                };
                Ok(SpeciesState {
                    spec: spec.clone(),
                    v_inf_initial: v_i,
                    v_inf_final: v_f,
                    levels_initial,
                    levels_final,
                    continuum,
                    fc,
                })
            }
        }
    }

    fn is_atomic(&self) -> bool {
        self.spec.kind == SpeciesKind::Atomic
    }

    /// Adiabatic energy released by this species' transition (Hartree):
    /// (V∞_initial + E₀_initial) − (V∞_final + E₀_final). Positive for an
    /// acceptor (capture releases energy), −IP^a for a donor.
    fn adiabatic_release(&self) -> f64 {
        (self.v_inf_initial + self.levels_initial[0]) - (self.v_inf_final + self.levels_final[0])
    }

    /// Energy shift of the transition ν_i → f in the historical bookkeeping:
    /// the adiabatic anchor plus the vibrational offsets from the respective
    /// ground levels. Identical to (V∞_i + E_i) − (V∞_f + E_f).
    fn transition_shift(&self, nu_i: u32, f: FinalState) -> f64 {
        self.adiabatic_release()
            + (self.levels_initial[nu_i as usize] - self.levels_initial[0])
            - (self.final_energy(f) - self.levels_final[0])
    }

    /// Energy of a final state relative to its curve's asymptote.
    fn final_energy(&self, f: FinalState) -> f64 {
        match f {
            FinalState::Bound { nu } => self.levels_final[nu as usize],
            FinalState::Continuum { index } => {
                self.continuum.as_ref().expect("atomic species has no continuum").states[index]
                    .energy
            }
        }
    }

    /// Franck-Condon factor for initial `nu` → `f`. Continuum factors carry
    /// the density of states (per Hartree).
    fn fc_factor(&self, nu: u32, f: FinalState) -> f64 {
        if self.is_atomic() {
            return 1.0;
        }
        let table = &self.fc[nu as usize];
        match f {
            FinalState::Bound { nu: nf } => table.bound_factors[nf as usize],
            FinalState::Continuum { index } => table.continuum_density[index].density,
        }
    }

    fn continuum_weight(&self, index: usize) -> f64 {
        self.fc[0].continuum_density[index].weight
    }
}

/// The engine: an [`EngineConfig`] with all derived structure precomputed.
/// Immutable after construction; evaluations at distinct energies are
/// independent.
pub struct Engine {
    acceptor: SpeciesState,
    donor: SpeciesState,
    /// Separation in Bohr.
    r_ad: f64,
    mode: Mode,
    pub config: EngineConfig,
}

impl Engine {
    pub fn new(config: EngineConfig) -> Result<Self, EngineError> {
        if !(config.r_ad_angstrom > 0.0) {
            return Err(EngineError::BadConfig(format!(
                "r_ad must be positive, got {} Å",
                config.r_ad_angstrom
            )));
        }
        if config.mode == Mode::AbInitioResolved && config.donor.resolved_pi.is_none() {
            return Err(EngineError::BadConfig(
                "ab-initio-resolved mode requires vibrationally resolved donor PI tables".into(),
            ));
        }
        let with_fc = config.mode == Mode::FranckCondon;
        let acceptor = SpeciesState::build(&config.acceptor, &config.box_spec, true)?;
        let donor = SpeciesState::build(&config.donor, &config.box_spec, with_fc)?;
        Ok(Engine {
            acceptor,
            donor,
            r_ad: config.r_ad_angstrom / ANGSTROM_PER_BOHR,
            mode: config.mode,
            config,
        })
    }

    /// Transferred energy ω (eV) for incoming ε (eV) and an acceptor
    /// transition ν_A → final. Implemented through the adiabatic anchor; the
    /// asymptote-referenced form is exposed as
    /// [`Engine::transferred_energy_asymptotic`] and the two agree
    /// identically.
    pub fn transferred_energy(&self, epsilon: f64, nu_a: u32, final_a: FinalState) -> f64 {
        epsilon + self.acceptor.transition_shift(nu_a, final_a) * HARTREE_EV
    }

    /// ω from the V∞-referenced bookkeeping:
    /// ω = ε + (V∞_A + E_i) − (V∞_A⁻ + E_f).
    pub fn transferred_energy_asymptotic(
        &self,
        epsilon: f64,
        nu_a: u32,
        final_a: FinalState,
    ) -> f64 {
        let a = &self.acceptor;
        let e_i = a.v_inf_initial + a.levels_initial[nu_a as usize];
        let e_f = a.v_inf_final + a.final_energy(final_a);
        epsilon + (e_i - e_f) * HARTREE_EV
    }

    /// Outgoing electron energy ε′ (eV) for transferred ω (eV) and a donor
    /// transition; negative means the channel is closed.
    pub fn outgoing_energy(&self, omega: f64, nu_d: u32, final_d: FinalState) -> f64 {
        omega + self.donor.transition_shift(nu_d, final_d) * HARTREE_EV
    }

    pub fn outgoing_energy_asymptotic(&self, omega: f64, nu_d: u32, final_d: FinalState) -> f64 {
        let d = &self.donor;
        let e_i = d.v_inf_initial + d.levels_initial[nu_d as usize];
        let e_f = d.v_inf_final + d.final_energy(final_d);
        omega + (e_i - e_f) * HARTREE_EV
    }

    /// The geometric/kinematic prefactor 3c⁴/(4π ω⁴ R⁶) in atomic units.
    fn prefactor(&self, omega_ev: f64) -> f64 {
        let w = omega_ev / HARTREE_EV;
        let c4 = SPEED_OF_LIGHT_AU.powi(4);
        3.0 * c4 / (4.0 * PI * w.powi(4) * self.r_ad.powi(6))
    }

    /// Unresolved acceptor photorecombination cross section (Mb) at incoming
    /// energy ε, by detailed balance from the photoionization table of the
    /// attached species at ω.
    ///
    /// Detailed balance diverges as 1/ε toward zero incoming energy, so the
    /// threshold run ε = 0 is evaluated at the channel-openness floor; every
    /// result stays finite and exact for ε ≥ 1e-9 eV.
    fn sigma_pr_acceptor(&self, epsilon: f64, omega: f64) -> Result<f64, XsError> {
        let pi = self.acceptor.spec.pi_table.interpolate(omega)?;
        let eps_eff = epsilon.max(OPEN_THRESHOLD_EV);
        pr_from_pi(pi, omega, eps_eff, self.acceptor.spec.multiplicity_ratio)
    }

    /// Cross section of a single vibronic channel. Continuum sides return a
    /// density (Mb/eV per dissociating species); closed channels return 0.
    pub fn channel_xs(&self, epsilon: f64, spec: ChannelSpec) -> Result<ChannelResult, EngineError> {
        self.check_initial(spec.initial_acceptor, spec.initial_donor)?;
        let omega = self.transferred_energy(epsilon, spec.initial_acceptor, spec.final_acceptor);
        let eps_out = self.outgoing_energy(omega, spec.initial_donor, spec.final_donor);
        let open = eps_out > OPEN_THRESHOLD_EV;
        if !open {
            return Ok(ChannelResult {
                spec,
                omega,
                eps_out,
                sigma: 0.0,
                open,
            });
        }

        let sigma_pr = self.sigma_pr_acceptor(epsilon, omega)? / MEGABARN_PER_BOHR2;
        let fc_a = self.acceptor.fc_factor(spec.initial_acceptor, spec.final_acceptor);

        let (sigma_pi, fc_d) = match self.mode {
            Mode::FranckCondon => (
                self.donor.spec.pi_table.interpolate(omega)? / MEGABARN_PER_BOHR2,
                self.donor.fc_factor(spec.initial_donor, spec.final_donor),
            ),
            Mode::AbInitioResolved => match spec.final_donor {
                FinalState::Bound { nu } => {
                    let set = self.donor.spec.resolved_pi.as_ref().expect("checked in new");
                    let table =
                        set.get(spec.initial_donor, nu)
                            .ok_or(EngineError::MissingResolved {
                                nu: spec.initial_donor,
                                nu_plus: nu,
                            })?;
                    (table.interpolate(omega)? / MEGABARN_PER_BOHR2, 1.0)
                }
                FinalState::Continuum { .. } => {
                    // no resolved dissociation cross sections exist; the
                    // channel contributes nothing in this mode
                    (0.0, 0.0)
                }
            },
        };

        // continuum Franck-Condon factors carry the density of states per
        // Hartree; convert each dissociating axis to per-eV
        let mut sigma = self.prefactor(omega) * sigma_pr * sigma_pi * fc_a * fc_d
            * MEGABARN_PER_BOHR2;
        if matches!(spec.final_acceptor, FinalState::Continuum { .. }) {
            sigma /= HARTREE_EV;
        }
        if matches!(spec.final_donor, FinalState::Continuum { .. }) {
            sigma /= HARTREE_EV;
        }

        Ok(ChannelResult {
            spec,
            omega,
            eps_out,
            sigma,
            open,
        })
    }

    fn check_initial(&self, nu_a: u32, nu_d: u32) -> Result<(), EngineError> {
        if nu_a as usize >= self.acceptor.levels_initial.len() {
            return Err(EngineError::InitialOutOfRange {
                nu: nu_a,
                role: "acceptor",
                count: self.acceptor.levels_initial.len(),
            });
        }
        if nu_d as usize >= self.donor.levels_initial.len() {
            return Err(EngineError::InitialOutOfRange {
                nu: nu_d,
                role: "donor",
                count: self.donor.levels_initial.len(),
            });
        }
        Ok(())
    }

    /// Enumerate and evaluate every open channel for one initial state.
    ///
    /// Continuum families are integrated as sums over box states weighted by
    /// the local level spacing; the top interval at the energy-conservation
    /// limit is clipped linearly.
    pub fn enumerate_channels(
        &self,
        epsilon: f64,
        initial: (u32, u32),
    ) -> Result<ChannelBreakdown, EngineError> {
        let (nu_a, nu_d) = initial;
        self.check_initial(nu_a, nu_d)?;
        let mut out = ChannelBreakdown::default();

        let a_bound = self.acceptor.levels_final.len() as u32;
        let d_bound = self.donor.levels_final.len() as u32;

        // bound-bound
        for fa in 0..a_bound {
            for fd in 0..d_bound {
                let spec = ChannelSpec {
                    initial_acceptor: nu_a,
                    initial_donor: nu_d,
                    final_acceptor: FinalState::Bound { nu: fa },
                    final_donor: FinalState::Bound { nu: fd },
                };
                let r = self.channel_xs(epsilon, spec)?;
                if r.open {
                    out.bound_bound.push(r);
                }
            }
        }

        // acceptor bound, donor dissociative
        if self.donor.continuum.is_some() && self.mode == Mode::FranckCondon {
            for fa in 0..a_bound {
                let omega =
                    self.transferred_energy(epsilon, nu_a, FinalState::Bound { nu: fa });
                // ε'(E) = 0 defines the upper limit for the donor's
                // fragment energy
                let e_max_ev = self.outgoing_energy(omega, nu_d, FinalState::Continuum { index: 0 })
                    + self.donor_continuum_energy(0);
                self.integrate_donor_family(
                    epsilon,
                    nu_a,
                    nu_d,
                    FinalState::Bound { nu: fa },
                    e_max_ev,
                    &mut out,
                )?;
            }
        }

        // acceptor dissociative, donor bound
        if self.acceptor.continuum.is_some() {
            for fd in 0..d_bound {
                self.integrate_acceptor_family(epsilon, nu_a, nu_d, FinalState::Bound { nu: fd }, &mut out)?;
            }
        }

        // both dissociative: outer integral over the donor fragment energy,
        // inner limit depending on it
        if self.acceptor.continuum.is_some()
            && self.donor.continuum.is_some()
            && self.mode == Mode::FranckCondon
        {
            self.integrate_double(epsilon, nu_a, nu_d, &mut out)?;
        }

        Ok(out)
    }

    fn donor_continuum_energy(&self, index: usize) -> f64 {
        self.donor.continuum.as_ref().unwrap().states[index].energy * HARTREE_EV
    }

    fn acceptor_continuum_energy(&self, index: usize) -> f64 {
        self.acceptor.continuum.as_ref().unwrap().states[index].energy * HARTREE_EV
    }

    /// Donor-dissociative family at fixed acceptor final state: sum over box
    /// states with the top interval clipped at `e_max_ev`.
    fn integrate_donor_family(
        &self,
        epsilon: f64,
        nu_a: u32,
        nu_d: u32,
        final_acceptor: FinalState,
        e_max_ev: f64,
        out: &mut ChannelBreakdown,
    ) -> Result<(), EngineError> {
        let n = self.donor.continuum.as_ref().unwrap().states.len();
        for index in 0..n {
            let e_ev = self.donor_continuum_energy(index);
            if e_ev >= e_max_ev {
                break;
            }
            let bin_ev = self.donor.continuum_weight(index) * HARTREE_EV;
            let weight = bin_ev.min(e_max_ev - e_ev);
            let spec = ChannelSpec {
                initial_acceptor: nu_a,
                initial_donor: nu_d,
                final_acceptor,
                final_donor: FinalState::Continuum { index },
            };
            let r = self.channel_xs(epsilon, spec)?;
            if r.open {
                out.donor_continuum.push(WeightedChannel { result: r, weight });
            }
        }
        Ok(())
    }

    fn integrate_acceptor_family(
        &self,
        epsilon: f64,
        nu_a: u32,
        nu_d: u32,
        final_donor: FinalState,
        out: &mut ChannelBreakdown,
    ) -> Result<(), EngineError> {
        let n = self.acceptor.continuum.as_ref().unwrap().states.len();
        for index in 0..n {
            let spec = ChannelSpec {
                initial_acceptor: nu_a,
                initial_donor: nu_d,
                final_acceptor: FinalState::Continuum { index },
                final_donor,
            };
            let r = self.channel_xs(epsilon, spec)?;
            if !r.open {
                // acceptor continuum energies increase, so every later
                // channel is closed too
                break;
            }
            // the energy-conservation limit for this axis: ε'(E_max) = 0
            let e_ev = self.acceptor_continuum_energy(index);
            let e_max_ev = e_ev + r.eps_out;
            let bin_ev = self.acceptor.continuum_weight(index) * HARTREE_EV;
            let weight = bin_ev.min((e_max_ev - e_ev).max(0.0));
            out.acceptor_continuum.push(WeightedChannel { result: r, weight });
        }
        Ok(())
    }

    fn integrate_double(
        &self,
        epsilon: f64,
        nu_a: u32,
        nu_d: u32,
        out: &mut ChannelBreakdown,
    ) -> Result<(), EngineError> {
        let n_d = self.donor.continuum.as_ref().unwrap().states.len();
        let n_a = self.acceptor.continuum.as_ref().unwrap().states.len();
        // outer: donor fragment energy, limited by the acceptor sitting at
        // its dissociation threshold (E_A = 0)
        for jd in 0..n_d {
            let spec_at_threshold = ChannelSpec {
                initial_acceptor: nu_a,
                initial_donor: nu_d,
                final_acceptor: FinalState::Continuum { index: 0 },
                final_donor: FinalState::Continuum { index: jd },
            };
            let omega0 =
                self.transferred_energy(epsilon, nu_a, FinalState::Continuum { index: 0 });
            let eps_at_a0 = self.outgoing_energy(omega0, nu_d, FinalState::Continuum { index: jd })
                + self.acceptor_continuum_energy(0);
            let e_d = self.donor_continuum_energy(jd);
            let e_d_max = e_d + eps_at_a0;
            if e_d >= e_d_max {
                break;
            }
            let wd = (self.donor.continuum_weight(jd) * HARTREE_EV).min(e_d_max - e_d);

            // inner: acceptor fragment energy with the donor fragment fixed
            for ja in 0..n_a {
                let spec = ChannelSpec {
                    final_acceptor: FinalState::Continuum { index: ja },
                    ..spec_at_threshold
                };
                let r = self.channel_xs(epsilon, spec)?;
                if !r.open {
                    break;
                }
                let e_a = self.acceptor_continuum_energy(ja);
                let e_a_max = e_a + r.eps_out;
                let wa = (self.acceptor.continuum_weight(ja) * HARTREE_EV)
                    .min((e_a_max - e_a).max(0.0));
                out.double_continuum.push(WeightedChannel {
                    result: r,
                    weight: wa * wd,
                });
            }
        }
        Ok(())
    }

    /// Total cross section (Mb): bound-bound sum plus the dissociative
    /// integrals up to their energy-conservation limits.
    pub fn total_xs(&self, epsilon: f64, initial: (u32, u32)) -> Result<f64, EngineError> {
        Ok(self.enumerate_channels(epsilon, initial)?.total())
    }

    /// Purely electronic cross section (Mb) with the vertical convention
    /// ω = ε + IP anchor: 3c⁴/(4π) σ_PR(ε) σ_PI(ω) / (ω⁴ R⁶).
    pub fn electronic_xs(&self, epsilon: f64) -> Result<f64, EngineError> {
        let omega = epsilon + self.acceptor.spec.ip_reference;
        let sigma_pr = self.sigma_pr_acceptor(epsilon, omega)? / MEGABARN_PER_BOHR2;
        let sigma_pi = self.donor.spec.pi_table.interpolate(omega)? / MEGABARN_PER_BOHR2;
        Ok(self.prefactor(omega) * sigma_pr * sigma_pi * MEGABARN_PER_BOHR2)
    }

    /// Unresolved acceptor photorecombination cross section (Mb) at the
    /// vertical ω; the isolated-capture baseline.
    pub fn pr_xs(&self, epsilon: f64) -> Result<f64, EngineError> {
        let omega = epsilon + self.acceptor.spec.ip_reference;
        Ok(self.sigma_pr_acceptor(epsilon, omega)?)
    }

    /// Boltzmann populations over the initial bound states of one species,
    /// most-populated first is not guaranteed: entries are by quantum number.
    /// At T = 0 all weight sits in the ground state.
    pub fn boltzmann_weights(levels: &[f64], temperature: f64) -> Result<Vec<f64>, EngineError> {
        if temperature < 0.0 {
            return Err(EngineError::NegativeTemperature(temperature));
        }
        if temperature == 0.0 || levels.len() == 1 {
            let mut w = vec![0.0; levels.len()];
            w[0] = 1.0;
            return Ok(w);
        }
        let kt = thermal_energy_hartree(temperature);
        let e0 = levels[0];
        let raw: Vec<f64> = levels.iter().map(|&e| (-(e - e0) / kt).exp()).collect();
        let z: f64 = raw.iter().sum();
        Ok(raw.into_iter().map(|w| w / z).collect())
    }

    /// Thermal initial-state populations for the two species, truncated once
    /// the cumulative joint weight exceeds 1 − 1e-6 and renormalized over the
    /// included states.
    pub fn thermal_populations(
        &self,
        temperature: f64,
    ) -> Result<Vec<((u32, u32), f64)>, EngineError> {
        let wa = Self::boltzmann_weights(&self.acceptor.levels_initial, temperature)?;
        let wd = Self::boltzmann_weights(&self.donor.levels_initial, temperature)?;
        let mut joint: Vec<((u32, u32), f64)> = Vec::new();
        for (ia, &a) in wa.iter().enumerate() {
            for (id, &d) in wd.iter().enumerate() {
                joint.push(((ia as u32, id as u32), a * d));
            }
        }
        // take the heaviest states until the cutoff, then renormalize;
        // ties broken by quantum numbers for determinism
        joint.sort_by(|x, y| {
            y.1.partial_cmp(&x.1)
                .unwrap()
                .then(x.0.cmp(&y.0))
        });
        let mut kept = Vec::new();
        let mut cum = 0.0;
        for (key, w) in joint {
            if cum >= THERMAL_CUTOFF {
                break;
            }
            cum += w;
            kept.push((key, w));
        }
        let norm: f64 = kept.iter().map(|(_, w)| w).sum();
        for (_, w) in &mut kept {
            *w /= norm;
        }
        kept.sort_by_key(|&(k, _)| k);
        Ok(kept)
    }

    /// Boltzmann-averaged total cross section (Mb) at temperature T.
    pub fn thermal_xs(&self, epsilon: f64, temperature: f64) -> Result<f64, EngineError> {
        let pops = self.thermal_populations(temperature)?;
        let mut acc = 0.0;
        for (initial, w) in pops {
            acc += w * self.total_xs(epsilon, initial)?;
        }
        Ok(acc)
    }

    /// Bound levels of the donor's initial curve, eV (for reporting).
    pub fn donor_initial_levels_ev(&self) -> Vec<f64> {
        self.donor.levels_initial.iter().map(|e| e * HARTREE_EV).collect()
    }

    pub fn donor_continuum_set(&self) -> Option<&ContinuumSet> {
        self.donor.continuum.as_ref()
    }

    pub fn acceptor_continuum_set(&self) -> Option<&ContinuumSet> {
        self.acceptor.continuum.as_ref()
    }

    pub fn donor_fc_tables(&self) -> &[FcTable] {
        &self.donor.fc
    }

    /// Outgoing energy at the donor's dissociation threshold (fragment
    /// energy 0) for initial donor state ν and a given acceptor transition;
    /// the boundary between the stick region and the dissociative continuum
    /// of that initial state.
    pub fn dissociation_edge(&self, epsilon: f64, nu_a: u32, final_a: FinalState, nu_d: u32) -> f64 {
        let omega = self.transferred_energy(epsilon, nu_a, final_a);
        let d = &self.donor;
        if d.is_atomic() {
            return omega;
        }
        let e_i = d.v_inf_initial + d.levels_initial[nu_d as usize];
        omega + (e_i - d.v_inf_final) * HARTREE_EV
    }

    /// Outgoing energy at the acceptor's dissociation threshold (fragment
    /// energy 0) for a given donor transition; the boundary between the
    /// stick region and the acceptor-side dissociative continuum.
    pub fn acceptor_dissociation_edge(
        &self,
        epsilon: f64,
        nu_a: u32,
        nu_d: u32,
        final_d: FinalState,
    ) -> f64 {
        let a = &self.acceptor;
        let e_i = a.v_inf_initial + a.levels_initial[nu_a as usize];
        let omega_at_threshold = epsilon + (e_i - a.v_inf_final) * HARTREE_EV;
        self.outgoing_energy(omega_at_threshold, nu_d, final_d)
    }

    /// Folding cutoff for a bound-bound stick: the highest dissociation edge
    /// among the continua this spectrum actually contains, or none when no
    /// dissociative family competes with the folded line.
    pub fn fold_cutoff(
        &self,
        epsilon: f64,
        nu_a: u32,
        nu_d: u32,
        final_a: FinalState,
        final_d: FinalState,
    ) -> Option<f64> {
        if self.mode != Mode::FranckCondon {
            return None;
        }
        let donor_edge = self
            .donor
            .continuum
            .as_ref()
            .map(|_| self.dissociation_edge(epsilon, nu_a, final_a, nu_d));
        let acceptor_edge = self
            .acceptor
            .continuum
            .as_ref()
            .map(|_| self.acceptor_dissociation_edge(epsilon, nu_a, nu_d, final_d));
        match (donor_edge, acceptor_edge) {
            (Some(d), Some(a)) => Some(d.max(a)),
            (e, None) | (None, e) => e,
        }
    }
}
