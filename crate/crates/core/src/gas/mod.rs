//! Two-dimensional hard-disk gas: event-driven dynamics, four initial
//! conditions, single-particle coarse-grainings, and the Sanov and
//! thermodynamic entropy estimates built on a canonical prior.
//!
//! Simulation runs in reduced units with box side L, mass m and the prior
//! temperature β⁻¹ taken from [`GasParams`]; v₀ = √(2/βm) and the
//! box-crossing time is T = L/v₀. Physical constants only enter through the
//! thermal wavelength in [`sackur_tetrode`].

mod coarse;
mod entropy;
mod experiment;
mod ic;
mod sim;

pub use coarse::{empirical_distribution, reference_distribution, CgKind, SingleParticleCg};
pub use entropy::{
    boltzmann_h_entropies, exact_type_log_prob, ln_shell_volume_rel, sackur_tetrode, sanov_entropy, sanov_mixing,
    thermal_wavelength_pm, thermo_entropy_joint, thermo_entropy_single, thermo_entropy_single_marginal, BoltzmannH,
    SackurTetrode,
};
pub use experiment::{
    cg_label, run_gas_experiment, GasExperiment, GasRun, GasSummary, LabelSummary, ENERGY_JOINT, ENERGY_ONE_SIDED,
    H_KINETIC_ENERGY, H_PHASE_CELL,
};
pub use ic::{generate_ic, GasSetup, InitialCondition};
pub use sim::{pair_collision_time, simulate, GasState, SimStats, Simulator, Wall};

use crate::error::{Error, Result};

pub const DIM: usize = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct GasParams {
    pub n: usize,
    pub box_l: f64,
    pub radius: f64,
    pub mass: f64,
    pub beta_inv: f64,
    pub seed: u64,
    /// Hard-disk radius in pm, for the thermal wavelength ratio.
    pub radius_pm: f64,
    pub mass_gev: f64,
    pub beta_inv_mev: f64,
}

impl Default for GasParams {
    fn default() -> Self {
        Self {
            n: 500,
            box_l: 1.0,
            radius: 1.0 / 200.0,
            mass: 1.0,
            beta_inv: 0.5,
            seed: 1,
            radius_pm: 100.0,
            mass_gev: 30.0,
            beta_inv_mev: 25.0,
        }
    }
}

impl GasParams {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParam("at least two particles are needed".into()));
        }
        for (name, v) in [
            ("box_l", self.box_l),
            ("radius", self.radius),
            ("mass", self.mass),
            ("beta_inv", self.beta_inv),
            ("radius_pm", self.radius_pm),
            ("mass_gev", self.mass_gev),
            ("beta_inv_mev", self.beta_inv_mev),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParam(format!("{name} must be positive")));
            }
        }
        if self.radius >= self.box_l / 4.0 {
            return Err(Error::InvalidParam("radius must be below a quarter of the box".into()));
        }
        let packing = self.n as f64 * std::f64::consts::PI * self.radius * self.radius / (self.box_l * self.box_l);
        if packing > 0.4 {
            return Err(Error::InvalidParam(format!("packing fraction {packing:.3} is too high to place disks")));
        }
        Ok(())
    }

    /// v₀ = √(2/βm).
    pub fn v0(&self) -> f64 {
        (2.0 * self.beta_inv / self.mass).sqrt()
    }

    /// Box-crossing time L/v₀.
    pub fn time_scale(&self) -> f64 {
        self.box_l / self.v0()
    }

    /// Total energy of the prior, N d β⁻¹ / 2.
    pub fn total_energy(&self) -> f64 {
        self.n as f64 * DIM as f64 * self.beta_inv / 2.0
    }

    /// Physical box side over the thermal wavelength.
    pub fn box_over_lambda(&self) -> f64 {
        (self.box_l / self.radius) * self.radius_pm / thermal_wavelength_pm(self.mass_gev, self.beta_inv_mev)
    }
}
