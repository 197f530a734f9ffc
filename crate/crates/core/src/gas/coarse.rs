//! Single-particle coarse-grainings M⁽¹⁾, the empirical histogram P they
//! induce on a gas state, and the bin-integrated canonical reference Q.

use super::{GasParams, GasState};
use crate::entropy::ProbVector;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CgKind {
    Spatial,
    Speed,
    Velocity,
    PhaseCell,
    KineticEnergy,
}

/// Bin layout for one single-particle coarse-graining. Velocity widths are
/// in units of L/T = v₀, energy widths in units of β⁻¹.
#[derive(Clone, Debug, PartialEq)]
pub struct SingleParticleCg {
    pub kind: CgKind,
    /// Spatial cells per side (Δx = L / spatial_bins).
    pub spatial_bins: usize,
    /// Δv⃗ per velocity component.
    pub velocity_width: f64,
    /// Velocity grid covers [−range, range] per component.
    pub velocity_range: f64,
    /// Δv for speeds.
    pub speed_width: f64,
    pub speed_max: f64,
    pub energy_width: f64,
    pub energy_max: f64,
    /// Spatial cells per side in the phase cell.
    pub phase_spatial_bins: usize,
    /// Direction sectors in the phase cell.
    pub phase_sectors: usize,
    /// Meta-bin width ΔP of the empirical fractions.
    pub delta_p: f64,
}

impl SingleParticleCg {
    pub fn new(kind: CgKind) -> Self {
        let delta_p = match kind {
            CgKind::PhaseCell | CgKind::KineticEnergy => 0.0,
            _ => 0.02,
        };
        Self {
            kind,
            spatial_bins: 6,
            velocity_width: 0.3,
            velocity_range: 1.5,
            speed_width: 0.1,
            speed_max: 2.5,
            energy_width: 0.5,
            energy_max: 4.0,
            phase_spatial_bins: 3,
            phase_sectors: 4,
            delta_p,
        }
    }

    fn n_velocity(&self) -> usize {
        (2.0 * self.velocity_range / self.velocity_width).round() as usize
    }

    fn n_speed(&self) -> usize {
        (self.speed_max / self.speed_width).round() as usize
    }

    fn n_energy(&self) -> usize {
        (self.energy_max / self.energy_width).round() as usize
    }

    /// Number of outcomes, overflow bins included.
    pub fn n_bins(&self) -> usize {
        match self.kind {
            CgKind::Spatial => self.spatial_bins * self.spatial_bins,
            CgKind::Velocity => self.n_velocity() * self.n_velocity() + 1,
            CgKind::Speed => self.n_speed() + 1,
            CgKind::KineticEnergy => self.n_energy() + 1,
            CgKind::PhaseCell => {
                self.phase_spatial_bins * self.phase_spatial_bins * (self.n_energy() + 1) * self.phase_sectors
            }
        }
    }

    fn spatial_index(&self, p: [f64; 2], cells: usize, box_l: f64) -> usize {
        let idx = |c: f64| ((c / box_l * cells as f64).floor().max(0.0) as usize).min(cells - 1);
        idx(p[1]) * cells + idx(p[0])
    }

    fn energy_index(&self, v: [f64; 2], params: &GasParams) -> usize {
        let e = 0.5 * params.mass * (v[0] * v[0] + v[1] * v[1]) / params.beta_inv;
        let k = (e / self.energy_width).floor() as usize;
        k.min(self.n_energy())
    }

    /// Outcome of M⁽¹⁾ for one particle.
    pub fn bin_of(&self, p: [f64; 2], v: [f64; 2], params: &GasParams) -> usize {
        let v0 = params.v0();
        match self.kind {
            CgKind::Spatial => self.spatial_index(p, self.spatial_bins, params.box_l),
            CgKind::Velocity => {
                let nv = self.n_velocity();
                let comp = |c: f64| {
                    let k = ((c / v0 + self.velocity_range) / self.velocity_width).floor();
                    if k < 0.0 || k >= nv as f64 {
                        None
                    } else {
                        Some(k as usize)
                    }
                };
                match (comp(v[0]), comp(v[1])) {
                    (Some(i), Some(j)) => j * nv + i,
                    _ => nv * nv,
                }
            }
            CgKind::Speed => {
                let s = (v[0] * v[0] + v[1] * v[1]).sqrt() / v0;
                ((s / self.speed_width).floor() as usize).min(self.n_speed())
            }
            CgKind::KineticEnergy => self.energy_index(v, params),
            CgKind::PhaseCell => {
                let cells = self.phase_spatial_bins * self.phase_spatial_bins;
                let ne = self.n_energy() + 1;
                let space = self.spatial_index(p, self.phase_spatial_bins, params.box_l);
                let angle = v[1].atan2(v[0]).rem_euclid(std::f64::consts::TAU);
                let sector = ((angle / std::f64::consts::TAU * self.phase_sectors as f64).floor() as usize)
                    .min(self.phase_sectors - 1);
                debug_assert!(space < cells);
                (space * ne + self.energy_index(v, params)) * self.phase_sectors + sector
            }
        }
    }
}

/// Histogram of M⁽¹⁾ outcomes over all particles.
pub fn empirical_distribution(state: &GasState, cg: &SingleParticleCg, params: &GasParams) -> ProbVector {
    let mut counts = vec![0usize; cg.n_bins()];
    for i in 0..state.n() {
        counts[cg.bin_of(state.pos[i], state.vel[i], params)] += 1;
    }
    let n = state.n() as f64;
    ProbVector::from_raw(counts.into_iter().map(|c| c as f64 / n).collect()).expect("counts normalize")
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Probability of a velocity component in [a, b] (units of v₀) under the
/// canonical prior, where each component has variance v₀²/2.
fn component_mass(a: f64, b: f64) -> f64 {
    // Component / v₀ ~ N(0, 1/2): standardize by √2.
    let s = std::f64::consts::SQRT_2;
    if a >= 0.0 {
        normal_cdf(-a * s) - normal_cdf(-b * s)
    } else {
        normal_cdf(b * s) - normal_cdf(a * s)
    }
}

/// Bin-integrated canonical reference Q. Closed forms: the velocity
/// components are Gaussian, the speed is Rayleigh (CDF 1 − e^{−(v/v₀)²}) and
/// the kinetic energy is exponential (CDF 1 − e^{−βE}) in two dimensions.
/// Overflow bins take the remaining tail mass.
pub fn reference_distribution(cg: &SingleParticleCg, _params: &GasParams) -> Result<ProbVector> {
    let energy_bins = |n: usize, w: f64| -> Vec<f64> {
        let mut q: Vec<f64> = (0..n).map(|k| (-(k as f64) * w).exp() - (-((k + 1) as f64) * w).exp()).collect();
        q.push((-(n as f64) * w).exp());
        q
    };
    let q = match cg.kind {
        CgKind::Spatial => {
            let b = cg.n_bins();
            vec![1.0 / b as f64; b]
        }
        CgKind::Velocity => {
            let nv = cg.n_velocity();
            let comp: Vec<f64> = (0..nv)
                .map(|k| {
                    let a = -cg.velocity_range + k as f64 * cg.velocity_width;
                    component_mass(a, a + cg.velocity_width)
                })
                .collect();
            let mut q = Vec::with_capacity(nv * nv + 1);
            for qj in &comp {
                for qi in &comp {
                    q.push(qi * qj);
                }
            }
            let inside: f64 = comp.iter().sum();
            q.push(1.0 - inside * inside);
            q
        }
        CgKind::Speed => {
            let ns = cg.n_speed();
            let mut q: Vec<f64> = (0..ns)
                .map(|k| {
                    let a = k as f64 * cg.speed_width;
                    let b = a + cg.speed_width;
                    (-a * a).exp() - (-b * b).exp()
                })
                .collect();
            let top = ns as f64 * cg.speed_width;
            q.push((-top * top).exp());
            q
        }
        CgKind::KineticEnergy => energy_bins(cg.n_energy(), cg.energy_width),
        CgKind::PhaseCell => {
            let cells = cg.phase_spatial_bins * cg.phase_spatial_bins;
            let qe = energy_bins(cg.n_energy(), cg.energy_width);
            let mut q = Vec::with_capacity(cg.n_bins());
            for _ in 0..cells {
                for e in &qe {
                    for _ in 0..cg.phase_sectors {
                        q.push(e / (cells * cg.phase_sectors) as f64);
                    }
                }
            }
            q
        }
    };
    ProbVector::from_raw(q)
}
