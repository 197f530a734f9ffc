//! Entropy estimates for the gas under the canonical prior: the Sanov form
//! for empirical-distribution coarse-grainings, the thermodynamic forms for
//! subsystem energies, the prior entropy, and the two H-theorem entropies.

use serde::Serialize;

use super::coarse::{empirical_distribution, reference_distribution, CgKind, SingleParticleCg};
use super::{GasParams, GasState, DIM};
use crate::entropy::{kl_divergence, ExtReal};
use crate::error::{Error, Result};

/// ħc in eV·pm.
pub const HBAR_C_EV_PM: f64 = 197_326.980_4;

/// λ_th = √(2πħ²β/m) in pm for m in GeV/c² and β⁻¹ in meV.
pub fn thermal_wavelength_pm(mass_gev: f64, beta_inv_mev: f64) -> f64 {
    let mc2 = mass_gev * 1e9;
    let kt = beta_inv_mev * 1e-3;
    HBAR_C_EV_PM * (2.0 * std::f64::consts::PI / (mc2 * kt)).sqrt()
}

/// The canonical prior entropy in three forms (nats, whole gas).
#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct SackurTetrode {
    /// N d ln[(L / N^{1/d}) / λ_th · √e], the form used for S(τ).
    pub standard: f64,
    /// N d ln(L/λ_th) + N d/2 − N ln N + N, Stirling's ln N! ≈ N ln N − N.
    pub stirling: f64,
    /// N d ln(L/λ_th) + N d/2 − ln N!.
    pub exact: f64,
    pub per_particle: f64,
}

pub fn sackur_tetrode(params: &GasParams) -> SackurTetrode {
    let n = params.n as f64;
    let d = DIM as f64;
    let ratio = params.box_over_lambda();
    let standard = n * d * ((ratio / n.powf(1.0 / d)).ln() + 0.5);
    let base = n * d * ratio.ln() + 0.5 * n * d;
    let stirling = base - n * n.ln() + n;
    let exact = base - libm::lgamma(n + 1.0);
    SackurTetrode { standard, stirling, exact, per_particle: standard / n }
}

/// γ = min(1, (ΔP/2) / max_j |P_j − Q_j|): the largest single mixing weight
/// that keeps every fraction within its meta-bin.
pub fn sanov_mixing(p: &[f64], q: &[f64], delta_p: f64) -> f64 {
    let dev = p.iter().zip(q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if dev == 0.0 {
        1.0
    } else {
        (0.5 * delta_p / dev).min(1.0)
    }
}

/// S(τ) − n D(P*‖Q) with P* = (1 − γ)P + γQ.
pub fn sanov_entropy(p_obs: &[f64], q: &[f64], n: usize, delta_p: f64, s_tau: f64) -> Result<ExtReal> {
    if p_obs.len() != q.len() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", p_obs.len(), q.len())));
    }
    if p_obs.iter().zip(q).any(|(p, q)| *p > 0.0 && *q <= 0.0) {
        return Err(Error::Support("observed bin has zero reference probability".into()));
    }
    let g = sanov_mixing(p_obs, q, delta_p);
    let star: Vec<f64> = p_obs.iter().zip(q).map(|(p, q)| (1.0 - g) * p + g * q).collect();
    let d = kl_divergence(&star, q)?;
    Ok(match d {
        ExtReal::Finite(v) => ExtReal::Finite(s_tau - n as f64 * v),
        _ => ExtReal::NegInf,
    })
}

/// ln of the exact multinomial probability that n i.i.d. draws from q
/// produce exactly the given counts.
pub fn exact_type_log_prob(counts: &[usize], q: &[f64]) -> f64 {
    let n: usize = counts.iter().sum();
    let mut acc = libm::lgamma(n as f64 + 1.0);
    for (&k, &qj) in counts.iter().zip(q) {
        acc -= libm::lgamma(k as f64 + 1.0);
        if k > 0 {
            acc += k as f64 * qj.ln();
        }
    }
    acc
}

fn alpha(n_side: usize) -> f64 {
    n_side as f64 * DIM as f64 / 2.0 - 1.0
}

fn equilibrium_energy(n_side: usize, params: &GasParams) -> f64 {
    params.total_energy() * n_side as f64 / params.n as f64
}

fn check_positive(e: f64, name: &str) -> Result<()> {
    if !(e > 0.0) || !e.is_finite() {
        return Err(Error::InvalidParam(format!("{name} = {e} must be positive")));
    }
    Ok(())
}

/// S(τ) − ln[(𝔈_A/E_A)^{α_A} (𝔈_B/E_B)^{α_B}], α = N_side d/2 − 1 and
/// 𝔈 = (E/N) N_side.
pub fn thermo_entropy_joint(e_a: f64, e_b: f64, n_a: usize, params: &GasParams, s_tau: f64) -> Result<f64> {
    check_positive(e_a, "E_A")?;
    check_positive(e_b, "E_B")?;
    let n_b = params.n - n_a;
    let (ea_eq, eb_eq) = (equilibrium_energy(n_a, params), equilibrium_energy(n_b, params));
    Ok(s_tau - alpha(n_a) * (ea_eq / e_a).ln() - alpha(n_b) * (eb_eq / e_b).ln())
}

/// S(τ) − α_A ln(𝔈_A/E_A) − β(E_A − 𝔈_A).
pub fn thermo_entropy_single(e_a: f64, n_a: usize, params: &GasParams, s_tau: f64) -> Result<f64> {
    let marginal = thermo_entropy_single_marginal(e_a, n_a, params, s_tau)?;
    Ok(marginal - (e_a - equilibrium_energy(n_a, params)) / params.beta_inv)
}

/// The traditional marginal variant: the single-sided form without its βE
/// term.
pub fn thermo_entropy_single_marginal(e_a: f64, n_a: usize, params: &GasParams, s_tau: f64) -> Result<f64> {
    check_positive(e_a, "E_A")?;
    Ok(s_tau - alpha(n_a) * (equilibrium_energy(n_a, params) / e_a).ln())
}

/// ln W_E − ln W_𝔈 for a subsystem of n_side particles: the shell volume
/// with widths fixed at the equilibrium energy.
pub fn ln_shell_volume_rel(e: f64, n_side: usize, e_eq: f64) -> f64 {
    alpha(n_side) * (e / e_eq).ln()
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct BoltzmannH {
    /// Phase-cell distribution (second H-theorem).
    pub h_phase_cell: f64,
    /// Kinetic-energy distribution (first H-theorem); coarser, so larger.
    pub h_kinetic_energy: f64,
}

/// Both H-theorem entropies as Sanov estimates without meta-binning.
pub fn boltzmann_h_entropies(state: &GasState, params: &GasParams, s_tau: f64) -> Result<BoltzmannH> {
    let mut out = [0.0; 2];
    for (k, kind) in [CgKind::PhaseCell, CgKind::KineticEnergy].into_iter().enumerate() {
        let cg = SingleParticleCg { delta_p: 0.0, ..SingleParticleCg::new(kind) };
        let p = empirical_distribution(state, &cg, params);
        let q = reference_distribution(&cg, params)?;
        out[k] = sanov_entropy(p.as_slice(), q.as_slice(), state.n(), 0.0, s_tau)?
            .finite()
            .ok_or_else(|| Error::Numerical("infinite H-theorem entropy".into()))?;
    }
    Ok(BoltzmannH { h_phase_cell: out[0], h_kinetic_energy: out[1] })
}
