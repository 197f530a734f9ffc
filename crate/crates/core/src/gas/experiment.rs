//! A full gas run: generate an initial condition, simulate, and evaluate
//! every coarse-grained entropy at each sample time.

use rayon::prelude::*;
use serde::Serialize;

use super::coarse::{empirical_distribution, reference_distribution, CgKind, SingleParticleCg};
use super::entropy::{
    boltzmann_h_entropies, sackur_tetrode, sanov_entropy, thermo_entropy_joint, thermo_entropy_single,
    thermo_entropy_single_marginal, SackurTetrode,
};
use super::ic::{generate_ic, InitialCondition};
use super::sim::{GasState, Simulator};
use super::{GasParams, DIM};
use crate::entropy::ExtReal;
use crate::equilibration::{temperature_equilibration, TemperatureParams, TemperatureReport};
use crate::error::{Error, Result};
use crate::series::{last_quarter_mean, EntropyRecord, EntropySeries};

pub const ENERGY_JOINT: &str = "energy_joint";
pub const ENERGY_ONE_SIDED: &str = "energy_one_sided";
pub const H_PHASE_CELL: &str = "h_phase_cell";
pub const H_KINETIC_ENERGY: &str = "h_kinetic_energy";

pub fn cg_label(kind: CgKind) -> &'static str {
    match kind {
        CgKind::Spatial => "spatial",
        CgKind::Speed => "speed",
        CgKind::Velocity => "velocity",
        CgKind::PhaseCell => H_PHASE_CELL,
        CgKind::KineticEnergy => H_KINETIC_ENERGY,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GasExperiment {
    pub params: GasParams,
    pub ic: InitialCondition,
    /// Run length in units of T.
    pub t_end: f64,
    pub n_samples: usize,
    /// Hard-disk collisions on; off gives free streaming with walls.
    pub interacting: bool,
    /// Empirical-distribution coarse-grainings to evaluate.
    pub cgs: Vec<CgKind>,
    pub energy: bool,
    pub h_theorem: bool,
    pub keep_states: bool,
}

impl GasExperiment {
    pub fn new(params: GasParams, ic: InitialCondition) -> Self {
        Self {
            params,
            ic,
            t_end: 30.0,
            n_samples: 301,
            interacting: true,
            cgs: vec![CgKind::Spatial, CgKind::Speed, CgKind::Velocity],
            energy: true,
            h_theorem: true,
            keep_states: false,
        }
    }

    pub fn sample_times(&self) -> Vec<f64> {
        let t = self.params.time_scale() * self.t_end;
        let n = self.n_samples.max(2);
        (0..n).map(|k| t * k as f64 / (n - 1) as f64).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LabelSummary {
    pub label: String,
    pub initial: f64,
    pub last_quarter: f64,
    pub initial_per_particle: f64,
    pub last_quarter_per_particle: f64,
    /// (S(τ) − last-quarter mean) / N.
    pub gap_per_particle: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GasSummary {
    pub ic: u32,
    pub interacting: bool,
    pub n: usize,
    pub n_a: usize,
    pub time_scale: f64,
    pub s_tau: f64,
    pub s_tau_per_particle: f64,
    pub sackur_tetrode: SackurTetrode,
    pub pair_collisions: u64,
    pub wall_collisions: u64,
    pub max_energy_drift: f64,
    /// Smallest sampled center distance over 2r.
    pub min_contact_ratio: f64,
    pub max_wall_violation: f64,
    /// Largest h_phase_cell − h_kinetic_energy over samples (≤ 0 expected).
    pub h_order_violation: Option<f64>,
    pub labels: Vec<LabelSummary>,
    pub temperature: Option<TemperatureReport>,
}

pub struct GasRun {
    pub series: EntropySeries,
    pub summary: GasSummary,
    pub subsystem_a: Vec<usize>,
    pub states: Vec<GasState>,
}

fn record(t: f64, label: &str, s_oe: ExtReal, s_traditional: ExtReal, s_tau: f64, e: (f64, f64)) -> EntropyRecord {
    EntropyRecord { t, label: label.to_string(), s_oe, s_traditional, s_tau, e_a: e.0, e_b: e.1, probs: None }
}

fn evaluate(
    exp: &GasExperiment,
    state: &GasState,
    a: &[usize],
    refs: &[(CgKind, SingleParticleCg, Vec<f64>)],
    s_tau: f64,
) -> Result<(Vec<EntropyRecord>, Option<f64>)> {
    let p = &exp.params;
    let e_a = state.energy_of(a, p.mass);
    let e_b = state.kinetic_energy(p.mass) - e_a;
    let e = (e_a, e_b);
    let t = state.time;
    let mut out = Vec::new();
    for (kind, cg, q) in refs {
        let obs = empirical_distribution(state, cg, p);
        let s = sanov_entropy(obs.as_slice(), q, state.n(), cg.delta_p, s_tau)?;
        out.push(record(t, cg_label(*kind), s, ExtReal::PosInf, s_tau, e));
    }
    if exp.energy {
        // A subsystem at rest has a single microstate energy: −∞.
        let joint = if e_a > 0.0 && e_b > 0.0 {
            thermo_entropy_joint(e_a, e_b, a.len(), p, s_tau)?.into()
        } else {
            ExtReal::NegInf
        };
        out.push(record(t, ENERGY_JOINT, joint, joint, s_tau, e));
        let (single, marginal) = if e_a > 0.0 {
            (
                thermo_entropy_single(e_a, a.len(), p, s_tau)?.into(),
                thermo_entropy_single_marginal(e_a, a.len(), p, s_tau)?.into(),
            )
        } else {
            (ExtReal::NegInf, ExtReal::NegInf)
        };
        out.push(record(t, ENERGY_ONE_SIDED, single, marginal, s_tau, e));
    }
    let mut order = None;
    if exp.h_theorem {
        let h = boltzmann_h_entropies(state, p, s_tau)?;
        out.push(record(t, H_PHASE_CELL, h.h_phase_cell.into(), ExtReal::PosInf, s_tau, e));
        out.push(record(t, H_KINETIC_ENERGY, h.h_kinetic_energy.into(), ExtReal::PosInf, s_tau, e));
        order = Some(h.h_phase_cell - h.h_kinetic_energy);
    }
    Ok((out, order))
}

pub fn run_gas_experiment(exp: &GasExperiment) -> Result<GasRun> {
    let p = &exp.params;
    p.validate()?;
    if !(exp.t_end > 0.0) {
        return Err(Error::InvalidParam("t_end must be positive".into()));
    }
    let setup = generate_ic(p, exp.ic)?;
    let a = setup.subsystem_a.clone();
    let st = sackur_tetrode(p);
    let s_tau = st.standard;
    let e0 = setup.state.kinetic_energy(p.mass);
    let mut sim = Simulator::new(setup.state, p.radius, p.box_l, exp.interacting)?;
    let states = sim.sample(&exp.sample_times())?;
    let stats = sim.stats();

    let refs: Vec<(CgKind, SingleParticleCg, Vec<f64>)> = exp
        .cgs
        .iter()
        .map(|&k| {
            let cg = SingleParticleCg::new(k);
            reference_distribution(&cg, p).map(|q| (k, cg, q.into_vec()))
        })
        .collect::<Result<_>>()?;
    let evaluated: Vec<(Vec<EntropyRecord>, Option<f64>)> =
        states.par_iter().map(|s| evaluate(exp, s, &a, &refs, s_tau)).collect::<Result<_>>()?;

    let mut series = EntropySeries::new();
    let mut h_order: Option<f64> = None;
    for (recs, order) in evaluated {
        for r in recs {
            series.push(r);
        }
        if let Some(o) = order {
            h_order = Some(h_order.map_or(o, |h: f64| h.max(o)));
        }
    }
    let n = p.n as f64;
    let labels = series
        .labels()
        .into_iter()
        .map(|label| {
            let vals: Vec<f64> = series.for_label(&label).iter().map(|r| r.s_oe.to_f64()).collect();
            let lq = last_quarter_mean(&vals);
            LabelSummary {
                initial: vals[0],
                last_quarter: lq,
                initial_per_particle: vals[0] / n,
                last_quarter_per_particle: lq / n,
                gap_per_particle: (s_tau - lq) / n,
                label,
            }
        })
        .collect();
    // Undefined while a subsystem has zero energy at t = 0.
    let temperature = if exp.energy {
        temperature_equilibration(
            &series,
            &TemperatureParams {
                n_a: a.len(),
                n_b: p.n - a.len(),
                dim: DIM,
                beta_inv: p.beta_inv,
                joint_label: ENERGY_JOINT.into(),
            },
        )
        .ok()
    } else {
        None
    };
    let sigma = 2.0 * p.radius;
    let max_energy_drift = states.iter().map(|s| (s.kinetic_energy(p.mass) - e0).abs() / e0).fold(0.0, f64::max);
    let min_contact_ratio = if exp.interacting {
        states.par_iter().map(|s| s.min_pair_distance() / sigma).reduce(|| f64::INFINITY, f64::min)
    } else {
        f64::NAN
    };
    let max_wall_violation = states.iter().map(|s| s.max_wall_violation(p.radius, p.box_l)).fold(0.0, f64::max);
    let summary = GasSummary {
        ic: exp.ic.index(),
        interacting: exp.interacting,
        n: p.n,
        n_a: a.len(),
        time_scale: p.time_scale(),
        s_tau,
        s_tau_per_particle: s_tau / n,
        sackur_tetrode: st,
        pair_collisions: stats.pair_collisions,
        wall_collisions: stats.wall_collisions,
        max_energy_drift,
        min_contact_ratio,
        max_wall_violation,
        h_order_violation: h_order,
        labels,
        temperature,
    };
    Ok(GasRun { series, summary, subsystem_a: a, states: if exp.keep_states { states } else { vec![] } })
}
