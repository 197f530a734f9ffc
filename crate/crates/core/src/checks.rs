//! Randomized property suites, one per module, with a shared random
//! instance generator covering every prior family. Each property reports
//! the largest violation it saw; a case fails when that exceeds the
//! property's tolerance or the case errors.

use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{
    cross_entropy, kl_divergence, measure, measured_relative_entropy, observational_entropy, relative_entropy,
    renyi_oe, shannon_entropy, trace_distance, traditional_oe, von_neumann_entropy, DensityState, ExtReal, Label,
    Povm, ProbVector,
};
use crate::equilibration::{
    continuity_check, ep_clausius_check, fluctuation_term, g_eps, master_equation_entropy, open_system_bound_check,
    tail_table,
};
use crate::error::{Error, Result};
use crate::gas::{
    generate_ic, ln_shell_volume_rel, pair_collision_time, run_gas_experiment, sanov_mixing, GasExperiment, GasParams,
    GasState, InitialCondition, Simulator,
};
use crate::linalg::{CMatrix, Spectrum, C64};
use crate::maxent::{
    canonical_prior, charges_prior, check_constraint, microcanonical_prior, time_averaged_prior, time_averaged_state,
    uniform_prior, ConstraintKind, ConstraintMode, Prior,
};
use crate::measurements::{
    coarse_energy_povm, conditional_measured_entropy, disjoint_combine, lueders_sequence, mix_povms, one_sided,
    postprocess, EnergyWindowSpec,
};
use crate::recovery::{coarse_states, petz_coarse_state, recovery_gap, smeared_coarse_state};
use crate::rmt::{evolve_spectral, rabi_excited_population};
use crate::rng::{stream, Rng};
use crate::sampling::{
    random_density, random_hermitian, random_povm, random_probs, random_projective_povm, random_stochastic,
    random_unitary,
};

pub const PRIOR_KINDS: [ConstraintKind; 5] = [
    ConstraintKind::CanonicalEnergy,
    ConstraintKind::CanonicalCharges,
    ConstraintKind::MicrocanonicalProjector,
    ConstraintKind::TrivialUniform,
    ConstraintKind::TimeAveraged,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    EntropyCore,
    Maxent,
    Measurements,
    Recovery,
    RmtModel,
    GasSim,
    Equilibration,
    All,
}

impl Scope {
    pub const MODULES: [Scope; 7] = [
        Scope::EntropyCore,
        Scope::Maxent,
        Scope::Measurements,
        Scope::Recovery,
        Scope::RmtModel,
        Scope::GasSim,
        Scope::Equilibration,
    ];

    pub fn parse(s: &str) -> Option<Scope> {
        Some(match s {
            "entropy-core" => Scope::EntropyCore,
            "maxent" => Scope::Maxent,
            "measurements" => Scope::Measurements,
            "recovery" => Scope::Recovery,
            "rmt-model" => Scope::RmtModel,
            "gas-sim" => Scope::GasSim,
            "equilibration" => Scope::Equilibration,
            "all" => Scope::All,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Scope::EntropyCore => "entropy-core",
            Scope::Maxent => "maxent",
            Scope::Measurements => "measurements",
            Scope::Recovery => "recovery",
            Scope::RmtModel => "rmt-model",
            Scope::GasSim => "gas-sim",
            Scope::Equilibration => "equilibration",
            Scope::All => "all",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyResult {
    pub module: String,
    pub name: String,
    pub tolerance: f64,
    pub cases: usize,
    pub failures: usize,
    /// Largest violation over all cases; ≤ tolerance means the case passed.
    pub worst: f64,
    pub first_failure: Option<String>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub scope: String,
    pub seed: u64,
    pub cases: usize,
    pub passed: bool,
    pub properties: Vec<PropertyResult>,
}

/// Run `cases` instances of a multi-property check in parallel. The closure
/// returns one violation per name; each case gets its own named sub-stream.
pub fn run_properties<F>(module: &str, names: &[(&str, f64)], seed: u64, cases: usize, f: F) -> Vec<PropertyResult>
where
    F: Fn(&mut Rng, usize) -> Result<Vec<f64>> + Sync,
{
    let key = names.iter().map(|(n, _)| *n).collect::<Vec<_>>().join("+");
    let outcomes: Vec<Result<Vec<f64>>> = (0..cases)
        .into_par_iter()
        .map(|case| {
            let mut rng = stream(seed, &format!("check/{module}/{key}/{case}"));
            f(&mut rng, case)
        })
        .collect();
    names
        .iter()
        .enumerate()
        .map(|(k, &(name, tol))| {
            let mut r = PropertyResult {
                module: module.to_string(),
                name: name.to_string(),
                tolerance: tol,
                cases,
                failures: 0,
                worst: f64::NEG_INFINITY,
                first_failure: None,
            };
            for (case, out) in outcomes.iter().enumerate() {
                let msg = match out {
                    Ok(v) => {
                        let x = v[k];
                        if !x.is_nan() {
                            r.worst = r.worst.max(x);
                        }
                        if x <= tol {
                            continue;
                        }
                        format!("case {case}: violation {x:e}")
                    }
                    Err(e) => format!("case {case}: {e}"),
                };
                r.failures += 1;
                if r.first_failure.is_none() {
                    r.first_failure = Some(msg);
                }
            }
            r
        })
        .collect()
}

fn run_property<F>(module: &str, name: &str, tol: f64, seed: u64, cases: usize, f: F) -> PropertyResult
where
    F: Fn(&mut Rng, usize) -> Result<f64> + Sync,
{
    run_properties(module, &[(name, tol)], seed, cases, |rng, c| f(rng, c).map(|v| vec![v]))
        .pop()
        .expect("one property")
}

/// `a ≤ b` as a violation amount: a − b, with infinities resolved.
fn excess(a: ExtReal, b: ExtReal) -> f64 {
    match (a, b) {
        (ExtReal::Finite(x), ExtReal::Finite(y)) => x - y,
        (ExtReal::NegInf, _) | (_, ExtReal::PosInf) => f64::NEG_INFINITY,
        _ => f64::INFINITY,
    }
}

fn fin(x: ExtReal, what: &str) -> Result<f64> {
    x.finite().ok_or_else(|| Error::Numerical(format!("{what} is infinite")))
}

// ----------------------------------------------------------------------------
// Random instances

/// A prior, the state family it was built from, and a sampler for states
/// obeying S(ρ;τ) ≤ S(τ).
pub struct PriorInstance {
    pub kind: ConstraintKind,
    pub prior: Prior,
    hamiltonian: Option<Spectrum>,
    seed_state: Option<DensityState>,
    projector: Option<CMatrix>,
}

fn interior_state(d: usize, rng: &mut Rng) -> Result<DensityState> {
    let rank = rng.random_range(1..=d);
    random_density(d, rank, rng)?.mix(&DensityState::maximally_mixed(d), 0.5)
}

fn random_projector(d: usize, rank: usize, rng: &mut Rng) -> CMatrix {
    let u = random_unitary(d, rng);
    let mut p = CMatrix::zeros(d, d);
    for k in 0..rank {
        let col: Vec<C64> = (0..d).map(|i| u.get(i, k)).collect();
        p = &p + &CMatrix::outer(&col);
    }
    p.hermitian_part()
}

pub fn random_prior(d: usize, kind: ConstraintKind, rng: &mut Rng) -> Result<PriorInstance> {
    let mut out = PriorInstance { kind, prior: uniform_prior(d), hamiltonian: None, seed_state: None, projector: None };
    match kind {
        ConstraintKind::CanonicalEnergy => {
            let h = random_hermitian(d, rng);
            let e = interior_state(d, rng)?.expectation(&h);
            out.prior = canonical_prior(&h, e)?;
        }
        ConstraintKind::CanonicalCharges => {
            let mut last = None;
            for _ in 0..5 {
                let qs = [random_hermitian(d, rng), random_hermitian(d, rng)];
                let sigma = interior_state(d, rng)?;
                let cs = [sigma.expectation(&qs[0]), sigma.expectation(&qs[1])];
                match charges_prior(&qs, &cs) {
                    Ok(p) => {
                        last = Some(p);
                        break;
                    }
                    Err(e) => {
                        if matches!(e, Error::NoConvergence(_)) {
                            continue;
                        }
                        return Err(e);
                    }
                }
            }
            out.prior = last.ok_or_else(|| Error::NoConvergence("charges prior after 5 draws".into()))?;
        }
        ConstraintKind::MicrocanonicalProjector => {
            let rank = if d > 1 { rng.random_range(1..d) } else { 1 };
            let pi = random_projector(d, rank, rng);
            out.prior = microcanonical_prior(&pi)?;
            out.projector = Some(pi);
        }
        ConstraintKind::TrivialUniform => {}
        ConstraintKind::TimeAveraged => {
            let h = random_hermitian(d, rng);
            let rank = rng.random_range(1..=d);
            let rho0 = random_density(d, rank, rng)?;
            out.prior = time_averaged_prior(&h, &rho0)?;
            out.hamiltonian = Some(h.eigh()?);
            out.seed_state = Some(rho0);
        }
    }
    out.prior = out.prior.with_mode(ConstraintMode::Inequality);
    Ok(out)
}

impl PriorInstance {
    /// A random state satisfying the prior's constraint.
    pub fn admissible_state(&self, rng: &mut Rng) -> Result<DensityState> {
        let d = self.prior.dim();
        let state = match self.kind {
            ConstraintKind::TrivialUniform => {
                let rank = rng.random_range(1..=d);
                random_density(d, rank, rng)?
            }
            ConstraintKind::MicrocanonicalProjector => {
                let pi = self.projector.as_ref().expect("projector kept");
                let rank = rng.random_range(1..=d);
                let g = random_density(d, rank, rng)?;
                DensityState::from_unnormalized(pi.matmul(g.matrix()).matmul(pi))?
            }
            ConstraintKind::TimeAveraged => {
                let spec = self.hamiltonian.as_ref().expect("spectrum kept");
                let rho0 = self.seed_state.as_ref().expect("seed state kept");
                let k = rng.random_range(1..=3usize);
                let mut acc = evolve_spectral(spec, rho0, rng.random_range(0.0..10.0))?;
                for j in 1..k {
                    let next = evolve_spectral(spec, rho0, rng.random_range(0.0..10.0))?;
                    acc = acc.mix(&next, 1.0 / (j + 1) as f64)?;
                }
                acc
            }
            ConstraintKind::CanonicalEnergy | ConstraintKind::CanonicalCharges => {
                let mut found = None;
                for _ in 0..2000 {
                    let rank = rng.random_range(1..=d);
                    let s = random_density(d, rank, rng)?;
                    if check_constraint(&s, &self.prior)?.satisfied {
                        found = Some(s);
                        break;
                    }
                }
                let s = found.ok_or_else(|| Error::Constraint("no admissible state in 2000 draws".into()))?;
                if rng.random_bool(0.5) {
                    s
                } else {
                    s.mix(&self.prior.tau, rng.random_range(0.0..1.0))?
                }
            }
        };
        if !check_constraint(&state, &self.prior)?.satisfied {
            return Err(Error::Constraint("sampled state violates the constraint".into()));
        }
        Ok(state)
    }
}

/// A POVM with 2 to d + 1 outcomes: random PSD decomposition, or projective
/// one time in four.
pub fn random_measurement(d: usize, rng: &mut Rng) -> Result<Povm> {
    let m = rng.random_range(2..=d + 1);
    if rng.random_range(0..4) == 0 {
        random_projective_povm(d, m.min(d), rng)
    } else {
        random_povm(d, m, rng)
    }
}

// ----------------------------------------------------------------------------
// The inequality suite

pub const INEQUALITY_TOL: f64 = 1e-8;

pub const INEQUALITY_NAMES: [(&str, f64); 8] = [
    ("upper_bound", INEQUALITY_TOL),
    ("lower_bound", INEQUALITY_TOL),
    ("relative_entropy_bound", INEQUALITY_TOL),
    ("open_system_bound", INEQUALITY_TOL),
    ("coarser_monotonicity", INEQUALITY_TOL),
    ("monotonicity_chain", INEQUALITY_TOL),
    ("recovery_bound", INEQUALITY_TOL),
    ("continuity_bound", INEQUALITY_TOL),
];

/// Every bound on one random instance: dimension 2–6, random POVM, prior
/// family chosen by case index, ρ and σ sampled under the constraint.
pub fn inequality_instance(rng: &mut Rng, case: usize) -> Result<Vec<f64>> {
    let d = rng.random_range(2..=6usize);
    let kind = PRIOR_KINDS[case % PRIOR_KINDS.len()];
    let inst = random_prior(d, kind, rng)?;
    let tau = &inst.prior.tau;
    let s_tau = inst.prior.s_tau;
    let rho = inst.admissible_state(rng)?;
    let sigma = inst.admissible_state(rng)?;
    let m = random_measurement(d, rng)?;

    let rep = observational_entropy(&m, tau, &rho)?;
    let s_oe = fin(rep.s_oe, "S_M^τ(ρ)")?;
    let s_rho = von_neumann_entropy(&rho);
    let d_full = relative_entropy(&rho, tau)?;
    let upper = s_oe - s_tau;
    let lower = s_rho - s_oe;
    let qre = excess(d_full.subtract_from(s_tau), ExtReal::Finite(s_oe));

    // Open system: a fresh bipartite instance of dimension 4 or 6.
    let (ds, de) = [(2, 2), (2, 3), (3, 2)][rng.random_range(0..3usize)];
    let bip = random_prior(ds * de, kind, rng)?;
    let rho_se = bip.admissible_state(rng)?;
    let m_s = random_measurement(ds, rng)?;
    let open = open_system_bound_check(&m_s, &bip.prior.tau, &rho_se, ds, de)?;
    let open_v = excess(open.rhs, ExtReal::Finite(open.lhs));

    let rows = rng.random_range(1..=m.len() + 1);
    let lam = random_stochastic(rows, m.len(), rng)?;
    let coarse = postprocess(&lam, &m)?;
    let s_coarse = fin(observational_entropy(&coarse, tau, &rho)?.s_oe, "coarser OE")?;
    let coarser = s_oe - s_coarse;

    let d_m = rep.d_m;
    let rho_cg = petz_coarse_state(&m, tau, &rep.p)?;
    let d_cg = relative_entropy(&rho_cg, tau)?;
    let d_m_cg = measured_relative_entropy(&m, &rho_cg, tau)?;
    let chain = excess(d_m, d_full).max(excess(d_cg, d_m)).max(excess(d_m_cg, d_cg));

    let gap = recovery_gap(&m, tau, &rho, &[])?;
    let recovery = excess(gap.rhs, ExtReal::Finite(gap.lhs));

    let cont = continuity_check(&m, &inst.prior, &rho, &sigma)?;
    let continuity = cont.lhs - cont.rhs;

    Ok(vec![upper, lower, qre, open_v, coarser, chain, recovery, continuity])
}

pub fn inequality_suite(seed: u64, cases: usize) -> Vec<PropertyResult> {
    run_properties("inequalities", &INEQUALITY_NAMES, seed, cases, inequality_instance)
}

// ----------------------------------------------------------------------------
// Per-module suites

fn entropy_core(seed: u64, n: usize) -> Vec<PropertyResult> {
    let md = "entropy-core";
    let mut out = run_properties(
        md,
        &[("bounds_under_constraint", 1e-8), ("upper_bound_unconstrained", 1e-8), ("relative_entropy_bound", 1e-8)],
        seed,
        n,
        |rng, case| {
            let d = rng.random_range(2..=6usize);
            let inst = random_prior(d, PRIOR_KINDS[case % 5], rng)?;
            let rho = inst.admissible_state(rng)?;
            let m = random_measurement(d, rng)?;
            let s = fin(observational_entropy(&m, &inst.prior.tau, &rho)?.s_oe, "OE")?;
            let free = random_density(d, rng.random_range(1..=d), rng)?;
            let s_free = observational_entropy(&m, &inst.prior.tau, &free)?.s_oe;
            let qre = relative_entropy(&rho, &inst.prior.tau)?.subtract_from(inst.prior.s_tau);
            Ok(vec![
                (von_neumann_entropy(&rho) - s).max(s - inst.prior.s_tau),
                excess(s_free, ExtReal::Finite(inst.prior.s_tau)),
                excess(qre, ExtReal::Finite(s)),
            ])
        },
    );
    out.push(run_property(md, "missing_information", 1e-9, seed, n, |rng, _| {
        let d = rng.random_range(2..=6usize);
        let p = random_probs(d, rng);
        let u = vec![1.0 / d as f64; d];
        let h = shannon_entropy(&ProbVector::new(p.clone())?);
        let e1 = (h - ((d as f64).ln() - fin(kl_divergence(&p, &u)?, "D")?)).abs();
        let rho = random_density(d, rng.random_range(1..=d), rng)?;
        let mix = DensityState::maximally_mixed(d);
        let e2 = (von_neumann_entropy(&rho) - ((d as f64).ln() - fin(relative_entropy(&rho, &mix)?, "D")?)).abs();
        let m = random_measurement(d, rng)?;
        let e3 = (traditional_oe(&m, &rho)? - ((d as f64).ln() - fin(measured_relative_entropy(&m, &rho, &mix)?, "D_M")?))
            .abs();
        Ok(e1.max(e2).max(e3))
    }));
    out.push(run_property(md, "maximal_information_bound", 1e-9, seed, n, |rng, _| {
        // ψ = Σ √τ_k |k⟩ saturates the cross-entropy constraint, D(ψ‖τ) = S(τ),
        // and no measurement extracts more than that.
        let d = rng.random_range(2..=8usize);
        let t = random_probs(d, rng);
        let tau = DensityState::diagonal(&t)?;
        let psi: Vec<C64> = t.iter().map(|v| C64::new(v.sqrt(), 0.0)).collect();
        let rho = DensityState::from_pure(psi)?;
        let s_tau = von_neumann_entropy(&tau);
        let d_full = fin(relative_entropy(&rho, &tau)?, "D")?;
        let m = random_measurement(d, rng)?;
        let dm = measured_relative_entropy(&m, &rho, &tau)?;
        Ok((d_full - s_tau).abs().max(excess(dm, ExtReal::Finite(s_tau))))
    }));
    out.push(run_property(md, "relative_entropy_nonnegative", 1e-10, seed, n, |rng, _| {
        let d = rng.random_range(2..=6usize);
        let a = random_density(d, rng.random_range(1..=d), rng)?;
        let b = random_density(d, d, rng)?;
        let p = random_probs(d, rng);
        let q = random_probs(d, rng);
        Ok(excess(ExtReal::Finite(0.0), relative_entropy(&a, &b)?).max(excess(ExtReal::Finite(0.0), kl_divergence(&p, &q)?)))
    }));
    out.push(run_property(md, "joint_convexity", 1e-9, seed, n, |rng, _| {
        let d = rng.random_range(2..=6usize);
        let w = rng.random_range(0.0..1.0);
        let (a1, a2) = (random_density(d, d, rng)?, random_density(d, d, rng)?);
        let (b1, b2) = (random_density(d, d, rng)?, random_density(d, d, rng)?);
        let lhs = relative_entropy(&a1.mix(&a2, w)?, &b1.mix(&b2, w)?)?;
        let r1 = fin(relative_entropy(&a1, &b1)?, "D")?;
        let r2 = fin(relative_entropy(&a2, &b2)?, "D")?;
        Ok(excess(lhs, ExtReal::Finite((1.0 - w) * r1 + w * r2)))
    }));
    out.push(run_property(md, "monotonicity_stochastic_map", 1e-9, seed, n, |rng, _| {
        let d = rng.random_range(2..=6usize);
        let p = random_probs(d, rng);
        let q = random_probs(d, rng);
        let lam = random_stochastic(rng.random_range(1..=6usize), d, rng)?;
        Ok(excess(kl_divergence(&lam.apply(&p), &lam.apply(&q))?, kl_divergence(&p, &q)?))
    }));
    out.push(run_property(md, "monotonicity_channel", 1e-9, seed, n, |rng, _| {
        // Measure-and-prepare channel ρ ↦ Σ_x Tr(E_x ρ) σ_x.
        let d = rng.random_range(2..=5usize);
        let m = random_measurement(d, rng)?;
        let d_out = rng.random_range(2..=5usize);
        let outs: Vec<DensityState> =
            (0..m.len()).map(|_| random_density(d_out, d_out, rng)).collect::<Result<_>>()?;
        let apply = |r: &DensityState| -> Result<DensityState> {
            let p = measure(&m, r)?;
            let mut acc = CMatrix::zeros(d_out, d_out);
            for (x, s) in outs.iter().enumerate() {
                acc = &acc + &s.matrix().scale(p[x]);
            }
            DensityState::from_unnormalized(acc)
        };
        let a = random_density(d, rng.random_range(1..=d), rng)?;
        let b = random_density(d, d, rng)?;
        Ok(excess(relative_entropy(&apply(&a)?, &apply(&b)?)?, relative_entropy(&a, &b)?))
    }));
    out.push(run_property(md, "disjoint_linearity", 1e-9, seed, n, |rng, _| {
        let d = rng.random_range(2..=6usize);
        let m1 = random_measurement(d, rng)?;
        let m2 = random_measurement(d, rng)?;
        let w = rng.random_range(0.0..1.0);
        let a = random_density(d, d, rng)?;
        let b = random_density(d, d, rng)?;
        let lhs = fin(measured_relative_entropy(&disjoint_combine(w, &m1, &m2)?, &a, &b)?, "D")?;
        let d1 = fin(measured_relative_entropy(&m1, &a, &b)?, "D")?;
        let d2 = fin(measured_relative_entropy(&m2, &a, &b)?, "D")?;
        Ok((lhs - w * d1 - (1.0 - w) * d2).abs())
    }));
    out.push(run_property(md, "cross_entropy_identity", 1e-9, seed, n, |rng, _| {
        let d = rng.random_range(2..=6usize);
        let a = random_density(d, rng.random_range(1..=d), rng)?;
        let b = random_density(d, d, rng)?;
        let c = fin(cross_entropy(&a, &b)?, "cross entropy")?;
        let r = fin(relative_entropy(&a, &b)?, "D")?;
        Ok((c - von_neumann_entropy(&a) - r).abs())
    }));
    out.push(run_property(md, "renyi_limit", 1e-6, seed, n, |rng, _| {
        // D_α = D + (α − 1) Var_p[ln p/q] / 2 + O((α − 1)²).
        let d = rng.random_range(2..=6usize);
        let q = random_probs(d, rng);
        let p = random_probs(d, rng);
        let tau = DensityState::diagonal(&q)?;
        let rho = DensityState::diagonal(&p)?;
        let m = Povm::basis(d);
        let s = fin(observational_entropy(&m, &tau, &rho)?.s_oe, "OE")?;
        let l: Vec<f64> = p.iter().zip(&q).map(|(a, b)| (a / b).ln()).collect();
        let mean: f64 = p.iter().zip(&l).map(|(a, x)| a * x).sum();
        let var: f64 = p.iter().zip(&l).map(|(a, x)| a * (x - mean).powi(2)).sum();
        let h = 1e-4;
        let lo = fin(renyi_oe(&m, &tau, &rho, 1.0 - h)?, "Rényi OE")?;
        let hi = fin(renyi_oe(&m, &tau, &rho, 1.0 + h)?, "Rényi OE")?;
        Ok((lo - (s + h * var / 2.0)).abs().max((hi - (s - h * var / 2.0)).abs()))
    }));
    out
}

fn maxent_suite(seed: u64, n: usize) -> Vec<PropertyResult> {
    let md = "maxent";
    let mut out = run_properties(md, &[("maxent_optimality", 1e-8), ("distance_bound", 1e-8)], seed, n, |rng, case| {
        let d = rng.random_range(2..=6usize);
        let inst = random_prior(d, PRIOR_KINDS[case % 5], rng)?;
        let rho = inst.admissible_state(rng)?;
        let s_rho = von_neumann_entropy(&rho);
        let dist = relative_entropy(&rho, &inst.prior.tau)?;
        Ok(vec![s_rho - inst.prior.s_tau, excess(dist, ExtReal::Finite(inst.prior.s_tau - s_rho))])
    });
    out.push(run_property(md, "boundary_equality", 1e-8, seed, n, |rng, _| {
        // States from the time-averaged family sit on the boundary.
        let d = rng.random_range(2..=6usize);
        let inst = random_prior(d, ConstraintKind::TimeAveraged, rng)?;
        let rho = inst.admissible_state(rng)?;
        let dist = fin(relative_entropy(&rho, &inst.prior.tau)?, "D")?;
        Ok((dist - (inst.prior.s_tau - von_neumann_entropy(&rho))).abs())
    }));
    out.push(run_property(md, "unitary_conservation", 1e-9, seed, n, |rng, case| {
        let d = rng.random_range(2..=6usize);
        let inst = random_prior(d, PRIOR_KINDS[case % 5], rng)?;
        let rho = inst.admissible_state(rng)?;
        let u = random_unitary(d, rng);
        let c0 = fin(cross_entropy(&rho, &inst.prior.tau)?, "cross")?;
        let c1 = fin(cross_entropy(&rho.conjugate_by(&u)?, &inst.prior.tau.conjugate_by(&u)?)?, "cross")?;
        let s1 = von_neumann_entropy(&inst.prior.tau.conjugate_by(&u)?);
        Ok((c0 - c1).abs().max((s1 - inst.prior.s_tau).abs()))
    }));
    out.push(run_property(md, "tightest_stationary_prior", 1e-8, seed, n, |rng, _| {
        let d = rng.random_range(2..=6usize);
        let h = random_hermitian(d, rng);
        let spec = h.eigh()?;
        let rho0 = random_density(d, rng.random_range(1..=d), rng)?;
        let bar = time_averaged_state(&h, &rho0)?;
        // Stationary priors τ = f(H) satisfying the constraint for ρ(0).
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..20 {
            let w = random_probs(d, rng);
            let tau = DensityState::from_spectrum(Spectrum { values: w, vectors: spec.vectors.clone() })?;
            let s_tau = von_neumann_entropy(&tau);
            if let ExtReal::Finite(c) = cross_entropy(&rho0, &tau)? {
                if c <= s_tau {
                    worst = worst.max(von_neumann_entropy(&bar) - s_tau);
                }
            }
        }
        Ok(worst)
    }));
    out.push(run_property(md, "prior_reproduces_targets", 1e-8, seed, n, |rng, case| {
        let d = rng.random_range(2..=6usize);
        let kind = [ConstraintKind::CanonicalEnergy, ConstraintKind::CanonicalCharges][case % 2];
        let inst = random_prior(d, kind, rng)?;
        let p = &inst.prior;
        let mut worst: f64 = (von_neumann_entropy(&p.tau) - p.s_tau).abs();
        for (q, c) in p.provenance.operators.iter().zip(&p.provenance.targets) {
            worst = worst.max((p.tau.expectation(q) - c).abs() / c.abs().max(1.0));
        }
        Ok(worst)
    }));
    out.push(run_property(md, "time_average_stationary", 1e-8, seed, n, |rng, _| {
        let d = rng.random_range(2..=6usize);
        let h = random_hermitian(d, rng);
        let rho0 = random_density(d, rng.random_range(1..=d), rng)?;
        let bar = time_averaged_state(&h, &rho0)?;
        let comm = &h.matmul(bar.matrix()) - &bar.matrix().matmul(&h);
        let spec = h.eigh()?;
        let rt = evolve_spectral(&spec, &rho0, rng.random_range(0.0..20.0))?;
        let c = fin(cross_entropy(&rt, &bar)?, "cross")?;
        Ok(comm.max_abs().max((c - von_neumann_entropy(&bar)).abs()))
    }));
    out
}

fn measurements_suite(seed: u64, n: usize) -> Vec<PropertyResult> {
    let md = "measurements";
    let mut out = vec![run_property(md, "coarser_monotonicity", 1e-8, seed, n, |rng, case| {
        let d = rng.random_range(2..=6usize);
        let inst = random_prior(d, PRIOR_KINDS[case % 5], rng)?;
        let rho = inst.admissible_state(rng)?;
        let m = random_measurement(d, rng)?;
        let lam = random_stochastic(rng.random_range(1..=m.len() + 1), m.len(), rng)?;
        let fine = fin(observational_entropy(&m, &inst.prior.tau, &rho)?.s_oe, "OE")?;
        let coarse = fin(observational_entropy(&postprocess(&lam, &m)?, &inst.prior.tau, &rho)?.s_oe, "OE")?;
        Ok(fine - coarse)
    })];
    out.extend(run_properties(md, &[("sequential_monotonicity", 1e-8), ("chain_rule", 1e-8)], seed, n, |rng, _| {
        let d = rng.random_range(2..=6usize);
        let first = random_projective_povm(d, rng.random_range(1..=d), rng)?;
        let second = random_projective_povm(d, rng.random_range(1..=d), rng)?;
        let rho = random_density(d, rng.random_range(1..=d), rng)?;
        let sigma = random_density(d, d, rng)?;
        let seq = lueders_sequence(&first, &second)?;
        let d_seq = fin(measured_relative_entropy(&seq, &rho, &sigma)?, "D")?;
        let d_first = fin(measured_relative_entropy(&first, &rho, &sigma)?, "D")?;
        let cond = fin(conditional_measured_entropy(&first, &second, &rho, &sigma)?, "conditional D")?;
        Ok(vec![d_first - d_seq, (d_seq - d_first - cond).abs()])
    }));
    out.push(run_property(md, "window_tiling", 1e-9, seed, n, |rng, _| {
        let d = rng.random_range(2..=12usize);
        let h = random_hermitian(d, rng);
        let mut spec = EnergyWindowSpec::new(h, rng.random_range(0.05..2.0));
        spec.origin = rng.random_range(-1.0..1.0);
        let m = coarse_energy_povm(&spec)?;
        let ranks: f64 = m.traces().iter().sum();
        let mut sum = CMatrix::zeros(d, d);
        for x in 0..m.len() {
            sum = &sum + &m.effect_matrix(x);
        }
        Ok((ranks - d as f64).abs().max(sum.max_abs_diff(&CMatrix::identity(d))))
    }));
    out.push(run_property(md, "measurement_convexity", 1e-8, seed, n, |rng, _| {
        let d = rng.random_range(2..=6usize);
        let k = rng.random_range(2..=3usize);
        let outcomes = rng.random_range(2..=d + 1);
        let povms: Vec<Povm> = (0..k).map(|_| random_povm(d, outcomes, rng)).collect::<Result<_>>()?;
        let w = random_probs(k, rng);
        let rho = random_density(d, d, rng)?;
        let sigma = random_density(d, d, rng)?;
        let lhs = fin(measured_relative_entropy(&mix_povms(&w, &povms)?, &rho, &sigma)?, "D")?;
        let mut rhs = 0.0;
        for (wk, p) in w.iter().zip(&povms) {
            rhs += wk * fin(measured_relative_entropy(p, &rho, &sigma)?, "D")?;
        }
        Ok(lhs - rhs)
    }));
    out.push(run_property(md, "tensor_and_one_sided", 1e-9, seed, n, |rng, _| {
        let (da, db) = (rng.random_range(2..=3usize), rng.random_range(2..=3usize));
        let ma = random_measurement(da, rng)?;
        let rho = random_density(da * db, da * db, rng)?;
        let ra = DensityState::from_unnormalized(rho.matrix().partial_trace_b(da, db))?;
        let p1 = measure(&one_sided(&ma, db)?, &rho)?;
        let p2 = measure(&ma, &ra)?;
        Ok(p1.as_slice().iter().zip(p2.as_slice()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }));
    out
}

fn recovery_suite(seed: u64, n: usize) -> Vec<PropertyResult> {
    let md = "recovery";
    let mut out = run_properties(
        md,
        &[("monotonicity_chain", 1e-8), ("recovery_bound", 1e-8), ("smeared_state_valid", 0.0)],
        seed, n, |rng, case| {
        let d = rng.random_range(2..=5usize);
        let inst = random_prior(d, PRIOR_KINDS[case % 5], rng)?;
        let tau = &inst.prior.tau;
        let rho = inst.admissible_state(rng)?;
        let m = random_measurement(d, rng)?;
        let p = measure(&m, &rho)?;
        let cg = petz_coarse_state(&m, tau, &p)?;
        let full = relative_entropy(&rho, tau)?;
        let dm = measured_relative_entropy(&m, &rho, tau)?;
        let dcg = relative_entropy(&cg, tau)?;
        let dmcg = measured_relative_entropy(&m, &cg, tau)?;
        let chain = excess(dm, full).max(excess(dcg, dm)).max(excess(dmcg, dcg));
        let gap = recovery_gap(&m, tau, &rho, &[])?;
        let sm = smeared_coarse_state(&m, tau, &p)?;
        let neg = -sm.eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
        let validity = (neg - 1e-9).max((sm.matrix().trace().re - 1.0).abs() - 1e-8);
        Ok(vec![chain, excess(gap.rhs, ExtReal::Finite(gap.lhs)), validity])
    });
    out.push(run_property(md, "projective_uniform_prior", 1e-9, seed, n, |rng, _| {
        let d = rng.random_range(2..=6usize);
        let m = random_projective_povm(d, rng.random_range(1..=d), rng)?;
        let rho = random_density(d, rng.random_range(1..=d), rng)?;
        let tau = DensityState::maximally_mixed(d);
        let p = measure(&m, &rho)?;
        let cg = petz_coarse_state(&m, &tau, &p)?;
        Ok((von_neumann_entropy(&cg) - traditional_oe(&m, &rho)?).abs())
    }));
    out.push(run_property(md, "commuting_bundle_agrees", 1e-8, seed, n, |rng, _| {
        let d = rng.random_range(2..=6usize);
        let tau = DensityState::diagonal(&random_probs(d, rng))?;
        let groups = rng.random_range(1..=d);
        let effects: Vec<Vec<f64>> = (0..groups)
            .map(|g| (0..d).map(|k| if k % groups == g { 1.0 } else { 0.0 }).collect())
            .collect();
        let m = Povm::new_diagonal(effects, (0..groups).map(Label::Index).collect())?;
        let p = ProbVector::new(random_probs(groups, rng))?;
        let b = coarse_states(&m, &tau, &p, &[-1.3, 0.7])?;
        let mut worst = b.smeared.matrix().max_abs_diff(b.petz.matrix());
        for (_, r) in &b.rotated {
            worst = worst.max(r.matrix().max_abs_diff(b.petz.matrix()));
        }
        Ok(worst)
    }));
    out
}

/// Small interacting system with exact evolution, for the RMT invariants.
fn small_rmt(rng: &mut Rng) -> Result<(CMatrix, Spectrum, DensityState, Povm)> {
    let (da, db) = (rng.random_range(2..=4usize), rng.random_range(2..=4usize));
    let ha: Vec<f64> = (0..da).map(|_| rng.random_range(-1.0..1.0)).collect();
    let hb: Vec<f64> = (0..db).map(|_| rng.random_range(-1.0..1.0)).collect();
    let d = da * db;
    let v = random_hermitian(d, rng).scale(0.2);
    let h0 = CMatrix::from_diag(&crate::rmt::product_energies(&ha, &hb));
    let h = &h0 + &v;
    let spec = h.eigh()?;
    let rho0 = random_density(d, 1, rng)?;
    let m_a = coarse_energy_povm(&EnergyWindowSpec::new(CMatrix::from_diag(&ha), 0.5))?;
    let m_b = coarse_energy_povm(&EnergyWindowSpec::new(CMatrix::from_diag(&hb), 0.5))?;
    Ok((h, spec, rho0, crate::measurements::tensor(&m_a, &m_b)?))
}

fn rmt_suite(seed: u64, n: usize) -> Vec<PropertyResult> {
    let md = "rmt-model";
    let mut out = run_properties(
        md,
        &[("energy_conservation", 1e-8), ("constraint_conservation", 1e-7), ("eigenstate_bound", 1e-6)],
        seed,
        n,
        |rng, _| {
            let (h, spec, rho0, m) = small_rmt(rng)?;
            let e0 = rho0.expectation(&h);
            let tau = canonical_prior(&h, e0)?;
            let c0 = fin(cross_entropy(&rho0, &tau.tau)?, "cross")?;
            let bar = time_averaged_state(&h, &rho0)?;
            let mut e_dev: f64 = 0.0;
            let mut c_dev: f64 = 0.0;
            let mut dbar = 0.0;
            let times: Vec<f64> = (0..200).map(|k| k as f64 * 0.37).collect();
            for &t in &times {
                let rt = evolve_spectral(&spec, &rho0, t)?;
                e_dev = e_dev.max((rt.expectation(&h) - e0).abs() / e0.abs().max(1.0));
                c_dev = c_dev.max((fin(cross_entropy(&rt, &tau.tau)?, "cross")? - c0).abs());
                dbar += measured_relative_entropy(&m, &rt, &bar)?.to_f64() / times.len() as f64;
            }
            Ok(vec![e_dev, c_dev, dbar - von_neumann_entropy(&bar)])
        },
    );
    out.push(run_property(md, "two_level_rabi", 1e-9, seed, n, |rng, _| {
        let omega = rng.random_range(0.1..3.0);
        let g = rng.random_range(0.05..1.0);
        let h = CMatrix::from_real_rows(&[vec![-omega / 2.0, g], vec![g, omega / 2.0]]);
        let spec = h.eigh()?;
        let rho0 = DensityState::diagonal(&[1.0, 0.0])?;
        let t = rng.random_range(0.0..20.0);
        let rt = evolve_spectral(&spec, &rho0, t)?;
        Ok((rt.diag()[1] - rabi_excited_population(omega, g, t)).abs())
    }));
    out
}

fn random_gas(n: usize, radius: f64, rng: &mut Rng) -> GasState {
    let mut pos: Vec<[f64; 2]> = Vec::with_capacity(n);
    while pos.len() < n {
        let p = [rng.random_range(radius..1.0 - radius), rng.random_range(radius..1.0 - radius)];
        if pos.iter().all(|q| ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt() > 2.0 * radius * 1.001) {
            pos.push(p);
        }
    }
    let vel = (0..n).map(|_| [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]).collect();
    GasState { pos, vel, time: 0.0 }
}

fn gas_suite(seed: u64, n: usize) -> Vec<PropertyResult> {
    let md = "gas-sim";
    let mut out = run_properties(md, &[("pair_collision_conservation", 1e-12), ("wall_reflection", 0.0)], seed, n, |rng, _| {
        let r = 0.02;
        let b = rng.random_range(-1.9..1.9) * r;
        let speed = rng.random_range(0.1..2.0);
        let state = GasState {
            pos: vec![[0.45, 0.5], [0.55, 0.5 + b]],
            // Head-on in x so |b| < 2r guarantees contact before any wall.
            vel: vec![[speed, 0.0], [-rng.random_range(0.1..2.0), 0.0]],
            time: 0.0,
        };
        let e0 = state.kinetic_energy(1.0);
        let p0 = state.momentum(1.0);
        let mut sim = Simulator::new(state.clone(), r, 1.0, true)?;
        sim.run_collisions(1)?;
        let st = sim.stats();
        let s = sim.state();
        let cons = if st.pair_collisions == 1 {
            let p1 = s.momentum(1.0);
            ((s.kinetic_energy(1.0) - e0).abs() / e0).max((p1[0] - p0[0]).abs().max((p1[1] - p0[1]).abs()))
        } else {
            f64::INFINITY
        };
        // A lone disk hitting a wall flips exactly one component.
        let v = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let lone = GasState { pos: vec![[0.5, 0.5]], vel: vec![v], time: 0.0 };
        let mut w = Simulator::new(lone, r, 1.0, false)?;
        w.run_collisions(1)?;
        let v1 = w.state().vel[0];
        let flipped_x = v1[0] == -v[0] && v1[1] == v[1];
        let flipped_y = v1[1] == -v[1] && v1[0] == v[0];
        Ok(vec![cons, if flipped_x ^ flipped_y { 0.0 } else { f64::INFINITY }])
    });
    out.push(run_property(md, "no_interpenetration", 1e-9, seed, n.min(50), |rng, _| {
        let r = 0.02;
        let state = random_gas(rng.random_range(10..=40usize), r, rng);
        let e0 = state.kinetic_energy(1.0);
        let mut sim = Simulator::new(state, r, 1.0, true)?;
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            sim.run_collisions(100)?;
            let s = sim.state();
            worst = worst.max((2.0 * r - s.min_pair_distance()) / r).max(s.max_wall_violation(r, 1.0) / r);
        }
        Ok(worst.max((sim.state().kinetic_energy(1.0) - e0).abs() / e0))
    }));
    out.push(run_property(md, "collision_time_root", 1e-9, seed, n, |rng, _| {
        let sigma = 0.04;
        let dr: [f64; 2] = [rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)];
        let dv: [f64; 2] = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        if (dr[0] * dr[0] + dr[1] * dr[1]).sqrt() <= sigma {
            return Ok(0.0);
        }
        Ok(match pair_collision_time(dr, dv, sigma) {
            Some(t) => {
                let x = [dr[0] + dv[0] * t, dr[1] + dv[1] * t];
                ((x[0] * x[0] + x[1] * x[1]).sqrt() - sigma).abs() / sigma
            }
            None => {
                // No contact: the closest approach stays outside σ or lies in the past.
                let vv = dv[0] * dv[0] + dv[1] * dv[1];
                let tmin = -(dr[0] * dv[0] + dr[1] * dv[1]) / vv;
                if tmin <= 0.0 {
                    0.0
                } else {
                    let x = [dr[0] + dv[0] * tmin, dr[1] + dv[1] * tmin];
                    (sigma - (x[0] * x[0] + x[1] * x[1]).sqrt()) / sigma
                }
            }
        })
    }));
    out.push(run_property(md, "sanov_mixing_in_bins", 1e-12, seed, n, |rng, _| {
        let k = rng.random_range(2..=12usize);
        let p = random_probs(k, rng);
        let q = random_probs(k, rng);
        let dp = rng.random_range(0.001..0.1);
        let g = sanov_mixing(&p, &q, dp);
        let star: Vec<f64> = p.iter().zip(&q).map(|(a, b)| (1.0 - g) * a + g * b).collect();
        let shift = star.iter().zip(&p).map(|(s, a)| (s - a).abs()).fold(0.0, f64::max) - 0.5 * dp;
        Ok(shift.max((star.iter().sum::<f64>() - 1.0).abs()))
    }));
    out.push(run_property(md, "boltzmann_temperature", 1e-6, seed, n, |rng, _| {
        // Finite-difference (d ln W / dE)⁻¹ against its closed form E/α.
        let n_side = rng.random_range(2..=500usize);
        let e_eq = n_side as f64 * 0.5;
        let e = e_eq * rng.random_range(0.5..1.5);
        let h = 1e-4 * e;
        let deriv = (ln_shell_volume_rel(e + h, n_side, e_eq) - ln_shell_volume_rel(e - h, n_side, e_eq)) / (2.0 * h);
        let alpha = n_side as f64 - 1.0;
        Ok(((1.0 / deriv) - e / alpha).abs() / (e / alpha))
    }));
    out.push(run_property(md, "deterministic_rerun", 0.0, seed, n.min(3), |rng, case| {
        let params = GasParams { n: 60, seed: rng.random_range(0..1000), ..GasParams::default() };
        let mut exp = GasExperiment::new(params, InitialCondition::from_index(1 + case as u32 % 4)?);
        exp.t_end = 3.0;
        exp.n_samples = 31;
        let a = run_gas_experiment(&exp)?.series.to_csv();
        let b = run_gas_experiment(&exp)?.series.to_csv();
        Ok(if a == b { 0.0 } else { 1.0 })
    }));
    out.push(run_property(md, "initial_conditions_valid", 0.0, seed, n.min(8), |rng, case| {
        let params = GasParams { n: 100, seed: rng.random_range(0..1000), ..GasParams::default() };
        let setup = generate_ic(&params, InitialCondition::from_index(1 + case as u32 % 4)?)?;
        Simulator::new(setup.state.clone(), params.radius, params.box_l, true)?;
        let e = setup.state.kinetic_energy(params.mass);
        Ok(if (e - params.total_energy()).abs() <= 1e-9 * e { 0.0 } else { 1.0 })
    }));
    out
}

/// Random rate matrix in detailed balance with a random q.
pub fn random_detailed_balance(n: usize, rng: &mut Rng) -> (Vec<Vec<f64>>, Vec<f64>) {
    let q: Vec<f64> = random_probs(n, rng).iter().map(|v| 0.5 / n as f64 + 0.5 * v).collect();
    let mut r = vec![vec![0.0; n]; n];
    for x in 0..n {
        for y in (x + 1)..n {
            if rng.random_bool(0.8) {
                let s = rng.random_range(0.05..2.0);
                // R_{xy} q_y = R_{yx} q_x = s·√(q_x q_y)
                let f = s * (q[x] * q[y]).sqrt();
                r[x][y] = f / q[y];
                r[y][x] = f / q[x];
            }
        }
    }
    // Keep the chain connected with a path.
    for x in 0..n.saturating_sub(1) {
        if r[x][x + 1] == 0.0 {
            let f = (q[x] * q[x + 1]).sqrt();
            r[x][x + 1] = f / q[x + 1];
            r[x + 1][x] = f / q[x];
        }
    }
    for x in 0..n {
        let out: f64 = (0..n).filter(|&y| y != x).map(|y| r[y][x]).sum();
        r[x][x] = -out;
    }
    (r, q)
}

pub const MASTER_EQUATION_NAMES: [(&str, f64); 3] =
    [("entropy_rate_nonnegative", 1e-10), ("rate_forms_agree", 1e-8), ("stationary_limit", 1e-8)];

/// Violations of the master-equation law on one random instance:
/// [dS/dt ≥ 0, derivative forms agree, p(∞) = q].
pub fn master_equation_instance(rng: &mut Rng) -> Result<Vec<f64>> {
    let n = rng.random_range(2..=8usize);
    let (r, q) = random_detailed_balance(n, rng);
    let p0: Vec<f64> = random_probs(n, rng).iter().map(|v| 0.999 * v + 0.001 / n as f64).collect();
    let grid: Vec<f64> = (0..60).map(|k| 0.05 * k as f64 * (1.0 + 0.1 * k as f64)).collect();
    let s = master_equation_entropy(&r, &q, &p0, &grid)?;
    let neg = s.dsdt_flux.iter().map(|v| -v).fold(f64::NEG_INFINITY, f64::max);
    let agree = s.dsdt_flux.iter().zip(&s.dsdt_pairs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let limit = s.p_inf.iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(vec![neg, agree, limit])
}

pub const EP_CLAUSIUS_NAMES: [(&str, f64); 2] = [("clausius_matches_relative", 1e-4), ("production_nonnegative", 1e-8)];

/// Weakly coupled system and bath started in a product state; returns the
/// largest |Clausius − relative| and the largest −Σ over the grid.
pub fn ep_clausius_instance(rng: &mut Rng, max_bath: usize) -> Result<Vec<f64>> {
    let ds = rng.random_range(2..=4usize);
    let db = rng.random_range(4..=max_bath);
    let h_s = random_hermitian(ds, rng);
    let h_b = random_hermitian(db, rng);
    let v = random_hermitian(ds * db, rng).scale(0.05);
    let rho_s0 = random_density(ds, rng.random_range(1..=ds), rng)?;
    let beta0 = rng.random_range(0.2..2.0);
    // The trapezoid error of ∫β dE_B scales with the step squared.
    let grid: Vec<f64> = (0..101).map(|k| 0.1 * k as f64).collect();
    let s = ep_clausius_check(&h_s, &h_b, &v, &rho_s0, beta0, &grid)?;
    let diff = s.clausius.iter().zip(&s.relative).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let neg = s.clausius.iter().chain(&s.relative).map(|v| -v).fold(f64::NEG_INFINITY, f64::max);
    Ok(vec![diff, neg])
}

fn equilibration_suite(seed: u64, n: usize) -> Vec<PropertyResult> {
    let md = "equilibration";
    let mut out = vec![run_property(md, "markov_tail", 0.0, seed, n, |rng, _| {
        let k = rng.random_range(50..=300usize);
        let ds: Vec<f64> = (0..k).map(|_| rng.random_range(0.0f64..1.0).powi(4)).collect();
        let delta = ds.iter().sum::<f64>() / k as f64;
        Ok(tail_table(&ds, delta).iter().map(|r| r.fraction - r.markov_bound).fold(f64::NEG_INFINITY, f64::max))
    })];
    out.push(run_property(md, "decomposition_identity", 1e-10, seed, n, |rng, _| {
        let m = rng.random_range(2..=8usize);
        let q = random_probs(m, rng);
        let probs: Vec<Vec<f64>> = (0..rng.random_range(2..=50usize)).map(|_| random_probs(m, rng)).collect();
        let (pbar, eq) = fluctuation_term(&probs)?;
        let mut total = 0.0;
        for p in &probs {
            total += fin(kl_divergence(p, &q)?, "D")? / probs.len() as f64;
        }
        Ok((total - eq - fin(kl_divergence(&pbar, &q)?, "D")?).abs())
    }));
    out.push(run_property(md, "g_monotone_concave", 1e-12, seed, n, |rng, _| {
        let e = rng.random_range(1e-4..10.0);
        let h = 1e-3 * e;
        let rising = g_eps(e) - g_eps(e + h);
        let concave = g_eps(e - h) + g_eps(e + h) - 2.0 * g_eps(e);
        Ok(rising.max(concave))
    }));
    out.extend(run_properties(
        md,
        &MASTER_EQUATION_NAMES,
        seed,
        n,
        |rng, _| master_equation_instance(rng),
    ));
    out.extend(run_properties(md, &EP_CLAUSIUS_NAMES, seed, n.min(20), |rng, _| ep_clausius_instance(rng, 8)));
    out.push(run_property(md, "continuity_bound", 1e-8, seed, n, |rng, case| {
        let d = rng.random_range(2..=6usize);
        let inst = random_prior(d, PRIOR_KINDS[case % 5], rng)?;
        let rho = inst.admissible_state(rng)?;
        let sigma = inst.admissible_state(rng)?;
        let m = random_measurement(d, rng)?;
        let c = continuity_check(&m, &inst.prior, &rho, &sigma)?;
        Ok(c.lhs - c.rhs)
    }));
    out.push(run_property(md, "trace_distance_range", 1e-12, seed, n, |rng, _| {
        let d = rng.random_range(2..=6usize);
        let a = random_density(d, rng.random_range(1..=d), rng)?;
        let b = random_density(d, rng.random_range(1..=d), rng)?;
        let t = trace_distance(&a, &b)?;
        Ok((-t).max(t - 1.0))
    }));
    out
}

pub fn run_checks(scope: Scope, seed: u64, cases: usize) -> CheckReport {
    let scopes: Vec<Scope> = if scope == Scope::All { Scope::MODULES.to_vec() } else { vec![scope] };
    let mut properties = Vec::new();
    for s in scopes {
        properties.extend(match s {
            Scope::EntropyCore => {
                let mut v = entropy_core(seed, cases);
                v.extend(inequality_suite(seed, cases));
                v
            }
            Scope::Maxent => maxent_suite(seed, cases),
            Scope::Measurements => measurements_suite(seed, cases),
            Scope::Recovery => recovery_suite(seed, cases),
            Scope::RmtModel => rmt_suite(seed, cases),
            Scope::GasSim => gas_suite(seed, cases),
            Scope::Equilibration => equilibration_suite(seed, cases),
            Scope::All => unreachable!(),
        });
    }
    CheckReport {
        scope: scope.name().to_string(),
        seed,
        cases,
        passed: properties.iter().all(|p| p.passed()),
        properties,
    }
}
