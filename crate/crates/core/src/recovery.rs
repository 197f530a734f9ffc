//! Coarse-grained states inferred from measurement outcomes: Petz,
//! rotated Petz, the β-smeared state, the MaxEnt-compatible state, and the
//! recovery gap.

use crate::entropy::{
    cross_entropy, measured_relative_entropy, observational_entropy, von_neumann_entropy, DensityState,
    ExtReal, Povm, ProbVector, KERNEL_REL_TOL, SUPPORT_WEIGHT_TOL,
};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Spectrum, C64};
use crate::maxent::solve_dual;

/// Half-width of the smearing integral. The weight outside carries mass
/// 1 − tanh(πS/2) ≈ 5e-11.
pub const SMEAR_CUTOFF: f64 = 7.75;
/// β has poles at s = ±i, so on [−S, S] Gauss–Legendre converges like
/// (1 + 1/S)^{−2n}; 200 nodes put that below 1e−20.
pub const MIN_SMEAR_NODES: usize = 200;

/// β(s) = (π/2) / (1 + cosh πs).
pub fn smearing_weight(s: f64) -> f64 {
    let x = std::f64::consts::PI * s.abs();
    // (π/2)/(1+cosh x) = π e^{−x} / (1 + e^{−x})²
    let e = (-x).exp();
    std::f64::consts::PI * e / ((1.0 + e) * (1.0 + e))
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pn1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Prior data shared by the Petz-type maps: the eigendecomposition of τ and
/// G = Σ_x (p_x / Tr τM_x) U†M_xU in the eigenbasis of τ.
struct PetzKernel {
    spec: Spectrum,
    sqrt_t: Vec<f64>,
    log_t: Vec<f64>,
    g: CMatrix,
}

fn petz_kernel(m: &Povm, tau: &DensityState, p: &ProbVector) -> Result<PetzKernel> {
    if m.dim() != tau.dim() || p.len() != m.len() {
        return Err(Error::DimensionMismatch("POVM, prior and distribution disagree".into()));
    }
    let spec = tau.spectrum().clone();
    let d = spec.dim();
    let tmax = spec.values.iter().cloned().fold(0.0, f64::max);
    let cut = KERNEL_REL_TOL * tmax;
    let q = m.raw_probs(tau);
    let qmax = q.iter().cloned().fold(0.0, f64::max);
    let ud = spec.vectors.adjoint();
    let mut g = CMatrix::zeros(d, d);
    for (x, e) in m.effects().iter().enumerate() {
        let px = p[x];
        if px <= 0.0 {
            continue;
        }
        if q[x] <= KERNEL_REL_TOL * qmax {
            if px > SUPPORT_WEIGHT_TOL {
                return Err(Error::Support(format!("outcome {x} has p = {px} but Tr(τM) = 0")));
            }
            continue;
        }
        let rotated = ud.matmul(&e.to_dense()).matmul(&spec.vectors);
        g = &g + &rotated.scale(px / q[x]);
    }
    let sqrt_t = spec.values.iter().map(|&t| if t > cut { t.sqrt() } else { 0.0 }).collect();
    let log_t = spec.values.iter().map(|&t| if t > cut { t.ln() } else { 0.0 }).collect();
    Ok(PetzKernel { spec, sqrt_t, log_t, g })
}

impl PetzKernel {
    /// Entry (j,k) of the rotated Petz state in the eigenbasis of τ, without
    /// the phase factor.
    fn base(&self, j: usize, k: usize) -> C64 {
        self.g.get(j, k) * (self.sqrt_t[j] * self.sqrt_t[k])
    }

    fn phase_arg(&self, j: usize, k: usize) -> f64 {
        0.5 * (self.log_t[j] - self.log_t[k])
    }

    fn to_state(&self, inner: CMatrix) -> Result<DensityState> {
        let u = &self.spec.vectors;
        DensityState::from_unnormalized(u.matmul(&inner).matmul(&u.adjoint()).hermitian_part())
    }

    /// Largest phase frequency ½|ln t_j − ln t_k| over the support of τ.
    fn max_frequency(&self) -> f64 {
        let logs: Vec<f64> = self.log_t.iter().zip(&self.sqrt_t).filter(|(_, s)| **s > 0.0).map(|(l, _)| *l).collect();
        let lo = logs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if logs.is_empty() {
            0.0
        } else {
            0.5 * (hi - lo)
        }
    }
}

/// ρ_cg = Σ_x p_x √τ M_x √τ / Tr(τM_x).
pub fn petz_coarse_state(m: &Povm, tau: &DensityState, p: &ProbVector) -> Result<DensityState> {
    rotated_petz(m, tau, p, 0.0)
}

/// Σ_x p_x τ^{(1+is)/2} M_x τ^{(1−is)/2} / Tr(τM_x).
pub fn rotated_petz(m: &Povm, tau: &DensityState, p: &ProbVector, s: f64) -> Result<DensityState> {
    let k = petz_kernel(m, tau, p)?;
    let d = k.spec.dim();
    let inner = CMatrix::from_fn(d, d, |i, j| {
        let ph = s * k.phase_arg(i, j);
        k.base(i, j) * C64::new(ph.cos(), ph.sin())
    });
    k.to_state(inner)
}

/// Number of Gauss–Legendre nodes used for a prior whose phases oscillate
/// at most at `omega` per unit s.
fn smear_nodes(omega: f64) -> usize {
    let needed = (1.5 * omega * SMEAR_CUTOFF).ceil() as usize + 32;
    needed.clamp(MIN_SMEAR_NODES, 8192)
}

/// ∫ β(s) ρ_cg^s ds by Gauss–Legendre quadrature on [−S, S].
pub fn smeared_coarse_state(m: &Povm, tau: &DensityState, p: &ProbVector) -> Result<DensityState> {
    let k = petz_kernel(m, tau, p)?;
    let d = k.spec.dim();
    let n = smear_nodes(k.max_frequency());
    let (xs, ws) = gauss_legendre(n);
    let nodes: Vec<(f64, f64)> = xs
        .iter()
        .zip(&ws)
        .map(|(x, w)| (x * SMEAR_CUTOFF, w * SMEAR_CUTOFF * smearing_weight(x * SMEAR_CUTOFF)))
        .collect();
    let mass: f64 = nodes.iter().map(|(_, w)| w).sum();
    let inner = CMatrix::from_fn(d, d, |i, j| {
        let a = k.phase_arg(i, j);
        // Fixed node order keeps the sum reproducible.
        let mut acc = C64::new(0.0, 0.0);
        for (s, w) in &nodes {
            let ph = s * a;
            acc += C64::new(ph.cos(), ph.sin()) * *w;
        }
        k.base(i, j) * (acc / mass)
    });
    k.to_state(inner)
}

/// τ̃_M = e^{−Σλ_x M_x}/Z reproducing p, with Σλ = 0.
pub fn maxent_compatible_state(m: &Povm, p: &ProbVector) -> Result<DensityState> {
    if p.len() != m.len() {
        return Err(Error::DimensionMismatch("distribution and POVM disagree".into()));
    }
    let ops: Vec<CMatrix> = (0..m.len()).map(|x| m.effect_matrix(x)).collect();
    let sol = solve_dual(&ops, p.as_slice(), 500, 1e-9, true)?;
    DensityState::from_spectrum(Spectrum { values: sol.weights, vectors: sol.spectrum.vectors })
}

/// The inferred states for one (M, τ, p).
#[derive(Clone, Debug)]
pub struct CoarseStateBundle {
    pub petz: DensityState,
    pub rotated: Vec<(f64, DensityState)>,
    pub smeared: DensityState,
    pub maxent_compatible: Option<DensityState>,
}

pub fn coarse_states(m: &Povm, tau: &DensityState, p: &ProbVector, s_values: &[f64]) -> Result<CoarseStateBundle> {
    let petz = petz_coarse_state(m, tau, p)?;
    let rotated = s_values
        .iter()
        .map(|&s| rotated_petz(m, tau, p, s).map(|r| (s, r)))
        .collect::<Result<Vec<_>>>()?;
    let smeared = smeared_coarse_state(m, tau, p)?;
    let maxent_compatible = maxent_compatible_state(m, p).ok();
    Ok(CoarseStateBundle { petz, rotated, smeared, maxent_compatible })
}

/// Both sides of the recovery bound.
#[derive(Clone, Copy, Debug)]
pub struct RecoveryGap {
    /// S_M^τ(ρ) − S(ρ)
    pub lhs: f64,
    /// max over probes of D_{M′}(ρ‖ρ̃_cg); a lower bound on the supremum.
    pub rhs: ExtReal,
}

impl RecoveryGap {
    pub fn holds(&self, tol: f64) -> bool {
        self.rhs.le_tol(ExtReal::Finite(self.lhs), tol)
    }
}

/// Projective probes that tend to separate ρ from ρ̃: the eigenbases of
/// ρ − ρ̃, ρ and ρ̃.
pub fn default_probes(rho: &DensityState, rho_tilde: &DensityState) -> Result<Vec<Povm>> {
    let diff = rho.matrix() - rho_tilde.matrix();
    let mut out = Vec::new();
    for mat in [diff, rho.matrix().clone(), rho_tilde.matrix().clone()] {
        out.push(Povm::from_unitary(&mat.eigh()?.vectors)?);
    }
    Ok(out)
}

/// Recovery bound S_M^τ(ρ) − S(ρ) ≥ sup_{M′} D_{M′}(ρ‖ρ̃_cg), evaluated over
/// the given probes plus the default ones.
pub fn recovery_gap(m: &Povm, tau: &DensityState, rho: &DensityState, probes: &[Povm]) -> Result<RecoveryGap> {
    let s_tau = von_neumann_entropy(tau);
    match cross_entropy(rho, tau)? {
        ExtReal::Finite(c) if c <= s_tau + 1e-8 => {}
        _ => return Err(Error::Constraint("S(ρ;τ) exceeds S(τ)".into())),
    }
    let report = observational_entropy(m, tau, rho)?;
    let s_oe = report
        .s_oe
        .finite()
        .ok_or_else(|| Error::Numerical("observational entropy is infinite under the constraint".into()))?;
    let lhs = s_oe - von_neumann_entropy(rho);
    let tilde = smeared_coarse_state(m, tau, &report.p)?;
    let mut rhs = ExtReal::Finite(0.0);
    let mut all: Vec<Povm> = probes.to_vec();
    all.extend(default_probes(rho, &tilde)?);
    for probe in &all {
        let d = measured_relative_entropy(probe, rho, &tilde)?;
        if !d.le_tol(rhs, 0.0) {
            rhs = d;
        }
    }
    Ok(RecoveryGap { lhs, rhs })
}
