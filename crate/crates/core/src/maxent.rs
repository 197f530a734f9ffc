//! Maximum-entropy priors from linear constraints, the cross-entropy form of
//! the constraint, and time-averaged (dephased) states.

use crate::entropy::{cross_entropy, shannon, von_neumann_entropy, DensityState, ExtReal};
use crate::error::{Error, Result};
use crate::linalg::{sym_psd_solve, CMatrix, Spectrum, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintKind {
    CanonicalEnergy,
    CanonicalCharges,
    MicrocanonicalProjector,
    TrivialUniform,
    TimeAveraged,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintMode {
    Equality,
    Inequality,
}

/// Linear constraint a prior was built from.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub operators: Vec<CMatrix>,
    pub targets: Vec<f64>,
    pub mode: ConstraintMode,
}

/// A MaxEnt state with its cached entropy and multipliers.
#[derive(Clone, Debug)]
pub struct Prior {
    pub tau: DensityState,
    pub s_tau: f64,
    /// β for canonical priors, λ_k for charges, empty otherwise.
    pub multipliers: Vec<f64>,
    /// Tr(τ Q_k) − c_k for each constraint operator.
    pub residuals: Vec<f64>,
    pub provenance: Constraint,
}

impl Prior {
    pub fn with_mode(mut self, mode: ConstraintMode) -> Self {
        self.provenance.mode = mode;
        self
    }

    pub fn dim(&self) -> usize {
        self.tau.dim()
    }
}

/// τ = I/d, the prior for the trivial constraint Tr ρ ≤ 1.
pub fn uniform_prior(d: usize) -> Prior {
    Prior {
        tau: DensityState::maximally_mixed(d),
        s_tau: (d as f64).ln(),
        multipliers: vec![],
        residuals: vec![],
        provenance: Constraint {
            kind: ConstraintKind::TrivialUniform,
            operators: vec![],
            targets: vec![],
            mode: ConstraintMode::Inequality,
        },
    }
}

/// Canonical weights e^{−βE_k}/Z, shifted for stability.
fn gibbs_weights(energies: &[f64], beta: f64) -> Vec<f64> {
    let shift = if beta >= 0.0 {
        energies.iter().cloned().fold(f64::INFINITY, f64::min)
    } else {
        energies.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    };
    let mut w: Vec<f64> = energies.iter().map(|&e| (-beta * (e - shift)).exp()).collect();
    let z: f64 = w.iter().sum();
    for v in w.iter_mut() {
        *v /= z;
    }
    w
}

fn mean_energy(energies: &[f64], beta: f64) -> (f64, f64) {
    let w = gibbs_weights(energies, beta);
    let m: f64 = w.iter().zip(energies).map(|(a, b)| a * b).sum();
    let var: f64 = w.iter().zip(energies).map(|(a, b)| a * (b - m) * (b - m)).sum();
    (m, var)
}

/// Inverse temperature with ⟨H⟩_β = e_target for the spectrum `energies`.
pub fn solve_beta(energies: &[f64], e_target: f64) -> Result<f64> {
    let emin = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let emax = energies.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let range = emax - emin;
    if !(range > 0.0) || !(e_target > emin && e_target < emax) {
        return Err(Error::InvalidParam(format!(
            "target energy {e_target} outside the open spectral interval ({emin}, {emax})"
        )));
    }
    let tol = 1e-13 * range;
    let f = |b: f64| mean_energy(energies, b).0 - e_target;
    if f(0.0).abs() <= tol {
        return Ok(0.0);
    }
    let scale = 1.0 / range;
    let (mut lo, mut hi) = (-scale, scale);
    let mut doublings = 0;
    while f(hi) > 0.0 {
        hi *= 2.0;
        doublings += 1;
        if doublings > 2000 || !hi.is_finite() {
            return Err(Error::NoConvergence("cannot bracket β from above".into()));
        }
    }
    while f(lo) < 0.0 {
        lo *= 2.0;
        doublings += 1;
        if doublings > 2000 || !lo.is_finite() {
            return Err(Error::NoConvergence("cannot bracket β from below".into()));
        }
    }
    // E(β) is decreasing: f(lo) ≥ 0 ≥ f(hi).
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= 1e-6 * scale.max(hi.abs().max(lo.abs())) {
            break;
        }
    }
    let mut beta = 0.5 * (lo + hi);
    for _ in 0..50 {
        let (m, var) = mean_energy(energies, beta);
        let r = m - e_target;
        if r.abs() <= tol || var <= 0.0 {
            break;
        }
        let next = beta + r / var;
        beta = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        if f(beta) > 0.0 {
            lo = beta;
        } else {
            hi = beta;
        }
    }
    Ok(beta)
}

/// τ = e^{−βH}/Z with β solved so that Tr τH = e_target. β may be negative.
pub fn canonical_prior(h: &CMatrix, e_target: f64) -> Result<Prior> {
    let spec = h.eigh()?;
    canonical_prior_from_spectrum(h, &spec, e_target)
}

/// As [`canonical_prior`] with a precomputed eigendecomposition of H.
pub fn canonical_prior_from_spectrum(h: &CMatrix, spec: &Spectrum, e_target: f64) -> Result<Prior> {
    let beta = solve_beta(&spec.values, e_target)?;
    let w = gibbs_weights(&spec.values, beta);
    let mean: f64 = w.iter().zip(&spec.values).map(|(a, b)| a * b).sum();
    let s_tau = shannon(&w);
    let tau = DensityState::from_spectrum(Spectrum { values: w, vectors: spec.vectors.clone() })?;
    Ok(Prior {
        tau,
        s_tau,
        multipliers: vec![beta],
        residuals: vec![mean - e_target],
        provenance: Constraint {
            kind: ConstraintKind::CanonicalEnergy,
            operators: vec![h.clone()],
            targets: vec![e_target],
            mode: ConstraintMode::Inequality,
        },
    })
}

/// Result of the exponential-family dual solve.
pub(crate) struct DualSolution {
    pub lambda: Vec<f64>,
    pub spectrum: Spectrum,
    pub weights: Vec<f64>,
    pub residuals: Vec<f64>,
}

/// Minimize ln Tr e^{−Σλ_k Q_k} + Σλ_k c_k by damped Newton with the exact
/// (Kubo–Mori) Hessian. With `gauge`, Σλ is kept at zero.
pub(crate) fn solve_dual(
    ops: &[CMatrix],
    targets: &[f64],
    max_iter: usize,
    tol: f64,
    gauge: bool,
) -> Result<DualSolution> {
    let k = ops.len();
    let d = ops[0].nrows();
    let eval = |lambda: &[f64]| -> Result<(Spectrum, Vec<f64>, Vec<CMatrix>, Vec<f64>)> {
        let mut kmat = CMatrix::zeros(d, d);
        for (l, q) in lambda.iter().zip(ops) {
            kmat = &kmat + &q.scale(*l);
        }
        let spec = kmat.eigh()?;
        let kmin = spec.values.iter().cloned().fold(f64::INFINITY, f64::min);
        let mut w: Vec<f64> = spec.values.iter().map(|&x| (-(x - kmin)).exp()).collect();
        let z: f64 = w.iter().sum();
        for v in w.iter_mut() {
            *v /= z;
        }
        let vd = spec.vectors.adjoint();
        let rotated: Vec<CMatrix> = ops.iter().map(|q| vd.matmul(q).matmul(&spec.vectors)).collect();
        let means: Vec<f64> = rotated.iter().map(|qt| (0..d).map(|i| w[i] * qt.get(i, i).re).sum()).collect();
        Ok((spec, w, rotated, means))
    };
    let resid_norm = |means: &[f64]| -> f64 {
        means.iter().zip(targets).map(|(m, c)| (m - c).abs()).fold(0.0, f64::max)
    };
    let mut lambda = vec![0.0; k];
    let (mut spec, mut w, mut rotated, mut means) = eval(&lambda)?;
    let mut res = resid_norm(&means);
    for _ in 0..max_iter {
        if res <= tol {
            let residuals = means.iter().zip(targets).map(|(m, c)| m - c).collect();
            return Ok(DualSolution { lambda, spectrum: spec, weights: w, residuals });
        }
        let kappa = &spec.values;
        let kmin = kappa.iter().cloned().fold(f64::INFINITY, f64::min);
        let z: f64 = kappa.iter().map(|&x| (-(x - kmin)).exp()).sum();
        // Divided differences of x ↦ e^{−x} on the spectrum of K.
        let mut dd = vec![vec![0.0; d]; d];
        for i in 0..d {
            for j in 0..d {
                let (lo, hi) = if kappa[i] <= kappa[j] { (kappa[i], kappa[j]) } else { (kappa[j], kappa[i]) };
                let h = hi - lo;
                let e = (-(lo - kmin)).exp();
                dd[i][j] = if h == 0.0 { -e } else { e * (-h).exp_m1() / h };
            }
        }
        let mut hess = vec![vec![0.0; k]; k];
        for a in 0..k {
            for b in a..k {
                let mut acc = 0.0;
                for i in 0..d {
                    for j in 0..d {
                        let prod: C64 = rotated[a].get(j, i) * rotated[b].get(i, j);
                        acc += prod.re * dd[i][j];
                    }
                }
                let v = -acc / z - means[a] * means[b];
                hess[a][b] = v;
                hess[b][a] = v;
            }
        }
        let grad: Vec<f64> = targets.iter().zip(&means).map(|(c, m)| c - m).collect();
        let neg_grad: Vec<f64> = grad.iter().map(|g| -g).collect();
        let step = sym_psd_solve(&hess, &neg_grad, 1e-13)?;
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let mut trial: Vec<f64> = lambda.iter().zip(&step).map(|(l, s)| l + t * s).collect();
            if gauge {
                let mean = trial.iter().sum::<f64>() / k as f64;
                for v in trial.iter_mut() {
                    *v -= mean;
                }
            }
            let (s2, w2, r2, m2) = eval(&trial)?;
            let res2 = resid_norm(&m2);
            if res2 < res || res2 <= tol {
                lambda = trial;
                spec = s2;
                w = w2;
                rotated = r2;
                means = m2;
                res = res2;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if res <= tol {
        let residuals = means.iter().zip(targets).map(|(m, c)| m - c).collect();
        return Ok(DualSolution { lambda, spectrum: spec, weights: w, residuals });
    }
    Err(Error::NoConvergence(format!("max residual {res:e} after {max_iter} iterations")))
}

/// τ = e^{−Σλ_k Q_k}/Z with Tr τQ_k = c_k, by damped Newton from λ = 0.
pub fn charges_prior(qs: &[CMatrix], cs: &[f64]) -> Result<Prior> {
    if qs.is_empty() || qs.len() != cs.len() {
        return Err(Error::InvalidParam("need one target per charge".into()));
    }
    let d = qs[0].nrows();
    let mut scale: f64 = 0.0;
    for q in qs {
        if q.nrows() != d || !q.is_square() {
            return Err(Error::DimensionMismatch("charges must share one square dimension".into()));
        }
        if q.hermiticity_defect() > 1e-10 * d as f64 {
            return Err(Error::InvalidParam("charge is not Hermitian".into()));
        }
        let ev = q.eigvalsh()?;
        scale = scale.max(ev[d - 1] - ev[0]).max(ev[d - 1].abs()).max(ev[0].abs());
    }
    let tol = 1e-11 * scale.max(1.0);
    let sol = solve_dual(qs, cs, 200, tol, false)?;
    let s_tau = shannon(&sol.weights);
    let tau = DensityState::from_spectrum(Spectrum { values: sol.weights, vectors: sol.spectrum.vectors })?;
    Ok(Prior {
        tau,
        s_tau,
        multipliers: sol.lambda,
        residuals: sol.residuals,
        provenance: Constraint {
            kind: ConstraintKind::CanonicalCharges,
            operators: qs.to_vec(),
            targets: cs.to_vec(),
            mode: ConstraintMode::Inequality,
        },
    })
}

/// τ = Π / Tr Π.
pub fn microcanonical_prior(pi: &CMatrix) -> Result<Prior> {
    if !pi.is_square() {
        return Err(Error::InvalidParam("projector must be square".into()));
    }
    let sq = pi.matmul(pi);
    if sq.max_abs_diff(pi) > 1e-9 || pi.hermiticity_defect() > 1e-9 {
        return Err(Error::InvalidParam("operator is not a Hermitian projector".into()));
    }
    let rank = pi.trace().re.round();
    if rank < 1.0 {
        return Err(Error::InvalidParam("zero projector".into()));
    }
    let tau = DensityState::from_unnormalized(pi.clone())?;
    Ok(Prior {
        tau,
        s_tau: rank.ln(),
        multipliers: vec![],
        residuals: vec![],
        provenance: Constraint {
            kind: ConstraintKind::MicrocanonicalProjector,
            operators: vec![pi.clone()],
            targets: vec![rank],
            mode: ConstraintMode::Inequality,
        },
    })
}

/// Outcome of testing S(ρ;τ) against S(τ).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstraintCheck {
    pub satisfied: bool,
    /// S(τ) − S(ρ;τ); −∞ when the cross entropy is infinite.
    pub slack: ExtReal,
}

/// Cross-entropy form of the constraint: S(ρ;τ) ≤ S(τ) (or = in equality mode).
pub fn check_constraint(rho: &DensityState, prior: &Prior) -> Result<ConstraintCheck> {
    let cross = cross_entropy(rho, &prior.tau)?;
    let slack = match cross {
        ExtReal::Finite(c) => ExtReal::Finite(prior.s_tau - c),
        _ => ExtReal::NegInf,
    };
    let satisfied = match (slack, prior.provenance.mode) {
        (ExtReal::Finite(s), ConstraintMode::Inequality) => s >= -1e-8,
        (ExtReal::Finite(s), ConstraintMode::Equality) => s.abs() <= 1e-8,
        _ => false,
    };
    Ok(ConstraintCheck { satisfied, slack })
}

/// Index ranges of eigenvalues (ascending) that lie within `rel_tol` of the
/// spectral range of their neighbour.
pub fn degenerate_blocks(values: &[f64], rel_tol: f64) -> Vec<std::ops::Range<usize>> {
    let n = values.len();
    if n == 0 {
        return vec![];
    }
    let range = values[n - 1] - values[0];
    let tol = rel_tol * range;
    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 1..n {
        if values[i] - values[i - 1] > tol {
            blocks.push(start..i);
            start = i;
        }
    }
    blocks.push(start..n);
    blocks
}

/// ρ̄: ρ block-projected onto the eigenspaces of H, with eigenvalues closer
/// than 1e-9 of the spectral range treated as degenerate.
pub fn time_averaged_state(h: &CMatrix, rho: &DensityState) -> Result<DensityState> {
    if h.nrows() != rho.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", h.nrows(), rho.dim())));
    }
    let spec = h.eigh()?;
    time_averaged_from_spectrum(&spec, rho)
}

pub fn time_averaged_from_spectrum(spec: &Spectrum, rho: &DensityState) -> Result<DensityState> {
    let d = spec.dim();
    let blocks = degenerate_blocks(&spec.values, 1e-9);
    let mut block_of = vec![0usize; d];
    for (b, r) in blocks.iter().enumerate() {
        for i in r.clone() {
            block_of[i] = b;
        }
    }
    let v = &spec.vectors;
    let rt = v.adjoint().matmul(rho.matrix()).matmul(v);
    let masked = CMatrix::from_fn(d, d, |i, j| if block_of[i] == block_of[j] { rt.get(i, j) } else { C64::new(0.0, 0.0) });
    DensityState::from_unnormalized(v.matmul(&masked).matmul(&v.adjoint()))
}

/// Prior τ = ρ̄(ρ₀) for the time-averaged row; equality mode.
pub fn time_averaged_prior(h: &CMatrix, rho0: &DensityState) -> Result<Prior> {
    let tau = time_averaged_state(h, rho0)?;
    let s_tau = von_neumann_entropy(&tau);
    Ok(Prior {
        tau,
        s_tau,
        multipliers: vec![],
        residuals: vec![],
        provenance: Constraint {
            kind: ConstraintKind::TimeAveraged,
            operators: vec![h.clone()],
            targets: vec![],
            mode: ConstraintMode::Equality,
        },
    })
}
