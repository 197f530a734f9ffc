//! Second-law diagnostics: time-averaged divergence statistics and their
//! decomposition, the ρ̄ and eigenstate bounds, ETH spread, Boltzmann
//! temperatures, master-equation entropy production, the continuity bound,
//! the entropy-production/Clausius identity and the open-system bound.

use serde::Serialize;

use crate::entropy::{
    kl_divergence, measure, observational_entropy, relative_entropy, shannon, trace_distance, von_neumann_entropy,
    DensityState, Effect, ExtReal, Povm,
};
use crate::error::{Error, Result};
use crate::linalg::{sym_eigh, CMatrix, Spectrum, C64};
use crate::maxent::{check_constraint, solve_beta, Prior};
use crate::measurements::one_sided;
use crate::series::{last_quarter_mean, EntropySeries};

pub const MIN_SAMPLES: usize = 50;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct TailRow {
    pub delta: f64,
    pub fraction: f64,
    pub markov_bound: f64,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct EthSpread {
    pub max_divergence: f64,
    pub infinite_pairs: usize,
    pub states: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct EquilibrationReport {
    pub label: String,
    pub samples: usize,
    /// Time average of D_M(ρ(t)‖τ).
    pub delta: f64,
    /// Time average of D(p(t)‖p̄).
    pub eq_term: Option<f64>,
    /// D(p̄‖q).
    pub to_tau_term: Option<f64>,
    pub bound_rhobar: Option<f64>,
    pub bound_eigenstate: Option<f64>,
    pub eth_spread: Option<EthSpread>,
    pub tail_table: Vec<TailRow>,
}

/// Finite-sample average of D_M = S(τ) − S_M^τ over one label, its split
/// into fluctuation and offset terms (when outcome distributions were
/// recorded), and the Markov tail table.
pub fn delta_statistics(series: &EntropySeries, label: &str, s_tau: f64) -> Result<EquilibrationReport> {
    let recs = series.for_label(label);
    if recs.len() < MIN_SAMPLES {
        return Err(Error::InvalidParam(format!(
            "{} samples for `{label}`; at least {MIN_SAMPLES} are needed",
            recs.len()
        )));
    }
    let n = recs.len() as f64;
    let mut ds = Vec::with_capacity(recs.len());
    for r in &recs {
        match r.s_oe {
            ExtReal::Finite(s) => ds.push((s_tau - s).max(0.0)),
            _ => return Err(Error::Numerical(format!("infinite divergence at t = {}", r.t))),
        }
    }
    let delta = ds.iter().sum::<f64>() / n;
    let tail_table = tail_table(&ds, delta);

    let (mut eq_term, mut to_tau_term) = (None, None);
    if let Some(q) = series.prior_probs.get(label) {
        if recs.iter().all(|r| r.probs.as_ref().is_some_and(|p| p.len() == q.len())) {
            let mut pbar = vec![0.0; q.len()];
            for r in &recs {
                for (a, b) in pbar.iter_mut().zip(r.probs.as_ref().unwrap()) {
                    *a += b / n;
                }
            }
            let mut fluct = 0.0;
            for r in &recs {
                fluct += kl_divergence(r.probs.as_ref().unwrap(), &pbar)?.to_f64() / n;
            }
            eq_term = Some(fluct);
            to_tau_term = Some(kl_divergence(&pbar, q)?.to_f64());
        }
    }
    Ok(EquilibrationReport {
        label: label.to_string(),
        samples: recs.len(),
        delta,
        eq_term,
        to_tau_term,
        bound_rhobar: None,
        bound_eigenstate: None,
        eth_spread: None,
        tail_table,
    })
}

/// Fraction of samples with D ≥ δ next to the Markov bound Δ/δ, for
/// δ ∈ {2Δ, 5Δ, 10Δ}.
pub fn tail_table(ds: &[f64], delta: f64) -> Vec<TailRow> {
    let n = ds.len() as f64;
    [2.0, 5.0, 10.0]
        .iter()
        .map(|k| {
            let thr = k * delta;
            if thr > 0.0 {
                let frac = ds.iter().filter(|&&d| d >= thr).count() as f64 / n;
                TailRow { delta: thr, fraction: frac, markov_bound: delta / thr }
            } else {
                let frac = ds.iter().filter(|&&d| d > 0.0).count() as f64 / n;
                TailRow { delta: 0.0, fraction: frac, markov_bound: 0.0 }
            }
        })
        .collect()
}

/// g(ε) = −ε ln ε + (1+ε) ln(1+ε).
pub fn g_eps(eps: f64) -> f64 {
    if eps <= 0.0 {
        return 0.0;
    }
    -eps * eps.ln() + (1.0 + eps) * eps.ln_1p()
}

/// ε ln m + g(ε) with ε = m / (4√d₂).
pub fn bound_from_purity(m_outcomes: usize, purity: f64) -> f64 {
    let d2 = 1.0 / purity;
    let eps = m_outcomes as f64 / (4.0 * d2.sqrt());
    eps * (m_outcomes as f64).ln() + g_eps(eps)
}

/// Bound on the time-averaged D_M(ρ‖ρ̄) from the effective dimension of ρ̄.
pub fn bound_rhobar(m_outcomes: usize, rho_bar: &DensityState) -> f64 {
    bound_from_purity(m_outcomes, rho_bar.purity())
}

/// Largest D_M(ψ_E‖ψ_E′) over eigenstate pairs of H with energies in
/// [lo, hi]; infinite pairs are counted, not maximized.
pub fn eth_spread(m: &Povm, h: &CMatrix, window: (f64, f64)) -> Result<EthSpread> {
    let spec = h.eigh()?;
    eth_spread_from_spectrum(m, &spec, window)
}

pub fn eth_spread_from_spectrum(m: &Povm, spec: &Spectrum, window: (f64, f64)) -> Result<EthSpread> {
    let idx: Vec<usize> = (0..spec.dim()).filter(|&k| spec.values[k] >= window.0 && spec.values[k] <= window.1).collect();
    if idx.len() < 2 {
        return Err(Error::InvalidParam(format!("{} eigenstates in the window; need at least 2", idx.len())));
    }
    let dists: Vec<Vec<f64>> = idx
        .iter()
        .map(|&k| {
            let v = spec.vector(k);
            m.effects()
                .iter()
                .map(|e| match e {
                    Effect::Diagonal(d) => d.iter().zip(&v).map(|(a, c)| a * c.norm_sqr()).sum(),
                    Effect::Dense(mat) => mat.expectation(&v),
                })
                .map(|p: f64| p.max(0.0))
                .collect()
        })
        .collect();
    let mut max_divergence: f64 = 0.0;
    let mut infinite_pairs = 0;
    for a in 0..dists.len() {
        for b in 0..dists.len() {
            if a == b {
                continue;
            }
            match kl_divergence(&dists[a], &dists[b])? {
                ExtReal::Finite(v) => max_divergence = max_divergence.max(v),
                _ => infinite_pairs += 1,
            }
        }
    }
    Ok(EthSpread { max_divergence, infinite_pairs, states: idx.len() })
}

/// Inputs for the Boltzmann-temperature analysis of a gas run.
#[derive(Clone, Debug)]
pub struct TemperatureParams {
    pub n_a: usize,
    pub n_b: usize,
    pub dim: usize,
    pub beta_inv: f64,
    pub joint_label: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TemperatureReport {
    pub t: Vec<f64>,
    pub t_a: Vec<f64>,
    pub t_b: Vec<f64>,
    /// Last-quarter average of |T_A − T_B| / T̄.
    pub late_relative_gap: f64,
    /// Last-quarter average of |T_A − β⁻¹| / β⁻¹.
    pub late_deviation_a: f64,
    /// S_M^τ(end) − S_M^τ(0) for the joint label.
    pub delta_s: f64,
    /// ∫dE_A/T_A + ∫dE_B/T_B by trapezoid on the sample grid.
    pub clausius: f64,
    /// The same integral on every second sample.
    pub clausius_halved: f64,
}

/// T = 2E/(N d) per subsystem, the Clausius integral, and late-time gaps.
pub fn temperature_equilibration(series: &EntropySeries, params: &TemperatureParams) -> Result<TemperatureReport> {
    let recs = series.for_label(&params.joint_label);
    if recs.len() < 2 {
        return Err(Error::InvalidParam(format!("label `{}` has fewer than two samples", params.joint_label)));
    }
    let d = params.dim as f64;
    let t: Vec<f64> = recs.iter().map(|r| r.t).collect();
    let t_a: Vec<f64> = recs.iter().map(|r| 2.0 * r.e_a / (params.n_a as f64 * d)).collect();
    let t_b: Vec<f64> = recs.iter().map(|r| 2.0 * r.e_b / (params.n_b as f64 * d)).collect();
    let n = (params.n_a + params.n_b) as f64;
    let gaps: Vec<f64> = t_a
        .iter()
        .zip(&t_b)
        .map(|(a, b)| {
            let mean = (params.n_a as f64 * a + params.n_b as f64 * b) / n;
            (a - b).abs() / mean
        })
        .collect();
    let dev: Vec<f64> = t_a.iter().map(|a| (a - params.beta_inv).abs() / params.beta_inv).collect();
    let first = recs[0].s_oe.finite().ok_or_else(|| Error::Numerical("infinite initial entropy".into()))?;
    let last = recs[recs.len() - 1].s_oe.finite().ok_or_else(|| Error::Numerical("infinite final entropy".into()))?;
    let integrate = |step: usize| -> f64 {
        let idx: Vec<usize> = {
            let mut v: Vec<usize> = (0..recs.len()).step_by(step).collect();
            if *v.last().unwrap() != recs.len() - 1 {
                v.push(recs.len() - 1);
            }
            v
        };
        let mut acc = 0.0;
        for w in idx.windows(2) {
            let (i, j) = (w[0], w[1]);
            acc += 0.5 * (1.0 / t_a[i] + 1.0 / t_a[j]) * (recs[j].e_a - recs[i].e_a);
            acc += 0.5 * (1.0 / t_b[i] + 1.0 / t_b[j]) * (recs[j].e_b - recs[i].e_b);
        }
        acc
    };
    Ok(TemperatureReport {
        late_relative_gap: last_quarter_mean(&gaps),
        late_deviation_a: last_quarter_mean(&dev),
        delta_s: last - first,
        clausius: integrate(1),
        clausius_halved: integrate(2),
        t,
        t_a,
        t_b,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MasterEquationSeries {
    pub t: Vec<f64>,
    pub p: Vec<Vec<f64>>,
    /// D(p(t)‖q)
    pub divergence: Vec<f64>,
    /// Σ_x ṗ_x (ln q_x − ln p_x)
    pub dsdt_flux: Vec<f64>,
    /// Σ_{x≠x′} R_{xx′} p_{x′} ln(R_{xx′} p_{x′} / (R_{x′x} p_x))
    pub dsdt_pairs: Vec<f64>,
    /// lim_{t→∞} p(t) from the zero mode.
    pub p_inf: Vec<f64>,
}

/// Evolve ṗ = R p and evaluate the entropy production both ways. R must be
/// a rate matrix (columns sum to zero) in detailed balance with q.
pub fn master_equation_entropy(r: &[Vec<f64>], q: &[f64], p0: &[f64], t_grid: &[f64]) -> Result<MasterEquationSeries> {
    let n = q.len();
    if r.len() != n || r.iter().any(|row| row.len() != n) || p0.len() != n {
        return Err(Error::DimensionMismatch("rate matrix, q and p0 disagree".into()));
    }
    if q.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidParam("q must be strictly positive".into()));
    }
    let scale = r.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    for x in 0..n {
        let col: f64 = (0..n).map(|y| r[y][x]).sum();
        if col.abs() > 1e-10 * scale {
            return Err(Error::InvalidParam(format!("column {x} of the rate matrix sums to {col}")));
        }
        for y in 0..n {
            if x != y && r[y][x] < 0.0 {
                return Err(Error::InvalidParam("negative off-diagonal rate".into()));
            }
            if (r[x][y] * q[y] - r[y][x] * q[x]).abs() > 1e-10 * scale {
                return Err(Error::InvalidParam(format!("detailed balance fails for ({x}, {y})")));
            }
        }
    }
    // S = Q^{-1/2} R Q^{1/2} is symmetric under detailed balance.
    let sq: Vec<f64> = q.iter().map(|v| v.sqrt()).collect();
    let s: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| r[i][j] * sq[j] / sq[i]).collect()).collect();
    let (lam, v) = sym_eigh(&s)?;
    let lmax = lam.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let y0: Vec<f64> = (0..n).map(|i| p0[i] / sq[i]).collect();
    let coeff: Vec<f64> = (0..n).map(|k| (0..n).map(|i| v[i][k] * y0[i]).sum()).collect();
    let evolve = |t: Option<f64>| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let mut acc = 0.0;
                for k in 0..n {
                    let f = match t {
                        Some(t) => (lam[k] * t).exp(),
                        None => {
                            if lam[k].abs() <= 1e-12 * lmax {
                                1.0
                            } else {
                                0.0
                            }
                        }
                    };
                    acc += v[i][k] * coeff[k] * f;
                }
                acc * sq[i]
            })
            .collect()
    };
    let mut out = MasterEquationSeries {
        t: t_grid.to_vec(),
        p: vec![],
        divergence: vec![],
        dsdt_flux: vec![],
        dsdt_pairs: vec![],
        p_inf: evolve(None),
    };
    for &t in t_grid {
        let p = evolve(Some(t));
        let pdot: Vec<f64> = (0..n).map(|x| (0..n).map(|y| r[x][y] * p[y]).sum()).collect();
        let flux: f64 = (0..n).map(|x| pdot[x] * (q[x].ln() - p[x].ln())).sum();
        let mut pairs = 0.0;
        for x in 0..n {
            for y in 0..n {
                if x != y && r[x][y] > 0.0 {
                    let fwd = r[x][y] * p[y];
                    let bwd = r[y][x] * p[x];
                    // 0 ln 0 = 0; a flow with no reverse flow is infinite.
                    if fwd > 0.0 {
                        pairs += if bwd > 0.0 { fwd * (fwd / bwd).ln() } else { f64::INFINITY };
                    }
                }
            }
        }
        out.divergence.push(kl_divergence(&p, q)?.to_f64());
        out.dsdt_flux.push(flux);
        out.dsdt_pairs.push(pairs);
        out.p.push(p);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ContinuityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub trace_distance: f64,
    pub outcomes: usize,
    pub max_log_volume: f64,
}

fn binary_entropy(s: f64) -> f64 {
    shannon(&[s, 1.0 - s].map(|v: f64| v.clamp(0.0, 1.0)))
}

/// |S_M^τ(ρ) − S_M^τ(σ)| against h(s) + s(ln A + B).
pub fn continuity_check(m: &Povm, prior: &Prior, rho: &DensityState, sigma: &DensityState) -> Result<ContinuityCheck> {
    for st in [rho, sigma] {
        if !check_constraint(st, prior)?.satisfied {
            return Err(Error::Constraint("state violates the prior constraint".into()));
        }
    }
    let a = observational_entropy(m, &prior.tau, rho)?;
    let b = observational_entropy(m, &prior.tau, sigma)?;
    let (sa, sb) = match (a.s_oe, b.s_oe) {
        (ExtReal::Finite(x), ExtReal::Finite(y)) => (x, y),
        _ => return Err(Error::Numerical("infinite observational entropy under the constraint".into())),
    };
    let s = trace_distance(rho, sigma)?.min(1.0);
    let positive: Vec<f64> = a.volumes.iter().cloned().filter(|v| *v > 0.0).collect();
    let big_a = positive.len();
    let big_b = positive.iter().map(|v| v.ln().abs()).fold(0.0, f64::max);
    let rhs = binary_entropy(s) + s * ((big_a as f64).ln() + big_b);
    Ok(ContinuityCheck { lhs: (sa - sb).abs(), rhs, trace_distance: s, outcomes: big_a, max_log_volume: big_b })
}

#[derive(Clone, Debug, Serialize)]
pub struct EpClausiusSeries {
    pub t: Vec<f64>,
    /// ΔS(ρ_S) + ∫β dE_B
    pub clausius: Vec<f64>,
    /// D(ρ(t) ‖ ρ_S(t) ⊗ τ_B(β(t)))
    pub relative: Vec<f64>,
    pub beta: Vec<f64>,
    /// Final Clausius value recomputed on every second grid point.
    pub clausius_halved_final: f64,
}

fn gibbs_state(spec: &Spectrum, beta: f64) -> Result<DensityState> {
    let emin = spec.values.iter().cloned().fold(f64::INFINITY, f64::min);
    let emax = spec.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let shift = if beta >= 0.0 { emin } else { emax };
    let mut w: Vec<f64> = spec.values.iter().map(|e| (-beta * (e - shift)).exp()).collect();
    let z: f64 = w.iter().sum();
    for v in w.iter_mut() {
        *v /= z;
    }
    DensityState::from_spectrum(Spectrum { values: w, vectors: spec.vectors.clone() })
}

/// ln of the Gibbs state e^{−βH}/Z.
fn gibbs_log(spec: &Spectrum, beta: f64) -> CMatrix {
    let emin = spec.values.iter().cloned().fold(f64::INFINITY, f64::min);
    let emax = spec.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let shift = if beta >= 0.0 { emin } else { emax };
    let ln_z = spec.values.iter().map(|e| (-beta * (e - shift)).exp()).sum::<f64>().ln();
    spec.reconstruct_with(|e| -beta * (e - shift) - ln_z)
}

/// Evolve ρ_S(0) ⊗ τ_B(β₀) under H_S + H_B + V and compare the Clausius
/// form of the entropy production with its relative-entropy form.
pub fn ep_clausius_check(
    h_s: &CMatrix,
    h_b: &CMatrix,
    v: &CMatrix,
    rho_s0: &DensityState,
    beta0: f64,
    t_grid: &[f64],
) -> Result<EpClausiusSeries> {
    let (ds, db) = (h_s.nrows(), h_b.nrows());
    if v.nrows() != ds * db || rho_s0.dim() != ds || t_grid.is_empty() {
        return Err(Error::DimensionMismatch("system, bath and coupling dimensions disagree".into()));
    }
    let spec_b = h_b.eigh()?;
    let tau_b0 = gibbs_state(&spec_b, beta0)?;
    let h = &(&CMatrix::kron(h_s, &CMatrix::identity(db)) + &CMatrix::kron(&CMatrix::identity(ds), h_b)) + v;
    let spec = h.eigh()?;
    let rho0 = CMatrix::kron(rho_s0.matrix(), tau_b0.matrix());
    let u = &spec.vectors;
    let ud = u.adjoint();
    let rho0_eig = ud.matmul(&rho0).matmul(u);
    let s_s0 = von_neumann_entropy(rho_s0);
    let d = ds * db;

    let mut out = EpClausiusSeries { t: vec![], clausius: vec![], relative: vec![], beta: vec![], clausius_halved_final: 0.0 };
    let mut e_b = Vec::with_capacity(t_grid.len());
    let mut ds_s = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let rt = CMatrix::from_fn(d, d, |j, k| {
            let ph = -(spec.values[j] - spec.values[k]) * t;
            rho0_eig.get(j, k) * C64::new(ph.cos(), ph.sin())
        });
        let rho_t = DensityState::from_unnormalized(u.matmul(&rt).matmul(&ud))?;
        let rho_s = DensityState::from_unnormalized(rho_t.matrix().partial_trace_b(ds, db))?;
        let rho_b = rho_t.matrix().partial_trace_a(ds, db);
        let eb = rho_b.trace_product_re(h_b);
        let beta = if (t == 0.0) || (eb - tau_b0.expectation(h_b)).abs() == 0.0 {
            beta0
        } else {
            solve_beta(&spec_b.values, eb).map_err(|e| Error::Numerical(format!("bath temperature: {e}")))?
        };
        // D(ρ‖ρ_S ⊗ τ_B) = −S(ρ) + S(ρ_S) − Tr ρ_B ln τ_B, with ln τ_B taken
        // from the spectrum so that tiny Gibbs weights cannot underflow.
        let rel = von_neumann_entropy(&rho_s) - von_neumann_entropy(&rho_t) - rho_b.trace_product_re(&gibbs_log(&spec_b, beta));
        out.t.push(t);
        out.relative.push(rel);
        out.beta.push(beta);
        e_b.push(eb);
        ds_s.push(von_neumann_entropy(&rho_s) - s_s0);
    }
    let mut integral = 0.0;
    for i in 0..t_grid.len() {
        if i > 0 {
            integral += 0.5 * (out.beta[i] + out.beta[i - 1]) * (e_b[i] - e_b[i - 1]);
        }
        out.clausius.push(ds_s[i] + integral);
    }
    let mut coarse = 0.0;
    let mut prev = 0;
    let last = t_grid.len() - 1;
    let mut i = 2;
    while prev < last {
        let j = i.min(last);
        coarse += 0.5 * (out.beta[j] + out.beta[prev]) * (e_b[j] - e_b[prev]);
        prev = j;
        i += 2;
    }
    out.clausius_halved_final = ds_s[last] + coarse;
    Ok(out)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct OpenSystemCheck {
    pub lhs: f64,
    pub rhs: ExtReal,
}

impl OpenSystemCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.rhs.le_tol(ExtReal::Finite(self.lhs), tol)
    }
}

/// S^{τ_SE}_{M_S⊗1}(ρ_SE) against S(τ_SE) − D(ρ_S‖τ_S).
pub fn open_system_bound_check(
    m_s: &Povm,
    tau_se: &DensityState,
    rho_se: &DensityState,
    d_s: usize,
    d_e: usize,
) -> Result<OpenSystemCheck> {
    if m_s.dim() != d_s || tau_se.dim() != d_s * d_e || rho_se.dim() != d_s * d_e {
        return Err(Error::DimensionMismatch("system/environment dimensions disagree".into()));
    }
    let m = one_sided(m_s, d_e)?;
    let lhs = observational_entropy(&m, tau_se, rho_se)?
        .s_oe
        .finite()
        .ok_or_else(|| Error::Numerical("infinite observational entropy".into()))?;
    let tau_s = DensityState::from_unnormalized(tau_se.matrix().partial_trace_b(d_s, d_e))?;
    let rho_s = DensityState::from_unnormalized(rho_se.matrix().partial_trace_b(d_s, d_e))?;
    let rhs = relative_entropy(&rho_s, &tau_s)?.subtract_from(von_neumann_entropy(tau_se));
    Ok(OpenSystemCheck { lhs, rhs })
}

/// p̄ and the average of D(p(t)‖p̄) for recorded distributions.
pub fn fluctuation_term(probs: &[Vec<f64>]) -> Result<(Vec<f64>, f64)> {
    let n = probs.len() as f64;
    let m = probs.first().map_or(0, |p| p.len());
    let mut pbar = vec![0.0; m];
    for p in probs {
        for (a, b) in pbar.iter_mut().zip(p) {
            *a += b / n;
        }
    }
    let mut acc = 0.0;
    for p in probs {
        acc += kl_divergence(p, &pbar)?.to_f64() / n;
    }
    Ok((pbar, acc))
}

/// Outcome distribution of a time-averaged state (used in tests and the
/// experiment summary).
pub fn measured_rhobar(m: &Povm, rho_bar: &DensityState) -> Result<Vec<f64>> {
    Ok(measure(m, rho_bar)?.into_vec())
}
