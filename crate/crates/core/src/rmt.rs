//! Heat exchange between two random-matrix systems: H = H₀⊗1 + 1⊗H₀ + λV
//! with a banded V, exact diagonalization, and energy-window entropies of
//! an initially hot/cold pure product state.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{kl_divergence, observational_entropy_from_probs, shannon, DensityState, Effect, Povm, ProbVector};
use crate::equilibration::{bound_from_purity, delta_statistics, eth_spread_from_spectrum, EquilibrationReport, EthSpread};
use crate::error::{Error, Result};
use crate::linalg::{normalize, CMatrix, Spectrum, C64};
use crate::maxent::{canonical_prior_from_spectrum, degenerate_blocks, Prior};
use crate::measurements::{coarse_energy_povm, one_sided, tensor, EnergyWindowSpec};
use crate::rng::stream;
use crate::sampling::{complex_gaussian, haar_state};
use crate::series::{EntropyRecord, EntropySeries};

pub const JOINT_LABEL: &str = "joint_energy";
pub const ONE_SIDED_LABEL: &str = "one_sided_energy";

/// Total dimension above which a run needs `allow_large`.
pub const LARGE_DIM: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub struct RmtParams {
    pub d_a: usize,
    pub d_b: usize,
    /// Δ_E, the width of the interaction band.
    pub delta_band: f64,
    /// δ_V, the in-band RMS of V.
    pub delta_v: f64,
    /// Overrides λ = Δ_E² / (20 d_A δ_V) when set.
    pub coupling: Option<f64>,
    pub beta_a: f64,
    pub beta_b: f64,
    /// Width of the energy windows of M_{E_A} and M_{E_B}.
    pub delta_e_meas: f64,
    pub seed: u64,
    /// Last time of the log-spaced grid, in units of T.
    pub t_max: f64,
    pub n_times: usize,
    /// Span of the uniform grid used for time averages, in units of T.
    pub avg_span: f64,
    pub n_avg: usize,
    pub allow_large: bool,
}

impl Default for RmtParams {
    fn default() -> Self {
        Self {
            d_a: 40,
            d_b: 40,
            delta_band: 5.2,
            delta_v: 0.5,
            coupling: None,
            beta_a: 0.25,
            beta_b: 7.0,
            delta_e_meas: 0.5,
            seed: 1,
            t_max: 200.0,
            n_times: 120,
            avg_span: 50.0,
            n_avg: 240,
            allow_large: false,
        }
    }
}

impl RmtParams {
    pub fn lambda(&self) -> f64 {
        self.coupling.unwrap_or_else(|| coupling_constant(self.delta_band, self.d_a, self.delta_v))
    }

    /// T = 1/(50λ).
    pub fn time_scale(&self) -> f64 {
        1.0 / (50.0 * self.lambda())
    }

    pub fn validate(&self) -> Result<()> {
        if self.d_a < 2 || self.d_b < 2 {
            return Err(Error::InvalidParam("local dimensions must be at least 2".into()));
        }
        for (name, v) in [("delta_band", self.delta_band), ("delta_v", self.delta_v), ("delta_e_meas", self.delta_e_meas)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParam(format!("{name} must be positive")));
            }
        }
        if !(self.lambda() > 0.0) || !self.lambda().is_finite() {
            return Err(Error::InvalidParam("coupling must be positive".into()));
        }
        if self.n_times < 2 || !(self.t_max > 0.0) || !(self.avg_span > 0.0) {
            return Err(Error::InvalidParam("time grids need a positive span and at least two points".into()));
        }
        if self.d_a * self.d_b > LARGE_DIM && !self.allow_large {
            return Err(Error::InvalidParam(format!(
                "total dimension {} needs allow_large; diagonalization is O(d³) in time and O(d²) in memory",
                self.d_a * self.d_b
            )));
        }
        Ok(())
    }

    /// Points uniform in ln(1 + t/T) from 0 to t_max·T.
    pub fn log_grid(&self) -> Vec<f64> {
        let t = self.time_scale();
        let umax = self.t_max.ln_1p();
        (0..self.n_times).map(|k| t * (umax * k as f64 / (self.n_times - 1) as f64).exp_m1()).collect()
    }

    /// n_avg points uniform on [0, avg_span·T].
    pub fn uniform_grid(&self) -> Vec<f64> {
        let span = self.avg_span * self.time_scale();
        let n = self.n_avg.max(2);
        (0..n).map(|k| span * k as f64 / (n - 1) as f64).collect()
    }
}

/// λ = Δ_E² / (20 d_A δ_V).
pub fn coupling_constant(delta_band: f64, d_a: usize, delta_v: f64) -> f64 {
    delta_band * delta_band / (20.0 * d_a as f64 * delta_v)
}

/// Diagonal of H₀: i.i.d. standard normals, sorted ascending.
pub fn build_local_hamiltonian<R: rand::Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    let mut e: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
    e.sort_by(|a, b| a.total_cmp(b));
    e
}

/// Hermitian V in the product eigenbasis with energies `e`: complex Gaussian
/// entries (real on the diagonal) of variance C·exp(−((E_i − E_j)/Δ_E)²),
/// where C makes the mean variance over pairs with |E_i − E_j| ≤ Δ_E equal
/// to δ_V².
pub fn build_banded_interaction<R: rand::Rng + ?Sized>(e: &[f64], delta_band: f64, delta_v: f64, rng: &mut R) -> CMatrix {
    let n = e.len();
    let profile = |i: usize, j: usize| {
        let x = (e[i] - e[j]) / delta_band;
        (-x * x).exp()
    };
    let (mut sum, mut count) = (0.0, 0usize);
    for i in 0..n {
        for j in 0..n {
            if (e[i] - e[j]).abs() <= delta_band {
                sum += profile(i, j);
                count += 1;
            }
        }
    }
    let c = delta_v * delta_v * count as f64 / sum;
    let mut v = CMatrix::zeros(n, n);
    for i in 0..n {
        let d: f64 = StandardNormal.sample(rng);
        v.set(i, i, C64::new(d * c.sqrt(), 0.0));
        for j in (i + 1)..n {
            let z = complex_gaussian(rng) * (c * profile(i, j)).sqrt();
            v.set(i, j, z);
            v.set(j, i, z.conj());
        }
    }
    v
}

/// The built model: local spectra, the total Hamiltonian and its
/// eigendecomposition, the energy-window POVMs and the canonical prior.
pub struct RmtSystem {
    pub params: RmtParams,
    pub h0_a: Vec<f64>,
    pub h0_b: Vec<f64>,
    pub h_int: CMatrix,
    pub h_total: CMatrix,
    pub spectrum: Spectrum,
    pub joint: Povm,
    pub one_sided: Povm,
}

impl RmtSystem {
    pub fn build(params: &RmtParams) -> Result<Self> {
        params.validate()?;
        let mut rng = stream(params.seed, "hamiltonian");
        let h0_a = build_local_hamiltonian(params.d_a, &mut rng);
        let h0_b = if params.d_a == params.d_b { h0_a.clone() } else { build_local_hamiltonian(params.d_b, &mut rng) };
        let e0 = product_energies(&h0_a, &h0_b);
        let mut irng = stream(params.seed, "interaction");
        let v = build_banded_interaction(&e0, params.delta_band, params.delta_v, &mut irng);
        let lam = params.lambda();
        let d = e0.len();
        let h_total = CMatrix::from_fn(d, d, |i, j| {
            let base = if i == j { e0[i] } else { 0.0 };
            C64::new(base, 0.0) + v.get(i, j) * lam
        });
        let h_int = v.scale(lam);
        let spectrum = h_total.eigh()?;
        let m_a = coarse_energy_povm(&EnergyWindowSpec::new(CMatrix::from_diag(&h0_a), params.delta_e_meas))?;
        let m_b = coarse_energy_povm(&EnergyWindowSpec::new(CMatrix::from_diag(&h0_b), params.delta_e_meas))?;
        let joint = tensor(&m_a, &m_b)?;
        let one = one_sided(&m_a, params.d_b)?;
        Ok(Self { params: params.clone(), h0_a, h0_b, h_int, h_total, spectrum, joint, one_sided: one })
    }

    pub fn dim(&self) -> usize {
        self.h0_a.len() * self.h0_b.len()
    }

    /// ⟨H_A⟩ and ⟨H_B⟩ from product-basis populations.
    pub fn local_energies(&self, pops: &[f64]) -> (f64, f64) {
        let db = self.h0_b.len();
        let (mut ea, mut eb) = (0.0, 0.0);
        for (i, p) in pops.iter().enumerate() {
            ea += p * self.h0_a[i / db];
            eb += p * self.h0_b[i % db];
        }
        (ea, eb)
    }

    /// |ψ⟩ ∝ (e^{−β_A H₀/2} ⊗ e^{−β_B H₀/2}) |φ⟩ with Haar-random |φ⟩.
    pub fn initial_state(&self) -> Vec<C64> {
        let mut rng = stream(self.params.seed, "haar");
        let mut phi = haar_state(self.dim(), &mut rng);
        let db = self.h0_b.len();
        // Shift by the minima so the weights cannot overflow.
        let amin = self.h0_a.iter().cloned().fold(f64::INFINITY, f64::min);
        let bmin = self.h0_b.iter().cloned().fold(f64::INFINITY, f64::min);
        for (i, z) in phi.iter_mut().enumerate() {
            let w = (-0.5 * self.params.beta_a * (self.h0_a[i / db] - amin)).exp()
                * (-0.5 * self.params.beta_b * (self.h0_b[i % db] - bmin)).exp();
            *z *= w;
        }
        normalize(&mut phi);
        phi
    }

    /// Coefficients c = U†ψ in the eigenbasis of H.
    pub fn eigen_coefficients(&self, psi: &[C64]) -> Vec<C64> {
        self.spectrum.vectors.adjoint_matvec(psi)
    }

    /// ψ(t) = U e^{−iEt} c.
    pub fn evolve_coefficients(&self, c: &[C64], t: f64) -> Vec<C64> {
        let phased: Vec<C64> = c
            .iter()
            .zip(&self.spectrum.values)
            .map(|(ck, e)| {
                let ph = -e * t;
                ck * C64::new(ph.cos(), ph.sin())
            })
            .collect();
        self.spectrum.vectors.matvec(&phased)
    }

    /// e^{−iHt} ρ e^{iHt} for a general state.
    pub fn evolve(&self, rho0: &DensityState, t: f64) -> Result<DensityState> {
        if let Some(psi) = rho0.pure_vector() {
            let c = self.eigen_coefficients(psi);
            return DensityState::from_pure(self.evolve_coefficients(&c, t));
        }
        evolve_spectral(&self.spectrum, rho0, t)
    }

    /// Canonical prior of H at energy `e`.
    pub fn prior(&self, e: f64) -> Result<Prior> {
        canonical_prior_from_spectrum(&self.h_total, &self.spectrum, e)
    }
}

/// e^{−iHt} ρ e^{iHt} from an eigendecomposition of H.
pub fn evolve_spectral(spec: &Spectrum, rho0: &DensityState, t: f64) -> Result<DensityState> {
    let d = spec.dim();
    let u = &spec.vectors;
    let ud = u.adjoint();
    let r = ud.matmul(rho0.matrix()).matmul(u);
    let rt = CMatrix::from_fn(d, d, |j, k| {
        let ph = -(spec.values[j] - spec.values[k]) * t;
        r.get(j, k) * C64::new(ph.cos(), ph.sin())
    });
    DensityState::from_unnormalized(u.matmul(&rt).matmul(&ud))
}

/// E_i = a_{i / d_b} + b_{i mod d_b}.
pub fn product_energies(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect()
}

fn diag_probs(m: &Povm, pops: &[f64]) -> Vec<f64> {
    m.effects()
        .iter()
        .map(|e| match e {
            Effect::Diagonal(w) => w.iter().zip(pops).map(|(a, b)| a * b).sum::<f64>().max(0.0),
            Effect::Dense(_) => unreachable!("energy-window POVMs of a diagonal H₀ are diagonal"),
        })
        .collect()
}

/// Per-label summary over the uniform grid.
#[derive(Clone, Debug, Serialize)]
pub struct RmtLabelSummary {
    pub report: EquilibrationReport,
    /// m, the number of outcomes.
    pub outcomes: usize,
    /// Time average of D(p(t)‖p(ρ̄)).
    pub d_to_rhobar: f64,
    /// Standard error of that average.
    pub d_to_rhobar_sem: f64,
    pub s_rhobar: f64,
    pub t0_oe: f64,
    pub early_traditional: f64,
    pub late_traditional: f64,
    pub late_oe: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RmtDiagnostics {
    pub time_scale: f64,
    pub lambda: f64,
    pub s_tau: f64,
    pub beta_tau: f64,
    pub energy: f64,
    pub max_energy_drift: f64,
    pub reconstruction_error: f64,
    pub purity_rhobar: f64,
    pub eth: Option<EthSpread>,
}

pub struct RmtRun {
    /// Log-spaced grid for plotting.
    pub series: EntropySeries,
    /// Uniform grid for time averages.
    pub averaged: EntropySeries,
    pub joint: RmtLabelSummary,
    pub one_sided: RmtLabelSummary,
    pub diagnostics: RmtDiagnostics,
}

struct Sample {
    records: Vec<EntropyRecord>,
    energy: f64,
}

fn sample_at(sys: &RmtSystem, c: &[C64], prior_probs: &[(String, &Povm, Vec<f64>)], s_tau: f64, t: f64) -> Result<Sample> {
    let psi = sys.evolve_coefficients(c, t);
    let pops: Vec<f64> = psi.iter().map(|z| z.norm_sqr()).collect();
    let (e_a, e_b) = sys.local_energies(&pops);
    let energy = sys.h_total.expectation(&psi);
    let mut records = Vec::with_capacity(prior_probs.len());
    for (label, m, q) in prior_probs {
        let p = diag_probs(m, &pops);
        let traces = m.traces();
        let rep = observational_entropy_from_probs(ProbVector::from_raw(p)?, q, s_tau, Some(&traces))?;
        records.push(EntropyRecord {
            t,
            label: label.clone(),
            s_oe: rep.s_oe,
            s_traditional: rep.s_traditional,
            s_tau,
            e_a,
            e_b,
            probs: Some(rep.p.into_vec()),
        });
    }
    Ok(Sample { records, energy })
}

fn sample_grid(
    sys: &RmtSystem,
    c: &[C64],
    labels: &[(String, &Povm, Vec<f64>)],
    s_tau: f64,
    grid: &[f64],
) -> Result<(EntropySeries, Vec<f64>)> {
    let samples: Vec<Sample> = grid.par_iter().map(|&t| sample_at(sys, c, labels, s_tau, t)).collect::<Result<_>>()?;
    let mut series = EntropySeries::new();
    let mut energies = Vec::with_capacity(samples.len());
    for s in samples {
        energies.push(s.energy);
        for r in s.records {
            series.push(r);
        }
    }
    for (label, _, q) in labels {
        series.prior_probs.insert(label.clone(), q.clone());
    }
    Ok((series, energies))
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn summarize(
    averaged: &EntropySeries,
    label: &str,
    m: &Povm,
    s_tau: f64,
    p_rhobar: &[f64],
    purity: f64,
    s_rhobar: f64,
) -> Result<RmtLabelSummary> {
    let mut report = delta_statistics(averaged, label, s_tau)?;
    report.bound_rhobar = Some(bound_from_purity(m.len(), purity));
    report.bound_eigenstate = Some(s_rhobar);
    let recs = averaged.for_label(label);
    let ds: Vec<f64> = recs
        .iter()
        .map(|r| kl_divergence(r.probs.as_ref().unwrap(), p_rhobar).map(|d| d.to_f64()))
        .collect::<Result<_>>()?;
    let n = ds.len() as f64;
    let mu = mean(&ds);
    let var = ds.iter().map(|d| (d - mu) * (d - mu)).sum::<f64>() / (n - 1.0).max(1.0);
    let oe: Vec<f64> = recs.iter().map(|r| r.s_oe.to_f64()).collect();
    let trad: Vec<f64> = recs.iter().map(|r| r.s_traditional.to_f64()).collect();
    let q = recs.len() / 4;
    Ok(RmtLabelSummary {
        outcomes: m.len(),
        d_to_rhobar: mu,
        d_to_rhobar_sem: (var / n).sqrt(),
        s_rhobar,
        t0_oe: oe[0],
        early_traditional: mean(&trad[..q.max(1)]),
        late_traditional: mean(&trad[recs.len() - q.max(1)..]),
        late_oe: mean(&oe[recs.len() - q.max(1)..]),
        report,
    })
}

/// Build the model, evolve the initial state, and evaluate both energy
/// coarse-grainings on the log grid and on the uniform averaging grid.
pub fn run_rmt_experiment(params: &RmtParams) -> Result<RmtRun> {
    let sys = RmtSystem::build(params)?;
    let psi0 = sys.initial_state();
    let c = sys.eigen_coefficients(&psi0);
    let energy = sys.h_total.expectation(&psi0);
    let prior = sys.prior(energy)?;
    let tau_diag = prior.tau.diag();
    let labels: Vec<(String, &Povm, Vec<f64>)> = [(JOINT_LABEL, &sys.joint), (ONE_SIDED_LABEL, &sys.one_sided)]
        .into_iter()
        .map(|(l, m)| (l.to_string(), m, diag_probs(m, &tau_diag)))
        .collect();

    let (series, e_log) = sample_grid(&sys, &c, &labels, prior.s_tau, &params.log_grid())?;
    let (averaged, e_avg) = sample_grid(&sys, &c, &labels, prior.s_tau, &params.uniform_grid())?;
    let max_energy_drift = e_log
        .iter()
        .chain(&e_avg)
        .map(|e| (e - energy).abs() / energy.abs().max(1.0))
        .fold(0.0, f64::max);

    // ρ̄ of a pure state: block weights ‖P_b ψ‖² over degenerate eigenspaces.
    let w: Vec<f64> = c.iter().map(|z| z.norm_sqr()).collect();
    let blocks = degenerate_blocks(&sys.spectrum.values, 1e-9);
    let nondegenerate = blocks.iter().all(|b| b.len() == 1);
    let block_w: Vec<f64> = blocks.iter().map(|b| w[b.clone()].iter().sum()).collect();
    let purity: f64 = block_w.iter().map(|x| x * x).sum();
    let s_rhobar = if nondegenerate { shannon(&w) } else { f64::NAN };
    let rhobar_pops = sys.spectrum.diag_of(&w);
    let mut summaries = Vec::new();
    for (label, m, _) in &labels {
        let p_bar = diag_probs(m, &rhobar_pops);
        summaries.push(summarize(&averaged, label, m, prior.s_tau, &p_bar, purity, s_rhobar)?);
    }
    let one = summaries.pop().unwrap();
    let joint = summaries.pop().unwrap();

    let width = (2.0 * sys.params.delta_e_meas).max(1e-3);
    let eth = eth_spread_from_spectrum(&sys.joint, &sys.spectrum, (energy - 0.5 * width, energy + 0.5 * width)).ok();
    let reconstruction_error = {
        let r = sys.spectrum.reconstruct();
        r.max_abs_diff(&sys.h_total) / sys.h_total.max_abs().max(1e-300)
    };
    Ok(RmtRun {
        series,
        averaged,
        joint,
        one_sided: one,
        diagnostics: RmtDiagnostics {
            time_scale: params.time_scale(),
            lambda: params.lambda(),
            s_tau: prior.s_tau,
            beta_tau: prior.multipliers[0],
            energy,
            max_energy_drift,
            reconstruction_error,
            purity_rhobar: purity,
            eth,
        },
    })
}

/// Two-level Rabi oscillation under H = ω/2 σ_z + g σ_x: population of |1⟩
/// at time t starting from |0⟩.
pub fn rabi_excited_population(omega: f64, g: f64, t: f64) -> f64 {
    let big = (0.25 * omega * omega + g * g).sqrt();
    let s = (big * t).sin();
    g * g / (big * big) * s * s
}
