//! Coarse-grainings: energy-window POVMs, tensor and one-sided products,
//! stochastic post-processing, disjoint combination, and sequential
//! projective (Lüders) measurements.

use crate::entropy::{kl_divergence, measure, measured_relative_entropy, DensityState, Effect, ExtReal, Label, Povm};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Energy windows [origin + kΔE, origin + (k+1)ΔE) over the spectrum of H.
#[derive(Clone, Debug)]
pub struct EnergyWindowSpec {
    pub delta_e: f64,
    pub origin: f64,
    pub hamiltonian: CMatrix,
}

impl EnergyWindowSpec {
    pub fn new(hamiltonian: CMatrix, delta_e: f64) -> Self {
        Self { delta_e, origin: 0.0, hamiltonian }
    }
}

/// Index of the half-open window containing `e`.
pub fn window_index(e: f64, delta_e: f64, origin: f64) -> i64 {
    ((e - origin) / delta_e).floor() as i64
}

/// Group spectrum indices by window; returns (window index, member indices)
/// in ascending window order, empty windows omitted.
pub fn bin_spectrum(values: &[f64], delta_e: f64, origin: f64) -> Vec<(i64, Vec<usize>)> {
    let mut bins: std::collections::BTreeMap<i64, Vec<usize>> = std::collections::BTreeMap::new();
    for (i, &e) in values.iter().enumerate() {
        bins.entry(window_index(e, delta_e, origin)).or_default().push(i);
    }
    bins.into_iter().collect()
}

/// One projector per nonempty energy window, labelled by the window center.
pub fn coarse_energy_povm(spec: &EnergyWindowSpec) -> Result<Povm> {
    if !(spec.delta_e > 0.0) || !spec.delta_e.is_finite() {
        return Err(Error::InvalidParam(format!("window width {} must be positive", spec.delta_e)));
    }
    let h = &spec.hamiltonian;
    let d = h.nrows();
    let center = |k: i64| spec.origin + (k as f64 + 0.5) * spec.delta_e;
    if h.is_diagonal(0.0) {
        let diag = h.diag_real();
        let bins = bin_spectrum(&diag, spec.delta_e, spec.origin);
        let mut effects = Vec::with_capacity(bins.len());
        let mut labels = Vec::with_capacity(bins.len());
        for (k, members) in bins {
            let mut v = vec![0.0; d];
            for i in members {
                v[i] = 1.0;
            }
            effects.push(Effect::Diagonal(v));
            labels.push(Label::Value(center(k)));
        }
        return Povm::from_effects(effects, labels);
    }
    let eig = h.eigh()?;
    let bins = bin_spectrum(&eig.values, spec.delta_e, spec.origin);
    let mut effects = Vec::with_capacity(bins.len());
    let mut labels = Vec::with_capacity(bins.len());
    for (k, members) in bins {
        let mut p = CMatrix::zeros(d, d);
        for i in members {
            p = &p + &CMatrix::outer(&eig.vector(i));
        }
        effects.push(Effect::Dense(p));
        labels.push(Label::Value(center(k)));
    }
    Povm::from_effects(effects, labels)
}

/// All Kronecker products M_x ⊗ N_y, labelled by pairs.
pub fn tensor(m_a: &Povm, m_b: &Povm) -> Result<Povm> {
    let mut effects = Vec::with_capacity(m_a.len() * m_b.len());
    let mut labels = Vec::with_capacity(m_a.len() * m_b.len());
    for (ea, la) in m_a.effects().iter().zip(m_a.labels()) {
        for (eb, lb) in m_b.effects().iter().zip(m_b.labels()) {
            effects.push(Effect::kron(ea, eb));
            labels.push(Label::pair(la.clone(), lb.clone()));
        }
    }
    Povm::from_effects(effects, labels)
}

/// M_x ⊗ I_B, keeping the labels of M.
pub fn one_sided(m_a: &Povm, dim_b: usize) -> Result<Povm> {
    let id = Effect::Diagonal(vec![1.0; dim_b]);
    let effects = m_a.effects().iter().map(|e| Effect::kron(e, &id)).collect();
    Povm::from_effects(effects, m_a.labels().to_vec())
}

/// Column-stochastic matrix Λ_{y|x}, stored by rows y.
#[derive(Clone, Debug)]
pub struct StochasticMap {
    rows: Vec<Vec<f64>>,
}

impl StochasticMap {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.is_empty() || ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::InvalidParam("stochastic map must be a nonempty rectangle".into()));
        }
        if rows.iter().flatten().any(|v| !(*v >= 0.0)) {
            return Err(Error::InvalidParam("stochastic map has a negative entry".into()));
        }
        for x in 0..ncols {
            let s: f64 = rows.iter().map(|r| r[x]).sum();
            if (s - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParam(format!("column {x} sums to {s}")));
            }
        }
        Ok(Self { rows })
    }

    pub fn identity(n: usize) -> Self {
        Self { rows: (0..n).map(|y| (0..n).map(|x| if x == y { 1.0 } else { 0.0 }).collect()).collect() }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows[0].len()
    }

    pub fn get(&self, y: usize, x: usize) -> f64 {
        self.rows[y][x]
    }

    /// Λ p
    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|r| r.iter().zip(p).map(|(a, b)| a * b).sum()).collect()
    }
}

fn combine(effects: &[(f64, &Effect)], dim: usize) -> Effect {
    if effects.iter().all(|(_, e)| e.is_diagonal()) {
        let mut v = vec![0.0; dim];
        for (w, e) in effects {
            if let Effect::Diagonal(d) = e {
                for (a, b) in v.iter_mut().zip(d) {
                    *a += w * b;
                }
            }
        }
        Effect::Diagonal(v)
    } else {
        let mut m = CMatrix::zeros(dim, dim);
        for (w, e) in effects {
            if *w != 0.0 {
                m = &m + &e.to_dense().scale(*w);
            }
        }
        Effect::Dense(m)
    }
}

/// (ΛM)_y = Σ_x Λ_{y|x} M_x.
pub fn postprocess(lam: &StochasticMap, m: &Povm) -> Result<Povm> {
    if lam.ncols() != m.len() {
        return Err(Error::DimensionMismatch(format!(
            "map has {} columns but POVM has {} outcomes",
            lam.ncols(),
            m.len()
        )));
    }
    let effects = (0..lam.nrows())
        .map(|y| {
            let terms: Vec<(f64, &Effect)> = m.effects().iter().enumerate().map(|(x, e)| (lam.get(y, x), e)).collect();
            combine(&terms, m.dim())
        })
        .collect();
    Povm::from_effects(effects, (0..lam.nrows()).map(Label::Index).collect())
}

/// λM ⊕ (1−λ)M′ with the two outcome sets kept apart.
pub fn disjoint_combine(lambda: f64, m: &Povm, m2: &Povm) -> Result<Povm> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParam(format!("weight {lambda} outside [0, 1]")));
    }
    if m.dim() != m2.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", m.dim(), m2.dim())));
    }
    let mut effects = Vec::with_capacity(m.len() + m2.len());
    let mut labels = Vec::with_capacity(m.len() + m2.len());
    for (e, l) in m.effects().iter().zip(m.labels()) {
        effects.push(e.scale(lambda));
        labels.push(Label::pair(Label::Index(0), l.clone()));
    }
    for (e, l) in m2.effects().iter().zip(m2.labels()) {
        effects.push(e.scale(1.0 - lambda));
        labels.push(Label::pair(Label::Index(1), l.clone()));
    }
    Povm::from_effects(effects, labels)
}

/// Σ_k w_k M^k over POVMs sharing one outcome set.
pub fn mix_povms(weights: &[f64], povms: &[Povm]) -> Result<Povm> {
    if weights.len() != povms.len() || povms.is_empty() {
        return Err(Error::InvalidParam("one weight per POVM required".into()));
    }
    let n = povms[0].len();
    if povms.iter().any(|p| p.len() != n || p.dim() != povms[0].dim()) {
        return Err(Error::DimensionMismatch("POVMs must share outcomes and dimension".into()));
    }
    let effects = (0..n)
        .map(|x| {
            let terms: Vec<(f64, &Effect)> = weights.iter().zip(povms).map(|(w, p)| (*w, &p.effects()[x])).collect();
            combine(&terms, povms[0].dim())
        })
        .collect();
    Povm::from_effects(effects, povms[0].labels().to_vec())
}

fn require_projective(m: &Povm) -> Result<()> {
    if !m.is_projective(1e-9) {
        return Err(Error::InvalidPovm("sequential measurements need projective effects".into()));
    }
    Ok(())
}

/// POVM of measuring `first` with Lüders update and then `second`:
/// effects Π_x Π′_y Π_x, labelled (x, y).
pub fn lueders_sequence(first: &Povm, second: &Povm) -> Result<Povm> {
    require_projective(first)?;
    require_projective(second)?;
    if first.dim() != second.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", first.dim(), second.dim())));
    }
    let mut effects = Vec::new();
    let mut labels = Vec::new();
    for (ex, lx) in first.effects().iter().zip(first.labels()) {
        let px = ex.to_dense();
        for (ey, ly) in second.effects().iter().zip(second.labels()) {
            let e = match (ex, ey) {
                (Effect::Diagonal(a), Effect::Diagonal(b)) => {
                    Effect::Diagonal(a.iter().zip(b).map(|(u, v)| u * v * u).collect())
                }
                _ => Effect::Dense(px.matmul(&ey.to_dense()).matmul(&px).hermitian_part()),
            };
            effects.push(e);
            labels.push(Label::pair(lx.clone(), ly.clone()));
        }
    }
    Povm::from_effects(effects, labels)
}

/// Lüders post-measurement state Π ρ Π / Tr(Π ρ); None when the outcome has
/// zero probability.
pub fn lueders_update(projector: &CMatrix, rho: &DensityState) -> Result<Option<DensityState>> {
    let m = projector.matmul(rho.matrix()).matmul(projector);
    let p = m.trace().re;
    if p <= 1e-14 {
        return Ok(None);
    }
    DensityState::from_unnormalized(m).map(Some)
}

/// Σ_x p_x D_N(ρ_x‖σ_x) over Lüders post-states of the first measurement.
pub fn conditional_measured_entropy(first: &Povm, second: &Povm, rho: &DensityState, sigma: &DensityState) -> Result<ExtReal> {
    require_projective(first)?;
    let p = measure(first, rho)?;
    let q = measure(first, sigma)?;
    if !kl_divergence(p.as_slice(), q.as_slice())?.is_finite() {
        return Ok(ExtReal::PosInf);
    }
    let mut acc = 0.0;
    for (x, e) in first.effects().iter().enumerate() {
        if p[x] <= 1e-14 {
            continue;
        }
        let pi = e.to_dense();
        let rx = lueders_update(&pi, rho)?;
        let sx = lueders_update(&pi, sigma)?;
        match (rx, sx) {
            (Some(rx), Some(sx)) => match measured_relative_entropy(second, &rx, &sx)? {
                ExtReal::Finite(v) => acc += p[x] * v,
                _ => {
                    if p[x] > 1e-9 {
                        return Ok(ExtReal::PosInf);
                    }
                }
            },
            (Some(_), None) => {
                if p[x] > 1e-9 {
                    return Ok(ExtReal::PosInf);
                }
            }
            _ => {}
        }
    }
    Ok(ExtReal::Finite(acc))
}
