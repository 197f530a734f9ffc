//! States, POVMs and the entropy kernels: Shannon, von Neumann, relative,
//! cross and measured entropies, and observational entropy.
//!
//! All logarithms are natural. Infinite values are carried by [`ExtReal`].

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{norm_sqr, CMatrix, Spectrum, C64};

/// Relative threshold below which eigenvalues of σ count as its kernel.
pub const KERNEL_REL_TOL: f64 = 1e-12;
/// Weight of ρ on the kernel of σ above which a divergence is infinite.
pub const SUPPORT_WEIGHT_TOL: f64 = 1e-9;
/// Tolerance on Σ p for renormalizing measured distributions.
pub const RENORM_TOL: f64 = 1e-9;
const VERIFY_TOL: f64 = 1e-9;

/// A real number or a signed infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    PosInf,
    NegInf,
}

impl ExtReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    /// The value, mapping infinities to f64 infinities (for plotting only).
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::Finite(v) => v,
            ExtReal::PosInf => f64::INFINITY,
            ExtReal::NegInf => f64::NEG_INFINITY,
        }
    }

    pub fn neg(self) -> Self {
        match self {
            ExtReal::Finite(v) => ExtReal::Finite(-v),
            ExtReal::PosInf => ExtReal::NegInf,
            ExtReal::NegInf => ExtReal::PosInf,
        }
    }

    /// a − self
    pub fn subtract_from(self, a: f64) -> Self {
        match self {
            ExtReal::Finite(v) => ExtReal::Finite(a - v),
            other => other.neg(),
        }
    }

    /// self ≤ other + tol, treating infinities in the extended order.
    pub fn le_tol(self, other: ExtReal, tol: f64) -> bool {
        match (self, other) {
            (ExtReal::NegInf, _) | (_, ExtReal::PosInf) => true,
            (ExtReal::PosInf, _) | (_, ExtReal::NegInf) => false,
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a <= b + tol,
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::PosInf => write!(f, "inf"),
            ExtReal::NegInf => write!(f, "-inf"),
        }
    }
}

impl serde::Serialize for ExtReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(v) => s.serialize_f64(*v),
            ExtReal::PosInf => s.serialize_str("inf"),
            ExtReal::NegInf => s.serialize_str("-inf"),
        }
    }
}

impl From<f64> for ExtReal {
    fn from(v: f64) -> Self {
        ExtReal::Finite(v)
    }
}

/// Nonnegative weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbVector {
    probs: Vec<f64>,
}

impl ProbVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidProbabilities("empty".into()));
        }
        if let Some(v) = probs.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidProbabilities(format!("entry {v} is negative or not finite")));
        }
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidProbabilities(format!("sum is {s}")));
        }
        Ok(Self { probs })
    }

    /// Accept raw outcome weights: negative round-off is clamped and the
    /// vector renormalized when Σ deviates from one by less than 1e-9.
    pub fn from_raw(mut raw: Vec<f64>) -> Result<Self> {
        for v in raw.iter_mut() {
            if !v.is_finite() {
                return Err(Error::InvalidProbabilities("non-finite outcome weight".into()));
            }
            if *v < 0.0 {
                if *v < -RENORM_TOL {
                    return Err(Error::InvalidProbabilities(format!("negative outcome weight {v}")));
                }
                *v = 0.0;
            }
        }
        let s: f64 = raw.iter().sum();
        if (s - 1.0).abs() >= RENORM_TOL {
            return Err(Error::InvalidProbabilities(format!("outcome weights sum to {s}")));
        }
        for v in raw.iter_mut() {
            *v /= s;
        }
        Ok(Self { probs: raw })
    }

    pub fn uniform(n: usize) -> Self {
        Self { probs: vec![1.0 / n as f64; n] }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }
}

impl std::ops::Index<usize> for ProbVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.probs[i]
    }
}

/// Density operator. Stored as a matrix, a pure vector, or a spectrum;
/// the other forms are built on demand.
#[derive(Clone, Debug)]
pub struct DensityState {
    dim: usize,
    pure: Option<Vec<C64>>,
    matrix: OnceLock<CMatrix>,
    spectrum: OnceLock<Spectrum>,
}

impl DensityState {
    /// Validate and wrap a density matrix.
    pub fn new(mat: CMatrix) -> Result<Self> {
        if !mat.is_square() || mat.nrows() == 0 {
            return Err(Error::InvalidState("matrix must be square and nonempty".into()));
        }
        let dim = mat.nrows();
        for i in 0..dim {
            for j in 0..dim {
                let v = mat.get(i, j);
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::InvalidState("non-finite entry".into()));
                }
            }
        }
        let defect = mat.hermiticity_defect();
        if defect > 1e-10 * dim as f64 {
            return Err(Error::InvalidState(format!("not Hermitian (defect {defect:e})")));
        }
        let tr = mat.trace().re;
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("trace is {tr}")));
        }
        let h = mat.hermitian_part();
        let mut spec = h.eigh()?;
        let min = spec.values.first().copied().unwrap_or(0.0);
        if min < -1e-10 {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        let st = Self { dim, pure: None, matrix: OnceLock::new(), spectrum: OnceLock::new() };
        if min < 0.0 {
            for v in spec.values.iter_mut() {
                *v = v.max(0.0);
            }
            let s: f64 = spec.values.iter().sum();
            for v in spec.values.iter_mut() {
                *v /= s;
            }
            let _ = st.matrix.set(spec.reconstruct());
        } else {
            let _ = st.matrix.set(h);
        }
        let _ = st.spectrum.set(spec);
        Ok(st)
    }

    /// Normalize by the trace, then validate.
    pub fn from_unnormalized(mat: CMatrix) -> Result<Self> {
        let tr = mat.trace().re;
        if !(tr > 0.0) {
            return Err(Error::InvalidState(format!("trace {tr} is not positive")));
        }
        Self::new(mat.hermitian_part().scale(1.0 / tr))
    }

    /// Pure state |ψ⟩⟨ψ|; ψ must have unit norm within 1e-10.
    pub fn from_pure(psi: Vec<C64>) -> Result<Self> {
        if psi.is_empty() {
            return Err(Error::InvalidState("empty vector".into()));
        }
        let n = norm_sqr(&psi);
        if !n.is_finite() || (n - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("state vector has squared norm {n}")));
        }
        Ok(Self { dim: psi.len(), pure: Some(psi), matrix: OnceLock::new(), spectrum: OnceLock::new() })
    }

    /// State from an eigendecomposition with eigenvalues summing to one.
    pub fn from_spectrum(mut spectrum: Spectrum) -> Result<Self> {
        let dim = spectrum.dim();
        if dim == 0 {
            return Err(Error::InvalidState("empty spectrum".into()));
        }
        if let Some(v) = spectrum.values.iter().find(|v| !v.is_finite() || **v < -1e-10) {
            return Err(Error::InvalidState(format!("eigenvalue {v}")));
        }
        let s: f64 = spectrum.values.iter().sum();
        if (s - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("eigenvalues sum to {s}")));
        }
        for v in spectrum.values.iter_mut() {
            *v = v.max(0.0);
        }
        let st = Self { dim, pure: None, matrix: OnceLock::new(), spectrum: OnceLock::new() };
        let _ = st.spectrum.set(spectrum);
        Ok(st)
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(CMatrix::from_diag(probs))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        let st = Self { dim: d, pure: None, matrix: OnceLock::new(), spectrum: OnceLock::new() };
        let _ = st.spectrum.set(Spectrum { values: vec![1.0 / d as f64; d], vectors: CMatrix::identity(d) });
        st
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pure_vector(&self) -> Option<&[C64]> {
        self.pure.as_deref()
    }

    pub fn matrix(&self) -> &CMatrix {
        self.matrix.get_or_init(|| {
            if let Some(psi) = &self.pure {
                CMatrix::outer(psi)
            } else {
                self.spectrum.get().expect("state has a representation").reconstruct()
            }
        })
    }

    /// Eigendecomposition with eigenvalues clamped to be nonnegative.
    pub fn spectrum(&self) -> &Spectrum {
        self.spectrum.get_or_init(|| {
            let mut s = self.matrix().eigh().expect("eigendecomposition of a validated state");
            for v in s.values.iter_mut() {
                *v = v.max(0.0);
            }
            s
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum().values
    }

    /// Diagonal in the computational basis.
    pub fn diag(&self) -> Vec<f64> {
        if let Some(psi) = &self.pure {
            return psi.iter().map(|c| c.norm_sqr()).collect();
        }
        if let Some(m) = self.matrix.get() {
            return m.diag_real();
        }
        let s = self.spectrum();
        s.diag_of(&s.values)
    }

    /// Tr(ρ A) for Hermitian A.
    pub fn expectation(&self, a: &CMatrix) -> f64 {
        if let Some(psi) = &self.pure {
            return a.expectation(psi);
        }
        self.matrix().trace_product_re(a)
    }

    /// ⟨v_k|ρ|v_k⟩ for the eigenvectors of another operator.
    pub fn weights_in(&self, basis: &Spectrum) -> Vec<f64> {
        if let Some(psi) = &self.pure {
            return basis.weights_of_pure(psi);
        }
        basis.diagonal_in_basis(self.matrix())
    }

    /// Tr ρ².
    pub fn purity(&self) -> f64 {
        if self.pure.is_some() {
            return 1.0;
        }
        self.eigenvalues().iter().map(|v| v * v).sum()
    }

    /// Convex mixture (1−w)·self + w·other.
    pub fn mix(&self, other: &DensityState, w: f64) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let m = &self.matrix().scale(1.0 - w) + &other.matrix().scale(w);
        Self::new(m)
    }

    /// U ρ U†.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<Self> {
        if let Some(psi) = &self.pure {
            return Self::from_pure(u.matvec(psi));
        }
        Self::from_unnormalized(u.matmul(self.matrix()).matmul(&u.adjoint()))
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch(format!("{a} vs {b}")));
    }
    Ok(())
}

/// Outcome identifier.
#[derive(Clone, Debug, PartialEq)]
pub enum Label {
    Index(usize),
    Value(f64),
    Name(String),
    Pair(Box<Label>, Box<Label>),
}

impl Label {
    pub fn pair(a: Label, b: Label) -> Self {
        Label::Pair(Box::new(a), Box::new(b))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Index(i) => write!(f, "{i}"),
            Label::Value(v) => write!(f, "{v}"),
            Label::Name(s) => write!(f, "{s}"),
            Label::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

/// One POVM element. Diagonal effects are stored by their diagonal.
#[derive(Clone, Debug)]
pub enum Effect {
    Dense(CMatrix),
    Diagonal(Vec<f64>),
}

impl Effect {
    pub fn dim(&self) -> usize {
        match self {
            Effect::Dense(m) => m.nrows(),
            Effect::Diagonal(d) => d.len(),
        }
    }

    pub fn to_dense(&self) -> CMatrix {
        match self {
            Effect::Dense(m) => m.clone(),
            Effect::Diagonal(d) => CMatrix::from_diag(d),
        }
    }

    pub fn trace(&self) -> f64 {
        match self {
            Effect::Dense(m) => m.trace().re,
            Effect::Diagonal(d) => d.iter().sum(),
        }
    }

    /// Tr(M ρ).
    pub fn prob(&self, rho: &DensityState) -> f64 {
        match self {
            Effect::Dense(m) => rho.expectation(m),
            Effect::Diagonal(d) => d.iter().zip(rho.diag()).map(|(a, b)| a * b).sum(),
        }
    }

    /// Tr(M ρ) given the computational-basis diagonal of ρ; only valid for
    /// diagonal effects.
    pub fn prob_from_diag(&self, rho_diag: &[f64]) -> Option<f64> {
        match self {
            Effect::Diagonal(d) => Some(d.iter().zip(rho_diag).map(|(a, b)| a * b).sum()),
            Effect::Dense(_) => None,
        }
    }

    pub fn scale(&self, s: f64) -> Effect {
        match self {
            Effect::Dense(m) => Effect::Dense(m.scale(s)),
            Effect::Diagonal(d) => Effect::Diagonal(d.iter().map(|v| v * s).collect()),
        }
    }

    pub fn kron(a: &Effect, b: &Effect) -> Effect {
        match (a, b) {
            (Effect::Diagonal(x), Effect::Diagonal(y)) => {
                Effect::Diagonal(x.iter().flat_map(|p| y.iter().map(move |q| p * q)).collect())
            }
            _ => Effect::Dense(CMatrix::kron(&a.to_dense(), &b.to_dense())),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self, Effect::Diagonal(_))
    }
}

/// Positive operator-valued measure.
#[derive(Clone, Debug)]
pub struct Povm {
    dim: usize,
    effects: Vec<Effect>,
    labels: Vec<Label>,
}

impl Povm {
    /// Validate dense effects.
    pub fn new(effects: Vec<CMatrix>, labels: Vec<Label>) -> Result<Self> {
        Self::from_effects(effects.into_iter().map(Effect::Dense).collect(), labels)
    }

    /// Validate effects diagonal in the computational basis.
    pub fn new_diagonal(effects: Vec<Vec<f64>>, labels: Vec<Label>) -> Result<Self> {
        Self::from_effects(effects.into_iter().map(Effect::Diagonal).collect(), labels)
    }

    pub fn from_effects(effects: Vec<Effect>, labels: Vec<Label>) -> Result<Self> {
        if effects.is_empty() {
            return Err(Error::InvalidPovm("no effects".into()));
        }
        if effects.len() != labels.len() {
            return Err(Error::InvalidPovm(format!("{} effects but {} labels", effects.len(), labels.len())));
        }
        let dim = effects[0].dim();
        if dim == 0 || effects.iter().any(|e| e.dim() != dim) {
            return Err(Error::InvalidPovm("effects have inconsistent dimensions".into()));
        }
        let tol = 1e-10 * dim as f64;
        for e in &effects {
            match e {
                Effect::Dense(m) => {
                    if !m.is_square() {
                        return Err(Error::InvalidPovm("non-square effect".into()));
                    }
                    if m.hermiticity_defect() > tol {
                        return Err(Error::InvalidPovm("effect not Hermitian".into()));
                    }
                    let min = m.eigvalsh()?.first().copied().unwrap_or(0.0);
                    if min < -1e-10 {
                        return Err(Error::InvalidPovm(format!("effect has eigenvalue {min:e}")));
                    }
                }
                Effect::Diagonal(d) => {
                    if let Some(v) = d.iter().find(|v| !v.is_finite() || **v < -1e-10) {
                        return Err(Error::InvalidPovm(format!("effect has eigenvalue {v}")));
                    }
                }
            }
        }
        let dev = if effects.iter().all(Effect::is_diagonal) {
            let mut sum = vec![0.0; dim];
            for e in &effects {
                if let Effect::Diagonal(d) = e {
                    for (s, v) in sum.iter_mut().zip(d) {
                        *s += v;
                    }
                }
            }
            sum.iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max)
        } else {
            let mut sum = CMatrix::zeros(dim, dim);
            for e in &effects {
                sum = &sum + &e.to_dense();
            }
            sum.max_abs_diff(&CMatrix::identity(dim))
        };
        if dev > tol {
            return Err(Error::InvalidPovm(format!("effects sum to identity only within {dev:e}")));
        }
        for i in 0..labels.len() {
            for j in 0..i {
                if labels[i] == labels[j] {
                    return Err(Error::InvalidPovm(format!("duplicate label {}", labels[i])));
                }
            }
        }
        Ok(Self { dim, effects, labels })
    }

    /// Computational-basis measurement.
    pub fn basis(d: usize) -> Self {
        let effects = (0..d)
            .map(|k| {
                let mut v = vec![0.0; d];
                v[k] = 1.0;
                Effect::Diagonal(v)
            })
            .collect();
        Self { dim: d, effects, labels: (0..d).map(Label::Index).collect() }
    }

    /// The single-outcome measurement (I).
    pub fn trivial(d: usize) -> Self {
        Self { dim: d, effects: vec![Effect::Diagonal(vec![1.0; d])], labels: vec![Label::Index(0)] }
    }

    /// Rank-one projectors onto the columns of a unitary.
    pub fn from_unitary(u: &CMatrix) -> Result<Self> {
        let d = u.nrows();
        let effects = (0..d)
            .map(|k| {
                let col: Vec<C64> = (0..d).map(|i| u.get(i, k)).collect();
                CMatrix::outer(&col)
            })
            .collect();
        Self::new(effects, (0..d).map(Label::Index).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn effect_matrix(&self, x: usize) -> CMatrix {
        self.effects[x].to_dense()
    }

    pub fn is_diagonal(&self) -> bool {
        self.effects.iter().all(Effect::is_diagonal)
    }

    /// True when every effect is a projector (M² = M within tol).
    pub fn is_projective(&self, tol: f64) -> bool {
        self.effects.iter().all(|e| match e {
            Effect::Diagonal(d) => d.iter().all(|v| (v * v - v).abs() <= tol),
            Effect::Dense(m) => m.matmul(m).max_abs_diff(m) <= tol,
        })
    }

    /// Tr M_x for every outcome.
    pub fn traces(&self) -> Vec<f64> {
        self.effects.iter().map(Effect::trace).collect()
    }

    /// Raw outcome weights Tr(M_x ρ) before clamping.
    pub fn raw_probs(&self, rho: &DensityState) -> Vec<f64> {
        if self.is_diagonal() {
            let d = rho.diag();
            return self.effects.iter().map(|e| e.prob_from_diag(&d).unwrap_or(0.0)).collect();
        }
        self.effects.iter().map(|e| e.prob(rho)).collect()
    }
}

/// H(p) = −Σ p ln p.
pub fn shannon_entropy(p: &ProbVector) -> f64 {
    shannon(p.as_slice())
}

pub(crate) fn shannon(p: &[f64]) -> f64 {
    -p.iter().filter(|&&v| v > 0.0).map(|&v| v * v.ln()).sum::<f64>()
}

/// S(ρ) = −Tr ρ ln ρ.
pub fn von_neumann_entropy(rho: &DensityState) -> f64 {
    if rho.pure_vector().is_some() {
        return 0.0;
    }
    shannon(rho.eigenvalues()).max(0.0)
}

/// Classical relative entropy with the same support rule as the quantum
/// one: q entries below 1e-12·max q are the kernel, and p mass above 1e-9
/// there makes the divergence infinite.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<ExtReal> {
    check_dims(p.len(), q.len())?;
    let qmax = q.iter().cloned().fold(0.0, f64::max);
    let cut = KERNEL_REL_TOL * qmax;
    let mut kernel_mass = 0.0;
    let mut acc = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if qi <= cut {
            kernel_mass += pi;
            continue;
        }
        if pi > 0.0 {
            acc += pi * (pi / qi).ln();
        }
    }
    if kernel_mass > SUPPORT_WEIGHT_TOL {
        return Ok(ExtReal::PosInf);
    }
    Ok(ExtReal::Finite(acc))
}

/// −Tr ρ ln σ, split into the kernel weight of ρ and the finite part.
fn cross_parts(rho: &DensityState, sigma: &DensityState) -> Result<(f64, f64)> {
    check_dims(rho.dim(), sigma.dim())?;
    let spec = sigma.spectrum();
    let lmax = spec.values.iter().cloned().fold(0.0, f64::max);
    let cut = KERNEL_REL_TOL * lmax;
    let w = rho.weights_in(spec);
    let mut kernel = 0.0;
    let mut acc = 0.0;
    for (&wk, &sk) in w.iter().zip(&spec.values) {
        if sk <= cut {
            kernel += wk.max(0.0);
        } else {
            acc -= wk * sk.ln();
        }
    }
    Ok((kernel, acc))
}

/// S(ρ; σ) = −Tr ρ ln σ, infinite when ρ leaves the support of σ.
pub fn cross_entropy(rho: &DensityState, sigma: &DensityState) -> Result<ExtReal> {
    let (kernel, acc) = cross_parts(rho, sigma)?;
    if kernel > SUPPORT_WEIGHT_TOL {
        return Ok(ExtReal::PosInf);
    }
    Ok(ExtReal::Finite(acc))
}

/// D(ρ‖σ) = Tr ρ(ln ρ − ln σ).
pub fn relative_entropy(rho: &DensityState, sigma: &DensityState) -> Result<ExtReal> {
    let (kernel, acc) = cross_parts(rho, sigma)?;
    if kernel > SUPPORT_WEIGHT_TOL {
        return Ok(ExtReal::PosInf);
    }
    Ok(ExtReal::Finite((acc - von_neumann_entropy(rho)).max(0.0)))
}

/// Outcome distribution p_x = Tr M_x ρ.
pub fn measure(m: &Povm, rho: &DensityState) -> Result<ProbVector> {
    check_dims(m.dim(), rho.dim())?;
    ProbVector::from_raw(m.raw_probs(rho))
}

/// D_M(ρ‖σ) = D(p^ρ ‖ p^σ).
pub fn measured_relative_entropy(m: &Povm, rho: &DensityState, sigma: &DensityState) -> Result<ExtReal> {
    check_dims(rho.dim(), sigma.dim())?;
    let p = measure(m, rho)?;
    let q = measure(m, sigma)?;
    kl_divergence(p.as_slice(), q.as_slice())
}

/// Everything computed in one observational-entropy evaluation.
#[derive(Clone, Debug)]
pub struct EntropyReport {
    /// S(τ) − D_M(ρ‖τ); −∞ when some p_x > 0 has V_x = 0.
    pub s_oe: ExtReal,
    /// −Σ p ln(p / Tr M_x), or +∞ where volumes are unbounded.
    pub s_traditional: ExtReal,
    pub s_tau: f64,
    pub d_m: ExtReal,
    pub p: ProbVector,
    /// V_x = Tr(M_x τ)·e^{S(τ)}
    pub volumes: Vec<f64>,
}

/// Observational entropy from outcome distributions of ρ (p) and of the
/// prior (q), with the prior entropy S(τ). Cross-checks the volume form and
/// the Shannon-plus-Boltzmann split.
pub fn observational_entropy_from_probs(
    p: ProbVector,
    q: &[f64],
    s_tau: f64,
    traces: Option<&[f64]>,
) -> Result<EntropyReport> {
    check_dims(p.len(), q.len())?;
    let d_m = kl_divergence(p.as_slice(), q)?;
    let s_oe = d_m.subtract_from(s_tau);
    let volumes: Vec<f64> = q.iter().map(|&qx| qx * s_tau.exp()).collect();
    if let ExtReal::Finite(s) = s_oe {
        let qmax = q.iter().cloned().fold(0.0, f64::max);
        let cut = KERNEL_REL_TOL * qmax;
        let mut vol_form = 0.0;
        let mut boltz = 0.0;
        let mut kept = Vec::with_capacity(p.len());
        for (x, &px) in p.as_slice().iter().enumerate() {
            if px > 0.0 && q[x] > cut {
                let ln_v = q[x].ln() + s_tau;
                vol_form -= px * (px.ln() - ln_v);
                boltz += px * ln_v;
                kept.push(px);
            }
        }
        let split = shannon(&kept) + boltz;
        let tol = VERIFY_TOL * s.abs().max(1.0);
        if (vol_form - s).abs() > tol || (split - s).abs() > tol {
            return Err(Error::Numerical(format!(
                "volume form {vol_form} or entropy split {split} disagrees with {s}"
            )));
        }
    }
    let s_traditional = match traces {
        Some(w) => ExtReal::Finite(traditional_from_probs(p.as_slice(), w)),
        None => ExtReal::PosInf,
    };
    Ok(EntropyReport { s_oe, s_traditional, s_tau, d_m, p, volumes })
}

pub(crate) fn traditional_from_probs(p: &[f64], w: &[f64]) -> f64 {
    p.iter()
        .zip(w)
        .filter(|(&px, &wx)| px > 0.0 && wx > 0.0)
        .map(|(&px, &wx)| -px * (px / wx).ln())
        .sum()
}

/// S_M^τ(ρ) = S(τ) − D_M(ρ‖τ).
pub fn observational_entropy(m: &Povm, tau: &DensityState, rho: &DensityState) -> Result<EntropyReport> {
    check_dims(m.dim(), tau.dim())?;
    check_dims(m.dim(), rho.dim())?;
    let p = measure(m, rho)?;
    let q = measure(m, tau)?;
    let s_tau = von_neumann_entropy(tau);
    observational_entropy_from_probs(p, q.as_slice(), s_tau, Some(&m.traces()))
}

/// −Σ p_x ln(p_x / Tr M_x).
pub fn traditional_oe(m: &Povm, rho: &DensityState) -> Result<f64> {
    let p = measure(m, rho)?;
    Ok(traditional_from_probs(p.as_slice(), &m.traces()))
}

/// D_α(p‖q) = ln(Σ p^α q^{1−α}) / (α − 1).
pub fn renyi_divergence(p: &[f64], q: &[f64], alpha: f64) -> Result<ExtReal> {
    check_dims(p.len(), q.len())?;
    if !(alpha > 0.0) || alpha == 1.0 {
        return Err(Error::InvalidParam(format!("Rényi order {alpha} must be positive and not 1")));
    }
    let qmax = q.iter().cloned().fold(0.0, f64::max);
    let cut = KERNEL_REL_TOL * qmax;
    let mut sum = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi <= 0.0 {
            continue;
        }
        if qi <= cut {
            if alpha > 1.0 && pi > SUPPORT_WEIGHT_TOL {
                return Ok(ExtReal::PosInf);
            }
            continue;
        }
        sum += pi.powf(alpha) * qi.powf(1.0 - alpha);
    }
    if sum <= 0.0 {
        return Ok(ExtReal::PosInf);
    }
    Ok(ExtReal::Finite(sum.ln() / (alpha - 1.0)))
}

/// S(τ) − D_α(p‖q) on the induced distributions.
pub fn renyi_oe(m: &Povm, tau: &DensityState, rho: &DensityState, alpha: f64) -> Result<ExtReal> {
    let p = measure(m, rho)?;
    let q = measure(m, tau)?;
    let d = renyi_divergence(p.as_slice(), q.as_slice(), alpha)?;
    Ok(d.subtract_from(von_neumann_entropy(tau)))
}

/// ½‖ρ − σ‖₁ from the eigenvalues of the difference.
pub fn trace_distance(rho: &DensityState, sigma: &DensityState) -> Result<f64> {
    check_dims(rho.dim(), sigma.dim())?;
    let diff = rho.matrix() - sigma.matrix();
    Ok(0.5 * diff.eigvalsh()?.iter().map(|v| v.abs()).sum::<f64>())
}
