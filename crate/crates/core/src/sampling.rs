//! Random states, unitaries, Hermitian matrices and POVMs for property checks.

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::entropy::{DensityState, Label, Povm};
use crate::error::{Error, Result};
use crate::linalg::{normalize, CMatrix, C64};
use crate::measurements::StochasticMap;

/// Complex Gaussian with E|z|² = 1.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let a: f64 = StandardNormal.sample(rng);
    let b: f64 = StandardNormal.sample(rng);
    C64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, complex_gaussian(rng));
        }
    }
    m
}

/// Haar-random unit vector.
pub fn haar_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<C64> {
    let mut v: Vec<C64> = (0..d).map(|_| complex_gaussian(rng)).collect();
    normalize(&mut v);
    v
}

/// Haar-random unitary by Gram–Schmidt on Gaussian columns.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(d, d, rng);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    for j in 0..d {
        let mut v: Vec<C64> = (0..d).map(|i| g.get(i, j)).collect();
        for _ in 0..2 {
            for u in &cols {
                let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= proj * ui;
                }
            }
        }
        normalize(&mut v);
        cols.push(v);
    }
    CMatrix::from_fn(d, d, |i, j| cols[j][i])
}

/// (G + G†)/2 with G Ginibre.
pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    ginibre(d, d, rng).hermitian_part()
}

/// G G† / Tr with G of size d × rank.
pub fn random_density<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> Result<DensityState> {
    let g = ginibre(d, rank.max(1), rng);
    DensityState::from_unnormalized(g.matmul(&g.adjoint()))
}

pub fn random_pure<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<DensityState> {
    DensityState::from_pure(haar_state(d, rng))
}

/// Random PSD decomposition of the identity into `m` effects:
/// M_x = S^{-1/2} A_x S^{-1/2} with A_x Wishart and S = Σ A_x.
pub fn random_povm<R: Rng + ?Sized>(d: usize, m: usize, rng: &mut R) -> Result<Povm> {
    if m == 0 || d == 0 {
        return Err(Error::InvalidParam("random_povm needs d ≥ 1 and m ≥ 1".into()));
    }
    let mut ranks: Vec<usize> = (0..m).map(|_| rng.random_range(1..=d)).collect();
    // Ranks must add up to at least d or the effects cannot sum to the identity.
    let mut k = 0;
    while ranks.iter().sum::<usize>() < d {
        if ranks[k % m] < d {
            ranks[k % m] += 1;
        }
        k += 1;
    }
    let parts: Vec<CMatrix> = ranks
        .iter()
        .map(|&rank| {
            let g = ginibre(d, rank, rng);
            g.matmul(&g.adjoint())
        })
        .collect();
    let mut s = CMatrix::zeros(d, d);
    for a in &parts {
        s = &s + a;
    }
    let inv_sqrt = s.eigh()?.reconstruct_with(|v| 1.0 / v.sqrt());
    let effects = parts.iter().map(|a| inv_sqrt.matmul(a).matmul(&inv_sqrt).hermitian_part()).collect();
    Povm::new(effects, (0..m).map(Label::Index).collect())
}

/// Projective measurement: a random basis split into `m` nonempty groups.
pub fn random_projective_povm<R: Rng + ?Sized>(d: usize, m: usize, rng: &mut R) -> Result<Povm> {
    let m = m.clamp(1, d);
    let u = random_unitary(d, rng);
    let mut group: Vec<usize> = (0..d).map(|k| if k < m { k } else { rng.random_range(0..m) }).collect();
    for i in (1..d).rev() {
        let j = rng.random_range(0..=i);
        group.swap(i, j);
    }
    let effects = (0..m)
        .map(|g| {
            let mut p = CMatrix::zeros(d, d);
            for k in (0..d).filter(|&k| group[k] == g) {
                let col: Vec<C64> = (0..d).map(|i| u.get(i, k)).collect();
                p = &p + &CMatrix::outer(&col);
            }
            p.hermitian_part()
        })
        .collect();
    Povm::new(effects, (0..m).map(Label::Index).collect())
}

/// Point uniformly distributed on the probability simplex.
pub fn random_probs<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = v.iter().sum();
    for x in v.iter_mut() {
        *x /= s;
    }
    v
}

/// Column-stochastic matrix with independent Dirichlet columns.
pub fn random_stochastic<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Result<StochasticMap> {
    let columns: Vec<Vec<f64>> = (0..cols).map(|_| random_probs(rows, rng)).collect();
    let mut m: Vec<Vec<f64>> = (0..rows).map(|y| (0..cols).map(|x| columns[x][y]).collect()).collect();
    // Exact unit column sums.
    for x in 0..cols {
        let s: f64 = (0..rows).map(|y| m[y][x]).sum();
        for row in m.iter_mut() {
            row[x] /= s;
        }
    }
    StochasticMap::new(m)
}
