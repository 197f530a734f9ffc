//! Observational entropy S_M^τ(ρ) = S(τ) − D_M(ρ‖τ) for a coarse-graining M
//! and a maximum-entropy prior τ, with the random-matrix heat-exchange and
//! hard-disk gas experiments built on it.

pub mod entropy;
pub mod error;
pub mod linalg;
pub mod maxent;
pub mod measurements;
pub mod recovery;
pub mod rng;
pub mod sampling;
pub mod series;
pub mod equilibration;
pub mod gas;
pub mod rmt;
pub mod checks;
pub mod config;
pub mod runner;
pub mod svg;

pub use entropy::{
    cross_entropy, kl_divergence, measure, measured_relative_entropy, observational_entropy, relative_entropy,
    renyi_oe, shannon_entropy, traditional_oe, von_neumann_entropy, DensityState, EntropyReport, ExtReal, Label,
    Povm, ProbVector,
};
pub use error::{Error, Result};
