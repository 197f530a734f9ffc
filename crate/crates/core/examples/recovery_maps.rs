//! Inferred states from measurement statistics: the Petz coarse state, its
//! rotated versions, the smeared state and the MaxEnt-compatible state, with
//! the recovery bound S_M − S(ρ) ≥ D_M′(ρ‖ρ̃).

use obsentropy::entropy::{measure, relative_entropy, trace_distance, DensityState};
use obsentropy::maxent::canonical_prior;
use obsentropy::linalg::CMatrix;
use obsentropy::recovery::{coarse_states, recovery_gap};
use obsentropy::rng::stream;
use obsentropy::sampling::{random_density, random_povm};

fn main() -> obsentropy::Result<()> {
    let d = 4;
    let mut rng = stream(3, "example");
    let h = CMatrix::from_diag(&[0.0, 0.5, 1.1, 2.0]);
    let prior = canonical_prior(&h, 0.8)?;
    let m = random_povm(d, 3, &mut rng)?;
    // A state colder than the prior satisfies the constraint.
    let rho = random_density(d, d, &mut rng)?.mix(&DensityState::diagonal(&[1.0, 0.0, 0.0, 0.0])?, 0.5)?;
    let p = measure(&m, &rho)?;
    let b = coarse_states(&m, &prior.tau, &p, &[-1.0, 0.5, 2.0])?;

    let report = |name: &str, s: &DensityState| -> obsentropy::Result<()> {
        let q = measure(&m, s)?;
        let dev = q.as_slice().iter().zip(p.as_slice()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!(
            "{name:<16} trace distance to rho {:.4}, D(rho||.) {:>8.4}, max |p - p(.)| {:.2e}",
            trace_distance(&rho, s)?,
            relative_entropy(&rho, s)?.to_f64(),
            dev
        );
        Ok(())
    };
    report("Petz", &b.petz)?;
    for (s, r) in &b.rotated {
        report(&format!("rotated s = {s}"), r)?;
    }
    report("smeared", &b.smeared)?;
    if let Some(mc) = &b.maxent_compatible {
        report("MaxEnt-compatible", mc)?;
    }
    let gap = recovery_gap(&m, &prior.tau, &rho, &[])?;
    println!("recovery bound: S_M - S(rho) = {:.6} >= {:.6}", gap.lhs, gap.rhs.to_f64());
    Ok(())
}
