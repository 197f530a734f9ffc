//! The MaxEnt priors for one small Hamiltonian: uniform, canonical at a few
//! target energies, two non-commuting charges, a microcanonical shell and
//! the time average of a state. Shows which states satisfy each constraint.

use obsentropy::entropy::DensityState;
use obsentropy::linalg::{pauli_x, pauli_z, CMatrix};
use obsentropy::maxent::{
    canonical_prior, charges_prior, check_constraint, microcanonical_prior, time_averaged_prior, uniform_prior,
};

fn main() -> obsentropy::Result<()> {
    let h = CMatrix::from_diag(&[0.0, 0.4, 1.0, 1.7]);
    let probe = DensityState::diagonal(&[0.4, 0.3, 0.2, 0.1])?;
    println!("probe state has <H> = {:.3}", probe.expectation(&h));

    let u = uniform_prior(4);
    println!("uniform: S(tau) = {:.6}", u.s_tau);
    for e in [0.3, 0.6, 0.775, 1.2] {
        let p = canonical_prior(&h, e)?;
        let c = check_constraint(&probe, &p)?;
        println!(
            "canonical E = {e:<5}: beta = {:>8.4}, S(tau) = {:.6}, probe admissible: {} (slack {:+.4})",
            p.multipliers[0],
            p.s_tau,
            c.satisfied,
            c.slack.to_f64()
        );
    }

    let q = charges_prior(&[pauli_z(), pauli_x()], &[0.3, 0.2])?;
    println!(
        "charges <Z> = 0.3, <X> = 0.2: lambda = {:?}, S(tau) = {:.6}, residuals {:?}",
        q.multipliers, q.s_tau, q.residuals
    );

    let shell = microcanonical_prior(&CMatrix::from_diag(&[0.0, 1.0, 1.0, 0.0]))?;
    println!("microcanonical shell of rank 2: S(tau) = {:.6} = ln 2", shell.s_tau);

    let s = 0.5f64.sqrt();
    let coherent = DensityState::from_pure(vec![s.into(), 0.0.into(), s.into(), 0.0.into()])?;
    let avg = time_averaged_prior(&h, &coherent)?;
    println!("time average of (|0> + |2>)/sqrt 2: diag {:?}, S = {:.6}", avg.tau.diag(), avg.s_tau);
    Ok(())
}
