//! Building coarse-grainings: energy windows of a Hamiltonian, tensor and
//! one-sided products, stochastic merging and sequential measurements, and
//! how each changes the observational entropy of one fixed state.

use obsentropy::entropy::{observational_entropy, DensityState, Povm};
use obsentropy::linalg::CMatrix;
use obsentropy::measurements::{
    coarse_energy_povm, disjoint_combine, lueders_sequence, one_sided, postprocess, tensor, EnergyWindowSpec,
    StochasticMap,
};
use obsentropy::rng::stream;
use obsentropy::sampling::random_density;

fn main() -> obsentropy::Result<()> {
    let h_local = CMatrix::from_diag(&[0.0, 0.3, 0.9, 1.0]);
    let d = 16;
    let rho = random_density(d, 2, &mut stream(7, "example"))?;
    let tau = DensityState::maximally_mixed(d);
    let s_oe = |m: &Povm| observational_entropy(m, &tau, &rho).map(|r| r.s_oe.to_f64());

    for de in [0.25, 0.5, 2.0] {
        let m = coarse_energy_povm(&EnergyWindowSpec::new(h_local.clone(), de))?;
        let ranks: Vec<f64> = m.traces();
        let joint = tensor(&m, &m)?;
        let one = one_sided(&m, 4)?;
        println!(
            "dE = {de:<4}: local ranks {ranks:?}; joint {} outcomes S = {:.4}; one-sided S = {:.4}",
            joint.len(),
            s_oe(&joint)?,
            s_oe(&one)?
        );
    }

    let fine = Povm::basis(d);
    // Merge neighbouring pairs of basis outcomes.
    let rows: Vec<Vec<f64>> =
        (0..d / 2).map(|y| (0..d).map(|x| if x / 2 == y { 1.0 } else { 0.0 }).collect()).collect();
    let merged = postprocess(&StochasticMap::new(rows)?, &fine)?;
    println!("basis S = {:.4}, pair-merged S = {:.4}, trivial S = {:.4}", s_oe(&fine)?, s_oe(&merged)?, s_oe(&Povm::trivial(d))?);

    let half = disjoint_combine(0.5, &fine, &merged)?;
    println!("half basis, half merged ({} outcomes): S = {:.4}", half.len(), s_oe(&half)?);

    let energy = one_sided(&coarse_energy_povm(&EnergyWindowSpec::new(h_local, 0.5))?, 4)?;
    let seq = lueders_sequence(&energy, &fine)?;
    println!("energy then basis ({} outcomes): S = {:.4}", seq.len(), s_oe(&seq)?);
    Ok(())
}
