//! Observational entropy of a qubit and a qutrit under a few measurements and
//! priors, next to the von Neumann entropy and the traditional form.

use obsentropy::entropy::{
    observational_entropy, renyi_oe, traditional_oe, von_neumann_entropy, DensityState, Povm,
};
use obsentropy::linalg::CMatrix;

fn main() -> obsentropy::Result<()> {
    let rho = DensityState::diagonal(&[0.75, 0.25])?;
    let s = 0.5f64.sqrt();
    let x_basis = Povm::from_unitary(&CMatrix::from_real_rows(&[vec![s, s], vec![s, -s]]))?;
    let uniform = DensityState::maximally_mixed(2);
    let tilted = DensityState::diagonal(&[0.9, 0.1])?;

    println!("S(rho) = {:.6}", von_neumann_entropy(&rho));
    for (mname, m) in [("Z basis", Povm::basis(2)), ("X basis", x_basis), ("trivial", Povm::trivial(2))] {
        for (tname, tau) in [("I/2", &uniform), ("diag(.9,.1)", &tilted)] {
            let r = observational_entropy(&m, tau, &rho)?;
            println!(
                "{mname:<8} tau = {tname:<12} S_M = {:>9.6}  D_M = {:>9.6}  S_trad = {:>9.6}  S_2 = {:>9.6}",
                r.s_oe.to_f64(),
                r.d_m.to_f64(),
                traditional_oe(&m, &rho)?,
                renyi_oe(&m, tau, &rho, 2.0)?.to_f64(),
            );
        }
    }

    // A pure qutrit state seen through a two-outcome coarse-graining.
    let psi = DensityState::from_pure(vec![0.6.into(), 0.0.into(), 0.8.into()])?;
    let m = Povm::new_diagonal(
        vec![vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
        vec![obsentropy::entropy::Label::Name("low".into()), obsentropy::entropy::Label::Name("high".into())],
    )?;
    let r = observational_entropy(&m, &DensityState::maximally_mixed(3), &psi)?;
    println!("qutrit: p = {:?}, volumes = {:?}, S_M = {:.6}", r.p.as_slice(), r.volumes, r.s_oe.to_f64());
    Ok(())
}
