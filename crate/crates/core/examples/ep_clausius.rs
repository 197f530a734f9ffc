//! A qubit in contact with a small bath: the Clausius form ΔS(ρ_S) + ∫β dE_B
//! tracks the relative-entropy form D(ρ‖ρ_S ⊗ τ_B(β)).

use obsentropy::entropy::DensityState;
use obsentropy::equilibration::ep_clausius_check;
use obsentropy::linalg::{pauli_x, CMatrix};
use obsentropy::rng::stream;
use obsentropy::sampling::random_hermitian;

fn main() -> obsentropy::Result<()> {
    let db = 8;
    let mut rng = stream(5, "example");
    let h_s = CMatrix::from_diag(&[0.0, 1.0]);
    let h_b = CMatrix::from_diag(&(0..db).map(|k| 0.25 * k as f64).collect::<Vec<_>>());
    let v = CMatrix::kron(&pauli_x(), &random_hermitian(db, &mut rng)).scale(0.05);
    let rho_s = DensityState::diagonal(&[0.0, 1.0])?;
    let grid: Vec<f64> = (0..=200).map(|k| 0.1 * k as f64).collect();
    let ep = ep_clausius_check(&h_s, &h_b, &v, &rho_s, 1.0, &grid)?;
    println!("{:>6} {:>12} {:>12} {:>8}", "t", "Clausius", "relative", "beta");
    for k in (0..grid.len()).step_by(20) {
        println!("{:>6.1} {:>12.6} {:>12.6} {:>8.4}", ep.t[k], ep.clausius[k], ep.relative[k], ep.beta[k]);
    }
    println!("final Clausius on every second point: {:.6}", ep.clausius_halved_final);
    Ok(())
}
