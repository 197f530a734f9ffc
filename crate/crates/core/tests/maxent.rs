use obsentropy::entropy::{von_neumann_entropy, DensityState, ExtReal};
use obsentropy::linalg::{pauli_x, pauli_z, CMatrix};
use obsentropy::maxent::{
    canonical_prior, charges_prior, check_constraint, degenerate_blocks, microcanonical_prior, solve_beta,
    time_averaged_state, uniform_prior, ConstraintMode,
};

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

#[test]
fn two_level_canonical() {
    let beta = solve_beta(&[0.0, 1.0], 0.25).unwrap();
    close(beta, 3f64.ln(), 1e-10);
    close(beta, 1.098612, 1e-6);
    let p = canonical_prior(&CMatrix::from_diag(&[0.0, 1.0]), 0.25).unwrap();
    let diag = p.tau.diag();
    close(diag[0], 0.75, 1e-10);
    close(diag[1], 0.25, 1e-10);
    close(p.s_tau, 0.562335, 1e-6);
    close(p.multipliers[0], beta, 1e-12);
    assert!(p.residuals[0].abs() < 1e-10);
}

#[test]
fn spectral_mean_gives_infinite_temperature() {
    let e = [0.0, 0.4, 1.1, 2.5];
    let mean = e.iter().sum::<f64>() / 4.0;
    close(solve_beta(&e, mean).unwrap(), 0.0, 1e-10);
}

#[test]
fn negative_temperature_above_mean() {
    let beta = solve_beta(&[0.0, 1.0], 0.75).unwrap();
    close(beta, -(3f64.ln()), 1e-10);
}

#[test]
fn target_outside_spectrum_rejected() {
    assert!(solve_beta(&[0.0, 1.0], 1.0).is_err());
    assert!(solve_beta(&[0.0, 1.0], -0.1).is_err());
    assert!(solve_beta(&[0.5, 0.5], 0.5).is_err());
}

#[test]
fn canonical_large_beta_is_stable() {
    // β ≈ 700 would overflow e^{βE} without the shift.
    let e = [0.0, 1.0, 2.0];
    let target = 2.0 * (-700f64).exp();
    let beta = solve_beta(&e, target.max(1e-300)).unwrap();
    assert!(beta.is_finite() && beta > 100.0);
}

#[test]
fn two_charges() {
    // τ ∝ e^{−λ_z Z − λ_x X}; ⟨Z⟩ = 0.3, ⟨X⟩ = 0.2 means a Bloch vector of
    // length r = √0.13 with λ·σ ∝ −(0.3, 0.2), so S(τ) = h((1+r)/2).
    let p = charges_prior(&[pauli_z(), pauli_x()], &[0.3, 0.2]).unwrap();
    close(p.tau.expectation(&pauli_z()), 0.3, 1e-9);
    close(p.tau.expectation(&pauli_x()), 0.2, 1e-9);
    let r = 0.13f64.sqrt();
    let (a, b) = ((1.0 + r) / 2.0, (1.0 - r) / 2.0);
    close(p.s_tau, -(a * a.ln() + b * b.ln()), 1e-9);
    close(p.s_tau, von_neumann_entropy(&p.tau), 1e-12);
    // λ = atanh(r) along −(0.3, 0.2)/r.
    let l = r.atanh() / r;
    close(p.multipliers[0], -0.3 * l, 1e-7);
    close(p.multipliers[1], -0.2 * l, 1e-7);
}

#[test]
fn one_charge_matches_canonical() {
    let h = CMatrix::from_diag(&[0.0, 0.3, 0.7, 1.6]);
    let a = charges_prior(&[h.clone()], &[0.5]).unwrap();
    let b = canonical_prior(&h, 0.5).unwrap();
    assert!(a.tau.matrix().max_abs_diff(b.tau.matrix()) < 1e-9);
    close(a.multipliers[0], b.multipliers[0], 1e-7);
}

#[test]
fn microcanonical_rank_three() {
    let pi = CMatrix::from_diag(&[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0]);
    let p = microcanonical_prior(&pi).unwrap();
    close(p.s_tau, 3f64.ln(), 1e-14);
    close(von_neumann_entropy(&p.tau), 3f64.ln(), 1e-12);
    close(p.tau.diag()[1], 1.0 / 3.0, 1e-14);
    assert!(microcanonical_prior(&CMatrix::from_diag(&[0.5, 1.0])).is_err());
}

#[test]
fn uniform_is_maximally_mixed() {
    let p = uniform_prior(5);
    close(p.s_tau, 5f64.ln(), 1e-15);
    let c = check_constraint(&DensityState::diagonal(&[1.0, 0.0, 0.0, 0.0, 0.0]).unwrap(), &p).unwrap();
    assert!(c.satisfied);
    close(c.slack.to_f64(), 0.0, 1e-12);
}

#[test]
fn canonical_constraint_check() {
    let h = CMatrix::from_diag(&[0.0, 1.0]);
    let p = canonical_prior(&h, 0.25).unwrap();
    // ⟨H⟩ ≤ 0.25 passes, ⟨H⟩ > 0.25 fails; slack is β(0.25 − ⟨H⟩).
    let below = check_constraint(&DensityState::diagonal(&[0.9, 0.1]).unwrap(), &p).unwrap();
    assert!(below.satisfied);
    close(below.slack.to_f64(), 3f64.ln() * 0.15, 1e-10);
    let above = check_constraint(&DensityState::diagonal(&[0.5, 0.5]).unwrap(), &p).unwrap();
    assert!(!above.satisfied);
    let at = check_constraint(&p.tau, &p.clone().with_mode(ConstraintMode::Equality)).unwrap();
    assert!(at.satisfied);
}

#[test]
fn constraint_outside_support_is_neg_inf() {
    let p = microcanonical_prior(&CMatrix::from_diag(&[1.0, 1.0, 0.0])).unwrap();
    let c = check_constraint(&DensityState::diagonal(&[0.0, 0.0, 1.0]).unwrap(), &p).unwrap();
    assert!(!c.satisfied);
    assert_eq!(c.slack, ExtReal::NegInf);
}

#[test]
fn time_average_dephases() {
    let s = 0.5f64.sqrt();
    let plus = DensityState::from_pure(vec![s.into(), s.into()]).unwrap();
    let bar = time_averaged_state(&pauli_z(), &plus).unwrap();
    assert!(bar.matrix().max_abs_diff(DensityState::maximally_mixed(2).matrix()) < 1e-12);
    // Degenerate H keeps coherences.
    let bar = time_averaged_state(&CMatrix::identity(2), &plus).unwrap();
    assert!(bar.matrix().max_abs_diff(plus.matrix()) < 1e-12);
}

#[test]
fn degenerate_block_grouping() {
    let b = degenerate_blocks(&[0.0, 1e-12, 0.5, 1.0, 1.0], 1e-9);
    assert_eq!(b, vec![0..2, 2..3, 3..5]);
}
