use obsentropy::entropy::{measure, von_neumann_entropy, DensityState, Povm, ProbVector};
use obsentropy::linalg::{CMatrix, C64};
use obsentropy::measurements::mix_povms;
use obsentropy::recovery::{
    gauss_legendre, maxent_compatible_state, petz_coarse_state, recovery_gap, rotated_petz, smeared_coarse_state,
    smearing_weight, SMEAR_CUTOFF,
};

const LN2: f64 = std::f64::consts::LN_2;

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

/// A fixed real orthogonal 3×3 basis, not aligned with the standard one.
fn tilted_basis() -> Povm {
    let (a, b) = (0.6f64, 0.8f64);
    let u = CMatrix::from_real_rows(&[
        vec![a, -b * a, b * b],
        vec![b, a * a, -a * b],
        vec![0.0, b, a],
    ]);
    Povm::from_unitary(&u).unwrap()
}

fn tau3() -> DensityState {
    DensityState::diagonal(&[0.7, 0.2, 0.1]).unwrap()
}

fn p3() -> ProbVector {
    ProbVector::new(vec![0.5, 0.3, 0.2]).unwrap()
}

/// Σ_x p_x τ^{(1+is)/2} M_x τ^{(1−is)/2} / Tr τM_x from explicit complex powers.
fn rotated_oracle(m: &Povm, tau: &DensityState, p: &ProbVector, s: f64) -> CMatrix {
    let spec = tau.spectrum();
    let w: Vec<C64> = spec.values.iter().map(|&t| C64::new(t, 0.0).powc(C64::new(0.5, 0.5 * s))).collect();
    let left = spec.reconstruct_complex(&w);
    let right = left.adjoint();
    let d = tau.dim();
    let mut acc = CMatrix::zeros(d, d);
    for x in 0..m.len() {
        let mx = m.effect_matrix(x);
        let tr = tau.matrix().trace_product_re(&mx);
        acc = &acc + &left.matmul(&mx).matmul(&right).scale(p.as_slice()[x] / tr);
    }
    acc
}

#[test]
fn smearing_weight_normalized() {
    close(smearing_weight(0.0), std::f64::consts::PI / 4.0, 1e-15);
    let (xs, ws) = gauss_legendre(400);
    let mass: f64 = xs.iter().zip(&ws).map(|(x, w)| w * SMEAR_CUTOFF * smearing_weight(x * SMEAR_CUTOFF)).sum();
    close(mass, 1.0, 1e-10);
}

#[test]
fn gauss_legendre_exact_for_polynomials() {
    let (xs, ws) = gauss_legendre(3);
    close(ws.iter().sum::<f64>(), 2.0, 1e-15);
    close(xs.iter().zip(&ws).map(|(x, w)| w * x.powi(4)).sum::<f64>(), 0.4, 1e-15);
    close(xs[2], 0.6f64.sqrt(), 1e-15);
}

#[test]
fn rotation_zero_is_petz() {
    let (m, tau, p) = (tilted_basis(), tau3(), p3());
    let a = rotated_petz(&m, &tau, &p, 0.0).unwrap();
    let b = petz_coarse_state(&m, &tau, &p).unwrap();
    assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-14);
}

#[test]
fn rotated_matches_complex_powers() {
    let (m, tau, p) = (tilted_basis(), tau3(), p3());
    for s in [-2.5, -0.3, 0.0, 0.7, 4.0] {
        let got = rotated_petz(&m, &tau, &p, s).unwrap();
        let want = rotated_oracle(&m, &tau, &p, s);
        assert!(got.matrix().max_abs_diff(&want) < 1e-12, "s = {s}");
    }
}

#[test]
fn commuting_case_ignores_rotation() {
    let m = Povm::basis(3);
    let (tau, p) = (tau3(), p3());
    let petz = petz_coarse_state(&m, &tau, &p).unwrap();
    assert!(petz.matrix().max_abs_diff(&CMatrix::from_diag(&[0.5, 0.3, 0.2])) < 1e-14);
    for s in [-3.0, 1.0, 5.0] {
        assert!(rotated_petz(&m, &tau, &p, s).unwrap().matrix().max_abs_diff(petz.matrix()) < 1e-14);
    }
    assert!(smeared_coarse_state(&m, &tau, &p).unwrap().matrix().max_abs_diff(petz.matrix()) < 1e-12);
}

#[test]
fn smeared_matches_trapezoid() {
    let (m, tau, p) = (tilted_basis(), tau3(), p3());
    let got = smeared_coarse_state(&m, &tau, &p).unwrap();
    // Trapezoid with 10⁴ intervals on [−20, 20]; the tails beyond carry
    // less than e^{−60} of the weight.
    let n = 10_000;
    let (a, h) = (-20.0, 40.0 / n as f64);
    let mut acc = CMatrix::zeros(3, 3);
    for k in 0..=n {
        let s = a + h * k as f64;
        let w = if k == 0 || k == n { 0.5 } else { 1.0 } * h * smearing_weight(s);
        acc = &acc + &rotated_oracle(&m, &tau, &p, s).scale(w);
    }
    let dev = got.matrix().max_abs_diff(&acc);
    assert!(dev < 1e-7, "deviation {dev:e}");
}

#[test]
fn smeared_is_a_state_for_random_like_input() {
    let (m, tau, p) = (tilted_basis(), tau3(), p3());
    let r = smeared_coarse_state(&m, &tau, &p).unwrap();
    close(r.matrix().trace().re, 1.0, 1e-12);
    assert!(r.matrix().hermiticity_defect() < 1e-12);
    assert!(r.eigenvalues().iter().all(|&v| v > -1e-12));
}

#[test]
fn uniform_prior_projective_closed_form() {
    let m = Povm::new_diagonal(
        vec![vec![1.0, 1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, 1.0]],
        vec![obsentropy::entropy::Label::Index(0), obsentropy::entropy::Label::Index(1)],
    )
    .unwrap();
    let tau = DensityState::maximally_mixed(4);
    let p = ProbVector::new(vec![0.8, 0.2]).unwrap();
    let want = CMatrix::from_diag(&[0.4, 0.4, 0.1, 0.1]);
    for r in [
        petz_coarse_state(&m, &tau, &p).unwrap(),
        smeared_coarse_state(&m, &tau, &p).unwrap(),
        maxent_compatible_state(&m, &p).unwrap(),
    ] {
        assert!(r.matrix().max_abs_diff(&want) < 1e-8);
    }
}

#[test]
fn maxent_compatible_of_uniform_statistics() {
    let s = 0.5f64.sqrt();
    let x = Povm::from_unitary(&CMatrix::from_real_rows(&[vec![s, s], vec![s, -s]])).unwrap();
    let m = mix_povms(&[0.5, 0.5], &[Povm::basis(2), x]).unwrap();
    let p = measure(&m, &DensityState::maximally_mixed(2)).unwrap();
    let r = maxent_compatible_state(&m, &p).unwrap();
    assert!(r.matrix().max_abs_diff(DensityState::maximally_mixed(2).matrix()) < 1e-9);
    // A biased outcome is reproduced.
    let p = ProbVector::new(vec![0.7, 0.3]).unwrap();
    let r = maxent_compatible_state(&m, &p).unwrap();
    close(measure(&m, &r).unwrap().as_slice()[0], 0.7, 1e-8);
}

#[test]
fn recovery_gap_saturated_by_plus_state() {
    // |+⟩ seen in Z against I/2: S_M = ln 2, S(ρ) = 0, ρ̃ = I/2 and the X
    // basis gives D = ln 2.
    let s = 0.5f64.sqrt();
    let plus = DensityState::from_pure(vec![s.into(), s.into()]).unwrap();
    let g = recovery_gap(&Povm::basis(2), &DensityState::maximally_mixed(2), &plus, &[]).unwrap();
    close(g.lhs, LN2, 1e-12);
    close(g.rhs.to_f64(), LN2, 1e-10);
    assert!(g.holds(1e-9));
}

#[test]
fn recovery_gap_zero_for_diagonal_state() {
    let rho = DensityState::diagonal(&[0.6, 0.3, 0.1]).unwrap();
    let g = recovery_gap(&Povm::basis(3), &DensityState::maximally_mixed(3), &rho, &[]).unwrap();
    close(g.lhs, 0.0, 1e-12);
    close(g.rhs.to_f64(), 0.0, 1e-10);
    close(von_neumann_entropy(&rho), 0.897946, 1e-6);
}

#[test]
fn recovery_gap_requires_constraint() {
    // ⟨H⟩ above the canonical target violates S(ρ;τ) ≤ S(τ).
    let tau = DensityState::diagonal(&[0.75, 0.25]).unwrap();
    let rho = DensityState::diagonal(&[0.2, 0.8]).unwrap();
    assert!(recovery_gap(&Povm::basis(2), &tau, &rho, &[]).is_err());
}
