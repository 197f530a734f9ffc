use obsentropy::entropy::{
    cross_entropy, kl_divergence, measure, measured_relative_entropy, observational_entropy, relative_entropy,
    renyi_oe, shannon_entropy, traditional_oe, von_neumann_entropy, DensityState, ExtReal, Label, Povm, ProbVector,
};
use obsentropy::linalg::{CMatrix, C64};

const LN2: f64 = std::f64::consts::LN_2;

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

fn qubit(p: f64) -> DensityState {
    DensityState::diagonal(&[p, 1.0 - p]).unwrap()
}

fn ket(d: usize, k: usize) -> DensityState {
    let mut v = vec![C64::new(0.0, 0.0); d];
    v[k] = C64::new(1.0, 0.0);
    DensityState::from_pure(v).unwrap()
}

#[test]
fn shannon_values() {
    close(shannon_entropy(&ProbVector::new(vec![1.0, 0.0, 0.0]).unwrap()), 0.0, 1e-15);
    close(shannon_entropy(&ProbVector::new(vec![0.5, 0.5]).unwrap()), LN2, 1e-15);
    close(shannon_entropy(&ProbVector::new(vec![0.75, 0.25]).unwrap()), 0.562335, 1e-6);
}

#[test]
fn von_neumann_values() {
    close(von_neumann_entropy(&ket(3, 0)), 0.0, 1e-12);
    close(von_neumann_entropy(&DensityState::maximally_mixed(4)), 4f64.ln(), 1e-12);
    close(von_neumann_entropy(&qubit(0.75)), 0.562335, 1e-6);
}

#[test]
fn relative_entropy_values() {
    let rho = qubit(0.75);
    close(relative_entropy(&rho, &rho).unwrap().to_f64(), 0.0, 1e-12);
    let d = relative_entropy(&rho, &DensityState::maximally_mixed(2)).unwrap().to_f64();
    close(d, 0.130812, 1e-6);
    close(d, 0.75 * 1.5f64.ln() + 0.25 * 0.5f64.ln(), 1e-14);
    assert_eq!(relative_entropy(&ket(2, 0), &ket(2, 1)).unwrap(), ExtReal::PosInf);
}

#[test]
fn relative_entropy_support_threshold() {
    // σ's smallest eigenvalue below 1e-12·max counts as kernel.
    let sigma = DensityState::diagonal(&[1.0 - 1e-14, 1e-14]).unwrap();
    assert_eq!(relative_entropy(&qubit(0.5), &sigma).unwrap(), ExtReal::PosInf);
    // Weight of at most 1e-9 in the kernel is ignored.
    let rho = DensityState::diagonal(&[1.0 - 1e-10, 1e-10]).unwrap();
    assert!(relative_entropy(&rho, &sigma).unwrap().is_finite());
}

#[test]
fn cross_entropy_values() {
    let rho = qubit(0.75);
    close(cross_entropy(&rho, &rho).unwrap().to_f64(), 0.562335, 1e-6);
    close(cross_entropy(&rho, &DensityState::maximally_mixed(2)).unwrap().to_f64(), LN2, 1e-12);
    close(cross_entropy(&qubit(0.9), &qubit(0.5)).unwrap().to_f64(), LN2, 1e-12);
    assert_eq!(cross_entropy(&ket(2, 0), &ket(2, 1)).unwrap(), ExtReal::PosInf);
}

#[test]
fn measure_values() {
    let rho = qubit(0.75);
    assert_eq!(measure(&Povm::trivial(2), &rho).unwrap().as_slice(), &[1.0]);
    let p = measure(&Povm::basis(2), &rho).unwrap();
    close(p.as_slice()[0], 0.75, 1e-15);
    close(p.as_slice()[1], 0.25, 1e-15);
    let half = CMatrix::identity(2).scale(0.5);
    let m = Povm::new(vec![half.clone(), half], vec![Label::Index(0), Label::Index(1)]).unwrap();
    let p = measure(&m, &ket(2, 1)).unwrap();
    close(p.as_slice()[0], 0.5, 1e-15);
}

#[test]
fn invalid_povm_rejected() {
    let m = Povm::new(vec![CMatrix::identity(2).scale(0.5)], vec![Label::Index(0)]);
    assert!(m.is_err());
}

#[test]
fn measured_relative_entropy_values() {
    let (rho, mix) = (qubit(0.75), DensityState::maximally_mixed(2));
    close(measured_relative_entropy(&Povm::trivial(2), &rho, &mix).unwrap().to_f64(), 0.0, 1e-15);
    close(measured_relative_entropy(&Povm::basis(2), &rho, &mix).unwrap().to_f64(), 0.130812, 1e-6);
    // X basis cannot tell diagonal states apart.
    let s = 0.5f64.sqrt();
    let u = CMatrix::from_real_rows(&[vec![s, s], vec![s, -s]]);
    let mx = Povm::from_unitary(&u).unwrap();
    close(measured_relative_entropy(&mx, &rho, &mix).unwrap().to_f64(), 0.0, 1e-14);
}

#[test]
fn observational_entropy_values() {
    let rho = qubit(0.75);
    let mix = DensityState::maximally_mixed(2);
    let r = observational_entropy(&Povm::basis(2), &mix, &rho).unwrap();
    close(r.s_oe.to_f64(), 0.562335, 1e-6);
    close(r.s_oe.to_f64(), LN2 - 0.130812, 1e-6);
    close(r.s_oe.to_f64(), von_neumann_entropy(&rho), 1e-12);
    close(r.s_tau, LN2, 1e-14);
    close(r.volumes[0], 1.0, 1e-12);

    let tau = qubit(0.9);
    let r = observational_entropy(&Povm::trivial(2), &tau, &rho).unwrap();
    close(r.s_oe.to_f64(), von_neumann_entropy(&tau), 1e-14);
}

#[test]
fn observational_entropy_zero_volume_is_neg_inf() {
    let tau = DensityState::diagonal(&[1.0, 0.0]).unwrap();
    let r = observational_entropy(&Povm::basis(2), &tau, &qubit(0.5)).unwrap();
    assert_eq!(r.s_oe, ExtReal::NegInf);
}

#[test]
fn traditional_values() {
    close(traditional_oe(&Povm::basis(3), &ket(3, 2)).unwrap(), 0.0, 1e-14);
    let m = Povm::new_diagonal(
        vec![vec![1.0, 1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, 1.0]],
        vec![Label::Index(0), Label::Index(1)],
    )
    .unwrap();
    close(traditional_oe(&m, &DensityState::maximally_mixed(4)).unwrap(), 4f64.ln(), 1e-14);
    // ρ inside a rank-k macrostate: ln k.
    let k = 3;
    let m = Povm::new_diagonal(
        vec![vec![1.0, 1.0, 1.0, 0.0, 0.0], vec![0.0, 0.0, 0.0, 1.0, 1.0]],
        vec![Label::Index(0), Label::Index(1)],
    )
    .unwrap();
    let rho = DensityState::diagonal(&[0.2, 0.5, 0.3, 0.0, 0.0]).unwrap();
    close(traditional_oe(&m, &rho).unwrap(), (k as f64).ln(), 1e-14);
}

#[test]
fn renyi_values() {
    let rho = qubit(0.75);
    let mix = DensityState::maximally_mixed(2);
    let m = Povm::basis(2);
    close(renyi_oe(&m, &mix, &rho, 2.0).unwrap().to_f64(), 0.470004, 1e-6);
    close(renyi_oe(&m, &mix, &rho, 2.0).unwrap().to_f64(), LN2 - 1.25f64.ln(), 1e-14);
    for alpha in [0.3, 0.5, 2.0, 7.0] {
        close(renyi_oe(&m, &mix, &mix, alpha).unwrap().to_f64(), LN2, 1e-14);
    }
    let tau = DensityState::diagonal(&[1.0, 0.0]).unwrap();
    assert_eq!(renyi_oe(&m, &tau, &rho, 2.0).unwrap(), ExtReal::NegInf);
}

#[test]
fn kl_support() {
    assert_eq!(kl_divergence(&[0.5, 0.5], &[1.0, 0.0]).unwrap(), ExtReal::PosInf);
    close(kl_divergence(&[1.0, 0.0], &[0.5, 0.5]).unwrap().to_f64(), LN2, 1e-15);
}

#[test]
fn ext_real_serializes_as_tokens() {
    assert_eq!(serde_json::to_string(&ExtReal::PosInf).unwrap(), "\"inf\"");
    assert_eq!(serde_json::to_string(&ExtReal::NegInf).unwrap(), "\"-inf\"");
    assert_eq!(serde_json::to_string(&ExtReal::Finite(0.5)).unwrap(), "0.5");
}
