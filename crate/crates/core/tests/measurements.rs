use obsentropy::entropy::{measure, measured_relative_entropy, DensityState, Label, Povm};
use obsentropy::linalg::CMatrix;
use obsentropy::measurements::{
    bin_spectrum, coarse_energy_povm, disjoint_combine, lueders_sequence, mix_povms, one_sided, postprocess, tensor,
    window_index, EnergyWindowSpec, StochasticMap,
};

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

fn ranks(m: &Povm) -> Vec<usize> {
    m.traces().iter().map(|t| t.round() as usize).collect()
}

#[test]
fn energy_windows_bin_the_spectrum() {
    let h = CMatrix::from_diag(&[0.0, 0.3, 0.9, 1.0]);
    let m = coarse_energy_povm(&EnergyWindowSpec::new(h, 0.5)).unwrap();
    assert_eq!(ranks(&m), vec![2, 1, 1]);
    assert!(m.is_projective(1e-12));
    assert_eq!(m.labels(), &[Label::Value(0.25), Label::Value(0.75), Label::Value(1.25)]);
}

#[test]
fn window_edges_are_half_open() {
    assert_eq!(window_index(1.0, 0.5, 0.0), 2);
    assert_eq!(window_index(0.999, 0.5, 0.0), 1);
    assert_eq!(window_index(0.0, 0.5, 0.0), 0);
    assert_eq!(window_index(-0.1, 0.5, 0.0), -1);
    let bins = bin_spectrum(&[0.1, 2.2, 0.2], 1.0, 0.0);
    assert_eq!(bins, vec![(0, vec![0, 2]), (2, vec![1])]);
}

#[test]
fn wide_window_is_trivial() {
    let h = CMatrix::from_diag(&[0.0, 0.3, 0.9, 1.0]);
    let m = coarse_energy_povm(&EnergyWindowSpec::new(h, 5.0)).unwrap();
    assert_eq!(ranks(&m), vec![4]);
}

#[test]
fn energy_windows_of_rotated_hamiltonian() {
    let s = 0.5f64.sqrt();
    let u = CMatrix::from_real_rows(&[vec![s, s, 0.0], vec![s, -s, 0.0], vec![0.0, 0.0, 1.0]]);
    let h = u.matmul(&CMatrix::from_diag(&[0.1, 0.2, 1.4])).matmul(&u.adjoint());
    let m = coarse_energy_povm(&EnergyWindowSpec::new(h, 1.0)).unwrap();
    assert_eq!(ranks(&m), vec![2, 1]);
    let p0 = m.effect_matrix(0);
    assert!(p0.matmul(&p0).max_abs_diff(&p0) < 1e-12);
    assert!(p0.max_abs_diff(&CMatrix::from_diag(&[1.0, 1.0, 0.0])) < 1e-12);
}

#[test]
fn bad_window_width_rejected() {
    assert!(coarse_energy_povm(&EnergyWindowSpec::new(CMatrix::identity(2), 0.0)).is_err());
    assert!(coarse_energy_povm(&EnergyWindowSpec::new(CMatrix::identity(2), f64::NAN)).is_err());
}

#[test]
fn tensor_product_outcomes() {
    let m = tensor(&Povm::basis(2), &Povm::basis(3)).unwrap();
    assert_eq!(m.len(), 6);
    assert_eq!(m.dim(), 6);
    assert_eq!(m.labels()[4], Label::pair(Label::Index(1), Label::Index(1)));
    let rho = DensityState::diagonal(&[0.1, 0.2, 0.3, 0.05, 0.15, 0.2]).unwrap();
    close(measure(&m, &rho).unwrap().as_slice()[3], 0.05, 1e-15);
}

#[test]
fn one_sided_keeps_marginal() {
    let m = one_sided(&Povm::basis(2), 3).unwrap();
    assert_eq!(m.len(), 2);
    assert_eq!(ranks(&m), vec![3, 3]);
    let rho = DensityState::diagonal(&[0.1, 0.2, 0.3, 0.05, 0.15, 0.2]).unwrap();
    close(measure(&m, &rho).unwrap().as_slice()[0], 0.6, 1e-14);
}

#[test]
fn postprocessing_merges_outcomes() {
    let lam = StochasticMap::new(vec![vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
    let m = postprocess(&lam, &Povm::basis(3)).unwrap();
    assert_eq!(ranks(&m), vec![2, 1]);
    let rho = DensityState::diagonal(&[0.2, 0.3, 0.5]).unwrap();
    let p = measure(&m, &rho).unwrap();
    close(p.as_slice()[0], 0.5, 1e-15);
    assert_eq!(lam.apply(&[0.2, 0.3, 0.5]), vec![0.5, 0.5]);
    // Coarser statistics cannot separate states better.
    let sigma = DensityState::diagonal(&[0.6, 0.1, 0.3]).unwrap();
    let fine = measured_relative_entropy(&Povm::basis(3), &rho, &sigma).unwrap().to_f64();
    let coarse = measured_relative_entropy(&m, &rho, &sigma).unwrap().to_f64();
    assert!(coarse <= fine);
    close(coarse, 0.5 * (0.5f64 / 0.7).ln() + 0.5 * (0.5f64 / 0.3).ln(), 1e-14);
}

#[test]
fn stochastic_map_validation() {
    assert!(StochasticMap::new(vec![vec![0.5, 1.0], vec![0.4, 0.0]]).is_err());
    assert!(StochasticMap::new(vec![vec![1.5], vec![-0.5]]).is_err());
    assert!(StochasticMap::new(vec![]).is_err());
    let id = StochasticMap::identity(3);
    assert_eq!(id.apply(&[0.2, 0.3, 0.5]), vec![0.2, 0.3, 0.5]);
}

#[test]
fn disjoint_combination_of_trivial() {
    let m = disjoint_combine(0.5, &Povm::trivial(2), &Povm::trivial(2)).unwrap();
    assert_eq!(m.len(), 2);
    let half = CMatrix::identity(2).scale(0.5);
    assert!(m.effect_matrix(0).max_abs_diff(&half) < 1e-15);
    assert!(m.effect_matrix(1).max_abs_diff(&half) < 1e-15);
    assert_eq!(m.labels()[1], Label::pair(Label::Index(1), Label::Index(0)));
    assert!(disjoint_combine(1.5, &Povm::trivial(2), &Povm::trivial(2)).is_err());
}

#[test]
fn mixing_povms() {
    let s = 0.5f64.sqrt();
    let x = Povm::from_unitary(&CMatrix::from_real_rows(&[vec![s, s], vec![s, -s]])).unwrap();
    let m = mix_povms(&[0.5, 0.5], &[Povm::basis(2), x]).unwrap();
    let e0 = m.effect_matrix(0);
    close(e0.get(0, 0).re, 0.75, 1e-15);
    close(e0.get(0, 1).re, 0.25, 1e-15);
}

#[test]
fn lueders_sequence_z_then_x() {
    let s = 0.5f64.sqrt();
    let x = Povm::from_unitary(&CMatrix::from_real_rows(&[vec![s, s], vec![s, -s]])).unwrap();
    let m = lueders_sequence(&Povm::basis(2), &x).unwrap();
    assert_eq!(m.len(), 4);
    let rho = DensityState::diagonal(&[0.8, 0.2]).unwrap();
    let p = measure(&m, &rho).unwrap();
    for (k, want) in [0.4, 0.4, 0.1, 0.1].iter().enumerate() {
        close(p.as_slice()[k], *want, 1e-14);
    }
    let noisy = mix_povms(&[0.5, 0.5], &[Povm::basis(2), Povm::basis(2)]).unwrap();
    assert!(lueders_sequence(&Povm::basis(2), &disjoint_combine(0.5, &noisy, &noisy).unwrap()).is_err());
}
