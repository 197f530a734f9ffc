use obsentropy::entropy::DensityState;
use obsentropy::linalg::{pauli_x, pauli_z};
use obsentropy::rmt::{
    build_banded_interaction, coupling_constant, evolve_spectral, product_energies, rabi_excited_population, RmtParams,
    RmtSystem,
};
use obsentropy::rng::stream;

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

fn small() -> RmtParams {
    RmtParams { d_a: 8, d_b: 8, ..RmtParams::default() }
}

#[test]
fn coupling_constant_values() {
    close(coupling_constant(5.2, 140, 0.5), 0.0193142, 1e-7);
    let p = RmtParams::default();
    close(p.lambda(), 5.2 * 5.2 / 400.0, 1e-15);
    close(p.time_scale(), 1.0 / (50.0 * p.lambda()), 1e-15);
    let fixed = RmtParams { coupling: Some(0.01), ..RmtParams::default() };
    close(fixed.lambda(), 0.01, 0.0);
}

#[test]
fn rabi_oscillation() {
    let (omega, g) = (1.3, 0.4);
    let h = &pauli_z().scale(omega / 2.0) + &pauli_x().scale(g);
    let spec = h.eigh().unwrap();
    let rho0 = DensityState::diagonal(&[1.0, 0.0]).unwrap();
    for t in [0.0, 0.5, 1.7, 6.0, 20.0] {
        let rho = evolve_spectral(&spec, &rho0, t).unwrap();
        close(rho.diag()[1], rabi_excited_population(omega, g, t), 1e-12);
    }
    // Resonant case: full transfer at t = π/(2g).
    close(rabi_excited_population(0.0, g, std::f64::consts::PI / (2.0 * g)), 1.0, 1e-15);
}

#[test]
fn evolution_is_unitary() {
    let sys = RmtSystem::build(&small()).unwrap();
    let psi = sys.initial_state();
    let rho0 = DensityState::from_pure(psi.clone()).unwrap();
    let e0 = rho0.expectation(&sys.h_total);
    let rho = sys.evolve(&rho0, 37.0).unwrap();
    close(rho.expectation(&sys.h_total), e0, 1e-10);
    close(rho.purity(), 1.0, 1e-10);
    let back = sys.evolve(&rho, -37.0).unwrap();
    assert!(back.matrix().max_abs_diff(rho0.matrix()) < 1e-10);
    // Pure and mixed paths agree.
    let a = evolve_spectral(&sys.spectrum, &rho0, 3.0).unwrap();
    let b = sys.evolve(&rho0, 3.0).unwrap();
    assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-9);
}

#[test]
fn hot_a_cold_b_initially() {
    let sys = RmtSystem::build(&RmtParams { d_a: 16, d_b: 16, ..RmtParams::default() }).unwrap();
    let psi = sys.initial_state();
    let pops: Vec<f64> = psi.iter().map(|z| z.norm_sqr()).collect();
    close(pops.iter().sum::<f64>(), 1.0, 1e-12);
    let (ea, eb) = sys.local_energies(&pops);
    assert!(ea > eb + 0.5, "⟨H_A⟩ = {ea}, ⟨H_B⟩ = {eb}");
}

#[test]
fn build_is_deterministic() {
    let a = RmtSystem::build(&small()).unwrap();
    let b = RmtSystem::build(&small()).unwrap();
    assert_eq!(a.h_total.max_abs_diff(&b.h_total), 0.0);
    assert_eq!(a.initial_state(), b.initial_state());
    let c = RmtSystem::build(&RmtParams { seed: 2, ..small() }).unwrap();
    assert!(a.h_total.max_abs_diff(&c.h_total) > 0.0);
}

#[test]
fn system_structure() {
    let sys = RmtSystem::build(&small()).unwrap();
    assert_eq!(sys.dim(), 64);
    assert_eq!(sys.h0_a, sys.h0_b);
    assert!(sys.h0_a.windows(2).all(|w| w[0] <= w[1]));
    assert!(sys.h_total.hermiticity_defect() < 1e-14);
    assert!(sys.joint.is_projective(1e-12));
    let n_a = sys.one_sided.len();
    assert_eq!(sys.joint.len(), n_a * n_a);
    let rebuilt = sys.spectrum.reconstruct();
    assert!(rebuilt.max_abs_diff(&sys.h_total) < 1e-12);
}

#[test]
fn banded_interaction_variance() {
    let n = 240;
    let e: Vec<f64> = (0..n).map(|i| i as f64 * 0.05).collect();
    let (band, dv) = (0.5, 0.3);
    let mut rng = stream(7, "interaction");
    let v = build_banded_interaction(&e, band, dv, &mut rng);
    assert!(v.hermiticity_defect() == 0.0);
    let (mut inside, mut n_in, mut far, mut n_far) = (0.0, 0, 0.0, 0);
    for i in 0..n {
        assert_eq!(v.get(i, i).im, 0.0);
        for j in 0..n {
            let gap = (e[i] - e[j]).abs();
            let w = v.get(i, j).norm_sqr();
            if gap <= band {
                inside += w;
                n_in += 1;
            } else if gap > 3.0 * band {
                far += w;
                n_far += 1;
            }
        }
    }
    let inside = inside / n_in as f64;
    let far = far / n_far as f64;
    // About 10⁴ in-band entries, so the sample mean is good to a few percent.
    close(inside / (dv * dv), 1.0, 0.05);
    assert!(far < 1e-3 * dv * dv, "off-band variance {far:e}");
}

#[test]
fn product_energy_order() {
    assert_eq!(product_energies(&[0.0, 1.0], &[0.0, 0.5, 2.0]), vec![0.0, 0.5, 2.0, 1.0, 1.5, 3.0]);
}

#[test]
fn parameter_validation() {
    assert!(RmtSystem::build(&RmtParams { d_a: 1, ..small() }).is_err());
    assert!(RmtSystem::build(&RmtParams { d_a: 80, d_b: 80, ..RmtParams::default() }).is_err());
    assert!(RmtSystem::build(&RmtParams { delta_v: 0.0, ..small() }).is_err());
    assert!(RmtSystem::build(&RmtParams { coupling: Some(-1.0), ..small() }).is_err());
}

#[test]
fn log_grid_endpoints() {
    let p = RmtParams::default();
    let g = p.log_grid();
    assert_eq!(g.len(), p.n_times);
    assert_eq!(g[0], 0.0);
    close(g[g.len() - 1], p.t_max * p.time_scale(), 1e-9 * p.t_max * p.time_scale());
    assert!(g.windows(2).all(|w| w[0] < w[1]));
    let u = p.uniform_grid();
    close(u[u.len() - 1], p.avg_span * p.time_scale(), 1e-9);
}
