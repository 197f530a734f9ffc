use proptest::prelude::*;

use obsentropy::config::{Experiment, RunConfig};
use obsentropy::entropy::{
    measure, measured_relative_entropy, observational_entropy, relative_entropy, von_neumann_entropy, DensityState,
    ExtReal,
};
use obsentropy::equilibration::master_equation_entropy;
use obsentropy::gas::{GasState, Simulator};
use obsentropy::linalg::CMatrix;
use obsentropy::maxent::solve_beta;
use obsentropy::measurements::{coarse_energy_povm, postprocess, tensor, EnergyWindowSpec};
use obsentropy::recovery::{recovery_gap, smeared_coarse_state};
use obsentropy::rng::stream;
use obsentropy::sampling::{random_density, random_povm, random_stochastic, random_unitary};
use obsentropy::series::{EntropyRecord, EntropySeries};

fn state(d: usize, seed: u64, tag: &str) -> DensityState {
    let mut rng = stream(seed, tag);
    random_density(d, d, &mut rng).unwrap()
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn oe_between_von_neumann_and_prior(d in 2usize..6, m in 2usize..6, seed: u64) {
        let rho = state(d, seed, "rho");
        let povm = random_povm(d, m, &mut stream(seed, "povm")).unwrap();
        let tau = DensityState::maximally_mixed(d);
        let s = observational_entropy(&povm, &tau, &rho).unwrap().s_oe.to_f64();
        prop_assert!(von_neumann_entropy(&rho) <= s + 1e-9);
        prop_assert!(s <= (d as f64).ln() + 1e-9);
    }

    #[test]
    fn measured_divergence_below_quantum(d in 2usize..6, m in 2usize..6, seed: u64) {
        let (rho, sigma) = (state(d, seed, "rho"), state(d, seed, "sigma"));
        let povm = random_povm(d, m, &mut stream(seed, "povm")).unwrap();
        let dm = measured_relative_entropy(&povm, &rho, &sigma).unwrap();
        let dq = relative_entropy(&rho, &sigma).unwrap();
        prop_assert!(dm.to_f64() >= -1e-12);
        prop_assert!(dm.le_tol(dq, 1e-9));
    }

    #[test]
    fn postprocessing_never_increases_divergence(d in 2usize..5, m in 2usize..6, k in 1usize..5, seed: u64) {
        let (rho, sigma) = (state(d, seed, "rho"), state(d, seed, "sigma"));
        let mut rng = stream(seed, "povm");
        let povm = random_povm(d, m, &mut rng).unwrap();
        let lam = random_stochastic(k, m, &mut rng).unwrap();
        let coarse = postprocess(&lam, &povm).unwrap();
        let fine = measured_relative_entropy(&povm, &rho, &sigma).unwrap();
        prop_assert!(measured_relative_entropy(&coarse, &rho, &sigma).unwrap().le_tol(fine, 1e-10));
        let p = measure(&povm, &rho).unwrap();
        let q = measure(&coarse, &rho).unwrap();
        for (a, b) in lam.apply(p.as_slice()).iter().zip(q.as_slice()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn oe_unitarily_invariant(d in 2usize..5, m in 2usize..5, seed: u64) {
        let (rho, tau) = (state(d, seed, "rho"), state(d, seed, "tau"));
        let povm = random_povm(d, m, &mut stream(seed, "povm")).unwrap();
        let u = random_unitary(d, &mut stream(seed, "haar"));
        let rotated = obsentropy::entropy::Povm::new(
            (0..povm.len()).map(|x| u.matmul(&povm.effect_matrix(x)).matmul(&u.adjoint())).collect(),
            povm.labels().to_vec(),
        ).unwrap();
        let a = observational_entropy(&povm, &tau, &rho).unwrap().s_oe.to_f64();
        let b = observational_entropy(&rotated, &tau.conjugate_by(&u).unwrap(), &rho.conjugate_by(&u).unwrap())
            .unwrap().s_oe.to_f64();
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn oe_additive_on_products(d1 in 2usize..4, d2 in 2usize..4, seed: u64) {
        let (r1, r2) = (state(d1, seed, "r1"), state(d2, seed, "r2"));
        let (t1, t2) = (state(d1, seed, "t1"), state(d2, seed, "t2"));
        let mut rng = stream(seed, "povm");
        let (m1, m2) = (random_povm(d1, 3, &mut rng).unwrap(), random_povm(d2, 2, &mut rng).unwrap());
        let prod = |a: &DensityState, b: &DensityState| DensityState::new(CMatrix::kron(a.matrix(), b.matrix())).unwrap();
        let joint = observational_entropy(&tensor(&m1, &m2).unwrap(), &prod(&t1, &t2), &prod(&r1, &r2)).unwrap();
        let a = observational_entropy(&m1, &t1, &r1).unwrap().s_oe.to_f64();
        let b = observational_entropy(&m2, &t2, &r2).unwrap().s_oe.to_f64();
        prop_assert!((joint.s_oe.to_f64() - a - b).abs() < 1e-9);
    }

    #[test]
    fn canonical_solver_hits_target(energies in prop::collection::vec(-5.0f64..5.0, 2..12), frac in 0.01f64..0.99) {
        let lo = energies.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = energies.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assume!(hi - lo > 1e-3);
        let target = lo + frac * (hi - lo);
        let beta = solve_beta(&energies, target).unwrap();
        let w: Vec<f64> = energies.iter().map(|e| (-beta * (e - if beta >= 0.0 { lo } else { hi })).exp()).collect();
        let z: f64 = w.iter().sum();
        let mean: f64 = w.iter().zip(&energies).map(|(a, e)| a * e).sum::<f64>() / z;
        prop_assert!((mean - target).abs() < 1e-8 * (hi - lo).max(1.0));
    }

    #[test]
    fn energy_windows_partition(energies in prop::collection::vec(-3.0f64..3.0, 1..10), de in 0.05f64..4.0) {
        let m = coarse_energy_povm(&EnergyWindowSpec::new(CMatrix::from_diag(&energies), de)).unwrap();
        prop_assert!(m.is_projective(1e-12));
        let ranks: f64 = m.traces().iter().sum();
        prop_assert!((ranks - energies.len() as f64).abs() < 1e-12);
    }

    #[test]
    fn smeared_state_is_density_and_gap_holds(d in 2usize..5, m in 2usize..5, seed: u64) {
        let rho = state(d, seed, "rho");
        let povm = random_povm(d, m, &mut stream(seed, "povm")).unwrap();
        let tau = DensityState::maximally_mixed(d);
        let p = measure(&povm, &rho).unwrap();
        let tilde = smeared_coarse_state(&povm, &tau, &p).unwrap();
        prop_assert!((tilde.matrix().trace().re - 1.0).abs() < 1e-10);
        prop_assert!(tilde.eigenvalues().iter().all(|&v| v > -1e-10));
        let gap = recovery_gap(&povm, &tau, &rho, &[]).unwrap();
        prop_assert!(gap.holds(1e-8), "lhs {} rhs {:?}", gap.lhs, gap.rhs);
    }

    #[test]
    fn master_equation_divergence_decreases(n in 2usize..6, seed: u64) {
        let mut rng = stream(seed, "rates");
        let (r, q) = obsentropy::checks::random_detailed_balance(n, &mut rng);
        let p0 = obsentropy::sampling::random_probs(n, &mut rng);
        let grid: Vec<f64> = (0..30).map(|k| 0.2 * k as f64).collect();
        let me = master_equation_entropy(&r, &q, &p0, &grid).unwrap();
        for w in me.divergence.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
        for (a, b) in me.dsdt_flux.iter().zip(&me.dsdt_pairs) {
            prop_assert!(*a >= -1e-12);
            prop_assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0));
        }
    }

    #[test]
    fn disk_collisions_conserve(vx in -2.0f64..2.0, vy in -2.0f64..2.0, ux in -2.0f64..2.0, uy in -2.0f64..2.0) {
        let state = GasState { pos: vec![[0.3, 0.4], [0.6, 0.55]], vel: vec![[vx, vy], [ux, uy]], time: 0.0 };
        let (e0, p0) = (state.kinetic_energy(1.0), state.momentum(1.0));
        let mut sim = Simulator::new(state, 0.05, 1.0, true).unwrap();
        sim.advance_to(3.0).unwrap();
        let s = sim.state();
        prop_assert!((s.kinetic_energy(1.0) - e0).abs() < 1e-12 * e0.max(1.0));
        prop_assert!(s.min_pair_distance() >= 0.1 - 1e-9);
        prop_assert!(s.max_wall_violation(0.05, 1.0) <= 1e-12);
        // Momentum changes only at walls, so it is conserved when none occur.
        if sim.stats().wall_collisions == 0 {
            let p = s.momentum(1.0);
            prop_assert!((p[0] - p0[0]).abs() < 1e-12 && (p[1] - p0[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_round_trip(rows in prop::collection::vec(("[a-z_]{1,12}", -1e6f64..1e6, 0u8..3), 0..20)) {
        let mut series = EntropySeries::new();
        for (k, (label, v, kind)) in rows.iter().enumerate() {
            let s = match kind { 0 => ExtReal::Finite(*v), 1 => ExtReal::PosInf, _ => ExtReal::NegInf };
            series.push(EntropyRecord {
                t: k as f64 * 0.1, label: label.clone(), s_oe: s, s_traditional: ExtReal::Finite(-v),
                s_tau: v.abs(), e_a: *v, e_b: 1.0 / (1.0 + v.abs()), probs: None,
            });
        }
        prop_assert_eq!(EntropySeries::from_csv(&series.to_csv()).unwrap(), series);
    }

    #[test]
    fn config_text_round_trip(seed: u64, d_a in 2usize..60, n in 2usize..800, which in 0u8..4) {
        let exp = [Experiment::Rmt, Experiment::Gas, Experiment::EntropyEval, Experiment::Check][which as usize];
        let mut cfg = RunConfig::new(exp);
        cfg.seed = seed;
        cfg.rmt.d_a = d_a;
        cfg.gas.params.n = n;
        let back = RunConfig::parse(&cfg.to_text()).unwrap();
        prop_assert_eq!(back.to_text(), cfg.to_text());
    }
}
