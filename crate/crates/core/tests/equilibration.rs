use obsentropy::entropy::{DensityState, ExtReal, Povm};
use obsentropy::equilibration::{
    bound_from_purity, continuity_check, delta_statistics, ep_clausius_check, fluctuation_term, g_eps,
    master_equation_entropy, open_system_bound_check, tail_table, temperature_equilibration, TemperatureParams,
};
use obsentropy::linalg::{pauli_x, CMatrix};
use obsentropy::maxent::uniform_prior;
use obsentropy::series::{EntropyRecord, EntropySeries};

const LN2: f64 = std::f64::consts::LN_2;

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

fn record(t: f64, label: &str, s: f64, s_tau: f64, e_a: f64, e_b: f64) -> EntropyRecord {
    EntropyRecord {
        t,
        label: label.into(),
        s_oe: ExtReal::Finite(s),
        s_traditional: ExtReal::Finite(s),
        s_tau,
        e_a,
        e_b,
        probs: None,
    }
}

#[test]
fn purity_bound_example() {
    // m = 4, d₂ = 10⁶: ε = 10⁻³.
    close(bound_from_purity(4, 1e-6), 0.009295, 1e-6);
    close(g_eps(1e-3), -1e-3 * 1e-3f64.ln() + 1.001 * 1.001f64.ln(), 1e-15);
    assert_eq!(g_eps(0.0), 0.0);
}

#[test]
fn two_state_master_equation() {
    let (a, b) = (0.3, 0.7);
    let r = vec![vec![-a, b], vec![a, -b]];
    let q = [b / (a + b), a / (a + b)];
    let grid: Vec<f64> = (0..=400).map(|k| 0.01 * k as f64).collect();
    let me = master_equation_entropy(&r, &q, &[1.0, 0.0], &grid).unwrap();
    // Production is infinite while p sits on the boundary.
    assert_eq!(me.dsdt_flux[0], f64::INFINITY);
    assert_eq!(me.dsdt_pairs[0], f64::INFINITY);
    for (k, &t) in grid.iter().enumerate() {
        let p0 = q[0] + (1.0 - q[0]) * (-(a + b) * t).exp();
        close(me.p[k][0], p0, 1e-12);
        if k > 0 {
            close(me.dsdt_flux[k], me.dsdt_pairs[k], 1e-10);
            assert!(me.dsdt_flux[k] >= -1e-15);
        }
    }
    // dD/dt = −flux, checked by central differences away from the
    // logarithmic slope at t = 0.
    for k in 20..grid.len() - 1 {
        let slope = (me.divergence[k + 1] - me.divergence[k - 1]) / 0.02;
        close(-slope, me.dsdt_flux[k], 5e-3 * me.dsdt_flux[k].max(1e-3));
    }
    close(me.p_inf[0], q[0], 1e-12);
    assert!(me.divergence.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn master_equation_rejects_bad_rates() {
    let q = [0.5, 0.5];
    assert!(master_equation_entropy(&[vec![-1.0, 1.0], vec![0.5, -1.0]], &q, &[1.0, 0.0], &[0.0]).is_err());
    assert!(master_equation_entropy(&[vec![-1.0, 2.0], vec![1.0, -2.0]], &q, &[1.0, 0.0], &[0.0]).is_err());
    assert!(master_equation_entropy(&[vec![-1.0, 1.0], vec![1.0, -1.0]], &[1.0, 0.0], &[1.0, 0.0], &[0.0]).is_err());
}

#[test]
fn synthetic_delta_series() {
    // D cycles through 0, 0.25, 0.5, 0.75, 1 for 60 samples: mean 0.5.
    let s_tau = 3.0;
    let mut series = EntropySeries::new();
    for k in 0..60 {
        series.push(record(k as f64, "x", s_tau - 0.25 * (k % 5) as f64, s_tau, 0.0, 0.0));
    }
    let rep = delta_statistics(&series, "x", s_tau).unwrap();
    assert_eq!(rep.samples, 60);
    close(rep.delta, 0.5, 1e-14);
    assert_eq!(rep.eq_term, None);
    // Thresholds 1, 2.5 and 5: only D = 1 reaches the first.
    close(rep.tail_table[0].delta, 1.0, 1e-14);
    close(rep.tail_table[0].fraction, 0.2, 1e-14);
    close(rep.tail_table[0].markov_bound, 0.5, 1e-14);
    assert_eq!(rep.tail_table[1].fraction, 0.0);

    let mut short = EntropySeries::new();
    for k in 0..49 {
        short.push(record(k as f64, "x", s_tau, s_tau, 0.0, 0.0));
    }
    assert!(delta_statistics(&short, "x", s_tau).is_err());
}

#[test]
fn delta_decomposition_with_distributions() {
    // p alternates between (1, 0) and (0, 1) against q = (½, ½): D(p‖q) = ln 2
    // always, all of it fluctuation.
    let mut series = EntropySeries::new();
    series.prior_probs.insert("x".into(), vec![0.5, 0.5]);
    for k in 0..50 {
        let mut r = record(k as f64, "x", 0.0, LN2, 0.0, 0.0);
        r.probs = Some(if k % 2 == 0 { vec![1.0, 0.0] } else { vec![0.0, 1.0] });
        series.push(r);
    }
    let rep = delta_statistics(&series, "x", LN2).unwrap();
    close(rep.delta, LN2, 1e-14);
    close(rep.eq_term.unwrap(), LN2, 1e-14);
    close(rep.to_tau_term.unwrap(), 0.0, 1e-14);
    let (pbar, fl) = fluctuation_term(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    assert_eq!(pbar, vec![0.5, 0.5]);
    close(fl, LN2, 1e-15);
}

#[test]
fn tail_table_zero_delta() {
    let rows = tail_table(&[0.0; 10], 0.0);
    assert!(rows.iter().all(|r| r.fraction == 0.0 && r.markov_bound == 0.0));
}

#[test]
fn clausius_for_exchange_at_fixed_total() {
    // d = 2, N_A = N_B = 10: T = E/10 and ∫dE/T = 10 ln(E_end/E_0).
    let n = 2001;
    let mut series = EntropySeries::new();
    for k in 0..n {
        let x = k as f64 / (n - 1) as f64;
        let e_a = 15.0 - 5.0 * x;
        series.push(record(x, "joint", x, 10.0, e_a, 20.0 - e_a));
    }
    let params = TemperatureParams { n_a: 10, n_b: 10, dim: 2, beta_inv: 1.0, joint_label: "joint".into() };
    let rep = temperature_equilibration(&series, &params).unwrap();
    let want = 10.0 * (10.0f64 / 15.0).ln() + 10.0 * (10.0f64 / 5.0).ln();
    close(rep.clausius, want, 1e-6);
    close(rep.clausius_halved, want, 4e-6);
    close(rep.delta_s, 1.0, 1e-15);
    close(rep.t_a[n - 1], 1.0, 1e-12);
    close(rep.t_b[0], 0.5, 1e-12);
}

#[test]
fn uncoupled_bath_produces_no_entropy() {
    let h_s = CMatrix::from_diag(&[0.0, 1.0]);
    let h_b = CMatrix::from_diag(&[0.0, 0.5, 1.3]);
    let v = CMatrix::zeros(6, 6);
    let rho_s = DensityState::from_pure(vec![0.6.into(), 0.8.into()]).unwrap();
    let grid: Vec<f64> = (0..11).map(|k| k as f64).collect();
    let ep = ep_clausius_check(&h_s, &h_b, &v, &rho_s, 1.2, &grid).unwrap();
    for k in 0..grid.len() {
        close(ep.clausius[k], 0.0, 1e-10);
        close(ep.relative[k], 0.0, 1e-10);
        close(ep.beta[k], 1.2, 1e-12);
    }
}

#[test]
fn coupled_bath_matches_relative_entropy() {
    let h_s = CMatrix::from_diag(&[0.0, 1.0]);
    let h_b = CMatrix::from_diag(&[0.0, 0.4, 0.9, 1.5]);
    // Weak exchange coupling σ_x ⊗ X_B with X_B real symmetric.
    let xb = CMatrix::from_real_rows(&[
        vec![0.0, 1.0, 0.3, 0.0],
        vec![1.0, 0.0, 0.5, 0.2],
        vec![0.3, 0.5, 0.0, 1.0],
        vec![0.0, 0.2, 1.0, 0.0],
    ]);
    let v = CMatrix::kron(&pauli_x(), &xb).scale(0.05);
    let rho_s = DensityState::diagonal(&[0.0, 1.0]).unwrap();
    let grid: Vec<f64> = (0..401).map(|k| 0.025 * k as f64).collect();
    let ep = ep_clausius_check(&h_s, &h_b, &v, &rho_s, 1.0, &grid).unwrap();
    let last = grid.len() - 1;
    assert!(ep.relative[last] > 1e-4);
    close(ep.clausius[last], ep.relative[last], 1e-3 * ep.relative[last].max(1e-3));
}

#[test]
fn open_system_bound_commuting_product() {
    let tau_s = DensityState::diagonal(&[0.6, 0.4]).unwrap();
    let tau_e = DensityState::diagonal(&[0.5, 0.3, 0.2]).unwrap();
    let rho_s = DensityState::diagonal(&[0.9, 0.1]).unwrap();
    let tau_se = DensityState::new(CMatrix::kron(tau_s.matrix(), tau_e.matrix())).unwrap();
    let rho_se = DensityState::new(CMatrix::kron(rho_s.matrix(), tau_e.matrix())).unwrap();
    let chk = open_system_bound_check(&Povm::basis(2), &tau_se, &rho_se, 2, 3).unwrap();
    close(chk.lhs, chk.rhs.to_f64(), 1e-12);
    assert!(chk.holds(1e-12));
}

#[test]
fn continuity_examples() {
    let prior = uniform_prior(3);
    let rho = DensityState::diagonal(&[0.7, 0.2, 0.1]).unwrap();
    let same = continuity_check(&Povm::basis(3), &prior, &rho, &rho).unwrap();
    close(same.lhs, 0.0, 1e-15);
    close(same.trace_distance, 0.0, 1e-12);
    let sigma = DensityState::diagonal(&[0.2, 0.3, 0.5]).unwrap();
    let c = continuity_check(&Povm::basis(3), &prior, &rho, &sigma).unwrap();
    close(c.trace_distance, 0.5, 1e-12);
    assert_eq!(c.outcomes, 3);
    close(c.max_log_volume, 0.0, 1e-15);
    // h(½) + ½ ln 3.
    close(c.rhs, LN2 + 0.5 * 3f64.ln(), 1e-12);
    assert!(c.lhs <= c.rhs);
}
