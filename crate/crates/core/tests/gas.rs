use obsentropy::gas::{
    exact_type_log_prob, generate_ic, pair_collision_time, reference_distribution, sackur_tetrode, sanov_entropy,
    sanov_mixing, thermal_wavelength_pm, thermo_entropy_joint, thermo_entropy_single, CgKind, GasParams, GasState,
    InitialCondition, Simulator, SingleParticleCg,
};

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

#[test]
fn thermal_wavelength_and_sackur_tetrode() {
    // ħc √(2π / (m c² k T)) for 30 GeV and 25 meV.
    let lam = thermal_wavelength_pm(30.0, 25.0);
    close(lam, 197_326.980_4 * (2.0 * std::f64::consts::PI / (30e9 * 25e-3)).sqrt(), 1e-9);
    close(lam, 18.0611, 1e-4);
    close(thermal_wavelength_pm(120.0, 25.0), lam / 2.0, 1e-12);
    let st = sackur_tetrode(&GasParams::default());
    close(st.per_particle, 8.8048, 1e-4);
    close(st.standard, 500.0 * st.per_particle, 1e-9);
    // Stirling and exact ln N! differ by ½ln(2πN).
    close(st.stirling - st.exact, 0.5 * (2.0 * std::f64::consts::PI * 500.0).ln(), 1e-3);
    // The √e-per-dimension form omits the +N that N! contributes.
    close(st.stirling - st.standard, 500.0, 1e-8);
}

#[test]
fn sanov_four_particle_example() {
    // Counts (3, 1) against a fair coin.
    let lnp = exact_type_log_prob(&[3, 1], &[0.5, 0.5]);
    close(-lnp, 1.386294, 1e-6);
    let s = sanov_entropy(&[0.75, 0.25], &[0.5, 0.5], 4, 0.0, 0.0).unwrap().to_f64();
    close(-s, 0.523248, 1e-6);
    close(sanov_mixing(&[0.75, 0.25], &[0.5, 0.5], 0.0), 0.0, 0.0);
    // A meta-bin of width 0.2 pulls P* to within 0.1 of Q.
    close(sanov_mixing(&[0.75, 0.25], &[0.5, 0.5], 0.2), 0.4, 1e-15);
    assert!(sanov_entropy(&[0.5, 0.5], &[1.0, 0.0], 4, 0.0, 0.0).is_err());
}

#[test]
fn pair_collision_time_matches_scan() {
    let cases = [
        ([1.0, 0.0], [-1.0, 0.0], 0.2),
        ([0.5, 0.3], [-0.7, -0.5], 0.1),
        ([-0.4, 0.9], [0.3, -1.1], 0.25),
    ];
    for (dr, dv, sigma) in cases {
        let t = pair_collision_time(dr, dv, sigma).unwrap();
        let gap = |t: f64| ((dr[0] + dv[0] * t).powi(2) + (dr[1] + dv[1] * t).powi(2)).sqrt() - sigma;
        // First sign change of the gap on a fine grid, then bisection.
        let (mut lo, mut hi) = (0.0, 0.0);
        let h = 1e-4;
        for k in 1..200_000 {
            if gap(k as f64 * h) <= 0.0 {
                (lo, hi) = ((k - 1) as f64 * h, k as f64 * h);
                break;
            }
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if gap(mid) > 0.0 { lo = mid } else { hi = mid }
        }
        close(t, hi, 1e-12);
    }
    // Receding or missing pairs never collide.
    assert_eq!(pair_collision_time([1.0, 0.0], [1.0, 0.0], 0.2), None);
    assert_eq!(pair_collision_time([1.0, 0.0], [-1.0, 1.0], 0.2), None);
}

/// Naive event loop: scan every pair and wall for the earliest event.
fn brute_force(mut s: GasState, r: f64, l: f64, events: usize) -> GasState {
    let n = s.n();
    for _ in 0..events {
        let mut best = (f64::INFINITY, usize::MAX, usize::MAX);
        for i in 0..n {
            for k in 0..2 {
                let (x, v) = (s.pos[i][k], s.vel[i][k]);
                let dt = if v > 0.0 { (l - r - x) / v } else if v < 0.0 { (r - x) / v } else { f64::INFINITY };
                if dt.max(0.0) < best.0 {
                    best = (dt.max(0.0), i, n + k);
                }
            }
            for j in (i + 1)..n {
                let dr = [s.pos[j][0] - s.pos[i][0], s.pos[j][1] - s.pos[i][1]];
                let dv = [s.vel[j][0] - s.vel[i][0], s.vel[j][1] - s.vel[i][1]];
                if let Some(dt) = pair_collision_time(dr, dv, 2.0 * r) {
                    if dt < best.0 {
                        best = (dt, i, j);
                    }
                }
            }
        }
        let (dt, i, j) = best;
        for (p, v) in s.pos.iter_mut().zip(&s.vel) {
            p[0] += v[0] * dt;
            p[1] += v[1] * dt;
        }
        s.time += dt;
        if j >= n {
            s.vel[i][j - n] = -s.vel[i][j - n];
        } else {
            let dr = [s.pos[j][0] - s.pos[i][0], s.pos[j][1] - s.pos[i][1]];
            let dv = [s.vel[j][0] - s.vel[i][0], s.vel[j][1] - s.vel[i][1]];
            let f = (dr[0] * dv[0] + dr[1] * dv[1]) / (dr[0] * dr[0] + dr[1] * dr[1]);
            for k in 0..2 {
                s.vel[i][k] += f * dr[k];
                s.vel[j][k] -= f * dr[k];
            }
        }
    }
    s
}

#[test]
fn event_queue_matches_brute_force() {
    let params = GasParams { n: 8, radius: 0.04, ..GasParams::default() };
    let start = generate_ic(&params, InitialCondition::HotColdHalves).unwrap().state;
    // Hard-disk dynamics is chaotic, so compare over a modest number of
    // events where round-off has not yet been amplified.
    let events = 40;
    let want = brute_force(start.clone(), params.radius, params.box_l, events);
    let mut sim = Simulator::new(start, params.radius, params.box_l, true).unwrap();
    sim.run_collisions(events as u64).unwrap();
    let got = sim.state();
    close(got.time, want.time, 1e-10);
    for i in 0..params.n {
        for k in 0..2 {
            close(got.pos[i][k], want.pos[i][k], 1e-8);
            close(got.vel[i][k], want.vel[i][k], 1e-8);
        }
    }
}

#[test]
fn single_disk_reflects_off_walls() {
    let (r, l) = (0.1, 1.0);
    let state = GasState { pos: vec![[0.5, 0.5]], vel: vec![[1.0, 0.0]], time: 0.0 };
    let mut sim = Simulator::new(state, r, l, true).unwrap();
    // Path length 1.4 from x = 0.5: right wall at 0.9, back to 0.1, then 0.3.
    sim.advance_to(1.4).unwrap();
    close(sim.state().pos[0][0], 0.3, 1e-14);
    assert_eq!(sim.state().vel[0][0], 1.0);
    assert_eq!(sim.stats().wall_collisions, 2);
}

#[test]
fn head_on_pair_swaps_velocities() {
    let state = GasState { pos: vec![[0.3, 0.5], [0.7, 0.5]], vel: vec![[0.2, 0.0], [-0.2, 0.0]], time: 0.0 };
    let mut sim = Simulator::new(state, 0.05, 1.0, true).unwrap();
    // Contact at separation 0.1 after t = 0.75; then they separate.
    sim.advance_to(1.0).unwrap();
    let s = sim.state();
    close(s.pos[0][0], 0.45 - 0.05, 1e-14);
    close(s.pos[1][0], 0.55 + 0.05, 1e-14);
    close(s.vel[0][0], -0.2, 1e-15);
    assert_eq!(sim.stats().pair_collisions, 1);
}

#[test]
fn spatial_and_speed_references() {
    let params = GasParams::default();
    let cg = SingleParticleCg::new(CgKind::Spatial);
    assert_eq!(cg.n_bins(), 36);
    let q = reference_distribution(&cg, &params).unwrap();
    assert!(q.as_slice().iter().all(|&v| (v - 1.0 / 36.0).abs() < 1e-15));
    assert_eq!(cg.bin_of([0.99, 0.01], [0.0, 0.0], &params), 5);
    assert_eq!(cg.bin_of([0.01, 0.99], [0.0, 0.0], &params), 30);

    // Two-dimensional Maxwell speeds peak at v₀/√2.
    let cg = SingleParticleCg::new(CgKind::Speed);
    let q = reference_distribution(&cg, &params).unwrap();
    let mode = (0..q.len()).max_by(|&a, &b| q[a].total_cmp(&q[b])).unwrap();
    assert_eq!(mode, cg.bin_of([0.5, 0.5], [params.v0() / 2f64.sqrt(), 0.0], &params));
    close(q.as_slice().iter().sum::<f64>(), 1.0, 1e-12);
}

#[test]
fn hot_cold_halves_layout() {
    let params = GasParams::default();
    let setup = generate_ic(&params, InitialCondition::HotColdHalves).unwrap();
    let s = &setup.state;
    assert_eq!(setup.subsystem_a, (0..250).collect::<Vec<_>>());
    assert!(setup.subsystem_a.iter().all(|&i| s.pos[i][0] < 0.5));
    assert!((250..500).all(|i| s.pos[i][0] >= 0.5));
    close(s.kinetic_energy(params.mass), params.total_energy(), 1e-9);
    let b: Vec<usize> = (250..500).collect();
    assert!(s.energy_of(&setup.subsystem_a, params.mass) > 2.0 * s.energy_of(&b, params.mass));
    assert!(s.min_pair_distance() >= 2.0 * params.radius);
    assert!(s.max_wall_violation(params.radius, params.box_l) <= 0.0);
}

#[test]
fn thermodynamic_forms_at_equilibrium() {
    let params = GasParams::default();
    let s_tau = sackur_tetrode(&params).standard;
    let e_half = params.total_energy() / 2.0;
    close(thermo_entropy_joint(e_half, e_half, 250, &params, s_tau).unwrap(), s_tau, 1e-9);
    close(thermo_entropy_single(e_half, 250, &params, s_tau).unwrap(), s_tau, 1e-9);
    // Moving energy off equilibrium lowers the joint form.
    assert!(thermo_entropy_joint(1.2 * e_half, 0.8 * e_half, 250, &params, s_tau).unwrap() < s_tau);
    assert!(thermo_entropy_joint(0.0, 2.0 * e_half, 250, &params, s_tau).is_err());
}

#[test]
fn initial_condition_indices() {
    for k in 1..=4 {
        assert_eq!(InitialCondition::from_index(k).unwrap().index(), k);
    }
    assert!(InitialCondition::from_index(5).is_err());
}
