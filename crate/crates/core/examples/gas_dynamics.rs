//! Hard-disk gas with each of the four initial conditions, interacting and
//! free. Prints per-particle entropies at the start and the last-quarter
//! average, next to S(τ)/N.

use obsentropy::gas::{run_gas_experiment, GasExperiment, GasParams, InitialCondition};

fn main() -> obsentropy::Result<()> {
    let params = GasParams::default();
    for ic in 1..=4 {
        for interacting in [true, false] {
            let mut exp = GasExperiment::new(params.clone(), InitialCondition::from_index(ic)?);
            exp.interacting = interacting;
            let start = std::time::Instant::now();
            let run = run_gas_experiment(&exp)?;
            let s = &run.summary;
            println!(
                "IC{ic} {}: S(tau)/N = {:.4}, collisions {} + {} walls, drift {:.1e}, min contact {:.6}, {:.1?}",
                if interacting { "interacting" } else { "free" },
                s.s_tau_per_particle,
                s.pair_collisions,
                s.wall_collisions,
                s.max_energy_drift,
                s.min_contact_ratio,
                start.elapsed()
            );
            for l in &s.labels {
                println!(
                    "    {:<18} t=0 {:>9.4}   late {:>9.4}   gap {:>8.4}",
                    l.label, l.initial_per_particle, l.last_quarter_per_particle, l.gap_per_particle
                );
            }
            if let Some(t) = &s.temperature {
                println!(
                    "    temperatures: late gap {:.4}, one-sided {:.4}, dS {:.3}, Clausius {:.3} (halved {:.3})",
                    t.late_relative_gap, t.late_deviation_a, t.delta_s, t.clausius, t.clausius_halved
                );
            }
        }
    }
    Ok(())
}
