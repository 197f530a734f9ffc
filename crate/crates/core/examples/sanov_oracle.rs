//! The Sanov estimate S(τ) − n D(P‖Q) of a histogram's observational entropy
//! against the exact multinomial log-probability, and the Sackur–Tetrode
//! prior entropy of the default gas.

use obsentropy::gas::{exact_type_log_prob, sackur_tetrode, sanov_entropy, thermal_wavelength_pm, GasParams};

fn main() -> obsentropy::Result<()> {
    let q = [0.5, 0.5];
    println!("{:>7} {:>14} {:>14} {:>10}", "n", "-n D(P||Q)", "ln P(type)", "per n");
    for n in [10usize, 100, 1000, 10_000, 100_000] {
        let k = (3 * n) / 10;
        let counts = [k, n - k];
        let p = [k as f64 / n as f64, (n - k) as f64 / n as f64];
        let sanov = sanov_entropy(&p, &q, n, 0.0, 0.0)?.to_f64();
        let exact = exact_type_log_prob(&counts, &q);
        println!("{n:>7} {sanov:>14.4} {exact:>14.4} {:>10.2e}", (exact - sanov).abs() / n as f64);
    }
    let params = GasParams::default();
    let st = sackur_tetrode(&params);
    println!(
        "lambda_th = {:.4} pm, L/lambda_th = {:.1}, S(tau)/N = {:.4} (Stirling {:.4}, exact ln N! {:.4})",
        thermal_wavelength_pm(params.mass_gev, params.beta_inv_mev),
        params.box_over_lambda(),
        st.per_particle,
        st.stirling / params.n as f64,
        st.exact / params.n as f64
    );
    Ok(())
}
