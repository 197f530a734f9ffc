//! Run every randomized property check at a small case count and print one
//! line per property.

use obsentropy::checks::{run_checks, Scope};

fn main() {
    let report = run_checks(Scope::All, 1, 20);
    for p in &report.properties {
        println!(
            "{} {:<14} {:<36} {:>3}/{:<3} worst {:.2e} (tol {:.0e})",
            if p.passed() { "ok  " } else { "FAIL" },
            p.module,
            p.name,
            p.cases - p.failures,
            p.cases,
            p.worst,
            p.tolerance
        );
    }
    println!("all passed: {}", report.passed);
}
