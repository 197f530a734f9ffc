use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use obsentropy::checks::{run_checks, Scope};
use obsentropy::runner::{run_path, EXIT_CONFIG, EXIT_FAILURE, EXIT_OK};
use obsentropy::series::{write_atomic, EntropySeries};
use obsentropy::svg::{plot_series, PlotOptions};

#[derive(Parser)]
#[command(name = "oetool", version, about = "Observational entropy experiments and property checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more experiment configs (in parallel).
    Run {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
    },
    /// Randomized property checks; prints a JSON report, exits 0 iff all pass.
    Check {
        /// entropy-core, maxent, measurements, recovery, rmt-model, gas-sim, equilibration or all.
        #[arg(default_value = "all")]
        scope: String,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Render a series CSV as SVG.
    Plot {
        csv: PathBuf,
        /// Defaults to the CSV path with an .svg extension.
        #[arg(long)]
        out: Option<PathBuf>,
        /// T in the ln(1 + t/T) axis.
        #[arg(long, default_value_t = 1.0)]
        time_scale: f64,
        #[arg(long)]
        bits: bool,
    },
}

fn init_threads() {
    if let Ok(v) = std::env::var("OETOOL_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("ignoring OETOOL_THREADS={v:?}: expected a positive integer"),
        }
    }
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    match cli.command {
        Command::Run { configs } => {
            let codes: Vec<i32> = configs.par_iter().map(|p| run_path(p)).collect();
            code(codes.into_iter().find(|&c| c != EXIT_OK).unwrap_or(EXIT_OK))
        }
        Command::Check { scope, cases, seed } => {
            let Some(scope) = Scope::parse(&scope) else {
                eprintln!("unknown scope `{scope}`; expected one of {}", Scope::MODULES.iter().map(|s| s.name()).collect::<Vec<_>>().join(", "));
                return code(EXIT_CONFIG);
            };
            let report = run_checks(scope, seed, cases);
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            for p in report.properties.iter().filter(|p| !p.passed()) {
                eprintln!("FAIL {}/{}: {} of {} cases, worst {:e}", p.module, p.name, p.failures, p.cases, p.worst);
            }
            code(if report.passed { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Plot { csv, out, time_scale, bits } => {
            let series = match std::fs::read_to_string(&csv).map_err(Into::into).and_then(|t| EntropySeries::from_csv(&t)) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("{}: {e}", csv.display());
                    return code(EXIT_CONFIG);
                }
            };
            let opts = PlotOptions {
                time_scale,
                bits,
                title: csv.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
                ..PlotOptions::default()
            };
            let out = out.unwrap_or_else(|| csv.with_extension("svg"));
            match write_atomic(&out, plot_series(&series, &opts).as_bytes()) {
                Ok(()) => code(EXIT_OK),
                Err(e) => {
                    eprintln!("{}: {e}", out.display());
                    code(EXIT_FAILURE)
                }
            }
        }
    }
}
