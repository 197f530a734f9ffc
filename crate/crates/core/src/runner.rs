//! Orchestration for `oetool run`: execute a configured experiment and write
//! its CSV series, JSON summary and SVG plot atomically.

use std::path::{Path, PathBuf};

use rand::Rng as _;
use serde_json::{json, Value};

use crate::checks::{run_checks, Scope};
use crate::config::{Experiment, RunConfig};
use crate::entropy::{observational_entropy, DensityState, Label, Povm};
use crate::equilibration::delta_statistics;
use crate::error::{Error, Result};
use crate::gas::run_gas_experiment;
use crate::linalg::{CMatrix, C64};
use crate::maxent::{canonical_prior, microcanonical_prior, time_averaged_prior, uniform_prior};
use crate::measurements::{coarse_energy_povm, EnergyWindowSpec};
use crate::rmt::run_rmt_experiment;
use crate::rng::stream;
use crate::sampling::{random_povm, random_unitary};
use crate::series::{write_atomic, EntropyRecord, EntropySeries};
use crate::svg::{plot_series, PlotOptions};

pub const EXIT_OK: i32 = 0;
/// Other failures, such as unwritable output or a failed check.
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidParam(_) => EXIT_CONFIG,
        Error::Io(_) => EXIT_FAILURE,
        _ => EXIT_NUMERICAL,
    }
}

/// What an experiment produced, before anything is written.
pub struct Artifacts {
    /// Main series (plotted).
    pub series: Option<EntropySeries>,
    /// Extra series written as `<name>_<suffix>.csv`.
    pub extra: Vec<(String, EntropySeries)>,
    pub summary: Value,
    pub time_scale: f64,
    /// False when a check experiment found violations.
    pub passed: bool,
}

pub fn execute(cfg: &RunConfig) -> Result<Artifacts> {
    cfg.validate()?;
    let config_text = cfg.to_text();
    match cfg.experiment {
        Experiment::Rmt => {
            let run = run_rmt_experiment(&cfg.rmt)?;
            let summary = json!({
                "experiment": "rmt",
                "config": config_text,
                "diagnostics": run.diagnostics,
                "joint_energy": run.joint,
                "one_sided_energy": run.one_sided,
            });
            Ok(Artifacts {
                time_scale: run.diagnostics.time_scale,
                series: Some(run.series),
                extra: vec![("uniform".into(), run.averaged)],
                summary,
                passed: true,
            })
        }
        Experiment::Gas => {
            let exp = cfg.gas.experiment(cfg.seed)?;
            let run = run_gas_experiment(&exp)?;
            let reports: Vec<Value> = run
                .series
                .labels()
                .iter()
                .filter_map(|l| delta_statistics(&run.series, l, run.summary.s_tau).ok())
                .map(|r| serde_json::to_value(r).expect("report serializes"))
                .collect();
            let summary = json!({
                "experiment": "gas",
                "config": config_text,
                "summary": run.summary,
                "equilibration": reports,
            });
            Ok(Artifacts {
                time_scale: exp.params.time_scale(),
                series: Some(run.series),
                extra: vec![],
                summary,
                passed: true,
            })
        }
        Experiment::EntropyEval => evaluate(cfg, config_text),
        Experiment::Check => {
            let scope = Scope::parse(&cfg.check.scope).expect("validated");
            let report = run_checks(scope, cfg.seed, cfg.check.cases);
            let passed = report.passed;
            Ok(Artifacts {
                series: None,
                extra: vec![],
                summary: json!({ "experiment": "check", "config": config_text, "report": report }),
                time_scale: 1.0,
                passed,
            })
        }
    }
}

fn evaluate(cfg: &RunConfig, config_text: String) -> Result<Artifacts> {
    let e = &cfg.eval;
    let d = e.hamiltonian.len();
    let h = CMatrix::from_diag(&e.hamiltonian);
    let mut rho = if e.pure {
        let psi: Vec<C64> = e.state.iter().map(|p| C64::new(p.max(0.0).sqrt(), 0.0)).collect();
        DensityState::from_pure(psi)?
    } else {
        DensityState::diagonal(&e.state)?
    };
    if e.rotate {
        let mut rng = stream(cfg.seed, "haar");
        rho = rho.conjugate_by(&random_unitary(d, &mut rng))?;
    }
    let prior = match e.prior.as_str() {
        "uniform" => uniform_prior(d),
        "canonical" => canonical_prior(&h, e.energy)?,
        "microcanonical" => {
            let w: Vec<f64> =
                e.hamiltonian.iter().map(|&x| if x >= e.shell[0] && x < e.shell[1] { 1.0 } else { 0.0 }).collect();
            microcanonical_prior(&CMatrix::from_diag(&w))?
        }
        "time_averaged" => time_averaged_prior(&h, &rho)?,
        other => return Err(Error::Config(format!("unknown eval.prior `{other}`"))),
    };
    let m = match e.measurement.as_str() {
        "basis" => Povm::basis(d),
        "trivial" => Povm::trivial(d),
        "energy" => coarse_energy_povm(&EnergyWindowSpec::new(h.clone(), e.delta_e))?,
        "random" => {
            let mut rng = stream(cfg.seed, "povm");
            let outcomes = if e.outcomes >= 2 { e.outcomes } else { rng.random_range(2..=d + 1) };
            random_povm(d, outcomes, &mut rng)?
        }
        other => return Err(Error::Config(format!("unknown eval.measurement `{other}`"))),
    };
    let rep = observational_entropy(&m, &prior.tau, &rho)?;
    let mut series = EntropySeries::new();
    series.push(EntropyRecord {
        t: 0.0,
        label: e.measurement.clone(),
        s_oe: rep.s_oe,
        s_traditional: rep.s_traditional,
        s_tau: rep.s_tau,
        e_a: rho.expectation(&h),
        e_b: 0.0,
        probs: Some(rep.p.as_slice().to_vec()),
    });
    let labels: Vec<String> = m.labels().iter().map(Label::to_string).collect();
    let summary = json!({
        "experiment": "entropy-eval",
        "config": config_text,
        "s_oe": rep.s_oe,
        "s_traditional": rep.s_traditional,
        "s_tau": rep.s_tau,
        "d_m": rep.d_m,
        "s_rho": crate::entropy::von_neumann_entropy(&rho),
        "outcomes": labels,
        "probabilities": rep.p.as_slice(),
        "volumes": rep.volumes,
        "prior_multipliers": prior.multipliers,
    });
    Ok(Artifacts { series: Some(series), extra: vec![], summary, time_scale: 1.0, passed: true })
}

/// Paths written by one run.
#[derive(Clone, Debug)]
pub struct Written {
    pub csv: Option<PathBuf>,
    pub json: PathBuf,
    pub svg: Option<PathBuf>,
    pub passed: bool,
}

pub fn write_artifacts(cfg: &RunConfig, art: &Artifacts) -> Result<Written> {
    let dir = &cfg.output.dir;
    std::fs::create_dir_all(dir)?;
    let stem = &cfg.output.name;
    let mut out = Written { csv: None, json: dir.join(format!("{stem}.json")), svg: None, passed: art.passed };
    if let Some(series) = &art.series {
        let p = dir.join(format!("{stem}.csv"));
        series.write_csv(&p)?;
        out.csv = Some(p);
        if cfg.output.svg {
            let opts = PlotOptions {
                time_scale: art.time_scale,
                title: format!("{} (seed {})", cfg.experiment.name(), cfg.seed),
                ..PlotOptions::default()
            };
            let p = dir.join(format!("{stem}.svg"));
            write_atomic(&p, plot_series(series, &opts).as_bytes())?;
            out.svg = Some(p);
        }
    }
    for (suffix, series) in &art.extra {
        series.write_csv(&dir.join(format!("{stem}_{suffix}.csv")))?;
    }
    let text = serde_json::to_string_pretty(&art.summary).map_err(|e| Error::Numerical(e.to_string()))?;
    write_atomic(&out.json, text.as_bytes())?;
    Ok(out)
}

pub fn run_config(cfg: &RunConfig) -> Result<Written> {
    let art = execute(cfg)?;
    write_artifacts(cfg, &art)
}

/// Load, run and write; returns the process exit code and prints a
/// one-line report (or the error) to stderr.
pub fn run_path(path: &Path) -> i32 {
    let result = RunConfig::from_file(path).and_then(|cfg| run_config(&cfg));
    match result {
        Ok(w) => {
            eprintln!(
                "{}: wrote {}{}{}",
                path.display(),
                w.json.display(),
                w.csv.as_ref().map_or(String::new(), |p| format!(", {}", p.display())),
                w.svg.as_ref().map_or(String::new(), |p| format!(", {}", p.display())),
            );
            if w.passed {
                EXIT_OK
            } else {
                eprintln!("{}: checks failed", path.display());
                EXIT_FAILURE
            }
        }
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            exit_code(&e)
        }
    }
}
