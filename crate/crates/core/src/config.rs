//! Run configuration: flat `key = value` text with dotted keys.
//!
//! Grammar, one entry per line:
//!
//! ```text
//! line    := blank | comment | entry
//! comment := '#' any*
//! entry   := key ws* '=' ws* value ws* ('#' any*)?
//! key     := ident ('.' ident)*         ident := [a-z0-9_-]+
//! value   := bool | integer | float | word | list
//! list    := value (',' value)*
//! ```
//!
//! `experiment` selects one of `rmt`, `gas`, `entropy-eval` or `check`; only
//! the general keys (`experiment`, `seed`, `output.*`) and the block of the
//! selected experiment are accepted. Duplicate and unknown keys are errors.
//! [`RunConfig::to_text`] writes every key of the selected block in sorted
//! order, so parse → serialize → parse is the identity.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gas::{CgKind, GasExperiment, GasParams, InitialCondition};
use crate::rmt::RmtParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Rmt,
    Gas,
    EntropyEval,
    Check,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Rmt => "rmt",
            Experiment::Gas => "gas",
            Experiment::EntropyEval => "entropy-eval",
            Experiment::Check => "check",
        }
    }

    fn block(self) -> &'static str {
        match self {
            Experiment::Rmt => "rmt",
            Experiment::Gas => "gas",
            Experiment::EntropyEval => "eval",
            Experiment::Check => "check",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "rmt" => Experiment::Rmt,
            "gas" => Experiment::Gas,
            "entropy-eval" => Experiment::EntropyEval,
            "check" => Experiment::Check,
            _ => return Err(Error::Config(format!("unknown experiment `{s}`"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputSpec {
    pub dir: PathBuf,
    /// File stem for `<stem>.csv`, `<stem>.json` and `<stem>.svg`.
    pub name: String,
    pub svg: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GasConfig {
    pub params: GasParams,
    pub ic: u32,
    pub t_end: f64,
    pub n_samples: usize,
    pub interacting: bool,
    pub cgs: Vec<String>,
    pub energy: bool,
    pub h_theorem: bool,
}

impl Default for GasConfig {
    fn default() -> Self {
        let exp = GasExperiment::new(GasParams::default(), InitialCondition::HotColdHalves);
        Self {
            params: exp.params,
            ic: 1,
            t_end: exp.t_end,
            n_samples: exp.n_samples,
            interacting: exp.interacting,
            cgs: vec!["spatial".into(), "speed".into(), "velocity".into()],
            energy: exp.energy,
            h_theorem: exp.h_theorem,
        }
    }
}

pub fn parse_cg(s: &str) -> Result<CgKind> {
    Ok(match s {
        "spatial" => CgKind::Spatial,
        "speed" => CgKind::Speed,
        "velocity" => CgKind::Velocity,
        "phase_cell" => CgKind::PhaseCell,
        "kinetic_energy" => CgKind::KineticEnergy,
        _ => return Err(Error::Config(format!("unknown coarse-graining `{s}`"))),
    })
}

impl GasConfig {
    pub fn experiment(&self, seed: u64) -> Result<GasExperiment> {
        let params = GasParams { seed, ..self.params.clone() };
        let mut exp = GasExperiment::new(params, InitialCondition::from_index(self.ic)?);
        exp.t_end = self.t_end;
        exp.n_samples = self.n_samples;
        exp.interacting = self.interacting;
        exp.cgs = self.cgs.iter().map(|c| parse_cg(c)).collect::<Result<_>>()?;
        exp.energy = self.energy;
        exp.h_theorem = self.h_theorem;
        Ok(exp)
    }
}

/// A single observational-entropy evaluation on a small system with
/// diagonal Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalConfig {
    /// Diagonal of H.
    pub hamiltonian: Vec<f64>,
    /// Populations of ρ in the energy basis.
    pub state: Vec<f64>,
    /// Coherent superposition with amplitudes √p instead of the mixture.
    pub pure: bool,
    /// `uniform`, `canonical`, `microcanonical` or `time_averaged`.
    pub prior: String,
    /// Target ⟨H⟩ of the canonical prior.
    pub energy: f64,
    /// Microcanonical shell [lo, hi).
    pub shell: Vec<f64>,
    /// `basis`, `trivial`, `energy` or `random`.
    pub measurement: String,
    pub delta_e: f64,
    pub outcomes: usize,
    /// Rotate ρ by a random unitary from the `haar` stream.
    pub rotate: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            hamiltonian: vec![0.0, 1.0],
            state: vec![0.75, 0.25],
            pure: false,
            prior: "uniform".into(),
            energy: 0.25,
            shell: vec![0.0, 1.0],
            measurement: "basis".into(),
            delta_e: 0.5,
            outcomes: 2,
            rotate: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckConfig {
    pub scope: String,
    pub cases: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self { scope: "all".into(), cases: 10 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub seed: u64,
    pub output: OutputSpec,
    pub rmt: RmtParams,
    pub gas: GasConfig,
    pub eval: EvalConfig,
    pub check: CheckConfig,
}

impl RunConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            seed: 1,
            output: OutputSpec { dir: PathBuf::from("out"), name: experiment.name().to_string(), svg: true },
            rmt: RmtParams::default(),
            gas: GasConfig::default(),
            eval: EvalConfig::default(),
            check: CheckConfig::default(),
        }
    }
}

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: Display,
{
    v.parse::<T>().map_err(|e| Error::Config(format!("`{key}`: cannot parse `{v}`: {e}")))
}

fn parse_list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>>
where
    T::Err: Display,
{
    if v.trim().is_empty() {
        return Ok(vec![]);
    }
    v.split(',').map(|x| parse_value(key, x.trim())).collect()
}

fn join<T: Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn opt_f64(key: &str, v: &str) -> Result<Option<f64>> {
    if v == "auto" {
        Ok(None)
    } else {
        parse_value(key, v).map(Some)
    }
}

/// Setter for one key of a block; Ok(false) when the key is unknown.
type Setter<T> = fn(&mut T, &str, &str) -> Result<bool>;

fn set_rmt(p: &mut RmtParams, k: &str, v: &str) -> Result<bool> {
    let key = format!("rmt.{k}");
    let key = key.as_str();
    match k {
        "d_a" => p.d_a = parse_value(key, v)?,
        "d_b" => p.d_b = parse_value(key, v)?,
        "delta_band" => p.delta_band = parse_value(key, v)?,
        "delta_v" => p.delta_v = parse_value(key, v)?,
        "coupling" => p.coupling = opt_f64(key, v)?,
        "beta_a" => p.beta_a = parse_value(key, v)?,
        "beta_b" => p.beta_b = parse_value(key, v)?,
        "delta_e_meas" => p.delta_e_meas = parse_value(key, v)?,
        "t_max" => p.t_max = parse_value(key, v)?,
        "n_times" => p.n_times = parse_value(key, v)?,
        "avg_span" => p.avg_span = parse_value(key, v)?,
        "n_avg" => p.n_avg = parse_value(key, v)?,
        "allow_large" => p.allow_large = parse_value(key, v)?,
        _ => return Ok(false),
    }
    Ok(true)
}

fn rmt_entries(p: &RmtParams) -> Vec<(&'static str, String)> {
    vec![
        ("d_a", p.d_a.to_string()),
        ("d_b", p.d_b.to_string()),
        ("delta_band", p.delta_band.to_string()),
        ("delta_v", p.delta_v.to_string()),
        ("coupling", p.coupling.map_or("auto".into(), |c| c.to_string())),
        ("beta_a", p.beta_a.to_string()),
        ("beta_b", p.beta_b.to_string()),
        ("delta_e_meas", p.delta_e_meas.to_string()),
        ("t_max", p.t_max.to_string()),
        ("n_times", p.n_times.to_string()),
        ("avg_span", p.avg_span.to_string()),
        ("n_avg", p.n_avg.to_string()),
        ("allow_large", p.allow_large.to_string()),
    ]
}

fn set_gas(g: &mut GasConfig, k: &str, v: &str) -> Result<bool> {
    let key = format!("gas.{k}");
    let key = key.as_str();
    let p = &mut g.params;
    match k {
        "n" => p.n = parse_value(key, v)?,
        "box_l" => p.box_l = parse_value(key, v)?,
        "radius" => p.radius = parse_value(key, v)?,
        "mass" => p.mass = parse_value(key, v)?,
        "beta_inv" => p.beta_inv = parse_value(key, v)?,
        "radius_pm" => p.radius_pm = parse_value(key, v)?,
        "mass_gev" => p.mass_gev = parse_value(key, v)?,
        "beta_inv_mev" => p.beta_inv_mev = parse_value(key, v)?,
        "ic" => g.ic = parse_value(key, v)?,
        "t_end" => g.t_end = parse_value(key, v)?,
        "n_samples" => g.n_samples = parse_value(key, v)?,
        "interacting" => g.interacting = parse_value(key, v)?,
        "cgs" => g.cgs = parse_list(key, v)?,
        "energy" => g.energy = parse_value(key, v)?,
        "h_theorem" => g.h_theorem = parse_value(key, v)?,
        _ => return Ok(false),
    }
    Ok(true)
}

fn gas_entries(g: &GasConfig) -> Vec<(&'static str, String)> {
    let p = &g.params;
    vec![
        ("n", p.n.to_string()),
        ("box_l", p.box_l.to_string()),
        ("radius", p.radius.to_string()),
        ("mass", p.mass.to_string()),
        ("beta_inv", p.beta_inv.to_string()),
        ("radius_pm", p.radius_pm.to_string()),
        ("mass_gev", p.mass_gev.to_string()),
        ("beta_inv_mev", p.beta_inv_mev.to_string()),
        ("ic", g.ic.to_string()),
        ("t_end", g.t_end.to_string()),
        ("n_samples", g.n_samples.to_string()),
        ("interacting", g.interacting.to_string()),
        ("cgs", join(&g.cgs)),
        ("energy", g.energy.to_string()),
        ("h_theorem", g.h_theorem.to_string()),
    ]
}

fn set_eval(e: &mut EvalConfig, k: &str, v: &str) -> Result<bool> {
    let key = format!("eval.{k}");
    let key = key.as_str();
    match k {
        "hamiltonian" => e.hamiltonian = parse_list(key, v)?,
        "state" => e.state = parse_list(key, v)?,
        "pure" => e.pure = parse_value(key, v)?,
        "prior" => e.prior = v.to_string(),
        "energy" => e.energy = parse_value(key, v)?,
        "shell" => e.shell = parse_list(key, v)?,
        "measurement" => e.measurement = v.to_string(),
        "delta_e" => e.delta_e = parse_value(key, v)?,
        "outcomes" => e.outcomes = parse_value(key, v)?,
        "rotate" => e.rotate = parse_value(key, v)?,
        _ => return Ok(false),
    }
    Ok(true)
}

fn eval_entries(e: &EvalConfig) -> Vec<(&'static str, String)> {
    vec![
        ("hamiltonian", join(&e.hamiltonian)),
        ("state", join(&e.state)),
        ("pure", e.pure.to_string()),
        ("prior", e.prior.clone()),
        ("energy", e.energy.to_string()),
        ("shell", join(&e.shell)),
        ("measurement", e.measurement.clone()),
        ("delta_e", e.delta_e.to_string()),
        ("outcomes", e.outcomes.to_string()),
        ("rotate", e.rotate.to_string()),
    ]
}

fn set_check(c: &mut CheckConfig, k: &str, v: &str) -> Result<bool> {
    match k {
        "scope" => c.scope = v.to_string(),
        "cases" => c.cases = parse_value("check.cases", v)?,
        _ => return Ok(false),
    }
    Ok(true)
}

fn check_entries(c: &CheckConfig) -> Vec<(&'static str, String)> {
    vec![("scope", c.scope.clone()), ("cases", c.cases.to_string())]
}

fn apply<T>(target: &mut T, set: Setter<T>, k: &str, v: &str, full: &str) -> Result<()> {
    if set(target, k, v)? {
        Ok(())
    } else {
        Err(Error::Config(format!("unknown key `{full}`")))
    }
}

/// Split the text into (line number, key, value) entries.
fn entries(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
        let k = k.trim();
        let valid = !k.is_empty()
            && k.split('.').all(|p| {
                !p.is_empty() && p.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' || c == '-')
            });
        if !valid {
            return Err(Error::Config(format!("line {}: invalid key `{k}`", i + 1)));
        }
        out.push((i + 1, k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let list = entries(text)?;
        let mut seen = BTreeMap::new();
        for (line, k, _) in &list {
            if let Some(prev) = seen.insert(k.clone(), *line) {
                return Err(Error::Config(format!("line {line}: `{k}` already set on line {prev}")));
            }
        }
        let exp = list
            .iter()
            .find(|(_, k, _)| k == "experiment")
            .ok_or_else(|| Error::Config("missing `experiment`".into()))?;
        let mut cfg = RunConfig::new(Experiment::parse(&exp.2)?);
        let block = cfg.experiment.block();
        for (line, k, v) in &list {
            let ctx = |e: Error| match e {
                Error::Config(m) => Error::Config(format!("line {line}: {m}")),
                other => other,
            };
            match k.as_str() {
                "experiment" => {}
                "seed" => cfg.seed = parse_value("seed", v).map_err(ctx)?,
                "output.dir" => cfg.output.dir = PathBuf::from(v),
                "output.name" => cfg.output.name = v.clone(),
                "output.svg" => cfg.output.svg = parse_value("output.svg", v).map_err(ctx)?,
                _ => {
                    let (head, rest) = k.split_once('.').unwrap_or((k.as_str(), ""));
                    if head != block {
                        return Err(ctx(Error::Config(if ["rmt", "gas", "eval", "check"].contains(&head) {
                            format!("`{k}` does not apply to experiment `{}`", cfg.experiment.name())
                        } else {
                            format!("unknown key `{k}`")
                        })));
                    }
                    match cfg.experiment {
                        Experiment::Rmt => apply(&mut cfg.rmt, set_rmt, rest, v, k),
                        Experiment::Gas => apply(&mut cfg.gas, set_gas, rest, v, k),
                        Experiment::EntropyEval => apply(&mut cfg.eval, set_eval, rest, v, k),
                        Experiment::Check => apply(&mut cfg.check, set_check, rest, v, k),
                    }
                    .map_err(ctx)?;
                }
            }
        }
        cfg.rmt.seed = cfg.seed;
        cfg.gas.params.seed = cfg.seed;
        Ok(cfg)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Canonical text: the general keys and every key of the selected block,
    /// sorted by key.
    pub fn to_text(&self) -> String {
        let mut map: BTreeMap<String, String> = BTreeMap::new();
        map.insert("experiment".into(), self.experiment.name().into());
        map.insert("seed".into(), self.seed.to_string());
        map.insert("output.dir".into(), self.output.dir.display().to_string());
        map.insert("output.name".into(), self.output.name.clone());
        map.insert("output.svg".into(), self.output.svg.to_string());
        let block = self.experiment.block();
        let items = match self.experiment {
            Experiment::Rmt => rmt_entries(&self.rmt),
            Experiment::Gas => gas_entries(&self.gas),
            Experiment::EntropyEval => eval_entries(&self.eval),
            Experiment::Check => check_entries(&self.check),
        };
        for (k, v) in items {
            map.insert(format!("{block}.{k}"), v);
        }
        map.into_iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    /// Parameter validation that needs no computation.
    pub fn validate(&self) -> Result<()> {
        let wrap = |e: Error| match e {
            Error::InvalidParam(m) => Error::Config(m),
            other => other,
        };
        match self.experiment {
            Experiment::Rmt => self.rmt.validate().map_err(wrap),
            Experiment::Gas => {
                let exp = self.gas.experiment(self.seed).map_err(wrap)?;
                exp.params.validate().map_err(wrap)?;
                if !(exp.t_end > 0.0) || exp.n_samples < 2 {
                    return Err(Error::Config("gas.t_end must be positive and gas.n_samples at least 2".into()));
                }
                Ok(())
            }
            Experiment::EntropyEval => {
                let e = &self.eval;
                if e.hamiltonian.is_empty() || e.hamiltonian.len() != e.state.len() {
                    return Err(Error::Config("eval.hamiltonian and eval.state need the same nonzero length".into()));
                }
                if !["uniform", "canonical", "microcanonical", "time_averaged"].contains(&e.prior.as_str()) {
                    return Err(Error::Config(format!("unknown eval.prior `{}`", e.prior)));
                }
                if !["basis", "trivial", "energy", "random"].contains(&e.measurement.as_str()) {
                    return Err(Error::Config(format!("unknown eval.measurement `{}`", e.measurement)));
                }
                if e.shell.len() != 2 {
                    return Err(Error::Config("eval.shell needs two values".into()));
                }
                Ok(())
            }
            Experiment::Check => {
                if crate::checks::Scope::parse(&self.check.scope).is_none() {
                    return Err(Error::Config(format!("unknown check.scope `{}`", self.check.scope)));
                }
                Ok(())
            }
        }
    }
}
