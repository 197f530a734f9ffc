//! Time-stamped entropy records emitted by the experiments, and their CSV
//! form `t,label,S_oe,S_traditional,S_tau,E_A,E_B`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use crate::entropy::ExtReal;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "t,label,S_oe,S_traditional,S_tau,E_A,E_B";

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyRecord {
    pub t: f64,
    pub label: String,
    pub s_oe: ExtReal,
    pub s_traditional: ExtReal,
    pub s_tau: f64,
    pub e_a: f64,
    pub e_b: f64,
    /// Outcome distribution behind `s_oe`, when the experiment has one.
    pub probs: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EntropySeries {
    pub records: Vec<EntropyRecord>,
    /// Prior outcome distribution q per label, when available.
    pub prior_probs: BTreeMap<String, Vec<f64>>,
}

impl EntropySeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, r: EntropyRecord) {
        self.records.push(r);
    }

    /// Labels in order of first appearance.
    pub fn labels(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.records {
            if !out.contains(&r.label) {
                out.push(r.label.clone());
            }
        }
        out
    }

    pub fn for_label(&self, label: &str) -> Vec<&EntropyRecord> {
        self.records.iter().filter(|r| r.label == label).collect()
    }

    /// (t, S_oe) pairs with finite entropy for one label.
    pub fn curve(&self, label: &str) -> Vec<(f64, f64)> {
        self.for_label(label).iter().filter_map(|r| r.s_oe.finite().map(|s| (r.t, s))).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(64 * (self.records.len() + 1));
        s.push_str(CSV_HEADER);
        s.push('\n');
        for r in &self.records {
            s.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.t, r.label, r.s_oe, r.s_traditional, r.s_tau, r.e_a, r.e_b
            ));
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == CSV_HEADER => {}
            _ => return Err(Error::Config(format!("CSV header must be `{CSV_HEADER}`"))),
        }
        let mut series = Self::new();
        for (n, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 7 {
                return Err(Error::Config(format!("CSV line {}: expected 7 fields", n + 2)));
            }
            let num = |s: &str| -> Result<f64> {
                s.trim().parse::<f64>().map_err(|_| Error::Config(format!("CSV line {}: bad number `{s}`", n + 2)))
            };
            let ext = |s: &str| -> Result<ExtReal> {
                match s.trim() {
                    "inf" => Ok(ExtReal::PosInf),
                    "-inf" => Ok(ExtReal::NegInf),
                    v => num(v).map(ExtReal::Finite),
                }
            };
            series.push(EntropyRecord {
                t: num(f[0])?,
                label: f[1].to_string(),
                s_oe: ext(f[2])?,
                s_traditional: ext(f[3])?,
                s_tau: num(f[4])?,
                e_a: num(f[5])?,
                e_b: num(f[6])?,
                probs: None,
            });
        }
        Ok(series)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_csv().as_bytes())
    }
}

/// Write through a temporary sibling file and rename it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Mean of the values whose index lies in the last quarter.
pub fn last_quarter_mean(values: &[f64]) -> f64 {
    let n = values.len();
    let start = n - (n / 4).max(1);
    let tail = &values[start..];
    tail.iter().sum::<f64>() / tail.len() as f64
}
