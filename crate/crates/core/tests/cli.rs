use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use obsentropy::config::RunConfig;
use obsentropy::series::EntropySeries;

fn oetool(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_oetool"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("OETOOL_THREADS", t);
    }
    cmd.output().expect("oetool runs")
}

fn bundled(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(format!("{name}.cfg"))
}

/// Copy a bundled config with its output redirected into `dir`.
fn redirect(name: &str, dir: &Path) -> PathBuf {
    let text = std::fs::read_to_string(bundled(name)).unwrap();
    let text: String = text
        .lines()
        .map(|l| if l.starts_with("output.dir") { format!("output.dir = {}", dir.display()) } else { l.to_string() })
        .collect::<Vec<_>>()
        .join("\n");
    let path = dir.join(format!("{name}.cfg"));
    std::fs::write(&path, text).unwrap();
    path
}

fn compare_to_golden(name: &str, produced: &Path) {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.csv"));
    let want_text = std::fs::read_to_string(golden).unwrap();
    let got_text = std::fs::read_to_string(produced).unwrap();
    assert_eq!(got_text.lines().next(), want_text.lines().next(), "header");
    let want = EntropySeries::from_csv(&want_text).unwrap();
    let got = EntropySeries::from_csv(&got_text).unwrap();
    assert_eq!(got.records.len(), want.records.len());
    // Eigensolver SIMD paths differ across machines, so values get a small
    // relative tolerance rather than bitwise equality.
    let near = |a: f64, b: f64| a == b || (a - b).abs() <= 1e-8 * a.abs().max(b.abs()).max(1.0);
    for (g, w) in got.records.iter().zip(&want.records) {
        assert_eq!(g.label, w.label);
        assert!(near(g.t, w.t), "t {} vs {}", g.t, w.t);
        assert_eq!(g.s_oe.is_finite(), w.s_oe.is_finite());
        assert!(near(g.s_oe.to_f64(), w.s_oe.to_f64()) || !g.s_oe.is_finite(), "{g:?} vs {w:?}");
        assert!(near(g.s_tau, w.s_tau) && near(g.e_a, w.e_a) && near(g.e_b, w.e_b), "{g:?} vs {w:?}");
    }
}

#[test]
fn missing_config_is_config_error() {
    let out = oetool(&["run", "/nonexistent/run.cfg"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn foreign_key_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    std::fs::write(&path, "experiment = rmt\ngas.n = 10\n").unwrap();
    let out = oetool(&["run", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gas.n"));
}

#[test]
fn unknown_check_scope() {
    let out = oetool(&["check", "nonsense"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_reports_json() {
    let out = oetool(&["check", "maxent", "--cases", "5", "--seed", "3"], Some("1"));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], serde_json::Value::Bool(true));
}

#[test]
fn entropy_eval_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("eval.cfg");
    let text = format!(
        "experiment = entropy-eval\neval.hamiltonian = 0, 1\neval.state = 0.75, 0.25\neval.prior = uniform\n\
         eval.measurement = basis\noutput.dir = {}\noutput.name = eval\n",
        dir.path().display()
    );
    std::fs::write(&path, text).unwrap();
    let out = oetool(&["run", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("eval.json")).unwrap()).unwrap();
    assert!((v["s_oe"].as_f64().unwrap() - 0.562335).abs() < 1e-6);
    assert!((v["d_m"].as_f64().unwrap() - 0.130812).abs() < 1e-6);
}

#[test]
fn config_round_trip_through_summary() {
    let cfg = RunConfig::from_file(&bundled("rmt-desk")).unwrap();
    let again = RunConfig::parse(&cfg.to_text()).unwrap();
    assert_eq!(again, cfg);
}

#[test]
fn plot_renders_svg() {
    let dir = tempfile::tempdir().unwrap();
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/rmt-desk.csv");
    let svg = dir.path().join("p.svg");
    let out = oetool(&["plot", golden.to_str().unwrap(), "--out", svg.to_str().unwrap(), "--bits"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
    assert!(text.contains("bits"));
    let out = oetool(&["plot", dir.path().join("none.csv").to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rmt_desk_matches_golden_and_reruns_identically() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let pa = redirect("rmt-desk", a.path());
    let pb = redirect("rmt-desk", b.path());
    assert_eq!(oetool(&["run", pa.to_str().unwrap()], Some("1")).status.code(), Some(0));
    assert_eq!(oetool(&["run", pb.to_str().unwrap()], Some("2")).status.code(), Some(0));
    let (ca, cb) = (a.path().join("rmt-desk.csv"), b.path().join("rmt-desk.csv"));
    assert_eq!(std::fs::read(&ca).unwrap(), std::fs::read(&cb).unwrap());
    assert!(a.path().join("rmt-desk_uniform.csv").exists());
    compare_to_golden("rmt-desk", &ca);
}

#[test]
fn gas_ic1_matches_golden_and_reruns_identically() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let pa = redirect("gas-ic1", a.path());
    let pb = redirect("gas-ic1", b.path());
    // Both configs in one invocation exercises the parallel runner.
    let out = oetool(&["run", pa.to_str().unwrap(), pb.to_str().unwrap()], Some("2"));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (ca, cb) = (a.path().join("gas-ic1.csv"), b.path().join("gas-ic1.csv"));
    assert_eq!(std::fs::read(&ca).unwrap(), std::fs::read(&cb).unwrap());
    compare_to_golden("gas-ic1", &ca);
}
