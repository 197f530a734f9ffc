//! Static SVG line plots of entropy series against ln(1 + t/T).

use std::fmt::Write as _;

use crate::entropy::ExtReal;
use crate::series::EntropySeries;

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

#[derive(Clone, Debug)]
pub struct PlotOptions {
    /// T in ln(1 + t/T).
    pub time_scale: f64,
    /// Display in bits instead of nats.
    pub bits: bool,
    pub title: String,
    pub width: f64,
    pub height: f64,
    /// Draw S_traditional as dashed lines where finite.
    pub traditional: bool,
}

impl Default for PlotOptions {
    fn default() -> Self {
        Self { time_scale: 1.0, bits: false, title: String::new(), width: 800.0, height: 500.0, traditional: true }
    }
}

/// About five round tick values covering [lo, hi].
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = (hi - lo).max(1e-12);
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let mut v = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while v <= hi + 1e-9 * step {
        out.push(if v.abs() < 1e-12 * step { 0.0 } else { v });
        v += step;
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

type Curve = (String, Vec<Option<(f64, f64)>>, bool);

pub fn plot_series(series: &EntropySeries, opts: &PlotOptions) -> String {
    let unit = if opts.bits { std::f64::consts::LN_2 } else { 1.0 };
    let x_of = |t: f64| (t / opts.time_scale).ln_1p();
    let y_of = |v: ExtReal| v.finite().map(|y| y / unit);

    let mut curves: Vec<Curve> = Vec::new();
    let mut s_tau: Vec<f64> = Vec::new();
    for label in series.labels() {
        let recs = series.for_label(&label);
        curves.push((label.clone(), recs.iter().map(|r| y_of(r.s_oe).map(|y| (x_of(r.t), y))).collect(), false));
        if opts.traditional && recs.iter().any(|r| r.s_traditional.is_finite() && r.s_traditional != r.s_oe) {
            let pts = recs.iter().map(|r| y_of(r.s_traditional).map(|y| (x_of(r.t), y))).collect();
            curves.push((format!("{label} (traditional)"), pts, true));
        }
        if let Some(r) = recs.first() {
            let v = r.s_tau / unit;
            if !s_tau.iter().any(|s| (s - v).abs() <= 1e-12 * v.abs().max(1.0)) {
                s_tau.push(v);
            }
        }
    }

    let pts = curves.iter().flat_map(|c| c.1.iter().flatten());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    for &s in &s_tau {
        y0 = y0.min(s);
        y1 = y1.max(s);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    let pad = 0.05 * (y1 - y0).max(1e-9 * y1.abs().max(1.0));
    y0 -= pad;
    y1 += pad;

    let (w, h) = (opts.width, opts.height);
    let (ml, mr, mt, mb) = (80.0, 20.0, 40.0, 55.0);
    let px = |x: f64| ml + (x - x0) / (x1 - x0) * (w - ml - mr);
    let py = |y: f64| h - mb - (y - y0) / (y1 - y0) * (h - mt - mb);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    if !opts.title.is_empty() {
        let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, w / 2.0, escape(&opts.title));
    }
    // Axes and ticks.
    let _ = writeln!(
        s,
        r#"<rect x="{ml}" y="{mt}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w - ml - mr,
        h - mt - mb
    );
    for t in ticks(x0, x1) {
        let x = px(t);
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="black"/>"#, h - mb, h - mb + 5.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#, h - mb + 18.0, fmt_tick(t));
    }
    for t in ticks(y0, y1) {
        let y = py(t);
        let _ = writeln!(s, r##"<line x1="{}" y1="{y:.2}" x2="{ml}" y2="{y:.2}" stroke="black"/>"##, ml - 5.0);
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, ml - 8.0, y + 4.0, fmt_tick(t));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">ln(1 + t/T)</text>"#, (ml + w - mr) / 2.0, h - 12.0);
    let _ = writeln!(
        s,
        r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">entropy ({1})</text>"#,
        (mt + h - mb) / 2.0,
        if opts.bits { "bits" } else { "nats" }
    );
    for v in &s_tau {
        let y = py(*v);
        let _ = writeln!(
            s,
            r##"<line x1="{ml}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="#777" stroke-dasharray="2,4"/>"##,
            w - mr
        );
    }
    // Curves, broken wherever the value is infinite.
    for (k, (_, pts, dashed)) in curves.iter().enumerate() {
        let color = PALETTE[(k) % PALETTE.len()];
        let dash = if *dashed { r#" stroke-dasharray="6,4""# } else { "" };
        let mut seg: Vec<String> = Vec::new();
        let flush = |seg: &mut Vec<String>, s: &mut String| {
            if seg.len() > 1 {
                let _ = writeln!(
                    s,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
                    seg.join(" ")
                );
            }
            seg.clear();
        };
        for p in pts {
            match p {
                Some((x, y)) => seg.push(format!("{:.2},{:.2}", px(*x), py(*y))),
                None => flush(&mut seg, &mut s),
            }
        }
        flush(&mut seg, &mut s);
    }
    // Legend.
    let lx = ml + 10.0;
    let mut ly = mt + 16.0;
    for (k, (name, _, dashed)) in curves.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let dash = if *dashed { r#" stroke-dasharray="6,4""# } else { "" };
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"{dash}/>"#,
            lx + 24.0
        );
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 30.0, ly + 4.0, escape(name));
        ly += 16.0;
    }
    if !s_tau.is_empty() {
        let _ = writeln!(
            s,
            r##"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="#777" stroke-dasharray="2,4"/>"##,
            lx + 24.0
        );
        let _ = writeln!(s, r#"<text x="{}" y="{}">S(τ)</text>"#, lx + 30.0, ly + 4.0);
    }
    s.push_str("</svg>\n");
    s
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}
