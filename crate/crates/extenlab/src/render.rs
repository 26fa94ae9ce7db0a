//! Report rendering: text table, JSON, CSV and a static SVG sketch.

use std::fmt::Write;

use extenlab_core::maps::MapSample;
use extenlab_core::reproduce::Report;
use extenlab_core::spaces::SpacePair;

use crate::formats::to_json;

pub fn text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}: {}", report.example, report.anchor);
    let _ = writeln!(
        out,
        "resolution {}, n_max {}",
        report.resolution, report.n_max
    );
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:<14} {:>14} {:<20} {:<20} {:>14}",
        "member", "sup", "certificate", "status", "margin"
    );
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{:<14} {:>14} {:<20} {:<20} {:>14}",
            row.label,
            number(row.sup),
            row.certificate,
            row.status.as_str(),
            number(row.margin)
        );
    }
    if !report.checks.is_empty() {
        let _ = writeln!(out);
        for c in &report.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            let _ = writeln!(out, "[{mark}] {}: {}", c.check, c.detail);
        }
    }
    for note in &report.notes {
        let _ = writeln!(out, "note: {note}");
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "{}", report.conclusion);
    out
}

fn number(x: Option<f64>) -> String {
    match x {
        Some(v) => format!("{v:.9}"),
        None => "-".into(),
    }
}

pub fn json(report: &Report) -> String {
    to_json(report)
}

/// The convergence column, one line per row.
pub fn csv(report: &Report) -> String {
    let mut out = String::from("label,n,sup,certificate,status,margin\n");
    let opt = |x: Option<f64>| x.map(|v| format!("{v:?}")).unwrap_or_default();
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            row.label,
            row.n.map(|n| n.to_string()).unwrap_or_default(),
            opt(row.sup),
            row.certificate,
            row.status.as_str(),
            opt(row.margin)
        );
    }
    out
}

/// Sketch of a planar pair: `Y` in grey, `Z` in blue, and the values of `phi` in
/// red. One-dimensional coordinates are drawn on the horizontal axis.
pub fn svg(pair: &SpacePair, phi: &MapSample) -> Option<String> {
    let y = pair.y().net();
    let planar = |d: usize| d == 1 || d == 2;
    if !planar(y.dim()) || !planar(phi.codim()) {
        return None;
    }
    let xy = |p: &[f64]| (p[0], p.get(1).copied().unwrap_or(0.0));
    let mut all: Vec<(f64, f64)> = y.points().map(xy).collect();
    all.extend((0..phi.len()).map(|i| xy(phi.value(i))));
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(a, b) in &all {
        x0 = x0.min(a);
        x1 = x1.max(a);
        y0 = y0.min(b);
        y1 = y1.max(b);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    const SIZE: f64 = 480.0;
    const PAD: f64 = 20.0;
    let map = |(a, b): (f64, f64)| (PAD + (a - x0) / span * SIZE, PAD + (y1 - b) / span * SIZE);
    let mut out = String::new();
    let side = SIZE + 2.0 * PAD;
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{side}" height="{side}" viewBox="0 0 {side} {side}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let mut dots = |points: &mut dyn Iterator<Item = (f64, f64)>, r: f64, colour: &str| {
        let _ = writeln!(out, r#"<g fill="{colour}">"#);
        for p in points {
            let (a, b) = map(p);
            let _ = writeln!(out, r#"<circle cx="{a:.2}" cy="{b:.2}" r="{r}"/>"#);
        }
        let _ = writeln!(out, "</g>");
    };
    dots(&mut y.points().map(xy), 1.0, "#bbbbbb");
    dots(
        &mut pair.z_indices().iter().map(|&i| xy(y.point(i))),
        1.5,
        "#1f4e9c",
    );
    dots(
        &mut (0..phi.len()).map(|i| xy(phi.value(i))),
        1.5,
        "#c0392b",
    );
    out.push_str("</svg>\n");
    Some(out)
}
