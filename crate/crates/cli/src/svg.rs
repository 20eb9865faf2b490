//! Standalone SVG line charts of faded accuracy curves.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nidsbench::eval::PrequentialTrace;
use nidsbench::{Error, Result};

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];

/// One named curve: `(instance index, faded accuracy)` points.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub name: String,
    pub points: Vec<(usize, f64)>,
}

impl Curve {
    /// Every `step`-th record of `trace`, plus the last.
    pub fn from_trace(name: impl Into<String>, trace: &PrequentialTrace, step: usize) -> Self {
        let step = step.max(1);
        let n = trace.records.len();
        let points = trace
            .records
            .iter()
            .enumerate()
            .filter(|(i, _)| (i + 1) % step == 0 || i + 1 == n)
            .map(|(_, r)| (r.index, r.faded_accuracy))
            .collect();
        Curve {
            name: name.into(),
            points,
        }
    }
}

fn x_of(index: usize, max_index: usize) -> f64 {
    let span = (max_index.max(2) - 1) as f64;
    LEFT + (index.saturating_sub(1)) as f64 / span * (WIDTH - LEFT - RIGHT)
}

fn y_of(acc: f64) -> f64 {
    TOP + (1.0 - acc.clamp(0.0, 1.0)) * (HEIGHT - TOP - BOTTOM)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// SVG document with one polyline per curve, x = instance index, y = faded
/// accuracy on a fixed [0, 1] axis.
pub fn svg_curves(curves: &[Curve]) -> Result<String> {
    if curves.is_empty() || curves.iter().any(|c| c.points.is_empty()) {
        return Err(Error::Config("nothing to plot".into()));
    }
    let max_index = curves.iter().flat_map(|c| c.points.iter().map(|p| p.0)).max().unwrap_or(1);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let (y0, y1) = (y_of(0.0), y_of(1.0));
    let _ = writeln!(s, r#"<g stroke="black" stroke-width="1">"#);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/>"#);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/>"#);
    let _ = writeln!(s, "</g>");
    for i in 0..=5 {
        let acc = i as f64 / 5.0;
        let y = y_of(acc);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{acc:.1}</text>"#,
            LEFT - 6.0,
            y + 4.0
        );
    }
    for i in 0..=4 {
        let idx = 1 + (max_index - 1) * i / 4;
        let x = x_of(idx, max_index);
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{idx}</text>"#,
            y0 + 18.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">instance</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 8.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">faded accuracy</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );
    for (i, c) in curves.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = c
            .points
            .iter()
            .map(|&(idx, acc)| format!("{:.2},{:.2}", x_of(idx, max_index), y_of(acc)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1" data-name="{}" points="{}"/>"#,
            escape(&c.name),
            pts.join(" ")
        );
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{:.2}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 26.0, ly + 4.0, escape(&c.name));
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Writes [`svg_curves`] output to `path`.
pub fn emit_svg_curve(curves: &[Curve], path: &Path) -> Result<PathBuf> {
    let svg = svg_curves(curves)?;
    std::fs::write(path, svg).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    Ok(path.to_path_buf())
}
