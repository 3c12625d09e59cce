//! CSV, SVG and JSON emission.
//!
//! Numbers are formatted with Rust's own formatter, which never consults the
//! locale, so decimal separators are always dots.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::Error;
use crate::spectral::{EigenResult, SweepPoint};
use crate::Result;

/// Twelve significant digits.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.is_finite() {
        format!("{v:.11e}")
    } else {
        v.to_string()
    }
}

/// Header row plus one line per row, newline-terminated.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(fmt_num).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn samples_csv(xs: &[f64], values: &[f64]) -> String {
    csv(&["x", "value"], xs.iter().zip(values).map(|(&x, &v)| vec![x, v]))
}

pub fn eigenfunction_csv(e: &EigenResult) -> String {
    samples_csv(&e.nodes, &e.eigenfunction)
}

pub fn sweep_csv(points: &[SweepPoint]) -> String {
    csv(&["R", "lambda", "residual"], points.iter().map(|p| vec![p.radius, p.lambda, p.residual]))
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::invalid(format!("serialization: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::invalid(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
}

/// One stacked panel of an SVG figure.
pub struct Panel<'a> {
    pub title: &'a str,
    pub xs: &'a [f64],
    pub ys: &'a [f64],
}

const WIDTH: f64 = 800.0;
const PANEL_HEIGHT: f64 = 260.0;
const MARGIN: f64 = 40.0;

fn bounds(v: &[f64]) -> (f64, f64) {
    let (lo, hi) = v
        .iter()
        .filter(|t| t.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &t| (a.min(t), b.max(t)));
    if !(lo < hi) {
        let c = if lo.is_finite() { lo } else { 0.0 };
        (c - 1.0, c + 1.0)
    } else {
        (lo, hi)
    }
}

/// Vertically stacked line charts drawn with `<polyline>` only.
pub fn svg_panels(panels: &[Panel]) -> String {
    let height = PANEL_HEIGHT * panels.len() as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, p) in panels.iter().enumerate() {
        let top = i as f64 * PANEL_HEIGHT;
        let (x0, x1) = bounds(p.xs);
        let (y0, y1) = bounds(p.ys);
        let w = WIDTH - 2.0 * MARGIN;
        let h = PANEL_HEIGHT - 2.0 * MARGIN;
        let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * w;
        let sy = |y: f64| top + MARGIN + (y1 - y) / (y1 - y0) * h;
        let _ = writeln!(
            s,
            r#"<text x="{MARGIN}" y="{:.1}" font-family="sans-serif" font-size="14">{}</text>"#,
            top + 0.6 * MARGIN,
            p.title
        );
        let _ = writeln!(
            s,
            r##"<rect x="{MARGIN}" y="{:.1}" width="{w}" height="{h}" fill="none" stroke="#999"/>"##,
            top + MARGIN
        );
        if y0 < 0.0 && y1 > 0.0 {
            let _ = writeln!(
                s,
                r##"<line x1="{MARGIN}" y1="{0:.2}" x2="{1}" y2="{0:.2}" stroke="#ccc"/>"##,
                sy(0.0),
                MARGIN + w
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{MARGIN}" y="{:.1}" font-family="sans-serif" font-size="11">x in [{}, {}], y in [{}, {}]</text>"#,
            top + PANEL_HEIGHT - 0.3 * MARGIN,
            x0,
            x1,
            fmt_short(y0),
            fmt_short(y1)
        );
        let mut pts = String::new();
        for (&x, &y) in p.xs.iter().zip(p.ys) {
            if y.is_finite() {
                let _ = write!(pts, "{:.2},{:.2} ", sx(x), sy(y));
            }
        }
        let _ = writeln!(
            s,
            r##"<polyline fill="none" stroke="#1f4e9c" stroke-width="1" points="{}"/>"##,
            pts.trim_end()
        );
    }
    s.push_str("</svg>\n");
    s
}

fn fmt_short(v: f64) -> String {
    format!("{v:.4}")
}
