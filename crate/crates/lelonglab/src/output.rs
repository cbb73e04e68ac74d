//! CSV tables and SVG plots. All output is byte-deterministic: CSV uses
//! shortest round-trip floats and `\n`, SVG uses six fixed decimals.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::io::Write;

use csv::{Terminator, WriterBuilder};

use lelonglab_core::lelong::LelongEstimate;

/// Canvas side in pixels.
pub const CANVAS: f64 = 800.0;
const MARGIN: f64 = 40.0;

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    WriterBuilder::new().terminator(Terminator::Any(b'\n')).from_writer(w)
}

/// Columns `r, nu, err, monotone_violation`.
pub fn write_schedule_csv<W: Write>(w: W, e: &LelongEstimate) -> csv::Result<()> {
    let mut out = csv_writer(w);
    out.write_record(["r", "nu", "err", "monotone_violation"])?;
    for i in 0..e.rs.len() {
        out.write_record([
            e.rs[i].to_string(),
            e.nus[i].to_string(),
            e.errs[i].to_string(),
            e.violations[i].to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// One sweep result.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub lambda: String,
    pub family: &'static str,
    pub estimate: LelongEstimate,
    pub diverges: bool,
}

pub const SWEEP_HEADER: [&str; 12] = [
    "lambda",
    "family",
    "steps",
    "r_last",
    "nu_first",
    "nu_last",
    "err_last",
    "limit_lower",
    "limit_upper",
    "monotone_ok",
    "slope",
    "diverges",
];

pub fn write_sweep_csv<W: Write>(w: W, rows: &[SweepRow]) -> csv::Result<()> {
    let mut out = csv_writer(w);
    out.write_record(SWEEP_HEADER)?;
    for row in rows {
        let e = &row.estimate;
        let last = e.rs.len() - 1;
        out.write_record([
            row.lambda.clone(),
            row.family.to_string(),
            e.rs.len().to_string(),
            e.rs[last].to_string(),
            e.nus[0].to_string(),
            e.nus[last].to_string(),
            e.errs[last].to_string(),
            e.limit_bracket.0.to_string(),
            e.limit_bracket.1.to_string(),
            e.monotone_ok.to_string(),
            e.fit.slope.to_string(),
            row.diverges.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

fn header(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{c}" height="{c}" viewBox="0 0 {c} {c}">"#,
        c = CANVAS as u32
    );
    let _ = writeln!(s, "<title>{title}</title>");
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{c}" height="{c}" fill="white"/>"#, c = CANVAS as u32);
    s
}

fn frame(s: &mut String) {
    let side = CANVAS - 2.0 * MARGIN;
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN:.6}" y="{MARGIN:.6}" width="{side:.6}" height="{side:.6}" fill="none" stroke="black"/>"#
    );
}

/// Map `[0, 2π)` to the drawable square, `y` up.
fn torus_xy(p: [f64; 2]) -> (f64, f64) {
    let side = CANVAS - 2.0 * MARGIN;
    (MARGIN + side * p[0] / TAU, CANVAS - MARGIN - side * p[1] / TAU)
}

/// Flat-torus plot, one `<path class="strand">` per loop in `u`.
///
/// `strands[i]` holds the points of loop `i`; wraps in `arg w` start a new
/// subpath, and a loop's final point is drawn on the right edge.
pub fn torus_svg(title: &str, strands: &[Vec<[f64; 2]>]) -> String {
    let mut s = header(title);
    frame(&mut s);
    for pts in strands {
        let mut d = String::new();
        let mut prev: Option<[f64; 2]> = None;
        for (i, &p) in pts.iter().enumerate() {
            let mut p = p;
            if i + 1 == pts.len() && i > 0 && p[0] < pts[i - 1][0] {
                p[0] += TAU;
            }
            let (x, y) = torus_xy(p);
            let jump = prev.is_none_or(|q| (p[1] - q[1]).abs() > 0.5 * TAU);
            let _ = write!(d, "{}{x:.6} {y:.6} ", if jump { "M" } else { "L" });
            prev = Some(p);
        }
        let _ = writeln!(
            s,
            r#"<path class="strand" d="{}" fill="none" stroke="navy" stroke-width="1"/>"#,
            d.trim_end()
        );
    }
    s.push_str("</svg>\n");
    s
}

/// `ν` against `log r`, with the schedule running left to right (largest `r`
/// on the left).
pub fn nu_plot_svg(title: &str, rs: &[f64], nus: &[f64]) -> String {
    let mut s = header(title);
    frame(&mut s);
    let side = CANVAS - 2.0 * MARGIN;
    let (l0, l1) = (rs[0].ln(), rs[rs.len() - 1].ln());
    let top = nus.iter().copied().filter(|x| x.is_finite()).fold(0.0, f64::max).max(f64::MIN_POSITIVE) * 1.05;
    let span = if l1 != l0 { l0 - l1 } else { 1.0 };
    let pts: Vec<(f64, f64)> = rs
        .iter()
        .zip(nus)
        .map(|(r, nu)| (MARGIN + side * (l0 - r.ln()) / span, CANVAS - MARGIN - side * nu / top))
        .collect();
    let mut poly = String::new();
    for (x, y) in &pts {
        let _ = write!(poly, "{x:.6},{y:.6} ");
    }
    let _ = writeln!(
        s,
        r#"<polyline class="nu" points="{}" fill="none" stroke="darkred" stroke-width="2"/>"#,
        poly.trim_end()
    );
    for (x, y) in &pts {
        let _ = writeln!(s, r#"<circle cx="{x:.6}" cy="{y:.6}" r="3" fill="darkred"/>"#);
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.6}" y="{:.6}" font-size="14">log r from {l0:.6} to {l1:.6}</text>"#,
        MARGIN,
        CANVAS - 12.0
    );
    let _ = writeln!(s, r#"<text x="{:.6}" y="{:.6}" font-size="14">nu max {top:.6}</text>"#, MARGIN, 28.0);
    s.push_str("</svg>\n");
    s
}
