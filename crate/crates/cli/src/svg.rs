//! Deterministic SVG rendering of a force–displacement curve.
//!
//! The plot stacks the three force components — boundary ellipse at the
//! bottom, then the discrete ribbons, then the mesh ribbons — so the top
//! edge of the stack is the total tensile force, which is also overlaid
//! as a marked line. Rendering is a pure function of the curve data with
//! fixed-precision coordinates: identical curves produce byte-identical
//! files, on any platform.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use kirigami_core::{Error, ForceCurve, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 48.0;
const MARGIN_BOTTOM: f64 = 58.0;
/// Tick intervals per axis.
const N_TICKS: usize = 5;
/// Component fills, bottom of the stack first.
const BAND_COLORS: [&str; 3] = ["#8aa8d0", "#e8b46a", "#9ec79a"];
const BAND_LABELS: [&str; 3] = ["boundary", "discrete", "mesh"];
const TOTAL_COLOR: &str = "#1a1a1a";

/// Render `curve` and write it to `path`.
pub fn write_svg(curve: &ForceCurve, path: &Path) -> Result<()> {
    fs::write(path, render(curve)).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Render `curve` as a standalone SVG document.
pub fn render(curve: &ForceCurve) -> String {
    let xs: Vec<f64> = curve.samples.iter().map(|s| s.displacement_mm).collect();
    // Cumulative force levels per sample: 0, boundary, +discrete, total.
    let stack: Vec<[f64; 4]> = curve
        .samples
        .iter()
        .map(|s| {
            let f = &s.forces;
            [0.0, f.f_boundary, f.f_boundary + f.f_discrete, f.f_tensile]
        })
        .collect();

    // Degenerate ranges (single sample at 0, or an all-zero curve) fall
    // back to a unit axis so the transform stays finite.
    let x_max = xs.last().copied().unwrap_or(0.0).max(1e-9);
    let y_top = stack.iter().map(|levels| levels[3]).fold(0.0, f64::max);
    let y_max = if y_top > 0.0 { y_top * 1.08 } else { 1.0 };

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |x: f64| MARGIN_LEFT + x / x_max * plot_w;
    let py = |y: f64| MARGIN_TOP + plot_h - y / y_max * plot_h;

    let mut s = String::with_capacity(8 * 1024);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        s,
        r##"<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>"##
    );
    let _ = writeln!(
        s,
        r##"<text x="{:.2}" y="26" font-family="sans-serif" font-size="16" fill="#1a1a1a">sheet {} tensile force (model lower bound)</text>"##,
        MARGIN_LEFT,
        escape(&curve.sheet_id)
    );

    // Stacked component bands, bottom first so later fills sit on top.
    for (level, color) in BAND_COLORS.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<path d="{}" fill="{color}" fill-opacity="0.85" stroke="none"/>"#,
            band_path(&xs, &stack, level, &px, &py)
        );
    }

    // Grid, axes and ticks.
    for k in 0..=N_TICKS {
        let fx = k as f64 / N_TICKS as f64;
        let x_val = x_max * fx;
        let gx = px(x_val);
        let _ = writeln!(
            s,
            r##"<line x1="{gx:.2}" y1="{:.2}" x2="{gx:.2}" y2="{:.2}" stroke="#d0d0d0" stroke-width="0.5"/>"##,
            MARGIN_TOP,
            MARGIN_TOP + plot_h
        );
        let _ = writeln!(
            s,
            r##"<text x="{gx:.2}" y="{:.2}" font-family="sans-serif" font-size="12" fill="#333333" text-anchor="middle">{}</text>"##,
            MARGIN_TOP + plot_h + 18.0,
            tick_label(x_val)
        );

        let y_val = y_max * fx;
        let gy = py(y_val);
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" y1="{gy:.2}" x2="{:.2}" y2="{gy:.2}" stroke="#d0d0d0" stroke-width="0.5"/>"##,
            MARGIN_LEFT,
            MARGIN_LEFT + plot_w
        );
        let _ = writeln!(
            s,
            r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" fill="#333333" text-anchor="end">{}</text>"##,
            MARGIN_LEFT - 8.0,
            gy + 4.0,
            tick_label(y_val)
        );
    }
    let _ = writeln!(
        s,
        r##"<rect x="{:.2}" y="{:.2}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="#333333" stroke-width="1"/>"##,
        MARGIN_LEFT, MARGIN_TOP
    );

    // Total force: a marked line along the top of the stack.
    let mut points = String::new();
    for (i, &x) in xs.iter().enumerate() {
        let _ = write!(points, "{:.2},{:.2} ", px(x), py(stack[i][3]));
    }
    let _ = writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="{TOTAL_COLOR}" stroke-width="1.5"/>"#,
        points.trim_end()
    );
    for (i, &x) in xs.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{TOTAL_COLOR}"/>"#,
            px(x),
            py(stack[i][3])
        );
    }

    // Axis labels.
    let _ = writeln!(
        s,
        r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13" fill="#1a1a1a" text-anchor="middle">displacement dx (mm)</text>"##,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 14.0
    );
    let _ = writeln!(
        s,
        r##"<text x="18" y="{:.2}" font-family="sans-serif" font-size="13" fill="#1a1a1a" text-anchor="middle" transform="rotate(-90 18 {:.2})">force (N)</text>"##,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );

    // Legend, inside the top-left corner of the plot.
    for (k, label) in BAND_LABELS.iter().enumerate() {
        let ly = MARGIN_TOP + 14.0 + 18.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{:.2}" y="{:.2}" width="12" height="12" fill="{}" fill-opacity="0.85"/>"#,
            MARGIN_LEFT + 10.0,
            ly,
            BAND_COLORS[k]
        );
        let _ = writeln!(
            s,
            r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" fill="#333333">{label}</text>"##,
            MARGIN_LEFT + 28.0,
            ly + 10.0
        );
    }
    let ly = MARGIN_TOP + 14.0 + 18.0 * 3.0;
    let _ = writeln!(
        s,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{TOTAL_COLOR}" stroke-width="1.5"/>"#,
        MARGIN_LEFT + 10.0,
        ly + 6.0,
        MARGIN_LEFT + 22.0,
        ly + 6.0
    );
    let _ = writeln!(
        s,
        r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" fill="#333333">total (lower bound)</text>"##,
        MARGIN_LEFT + 28.0,
        ly + 10.0
    );

    s.push_str("</svg>\n");
    s
}

/// Closed path outlining one stacked band: along the upper level left to
/// right, back along the lower level.
fn band_path(
    xs: &[f64],
    stack: &[[f64; 4]],
    level: usize,
    px: &impl Fn(f64) -> f64,
    py: &impl Fn(f64) -> f64,
) -> String {
    let mut d = String::new();
    for (i, &x) in xs.iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(d, "{cmd}{:.2},{:.2} ", px(x), py(stack[i][level + 1]));
    }
    for (i, &x) in xs.iter().enumerate().rev() {
        let _ = write!(d, "L{:.2},{:.2} ", px(x), py(stack[i][level]));
    }
    d.push('Z');
    d
}

/// Tick label: four significant digits with trailing zeros trimmed.
fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let mag = v.abs().log10().floor() as i32;
    let s = if (-3..=4).contains(&mag) {
        let decimals = (3 - mag).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.3e}")
    };
    if s.contains('.') && !s.contains('e') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s
    }
}

/// Escape the XML-significant characters in user-supplied text.
fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
