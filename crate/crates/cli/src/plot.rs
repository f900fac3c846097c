//! Minimal SVG rendering of a series with its fitted step function.

use mktint::breaks::BreakFit;
use mktint::data::Month;
use std::fmt::Write;

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 360.0;
const MARGIN_L: f64 = 60.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 20.0;
const MARGIN_B: f64 = 40.0;

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

/// Render the series, its fitted step function and vertical lines at
/// the estimated break dates.
pub fn step_overlay_svg(y: &[f64], fit: &BreakFit, start: Option<Month>) -> String {
    let n = y.len();
    let (mut lo, mut hi) = y
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if !(hi > lo) {
        lo -= 0.5;
        hi += 0.5;
    }
    let pad = 0.05 * (hi - lo);
    let (lo, hi) = (lo - pad, hi + pad);
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let x = |t: f64| MARGIN_L + plot_w * t / (n.max(2) - 1) as f64;
    let sy = |v: f64| MARGIN_T + plot_h * (1.0 - (v - lo) / (hi - lo));

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(svg, "  <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
    // axes
    let _ = writeln!(
        svg,
        "  <line x1=\"{MARGIN_L}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
        HEIGHT - MARGIN_B,
        WIDTH - MARGIN_R,
        HEIGHT - MARGIN_B
    );
    let _ = writeln!(
        svg,
        "  <line x1=\"{MARGIN_L}\" y1=\"{MARGIN_T}\" x2=\"{MARGIN_L}\" y2=\"{}\" stroke=\"black\"/>",
        HEIGHT - MARGIN_B
    );
    for (v, anchor_y) in [(lo, HEIGHT - MARGIN_B), (hi, MARGIN_T + 4.0)] {
        let _ = writeln!(
            svg,
            "  <text x=\"{}\" y=\"{anchor_y}\" font-size=\"12\" text-anchor=\"end\">{}</text>",
            MARGIN_L - 6.0,
            fmt(v)
        );
    }
    if let Some(start) = start {
        let end = start.add_months(n as i64 - 1);
        let _ = writeln!(
            svg,
            "  <text x=\"{MARGIN_L}\" y=\"{}\" font-size=\"12\">{}</text>",
            HEIGHT - MARGIN_B + 16.0,
            start.colon_format()
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{}</text>",
            WIDTH - MARGIN_R,
            HEIGHT - MARGIN_B + 16.0,
            end.colon_format()
        );
    }
    // the series
    let mut points = String::new();
    for (t, &v) in y.iter().enumerate() {
        let _ = write!(points, "{},{} ", fmt(x(t as f64)), fmt(sy(v)));
    }
    let _ = writeln!(
        svg,
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\"/>",
        points.trim_end()
    );
    // the fitted step function
    let mut bounds = vec![0usize];
    bounds.extend(&fit.dates);
    bounds.push(n);
    let mut step = String::new();
    for (j, w) in bounds.windows(2).enumerate() {
        let v = sy(fit.regimes[j].mean);
        let _ = write!(
            step,
            "{},{} {},{} ",
            fmt(x(w[0] as f64)),
            fmt(v),
            fmt(x(w[1].saturating_sub(1) as f64)),
            fmt(v)
        );
    }
    let _ = writeln!(
        svg,
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"firebrick\" stroke-width=\"2\"/>",
        step.trim_end()
    );
    // break-date markers
    for &d in &fit.dates {
        let xb = x(d as f64 - 0.5);
        let _ = writeln!(
            svg,
            "  <line x1=\"{}\" y1=\"{MARGIN_T}\" x2=\"{}\" y2=\"{}\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>",
            fmt(xb),
            fmt(xb),
            HEIGHT - MARGIN_B
        );
    }
    svg.push_str("</svg>\n");
    svg
}
