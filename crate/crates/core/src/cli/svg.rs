use std::fmt::Write as _;

use super::table::{format_sig, ResultTable};
use super::CliError;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// Which columns to draw: one x column and any number of y series.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub x: String,
    pub series: Vec<String>,
    pub title: String,
}

impl PlotSpec {
    pub fn new(x: &str, series: &[&str], title: &str) -> Self {
        Self {
            x: x.into(),
            series: series.iter().map(|s| s.to_string()).collect(),
            title: title.into(),
        }
    }
}

fn range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if lo > hi {
        return None;
    }
    if hi - lo < 1e-12 * hi.abs().max(1.0) {
        Some((lo - 0.5, hi + 0.5))
    } else {
        Some((lo, hi))
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Renders a line plot. NaN cells break a series into separate polylines.
pub fn render_svg(table: &ResultTable, spec: &PlotSpec) -> Result<String, CliError> {
    if table.rows().is_empty() {
        return Err(CliError::Usage(format!(
            "table '{}' has no rows to plot",
            table.name
        )));
    }
    if spec.series.is_empty() {
        return Err(CliError::Usage("no series selected".into()));
    }
    let missing = |c: &str| CliError::Usage(format!("column '{c}' not in table '{}'", table.name));
    let xs = table.column(&spec.x).ok_or_else(|| missing(&spec.x))?;
    let ys = spec
        .series
        .iter()
        .map(|s| table.column(s).ok_or_else(|| missing(s)))
        .collect::<Result<Vec<_>, _>>()?;

    let (x0, x1) = range(xs.iter().copied()).unwrap_or((0.0, 1.0));
    let (y0, y1) = range(ys.iter().flatten().copied()).unwrap_or((0.0, 1.0));
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let py = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="18" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + pw / 2.0,
        escape(&spec.title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );

    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (tx, ty) = (px(xv), py(yv));
        let _ = writeln!(
            s,
            r#"<line x1="{tx:.2}" y1="{:.2}" x2="{tx:.2}" y2="{:.2}" stroke="black"/><text x="{tx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 18.0,
            format_sig(xv, 4)
        );
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{ty:.2}" x2="{LEFT}" y2="{ty:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            ty + 4.0,
            format_sig(yv, 4)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 10.0,
        escape(&spec.x)
    );

    for (k, (name, y)) in spec.series.iter().zip(&ys).enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut segments: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
        for (&xv, &yv) in xs.iter().zip(y) {
            if xv.is_finite() && yv.is_finite() {
                segments.last_mut().expect("segment").push((px(xv), py(yv)));
            } else if !segments.last().expect("segment").is_empty() {
                segments.push(Vec::new());
            }
        }
        for seg in segments.iter().filter(|seg| !seg.is_empty()) {
            let pts: Vec<String> = seg.iter().map(|(a, b)| format!("{a:.2},{b:.2}")).collect();
            let _ = writeln!(
                s,
                r#"<polyline class="series" data-series="{}" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                escape(name),
                pts.join(" ")
            );
        }
        let ly = TOP + 10.0 + 18.0 * k as f64;
        let lx = WIDTH - RIGHT + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
