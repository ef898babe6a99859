//! Deterministic SVG line charts.
//!
//! Hand-rolled writer rather than a plotting crate so the output is
//! byte-stable given the same data: fixed layout, fixed precision, no
//! timestamps. Axes and ticks are drawn with `<line>`/`<path>` elements;
//! `<polyline>` is reserved for data series, one per series, so structural
//! checks can count them. The plotted data table is embedded in a trailing
//! XML comment for auditability.

use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 160.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;
const TICKS: usize = 5;

/// Fixed palette; series take colors in order.
pub const PALETTE: [&str; 6] = [
    "#ff7f0e", "#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
];

/// One named data series.
#[derive(Debug, Clone)]
pub struct PlotSeries {
    pub label: String,
    pub color: String,
    pub points: Vec<(f64, f64)>,
}

fn fmt_coord(v: f64) -> String {
    format!("{v:.2}")
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.4}");
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    if trimmed.is_empty() || trimmed == "-" {
        "0".to_string()
    } else {
        trimmed.to_string()
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Render a line chart. Returns the SVG document as a string.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[PlotSeries]) -> String {
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in &s.points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if !x_min.is_finite() {
        x_min = 0.0;
        x_max = 1.0;
        y_min = 0.0;
        y_max = 1.0;
    }
    if x_max - x_min < 1e-12 {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if y_max - y_min < 1e-12 {
        y_min -= 0.5;
        y_max += 0.5;
    }
    let pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| MARGIN_TOP + plot_h - (y - y_min) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        fmt_coord(MARGIN_LEFT + plot_w / 2.0),
        escape(title)
    );

    // Axes.
    let x0 = fmt_coord(MARGIN_LEFT);
    let y0 = fmt_coord(MARGIN_TOP + plot_h);
    let x1 = fmt_coord(MARGIN_LEFT + plot_w);
    let y1 = fmt_coord(MARGIN_TOP);
    let _ = writeln!(
        svg,
        r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black" stroke-width="1"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black" stroke-width="1"/>"#
    );

    // Ticks and grid.
    for i in 0..=TICKS {
        let fx = x_min + (x_max - x_min) * i as f64 / TICKS as f64;
        let px = fmt_coord(sx(fx));
        let _ = writeln!(
            svg,
            r#"<line x1="{px}" y1="{y0}" x2="{px}" y2="{}" stroke="black" stroke-width="1"/>"#,
            fmt_coord(MARGIN_TOP + plot_h + 5.0)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{px}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            fmt_coord(MARGIN_TOP + plot_h + 20.0),
            fmt_tick(fx)
        );
        let fy = y_min + (y_max - y_min) * i as f64 / TICKS as f64;
        let py = fmt_coord(sy(fy));
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{py}" x2="{x0}" y2="{py}" stroke="black" stroke-width="1"/>"#,
            fmt_coord(MARGIN_LEFT - 5.0)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{py}" font-family="sans-serif" font-size="11" text-anchor="end" dominant-baseline="middle">{}</text>"#,
            fmt_coord(MARGIN_LEFT - 8.0),
            fmt_tick(fy)
        );
    }

    // Axis labels.
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
        fmt_coord(MARGIN_LEFT + plot_w / 2.0),
        fmt_coord(HEIGHT - 12.0),
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"#,
        fmt_coord(MARGIN_TOP + plot_h / 2.0),
        fmt_coord(MARGIN_TOP + plot_h / 2.0),
        escape(y_label)
    );

    // Data series: one polyline each.
    for s in series {
        let mut points = String::new();
        for &(x, y) in &s.points {
            let _ = write!(points, "{},{} ", fmt_coord(sx(x)), fmt_coord(sy(y)));
        }
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            s.color,
            points.trim_end()
        );
    }

    // Legend.
    for (i, s) in series.iter().enumerate() {
        let ly = MARGIN_TOP + 14.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="2"/>"#,
            fmt_coord(WIDTH - MARGIN_RIGHT + 12.0),
            fmt_coord(ly),
            fmt_coord(WIDTH - MARGIN_RIGHT + 34.0),
            fmt_coord(ly),
            s.color
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" dominant-baseline="middle">{}</text>"#,
            fmt_coord(WIDTH - MARGIN_RIGHT + 40.0),
            fmt_coord(ly),
            escape(&s.label)
        );
    }

    // Embedded data table. XML comments cannot contain "--"; values here
    // are numeric so only the label line needs care.
    let _ = writeln!(svg, "<!-- data");
    let labels: Vec<String> = series.iter().map(|s| s.label.replace("--", "-")).collect();
    let _ = writeln!(svg, "x,{}", labels.join(","));
    let rows = series.iter().map(|s| s.points.len()).max().unwrap_or(0);
    for row in 0..rows {
        let x = series
            .iter()
            .find_map(|s| s.points.get(row).map(|p| p.0))
            .unwrap_or(f64::NAN);
        let mut line = format!("{x}");
        for s in series {
            match s.points.get(row) {
                Some(&(_, y)) => {
                    let _ = write!(line, ",{y}");
                }
                None => line.push(','),
            }
        }
        let _ = writeln!(svg, "{line}");
    }
    let _ = writeln!(svg, "-->");
    svg.push_str("</svg>\n");
    svg
}
