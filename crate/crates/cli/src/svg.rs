//! Minimal SVG line plots: axes, one polyline per series, a title.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 48.0;

pub struct Series<'a> {
    pub x: &'a [f64],
    pub y: &'a [f64],
}

pub fn line_plot(title: &str, series: &[Series<'_>]) -> String {
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for s in series {
        for &x in s.x {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
        }
        for &y in s.y {
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
    }
    if !(xmax > xmin) {
        xmax = xmin + 1.0;
    }
    if !(ymax > ymin) {
        ymax = ymin + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - xmin) / (xmax - xmin) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - ymin) / (ymax - ymin) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<!-- generator: fracdyn {} -->"#, env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="monospace" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    // Axes.
    let _ = writeln!(
        out,
        r#"<line x1="{m}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/>"#,
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    let _ = writeln!(
        out,
        r#"<line x1="{m}" y1="{t}" x2="{m}" y2="{b}" stroke="black"/>"#,
        m = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN
    );
    for (label, value, x, y, anchor) in [
        ("xmin", xmin, MARGIN, HEIGHT - MARGIN + 16.0, "middle"),
        ("xmax", xmax, WIDTH - MARGIN, HEIGHT - MARGIN + 16.0, "middle"),
        ("ymin", ymin, MARGIN - 6.0, HEIGHT - MARGIN, "end"),
        ("ymax", ymax, MARGIN - 6.0, MARGIN, "end"),
    ] {
        let _ = label;
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{y}" text-anchor="{anchor}" font-family="monospace" font-size="10">{value:.4}</text>"#
        );
    }
    let colors = ["#1f77b4", "#d62728", "#2ca02c"];
    for (i, s) in series.iter().enumerate() {
        let mut points = String::new();
        for (&x, &y) in s.x.iter().zip(s.y) {
            let _ = write!(points, "{:.2},{:.2} ", sx(x), sy(y));
        }
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{}" stroke-width="1" points="{}"/>"#,
            colors[i % colors.len()],
            points.trim_end()
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plot_contains_polyline_and_title() {
        let x = [0.0, 1.0, 2.0];
        let y = [0.0, 1.0, 0.5];
        let svg = line_plot("q vs n", &[Series { x: &x, y: &y }]);
        assert!(svg.contains("<polyline"));
        assert!(svg.contains("q vs n"));
        assert!(svg.starts_with("<svg"));
    }

    #[test]
    fn degenerate_ranges_do_not_divide_by_zero() {
        let x = [1.0, 1.0];
        let y = [2.0, 2.0];
        let svg = line_plot("flat", &[Series { x: &x, y: &y }]);
        assert!(!svg.contains("NaN"));
    }
}
