//! CSV and SVG emission for scatter series.

use std::fmt::Write as _;

use crate::dataset::ScatterSeries;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;

/// `x,y` header then one point per line, in row order.
pub fn series_csv(series: &ScatterSeries) -> String {
    let mut out = String::from("x,y\n");
    for (x, y) in &series.points {
        let _ = writeln!(out, "{x},{y}");
    }
    out
}

/// File stem for a series, e.g. `NOC_vs_NOL_log10`.
pub fn series_stem(series: &ScatterSeries) -> String {
    let suffix = if series.log10 { "_log10" } else { "" };
    format!("{}_vs_{}{suffix}", series.y_name, series.x_name)
}

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// A 640×480 scatter plot: 3px circles, labelled axes with min/max ticks.
pub fn series_svg(series: &ScatterSeries) -> String {
    let (x0, x1) = extent(series.points.iter().map(|p| p.0));
    let (y0, y1) = extent(series.points.iter().map(|p| p.1));
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * plot_w;
    let sy = |y: f64| MARGIN_TOP + plot_h - (y - y0) / (y1 - y0) * plot_h;
    let (xl, yl) = if series.log10 {
        (
            format!("log10({})", series.x_name),
            format!("log10({})", series.y_name),
        )
    } else {
        (series.x_name.clone(), series.y_name.clone())
    };
    let bottom = MARGIN_TOP + plot_h;
    let right = MARGIN_LEFT + plot_w;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        out,
        r#"<line x1="{MARGIN_LEFT}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" y2="{bottom}" stroke="black"/>"#
    );
    let tick = |v: f64| format!("{:.3}", v);
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN_LEFT}" y="{}" font-size="11" text-anchor="middle">{}</text>"#,
        bottom + 16.0,
        tick(x0)
    );
    let _ = writeln!(
        out,
        r#"<text x="{right}" y="{}" font-size="11" text-anchor="middle">{}</text>"#,
        bottom + 16.0,
        tick(x1)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{bottom}" font-size="11" text-anchor="end">{}</text>"#,
        MARGIN_LEFT - 6.0,
        tick(y0)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{}</text>"#,
        MARGIN_LEFT - 6.0,
        MARGIN_TOP + 4.0,
        tick(y1)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="14" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 15.0,
        escape(&xl)
    );
    let _ = writeln!(
        out,
        r#"<text x="20" y="{}" font-size="14" text-anchor="middle" transform="rotate(-90 20 {})">{}</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        escape(&yl)
    );
    for &(x, y) in &series.points {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#,
            sx(x),
            sy(y)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series() -> ScatterSeries {
        ScatterSeries {
            x_name: "NOL".into(),
            y_name: "NOC".into(),
            points: vec![(1.0, 2.0), (3.0, 5.0)],
            log10: true,
        }
    }

    #[test]
    fn csv_points() {
        assert_eq!(series_csv(&series()), "x,y\n1,2\n3,5\n");
        assert_eq!(series_stem(&series()), "NOC_vs_NOL_log10");
    }

    #[test]
    fn svg_structure() {
        let svg = series_svg(&series());
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains(r#"viewBox="0 0 640 480""#));
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(svg.contains("log10(NOL)"));
        assert!(svg.contains(r#"r="3""#));
        assert_eq!(svg, series_svg(&series()));
    }

    #[test]
    fn degenerate_extent() {
        let s = ScatterSeries {
            points: vec![(1.0, 1.0)],
            ..series()
        };
        assert!(!series_svg(&s).contains("NaN"));
    }
}
