//! Line charts of retained sample counts against subset count, one chart per
//! noise ratio: consensus (dashed) and sub-model mean (solid), anomalies in
//! red and normals in green.

use std::fmt::Write as _;

use crate::sweep::CellSummary;

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 320.0;
const MARGIN: f64 = 48.0;

struct Series<'a> {
    name: &'a str,
    color: &'a str,
    dashed: bool,
    values: Vec<f64>,
}

/// Chart for the cells of a single `alpha`, ordered by `k`.
pub fn retained_counts_chart(alpha: f64, cells: &[&CellSummary]) -> String {
    let ks: Vec<f64> = cells.iter().map(|c| c.k as f64).collect();
    let series = [
        Series {
            name: "#Anomaly (consensus)",
            color: "#d62728",
            dashed: true,
            values: cells.iter().map(|c| c.mean_retained_anomalous).collect(),
        },
        Series {
            name: "#Anomaly (sub-model)",
            color: "#d62728",
            dashed: false,
            values: cells.iter().map(|c| c.mean_submodel_retained_anomalous).collect(),
        },
        Series {
            name: "#Normal (consensus)",
            color: "#2ca02c",
            dashed: true,
            values: cells.iter().map(|c| c.mean_retained_normal).collect(),
        },
        Series {
            name: "#Normal (sub-model)",
            color: "#2ca02c",
            dashed: false,
            values: cells.iter().map(|c| c.mean_submodel_retained_normal).collect(),
        },
    ];
    let x_min = ks.iter().copied().fold(f64::INFINITY, f64::min);
    let x_max = ks.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let y_max = series
        .iter()
        .flat_map(|s| s.values.iter().copied())
        .fold(1.0, f64::max);
    let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };
    let px = |k: f64| MARGIN + (k - x_min) / x_span * (WIDTH - 2.0 * MARGIN);
    let py = |v: f64| HEIGHT - MARGIN - v / y_max * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">retained samples, alpha = {alpha}</text>"#,
        WIDTH / 2.0
    );
    let (x0, y0) = (MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        out,
        r#"<path d="M{x0} {MARGIN} L{x0} {y0} L{} {y0}" stroke="black" fill="none"/>"#,
        WIDTH - MARGIN
    );
    for &k in &ks {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="11">{k}</text>"#,
            px(k),
            y0 + 16.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11">{y_max:.0}</text>"#,
        x0 - 4.0,
        py(y_max) + 4.0
    );
    for (i, s) in series.iter().enumerate() {
        let points: Vec<String> = ks
            .iter()
            .zip(&s.values)
            .map(|(&k, &v)| format!("{:.2},{:.2}", px(k), py(v)))
            .collect();
        let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            out,
            r#"<polyline points="{}" stroke="{}" stroke-width="2" fill="none"{dash}/>"#,
            points.join(" "),
            s.color
        );
        let ly = MARGIN + 14.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}" stroke-width="2"{dash}/>"#,
            WIDTH - MARGIN - 150.0,
            WIDTH - MARGIN - 126.0,
            s.color
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11">{}</text>"#,
            WIDTH - MARGIN - 120.0,
            ly + 4.0,
            s.name
        );
    }
    out.push_str("</svg>\n");
    out
}
