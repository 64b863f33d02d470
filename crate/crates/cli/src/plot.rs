//! Plot-ready data emission: a long-format CSV keyed by
//! `(protocol, p_opt, round)` carrying the CH-count and alive-count
//! curves, and self-contained SVG line charts (one file per metric per
//! p_opt, protocols overlaid). Rendering is a pure function of the inputs
//! — fixed canvas, fixed palette, fixed numeric formatting — so identical
//! results produce byte-identical files.

use std::fmt::Write as _;

use clustersim_core::SimulationResult;

use crate::config::RunKey;
use crate::error::CliResult;

/// Header of the long-format plot CSV.
pub const PLOT_CSV_HEADER: &str = "protocol,p_opt,round,n_ch,n_alive";

/// Renders the long-format plot CSV for the given runs (one row per run
/// per round, runs in the given order).
pub fn plot_data_csv(runs: &[(RunKey, &SimulationResult)]) -> String {
    let mut out = String::from(PLOT_CSV_HEADER);
    out.push('\n');
    for (key, result) in runs {
        let slug = key.protocol_slug();
        for m in &result.per_round {
            writeln!(
                out,
                "{slug},{},{},{},{}",
                key.p_opt, m.round, m.n_ch, m.n_alive
            )
            .expect("writing to String cannot fail");
        }
    }
    out
}

/// One curve of a chart: a label, a stroke color, and (x, y) points.
pub struct Series {
    pub label: String,
    pub color: &'static str,
    pub points: Vec<(f64, f64)>,
}

/// Stable per-protocol stroke colors.
pub fn protocol_color(slug: &str) -> &'static str {
    match slug {
        "leach" => "#1f77b4",
        "sep" => "#d62728",
        "deec" => "#2ca02c",
        "teen" => "#9467bd",
        _ => "#7f7f7f",
    }
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 44.0;
const MARGIN_BOTTOM: f64 = 52.0;

fn fmt_tick(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e9 {
        format!("{}", v as i64)
    } else {
        format!("{v:.1}")
    }
}

/// Renders a line chart as a standalone SVG document. Axes start at 0; the
/// y range is padded 5% above the data maximum. Output depends only on the
/// arguments.
pub fn svg_line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let x_max = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .fold(1.0_f64, f64::max);
    let y_max = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .fold(1.0_f64, f64::max)
        * 1.05;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = move |x: f64| MARGIN_LEFT + x / x_max * plot_w;
    let sy = move |y: f64| MARGIN_TOP + plot_h - y / y_max * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(
        svg,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{title}</text>",
        MARGIN_LEFT + plot_w / 2.0
    );

    // Gridlines and ticks: five equal intervals per axis.
    for i in 0..=5u32 {
        let fx = x_max * i as f64 / 5.0;
        let fy = y_max * i as f64 / 5.0;
        let px = sx(fx);
        let py = sy(fy);
        let _ = writeln!(
            svg,
            "<line x1=\"{px:.2}\" y1=\"{MARGIN_TOP:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"#dddddd\"/>",
            MARGIN_TOP + plot_h
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{MARGIN_LEFT:.2}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" stroke=\"#dddddd\"/>",
            MARGIN_LEFT + plot_w
        );
        let _ = writeln!(
            svg,
            "<text x=\"{px:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
            MARGIN_TOP + plot_h + 18.0,
            fmt_tick(fx)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
            MARGIN_LEFT - 8.0,
            py + 4.0,
            fmt_tick(fy)
        );
    }

    // Axes.
    let _ = writeln!(
        svg,
        "<line x1=\"{MARGIN_LEFT:.2}\" y1=\"{MARGIN_TOP:.2}\" x2=\"{MARGIN_LEFT:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        MARGIN_TOP + plot_h
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{MARGIN_LEFT:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        MARGIN_TOP + plot_h,
        MARGIN_LEFT + plot_w,
        MARGIN_TOP + plot_h
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{x_label}</text>",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"16\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2})\">{y_label}</text>",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );

    // Curves and legend.
    for (idx, s) in series.iter().enumerate() {
        if !s.points.is_empty() {
            let mut points = String::new();
            for &(x, y) in &s.points {
                let _ = write!(points, "{:.2},{:.2} ", sx(x), sy(y));
            }
            let _ = writeln!(
                svg,
                "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>",
                s.color,
                points.trim_end()
            );
        }
        let ly = MARGIN_TOP + 8.0 + idx as f64 * 18.0;
        let lx = MARGIN_LEFT + plot_w + 16.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{lx:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{}\" stroke-width=\"1.5\"/>",
            lx + 22.0,
            s.color
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
            lx + 28.0,
            ly + 4.0,
            s.label
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Builds the per-metric, per-p_opt chart set from the given runs:
/// `(file_name, svg_document)` pairs, protocols overlaid per chart.
/// `runs` must already be restricted to one seed per (protocol, p_opt).
pub fn build_charts(runs: &[(RunKey, &SimulationResult)]) -> CliResult<Vec<(String, String)>> {
    let mut p_values: Vec<f64> = runs.iter().map(|(k, _)| k.p_opt).collect();
    p_values.sort_by(f64::total_cmp);
    p_values.dedup();

    type Extract = fn(&clustersim_core::RoundMetrics) -> f64;
    let metrics: [(&str, &str, Extract); 2] = [
        ("n_ch", "cluster heads", |m| m.n_ch as f64),
        ("n_alive", "alive nodes", |m| m.n_alive as f64),
    ];

    let mut charts = Vec::new();
    for &p in &p_values {
        for (metric, metric_label, extract) in metrics {
            let mut series: Vec<Series> = Vec::new();
            for (key, result) in runs.iter().filter(|(k, _)| k.p_opt == p) {
                let slug = key.protocol_slug();
                series.push(Series {
                    label: slug.to_string(),
                    color: protocol_color(slug),
                    points: result
                        .per_round
                        .iter()
                        .map(|m| (m.round as f64, extract(m)))
                        .collect(),
                });
            }
            series.sort_by(|a, b| a.label.cmp(&b.label));
            let title = format!("{metric_label} per round, p_opt = {p}");
            let svg = svg_line_chart(&title, "round", metric_label, &series);
            charts.push((format!("plot_{metric}_p{p}.svg"), svg));
        }
    }
    Ok(charts)
}
