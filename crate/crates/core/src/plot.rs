//! Standalone SVG box plots.
//!
//! Boxes use standard Tukey semantics: the box spans the quartiles, the line
//! inside is the median, the dot is the mean, whiskers reach the most extreme
//! data points within 1.5 IQR of the box. Every box group carries its
//! statistics as `data-*` attributes so the numbers can be read back out of
//! the file and checked against the underlying CSV.

use std::fmt::Write as _;

/// Five-number-plus-mean summary of one series in one bucket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxStats {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
}

/// Quantile with linear interpolation between order statistics.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = q * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Computes box statistics; `None` for an empty series.
pub fn box_stats(values: &[f64]) -> Option<BoxStats> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile(&sorted, 0.25);
    let median = quantile(&sorted, 0.5);
    let q3 = quantile(&sorted, 0.75);
    let iqr = q3 - q1;
    let low_fence = q1 - 1.5 * iqr;
    let high_fence = q3 + 1.5 * iqr;
    let whisker_low = sorted
        .iter()
        .copied()
        .find(|v| *v >= low_fence)
        .unwrap_or(sorted[0]);
    let whisker_high = sorted
        .iter()
        .rev()
        .copied()
        .find(|v| *v <= high_fence)
        .unwrap_or(sorted[sorted.len() - 1]);
    Some(BoxStats {
        count: sorted.len(),
        mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
        median,
        q1,
        q3,
        whisker_low,
        whisker_high,
    })
}

/// One x-axis position holding one box per series.
#[derive(Debug, Clone)]
pub struct BoxGroup {
    pub bucket: String,
    pub series: Vec<(String, BoxStats)>,
}

const PALETTE: [&str; 6] = [
    "#4878d0", "#ee854a", "#6acc64", "#d65f5f", "#956cb4", "#8c613c",
];

/// Renders grouped box plots into a self-contained SVG document.
pub fn render_box_plot(title: &str, x_label: &str, y_label: &str, groups: &[BoxGroup]) -> String {
    let width = 900.0_f64;
    let height = 480.0_f64;
    let margin_left = 70.0;
    let margin_right = 160.0;
    let margin_top = 50.0;
    let margin_bottom = 70.0;
    let plot_w = width - margin_left - margin_right;
    let plot_h = height - margin_top - margin_bottom;

    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    let mut series_names: Vec<&str> = Vec::new();
    for g in groups {
        for (name, s) in &g.series {
            y_min = y_min.min(s.whisker_low).min(s.mean);
            y_max = y_max.max(s.whisker_high).max(s.mean);
            if !series_names.contains(&name.as_str()) {
                series_names.push(name);
            }
        }
    }
    if !y_min.is_finite() {
        y_min = 0.0;
        y_max = 1.0;
    }
    if y_max - y_min < 1e-12 {
        y_max = y_min + 1.0;
    }
    let pad = 0.05 * (y_max - y_min);
    let (y_min, y_max) = (y_min - pad, y_max + pad);
    let y_pos = |v: f64| margin_top + plot_h * (1.0 - (v - y_min) / (y_max - y_min));

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{width}" height="{height}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        width / 2.0,
        xml_escape(title)
    );

    // Axes.
    let _ = writeln!(
        svg,
        r#"<line x1="{margin_left}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        margin_top + plot_h,
        margin_left + plot_w,
        margin_top + plot_h
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{margin_left}" y1="{margin_top}" x2="{margin_left}" y2="{}" stroke="black"/>"#,
        margin_top + plot_h
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
        margin_left + plot_w / 2.0,
        height - 18.0,
        xml_escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 20 {})">{}</text>"#,
        margin_top + plot_h / 2.0,
        margin_top + plot_h / 2.0,
        xml_escape(y_label)
    );

    // Y ticks.
    for tick in 0..=5 {
        let v = y_min + (y_max - y_min) * tick as f64 / 5.0;
        let y = y_pos(v);
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{y}" x2="{margin_left}" y2="{y}" stroke="black"/>"#,
            margin_left - 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{:.2}</text>"#,
            margin_left - 8.0,
            y + 4.0,
            v
        );
    }

    let n_groups = groups.len().max(1);
    let group_w = plot_w / n_groups as f64;
    let n_series = series_names.len().max(1);
    let slot_w = group_w / (n_series + 1) as f64;
    let box_w = (slot_w * 0.8).min(40.0);

    for (gi, g) in groups.iter().enumerate() {
        let group_x = margin_left + gi as f64 * group_w;
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            group_x + group_w / 2.0,
            margin_top + plot_h + 20.0,
            xml_escape(&g.bucket)
        );
        for (name, stats) in &g.series {
            let si = series_names.iter().position(|s| s == name).unwrap_or(0);
            let color = PALETTE[si % PALETTE.len()];
            let cx = group_x + (si + 1) as f64 * slot_w;
            let x0 = cx - box_w / 2.0;

            let _ = writeln!(
                svg,
                r#"<g class="box" data-bucket="{}" data-series="{}" data-count="{}" data-mean="{}" data-median="{}" data-q1="{}" data-q3="{}" data-whisker-low="{}" data-whisker-high="{}">"#,
                xml_escape(&g.bucket),
                xml_escape(name),
                stats.count,
                stats.mean,
                stats.median,
                stats.q1,
                stats.q3,
                stats.whisker_low,
                stats.whisker_high
            );
            // Whiskers.
            let _ = writeln!(
                svg,
                r#"<line x1="{cx}" y1="{}" x2="{cx}" y2="{}" stroke="{color}"/>"#,
                y_pos(stats.whisker_low),
                y_pos(stats.q1)
            );
            let _ = writeln!(
                svg,
                r#"<line x1="{cx}" y1="{}" x2="{cx}" y2="{}" stroke="{color}"/>"#,
                y_pos(stats.q3),
                y_pos(stats.whisker_high)
            );
            for v in [stats.whisker_low, stats.whisker_high] {
                let _ = writeln!(
                    svg,
                    r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}"/>"#,
                    cx - box_w / 4.0,
                    y_pos(v),
                    cx + box_w / 4.0,
                    y_pos(v)
                );
            }
            // Box with median line and mean dot.
            let _ = writeln!(
                svg,
                r#"<rect x="{x0}" y="{}" width="{box_w}" height="{}" fill="{color}" fill-opacity="0.35" stroke="{color}"/>"#,
                y_pos(stats.q3),
                (y_pos(stats.q1) - y_pos(stats.q3)).max(0.5)
            );
            let _ = writeln!(
                svg,
                r#"<line x1="{x0}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="2"/>"#,
                y_pos(stats.median),
                x0 + box_w,
                y_pos(stats.median)
            );
            let _ = writeln!(
                svg,
                r#"<circle cx="{cx}" cy="{}" r="3" fill="{color}"/>"#,
                y_pos(stats.mean)
            );
            let _ = writeln!(svg, "</g>");
        }
    }

    // Legend.
    for (si, name) in series_names.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let y = margin_top + 20.0 * si as f64;
        let x = width - margin_right + 20.0;
        let _ = writeln!(
            svg,
            r#"<rect x="{x}" y="{}" width="14" height="14" fill="{color}" fill-opacity="0.6"/>"#,
            y - 11.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{y}" font-family="sans-serif" font-size="12">{}</text>"#,
            x + 20.0,
            xml_escape(name)
        );
    }

    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stats_of_a_singleton_collapse() {
        let s = box_stats(&[0.4]).unwrap();
        assert_eq!(s.count, 1);
        assert_eq!(s.mean, 0.4);
        assert_eq!(s.median, 0.4);
        assert_eq!(s.q1, 0.4);
        assert_eq!(s.q3, 0.4);
        assert_eq!(s.whisker_low, 0.4);
        assert_eq!(s.whisker_high, 0.4);
    }

    #[test]
    fn quartiles_interpolate_linearly() {
        let s = box_stats(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(s.median, 2.5);
        assert_eq!(s.q1, 1.75);
        assert_eq!(s.q3, 3.25);
    }

    #[test]
    fn whiskers_clip_outliers() {
        let mut values: Vec<f64> = (0..20).map(|i| 0.5 + i as f64 * 0.01).collect();
        values.push(5.0); // far outlier
        let s = box_stats(&values).unwrap();
        assert!(s.whisker_high < 5.0);
    }

    #[test]
    fn empty_series_has_no_stats() {
        assert!(box_stats(&[]).is_none());
    }

    #[test]
    fn svg_embeds_stats_as_data_attributes() {
        let stats = box_stats(&[0.2, 0.4, 0.6, 0.8]).unwrap();
        let groups = vec![BoxGroup {
            bucket: "0-10%".into(),
            series: vec![("zsg".into(), stats)],
        }];
        let svg = render_box_plot("title", "x", "ratio", &groups);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains(&format!(r#"data-median="{}""#, stats.median)));
        assert!(svg.contains(&format!(r#"data-mean="{}""#, stats.mean)));
    }
}
