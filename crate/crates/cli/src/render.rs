//! Deterministic SVG scatter plots of labelled point clouds.

use std::collections::BTreeMap;
use std::fmt::Write;

use ifscheck_core::geometry::Point2;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];
const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;
const LEGEND_WIDTH: f64 = 180.0;
/// Legend entries shown before the rest are summarised.
const LEGEND_MAX: usize = 24;

#[derive(Clone, Debug)]
pub struct Style {
    pub point_radius: f64,
    pub title: Option<String>,
}

impl Default for Style {
    fn default() -> Self {
        Style {
            point_radius: 1.2,
            title: None,
        }
    }
}

/// Colour per label, assigned in sorted label order; an empty label set
/// (or only empty labels) renders in a single colour.
fn colours(rows: &[(Point2, String)]) -> BTreeMap<&str, &'static str> {
    let mut map = BTreeMap::new();
    for (_, l) in rows {
        map.entry(l.as_str()).or_insert("");
    }
    for (k, (_, c)) in map.iter_mut().enumerate() {
        *c = PALETTE[k % PALETTE.len()];
    }
    map
}

pub fn render_svg(rows: &[(Point2, String)], style: &Style) -> String {
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for (p, _) in rows {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    if rows.is_empty() {
        (x0, y0, x1, y1) = (0.0, 0.0, 1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    // Centre the data in the square plot area; y grows upwards.
    let ox = MARGIN + 0.5 * (SIZE - 2.0 * MARGIN - (x1 - x0) * scale);
    let oy = MARGIN + 0.5 * (SIZE - 2.0 * MARGIN - (y1 - y0) * scale);
    let px = |x: f64| ox + (x - x0) * scale;
    let py = |y: f64| SIZE - (oy + (y - y0) * scale);

    let colours = colours(rows);
    let labelled = colours.len() > 1 || colours.keys().any(|k| !k.is_empty());
    let width = if labelled { SIZE + LEGEND_WIDTH } else { SIZE };

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{SIZE}" viewBox="0 0 {width} {SIZE}">"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<rect x="0" y="0" width="{width}" height="{SIZE}" fill="white"/>"#
    )
    .unwrap();
    writeln!(
        s,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{0}" height="{0}" fill="none" stroke="#444" stroke-width="1"/>"##,
        SIZE - 2.0 * MARGIN
    )
    .unwrap();
    let tick = |v: f64| format!("{v:.4}");
    writeln!(
        s,
        r##"<g font-family="monospace" font-size="11" fill="#444"><text x="{MARGIN}" y="{0}">{1}, {2}</text><text x="{3}" y="{4}" text-anchor="end">{5}, {6}</text></g>"##,
        SIZE - MARGIN + 14.0,
        tick(x0),
        tick(y0),
        SIZE - MARGIN,
        MARGIN - 6.0,
        tick(x1),
        tick(y1)
    )
    .unwrap();
    if let Some(t) = &style.title {
        writeln!(
            s,
            r#"<text x="{MARGIN}" y="24" font-family="sans-serif" font-size="16">{}</text>"#,
            escape(t)
        )
        .unwrap();
    }

    for (label, colour) in &colours {
        writeln!(s, r#"<g fill="{colour}" data-label="{}">"#, escape(label)).unwrap();
        for (p, _) in rows.iter().filter(|(_, l)| l == label) {
            writeln!(
                s,
                r#"<circle cx="{:.3}" cy="{:.3}" r="{}"/>"#,
                px(p.x),
                py(p.y),
                style.point_radius
            )
            .unwrap();
        }
        s.push_str("</g>\n");
    }

    if labelled {
        s.push_str(r#"<g font-family="sans-serif" font-size="12">"#);
        s.push('\n');
        for (k, (label, colour)) in colours.iter().take(LEGEND_MAX).enumerate() {
            let y = MARGIN + 18.0 * k as f64;
            writeln!(
                s,
                r#"<rect x="{0}" y="{1}" width="10" height="10" fill="{colour}"/><text x="{2}" y="{3}">{4}</text>"#,
                SIZE + 10.0,
                y,
                SIZE + 26.0,
                y + 9.0,
                escape(if label.is_empty() { "(unlabelled)" } else { label })
            )
            .unwrap();
        }
        if colours.len() > LEGEND_MAX {
            writeln!(
                s,
                r#"<text x="{}" y="{}">+{} more</text>"#,
                SIZE + 10.0,
                MARGIN + 18.0 * LEGEND_MAX as f64 + 9.0,
                colours.len() - LEGEND_MAX
            )
            .unwrap();
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(labels: &[&str]) -> Vec<(Point2, String)> {
        labels
            .iter()
            .enumerate()
            .map(|(k, l)| (Point2::new(k as f64, (k * k) as f64), l.to_string()))
            .collect()
    }

    #[test]
    fn deterministic_bytes() {
        let r = rows(&["a", "b", "a", "c"]);
        assert_eq!(
            render_svg(&r, &Style::default()),
            render_svg(&r, &Style::default())
        );
    }

    #[test]
    fn one_colour_without_labels() {
        let svg = render_svg(&rows(&["", "", ""]), &Style::default());
        assert_eq!(svg.matches("<g fill=").count(), 1);
        assert!(!svg.contains("(unlabelled)"));
        let svg = render_svg(&rows(&["O_1", "I_1"]), &Style::default());
        assert_eq!(svg.matches("<g fill=").count(), 2);
        assert!(svg.contains(">O_1</text>"));
    }

    #[test]
    fn points_stay_inside_the_axis_box() {
        let svg = render_svg(&rows(&["a"; 20]), &Style::default());
        for c in svg.lines().filter(|l| l.starts_with("<circle")) {
            let num = |key: &str| -> f64 {
                let i = c.find(key).unwrap() + key.len() + 2;
                c[i..].split('"').next().unwrap().parse().unwrap()
            };
            for v in [num("cx"), num("cy")] {
                assert!((MARGIN..=SIZE - MARGIN).contains(&v), "{c}");
            }
        }
    }

    #[test]
    fn labels_are_escaped() {
        let svg = render_svg(&rows(&["a<b"]), &Style::default());
        assert!(svg.contains("a&lt;b"));
    }
}
