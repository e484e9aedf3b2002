//! Static SVG rendering of an entropy curve.

use std::fmt::Write as _;

use evap_core::CurveRecord;

const WIDTH: f64 = 720.0;
const PANEL_HEIGHT: f64 = 180.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 24.0;
const GAP: f64 = 40.0;
const MAX_POINTS: usize = 2000;

struct Panel {
    title: &'static str,
    color: &'static str,
    value: fn(&CurveRecord) -> f64,
}

const PANELS: [Panel; 3] = [
    Panel {
        title: "entanglement entropy",
        color: "#1f77b4",
        value: |r| r.entropy,
    },
    Panel {
        title: "vacuum probability p0",
        color: "#d62728",
        value: |r| r.vacuum_probability,
    },
    Panel {
        title: "decoupling distance",
        color: "#2ca02c",
        value: |r| r.decoupling_distance,
    },
];

/// Three stacked panels against slice index. Long curves are decimated to at
/// most a few thousand vertices per panel, always keeping the last record.
pub fn render_svg(records: &[CurveRecord]) -> String {
    let height = MARGIN_TOP + PANELS.len() as f64 * (PANEL_HEIGHT + GAP);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let stride = records.len().div_ceil(MAX_POINTS).max(1);
    let mut sample: Vec<&CurveRecord> = records.iter().step_by(stride).collect();
    if let (Some(last), Some(kept)) = (records.last(), sample.last()) {
        if kept.slice != last.slice {
            sample.push(last);
        }
    }
    let (s_min, s_max) = match (records.first(), records.last()) {
        (Some(a), Some(b)) => (a.slice as f64, (b.slice as f64).max(a.slice as f64 + 1.0)),
        _ => (0.0, 1.0),
    };
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;

    for (i, panel) in PANELS.iter().enumerate() {
        let top = MARGIN_TOP + i as f64 * (PANEL_HEIGHT + GAP);
        let values: Vec<f64> = sample.iter().map(|r| (panel.value)(r)).collect();
        let lo = values.iter().copied().fold(0.0f64, f64::min);
        let mut hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi.is_nan() || hi <= lo {
            hi = lo + 1.0;
        }
        let x = |s: f64| MARGIN_LEFT + (s - s_min) / (s_max - s_min) * plot_w;
        let y = |v: f64| top + PANEL_HEIGHT - (v - lo) / (hi - lo) * PANEL_HEIGHT;

        let _ = writeln!(
            svg,
            r##"<rect x="{MARGIN_LEFT}" y="{top}" width="{plot_w}" height="{PANEL_HEIGHT}" fill="none" stroke="#888"/>"##
        );
        let _ = writeln!(
            svg,
            r#"<text x="{MARGIN_LEFT}" y="{:.1}">{}</text>"#,
            top - 6.0,
            panel.title
        );
        for (v, anchor_y) in [(hi, top + 4.0), (lo, top + PANEL_HEIGHT)] {
            let _ = writeln!(
                svg,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
                MARGIN_LEFT - 6.0,
                anchor_y,
                fmt_tick(v)
            );
        }
        let bottom = top + PANEL_HEIGHT + 14.0;
        let _ = writeln!(
            svg,
            r#"<text x="{MARGIN_LEFT}" y="{bottom:.1}">{}</text><text x="{:.1}" y="{bottom:.1}" text-anchor="end">slice {}</text>"#,
            s_min,
            WIDTH - MARGIN_RIGHT,
            s_max
        );

        let mut points = String::new();
        for (r, v) in sample.iter().zip(&values) {
            let _ = write!(points, "{:.2},{:.2} ", x(r.slice as f64), y(*v));
        }
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            panel.color,
            points.trim_end()
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 || (1e-3..1e4).contains(&v.abs()) {
        format!("{v:.3}")
    } else {
        format!("{v:.2e}")
    }
}
