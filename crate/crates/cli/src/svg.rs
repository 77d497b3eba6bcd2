//! Static SVG overlay of CDF curves on `[0,1] x [0,1]`.

use std::fmt::Write;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 48.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

pub struct Curve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

fn px(x: f64) -> f64 {
    MARGIN + x * SIZE
}

fn py(y: f64) -> f64 {
    MARGIN + (1.0 - y) * SIZE
}

/// `limit` is drawn in black and dashed, the others cycle through a fixed
/// palette.
pub fn render(curves: &[Curve], limit: &Curve) -> String {
    let total = SIZE + 2.0 * MARGIN;
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}" viewBox="0 0 {total} {total}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect x="0" y="0" width="{total}" height="{total}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="none" stroke="black" stroke-width="1"/>"#
    )
    .unwrap();
    for t in 0..=4 {
        let v = t as f64 / 4.0;
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="middle">{v}</text>"#,
            px(v),
            py(0.0) + 16.0
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="end">{v}</text>"#,
            px(0.0) - 6.0,
            py(v) + 4.0
        )
        .unwrap();
    }
    let line = |s: &mut String, c: &Curve, stroke: &str, dash: &str| {
        let pts: Vec<String> = c
            .points
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y)))
            .collect();
        writeln!(
            s,
            r#"<polyline fill="none" stroke="{stroke}" stroke-width="1.5"{dash} points="{}"/>"#,
            pts.join(" ")
        )
        .unwrap();
    };
    for (i, c) in curves.iter().enumerate() {
        line(&mut s, c, PALETTE[i % PALETTE.len()], "");
    }
    line(&mut s, limit, "black", r#" stroke-dasharray="5,3""#);
    let legend = curves
        .iter()
        .enumerate()
        .map(|(i, c)| (c.label.as_str(), PALETTE[i % PALETTE.len()]))
        .chain(std::iter::once((limit.label.as_str(), "black")));
    for (i, (label, colour)) in legend.enumerate() {
        let y = MARGIN + 16.0 + 16.0 * i as f64;
        writeln!(
            s,
            r#"<text x="{:.1}" y="{y:.1}" font-size="12" fill="{colour}">{label}</text>"#,
            MARGIN + 12.0
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}
