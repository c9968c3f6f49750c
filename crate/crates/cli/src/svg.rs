//! Minimal SVG 1.1 line plots.

use std::fmt::Write;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const DELTA_MIN: f64 = 0.35;
const DELTA_MAX: f64 = 1.0;

/// One polyline over a δ axis fixed to [0.35, 1] and a ρ axis from 0 to a
/// rounded-up maximum of the data.
pub fn render(title: &str, points: &[(f64, f64)]) -> String {
    let rho_max = nice_ceiling(points.iter().map(|p| p.1).fold(0.0, f64::max));
    let x = |d: f64| LEFT + (d - DELTA_MIN) / (DELTA_MAX - DELTA_MIN) * (WIDTH - LEFT - RIGHT);
    let y = |r: f64| HEIGHT - BOTTOM - r / rho_max * (HEIGHT - TOP - BOTTOM);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-size="16" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    let (x0, x1, y0, y1) = (x(DELTA_MIN), x(DELTA_MAX), y(0.0), y(rho_max));
    let _ = writeln!(s, r#"<g stroke="black" stroke-width="1">"#);
    let _ = writeln!(
        s,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}"/>"#
    );
    let _ = writeln!(
        s,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}"/>"#
    );
    for i in 0..=6 {
        let d = 0.4 + 0.1 * i as f64;
        let xd = x(d);
        let _ = writeln!(
            s,
            r#"<line x1="{xd:.2}" y1="{y0:.2}" x2="{xd:.2}" y2="{:.2}"/>"#,
            y0 + 5.0
        );
    }
    for i in 0..=5 {
        let yr = y(rho_max * i as f64 / 5.0);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{yr:.2}" x2="{x0:.2}" y2="{yr:.2}"/>"#,
            x0 - 5.0
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g font-size="12" font-family="sans-serif">"#);
    for i in 0..=6 {
        let d = 0.4 + 0.1 * i as f64;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{d:.1}</text>"#,
            x(d),
            y0 + 20.0
        );
    }
    for i in 0..=5 {
        let r = rho_max * i as f64 / 5.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 8.0,
            y(r) + 4.0,
            trim(r)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">delta</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">rho</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );
    let _ = writeln!(s, "</g>");

    let coords: Vec<String> = points
        .iter()
        .filter(|p| p.0 >= DELTA_MIN && p.0 <= DELTA_MAX)
        .map(|&(d, r)| format!("{:.2},{:.2}", x(d), y(r)))
        .collect();
    let _ = writeln!(
        s,
        r#"<polyline fill="none" stroke="steelblue" stroke-width="2" points="{}"/>"#,
        coords.join(" ")
    );
    s.push_str("</svg>\n");
    s
}

/// Smallest value of the form {1, 2, 5} × 10^k not below `v`.
fn nice_ceiling(v: f64) -> f64 {
    if !(v > 0.0) {
        return 1.0;
    }
    let base = 10f64.powf(v.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * base)
        .find(|&c| c >= v)
        .unwrap_or(10.0 * base)
}

fn trim(v: f64) -> String {
    let s = format!("{v:.4}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
