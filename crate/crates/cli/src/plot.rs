//! Static SVG line plots and CSV traces.

use std::fmt::Write;

use crate::error::CliError;
use crate::json::float;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;

pub struct Trace {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Non-finite points break the polyline.
    pub points: Vec<(f64, f64)>,
    /// Drawn on the baseline when `y` is not finite.
    pub markers: Vec<(f64, f64)>,
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo <= 1e-12 * lo.abs().max(1.0) {
        let pad = 0.5 * lo.abs().max(1.0);
        return (lo - pad, hi + pad);
    }
    (lo, hi)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn svg(trace: &Trace) -> String {
    let (x0, x1) = range(trace.points.iter().chain(&trace.markers).map(|p| p.0));
    let (y0, y1) = range(trace.points.iter().chain(&trace.markers).map(|p| p.1));
    let (pw, ph) = (WIDTH - 2.0 * MARGIN, HEIGHT - 2.0 * MARGIN);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * ph;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, WIDTH / 2.0, escape(&trace.title));
    let _ = writeln!(
        s,
        r#"<path class="axes" d="M{m:.2} {t:.2} L{m:.2} {b:.2} L{r:.2} {b:.2}" fill="none" stroke="black"/>"#,
        m = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    for (v, anchor, x, y) in [
        (x0, "start", MARGIN, HEIGHT - MARGIN + 16.0),
        (x1, "end", WIDTH - MARGIN, HEIGHT - MARGIN + 16.0),
    ] {
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}">{}</text>"#, tick(v));
    }
    for (v, y) in [(y0, HEIGHT - MARGIN), (y1, MARGIN)] {
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, MARGIN - 6.0, y + 4.0, tick(v));
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0,
        escape(&trace.x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(&trace.y_label)
    );
    let mut segments: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
    for &(x, y) in &trace.points {
        if x.is_finite() && y.is_finite() {
            segments.last_mut().unwrap().push((sx(x), sy(y)));
        } else if !segments.last().unwrap().is_empty() {
            segments.push(Vec::new());
        }
    }
    for seg in segments.iter().filter(|s| !s.is_empty()) {
        let pts: Vec<String> = seg.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(
            s,
            r##"<polyline class="trace" points="{}" fill="none" stroke="#1f5fa8" stroke-width="1.5"/>"##,
            pts.join(" ")
        );
    }
    for &(x, y) in &trace.markers {
        let cy = if y.is_finite() { sy(y) } else { HEIGHT - MARGIN };
        let _ = writeln!(
            s,
            r##"<circle class="marker" cx="{:.2}" cy="{cy:.2}" r="4" fill="#c0392b"/>"##,
            sx(x)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64) -> String {
    if v == 0.0 || (1e-3..1e4).contains(&v.abs()) {
        format!("{v:.3}")
    } else {
        format!("{v:.2e}")
    }
}

pub enum Cell {
    Int(usize),
    Float(f64),
}

pub fn csv(header: &[&str], rows: &[Vec<Cell>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::construction("SerializationError", e.to_string());
    w.write_record(header).map_err(fail)?;
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Int(i) => i.to_string(),
                Cell::Float(x) => float(*x),
            })
            .collect();
        w.write_record(&cells).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::construction("SerializationError", e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
