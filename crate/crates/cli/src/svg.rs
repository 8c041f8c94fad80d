//! Minimal SVG charts drawn straight from the data that is also written as CSV.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    /// Straight segments with point markers.
    Line,
    /// Right-continuous steps: each value holds until the next x.
    Step,
}

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn fit(xs: impl Iterator<Item = f64> + Clone, ys: impl Iterator<Item = f64> + Clone) -> Self {
        let (x0, x1) = padded(xs);
        let (y0, y1) = padded(ys);
        Self { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - TOP - BOTTOM)
    }
}

/// Data range, widened when degenerate so the frame never divides by zero.
fn padded(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) =
        vals.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 * lo.abs().max(1.0) {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

fn tick(v: f64) -> String {
    let s = if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-3) { format!("{v:.2e}") } else { format!("{v:.3}") };
    if s.contains('.') && !s.contains('e') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(out: &mut String, title: &str, frame: &Frame, xlabel: &str, ylabel: &str) {
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = write!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ =
        write!(out, r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#, WIDTH / 2.0, escape(title));
    let (l, r, t, b) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
    let _ = write!(out, r#"<rect x="{l}" y="{t}" width="{}" height="{}" fill="none" stroke="black"/>"#, r - l, b - t);
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = frame.x0 + f * (frame.x1 - frame.x0);
        let yv = frame.y0 + f * (frame.y1 - frame.y0);
        let (x, y) = (frame.px(xv), frame.py(yv));
        let _ = write!(out, r#"<line x1="{x:.1}" y1="{b}" x2="{x:.1}" y2="{:.1}" stroke="black"/>"#, b + 5.0);
        let _ = write!(out, r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, b + 18.0, tick(xv));
        let _ = write!(out, r#"<line x1="{:.1}" y1="{y:.1}" x2="{l}" y2="{y:.1}" stroke="black"/>"#, l - 5.0);
        let _ = write!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, l - 8.0, y + 4.0, tick(yv));
    }
    let _ = write!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        (l + r) / 2.0,
        HEIGHT - 10.0,
        escape(xlabel)
    );
    let _ = write!(
        out,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        (t + b) / 2.0,
        (t + b) / 2.0,
        escape(ylabel)
    );
}

pub fn line_chart(title: &str, xlabel: &str, ylabel: &str, series: &[Series], style: Style) -> String {
    let all = || series.iter().flat_map(|s| s.points.iter());
    let frame = Frame::fit(all().map(|p| p.0), all().map(|p| p.1));
    let mut out = String::new();
    header(&mut out, title, &frame, xlabel, ylabel);
    for (idx, s) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let mut path = String::new();
        for (i, &(x, y)) in s.points.iter().enumerate() {
            let (px, py) = (frame.px(x), frame.py(y));
            if i == 0 {
                let _ = write!(path, "M{px:.2},{py:.2}");
            } else if style == Style::Step {
                let _ = write!(path, " H{px:.2} V{py:.2}");
            } else {
                let _ = write!(path, " L{px:.2},{py:.2}");
            }
        }
        let _ = write!(out, r#"<path d="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>"#);
        if style == Style::Line && s.points.len() <= 60 {
            for &(x, y) in &s.points {
                let _ =
                    write!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#, frame.px(x), frame.py(y));
            }
        }
        let ly = TOP + 14.0 + 18.0 * idx as f64;
        let lx = WIDTH - RIGHT + 12.0;
        let _ = write!(
            out,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            lx + 18.0
        );
        let _ = write!(out, r#"<text x="{}" y="{}">{}</text>"#, lx + 24.0, ly + 4.0, escape(&s.label));
    }
    out.push_str("</svg>\n");
    out
}

/// Bars over `edges.len() - 1` bins.
pub fn histogram_chart(title: &str, xlabel: &str, edges: &[f64], counts: &[usize]) -> String {
    let frame = Frame::fit(edges.iter().copied(), counts.iter().map(|&c| c as f64).chain([0.0]));
    let mut out = String::new();
    header(&mut out, title, &frame, xlabel, "count");
    for (i, &c) in counts.iter().enumerate() {
        let (x0, x1) = (frame.px(edges[i]), frame.px(edges[i + 1]));
        let (y0, y1) = (frame.py(c as f64), frame.py(0.0));
        let _ = write!(
            out,
            r##"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="#1f77b4" stroke="white" stroke-width="0.5"/>"##,
            (x1 - x0).max(0.5),
            y1 - y0
        );
    }
    out.push_str("</svg>\n");
    out
}
