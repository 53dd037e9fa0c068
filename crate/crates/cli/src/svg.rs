//! Minimal static SVG plots: scatter points, polylines and markers.

use std::fmt::Write as _;

const W: f64 = 720.0;
const H: f64 = 540.0;
const MARGIN: f64 = 60.0;

#[derive(Clone, Copy)]
pub enum Marker {
    Dot,
    Triangle,
    Square,
}

enum Layer {
    Points { pts: Vec<(f64, f64)>, color: String, marker: Marker, size: f64 },
    Line { pts: Vec<(f64, f64)>, color: String },
}

pub struct Plot {
    title: String,
    xlabel: String,
    ylabel: String,
    layers: Vec<Layer>,
}

impl Plot {
    pub fn new(title: &str, xlabel: &str, ylabel: &str) -> Self {
        Self { title: title.into(), xlabel: xlabel.into(), ylabel: ylabel.into(), layers: Vec::new() }
    }

    pub fn points(&mut self, pts: Vec<(f64, f64)>, color: &str, marker: Marker, size: f64) -> &mut Self {
        self.layers.push(Layer::Points { pts, color: color.into(), marker, size });
        self
    }

    pub fn line(&mut self, pts: Vec<(f64, f64)>, color: &str) -> &mut Self {
        self.layers.push(Layer::Line { pts, color: color.into() });
        self
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for l in &self.layers {
            let pts = match l {
                Layer::Points { pts, .. } | Layer::Line { pts, .. } => pts,
            };
            for &(x, y) in pts.iter().filter(|(x, y)| x.is_finite() && y.is_finite()) {
                b = (b.0.min(x), b.1.max(x), b.2.min(y), b.3.max(y));
            }
        }
        if !b.0.is_finite() {
            return (0.0, 1.0, 0.0, 1.0);
        }
        let pad = |lo: f64, hi: f64| {
            let d = if hi > lo { 0.03 * (hi - lo) } else { 0.5 * lo.abs().max(1.0) };
            (lo - d, hi + d)
        };
        let (x0, x1) = pad(b.0, b.1);
        let (y0, y1) = pad(b.2, b.3);
        (x0, x1, y0, y1)
    }

    pub fn render(&self) -> String {
        let (x0, x1, y0, y1) = self.bounds();
        let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
        let sy = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 2.0 * MARGIN);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            W - 2.0 * MARGIN,
            H - 2.0 * MARGIN
        );
        let _ = writeln!(s, r#"<text x="{}" y="30" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, esc(&self.title));
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, W / 2.0, H - 15.0, esc(&self.xlabel));
        let _ = writeln!(
            s,
            r#"<text x="15" y="{}" text-anchor="middle" transform="rotate(-90 15 {})">{}</text>"#,
            H / 2.0,
            H / 2.0,
            esc(&self.ylabel)
        );
        for (v, anchor, x) in [(x0, "start", MARGIN), (x1, "end", W - MARGIN)] {
            let _ = writeln!(s, r#"<text x="{x}" y="{}" text-anchor="{anchor}">{}</text>"#, H - MARGIN + 16.0, tick(v));
        }
        for (v, y) in [(y0, H - MARGIN), (y1, MARGIN + 10.0)] {
            let _ = writeln!(s, r#"<text x="{}" y="{y}" text-anchor="end">{}</text>"#, MARGIN - 4.0, tick(v));
        }
        for l in &self.layers {
            match l {
                Layer::Line { pts, color } => {
                    // non-finite points break the line
                    for run in pts.split(|(x, y)| !x.is_finite() || !y.is_finite()) {
                        if run.len() < 2 {
                            continue;
                        }
                        let mut d = String::new();
                        for (x, y) in run {
                            let _ = write!(d, "{:.2},{:.2} ", sx(*x), sy(*y));
                        }
                        let _ = writeln!(
                            s,
                            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1"/>"#,
                            d.trim_end()
                        );
                    }
                }
                Layer::Points { pts, color, marker, size } => {
                    let _ = writeln!(s, r#"<g fill="{color}">"#);
                    for &(x, y) in pts.iter().filter(|(x, y)| x.is_finite() && y.is_finite()) {
                        let (px, py) = (sx(x), sy(y));
                        let _ = match marker {
                            Marker::Dot => writeln!(s, r#"<circle cx="{px:.2}" cy="{py:.2}" r="{size}"/>"#),
                            Marker::Square => writeln!(
                                s,
                                r#"<rect x="{:.2}" y="{:.2}" width="{}" height="{}"/>"#,
                                px - size,
                                py - size,
                                2.0 * size,
                                2.0 * size
                            ),
                            Marker::Triangle => writeln!(
                                s,
                                r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}"/>"#,
                                px,
                                py - size,
                                px - size,
                                py + size,
                                px + size,
                                py + size
                            ),
                        };
                    }
                    let _ = writeln!(s, "</g>");
                }
            }
        }
        s.push_str("</svg>\n");
        s
    }
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e4) {
        format!("{v:.3e}")
    } else {
        format!("{v:.4}")
    }
}

fn esc(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_layers_and_skips_non_finite_points() {
        let mut p = Plot::new("t <1>", "x", "y");
        p.points(vec![(0.0, 0.0), (1.0, f64::NAN), (2.0, 1.0)], "blue", Marker::Triangle, 3.0);
        p.line(vec![(0.0, 0.0), (1.0, 1.0), (f64::NAN, 0.0), (2.0, 2.0)], "red");
        let s = p.render();
        assert!(s.starts_with("<svg"));
        assert!(s.contains("t &lt;1&gt;"));
        assert_eq!(s.matches("<polygon").count(), 2);
        assert_eq!(s.matches("<polyline").count(), 1);
    }

    #[test]
    fn empty_plot_still_renders() {
        assert!(Plot::new("", "", "").render().ends_with("</svg>\n"));
    }
}
