//! Minimal self-contained SVG writer.

use std::fmt::Write;

/// Maps a data box onto a pixel canvas (y up).
pub struct Svg {
    width: f64,
    height: f64,
    view: [f64; 4],
    body: String,
}

impl Svg {
    /// `view = [xmin, xmax, ymin, ymax]`.
    pub fn new(width: f64, height: f64, view: [f64; 4]) -> Self {
        Self { width, height, view, body: String::new() }
    }

    pub fn px(&self, x: f64, y: f64) -> (f64, f64) {
        let [x0, x1, y0, y1] = self.view;
        ((x - x0) / (x1 - x0) * self.width, (y1 - y) / (y1 - y0) * self.height)
    }

    /// Axis-aligned data rectangle with lower-left corner `(x, y)`.
    pub fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        let (a, b) = self.px(x, y + h);
        let (c, d) = self.px(x + w, y);
        let _ = writeln!(
            self.body,
            r#"<rect x="{a:.2}" y="{b:.2}" width="{:.2}" height="{:.2}" fill="{fill}" stroke="none"/>"#,
            (c - a).max(0.0),
            (d - b).max(0.0)
        );
    }

    pub fn line(&mut self, p: (f64, f64), q: (f64, f64), stroke: &str, width: f64) {
        let (a, b) = self.px(p.0, p.1);
        let (c, d) = self.px(q.0, q.1);
        let _ = writeln!(
            self.body,
            r#"<line x1="{a:.2}" y1="{b:.2}" x2="{c:.2}" y2="{d:.2}" stroke="{stroke}" stroke-width="{width}"/>"#
        );
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str, width: f64) {
        if pts.len() < 2 {
            return;
        }
        let mut s = String::new();
        for &(x, y) in pts {
            let (a, b) = self.px(x, y);
            let _ = write!(s, "{a:.2},{b:.2} ");
        }
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#,
            s.trim_end()
        );
    }

    pub fn circle(&mut self, x: f64, y: f64, r: f64, fill: &str) {
        let (a, b) = self.px(x, y);
        let _ = writeln!(self.body, r#"<circle cx="{a:.2}" cy="{b:.2}" r="{r}" fill="{fill}"/>"#);
    }

    pub fn text(&mut self, x: f64, y: f64, size: f64, s: &str) {
        let (a, b) = self.px(x, y);
        let esc = s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
        let _ = writeln!(self.body, r#"<text x="{a:.2}" y="{b:.2}" font-size="{size}" font-family="sans-serif">{esc}</text>"#);
    }

    /// Axes through the origin when it is in view.
    pub fn axes(&mut self) {
        let [x0, x1, y0, y1] = self.view;
        if y0 <= 0.0 && 0.0 <= y1 {
            self.line((x0, 0.0), (x1, 0.0), "#888", 0.6);
        }
        if x0 <= 0.0 && 0.0 <= x1 {
            self.line((0.0, y0), (0.0, y1), "#888", 0.6);
        }
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body,
            w = self.width,
            h = self.height
        )
    }
}

/// Zero-crossing segments of `f` on an `n × n` grid over `view` (marching squares).
pub fn contour(f: &dyn Fn(f64, f64) -> f64, n: usize, view: [f64; 4]) -> Vec<((f64, f64), (f64, f64))> {
    let [x0, x1, y0, y1] = view;
    let (hx, hy) = ((x1 - x0) / n as f64, (y1 - y0) / n as f64);
    let mut segs = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let (cx, cy) = (x0 + i as f64 * hx, y0 + j as f64 * hy);
            let c = [(cx, cy), (cx + hx, cy), (cx + hx, cy + hy), (cx, cy + hy)];
            let v = c.map(|(x, y)| f(x, y));
            let mut pts = Vec::new();
            for e in 0..4 {
                let (p, q) = (e, (e + 1) % 4);
                if (v[p] < 0.0) != (v[q] < 0.0) {
                    let t = v[p] / (v[p] - v[q]);
                    pts.push((c[p].0 + t * (c[q].0 - c[p].0), c[p].1 + t * (c[q].1 - c[p].1)));
                }
            }
            if pts.len() >= 2 {
                segs.push((pts[0], pts[1]));
            }
            if pts.len() == 4 {
                segs.push((pts[2], pts[3]));
            }
        }
    }
    segs
}

/// Distinct fill colours for small integer keys.
pub fn palette(k: usize) -> String {
    let h = (k as f64 * 137.508) % 360.0;
    format!("hsl({h:.0},55%,75%)")
}
