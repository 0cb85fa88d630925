//! Minimal SVG writer for the report figures.

use std::fmt::Write;

use citex_core::cluster::Dendrogram;

pub struct Svg {
    width: f64,
    height: f64,
    body: String,
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

impl Svg {
    pub fn new(width: f64, height: f64) -> Svg {
        Svg { width, height, body: String::new() }
    }

    pub fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, style: &str) {
        let _ = writeln!(self.body, r##"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" {style}/>"##);
    }

    pub fn circle(&mut self, x: f64, y: f64, r: f64, style: &str) {
        let _ = writeln!(self.body, r##"<circle cx="{x:.2}" cy="{y:.2}" r="{r}" {style}/>"##);
    }

    pub fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, style: &str) {
        let _ = writeln!(self.body, r##"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" {style}/>"##);
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], style: &str) {
        let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(self.body, r##"<polyline points="{}" fill="none" {style}/>"##, coords.join(" "));
    }

    pub fn text(&mut self, x: f64, y: f64, s: &str, anchor: &str, size: f64) {
        let _ = writeln!(
            self.body,
            r##"<text x="{x:.2}" y="{y:.2}" font-size="{size}" font-family="sans-serif" text-anchor="{anchor}">{}</text>"##,
            esc(s)
        );
    }

    pub fn rotated_text(&mut self, x: f64, y: f64, s: &str, size: f64) {
        let _ = writeln!(
            self.body,
            r##"<text x="{x:.2}" y="{y:.2}" font-size="{size}" font-family="sans-serif" text-anchor="end" transform="rotate(-90 {x:.2} {y:.2})">{}</text>"##,
            esc(s)
        );
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

/// Linear map from `[lo, hi]` onto `[a, b]`.
#[derive(Clone, Copy)]
struct Scale {
    lo: f64,
    hi: f64,
    a: f64,
    b: f64,
}

impl Scale {
    fn new(lo: f64, hi: f64, a: f64, b: f64) -> Scale {
        let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
        Scale { lo, hi, a, b }
    }

    fn padded(lo: f64, hi: f64, a: f64, b: f64) -> Scale {
        let pad = 0.05 * (hi - lo).max(1e-9);
        Scale::new(lo - pad, hi + pad, a, b)
    }

    fn at(&self, v: f64) -> f64 {
        self.a + (v - self.lo) / (self.hi - self.lo) * (self.b - self.a)
    }
}

const AXIS: &str = r##"stroke="black" stroke-width="1""##;
const GUIDE: &str = r##"stroke="#888" stroke-width="1" stroke-dasharray="4,3""##;

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = (hi - lo).abs().max(1e-12);
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * step {
        out.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
        t += step;
    }
    out
}

fn x_axis(svg: &mut Svg, sx: Scale, y: f64, label: &str) {
    svg.line(sx.a, y, sx.b, y, AXIS);
    for t in ticks(sx.lo, sx.hi) {
        let x = sx.at(t);
        svg.line(x, y, x, y + 4.0, AXIS);
        svg.text(x, y + 16.0, &citex_core::report::format_sig6(t), "middle", 10.0);
    }
    svg.text((sx.a + sx.b) / 2.0, y + 32.0, label, "middle", 12.0);
}

fn y_axis(svg: &mut Svg, sy: Scale, x: f64, label: &str) {
    svg.line(x, sy.a, x, sy.b, AXIS);
    for t in ticks(sy.lo.min(sy.hi), sy.hi.max(sy.lo)) {
        let y = sy.at(t);
        svg.line(x - 4.0, y, x, y, AXIS);
        svg.text(x - 6.0, y + 3.0, &citex_core::report::format_sig6(t), "end", 10.0);
    }
    svg.rotated_text(x - 38.0, (sy.a + sy.b) / 2.0, label, 12.0);
}

/// Horizontal interval plot, one row per journal, highest first.
pub fn centipede(labels: &[String], mu: &[f64], half: &[f64]) -> String {
    let n = labels.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| mu[b].total_cmp(&mu[a]).then_with(|| labels[a].cmp(&labels[b])));
    let row = 14.0;
    let (left, top, width) = (80.0, 20.0, 420.0);
    let height = top + row * n as f64 + 50.0;
    let lo = (0..n).map(|i| mu[i] - half[i]).fold(f64::INFINITY, f64::min);
    let hi = (0..n).map(|i| mu[i] + half[i]).fold(f64::NEG_INFINITY, f64::max);
    let sx = Scale::padded(lo, hi, left, left + width);
    let mut svg = Svg::new(left + width + 20.0, height);
    if sx.lo < 0.0 && sx.hi > 0.0 {
        svg.line(sx.at(0.0), top, sx.at(0.0), top + row * n as f64, GUIDE);
    }
    for (r, &i) in order.iter().enumerate() {
        let y = top + row * (r as f64 + 0.5);
        svg.text(left - 6.0, y + 3.5, &labels[i], "end", 10.0);
        svg.line(sx.at(mu[i] - half[i]), y, sx.at(mu[i] + half[i]), y, AXIS);
        svg.circle(sx.at(mu[i]), y, 2.5, r##"fill="black""##);
    }
    x_axis(&mut svg, sx, top + row * n as f64 + 4.0, "export score");
    svg.finish()
}

/// Score paths against the bound fraction `s / s_max`.
pub fn lasso_path(labels: &[String], s: &[f64], mu: &[Vec<f64>], qle: &[f64], selected: usize) -> String {
    let (left, top, width, height) = (60.0, 20.0, 520.0, 420.0);
    let s_max = s.iter().copied().fold(0.0, f64::max).max(1e-300);
    let lo = mu.iter().flatten().chain(qle).copied().fold(f64::INFINITY, f64::min);
    let hi = mu.iter().flatten().chain(qle).copied().fold(f64::NEG_INFINITY, f64::max);
    let sx = Scale::new(0.0, 1.0, left, left + width);
    let sy = Scale::padded(lo, hi, top + height, top);
    let mut svg = Svg::new(left + width + 70.0, top + height + 50.0);
    for j in 0..labels.len() {
        let pts: Vec<(f64, f64)> = s.iter().zip(mu).map(|(sk, m)| (sx.at(sk / s_max), sy.at(m[j]))).collect();
        svg.polyline(&pts, r##"stroke="#246" stroke-width="0.8""##);
        svg.text(left + width + 4.0, sy.at(qle[j]) + 3.0, &labels[j], "start", 8.0);
    }
    let x_sel = sx.at(s[selected] / s_max);
    svg.line(x_sel, top, x_sel, top + height, r##"stroke="#c22" stroke-width="1" stroke-dasharray="4,3""##);
    svg.text(x_sel, top - 6.0, "TIC", "middle", 10.0);
    let x_qle = sx.at(1.0 / 1.05);
    svg.line(x_qle, top, x_qle, top + height, GUIDE);
    svg.text(x_qle, top - 6.0, "QLE", "middle", 10.0);
    x_axis(&mut svg, sx, top + height, "s / s_max");
    y_axis(&mut svg, sy, left, "export score");
    svg.finish()
}

/// Dendrogram with grey boxes around the clusters formed below `cut`.
pub fn dendrogram(dend: &Dendrogram, clusters: &[Vec<usize>], cut: f64) -> String {
    let n = dend.n_leaves();
    let (left, top, step, height) = (60.0, 20.0, 16.0, 360.0);
    let width = step * n.max(1) as f64;
    let top_h = dend.merges.iter().map(|m| m.height).fold(cut, f64::max);
    let sy = Scale::new(0.0, top_h * 1.05, top + height, top);
    let mut pos = vec![0.0; n];
    for (k, &leaf) in dend.leaf_order.iter().enumerate() {
        pos[leaf] = left + step * (k as f64 + 0.5);
    }
    let mut node_x = pos.clone();
    let mut node_h = vec![0.0; n];
    let mut svg = Svg::new(left + width + 20.0, top + height + 90.0);
    for c in clusters {
        let xs: Vec<f64> = c.iter().map(|&i| pos[i]).collect();
        let x0 = xs.iter().copied().fold(f64::INFINITY, f64::min) - step * 0.45;
        let x1 = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max) + step * 0.45;
        let y0 = sy.at(cut);
        svg.rect(x0, y0, x1 - x0, sy.at(0.0) + 4.0 - y0, r##"fill="#ddd" stroke="#999""##);
    }
    for m in &dend.merges {
        let (xl, xr) = (node_x[m.left], node_x[m.right]);
        let (hl, hr) = (node_h[m.left], node_h[m.right]);
        let y = sy.at(m.height);
        svg.line(xl, sy.at(hl), xl, y, AXIS);
        svg.line(xr, sy.at(hr), xr, y, AXIS);
        svg.line(xl, y, xr, y, AXIS);
        node_x.push((xl + xr) / 2.0);
        node_h.push(m.height);
    }
    svg.line(left, sy.at(cut), left + width, sy.at(cut), GUIDE);
    for (x, label) in pos.iter().zip(&dend.labels) {
        svg.rotated_text(x + 3.0, sy.at(0.0) + 8.0, label, 9.0);
    }
    y_axis(&mut svg, sy, left - 4.0, "1 - correlation");
    svg.finish()
}

/// Scatter with least-squares line; points beyond two residual sd are labelled.
pub fn scatter(labels: &[String], x: &[f64], y: &[f64], xlab: &str, ylab: &str) -> String {
    let (left, top, width, height) = (60.0, 20.0, 440.0, 360.0);
    let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sx = Scale::padded(min(x), max(x), left, left + width);
    let sy = Scale::padded(min(y), max(y), top + height, top);
    let mut svg = Svg::new(left + width + 20.0, top + height + 50.0);
    let n = x.len() as f64;
    if x.len() >= 2 {
        let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
        let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
        let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
        if sxx > 0.0 {
            let b = sxy / sxx;
            let a = my - b * mx;
            svg.line(sx.at(sx.lo), sy.at(a + b * sx.lo), sx.at(sx.hi), sy.at(a + b * sx.hi), GUIDE);
            let res: Vec<f64> = x.iter().zip(y).map(|(u, v)| v - a - b * u).collect();
            let sd = (res.iter().map(|r| r * r).sum::<f64>() / (n - 1.0).max(1.0)).sqrt();
            for (k, r) in res.iter().enumerate() {
                if r.abs() > 2.0 * sd {
                    svg.text(sx.at(x[k]) + 5.0, sy.at(y[k]) - 4.0, &labels[k], "start", 9.0);
                }
            }
        }
    }
    for k in 0..x.len() {
        svg.circle(sx.at(x[k]), sy.at(y[k]), 3.0, r##"fill="none" stroke="black""##);
    }
    x_axis(&mut svg, sx, top + height, xlab);
    y_axis(&mut svg, sy, left, ylab);
    svg.finish()
}
