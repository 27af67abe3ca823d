//! Minimal SVG 1.1 line plots.

use std::fmt::Write;

pub struct Series {
    pub name: String,
    /// NaN breaks the line.
    pub y: Vec<f64>,
}

pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x: Vec<f64>,
    pub series: Vec<Series>,
    pub log_y: bool,
    /// Fixed y range. Points outside are drawn on the boundary with a marker.
    pub y_range: Option<(f64, f64)>,
}

const W: f64 = 800.0;
const H: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const COLOURS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn finite_range(v: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    v.filter(|x| x.is_finite()).fold(None, |acc, x| match acc {
        None => Some((x, x)),
        Some((lo, hi)) => Some((lo.min(x), hi.max(x))),
    })
}

fn ticks(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
}

impl Plot {
    fn y_bounds(&self) -> (f64, f64) {
        if let Some(r) = self.y_range {
            return if self.log_y { (r.0.log10(), r.1.log10()) } else { r };
        }
        let vals = self.series.iter().flat_map(|s| s.y.iter().copied());
        let r = if self.log_y { finite_range(vals.filter(|&y| y > 0.0).map(f64::log10)) } else { finite_range(vals) };
        match r {
            Some((lo, hi)) if hi > lo => (lo, hi),
            Some((lo, _)) => (lo - 1.0, lo + 1.0),
            None => (0.0, 1.0),
        }
    }

    pub fn render(&self) -> String {
        let (x0, x1) = finite_range(self.x.iter().copied()).filter(|(a, b)| b > a).unwrap_or((0.0, 1.0));
        let (y0, y1) = self.y_bounds();
        let pw = W - LEFT - RIGHT;
        let ph = H - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| TOP + (1.0 - (y - y0) / (y1 - y0)) * ph;

        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
            LEFT + pw / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);

        for t in ticks(x0, x1, 5) {
            let x = sx(t);
            let _ = writeln!(
                s,
                r#"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="black"/>"#,
                TOP + ph,
                TOP + ph + 5.0
            );
            let _ = writeln!(s, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#, TOP + ph + 18.0, label(t));
        }
        for t in ticks(y0, y1, 5) {
            let y = sy(t);
            let shown = if self.log_y { format!("1e{t:.1}") } else { label(t) };
            let _ = writeln!(s, r#"<line x1="{}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/>"#, LEFT - 5.0);
            let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{shown}</text>"#, LEFT - 8.0, y + 4.0);
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            H - 15.0,
            escape(&self.x_label)
        );
        let y_title = if self.log_y { format!("{} (log)", self.y_label) } else { self.y_label.clone() };
        let _ = writeln!(
            s,
            r#"<text x="20" y="{0}" text-anchor="middle" transform="rotate(-90 20 {0})">{1}</text>"#,
            TOP + ph / 2.0,
            escape(&y_title)
        );

        let mut any_clamped = false;
        for (k, series) in self.series.iter().enumerate() {
            let colour = COLOURS[k % COLOURS.len()];
            let mut runs: Vec<Vec<(f64, f64)>> = vec![vec![]];
            let mut clamped = Vec::new();
            for (&x, &y) in self.x.iter().zip(&series.y) {
                let yv = if self.log_y {
                    if y > 0.0 {
                        y.log10()
                    } else {
                        f64::NAN
                    }
                } else {
                    y
                };
                if !yv.is_finite() {
                    if !runs.last().unwrap().is_empty() {
                        runs.push(vec![]);
                    }
                    continue;
                }
                let yc = yv.clamp(y0, y1);
                if yc != yv {
                    clamped.push((sx(x), sy(yc)));
                }
                runs.last_mut().unwrap().push((sx(x), sy(yc)));
            }
            for run in runs.iter().filter(|r| r.len() > 1) {
                let pts: Vec<String> = run.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                let _ = writeln!(
                    s,
                    r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
                    pts.join(" ")
                );
            }
            for (x, y) in &clamped {
                let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="none" stroke="{colour}"/>"#);
            }
            any_clamped |= !clamped.is_empty();
            let ly = TOP + 16.0 + 20.0 * k as f64;
            let lx = W - RIGHT + 15.0;
            let _ = writeln!(
                s,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{colour}" stroke-width="2"/>"#,
                lx + 25.0
            );
            let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 32.0, ly + 4.0, escape(&series.name));
        }
        if any_clamped {
            let ly = TOP + 16.0 + 20.0 * self.series.len() as f64;
            let lx = W - RIGHT + 15.0;
            let _ = writeln!(s, r#"<circle cx="{}" cy="{ly}" r="2.5" fill="none" stroke="black"/>"#, lx + 12.0);
            let _ = writeln!(s, r#"<text x="{}" y="{}">clamped to range</text>"#, lx + 32.0, ly + 4.0);
        }
        s.push_str("</svg>\n");
        s
    }
}

fn label(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e4).contains(&a) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}
