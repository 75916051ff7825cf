//! SVG rendering: sample, density contours and ridge on the torus square, and
//! the score scatter.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use trpca::geometry::wrap;
use trpca::{ModelParams, TorusPoint};

/// Resolution of the density grid the contours are traced on.
pub const CONTOUR_GRID: usize = 100;
const CONTOUR_LEVELS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
const PANEL: f64 = 400.0;
const MARGIN: f64 = 50.0;

type Pt = [f64; 2];

fn jumps(a: &TorusPoint, b: &TorusPoint) -> bool {
    (b.theta1() - a.theta1()).abs() > PI || (b.theta2() - a.theta2()).abs() > PI
}

/// Splits a closed curve on the torus into polylines inside `[-π, π]²`.
/// Steps that cross the seam are cut where they meet the boundary, and the
/// next polyline resumes on the opposite edge.
pub fn ridge_segments(points: &[TorusPoint]) -> Vec<Vec<Pt>> {
    let n = points.len();
    if n < 2 {
        return Vec::new();
    }
    let start = (0..n).find(|&i| jumps(&points[(i + n - 1) % n], &points[i])).unwrap_or(0);
    let seq: Vec<&TorusPoint> = (0..=n).map(|k| &points[(start + k) % n]).collect();
    let mut segments = vec![vec![[seq[0].theta1(), seq[0].theta2()]]];
    for w in seq.windows(2) {
        let (p, q) = (w[0], w[1]);
        let end = [q.theta1(), q.theta2()];
        if !jumps(p, q) {
            segments.last_mut().expect("nonempty").push(end);
            continue;
        }
        let mut from = [p.theta1(), p.theta2()];
        let mut to = [from[0] + wrap(q.theta1() - p.theta1()), from[1] + wrap(q.theta2() - p.theta2())];
        loop {
            // first boundary crossing along from → to
            let mut t_hit = f64::INFINITY;
            for c in 0..2 {
                let d = to[c] - from[c];
                if to[c] > PI {
                    t_hit = t_hit.min((PI - from[c]) / d);
                } else if to[c] < -PI {
                    t_hit = t_hit.min((-PI - from[c]) / d);
                }
            }
            if !t_hit.is_finite() {
                segments.last_mut().expect("nonempty").push(end);
                break;
            }
            let hit = [from[0] + t_hit * (to[0] - from[0]), from[1] + t_hit * (to[1] - from[1])];
            segments.last_mut().expect("nonempty").push(hit);
            let mut shift = [0.0; 2];
            for c in 0..2 {
                if (hit[c] - PI).abs() < 1e-12 && to[c] > PI {
                    shift[c] = -TAU;
                } else if (hit[c] + PI).abs() < 1e-12 && to[c] < -PI {
                    shift[c] = TAU;
                }
            }
            from = [hit[0] + shift[0], hit[1] + shift[1]];
            to = [to[0] + shift[0], to[1] + shift[1]];
            segments.push(vec![from]);
        }
    }
    // the closing step may have started a piece that continues into the first one
    if segments.len() > 1 {
        let last = segments.last().expect("nonempty");
        let (a, b) = (last[last.len() - 1], segments[0][0]);
        if (a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12 {
            let mut last = segments.pop().expect("nonempty");
            last.pop();
            last.extend(segments[0].iter().copied());
            segments[0] = last;
        }
    }
    segments.retain(|s| s.len() >= 2 && s.windows(2).any(|w| w[0] != w[1]));
    segments
}

/// Marching-squares segments of `{f = level}` on a cell-centred `CONTOUR_GRID²` grid.
pub fn contour_segments(values: &[f64], level: f64) -> Vec<[Pt; 2]> {
    let n = CONTOUR_GRID;
    let h = TAU / n as f64;
    let coord = |i: usize| -PI + (i as f64 + 0.5) * h;
    let at = |i: usize, j: usize| values[i * n + j];
    let mut out = Vec::new();
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            // corners counter-clockwise: (i,j), (i+1,j), (i+1,j+1), (i,j+1)
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let v: Vec<f64> = corners.iter().map(|&(a, b)| at(a, b)).collect();
            let mut cuts: Vec<Pt> = Vec::new();
            for e in 0..4 {
                let (a, b) = (e, (e + 1) % 4);
                if (v[a] >= level) != (v[b] >= level) {
                    let t = (level - v[a]) / (v[b] - v[a]);
                    let (pa, pb) = (corners[a], corners[b]);
                    cuts.push([
                        coord(pa.0) + t * (coord(pb.0) - coord(pa.0)),
                        coord(pa.1) + t * (coord(pb.1) - coord(pa.1)),
                    ]);
                }
            }
            match cuts.len() {
                2 => out.push([cuts[0], cuts[1]]),
                4 => {
                    // saddle: pair by the cell-centre value
                    let centre = v.iter().sum::<f64>() / 4.0;
                    if (centre >= level) == (v[0] >= level) {
                        out.push([cuts[0], cuts[3]]);
                        out.push([cuts[1], cuts[2]]);
                    } else {
                        out.push([cuts[0], cuts[1]]);
                        out.push([cuts[2], cuts[3]]);
                    }
                }
                _ => {}
            }
        }
    }
    out
}

pub fn density_grid(params: &ModelParams) -> Vec<f64> {
    let n = CONTOUR_GRID;
    let h = TAU / n as f64;
    (0..n * n)
        .map(|k| {
            let p = TorusPoint::new(-PI + ((k / n) as f64 + 0.5) * h, -PI + ((k % n) as f64 + 0.5) * h);
            params.density(&p)
        })
        .collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Panel {
    x0: f64,
    y0: f64,
}

impl Panel {
    fn map(&self, p: Pt) -> (f64, f64) {
        (self.x0 + (p[0] + PI) / TAU * PANEL, self.y0 + (PI - p[1]) / TAU * PANEL)
    }

    fn frame(&self, svg: &mut String, xlabel: &str, ylabel: &str) {
        let (x0, y0) = (self.x0, self.y0);
        let _ = writeln!(
            svg,
            r##"<rect x="{x0}" y="{y0}" width="{PANEL}" height="{PANEL}" fill="none" stroke="#333"/>"##
        );
        for (v, label) in [(-PI, "−π"), (0.0, "0"), (PI, "π")] {
            let (x, _) = self.map([v, 0.0]);
            let (_, y) = self.map([0.0, v]);
            let yb = y0 + PANEL;
            let _ = writeln!(svg, r#"<text x="{x:.2}" y="{:.2}" font-size="12" text-anchor="middle">{label}</text>"#, yb + 16.0);
            let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">{label}</text>"#, x0 - 6.0, y + 4.0);
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle">{}</text>"#,
            x0 + PANEL / 2.0,
            y0 + PANEL + 36.0,
            escape(xlabel)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle" transform="rotate(-90 {:.2} {:.2})">{}</text>"#,
            x0 - 30.0,
            y0 + PANEL / 2.0,
            x0 - 30.0,
            y0 + PANEL / 2.0,
            escape(ylabel)
        );
    }
}

/// What a figure shows.
pub struct Figure<'a> {
    pub title: String,
    pub params: &'a ModelParams,
    pub sample: &'a [TorusPoint],
    /// Curve points in order of `α`.
    pub ridge: &'a [TorusPoint],
    /// `(s1, s2)` per observation.
    pub scores: &'a [(f64, f64)],
}

/// Two panels: the torus square (sample, density contours, ridge) and the score scatter.
pub fn render(fig: &Figure) -> String {
    let width = 3.0 * MARGIN + 2.0 * PANEL;
    let height = 2.0 * MARGIN + PANEL + 20.0;
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(svg, r#"<title>{}</title>"#, escape(&fig.title));
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="24" font-size="16" text-anchor="middle">{}</text>"#,
        width / 2.0,
        escape(&fig.title)
    );

    let torus = Panel { x0: MARGIN, y0: MARGIN };
    let _ = writeln!(svg, r#"<g id="torus">"#);
    for p in fig.sample {
        let (x, y) = torus.map([p.theta1(), p.theta2()]);
        let _ = writeln!(svg, r##"<circle class="sample" cx="{x:.2}" cy="{y:.2}" r="1.6" fill="#6b8fb5" fill-opacity="0.6"/>"##);
    }
    let values = density_grid(fig.params);
    let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if hi > lo {
        for frac in CONTOUR_LEVELS {
            let level = lo + frac * (hi - lo);
            let mut d = String::new();
            for [a, b] in contour_segments(&values, level) {
                let (xa, ya) = torus.map(a);
                let (xb, yb) = torus.map(b);
                let _ = write!(d, "M{xa:.2} {ya:.2}L{xb:.2} {yb:.2}");
            }
            if !d.is_empty() {
                let _ = writeln!(svg, r##"<path class="contour" d="{d}" fill="none" stroke="#888" stroke-width="0.8"/>"##);
            }
        }
    }
    for seg in ridge_segments(fig.ridge) {
        let mut d = String::new();
        for (k, p) in seg.iter().enumerate() {
            let (x, y) = torus.map(*p);
            let _ = write!(d, "{}{x:.2} {y:.2}", if k == 0 { "M" } else { "L" });
        }
        let _ = writeln!(svg, r##"<path class="ridge" d="{d}" fill="none" stroke="#c0392b" stroke-width="2.2"/>"##);
    }
    torus.frame(&mut svg, "θ1", "θ2");
    let _ = writeln!(svg, "</g>");

    let scores = Panel { x0: 2.0 * MARGIN + PANEL, y0: MARGIN };
    let _ = writeln!(svg, r#"<g id="scores">"#);
    for &(s1, s2) in fig.scores {
        let (x, y) = scores.map([s1, s2]);
        let _ = writeln!(svg, r##"<circle class="score" cx="{x:.2}" cy="{y:.2}" r="1.6" fill="#2e7d5b" fill-opacity="0.6"/>"##);
    }
    scores.frame(&mut svg, "s1", "s2");
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(svg, "</svg>");
    svg
}
