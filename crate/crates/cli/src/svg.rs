//! Plot of a caustic inside its table.

use std::fmt::Write as _;

use billiard_caustics::family::Caustic;
use billiard_caustics::{ConicTable, EnvelopePoint, Point};

const WIDTH: f64 = 800.0;

pub struct Plot<'a> {
    pub config_json: String,
    pub table: ConicTable,
    pub source: Option<Point>,
    pub caustics: Vec<&'a Caustic>,
    pub cusps: Vec<EnvelopePoint>,
    pub viewport: [f64; 4],
}

/// Window holding the table, the source and every finite cusp, padded by 10%.
pub fn default_viewport(
    table: &ConicTable,
    source: Option<Point>,
    cusps: &[EnvelopePoint],
) -> [f64; 4] {
    let mut v = [-table.a(), table.a(), -table.b(), table.b()];
    let extra = source
        .into_iter()
        .chain(cusps.iter().filter_map(|c| c.finite()));
    for q in extra {
        v[0] = v[0].min(q.x);
        v[1] = v[1].max(q.x);
        v[2] = v[2].min(q.y);
        v[3] = v[3].max(q.y);
    }
    let pad = 0.1 * (v[1] - v[0]).max(v[3] - v[2]);
    [v[0] - pad, v[1] + pad, v[2] - pad, v[3] + pad]
}

fn inside(v: &[f64; 4], q: Point) -> bool {
    q.x >= v[0] && q.x <= v[1] && q.y >= v[2] && q.y <= v[3]
}

impl Plot<'_> {
    fn height(&self) -> f64 {
        let v = self.viewport;
        (WIDTH * (v[3] - v[2]) / (v[1] - v[0])).round().max(1.0)
    }

    fn map(&self, q: Point) -> (f64, f64) {
        let v = self.viewport;
        (
            (q.x - v[0]) / (v[1] - v[0]) * WIDTH,
            (v[3] - q.y) / (v[3] - v[2]) * self.height(),
        )
    }

    /// Runs of consecutive samples that can be joined: a run ends at a point
    /// at infinity, at a sign change of `alpha_s` and outside the viewport.
    fn runs(&self, caustic: &Caustic) -> Vec<Vec<Point>> {
        let alpha_s = caustic.alpha_s();
        let len = caustic.points.len();
        let last = if caustic.is_closed() { len + 1 } else { len };
        let mut runs = Vec::new();
        let mut run = Vec::new();
        let flush = |run: &mut Vec<Point>, runs: &mut Vec<Vec<Point>>| {
            if run.len() > 1 {
                runs.push(std::mem::take(run));
            }
            run.clear();
        };
        for k in 0..last {
            let i = k % len;
            if k > 0 && alpha_s[(k - 1) % len] * alpha_s[i] <= 0.0 {
                flush(&mut run, &mut runs);
            }
            match caustic.points[i] {
                EnvelopePoint::Finite(q) if inside(&self.viewport, q) => run.push(q),
                _ => flush(&mut run, &mut runs),
            }
        }
        flush(&mut run, &mut runs);
        runs
    }

    pub fn render(&self) -> String {
        let h = self.height();
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            "<!-- config {} -->",
            self.config_json.replace("--", "- -")
        );
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{h:.0}" viewBox="0 0 {WIDTH:.0} {h:.0}">"#
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let (cx, cy) = self.map(Point::new(0.0, 0.0));
        let (ex, ey) = self.map(Point::new(self.table.a(), self.table.b()));
        let _ = writeln!(
            out,
            r#"<ellipse class="table" cx="{cx:.3}" cy="{cy:.3}" rx="{:.3}" ry="{:.3}" fill="none" stroke="black" stroke-width="1.5"/>"#,
            ex - cx,
            cy - ey
        );
        for caustic in &self.caustics {
            for run in self.runs(caustic) {
                out.push_str(r#"<polyline class="caustic" fill="none" stroke="steelblue" stroke-width="1" points=""#);
                for (i, q) in run.iter().enumerate() {
                    let (x, y) = self.map(*q);
                    if i > 0 {
                        out.push(' ');
                    }
                    let _ = write!(out, "{x:.3},{y:.3}");
                }
                out.push_str("\"/>\n");
            }
        }
        if let Some(o) = self.source.filter(|o| inside(&self.viewport, *o)) {
            let (x, y) = self.map(o);
            let _ = writeln!(
                out,
                r#"<circle class="source" cx="{x:.3}" cy="{y:.3}" r="3" fill="black"/>"#
            );
        }
        for q in self.cusps.iter().filter_map(|c| c.finite()) {
            if inside(&self.viewport, q) {
                let (x, y) = self.map(q);
                let _ = writeln!(
                    out,
                    r#"<circle class="cusp" cx="{x:.3}" cy="{y:.3}" r="4" fill="none" stroke="crimson" stroke-width="1.5"/>"#
                );
            }
        }
        out.push_str("</svg>\n");
        out
    }
}
