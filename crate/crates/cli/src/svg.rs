//! Minimal SVG output. The body's bounding box maps onto a 1000×1000 viewport
//! with the y-axis pointing up; coordinates use 6 decimals.

use std::fmt::Write;

use hilbert_core::Point;

const SIZE: f64 = 1000.0;
const MARGIN: f64 = 20.0;

/// Fixed 6-decimal formatting without negative zero.
pub fn fmt6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

pub struct Canvas {
    lo: [f64; 2],
    hi: [f64; 2],
    scale: f64,
    offset: [f64; 2],
    comments: Vec<String>,
    elements: Vec<String>,
}

impl Canvas {
    pub fn new(lo: &Point, hi: &Point) -> Self {
        let (lo, hi) = ([lo.x(), lo.y()], [hi.x(), hi.y()]);
        let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]);
        let scale = (SIZE - 2.0 * MARGIN) / extent;
        let offset = [
            0.5 * (SIZE - scale * (hi[0] - lo[0])),
            0.5 * (SIZE - scale * (hi[1] - lo[1])),
        ];
        Self {
            lo,
            hi,
            scale,
            offset,
            comments: Vec::new(),
            elements: Vec::new(),
        }
    }

    fn map(&self, p: &Point) -> (f64, f64) {
        let x = self.offset[0] + self.scale * (p.x() - self.lo[0]);
        let y = SIZE - (self.offset[1] + self.scale * (p.y() - self.lo[1]));
        (x, y)
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into().replace("--", "- -"));
    }

    pub fn closed_path(&mut self, pts: &[Point], class: &str, fill: &str, stroke: &str) {
        let mut d = String::new();
        for (k, p) in pts.iter().enumerate() {
            let (x, y) = self.map(p);
            let _ = write!(d, "{}{},{} ", if k == 0 { "M" } else { "L" }, fmt6(x), fmt6(y));
        }
        d.push('Z');
        self.elements.push(format!(
            "<path class=\"{class}\" d=\"{d}\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"1\"/>"
        ));
    }

    pub fn dot(&mut self, p: &Point, class: &str) {
        let (x, y) = self.map(p);
        self.elements.push(format!(
            "<circle class=\"{class}\" cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"black\"/>",
            fmt6(x),
            fmt6(y)
        ));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        out.push_str("<!--\n");
        let _ = writeln!(
            out,
            "frame: x in [{}, {}], y in [{}, {}], viewport 1000x1000, y up",
            fmt6(self.lo[0]),
            fmt6(self.hi[0]),
            fmt6(self.lo[1]),
            fmt6(self.hi[1])
        );
        for c in &self.comments {
            out.push_str(c);
            out.push('\n');
        }
        out.push_str("-->\n");
        out.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"1000\" viewBox=\"0 0 1000 1000\">\n");
        out.push_str("<rect width=\"1000\" height=\"1000\" fill=\"white\"/>\n");
        for e in &self.elements {
            out.push_str(e);
            out.push('\n');
        }
        out.push_str("</svg>\n");
        out
    }
}
