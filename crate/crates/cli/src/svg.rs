//! Deterministic SVG pictures: curve in black, pushoff in red, labeled generators and
//! shaded bigons.

use std::fmt::Write;

use floer_core::point::to_f64;
use floer_core::{Curve, Point};

const WIDTH: f64 = 480.0;
const MARGIN: f64 = 36.0;

#[derive(Clone, Debug, Default)]
pub struct Scene {
    /// Curves with their stroke color, drawn in order.
    pub curves: Vec<(Curve, &'static str)>,
    pub dots: Vec<(Point, String)>,
    /// Closed boundaries of discs to shade.
    pub shaded: Vec<Vec<Point>>,
}

struct Frame {
    min_x: f64,
    max_y: f64,
    scale: f64,
    height: f64,
}

impl Frame {
    fn new(scene: &Scene) -> Self {
        let pts: Vec<(f64, f64)> = scene
            .curves
            .iter()
            .flat_map(|(c, _)| c.vertices().iter())
            .chain(scene.dots.iter().map(|(p, _)| p))
            .map(|p| (to_f64(&p.x), to_f64(&p.y)))
            .collect();
        if pts.is_empty() {
            return Frame { min_x: 0.0, max_y: 0.0, scale: 1.0, height: 2.0 * MARGIN };
        }
        let min_x = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let max_x = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        let min_y = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let max_y = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let span = (max_x - min_x).max(max_y - min_y).max(1e-9);
        let scale = (WIDTH - 2.0 * MARGIN) / span;
        let height = (max_y - min_y) * scale + 2.0 * MARGIN;
        Frame { min_x, max_y, scale, height }
    }

    fn map(&self, p: &Point) -> (f64, f64) {
        let x = (to_f64(&p.x) - self.min_x) * self.scale + MARGIN;
        let y = (self.max_y - to_f64(&p.y)) * self.scale + MARGIN;
        (x, y)
    }

    fn path(&self, pts: &[Point]) -> String {
        pts.iter()
            .map(|p| {
                let (x, y) = self.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn render_svg(scene: &Scene) -> String {
    let frame = Frame::new(scene);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH:.0}\" height=\"{:.0}\" viewBox=\"0 0 {WIDTH:.0} {:.0}\">",
        frame.height, frame.height
    );
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for region in &scene.shaded {
        let _ = writeln!(
            out,
            "<polygon points=\"{}\" fill=\"#4a7fd4\" fill-opacity=\"0.25\" stroke=\"none\"/>",
            frame.path(region)
        );
    }
    for (curve, color) in &scene.curves {
        let _ = writeln!(
            out,
            "<polygon points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" stroke-linejoin=\"round\"/>",
            frame.path(curve.vertices())
        );
    }
    for (p, label) in &scene.dots {
        let (x, y) = frame.map(p);
        let _ = writeln!(out, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"black\"/>");
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            x + 5.0,
            y - 5.0,
            escape(label)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curves_only_scene() {
        let c = Curve::from_ints(&[(0, -1), (1, 0), (0, 1), (-1, 0)]).unwrap();
        let svg = render_svg(&Scene { curves: vec![(c, "black")], ..Scene::default() });
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert!(!svg.contains("<circle"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn labels_are_escaped() {
        let svg = render_svg(&Scene { dots: vec![(Point::zero(), "a<b".into())], ..Scene::default() });
        assert!(svg.contains("a&lt;b"));
    }
}
