//! Closed piecewise-linear curves with exact vertices, their parametrization and the
//! curve file format.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::geometry::segment::{segment_intersect, Contact, SegmentIntersection};
use crate::morse::MorseFunction;
use crate::point::{fmt_rational, parse_rational, Point, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("a curve needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertices {0} and {1} coincide")]
    DuplicateVertex(usize, usize),
    #[error("segment index {index} out of range for a curve with {len} segments")]
    SegmentOutOfRange { index: usize, len: usize },
    #[error("parameter t = {0} is outside [0, 1)")]
    ParamOutOfRange(String),
    #[error("an arc needs distinct endpoints")]
    EmptyArc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// A point of the domain circle: segment index plus position `t` in `[0, 1)` along it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveParam {
    pub segment: usize,
    pub t: Rational,
}

impl CurveParam {
    pub fn new(segment: usize, t: Rational) -> Self {
        Self { segment, t }
    }

    pub fn vertex(index: usize) -> Self {
        Self { segment: index, t: Rational::zero() }
    }

    pub fn is_vertex(&self) -> bool {
        self.t.is_zero()
    }
}

impl fmt::Display for CurveParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}", self.segment, fmt_rational(&self.t))
    }
}

impl Serialize for CurveParam {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Is `x` strictly inside the cyclic interval running forward from `a` to `b`?
/// When `a == b` the interval is the whole circle minus `a`.
pub fn cyclic_between(a: &CurveParam, x: &CurveParam, b: &CurveParam) -> bool {
    match a.cmp(b) {
        Ordering::Less => a < x && x < b,
        Ordering::Greater => x > a || x < b,
        Ordering::Equal => x != a,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Curve {
    vertices: Vec<Point>,
    pub name: Option<String>,
}

impl Curve {
    pub fn new(vertices: Vec<Point>) -> Result<Self, CurveError> {
        let n = vertices.len();
        if n < 3 {
            return Err(CurveError::TooFewVertices(n));
        }
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(CurveError::DuplicateVertex(i, (i + 1) % n));
            }
        }
        Ok(Self { vertices, name: None })
    }

    pub fn from_ints(coords: &[(i64, i64)]) -> Result<Self, CurveError> {
        Self::new(coords.iter().map(|&(x, y)| Point::from_ints(x, y)).collect())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i % self.vertices.len()]
    }

    pub fn segment(&self, i: usize) -> (&Point, &Point) {
        (self.vertex(i), self.vertex(i + 1))
    }

    pub fn tangent(&self, i: usize) -> Point {
        let (a, b) = self.segment(i);
        b - a
    }

    pub fn next(&self, i: usize) -> usize {
        (i + 1) % self.len()
    }

    pub fn prev(&self, i: usize) -> usize {
        (i + self.len() - 1) % self.len()
    }

    /// Twice the signed area; positive for counterclockwise traversal.
    pub fn signed_area2(&self) -> Rational {
        (0..self.len())
            .map(|i| {
                let (a, b) = self.segment(i);
                a.cross(b)
            })
            .fold(Rational::zero(), |acc, v| acc + v)
    }

    pub fn is_counterclockwise(&self) -> bool {
        self.signed_area2().is_positive()
    }

    pub fn reversed(&self) -> Curve {
        let mut v = self.vertices.clone();
        v.reverse();
        Curve { vertices: v, name: self.name.clone() }
    }

    /// Same closed curve with vertex `k` renumbered as vertex 0.
    pub fn rotated(&self, k: usize) -> Curve {
        let mut v = self.vertices.clone();
        v.rotate_left(k % self.len());
        Curve { vertices: v, name: self.name.clone() }
    }

    pub fn map_points(&self, f: impl Fn(&Point) -> Point) -> Curve {
        Curve { vertices: self.vertices.iter().map(f).collect(), name: self.name.clone() }
    }

    pub fn scaled(&self, k: &Rational) -> Curve {
        self.map_points(|p| p.scale(k))
    }

    pub fn translated(&self, d: &Point) -> Curve {
        self.map_points(|p| p + d)
    }

    /// Normalizes `t == 1` onto the next vertex and checks ranges.
    pub fn normalize(&self, p: &CurveParam) -> Result<CurveParam, CurveError> {
        if p.segment >= self.len() {
            return Err(CurveError::SegmentOutOfRange { index: p.segment, len: self.len() });
        }
        if p.t.is_negative() || p.t > Rational::one() {
            return Err(CurveError::ParamOutOfRange(fmt_rational(&p.t)));
        }
        if p.t == Rational::one() {
            return Ok(CurveParam::vertex(self.next(p.segment)));
        }
        Ok(p.clone())
    }

    pub fn point_at(&self, p: &CurveParam) -> Result<Point, CurveError> {
        let p = self.normalize(p)?;
        let (a, b) = self.segment(p.segment);
        Ok(a.lerp(b, &p.t))
    }

    /// Polyline from `a` to `b` following the curve in `direction`.
    pub fn arc_between(&self, a: &CurveParam, b: &CurveParam, direction: Direction) -> Result<Vec<Point>, CurveError> {
        let a = self.normalize(a)?;
        let b = self.normalize(b)?;
        if a == b {
            return Err(CurveError::EmptyArc);
        }
        match direction {
            Direction::Forward => Ok(self.forward_arc(&a, &b)),
            Direction::Backward => {
                let mut pts = self.forward_arc(&b, &a);
                pts.reverse();
                Ok(pts)
            }
        }
    }

    fn forward_arc(&self, a: &CurveParam, b: &CurveParam) -> Vec<Point> {
        let n = self.len();
        let mut pts = vec![self.point_at(a).expect("normalized")];
        let steps = if a.segment == b.segment && a.t < b.t {
            0
        } else {
            let d = (b.segment + n - a.segment) % n;
            if d == 0 {
                n
            } else {
                d
            }
        };
        for k in 1..=steps {
            pts.push(self.vertex(a.segment + k).clone());
        }
        let end = self.point_at(b).expect("normalized");
        if pts.last() != Some(&end) {
            pts.push(end);
        }
        pts
    }

    /// Curve file text for this curve (vertex lines only).
    pub fn render(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            out.push_str(&format!("name {name}\n"));
        }
        for v in &self.vertices {
            out.push_str(&format!("v {} {}\n", fmt_rational(&v.x), fmt_rational(&v.y)));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Label {
    pub name: String,
    pub at: Point,
}

/// Everything a curve file can carry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveFile {
    pub curve: Curve,
    pub morse: Option<MorseFunction>,
    pub labels: Vec<Label>,
}

impl CurveFile {
    pub fn morse_or_default(&self) -> MorseFunction {
        self.morse.clone().unwrap_or(MorseFunction::NegHeight)
    }

    pub fn render(&self) -> String {
        let mut out = self.curve.render();
        for l in &self.labels {
            out.push_str(&format!("label {} at {} {}\n", l.name, fmt_rational(&l.at.x), fmt_rational(&l.at.y)));
        }
        match &self.morse {
            Some(MorseFunction::Height) => out.push_str("morse height\n"),
            Some(MorseFunction::NegHeight) => out.push_str("morse neg-height\n"),
            Some(MorseFunction::VertexValues(vals)) => {
                out.push_str("morse values");
                for v in vals {
                    out.push(' ');
                    out.push_str(&fmt_rational(v));
                }
                out.push('\n');
            }
            None => {}
        }
        out
    }
}

struct Tokens<'a> {
    line: usize,
    items: Vec<(usize, &'a str)>,
}

impl<'a> Tokens<'a> {
    fn split(line_no: usize, line: &'a str) -> Self {
        let mut items = Vec::new();
        let mut start = None;
        for (i, ch) in line.char_indices() {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    items.push((s, &line[s..i]));
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            items.push((s, &line[s..]));
        }
        Self { line: line_no, items }
    }

    fn err(&self, idx: usize, message: impl Into<String>) -> CurveError {
        let column = self
            .items
            .get(idx)
            .map(|(c, _)| c + 1)
            .unwrap_or_else(|| self.items.last().map(|(c, s)| c + s.len() + 1).unwrap_or(1));
        CurveError::Syntax { line: self.line, column, message: message.into() }
    }

    fn rational(&self, idx: usize) -> Result<Rational, CurveError> {
        let (_, tok) = self.items.get(idx).ok_or_else(|| self.err(idx, "expected a number"))?;
        parse_rational(tok).ok_or_else(|| self.err(idx, format!("invalid number `{tok}`")))
    }

    fn expect_len(&self, n: usize) -> Result<(), CurveError> {
        if self.items.len() > n {
            return Err(self.err(n, "unexpected trailing token"));
        }
        if self.items.len() < n {
            return Err(self.err(self.items.len(), "missing token"));
        }
        Ok(())
    }
}

/// Parses a full curve file: vertices, labels and an optional Morse stanza.
pub fn parse_curve_file(text: &str) -> Result<CurveFile, CurveError> {
    let mut vertices = Vec::new();
    let mut labels = Vec::new();
    let mut morse = None;
    let mut name = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let toks = Tokens::split(idx + 1, line);
        let Some(&(_, head)) = toks.items.first() else { continue };
        match head {
            "v" => {
                toks.expect_len(3)?;
                vertices.push(Point::new(toks.rational(1)?, toks.rational(2)?));
            }
            "label" => {
                toks.expect_len(5)?;
                if toks.items[2].1 != "at" {
                    return Err(toks.err(2, "expected `at`"));
                }
                labels.push(Label {
                    name: toks.items[1].1.to_string(),
                    at: Point::new(toks.rational(3)?, toks.rational(4)?),
                });
            }
            "morse" => {
                if morse.is_some() {
                    return Err(toks.err(0, "duplicate morse stanza"));
                }
                match toks.items.get(1).map(|t| t.1) {
                    Some("height") => {
                        toks.expect_len(2)?;
                        morse = Some(MorseFunction::Height);
                    }
                    Some("neg-height") => {
                        toks.expect_len(2)?;
                        morse = Some(MorseFunction::NegHeight);
                    }
                    Some("values") => {
                        let vals = (2..toks.items.len()).map(|i| toks.rational(i)).collect::<Result<Vec<_>, _>>()?;
                        morse = Some(MorseFunction::VertexValues(vals));
                    }
                    _ => return Err(toks.err(1, "expected `height`, `neg-height` or `values`")),
                }
            }
            "name" => {
                if toks.items.len() < 2 {
                    return Err(toks.err(1, "missing name"));
                }
                let start = toks.items[1].0;
                name = Some(line[start..].trim_end().to_string());
            }
            other => return Err(toks.err(0, format!("unknown directive `{other}`"))),
        }
    }
    let mut curve = Curve::new(vertices)?;
    curve.name = name;
    Ok(CurveFile { curve, morse, labels })
}

pub fn parse_curve(text: &str) -> Result<Curve, CurveError> {
    parse_curve_file(text).map(|f| f.curve)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Cusp { vertex: usize },
    VertexOnSegment { vertex: usize, segment: usize },
    Overlap { segments: (usize, usize) },
    TriplePoint { location: Point },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Cusp { vertex } => write!(f, "cusp at vertex {vertex}"),
            Violation::VertexOnSegment { vertex, segment } => {
                write!(f, "vertex on non-adjacent segment: vertex {vertex} on segment {segment}")
            }
            Violation::Overlap { segments: (a, b) } => {
                write!(f, "segments {a} and {b} overlap")
            }
            Violation::TriplePoint { location } => write!(f, "triple point at {location}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn adjacent(n: usize, i: usize, j: usize) -> bool {
    (i + 1) % n == j || (j + 1) % n == i
}

/// Checks that the curve is an immersion in general position: no cusps, transverse
/// double points in segment interiors only, no vertex on another segment, no triple points.
pub fn validate_immersion(c: &Curve) -> ValidationReport {
    let n = c.len();
    let mut violations = Vec::new();
    for i in 0..n {
        let a = c.tangent(c.prev(i));
        let b = c.tangent(i);
        if a.cross(&b).is_zero() && a.dot(&b).is_negative() {
            violations.push(Violation::Cusp { vertex: i });
        }
    }
    let mut crossings: Vec<Point> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if adjacent(n, i, j) {
                continue;
            }
            let (a1, a2) = c.segment(i);
            let (b1, b2) = c.segment(j);
            match segment_intersect(a1, a2, b1, b2) {
                SegmentIntersection::None => {}
                SegmentIntersection::Crossing { point, .. } => crossings.push(point),
                SegmentIntersection::Degenerate => {
                    match crate::geometry::segment::segment_contact(a1, a2, b1, b2) {
                        Contact::Overlap => violations.push(Violation::Overlap { segments: (i, j) }),
                        Contact::At { s, t, .. } => {
                            // report the vertex that lies on the other segment
                            if s.is_zero() || s == Rational::one() {
                                let vertex = if s.is_zero() { i } else { c.next(i) };
                                violations.push(Violation::VertexOnSegment { vertex, segment: j });
                            } else {
                                let vertex = if t.is_zero() { j } else { c.next(j) };
                                violations.push(Violation::VertexOnSegment { vertex, segment: i });
                            }
                        }
                        Contact::Disjoint => {}
                    }
                }
            }
        }
    }
    crossings.sort();
    for w in crossings.windows(2) {
        if w[0] == w[1] {
            let loc = w[0].clone();
            if !violations.iter().any(|v| v == &Violation::TriplePoint { location: loc.clone() }) {
                violations.push(Violation::TriplePoint { location: loc });
            }
        }
    }
    violations.dedup();
    ValidationReport { violations }
}
