//! Planar subdivision induced by one or more curves, with half-edges, faces and
//! per-face winding numbers.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use super::segment::{point_segment_dist_sq, segment_contact, Contact};
use super::GeometryError;
use crate::curve::{Curve, CurveParam, Direction};
use crate::point::{angle_cmp, int, Point, Rational};

/// A piece of one curve segment between consecutive arrangement vertices, oriented
/// along the curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub curve: usize,
    pub segment: usize,
    pub start: CurveParam,
    pub end: CurveParam,
    pub tail: usize,
    pub head: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// Half-edges with this face on their left, in cyclic order.
    pub boundary: Vec<usize>,
    /// A point strictly inside the face.
    pub sample: Point,
    /// Winding number of each input curve around the face.
    pub winding: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    pub vertices: Vec<Point>,
    pub edges: Vec<Edge>,
    pub faces: Vec<Face>,
    pub unbounded: usize,
    curve_count: usize,
    vertex_index: HashMap<Point, usize>,
    /// Outgoing half-edges per vertex in counterclockwise order.
    outgoing: Vec<Vec<usize>>,
    next: Vec<usize>,
    face_of: Vec<usize>,
    /// Edge indices of each curve in curve order.
    curve_edges: Vec<Vec<usize>>,
    /// Winding contribution of each edge (forward) around each face sample, row per face.
    contributions: Vec<Vec<i8>>,
}

/// Half-edge `2e` runs along edge `e`, `2e + 1` against it.
pub fn half_edge(edge: usize, direction: Direction) -> usize {
    match direction {
        Direction::Forward => 2 * edge,
        Direction::Backward => 2 * edge + 1,
    }
}

pub fn twin(h: usize) -> usize {
    h ^ 1
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let n = parent[y];
        parent[y] = r;
        y = n;
    }
    r
}

/// Contribution of the directed segment `a -> b` to the winding number around `p`.
fn winding_contribution(a: &Point, b: &Point, p: &Point) -> i8 {
    let side = (b - a).cross(&(p - a));
    if a.y <= p.y {
        if b.y > p.y && side.is_positive() {
            return 1;
        }
    } else if b.y <= p.y && side.is_negative() {
        return -1;
    }
    0
}

pub fn build_arrangement(curves: &[&Curve]) -> Result<Arrangement, GeometryError> {
    let mut splits: Vec<Vec<Vec<Rational>>> =
        curves.iter().map(|c| vec![vec![Rational::zero(), Rational::one()]; c.len()]).collect();
    for (k, ck) in curves.iter().enumerate() {
        for i in 0..ck.len() {
            let (a1, a2) = ck.segment(i);
            for (l, cl) in curves.iter().enumerate() {
                for j in 0..cl.len() {
                    if (l, j) <= (k, i) {
                        continue;
                    }
                    let (b1, b2) = cl.segment(j);
                    match segment_contact(a1, a2, b1, b2) {
                        Contact::Disjoint => {}
                        Contact::Overlap => return Err(GeometryError::NonTransverse { location: a1.clone() }),
                        Contact::At { s, t, .. } => {
                            splits[k][i].push(s);
                            splits[l][j].push(t);
                        }
                    }
                }
            }
        }
    }

    let mut vertices = Vec::new();
    let mut vertex_index: HashMap<Point, usize> = HashMap::new();
    let mut intern = |p: Point, vertices: &mut Vec<Point>| -> usize {
        *vertex_index.entry(p.clone()).or_insert_with(|| {
            vertices.push(p);
            vertices.len() - 1
        })
    };
    let mut edges = Vec::new();
    let mut curve_edges = vec![Vec::new(); curves.len()];
    for (k, c) in curves.iter().enumerate() {
        for i in 0..c.len() {
            let ts = &mut splits[k][i];
            ts.sort();
            ts.dedup();
            let (a, b) = c.segment(i);
            for w in ts.windows(2) {
                let tail = intern(a.lerp(b, &w[0]), &mut vertices);
                let head = intern(a.lerp(b, &w[1]), &mut vertices);
                let end = if w[1].is_one() { CurveParam::vertex(c.next(i)) } else { CurveParam::new(i, w[1].clone()) };
                curve_edges[k].push(edges.len());
                edges.push(Edge { curve: k, segment: i, start: CurveParam::new(i, w[0].clone()), end, tail, head });
            }
        }
    }
    let vertex_index: HashMap<Point, usize> = vertices.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();

    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    for e in &edges {
        let (a, b) = (find(&mut parent, e.tail), find(&mut parent, e.head));
        parent[a] = b;
    }
    let root = find(&mut parent, 0);
    if (0..vertices.len()).any(|v| find(&mut parent, v) != root) {
        return Err(GeometryError::Disconnected);
    }

    let hcount = 2 * edges.len();
    let tail_of = |h: usize| if h.is_multiple_of(2) { edges[h / 2].tail } else { edges[h / 2].head };
    let head_of = |h: usize| tail_of(twin(h));
    let dir_of = |h: usize| &vertices[head_of(h)] - &vertices[tail_of(h)];

    let mut outgoing = vec![Vec::new(); vertices.len()];
    for h in 0..hcount {
        outgoing[tail_of(h)].push(h);
    }
    for (v, list) in outgoing.iter_mut().enumerate() {
        list.sort_by(|&a, &b| angle_cmp(&dir_of(a), &dir_of(b)));
        for w in list.windows(2) {
            if angle_cmp(&dir_of(w[0]), &dir_of(w[1])) == Ordering::Equal {
                return Err(GeometryError::NonTransverse { location: vertices[v].clone() });
            }
        }
    }
    let mut next = vec![0; hcount];
    for h in 0..hcount {
        let v = head_of(h);
        let list = &outgoing[v];
        let pos = list.iter().position(|&x| x == twin(h)).expect("twin leaves head");
        next[h] = list[(pos + list.len() - 1) % list.len()];
    }

    let mut face_of = vec![usize::MAX; hcount];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for h in 0..hcount {
        if face_of[h] != usize::MAX {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = h;
        while face_of[x] == usize::MAX {
            face_of[x] = cycles.len();
            cycle.push(x);
            x = next[x];
        }
        cycles.push(cycle);
    }

    let euler = vertices.len() as i64 - edges.len() as i64 + cycles.len() as i64;
    if euler != 2 {
        return Err(GeometryError::Euler(euler));
    }

    let mut unbounded = None;
    let mut faces = Vec::new();
    for (f, cycle) in cycles.iter().enumerate() {
        let area2 = cycle
            .iter()
            .map(|&h| vertices[tail_of(h)].cross(&vertices[head_of(h)]))
            .fold(Rational::zero(), |a, b| a + b);
        if area2.is_negative() {
            if unbounded.is_some() {
                return Err(GeometryError::Disconnected);
            }
            unbounded = Some(f);
        }
        let h = cycle[0];
        let (a, b) = (&vertices[tail_of(h)], &vertices[head_of(h)]);
        let mid = a.lerp(b, &Rational::new(1.into(), 2.into()));
        let normal = (b - a).perp();
        let clearance = edges
            .iter()
            .enumerate()
            .filter(|(e, _)| *e != h / 2)
            .map(|(_, e)| point_segment_dist_sq(&mid, &vertices[e.tail], &vertices[e.head]))
            .min()
            .unwrap_or_else(|| int(1));
        let limit = clearance / int(4);
        let nn = normal.norm_sq();
        let mut eta = Rational::one();
        while &eta * &eta * &nn >= limit {
            eta /= int(2);
        }
        faces.push(Face { boundary: cycle.clone(), sample: &mid + &normal.scale(&eta), winding: Vec::new() });
    }
    let unbounded = unbounded.ok_or(GeometryError::Disconnected)?;

    let contributions: Vec<Vec<i8>> = faces
        .iter()
        .map(|f| edges.iter().map(|e| winding_contribution(&vertices[e.tail], &vertices[e.head], &f.sample)).collect())
        .collect();
    for (f, face) in faces.iter_mut().enumerate() {
        face.winding =
            (0..curves.len()).map(|k| curve_edges[k].iter().map(|&e| contributions[f][e] as i64).sum()).collect();
    }

    Ok(Arrangement {
        vertices,
        edges,
        faces,
        unbounded,
        curve_count: curves.len(),
        vertex_index,
        outgoing,
        next,
        face_of,
        curve_edges,
        contributions,
    })
}

impl Arrangement {
    pub fn curve_count(&self) -> usize {
        self.curve_count
    }

    pub fn half_edge_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn tail(&self, h: usize) -> usize {
        let e = &self.edges[h / 2];
        if h.is_multiple_of(2) {
            e.tail
        } else {
            e.head
        }
    }

    pub fn head(&self, h: usize) -> usize {
        self.tail(twin(h))
    }

    pub fn direction(&self, h: usize) -> Point {
        &self.vertices[self.head(h)] - &self.vertices[self.tail(h)]
    }

    pub fn next(&self, h: usize) -> usize {
        self.next[h]
    }

    /// Face on the left of half-edge `h`.
    pub fn left_face(&self, h: usize) -> usize {
        self.face_of[h]
    }

    pub fn right_face(&self, h: usize) -> usize {
        self.face_of[twin(h)]
    }

    pub fn outgoing(&self, v: usize) -> &[usize] {
        &self.outgoing[v]
    }

    pub fn vertex_at(&self, p: &Point) -> Option<usize> {
        self.vertex_index.get(p).copied()
    }

    pub fn curve_edges(&self, curve: usize) -> &[usize] {
        &self.curve_edges[curve]
    }

    /// Winding contribution of half-edge `h` around the sample point of face `f`.
    pub fn contribution(&self, f: usize, h: usize) -> i64 {
        let c = self.contributions[f][h / 2] as i64;
        if h.is_multiple_of(2) {
            c
        } else {
            -c
        }
    }

    /// Half-edges along `curve` from parameter `a` to `b` in the given direction.
    /// Both parameters must be arrangement vertices of that curve.
    pub fn arc(&self, curve: usize, a: &CurveParam, b: &CurveParam, dir: Direction) -> Option<Vec<usize>> {
        let list = &self.curve_edges[curve];
        let m = list.len();
        let mut out = Vec::new();
        match dir {
            Direction::Forward => {
                let mut pos = list.iter().position(|&e| &self.edges[e].start == a)?;
                loop {
                    let e = list[pos];
                    out.push(half_edge(e, Direction::Forward));
                    if &self.edges[e].end == b {
                        return Some(out);
                    }
                    pos = (pos + 1) % m;
                    if out.len() > m {
                        return None;
                    }
                }
            }
            Direction::Backward => {
                let mut pos = list.iter().position(|&e| &self.edges[e].end == a)?;
                loop {
                    let e = list[pos];
                    out.push(half_edge(e, Direction::Backward));
                    if &self.edges[e].start == b {
                        return Some(out);
                    }
                    pos = (pos + m - 1) % m;
                    if out.len() > m {
                        return None;
                    }
                }
            }
        }
    }

    /// Text listing of faces with winding numbers and boundary cycles.
    pub fn dump(&self) -> String {
        let mut out = format!(
            "arrangement: {} vertices, {} edges, {} faces\n",
            self.vertices.len(),
            self.edges.len(),
            self.faces.len()
        );
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "vertex {i} {v}");
        }
        for (f, face) in self.faces.iter().enumerate() {
            let tag = if f == self.unbounded { " unbounded" } else { "" };
            let cycle: Vec<String> = face.boundary.iter().map(|&h| self.tail(h).to_string()).collect();
            let winding: Vec<String> = face.winding.iter().map(|w| w.to_string()).collect();
            let _ = writeln!(out, "face {f}{tag} winding [{}] boundary {}", winding.join(" "), cycle.join(" -> "));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Curve {
        Curve::from_ints(&[(0, -1), (1, 0), (0, 1), (-1, 0)]).unwrap()
    }

    fn fig8() -> Curve {
        Curve::from_ints(&[(-2, 0), (-1, 1), (1, -1), (2, 0), (1, 1), (-1, -1)]).unwrap()
    }

    #[test]
    fn diamond_has_two_faces() {
        let a = build_arrangement(&[&diamond()]).unwrap();
        assert_eq!(a.faces.len(), 2);
        let inner = 1 - a.unbounded;
        assert_eq!(a.faces[inner].winding, vec![1]);
        assert_eq!(a.faces[a.unbounded].winding, vec![0]);
        assert_eq!(a.vertices.len() - a.edges.len() + a.faces.len(), 2);
    }

    #[test]
    fn figure_eight_lobes_have_opposite_winding() {
        let a = build_arrangement(&[&fig8()]).unwrap();
        assert_eq!(a.faces.len(), 3);
        let mut w: Vec<i64> = a.faces.iter().map(|f| f.winding[0]).collect();
        w.sort();
        assert_eq!(w, vec![-1, 0, 1]);
        assert_eq!(a.vertices.len(), 7);
        assert!(a.dump().contains("unbounded"));
    }

    #[test]
    fn winding_jumps_across_every_edge() {
        let a = build_arrangement(&[&fig8()]).unwrap();
        for h in (0..a.half_edge_count()).step_by(2) {
            let l = &a.faces[a.left_face(h)].winding;
            let r = &a.faces[a.right_face(h)].winding;
            assert_eq!(l[0] - r[0], 1);
        }
    }

    #[test]
    fn arcs_between_vertices() {
        let c = fig8();
        let a = build_arrangement(&[&c]).unwrap();
        let x = CurveParam::new(1, Rational::new(1.into(), 2.into()));
        let y = CurveParam::new(4, Rational::new(1.into(), 2.into()));
        let fwd = a.arc(0, &x, &y, Direction::Forward).unwrap();
        assert_eq!(fwd.len(), 4);
        let bwd = a.arc(0, &x, &y, Direction::Backward).unwrap();
        assert_eq!(bwd.len() + fwd.len(), a.edges.len());
        assert_eq!(a.vertices[a.tail(bwd[0])], Point::zero());
    }
}
