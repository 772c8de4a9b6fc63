//! Brute-force disc counting used to check the tracer. The boundary of a candidate
//! disc is described only by which domain intervals it covers; face labels are solved
//! over the dual graph and every local condition is re-derived from the curves.

use std::collections::{BTreeMap, VecDeque};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::curve::{cyclic_between, Curve, CurveParam, Direction};
use crate::disc::BigonQuery;
use crate::geometry::{local_rays, Arrangement};
use crate::morse::MorseFunction;
use crate::point::{ccw_strictly_between, rat, turn_wraps, Point, Rational};

pub const DEFAULT_MAX_W: i64 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCertificate {
    pub top_direction: Direction,
    pub bottom_direction: Direction,
    pub winding: BTreeMap<usize, i64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub certificates: Vec<OracleCertificate>,
    /// Some candidate needed a face label above the search bound.
    pub inconclusive: bool,
}

impl OracleResult {
    pub fn count(&self) -> usize {
        self.certificates.len()
    }
}

/// Arrangement plus, for every vertex, the curve branches passing through it.
pub struct Oracle<'a> {
    arr: &'a Arrangement,
    curves: Vec<&'a Curve>,
    branches: Vec<Vec<(usize, CurveParam)>>,
    pub max_w: i64,
}

fn same_direction(a: &Point, b: &Point) -> bool {
    a.cross(b).is_zero() && a.dot(b).is_positive()
}

fn in_arc(a: &CurveParam, m: &CurveParam, b: &CurveParam, dir: Direction) -> bool {
    match dir {
        Direction::Forward => cyclic_between(a, m, b),
        Direction::Backward => cyclic_between(b, m, a),
    }
}

/// Ray pointing back along the path and ray pointing ahead, for travel through `p`.
fn travel_rays(c: &Curve, p: &CurveParam, dir: Direction) -> (Point, Point) {
    let (back, ahead) = local_rays(c, p);
    match dir {
        Direction::Forward => (back, ahead),
        Direction::Backward => (ahead, back),
    }
}

struct Visit {
    back: Point,
    ahead: Point,
}

impl<'a> Oracle<'a> {
    pub fn new(arr: &'a Arrangement, curves: &[&'a Curve]) -> Self {
        let mut branches = vec![Vec::new(); arr.vertices.len()];
        for (v, p) in arr.vertices.iter().enumerate() {
            for (k, c) in curves.iter().enumerate() {
                for i in 0..c.len() {
                    if c.vertex(i) == p {
                        branches[v].push((k, CurveParam::vertex(i)));
                        continue;
                    }
                    let (a, b) = c.segment(i);
                    let d = b - a;
                    let w = p - a;
                    if !d.cross(&w).is_zero() {
                        continue;
                    }
                    let t = w.dot(&d) / d.norm_sq();
                    if t.is_positive() && t < Rational::one() {
                        branches[v].push((k, CurveParam::new(i, t)));
                    }
                }
            }
        }
        Self { arr, curves: curves.to_vec(), branches, max_w: DEFAULT_MAX_W }
    }

    pub fn with_max_w(mut self, max_w: i64) -> Self {
        self.max_w = max_w;
        self
    }

    fn edge_midpoint(&self, e: usize) -> CurveParam {
        let edge = &self.arr.edges[e];
        let end = if edge.end.segment == edge.segment { edge.end.t.clone() } else { Rational::one() };
        CurveParam::new(edge.segment, (&edge.start.t + end) * rat(1, 2))
    }

    /// Every certificate labeling for the query.
    pub fn bigons(&self, q: &BigonQuery) -> OracleResult {
        let mut result = OracleResult::default();
        let two = q.top_curve != q.bottom_curve;
        let x_crit =
            if two { q.input.bottom.is_vertex() && q.input.top.is_vertex() } else { q.input.bottom == q.input.top };
        let y_crit =
            if two { q.output.bottom.is_vertex() && q.output.top.is_vertex() } else { q.output.bottom == q.output.top };
        for dt in [Direction::Forward, Direction::Backward] {
            for db in [Direction::Forward, Direction::Backward] {
                if !two && (x_crit || y_crit) && dt != db {
                    continue;
                }
                if two && x_crit && y_crit && dt == db {
                    continue;
                }
                if q.input.top == q.output.top || q.input.bottom == q.output.bottom {
                    continue;
                }
                match self.check(q, dt, db) {
                    Check::Certificate(winding) => {
                        result.certificates.push(OracleCertificate { top_direction: dt, bottom_direction: db, winding })
                    }
                    Check::Inconclusive => result.inconclusive = true,
                    Check::Rejected => {}
                }
            }
        }
        result
    }

    fn check(&self, q: &BigonQuery, dt: Direction, db: Direction) -> Check {
        let arr = self.arr;
        let top = self.curves[q.top_curve];
        let bottom = self.curves[q.bottom_curve];

        // net multiplicity of the boundary along each edge
        let jump: Vec<i64> = (0..arr.edges.len())
            .map(|e| {
                let k = arr.edges[e].curve;
                let m = self.edge_midpoint(e);
                let mut j = 0;
                if k == q.top_curve && in_arc(&q.input.top, &m, &q.output.top, dt) {
                    j += if dt == Direction::Forward { 1 } else { -1 };
                }
                if k == q.bottom_curve && in_arc(&q.output.bottom, &m, &q.input.bottom, db) {
                    j += if db == Direction::Forward { 1 } else { -1 };
                }
                j
            })
            .collect();

        // labels from the unbounded face across the dual graph
        let nf = arr.faces.len();
        let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); nf];
        for (e, &j) in jump.iter().enumerate() {
            let (l, r) = (arr.left_face(2 * e), arr.right_face(2 * e));
            adj[r].push((l, j));
            adj[l].push((r, -j));
        }
        let mut w: Vec<Option<i64>> = vec![None; nf];
        w[arr.unbounded] = Some(0);
        let mut queue = VecDeque::from([arr.unbounded]);
        while let Some(f) = queue.pop_front() {
            let wf = w[f].unwrap();
            for &(g, j) in &adj[f] {
                match w[g] {
                    None => {
                        w[g] = Some(wf + j);
                        queue.push_back(g);
                    }
                    Some(wg) if wg != wf + j => return Check::Rejected,
                    Some(_) => {}
                }
            }
        }
        let w: Vec<i64> = w.into_iter().map(|x| x.unwrap_or(0)).collect();
        if w.iter().any(|&x| x < 0) {
            return Check::Rejected;
        }
        if w.iter().any(|&x| x > self.max_w) {
            return Check::Inconclusive;
        }

        // corners must turn strictly left
        let (xb, _) = travel_rays(bottom, &q.input.bottom, db);
        let (_, xt) = travel_rays(top, &q.input.top, dt);
        let (yt, _) = travel_rays(top, &q.output.top, dt);
        let (_, yb) = travel_rays(bottom, &q.output.bottom, db);
        let x_corner = Visit { back: xb, ahead: xt };
        let y_corner = Visit { back: yt, ahead: yb };
        let two = q.top_curve != q.bottom_curve;
        let x_crit = q.input.bottom.is_vertex() && q.input.top.is_vertex() && (two || q.input.bottom == q.input.top);
        let y_crit =
            q.output.bottom.is_vertex() && q.output.top.is_vertex() && (two || q.output.bottom == q.output.top);
        for (c, crit, input) in [(&x_corner, x_crit, true), (&y_corner, y_crit, false)] {
            if crit && !two {
                continue;
            }
            let convex = if crit && dt == db {
                if input {
                    let (_, lb) = travel_rays(bottom, &q.input.bottom, db);
                    lb.cross(&c.ahead).is_positive()
                } else {
                    let (bb, _) = travel_rays(bottom, &q.output.bottom, db);
                    c.back.cross(&bb).is_positive()
                }
            } else {
                (-c.back.clone()).cross(&c.ahead).is_positive()
            };
            if !convex {
                return Check::Rejected;
            }
        }

        // every visit of the boundary at a vertex: sheets, and the total turning
        let mut rotation = 0;
        for (v, branches) in self.branches.iter().enumerate() {
            let mut visits: Vec<Visit> = Vec::new();
            for (k, b) in branches {
                if *k == q.top_curve && in_arc(&q.input.top, b, &q.output.top, dt) {
                    let (back, ahead) = travel_rays(top, b, dt);
                    visits.push(Visit { back, ahead });
                }
                if *k == q.bottom_curve && in_arc(&q.output.bottom, b, &q.input.bottom, db) {
                    let (back, ahead) = travel_rays(bottom, b, db);
                    visits.push(Visit { back, ahead });
                }
            }
            let p = &arr.vertices[v];
            if p == &q.input.location {
                visits.push(Visit { back: x_corner.back.clone(), ahead: x_corner.ahead.clone() });
            }
            if p == &q.output.location {
                visits.push(Visit { back: y_corner.back.clone(), ahead: y_corner.ahead.clone() });
            }
            if visits.is_empty() {
                continue;
            }
            for vis in &visits {
                if same_direction(&vis.back, &vis.ahead) {
                    return Check::Rejected;
                }
                rotation += turn_wraps(&-vis.back.clone(), &vis.ahead);
            }
            for &h in arr.outgoing(v) {
                let r = arr.direction(h);
                let covered = visits
                    .iter()
                    .filter(|vis| same_direction(&r, &vis.ahead) || ccw_strictly_between(&vis.ahead, &r, &vis.back))
                    .count() as i64;
                if w[arr.left_face(h)] < covered {
                    return Check::Rejected;
                }
            }
        }
        if rotation != 1 {
            return Check::Rejected;
        }
        Check::Certificate(w.into_iter().enumerate().filter(|&(_, x)| x != 0).collect())
    }
}

enum Check {
    Certificate(BTreeMap<usize, i64>),
    Inconclusive,
    Rejected,
}

/// Convenience wrapper for a single query.
pub fn oracle_bigons(arr: &Arrangement, curves: &[&Curve], q: &BigonQuery, max_w: i64) -> OracleResult {
    Oracle::new(arr, curves).with_max_w(max_w).bigons(q)
}

/// Monotone runs of f between strict extrema, from each maximum down to the minimum
/// reached forward and backward: `(max vertex, min vertex, direction)`.
pub fn oracle_trajectories(c: &Curve, f: &MorseFunction) -> Vec<(usize, usize, Direction)> {
    let n = c.len();
    let val: Vec<Rational> = (0..n).map(|i| f.vertex_value(c, i)).collect();
    let mut out = Vec::new();
    for i in 0..n {
        if !(val[i] > val[(i + 1) % n] && val[i] > val[(i + n - 1) % n]) {
            continue;
        }
        let mut j = i;
        while val[(j + 1) % n] < val[j] {
            j = (j + 1) % n;
        }
        out.push((i, j, Direction::Forward));
        let mut j = i;
        while val[(j + n - 1) % n] < val[j] {
            j = (j + n - 1) % n;
        }
        out.push((i, j, Direction::Backward));
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disc::crossing_branches;
    use crate::geometry::{build_arrangement, curve_intersections};
    use crate::pushoff::{construct_pushoff, PushoffConfig};

    fn diamond() -> Curve {
        Curve::from_ints(&[(0, -1), (1, 0), (0, 1), (-1, 0)]).unwrap()
    }

    #[test]
    fn diamond_lunes() {
        let c = diamond();
        let push = construct_pushoff(&c, &MorseFunction::NegHeight, &PushoffConfig::new(rat(1, 8))).unwrap();
        let arr = build_arrangement(&[&c, &push.curve]).unwrap();
        let xs = curve_intersections(&c, &push.curve).unwrap();
        let (max, min) = (&xs[0], &xs[1]);
        assert_eq!(max.location, Point::from_ints(0, -1));
        let q =
            BigonQuery { top_curve: 1, bottom_curve: 0, input: crossing_branches(max), output: crossing_branches(min) };
        let r = oracle_bigons(&arr, &[&c, &push.curve], &q, DEFAULT_MAX_W);
        assert_eq!(r.count(), 2);
        assert!(!r.inconclusive);
        let back = BigonQuery { top_curve: 1, bottom_curve: 0, input: q.output.clone(), output: q.input.clone() };
        assert_eq!(oracle_bigons(&arr, &[&c, &push.curve], &back, DEFAULT_MAX_W).count(), 0);
    }

    #[test]
    fn trajectories_by_scan() {
        assert_eq!(oracle_trajectories(&diamond(), &MorseFunction::NegHeight).len(), 2);
        let fig8 = Curve::from_ints(&[(-2, 0), (-1, 1), (1, -1), (2, 0), (1, 1), (-1, -1)]).unwrap();
        let t = oracle_trajectories(&fig8, &MorseFunction::NegHeight);
        assert_eq!(t.len(), 4);
        assert!(t.contains(&(2, 1, Direction::Backward)));
    }
}
