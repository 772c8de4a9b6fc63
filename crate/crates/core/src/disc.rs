//! Combinatorial discs: immersed bigons with two convex corners, traced along the
//! arrangement and certified by their face winding numbers.

use std::collections::{BTreeMap, HashMap};

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::curve::{Curve, CurveParam, Direction};
use crate::geometry::arrangement::twin;
use crate::geometry::{build_arrangement, local_rays, Arrangement, GeometryError, SelfIntersection};
use crate::morse::CriticalPoint;
use crate::point::{turn_wraps, Point};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiscError {
    #[error("corner at {0} is neither a double point nor a repeated parameter")]
    InvalidCorner(Point),
    #[error("corner parameters map to different points")]
    MismatchedCorner,
    #[error("index-{index} critical point cannot be the {role} of a disc with a switching corner")]
    Pruned { index: u8, role: &'static str },
    #[error("both corners are critical points; these are gradient trajectories, not discs")]
    NoSwitchingCorner,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Input,
    Output,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Corner {
    pub location: Point,
    pub incoming_param: CurveParam,
    pub outgoing_param: CurveParam,
    pub switching: bool,
    pub convex: bool,
    pub role: Role,
}

/// Branches meeting at a disc corner: the bottom arc ends (input) or starts (output)
/// on `bottom`, the top arc starts (input) or ends (output) on `top`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CornerBranches {
    pub location: Point,
    pub bottom: CurveParam,
    pub top: CurveParam,
    /// The corner sits on a critical point rather than a double point.
    pub critical: bool,
}

/// A generator seen as a corner of a one-curve disc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CornerSpec {
    Critical(CriticalPoint),
    /// Ordered pair of branches at a double point; `first` carries the bottom arc.
    Pair {
        location: Point,
        first: CurveParam,
        second: CurveParam,
    },
}

impl CornerSpec {
    pub fn pair(si: &SelfIntersection, reversed: bool) -> Self {
        let (first, second) = if reversed { (&si.q, &si.p) } else { (&si.p, &si.q) };
        CornerSpec::Pair { location: si.location.clone(), first: first.clone(), second: second.clone() }
    }

    pub fn branches(&self) -> CornerBranches {
        match self {
            CornerSpec::Critical(cp) => CornerBranches {
                location: cp.location.clone(),
                bottom: cp.param.clone(),
                top: cp.param.clone(),
                critical: true,
            },
            CornerSpec::Pair { location, first, second } => CornerBranches {
                location: location.clone(),
                bottom: first.clone(),
                top: second.clone(),
                critical: false,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BigonQuery {
    pub top_curve: usize,
    pub bottom_curve: usize,
    pub input: CornerBranches,
    pub output: CornerBranches,
}

impl BigonQuery {
    fn two_curves(&self) -> bool {
        self.top_curve != self.bottom_curve
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bigon {
    pub corner_in: Corner,
    pub corner_out: Corner,
    pub top_direction: Direction,
    pub bottom_direction: Direction,
    pub arc_top: Vec<Point>,
    pub arc_bottom: Vec<Point>,
    /// Faces with nonzero winding, keyed by arrangement face index.
    pub winding: BTreeMap<usize, i64>,
}

impl Bigon {
    pub fn max_winding(&self) -> i64 {
        self.winding.values().copied().max().unwrap_or(0)
    }
}

/// Arrival and departure directions of a curve through a parameter.
fn arrive_dir(c: &Curve, p: &CurveParam, dir: Direction) -> Point {
    let (back, ahead) = local_rays(c, p);
    match dir {
        Direction::Forward => -back,
        Direction::Backward => -ahead,
    }
}

fn leave_dir(c: &Curve, p: &CurveParam, dir: Direction) -> Point {
    let (back, ahead) = local_rays(c, p);
    match dir {
        Direction::Forward => ahead,
        Direction::Backward => back,
    }
}

/// Classifies a one-curve corner reached along `inc` in direction `arrive` and left
/// along `out` in direction `leave`, with the disc on the left.
pub fn classify_corner(
    c: &Curve,
    sis: &[SelfIntersection],
    inc: (&CurveParam, Direction),
    out: (&CurveParam, Direction),
    role: Role,
) -> Result<Corner, DiscError> {
    let location = c.point_at(inc.0).map_err(|_| DiscError::MismatchedCorner)?;
    if c.point_at(out.0).map_err(|_| DiscError::MismatchedCorner)? != location {
        return Err(DiscError::MismatchedCorner);
    }
    let switching = inc.0 != out.0;
    if switching && !sis.iter().any(|si| (&si.p == inc.0 && &si.q == out.0) || (&si.q == inc.0 && &si.p == out.0)) {
        return Err(DiscError::InvalidCorner(location));
    }
    let a = arrive_dir(c, inc.0, inc.1);
    let l = leave_dir(c, out.0, out.1);
    Ok(Corner {
        location,
        incoming_param: inc.0.clone(),
        outgoing_param: out.0.clone(),
        switching,
        convex: a.cross(&l).is_positive(),
        role,
    })
}

/// Checks a closed loop of half-edges (disc on the left) and returns its face winding
/// numbers if it bounds an immersed disc whose only corners are at `corners`, given as
/// positions `i` where the turn from `boundary[i]` to `boundary[i + 1]` is a corner.
pub fn immersion_certificate(arr: &Arrangement, boundary: &[usize], corners: &[usize]) -> Option<BTreeMap<usize, i64>> {
    let m = boundary.len();
    if m == 0 {
        return None;
    }
    for i in 0..m {
        if arr.head(boundary[i]) != arr.tail(boundary[(i + 1) % m]) {
            return None;
        }
    }
    let w: Vec<i64> = (0..arr.faces.len()).map(|f| boundary.iter().map(|&h| arr.contribution(f, h)).sum()).collect();
    if w[arr.unbounded] != 0 || w.iter().any(|&x| x < 0) {
        return None;
    }
    let mut rotation = 0;
    let mut coverage: HashMap<(usize, usize), i64> = HashMap::new();
    for i in 0..m {
        let (h, g) = (boundary[i], boundary[(i + 1) % m]);
        let (din, dout) = (arr.direction(h), arr.direction(g));
        let cross = din.cross(&dout);
        if corners.contains(&i) && !cross.is_positive() {
            return None;
        }
        if cross.is_zero() && din.dot(&dout).is_negative() {
            return None;
        }
        rotation += turn_wraps(&din, &dout);
        let v = arr.head(h);
        let out = arr.outgoing(v);
        let k = out.len();
        let pos_out = out.iter().position(|&x| x == g)?;
        let pos_in = out.iter().position(|&x| x == twin(h))?;
        if pos_out == pos_in {
            return None;
        }
        let mut j = pos_out;
        while j != pos_in {
            *coverage.entry((v, j)).or_insert(0) += 1;
            j = (j + 1) % k;
        }
    }
    if rotation != 1 {
        return None;
    }
    for (&(v, j), &count) in &coverage {
        if w[arr.left_face(arr.outgoing(v)[j])] < count {
            return None;
        }
    }
    Some(w.into_iter().enumerate().filter(|&(_, x)| x != 0).collect())
}

const DIRECTIONS: [Direction; 2] = [Direction::Forward, Direction::Backward];

/// Arrangement of the curves a family of disc queries runs on: `[c]` for one-curve
/// discs, `[c, pushoff]` for two-curve discs.
pub struct DiscEngine<'a> {
    pub curves: Vec<&'a Curve>,
    pub arrangement: Arrangement,
}

impl<'a> DiscEngine<'a> {
    pub fn new(curves: &[&'a Curve]) -> Result<Self, DiscError> {
        Ok(Self { curves: curves.to_vec(), arrangement: build_arrangement(curves)? })
    }

    fn points(&self, loop_part: &[usize]) -> Vec<Point> {
        let arr = &self.arrangement;
        let mut pts = vec![arr.vertices[arr.tail(loop_part[0])].clone()];
        pts.extend(loop_part.iter().map(|&h| arr.vertices[arr.head(h)].clone()));
        pts
    }

    /// At a crossing on a shared vertex where both arcs keep their direction, the two
    /// curves meet at a small angle and the corner is convex when the top curve lies on
    /// the left of the bottom one after the input and before the output.
    fn wide_corners_convex(&self, q: &BigonQuery, dt: Direction, db: Direction) -> bool {
        let (top, bottom) = (self.curves[q.top_curve], self.curves[q.bottom_curve]);
        if q.input.critical {
            let lb = leave_dir(bottom, &q.input.bottom, db);
            let lt = leave_dir(top, &q.input.top, dt);
            if !lb.cross(&lt).is_positive() {
                return false;
            }
        }
        if q.output.critical {
            let at = arrive_dir(top, &q.output.top, dt);
            let ab = arrive_dir(bottom, &q.output.bottom, db);
            if !at.cross(&ab).is_positive() {
                return false;
            }
        }
        true
    }

    /// All certified bigons for the query, in a fixed order of arc directions.
    pub fn bigons(&self, q: &BigonQuery) -> Vec<Bigon> {
        let arr = &self.arrangement;
        let mut out = Vec::new();
        for dt in DIRECTIONS {
            for db in DIRECTIONS {
                if q.input.critical || q.output.critical {
                    if !q.two_curves() && dt != db {
                        continue;
                    }
                    if q.two_curves() && q.input.critical && q.output.critical && dt == db {
                        continue;
                    }
                }
                if q.input.top == q.output.top || q.input.bottom == q.output.bottom {
                    continue;
                }
                let Some(top) = arr.arc(q.top_curve, &q.input.top, &q.output.top, dt) else { continue };
                let Some(bottom) = arr.arc(q.bottom_curve, &q.output.bottom, &q.input.bottom, db) else {
                    continue;
                };
                let mut boundary = top.clone();
                boundary.extend(&bottom);
                // switching corners must turn strictly left; a critical corner of a
                // one-curve disc is a smooth point of its boundary
                let mut corners = Vec::new();
                if !q.output.critical || (q.two_curves() && dt != db) {
                    corners.push(top.len() - 1);
                }
                if !q.input.critical || (q.two_curves() && dt != db) {
                    corners.push(boundary.len() - 1);
                }
                if q.two_curves() && dt == db && !self.wide_corners_convex(q, dt, db) {
                    continue;
                }
                let Some(winding) = immersion_certificate(arr, &boundary, &corners) else { continue };
                let corner = |inc: &CurveParam, outp: &CurveParam, role| Corner {
                    location: if role == Role::Input { q.input.location.clone() } else { q.output.location.clone() },
                    incoming_param: inc.clone(),
                    outgoing_param: outp.clone(),
                    switching: q.two_curves() || inc != outp,
                    convex: true,
                    role,
                };
                out.push(Bigon {
                    corner_in: corner(&q.input.bottom, &q.input.top, Role::Input),
                    corner_out: corner(&q.output.top, &q.output.bottom, Role::Output),
                    top_direction: dt,
                    bottom_direction: db,
                    arc_top: self.points(&top),
                    arc_bottom: self.points(&bottom),
                    winding,
                });
            }
        }
        out
    }
}

/// One-curve discs between two generator corners, with the pruning of critical corners:
/// an index-1 point is never an input and an index-0 point never an output.
pub fn bigons_one_curve(engine: &DiscEngine, x: &CornerSpec, y: &CornerSpec) -> Result<Vec<Bigon>, DiscError> {
    match (x, y) {
        (CornerSpec::Critical(_), CornerSpec::Critical(_)) => return Err(DiscError::NoSwitchingCorner),
        (CornerSpec::Critical(cp), _) if cp.index != 0 => {
            return Err(DiscError::Pruned { index: cp.index, role: "input" })
        }
        (_, CornerSpec::Critical(cp)) if cp.index != 1 => {
            return Err(DiscError::Pruned { index: cp.index, role: "output" })
        }
        _ => {}
    }
    let q = BigonQuery { top_curve: 0, bottom_curve: 0, input: x.branches(), output: y.branches() };
    Ok(engine.bigons(&q))
}

/// Corner data of a crossing of `bottom` (curve 0) with `top` (curve 1).
pub fn crossing_branches(x: &crate::geometry::CrossPoint) -> CornerBranches {
    CornerBranches {
        location: x.location.clone(),
        bottom: x.param_a.clone(),
        top: x.param_b.clone(),
        critical: x.param_a.is_vertex() && x.param_b.is_vertex(),
    }
}

/// Two-curve discs from crossing `x` to crossing `y`, bottom arc on curve 0 and top arc
/// on curve 1 of the engine.
pub fn bigons_two_curves(
    engine: &DiscEngine,
    x: &crate::geometry::CrossPoint,
    y: &crate::geometry::CrossPoint,
) -> Vec<Bigon> {
    if x == y {
        return Vec::new();
    }
    let q = BigonQuery { top_curve: 1, bottom_curve: 0, input: crossing_branches(x), output: crossing_branches(y) };
    engine.bigons(&q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{curve_intersections, self_intersections};
    use crate::morse::{critical_points, MorseFunction};
    use crate::point::rat;
    use crate::pushoff::{construct_pushoff, PushoffConfig};

    fn diamond() -> Curve {
        Curve::from_ints(&[(0, -1), (1, 0), (0, 1), (-1, 0)]).unwrap()
    }

    fn fig8() -> Curve {
        Curve::from_ints(&[(-2, 0), (-1, 1), (1, -1), (2, 0), (1, 1), (-1, -1)]).unwrap()
    }

    #[test]
    fn certificate_of_a_jordan_curve() {
        let c = diamond();
        let arr = build_arrangement(&[&c]).unwrap();
        let ccw: Vec<usize> = arr.curve_edges(0).iter().map(|&e| 2 * e).collect();
        let w = immersion_certificate(&arr, &ccw, &[]).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w.values().copied().collect::<Vec<_>>(), vec![1]);
        let cw: Vec<usize> = ccw.iter().rev().map(|&h| h + 1).collect();
        assert!(immersion_certificate(&arr, &cw, &[]).is_none());
    }

    #[test]
    fn figure_eight_loop_is_not_a_disc() {
        let c = fig8();
        let arr = build_arrangement(&[&c]).unwrap();
        let fwd: Vec<usize> = arr.curve_edges(0).iter().map(|&e| 2 * e).collect();
        assert!(immersion_certificate(&arr, &fwd, &[]).is_none());
        let bwd: Vec<usize> = fwd.iter().rev().map(|&h| h + 1).collect();
        assert!(immersion_certificate(&arr, &bwd, &[]).is_none());
    }

    #[test]
    fn diamond_lunes_run_from_max_to_min() {
        let c = diamond();
        let f = MorseFunction::NegHeight;
        let push = construct_pushoff(&c, &f, &PushoffConfig::new(rat(1, 8))).unwrap();
        let xs = curve_intersections(&c, &push.curve).unwrap();
        let engine = DiscEngine::new(&[&c, &push.curve]).unwrap();
        let max = xs.iter().find(|x| x.location == Point::from_ints(0, -1)).unwrap();
        let min = xs.iter().find(|x| x.location == Point::from_ints(0, 1)).unwrap();
        let lunes = bigons_two_curves(&engine, max, min);
        assert_eq!(lunes.len(), 2);
        assert!(lunes.iter().all(|b| b.max_winding() == 1));
        assert!(bigons_two_curves(&engine, min, max).is_empty());
    }

    #[test]
    fn corner_classification() {
        let c = fig8();
        let sis = self_intersections(&c).unwrap();
        let (p, q) = (&sis[0].p, &sis[0].q);
        let k = classify_corner(&c, &sis, (p, Direction::Forward), (q, Direction::Forward), Role::Output).unwrap();
        assert!(k.switching);
        let v = CurveParam::vertex(3);
        let k = classify_corner(&c, &sis, (&v, Direction::Forward), (&v, Direction::Forward), Role::Input).unwrap();
        assert!(!k.switching);
        let bad = classify_corner(&c, &sis, (&v, Direction::Forward), (p, Direction::Forward), Role::Input);
        assert_eq!(bad, Err(DiscError::MismatchedCorner));
    }

    #[test]
    fn pruned_corners_are_rejected() {
        let c = fig8();
        let f = MorseFunction::NegHeight;
        let crit = critical_points(&c, &f).unwrap();
        let sis = self_intersections(&c).unwrap();
        let engine = DiscEngine::new(&[&c]).unwrap();
        let max = crit.iter().find(|p| p.index == 1).unwrap();
        let min = crit.iter().find(|p| p.index == 0).unwrap();
        let pair = CornerSpec::pair(&sis[0], false);
        assert!(matches!(
            bigons_one_curve(&engine, &CornerSpec::Critical(max.clone()), &pair),
            Err(DiscError::Pruned { index: 1, .. })
        ));
        assert!(matches!(
            bigons_one_curve(&engine, &pair, &CornerSpec::Critical(min.clone())),
            Err(DiscError::Pruned { index: 0, .. })
        ));
        assert!(bigons_one_curve(&engine, &CornerSpec::Critical(min.clone()), &pair).is_ok());
    }
}
