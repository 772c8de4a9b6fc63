use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::segment::{segment_contact, Contact};
use super::GeometryError;
use crate::curve::{Curve, CurveParam};
use crate::point::{ccw_strictly_between, Point, Rational};

/// A transverse double point of a single curve; `p` precedes `q` in curve order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SelfIntersection {
    pub location: Point,
    pub p: CurveParam,
    pub q: CurveParam,
    pub label: Option<String>,
}

/// A transverse crossing of curve A with curve B.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CrossPoint {
    pub location: Point,
    pub param_a: CurveParam,
    pub param_b: CurveParam,
    /// +1 when B passes from the right of A to its left.
    pub sign: i8,
}

/// Incoming and outgoing directions of the curve at a parameter.
pub fn local_rays(c: &Curve, p: &CurveParam) -> (Point, Point) {
    if p.is_vertex() {
        let v = c.vertex(p.segment);
        (c.vertex(c.prev(p.segment)) - v, c.vertex(p.segment + 1) - v)
    } else {
        let d = c.tangent(p.segment);
        (-d.clone(), d)
    }
}

fn normalized(c: &Curve, segment: usize, t: Rational) -> CurveParam {
    if t == Rational::one() {
        CurveParam::vertex(c.next(segment))
    } else {
        CurveParam::new(segment, t)
    }
}

fn same_ray(a: &Point, b: &Point) -> bool {
    a.cross(b).is_zero() && a.dot(b) > Rational::zero()
}

/// Sign of the crossing of branch `b` over branch `a`, or `None` if not transverse.
pub fn crossing_sign(a_in: &Point, a_out: &Point, b_in: &Point, b_out: &Point) -> Option<i8> {
    for r in [b_in, b_out] {
        if same_ray(r, a_in) || same_ray(r, a_out) {
            return None;
        }
    }
    let out_left = ccw_strictly_between(a_out, b_out, a_in);
    let in_left = ccw_strictly_between(a_out, b_in, a_in);
    match (in_left, out_left) {
        (false, true) => Some(1),
        (true, false) => Some(-1),
        _ => None,
    }
}

/// Every double point of `c`, sorted by the earlier branch.
pub fn self_intersections(c: &Curve) -> Result<Vec<SelfIntersection>, GeometryError> {
    let n = c.len();
    let mut found: BTreeMap<Point, Vec<CurveParam>> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let (a1, a2) = c.segment(i);
            let (b1, b2) = c.segment(j);
            let adjacent = c.next(i) == j || c.next(j) == i;
            match segment_contact(a1, a2, b1, b2) {
                Contact::Disjoint => {}
                Contact::Overlap => {
                    return Err(GeometryError::NonTransverse { location: a1.clone() });
                }
                Contact::At { point, s, t } => {
                    if adjacent {
                        // only the shared vertex is allowed
                        continue;
                    }
                    let ps = normalized(c, i, s);
                    let pt = normalized(c, j, t);
                    if ps.is_vertex() || pt.is_vertex() {
                        return Err(GeometryError::NonTransverse { location: point });
                    }
                    let entry = found.entry(point).or_default();
                    for p in [ps, pt] {
                        if !entry.contains(&p) {
                            entry.push(p);
                        }
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for (location, mut params) in found {
        if params.len() > 2 {
            return Err(GeometryError::TriplePoint { location });
        }
        params.sort();
        let (a_in, a_out) = local_rays(c, &params[0]);
        let (b_in, b_out) = local_rays(c, &params[1]);
        if crossing_sign(&a_in, &a_out, &b_in, &b_out).is_none() {
            return Err(GeometryError::NonTransverse { location });
        }
        let q = params.pop().unwrap();
        let p = params.pop().unwrap();
        out.push(SelfIntersection { location, p, q, label: None });
    }
    out.sort_by(|x, y| x.p.cmp(&y.p));
    Ok(out)
}

/// Transverse crossings of two curves. Shared vertices are allowed as long as the two
/// curves cross there; touching, overlapping or passing a point twice is an error.
pub fn curve_intersections(a: &Curve, b: &Curve) -> Result<Vec<CrossPoint>, GeometryError> {
    let mut found: BTreeMap<Point, (Vec<CurveParam>, Vec<CurveParam>)> = BTreeMap::new();
    for i in 0..a.len() {
        for j in 0..b.len() {
            let (a1, a2) = a.segment(i);
            let (b1, b2) = b.segment(j);
            match segment_contact(a1, a2, b1, b2) {
                Contact::Disjoint => {}
                Contact::Overlap => {
                    return Err(GeometryError::NonTransverse { location: a1.clone() });
                }
                Contact::At { point, s, t } => {
                    let entry = found.entry(point).or_default();
                    let pa = normalized(a, i, s);
                    let pb = normalized(b, j, t);
                    if !entry.0.contains(&pa) {
                        entry.0.push(pa);
                    }
                    if !entry.1.contains(&pb) {
                        entry.1.push(pb);
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for (location, (pa, pb)) in found {
        if pa.len() != 1 || pb.len() != 1 {
            return Err(GeometryError::TriplePoint { location });
        }
        let (a_in, a_out) = local_rays(a, &pa[0]);
        let (b_in, b_out) = local_rays(b, &pb[0]);
        let sign = crossing_sign(&a_in, &a_out, &b_in, &b_out)
            .ok_or_else(|| GeometryError::NonTransverse { location: location.clone() })?;
        out.push(CrossPoint { location, param_a: pa[0].clone(), param_b: pb[0].clone(), sign });
    }
    out.sort_by(|x, y| (&x.param_a, &x.param_b).cmp(&(&y.param_a, &y.param_b)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::segment::{segment_intersect, SegmentIntersection};
    use crate::point::rat;

    fn diamond() -> Curve {
        Curve::from_ints(&[(0, -1), (1, 0), (0, 1), (-1, 0)]).unwrap()
    }

    fn fig8() -> Curve {
        Curve::from_ints(&[(-2, 0), (-1, 1), (1, -1), (2, 0), (1, 1), (-1, -1)]).unwrap()
    }

    #[test]
    fn embedded_curve_has_no_double_points() {
        assert!(self_intersections(&diamond()).unwrap().is_empty());
    }

    #[test]
    fn figure_eight_double_point() {
        let c = fig8();
        let sis = self_intersections(&c).unwrap();
        assert_eq!(sis.len(), 1);
        assert_eq!(sis[0].location, Point::zero());
        assert_eq!(sis[0].p, CurveParam::new(1, rat(1, 2)));
        assert_eq!(sis[0].q, CurveParam::new(4, rat(1, 2)));
        // independent count over all 15 segment pairs
        let mut count = 0;
        for i in 0..6 {
            for j in i + 1..6 {
                let (a1, a2) = c.segment(i);
                let (b1, b2) = c.segment(j);
                if let SegmentIntersection::Crossing { .. } = segment_intersect(a1, a2, b1, b2) {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 1);
    }

    #[test]
    fn rotation_of_vertex_labels_keeps_locations() {
        let c = fig8();
        let base: Vec<_> = self_intersections(&c).unwrap().into_iter().map(|s| s.location).collect();
        for k in 0..6 {
            let r: Vec<_> = self_intersections(&c.rotated(k)).unwrap().into_iter().map(|s| s.location).collect();
            assert_eq!(r, base);
        }
    }

    #[test]
    fn disjoint_and_swapped_curves() {
        let d = diamond();
        let far = d.translated(&Point::from_ints(3, 0));
        assert!(curve_intersections(&d, &far).unwrap().is_empty());
        let tilted = Curve::from_ints(&[(0, -2), (2, 0), (0, 2), (-2, 0)])
            .unwrap()
            .translated(&Point::new(rat(1, 3), rat(1, 7)));
        let ab = curve_intersections(&d, &tilted).unwrap();
        let ba = curve_intersections(&tilted, &d).unwrap();
        assert_eq!(ab.len(), ba.len());
        let mut la: Vec<_> = ab.iter().map(|c| (c.location.clone(), c.param_a.clone(), c.param_b.clone())).collect();
        let mut lb: Vec<_> = ba.iter().map(|c| (c.location.clone(), c.param_b.clone(), c.param_a.clone())).collect();
        la.sort();
        lb.sort();
        assert_eq!(la, lb);
    }

    #[test]
    fn shared_vertex_crossing_is_accepted() {
        // two V shapes crossing at the origin, meeting vertex to vertex
        let a = Curve::from_ints(&[(0, 0), (2, 1), (0, 3), (-2, 1)]).unwrap();
        let b = Curve::from_ints(&[(1, -3), (0, 0), (-1, 3), (-3, 0)]).unwrap();
        let x = curve_intersections(&a, &b).unwrap();
        assert_eq!(x.len(), 2);
        assert_eq!(x[0].location, Point::zero());
        assert_eq!(
            (x[0].param_a.clone(), x[0].param_b.clone(), x[0].sign),
            (CurveParam::vertex(0), CurveParam::vertex(1), 1)
        );
        // a touching contact is rejected
        let c = Curve::from_ints(&[(0, 0), (1, -2), (0, -3), (-1, -2)]).unwrap();
        assert!(matches!(curve_intersections(&a, &c), Err(GeometryError::NonTransverse { .. })));
    }

    #[test]
    fn crossing_signs() {
        let e = Point::from_ints(1, 0);
        let n = Point::from_ints(0, 1);
        assert_eq!(crossing_sign(&-e.clone(), &e, &-n.clone(), &n), Some(1));
        assert_eq!(crossing_sign(&-e.clone(), &e, &n, &-n.clone()), Some(-1));
        assert_eq!(crossing_sign(&-e.clone(), &e, &-e.clone(), &e), None);
    }
}
