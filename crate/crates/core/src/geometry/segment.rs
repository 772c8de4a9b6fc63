use num_traits::{One, Signed, Zero};

use crate::point::{Point, Rational};

/// Result of intersecting two closed segments `a1a2` and `b1b2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegmentIntersection {
    None,
    /// Proper crossing in the interior of both segments; `s` and `t` are the
    /// parameters along `a` and `b`.
    Crossing {
        point: Point,
        s: Rational,
        t: Rational,
    },
    /// Collinear overlap, or an endpoint touching the other segment.
    Degenerate,
}

/// Every point the two closed segments share.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Contact {
    Disjoint,
    At { point: Point, s: Rational, t: Rational },
    Overlap,
}

fn in_unit(t: &Rational) -> bool {
    !t.is_negative() && t <= &Rational::one()
}

fn in_open_unit(t: &Rational) -> bool {
    t.is_positive() && t < &Rational::one()
}

pub fn segment_contact(a1: &Point, a2: &Point, b1: &Point, b2: &Point) -> Contact {
    let da = a2 - a1;
    let db = b2 - b1;
    let denom = da.cross(&db);
    let w = b1 - a1;
    if denom.is_zero() {
        if !w.cross(&da).is_zero() {
            return Contact::Disjoint;
        }
        // collinear: project b's endpoints on a
        let len = da.norm_sq();
        let t0 = w.dot(&da) / &len;
        let t1 = (b2 - a1).dot(&da) / &len;
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        let lo_c = if lo.is_negative() { Rational::zero() } else { lo };
        let hi_c = if hi > Rational::one() { Rational::one() } else { hi };
        if lo_c > hi_c {
            return Contact::Disjoint;
        }
        if lo_c < hi_c {
            return Contact::Overlap;
        }
        let point = a1.lerp(a2, &lo_c);
        let dbl = db.norm_sq();
        let t = (&point - b1).dot(&db) / dbl;
        return Contact::At { point, s: lo_c, t };
    }
    let s = w.cross(&db) / &denom;
    let t = w.cross(&da) / &denom;
    if in_unit(&s) && in_unit(&t) {
        Contact::At { point: a1.lerp(a2, &s), s, t }
    } else {
        Contact::Disjoint
    }
}

/// Exact intersection of two segments; endpoint contacts count as degenerate.
pub fn segment_intersect(a1: &Point, a2: &Point, b1: &Point, b2: &Point) -> SegmentIntersection {
    match segment_contact(a1, a2, b1, b2) {
        Contact::Disjoint => SegmentIntersection::None,
        Contact::Overlap => SegmentIntersection::Degenerate,
        Contact::At { point, s, t } => {
            if in_open_unit(&s) && in_open_unit(&t) {
                SegmentIntersection::Crossing { point, s, t }
            } else {
                SegmentIntersection::Degenerate
            }
        }
    }
}

/// Squared distance from `p` to the closed segment `ab`.
pub fn point_segment_dist_sq(p: &Point, a: &Point, b: &Point) -> Rational {
    let d = b - a;
    let t = (p - a).dot(&d) / d.norm_sq();
    let t = if t.is_negative() {
        Rational::zero()
    } else if t > Rational::one() {
        Rational::one()
    } else {
        t
    };
    (p - &a.lerp(b, &t)).norm_sq()
}

/// Squared distance between two closed segments.
pub fn segment_dist_sq(a1: &Point, a2: &Point, b1: &Point, b2: &Point) -> Rational {
    if !matches!(segment_contact(a1, a2, b1, b2), Contact::Disjoint) {
        return Rational::zero();
    }
    [
        point_segment_dist_sq(a1, b1, b2),
        point_segment_dist_sq(a2, b1, b2),
        point_segment_dist_sq(b1, a1, a2),
        point_segment_dist_sq(b2, a1, a2),
    ]
    .into_iter()
    .min()
    .unwrap()
}
