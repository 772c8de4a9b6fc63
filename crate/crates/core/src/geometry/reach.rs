use num_traits::{Signed, Zero};

use super::segment::{segment_dist_sq, segment_intersect, SegmentIntersection};
use crate::curve::Curve;
use crate::point::{dyadic_sqrt_floor, int, Rational};

/// Squared lower bound for how far the inner offset of the corner at vertex `i` can move
/// before it runs off one of the two incident segments.
fn vertex_bound_sq(c: &Curve, i: usize) -> Rational {
    let v = c.vertex(i);
    let ep = c.vertex(c.prev(i)) - v;
    let en = c.vertex(i + 1) - v;
    let (lp, ln) = (ep.norm_sq(), en.norm_sq());
    let shortest = if lp < ln { lp.clone() } else { ln.clone() };
    let dot = ep.dot(&en);
    if !dot.is_positive() {
        return shortest;
    }
    // acute corner: tan(a/2) >= sin(a)/2
    let cross = ep.cross(&en);
    shortest * &cross * &cross / (int(4) * lp * ln)
}

/// Conservative dyadic width of a tube around `c` inside which normal displacement
/// creates no new local overlap of a single branch. Scales linearly with the curve.
pub fn reach_estimate(c: &Curve) -> Rational {
    let n = c.len();
    let mut best: Option<Rational> = None;
    let mut consider = |d: Rational| {
        if d.is_zero() {
            return;
        }
        if best.as_ref().is_none_or(|b| &d < b) {
            best = Some(d);
        }
    };
    for i in 0..n {
        consider(vertex_bound_sq(c, i));
        for j in i + 2..n {
            if (j + 1) % n == i {
                continue;
            }
            let (a1, a2) = c.segment(i);
            let (b1, b2) = c.segment(j);
            if let SegmentIntersection::Crossing { .. } = segment_intersect(a1, a2, b1, b2) {
                continue;
            }
            consider(segment_dist_sq(a1, a2, b1, b2));
        }
    }
    let best = best.expect("an immersed curve has a non-degenerate corner");
    dyadic_sqrt_floor(&best) / int(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::rat;

    #[test]
    fn diamond_reach_is_bounded_by_segment_distance() {
        let d = Curve::from_ints(&[(0, -1), (1, 0), (0, 1), (-1, 0)]).unwrap();
        let r = reach_estimate(&d);
        assert!(r.is_positive());
        // opposite sides are sqrt(2) apart
        assert!(&r * &r * int(4) <= int(2));
    }

    #[test]
    fn reach_is_homogeneous() {
        let c = Curve::from_ints(&[(-2, 0), (-1, 1), (1, -1), (2, 0), (1, 1), (-1, -1)]).unwrap();
        let r = reach_estimate(&c);
        assert_eq!(reach_estimate(&c.scaled(&int(2))), &r * int(2));
        assert_eq!(reach_estimate(&c.scaled(&rat(1, 8))), &r / int(8));
    }

    #[test]
    fn squeezing_lobes_shrinks_reach() {
        let wide = Curve::from_ints(&[(-4, 0), (-1, 1), (1, -1), (4, 0), (1, 1), (-1, -1)]).unwrap();
        let squeezed = Curve::new(
            wide.vertices().iter().map(|p| crate::point::Point::new(p.x.clone(), &p.y * rat(1, 16))).collect(),
        )
        .unwrap();
        assert!(reach_estimate(&squeezed) < reach_estimate(&wide));
    }
}
