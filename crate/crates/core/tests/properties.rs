use std::collections::HashSet;

use floer_core::geometry::build_arrangement;
use floer_core::geometry::reach::reach_estimate;
use floer_core::geometry::segment::{segment_intersect, SegmentIntersection};
use floer_core::point::{int, rat};
use floer_core::pushoff::{construct_pushoff, PushoffConfig};
use floer_core::{parse_curve, validate_immersion, Curve, MorseFunction, Point};
use proptest::prelude::*;

fn lattice_point() -> impl Strategy<Value = (i64, i64)> {
    (-20i64..=20, -20i64..=20)
}

fn polygon() -> impl Strategy<Value = Curve> {
    prop::collection::vec(lattice_point(), 3..9)
        .prop_filter_map("degenerate polygon", |pts| Curve::from_ints(&pts).ok())
}

fn immersed_polygon() -> impl Strategy<Value = Curve> {
    polygon().prop_filter("not a generic immersion", |c| validate_immersion(c).is_ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn crossing_point_lies_on_both_segments(a in lattice_point(), b in lattice_point(), c in lattice_point(), d in lattice_point()) {
        let (a1, a2) = (Point::from_ints(a.0, a.1), Point::from_ints(b.0, b.1));
        let (b1, b2) = (Point::from_ints(c.0, c.1), Point::from_ints(d.0, d.1));
        if let SegmentIntersection::Crossing { point, s, t } = segment_intersect(&a1, &a2, &b1, &b2) {
            prop_assert_eq!(&point, &a1.lerp(&a2, &s));
            prop_assert_eq!(&point, &b1.lerp(&b2, &t));
            prop_assert_eq!(segment_intersect(&b1, &b2, &a1, &a2), SegmentIntersection::Crossing { point, s: t, t: s });
        }
    }

    #[test]
    fn render_then_parse_is_identity(c in polygon(), num in 1i64..7, den in 1i64..9) {
        let c = c.scaled(&rat(num, den)).translated(&Point::new(rat(1, 3), rat(-5, 7)));
        prop_assert_eq!(parse_curve(&c.render()).unwrap(), c);
    }

    #[test]
    fn reach_scales_with_dyadic_factors(c in immersed_polygon(), k in -3i32..=3, dx in -5i64..5) {
        let factor = if k >= 0 { int(1 << k) } else { rat(1, 1 << -k) };
        let moved = c.scaled(&factor).translated(&Point::from_ints(dx, -dx));
        prop_assert_eq!(reach_estimate(&moved), reach_estimate(&c) * factor);
    }

    #[test]
    fn pushoff_is_linear_in_the_function(c in immersed_polygon(), n in 1i64..8) {
        let f = MorseFunction::NegHeight;
        prop_assume!(f.check(&c).is_ok());
        let a = rat(n, 8);
        let eps = reach_estimate(&c) * rat(1, 2);
        let scaled = construct_pushoff(&c, &f.scaled(&c, &a), &PushoffConfig::new(eps.clone()));
        let direct = construct_pushoff(&c, &f, &PushoffConfig::new(eps * a));
        prop_assert_eq!(scaled.map(|p| p.curve), direct.map(|p| p.curve));
    }

    #[test]
    fn arrangement_is_a_sphere_cell_complex(c in immersed_polygon()) {
        let arr = build_arrangement(&[&c]).unwrap();
        let (v, e, f) = (arr.vertices.len() as i64, arr.edges.len() as i64, arr.faces.len() as i64);
        prop_assert_eq!(v - e + f, 2);
        let mut seen = HashSet::new();
        for face in &arr.faces {
            for &h in &face.boundary {
                prop_assert!(seen.insert(h));
            }
        }
        prop_assert_eq!(seen.len(), arr.half_edge_count());
        prop_assert_eq!(&arr.faces[arr.unbounded].winding, &vec![0]);
    }
}
