//! The pushoff of a curve along the graph of `eps * df`, the admissible window for
//! `eps`, and the smallness rescaling of `f`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::curve::{validate_immersion, Curve, CurveError};
use crate::geometry::{curve_intersections, reach_estimate, self_intersections, CrossPoint, GeometryError};
use crate::morse::{critical_points, MorseError, MorseFunction};
use crate::point::{fmt_rational, int, rat, Point, Rational};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    #[default]
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushoffConfig {
    pub epsilon: Rational,
    pub side: Side,
}

impl PushoffConfig {
    pub fn new(epsilon: Rational) -> Self {
        Self { epsilon, side: Side::Left }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PushoffError {
    #[error("epsilon {epsilon} is not below the reach estimate {reach}")]
    EpsilonTooLarge { epsilon: String, reach: String },
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("epsilon {epsilon} is outside the transversality window: {reason}")]
    NotAdmissible { epsilon: String, reason: String },
    #[error("no admissible epsilon found down to {0}")]
    NoWindow(String),
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// A pushoff curve; segments `2i` and `2i + 1` come from segment `i` of the original.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pushoff {
    pub curve: Curve,
    pub source: Vec<usize>,
    pub epsilon: Rational,
}

impl Pushoff {
    pub fn source_segment(&self, segment: usize) -> usize {
        self.source[segment]
    }
}

/// Displacement of segment `i` per unit of epsilon: `df/ds` along the chosen normal.
pub fn segment_displacement(c: &Curve, f: &MorseFunction, i: usize, side: Side) -> Point {
    let d = c.tangent(i);
    let k = f.delta(c, i) / d.norm_sq();
    let v = d.perp().scale(&k);
    match side {
        Side::Left => v,
        Side::Right => -v,
    }
}

pub fn construct_pushoff(c: &Curve, f: &MorseFunction, cfg: &PushoffConfig) -> Result<Pushoff, PushoffError> {
    if !cfg.epsilon.is_positive() {
        return Err(PushoffError::NonPositiveEpsilon);
    }
    let reach = reach_estimate(c);
    if cfg.epsilon >= reach {
        return Err(PushoffError::EpsilonTooLarge { epsilon: fmt_rational(&cfg.epsilon), reach: fmt_rational(&reach) });
    }
    let crit = critical_points(c, f)?;
    let eps = &cfg.epsilon;
    let n = c.len();
    let disp: Vec<Point> = (0..n).map(|i| segment_displacement(c, f, i, cfg.side).scale(eps)).collect();
    let half = rat(1, 2);
    let mut pts = Vec::with_capacity(2 * n);
    for i in 0..n {
        let v = c.vertex(i);
        if crit.iter().any(|cp| cp.vertex == i) {
            pts.push(v.clone());
        } else {
            let (dp, dn) = (&disp[c.prev(i)], &disp[i]);
            let (tp, tn) = (c.tangent(c.prev(i)), c.tangent(i));
            let denom = tp.cross(&tn);
            if denom.is_zero() {
                pts.push(v + &(dp + dn).scale(&half));
            } else {
                let s = (dn - dp).cross(&tn) / denom;
                pts.push(&(v + dp) + &tp.scale(&s));
            }
        }
        let (a, b) = c.segment(i);
        pts.push(&a.lerp(b, &half) + &disp[i]);
    }
    let curve = Curve::new(pts)?;
    let source = (0..2 * n).map(|k| k / 2).collect();
    Ok(Pushoff { curve, source, epsilon: cfg.epsilon.clone() })
}

fn not_admissible(eps: &Rational, reason: impl Into<String>) -> PushoffError {
    PushoffError::NotAdmissible { epsilon: fmt_rational(eps), reason: reason.into() }
}

/// Builds the pushoff and checks the crossing pattern expected inside the window: the
/// pushoff is a generic immersion with as many double points as `c`, it crosses `c`
/// transversally at every critical point, and near each double point of `c` it crosses
/// exactly once per ordered pair of branches.
pub fn admissible_pushoff(
    c: &Curve,
    f: &MorseFunction,
    cfg: &PushoffConfig,
) -> Result<(Pushoff, Vec<CrossPoint>), PushoffError> {
    let eps = &cfg.epsilon;
    let push = construct_pushoff(c, f, cfg)?;
    let sis = self_intersections(c)?;
    let crit = critical_points(c, f)?;
    let report = validate_immersion(&push.curve);
    if let Some(v) = report.violations.first() {
        return Err(not_admissible(eps, format!("pushoff is not generic: {v}")));
    }
    let push_sis = self_intersections(&push.curve).map_err(|e| not_admissible(eps, e.to_string()))?;
    if push_sis.len() != sis.len() {
        return Err(not_admissible(
            eps,
            format!("pushoff has {} double points, curve has {}", push_sis.len(), sis.len()),
        ));
    }
    let xs = curve_intersections(c, &push.curve).map_err(|e| not_admissible(eps, e.to_string()))?;
    let expected = crit.len() + 2 * sis.len();
    if xs.len() != expected {
        return Err(not_admissible(eps, format!("{} crossings, expected {expected}", xs.len())));
    }
    for cp in &crit {
        if !xs.iter().any(|x| x.location == cp.location) {
            return Err(not_admissible(eps, format!("no crossing at critical point {}", cp.location)));
        }
    }
    for si in &sis {
        for (a, b) in [(si.p.segment, si.q.segment), (si.q.segment, si.p.segment)] {
            let hits = xs
                .iter()
                .filter(|x| x.param_a.segment == a && !x.param_a.is_vertex())
                .filter(|x| push.source_segment(x.param_b.segment) == b)
                .count();
            if hits != 1 {
                return Err(not_admissible(eps, format!("{hits} crossings near the double point at {}", si.location)));
            }
        }
    }
    Ok((push, xs))
}

const GRID: i64 = 8;
const MAX_HALVINGS: usize = 48;

/// Largest `reach / 2^k` such that it and the grid `delta * j / 8` are all admissible.
pub fn transversality_window(c: &Curve, f: &MorseFunction) -> Result<Rational, PushoffError> {
    critical_points(c, f)?;
    self_intersections(c)?;
    let mut eps = reach_estimate(c);
    for _ in 0..MAX_HALVINGS {
        eps /= int(2);
        let ok = (1..=GRID).all(|j| {
            let e = &eps * rat(j, GRID);
            admissible_pushoff(c, f, &PushoffConfig::new(e)).is_ok()
        });
        if ok {
            return Ok(eps);
        }
    }
    Err(PushoffError::NoWindow(fmt_rational(&eps)))
}

/// Largest dyadic `a <= 1` with `a * (max|f| + max|df/ds| + max|second difference|) <= eps1`.
pub fn c2_scaling(f: &MorseFunction, c: &Curve, eps1: &Rational) -> Rational {
    let n = c.len();
    let vals = f.values(c);
    let n0 = vals.iter().map(|v| v.abs()).max().unwrap_or_else(Rational::zero);
    // squared slopes, compared without square roots
    let n1_sq = (0..n)
        .map(|i| {
            let d = f.delta(c, i);
            &d * &d / c.tangent(i).norm_sq()
        })
        .max()
        .unwrap_or_else(Rational::zero);
    let n2 = (0..n)
        .map(|i| (&vals[(i + 1) % n] - int(2) * &vals[i] + &vals[(i + n - 1) % n]).abs())
        .max()
        .unwrap_or_else(Rational::zero);
    let fits = |a: &Rational| {
        let rest = eps1 - a * (&n0 + &n2);
        !rest.is_negative() && a * a * &n1_sq <= &rest * &rest
    };
    let mut a = Rational::one();
    while !fits(&a) {
        a /= int(2);
    }
    a
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
    fn pushoff_fixes_critical_vertices() {
        let c = diamond();
        let p = construct_pushoff(&c, &MorseFunction::NegHeight, &PushoffConfig::new(rat(1, 8))).unwrap();
        assert_eq!(p.curve.len(), 8);
        assert_eq!(p.curve.vertex(0), c.vertex(0));
        assert_eq!(p.curve.vertex(4), c.vertex(2));
        let xs = curve_intersections(&c, &p.curve).unwrap();
        let locs: Vec<_> = xs.iter().map(|x| x.location.clone()).collect();
        assert_eq!(locs, vec![Point::from_ints(0, -1), Point::from_ints(0, 1)]);
    }

    #[test]
    fn too_large_epsilon_is_rejected() {
        let c = fig8();
        let r = reach_estimate(&c);
        let err = construct_pushoff(&c, &MorseFunction::NegHeight, &PushoffConfig::new(r * int(2)));
        assert!(matches!(err, Err(PushoffError::EpsilonTooLarge { .. })));
    }

    #[test]
    fn figure_eight_window_has_six_crossings() {
        let c = fig8();
        let delta = transversality_window(&c, &MorseFunction::NegHeight).unwrap();
        for j in 1..=4 {
            let (_, xs) =
                admissible_pushoff(&c, &MorseFunction::NegHeight, &PushoffConfig::new(&delta * rat(j, 4))).unwrap();
            assert_eq!(xs.len(), 6);
        }
    }

    #[test]
    fn shallow_extremum_shrinks_the_window() {
        let f = MorseFunction::NegHeight;
        let steep = transversality_window(&fig8(), &f).unwrap();
        let pts = [(-2, 0), (-1, 1), (1, -1), (2, 0), (1, 1), (-1, -1)];
        let mut v: Vec<Point> = pts.iter().map(|&(x, y)| Point::from_ints(x, y)).collect();
        v[3] = Point::new(int(2), rat(-15, 16));
        let shallow = transversality_window(&Curve::new(v).unwrap(), &f).unwrap();
        assert!(shallow.is_positive() && shallow < steep, "{shallow} vs {steep}");
    }

    #[test]
    fn scaling_f_equals_scaling_epsilon() {
        let c = fig8();
        let eps = rat(1, 16);
        for a in [rat(1, 2), rat(1, 4)] {
            let g = MorseFunction::NegHeight.scaled(&c, &a);
            let lhs = construct_pushoff(&c, &g, &PushoffConfig::new(eps.clone())).unwrap();
            let rhs = construct_pushoff(&c, &MorseFunction::NegHeight, &PushoffConfig::new(&eps * &a)).unwrap();
            assert_eq!(lhs.curve, rhs.curve);
        }
    }

    #[test]
    fn c2_scaling_is_dyadic_and_monotone() {
        let c = diamond();
        let f = MorseFunction::NegHeight;
        assert_eq!(c2_scaling(&f, &c, &int(10)), int(1));
        let mut eps1 = int(10);
        let mut last = c2_scaling(&f, &c, &eps1);
        for _ in 0..6 {
            eps1 /= int(2);
            let a = c2_scaling(&f, &c, &eps1);
            assert!(a == last || a == &last / int(2));
            last = a;
        }
    }
}
