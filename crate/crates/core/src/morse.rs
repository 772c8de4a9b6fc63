//! Piecewise-linear Morse functions on a curve, their critical points and the
//! monotone arcs joining them.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::curve::{Curve, CurveParam, Direction};
use crate::geometry::SelfIntersection;
use crate::point::{Point, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MorseFunction {
    /// f = y
    Height,
    /// f = -y, the default: minima of f sit at the top of the picture.
    NegHeight,
    /// Value per vertex, affine along segments.
    VertexValues(Vec<Rational>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorseError {
    #[error("morse values: expected {expected} values, got {got}")]
    WrongValueCount { expected: usize, got: usize },
    #[error("segment {segment} is level, f is not PL Morse")]
    LevelSegment { segment: usize },
    #[error("critical point at vertex {vertex} coincides with a self-intersection")]
    CriticalAtSelfIntersection { vertex: usize },
}

impl MorseFunction {
    pub fn vertex_value(&self, c: &Curve, i: usize) -> Rational {
        let i = i % c.len();
        match self {
            MorseFunction::Height => c.vertex(i).y.clone(),
            MorseFunction::NegHeight => -c.vertex(i).y.clone(),
            MorseFunction::VertexValues(v) => v[i].clone(),
        }
    }

    pub fn values(&self, c: &Curve) -> Vec<Rational> {
        (0..c.len()).map(|i| self.vertex_value(c, i)).collect()
    }

    pub fn value_at(&self, c: &Curve, p: &CurveParam) -> Rational {
        let a = self.vertex_value(c, p.segment);
        let b = self.vertex_value(c, p.segment + 1);
        &a + (b - &a) * &p.t
    }

    /// Change of f along segment i.
    pub fn delta(&self, c: &Curve, i: usize) -> Rational {
        self.vertex_value(c, i + 1) - self.vertex_value(c, i)
    }

    /// The function `a * f` in vertex-value form.
    pub fn scaled(&self, c: &Curve, a: &Rational) -> MorseFunction {
        MorseFunction::VertexValues(self.values(c).into_iter().map(|v| v * a).collect())
    }

    /// Checks the value count and that no segment is level.
    pub fn check(&self, c: &Curve) -> Result<(), MorseError> {
        if let MorseFunction::VertexValues(v) = self {
            if v.len() != c.len() {
                return Err(MorseError::WrongValueCount { expected: c.len(), got: v.len() });
            }
        }
        for i in 0..c.len() {
            if self.delta(c, i).is_zero() {
                return Err(MorseError::LevelSegment { segment: i });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CriticalPoint {
    pub vertex: usize,
    pub param: CurveParam,
    pub location: Point,
    /// 0 for a local minimum, 1 for a local maximum.
    pub index: u8,
    #[serde(serialize_with = "crate::point::serialize_rational")]
    pub value: Rational,
    pub label: Option<String>,
}

impl fmt::Display for CriticalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => write!(f, "{l}"),
            None => write!(f, "v{}", self.vertex),
        }
    }
}

/// All strict local extrema of f along c, in vertex order.
pub fn critical_points(c: &Curve, f: &MorseFunction) -> Result<Vec<CriticalPoint>, MorseError> {
    f.check(c)?;
    let mut out = Vec::new();
    for i in 0..c.len() {
        let before = f.delta(c, c.prev(i));
        let after = f.delta(c, i);
        let index = match (before.is_positive(), after.is_positive()) {
            (false, true) => 0,
            (true, false) => 1,
            _ => continue,
        };
        out.push(CriticalPoint {
            vertex: i,
            param: CurveParam::vertex(i),
            location: c.vertex(i).clone(),
            index,
            value: f.vertex_value(c, i),
            label: None,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MorseReport {
    pub violations: Vec<String>,
}

impl MorseReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_morse(c: &Curve, f: &MorseFunction, sis: &[SelfIntersection]) -> MorseReport {
    let crit = match critical_points(c, f) {
        Ok(crit) => crit,
        Err(e) => return MorseReport { violations: vec![e.to_string()] },
    };
    let mut violations = Vec::new();
    for cp in &crit {
        if sis.iter().any(|si| si.location == cp.location) {
            violations.push(MorseError::CriticalAtSelfIntersection { vertex: cp.vertex }.to_string());
        }
    }
    MorseReport { violations }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradientArc {
    pub from: CriticalPoint,
    pub to: CriticalPoint,
    /// Direction of travel along the curve from `from` to `to`.
    pub direction: Direction,
    pub arc: Vec<Point>,
}

/// One arc per maximal monotone run, oriented from the maximum down to the minimum.
pub fn rigid_trajectories(c: &Curve, f: &MorseFunction) -> Result<Vec<GradientArc>, MorseError> {
    let crit = critical_points(c, f)?;
    let k = crit.len();
    let mut out = Vec::new();
    for j in 0..k {
        let a = &crit[j];
        let b = &crit[(j + 1) % k];
        let (from, to, direction) = if a.index == 1 { (a, b, Direction::Forward) } else { (b, a, Direction::Backward) };
        let arc = c.arc_between(&from.param, &to.param, direction).expect("distinct critical vertices");
        out.push(GradientArc { from: from.clone(), to: to.clone(), direction, arc });
    }
    out.sort_by_key(|x| (x.from.vertex, x.to.vertex, x.direction));
    Ok(out)
}
