//! Exact rational points and the orientation predicates built on them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q`, integer or decimal literals (`-1.25`, `3e-2`) into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(idx) => (&text[..idx], text[idx + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let joined = format!("{whole}{frac}");
    let numer: BigInt = if joined.is_empty() { BigInt::zero() } else { joined.parse().ok()? };
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(numer);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -value } else { value })
}

/// Canonical text form: integers as `n`, everything else as `p/q`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn serialize_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

/// Lossy conversion, only for drawing.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // very large numerators/denominators: scale through the bit lengths
        let n = r.numer().bits() as i64;
        let d = r.denom().bits() as i64;
        let shift = n.max(d) - 60;
        let scaled_n = (r.numer() >> shift.max(0) as usize).to_f64().unwrap_or(0.0);
        let scaled_d = (r.denom() >> shift.max(0) as usize).to_f64().unwrap_or(1.0);
        scaled_n / scaled_d
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(int(x), int(y))
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn dot(&self, other: &Point) -> Rational {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn cross(&self, other: &Point) -> Rational {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn norm_sq(&self) -> Rational {
        self.dot(self)
    }

    /// Rotation by a quarter turn counterclockwise.
    pub fn perp(&self) -> Point {
        Point::new(-self.y.clone(), self.x.clone())
    }

    pub fn scale(&self, k: &Rational) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }

    pub fn lerp(&self, other: &Point, t: &Rational) -> Point {
        self + &(other - self).scale(t)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_rational(&self.x), fmt_rational(&self.y))
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [fmt_rational(&self.x), fmt_rational(&self.y)].serialize(s)
    }
}

impl<'a> Add<&'a Point> for &'a Point {
    type Output = Point;
    fn add(self, rhs: &'a Point) -> Point {
        Point::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl<'a> Sub<&'a Point> for &'a Point {
    type Output = Point;
    fn sub(self, rhs: &'a Point) -> Point {
        Point::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        &self + &rhs
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        &self - &rhs
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl Mul<&Rational> for &Point {
    type Output = Point;
    fn mul(self, k: &Rational) -> Point {
        self.scale(k)
    }
}

/// Sign of the turn a -> b -> c: positive for a left turn.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Ordering {
    (b - a).cross(&(c - a)).cmp(&Rational::zero())
}

fn upper_half(d: &Point) -> bool {
    d.y.is_positive() || (d.y.is_zero() && d.x.is_positive())
}

/// Total order of nonzero directions by angle in `[0, 2pi)` measured from the positive x-axis.
pub fn angle_cmp(a: &Point, b: &Point) -> Ordering {
    let (ua, ub) = (upper_half(a), upper_half(b));
    if ua != ub {
        return if ua { Ordering::Less } else { Ordering::Greater };
    }
    // same half-plane: a before b iff b is counterclockwise of a
    match a.cross(b).cmp(&Rational::zero()) {
        Ordering::Greater => Ordering::Less,
        Ordering::Less => Ordering::Greater,
        Ordering::Equal => Ordering::Equal,
    }
}

/// `d` expressed in the frame whose x-axis points along `base` (scaled by |base|).
pub fn relative_to(base: &Point, d: &Point) -> Point {
    Point::new(d.dot(base), base.cross(d))
}

/// Is direction `d` strictly inside the counterclockwise sector swept from `u` to `v`?
/// With `u` and `v` parallel and equal in direction the sector is everything but `u`.
pub fn ccw_strictly_between(u: &Point, d: &Point, v: &Point) -> bool {
    let rd = relative_to(u, d);
    if rd.y.is_zero() && rd.x.is_positive() {
        return false;
    }
    let rv = relative_to(u, v);
    if rv.y.is_zero() && rv.x.is_positive() {
        return true;
    }
    angle_cmp(&rd, &rv) == Ordering::Less
}

/// Signed number of times the heading passes the positive x-axis when turning from
/// `from` to `to` through the shorter angle. Summed over a closed polygon this is its
/// rotation number.
pub fn turn_wraps(from: &Point, to: &Point) -> i64 {
    let c = from.cross(to);
    if c.is_positive() {
        // counterclockwise; wraps when the angle decreases, or when landing exactly on 0
        if angle_cmp(to, from) == Ordering::Less {
            1
        } else {
            0
        }
    } else if c.is_negative() {
        if angle_cmp(to, from) == Ordering::Greater {
            -1
        } else {
            0
        }
    } else {
        0
    }
}

/// Largest power of two `2^k` (k may be negative) not exceeding `sqrt(value)`; `value > 0`.
pub fn dyadic_sqrt_floor(value: &Rational) -> Rational {
    assert!(value.is_positive());
    let two = int(2);
    let mut r = Rational::one();
    if &(&r * &r) <= value {
        loop {
            let next = &r * &two;
            if &(&next * &next) > value {
                return r;
            }
            r = next;
        }
    } else {
        loop {
            r = &r / &two;
            if &(&r * &r) <= value {
                return r;
            }
        }
    }
}
