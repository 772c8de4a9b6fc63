//! Exact combinatorial Floer complexes of closed immersed plane curves.
//!
//! The pearly complex is generated by Morse critical points and ordered pairs of
//! double points; the Hamiltonian complex by the crossings of a curve with its pushoff.
//! Both boundary maps count bigons over GF(2).

// errors carry exact coordinates for diagnostics
#![allow(clippy::result_large_err, clippy::large_enum_variant, clippy::needless_range_loop)]

pub mod complex;
pub mod continuation;
pub mod corpus;
pub mod curve;
pub mod disc;
pub mod geometry;
pub mod identify;
pub mod morse;
pub mod oracle;
pub mod pipeline;
pub mod point;
pub mod pushoff;

pub use curve::{parse_curve, parse_curve_file, validate_immersion, Curve, CurveFile, CurveParam, Direction};
pub use morse::{critical_points, rigid_trajectories, validate_morse, CriticalPoint, MorseFunction};
pub use point::{Point, Rational};
