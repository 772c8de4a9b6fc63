//! Exact geometric kernel.

pub mod arrangement;
pub mod intersect;
pub mod reach;
pub mod segment;

use thiserror::Error;

use crate::point::Point;

pub use arrangement::{build_arrangement, Arrangement};
pub use intersect::{curve_intersections, local_rays, self_intersections, CrossPoint, SelfIntersection};
pub use reach::reach_estimate;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("non-transverse contact at {location}")]
    NonTransverse { location: Point },
    #[error("triple point at {location}")]
    TriplePoint { location: Point },
    #[error("arrangement is not connected")]
    Disconnected,
    #[error("Euler check failed: V - E + F = {0}")]
    Euler(i64),
}
