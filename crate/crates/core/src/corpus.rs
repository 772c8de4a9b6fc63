//! Seeded random generic immersed curves for property checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::{validate_immersion, Curve};
use crate::geometry::self_intersections;
use crate::morse::{validate_morse, MorseFunction};
use crate::point::Point;
use crate::pushoff::transversality_window;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusConfig {
    pub seed: u64,
    pub count: usize,
    pub max_self_intersections: usize,
    pub min_vertices: usize,
    pub max_vertices: usize,
    /// Coordinates are drawn from `-extent..=extent`.
    pub extent: i64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self { seed: 7, count: 25, max_self_intersections: 6, min_vertices: 4, max_vertices: 9, extent: 12 }
    }
}

/// A closed polygon through random lattice points, sorted around their centroid with
/// a few random swaps so that some curves self-intersect.
fn candidate(rng: &mut ChaCha8Rng, cfg: &CorpusConfig) -> Option<Curve> {
    let n = rng.gen_range(cfg.min_vertices..=cfg.max_vertices);
    let mut pts: Vec<(i64, i64)> =
        (0..n).map(|_| (rng.gen_range(-cfg.extent..=cfg.extent), rng.gen_range(-cfg.extent..=cfg.extent))).collect();
    let (cx, cy) = pts.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x as f64, b + y as f64));
    let (cx, cy) = (cx / n as f64, cy / n as f64);
    pts.sort_by(|a, b| {
        let ta = (a.1 as f64 - cy).atan2(a.0 as f64 - cx);
        let tb = (b.1 as f64 - cy).atan2(b.0 as f64 - cx);
        ta.total_cmp(&tb)
    });
    let swaps = rng.gen_range(0..=n / 2);
    for _ in 0..swaps {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        pts.swap(i, j);
    }
    if rng.gen_bool(0.5) {
        pts.reverse();
    }
    let k = *(0..n).collect::<Vec<_>>().choose(rng)?;
    pts.rotate_left(k);
    Curve::new(pts.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()).ok()
}

/// Whether `c` is usable with the height function: generic, Morse, few double points,
/// and with a nonempty transversality window.
pub fn is_generic(c: &Curve, max_self_intersections: usize) -> bool {
    if !validate_immersion(c).is_ok() {
        return false;
    }
    let Ok(sis) = self_intersections(c) else { return false };
    if sis.len() > max_self_intersections {
        return false;
    }
    let f = MorseFunction::NegHeight;
    validate_morse(c, &f, &sis).is_ok() && transversality_window(c, &f).is_ok()
}

pub fn generate(cfg: &CorpusConfig) -> Vec<Curve> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(cfg.count);
    while out.len() < cfg.count {
        if let Some(c) = candidate(&mut rng, cfg) {
            if is_generic(&c, cfg.max_self_intersections) && !out.contains(&c) {
                out.push(c.with_name(format!("corpus-{}-{}", cfg.seed, out.len())));
            }
        }
    }
    out
}
