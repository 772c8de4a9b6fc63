//! Canonical bijection between pearly and Hamiltonian generators, and the comparison
//! of the two boundary maps under it.

use serde::Serialize;
use thiserror::Error;

use crate::complex::{boundary_squared, ChainComplex, GeneratorKind};
use crate::geometry::SelfIntersection;
use crate::point::Point;
use crate::pushoff::Pushoff;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdentifyError {
    #[error("no crossing at critical point {0}")]
    MissingCritical(Point),
    #[error("{count} crossings in the cell of the double point at {location}, expected one per ordered pair")]
    Cell { location: Point, count: usize },
    #[error("generator counts differ: {pearly} pearly, {hamiltonian} hamiltonian")]
    CountMismatch { pearly: usize, hamiltonian: usize },
    #[error("crossing {0} is claimed twice")]
    NotInjective(String),
}

/// `map[i]` is the Hamiltonian generator matched with pearly generator `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bijection {
    pub map: Vec<usize>,
}

/// Matches critical points by exact location, and the pair `(p, q)` with the crossing of
/// the branch of `p` with the pushoff of the branch of `q`.
pub fn identify_generators(
    pearly: &ChainComplex,
    ham: &ChainComplex,
    sis: &[SelfIntersection],
    push: &Pushoff,
) -> Result<Bijection, IdentifyError> {
    let crossings: Vec<_> = ham
        .generators
        .iter()
        .map(|g| match &g.kind {
            GeneratorKind::Crossing { point } => point.clone(),
            _ => unreachable!("hamiltonian generators are crossings"),
        })
        .collect();
    let mut map = Vec::with_capacity(pearly.len());
    for g in &pearly.generators {
        let target = match &g.kind {
            GeneratorKind::Critical { point } => crossings
                .iter()
                .position(|x| x.location == point.location)
                .ok_or_else(|| IdentifyError::MissingCritical(point.location.clone()))?,
            GeneratorKind::Pair { si, reversed, location } => {
                let si = &sis[*si];
                let (first, second) = if *reversed { (&si.q, &si.p) } else { (&si.p, &si.q) };
                let hits: Vec<usize> = crossings
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| {
                        !x.param_a.is_vertex()
                            && x.param_a.segment == first.segment
                            && push.source_segment(x.param_b.segment) == second.segment
                    })
                    .map(|(k, _)| k)
                    .collect();
                if hits.len() != 1 {
                    return Err(IdentifyError::Cell { location: location.clone(), count: hits.len() });
                }
                hits[0]
            }
            GeneratorKind::Crossing { .. } => unreachable!("pearly generators are not crossings"),
        };
        map.push(target);
    }
    if pearly.len() != ham.len() {
        return Err(IdentifyError::CountMismatch { pearly: pearly.len(), hamiltonian: ham.len() });
    }
    let mut seen = vec![false; ham.len()];
    for &t in &map {
        if seen[t] {
            return Err(IdentifyError::NotInjective(ham.generators[t].label.clone()));
        }
        seen[t] = true;
    }
    Ok(Bijection { map })
}

/// Gives each crossing the name of its pearly partner: the critical point's name, or the
/// first branch name of an ordered pair.
pub fn transfer_labels(pearly: &ChainComplex, ham: &mut ChainComplex, bij: &Bijection) {
    for (i, &t) in bij.map.iter().enumerate() {
        let label = &pearly.generators[i].label;
        ham.generators[t].label = match &pearly.generators[i].kind {
            GeneratorKind::Pair { .. } => label.trim_start_matches('(').split(',').next().unwrap_or(label).to_string(),
            _ => label.clone(),
        };
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub from: String,
    pub to: String,
    pub pearly_count: usize,
    pub hamiltonian_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentificationReport {
    /// Pearly label and matched Hamiltonian label.
    pub bijection: Vec<(String, String)>,
    pub matched: bool,
    pub boundary_equal: bool,
    pub dsq_equal: bool,
    pub mismatches: Vec<Mismatch>,
}

impl IdentificationReport {
    pub fn is_identical(&self) -> bool {
        self.matched && self.boundary_equal && self.dsq_equal
    }

    /// Report for a failed generator matching.
    pub fn unmatched() -> Self {
        Self { bijection: Vec::new(), matched: false, boundary_equal: false, dsq_equal: false, mismatches: Vec::new() }
    }
}

pub fn compare_complexes(pearly: &ChainComplex, ham: &ChainComplex, bij: &Bijection) -> IdentificationReport {
    let n = pearly.len();
    let mut mismatches = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let (hx, hy) = (bij.map[x], bij.map[y]);
            if pearly.entry(x, y) != ham.entry(hx, hy) {
                mismatches.push(Mismatch {
                    from: pearly.generators[x].label.clone(),
                    to: pearly.generators[y].label.clone(),
                    pearly_count: pearly.counts[x][y],
                    hamiltonian_count: ham.counts[hx][hy],
                });
            }
        }
    }
    let sp = boundary_squared(pearly).matrix;
    let sh = boundary_squared(ham).matrix;
    let dsq_equal = (0..n).all(|x| (0..n).all(|y| sp[x][y] == sh[bij.map[x]][bij.map[y]]));
    IdentificationReport {
        bijection: (0..n)
            .map(|i| (pearly.generators[i].label.clone(), ham.generators[bij.map[i]].label.clone()))
            .collect(),
        matched: true,
        boundary_equal: mismatches.is_empty(),
        dsq_equal,
        mismatches,
    }
}
