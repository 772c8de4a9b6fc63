//! End-to-end runs: build both complexes at one epsilon and compare them.

use serde::Serialize;
use thiserror::Error;

use crate::complex::{
    build_hamiltonian_with, build_pearly_with, corner_spec, pearly_data, BuildOptions, ChainComplex, ComplexError,
    Flavor, Names,
};
use crate::curve::Curve;
use crate::disc::{crossing_branches, BigonQuery};
use crate::geometry::{build_arrangement, curve_intersections, self_intersections, GeometryError};
use crate::identify::{compare_complexes, identify_generators, transfer_labels, IdentificationReport, IdentifyError};
use crate::morse::rigid_trajectories;
use crate::morse::MorseFunction;
use crate::oracle::{oracle_trajectories, Oracle};
use crate::point::Rational;
use crate::pushoff::{admissible_pushoff, Pushoff, PushoffConfig, PushoffError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Pushoff(#[from] PushoffError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

pub struct Comparison {
    pub epsilon: Rational,
    pub pushoff: Pushoff,
    pub pearly: ChainComplex,
    pub hamiltonian: ChainComplex,
    pub report: IdentificationReport,
    pub identify_error: Option<IdentifyError>,
}

/// Hamiltonian complex at `cfg.epsilon`, checked to lie in the transversality window.
pub fn hamiltonian_at(
    c: &Curve,
    f: &MorseFunction,
    cfg: &PushoffConfig,
    opts: BuildOptions,
) -> Result<(Pushoff, ChainComplex), PipelineError> {
    let (push, _) = admissible_pushoff(c, f, cfg)?;
    let ham = build_hamiltonian_with(c, &push.curve, opts)?;
    Ok((push, ham))
}

pub fn compare_at(
    c: &Curve,
    f: &MorseFunction,
    cfg: &PushoffConfig,
    names: &Names,
    opts: BuildOptions,
) -> Result<Comparison, PipelineError> {
    let pearly = build_pearly_with(c, f, names, opts)?;
    let (pushoff, mut hamiltonian) = hamiltonian_at(c, f, cfg, opts)?;
    let sis = self_intersections(c)?;
    let (report, identify_error) = match identify_generators(&pearly, &hamiltonian, &sis, &pushoff) {
        Ok(bij) => {
            transfer_labels(&pearly, &mut hamiltonian, &bij);
            (compare_complexes(&pearly, &hamiltonian, &bij), None)
        }
        Err(e) => (IdentificationReport::unmatched(), Some(e)),
    };
    Ok(Comparison { epsilon: cfg.epsilon.clone(), pushoff, pearly, hamiltonian, report, identify_error })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountDiff {
    pub flavor: Flavor,
    pub from: String,
    pub to: String,
    pub engine: usize,
    pub oracle: usize,
}

/// Disc counts of a complex checked pair by pair against the oracle.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OracleDiff {
    pub pairs_checked: usize,
    pub diffs: Vec<CountDiff>,
    /// Pairs whose oracle search hit the face-label bound; excluded from the diff.
    pub inconclusive: Vec<(String, String)>,
    pub trajectories_match: bool,
}

impl OracleDiff {
    pub fn is_clean(&self) -> bool {
        self.diffs.is_empty() && self.trajectories_match
    }

    fn merge(&mut self, other: OracleDiff) {
        self.pairs_checked += other.pairs_checked;
        self.diffs.extend(other.diffs);
        self.inconclusive.extend(other.inconclusive);
        self.trajectories_match &= other.trajectories_match;
    }
}

fn diff_pairs(cx: &ChainComplex, oracle: &Oracle, query: impl Fn(usize, usize) -> Option<BigonQuery>) -> OracleDiff {
    let mut out = OracleDiff { trajectories_match: true, ..OracleDiff::default() };
    for x in 0..cx.len() {
        for y in 0..cx.len() {
            let Some(q) = query(x, y) else { continue };
            out.pairs_checked += 1;
            let (from, to) = (cx.generators[x].label.clone(), cx.generators[y].label.clone());
            let r = oracle.bigons(&q);
            if r.inconclusive {
                out.inconclusive.push((from, to));
            } else if r.count() != cx.counts[x][y] {
                out.diffs.push(CountDiff { flavor: cx.flavor, from, to, engine: cx.counts[x][y], oracle: r.count() });
            }
        }
    }
    out
}

/// Oracle check of the disc part and the trajectory part of a pearly complex.
pub fn oracle_diff_pearly(
    c: &Curve,
    f: &MorseFunction,
    cx: &ChainComplex,
    max_w: i64,
) -> Result<OracleDiff, PipelineError> {
    let data = pearly_data(c, f)?;
    let arr = build_arrangement(&[c])?;
    let oracle = Oracle::new(&arr, &[c]).with_max_w(max_w);
    let mut out = diff_pairs(cx, &oracle, |x, y| {
        let (gx, gy) = (&cx.generators[x], &cx.generators[y]);
        if x == y || (!gx.is_pair() && !gy.is_pair()) {
            return None;
        }
        if gx.critical_index() == Some(1) || gy.critical_index() == Some(0) {
            return None;
        }
        let (sx, sy) = (corner_spec(gx, &data.sis)?, corner_spec(gy, &data.sis)?);
        Some(BigonQuery { top_curve: 0, bottom_curve: 0, input: sx.branches(), output: sy.branches() })
    });
    let mut ours: Vec<_> = rigid_trajectories(c, f)
        .map_err(ComplexError::from)?
        .into_iter()
        .map(|a| (a.from.vertex, a.to.vertex, a.direction))
        .collect();
    let mut theirs = oracle_trajectories(c, f);
    ours.sort();
    theirs.sort();
    out.trajectories_match = ours == theirs;
    Ok(out)
}

pub fn oracle_diff_hamiltonian(
    c: &Curve,
    push: &Curve,
    cx: &ChainComplex,
    max_w: i64,
) -> Result<OracleDiff, PipelineError> {
    let xs = curve_intersections(c, push)?;
    let arr = build_arrangement(&[c, push])?;
    let oracle = Oracle::new(&arr, &[c, push]).with_max_w(max_w);
    Ok(diff_pairs(cx, &oracle, |x, y| {
        (x != y).then(|| BigonQuery {
            top_curve: 1,
            bottom_curve: 0,
            input: crossing_branches(&xs[x]),
            output: crossing_branches(&xs[y]),
        })
    }))
}

/// Both flavors at one epsilon against the oracle.
pub fn oracle_check(
    c: &Curve,
    f: &MorseFunction,
    cfg: &PushoffConfig,
    max_w: i64,
    opts: BuildOptions,
) -> Result<OracleDiff, PipelineError> {
    let pearly = build_pearly_with(c, f, &Names::default(), opts)?;
    let mut out = oracle_diff_pearly(c, f, &pearly, max_w)?;
    let (push, ham) = hamiltonian_at(c, f, cfg, opts)?;
    out.merge(oracle_diff_hamiltonian(c, &push.curve, &ham, max_w)?);
    Ok(out)
}
