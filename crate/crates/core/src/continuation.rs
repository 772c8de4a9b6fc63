//! Tracking crossings and disc counts along a decreasing family of pushoffs.

use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{build_hamiltonian_with, BuildOptions, ChainComplex, ComplexError, Names};
use crate::curve::Curve;
use crate::morse::MorseFunction;
use crate::pipeline::{compare_at, PipelineError};
use crate::point::{fmt_rational, int, serialize_rational, Point, Rational};
use crate::pushoff::{admissible_pushoff, PushoffConfig, PushoffError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContinuationError {
    #[error("need at least 2 samples, got {0}")]
    TooFewSteps(usize),
    #[error("epsilon range must satisfy 0 < eps_lo < eps_hi")]
    BadRange,
    #[error("window violation at epsilon {epsilon}: {reason}")]
    WindowViolation { epsilon: String, reason: String },
    #[error("crossings move too far between epsilon {from} and {to}; refine the steps")]
    NeedsRefinement { from: String, to: String },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Event {
    #[serde(serialize_with = "serialize_rational")]
    pub epsilon: Rational,
    pub location: Point,
    pub birth: bool,
}

/// Count of discs from one tracked generator to another at every sample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairCounts {
    pub from: String,
    pub to: String,
    pub counts: Vec<usize>,
}

impl PairCounts {
    pub fn is_constant(&self) -> bool {
        self.counts.windows(2).all(|w| w[0] == w[1])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuationTrack {
    #[serde(serialize_with = "serialize_rationals")]
    pub epsilon_samples: Vec<Rational>,
    /// Generator labels, in the order of the first sample.
    pub labels: Vec<String>,
    /// `tracks[g][k]` is the location of generator `g` at sample `k`.
    pub tracks: Vec<Vec<Point>>,
    pub births_deaths: Vec<Event>,
    /// Pairs with a nonzero count at some sample.
    pub pair_counts: Vec<PairCounts>,
}

impl ContinuationTrack {
    pub fn is_stable(&self) -> bool {
        self.births_deaths.is_empty() && self.pair_counts.iter().all(PairCounts::is_constant)
    }
}

fn serialize_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(fmt_rational))
}

/// `steps` evenly spaced values from `hi` down to `lo`.
pub fn linear_samples(hi: &Rational, lo: &Rational, steps: usize) -> Vec<Rational> {
    let span = hi - lo;
    let last = int(steps as i64 - 1);
    (0..steps).map(|k| hi - &span * int(k as i64) / &last).collect()
}

fn min_pair_dist_sq(pts: &[Point]) -> Option<Rational> {
    let mut best: Option<Rational> = None;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let d = (a - b).norm_sq();
            if best.as_ref().is_none_or(|m| &d < m) {
                best = Some(d);
            }
        }
    }
    best
}

/// `perm[i]` is the index in `next` of the crossing nearest to `prev[i]`, accepted only
/// within half the smallest pairwise distance among all crossings of both samples.
fn match_samples(prev: &[Point], next: &[Point]) -> Option<Vec<usize>> {
    let radius_sq4 = min_pair_dist_sq(prev).into_iter().chain(min_pair_dist_sq(next)).min();
    let mut used = vec![false; next.len()];
    let mut perm = Vec::with_capacity(prev.len());
    for p in prev {
        let hits: Vec<usize> = (0..next.len())
            .filter(|&j| {
                let d4 = (p - &next[j]).norm_sq() * int(4);
                radius_sq4.as_ref().is_none_or(|r| &d4 < r)
            })
            .collect();
        if hits.len() != 1 || used[hits[0]] {
            return None;
        }
        used[hits[0]] = true;
        perm.push(hits[0]);
    }
    Some(perm)
}

const MAX_BISECTIONS: usize = 16;

fn crossings_at(c: &Curve, f: &MorseFunction, eps: &Rational) -> Result<Vec<Point>, ContinuationError> {
    let (_, xs) = admissible_pushoff(c, f, &PushoffConfig::new(eps.clone()))
        .map_err(|e| ContinuationError::WindowViolation { epsilon: fmt_rational(eps), reason: window_reason(&e) })?;
    Ok(xs.into_iter().map(|x| x.location).collect())
}

/// Matches two samples, bisecting the epsilon interval when crossings move farther than
/// the matching radius in one step.
fn refine_match(
    c: &Curve,
    f: &MorseFunction,
    (a, pa): (&Rational, &[Point]),
    (b, pb): (&Rational, &[Point]),
    depth: usize,
) -> Result<Vec<usize>, ContinuationError> {
    if let Some(perm) = match_samples(pa, pb) {
        return Ok(perm);
    }
    if depth == 0 {
        return Err(ContinuationError::NeedsRefinement { from: fmt_rational(a), to: fmt_rational(b) });
    }
    let mid = (a + b) / int(2);
    let pm = crossings_at(c, f, &mid)?;
    if pm.len() != pa.len() {
        return Err(ContinuationError::WindowViolation {
            epsilon: fmt_rational(&mid),
            reason: "crossing count changes between samples".into(),
        });
    }
    let first = refine_match(c, f, (a, pa), (&mid, &pm), depth - 1)?;
    let second = refine_match(c, f, (&mid, &pm), (b, pb), depth - 1)?;
    Ok(first.into_iter().map(|i| second[i]).collect())
}

fn locations(cx: &ChainComplex) -> Vec<Point> {
    cx.generators.iter().map(|g| g.location().clone()).collect()
}

pub fn continuation_track(
    c: &Curve,
    f: &MorseFunction,
    eps_hi: &Rational,
    eps_lo: &Rational,
    steps: usize,
) -> Result<ContinuationTrack, ContinuationError> {
    continuation_track_with(c, f, eps_hi, eps_lo, steps, &Names::default(), BuildOptions::default())
}

pub fn continuation_track_with(
    c: &Curve,
    f: &MorseFunction,
    eps_hi: &Rational,
    eps_lo: &Rational,
    steps: usize,
    names: &Names,
    opts: BuildOptions,
) -> Result<ContinuationTrack, ContinuationError> {
    if steps < 2 {
        return Err(ContinuationError::TooFewSteps(steps));
    }
    if !eps_lo.is_positive() || eps_lo >= eps_hi {
        return Err(ContinuationError::BadRange);
    }
    let samples = linear_samples(eps_hi, eps_lo, steps);
    let built: Vec<Result<ChainComplex, ContinuationError>> = std::thread::scope(|s| {
        let handles: Vec<_> = samples
            .iter()
            .map(|eps| {
                s.spawn(move || {
                    let (push, _) = admissible_pushoff(c, f, &PushoffConfig::new(eps.clone())).map_err(|e| {
                        ContinuationError::WindowViolation { epsilon: fmt_rational(eps), reason: window_reason(&e) }
                    })?;
                    Ok(build_hamiltonian_with(c, &push.curve, opts)?)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sample thread")).collect()
    });
    let complexes = built.into_iter().collect::<Result<Vec<_>, _>>()?;

    // order[k][g] is the index at sample k of the generator that is g at sample 0
    let mut order: Vec<Vec<usize>> = vec![(0..complexes[0].len()).collect()];
    let mut births_deaths = Vec::new();
    for k in 1..complexes.len() {
        let prev = locations(&complexes[k - 1]);
        let next = locations(&complexes[k]);
        if prev.len() != next.len() {
            let birth = next.len() > prev.len();
            births_deaths.push(Event { epsilon: samples[k].clone(), location: Point::zero(), birth });
            break;
        }
        let perm = refine_match(c, f, (&samples[k - 1], &prev), (&samples[k], &next), MAX_BISECTIONS)?;
        order.push(order[k - 1].iter().map(|&i| perm[i]).collect());
    }
    if let Some(e) = births_deaths.first() {
        return Err(ContinuationError::WindowViolation {
            epsilon: fmt_rational(&e.epsilon),
            reason: if e.birth { "a crossing is born".into() } else { "a crossing dies".into() },
        });
    }

    let labels = first_labels(c, f, &samples[0], names, opts, &complexes[0]);
    let n = complexes[0].len();
    let tracks = (0..n)
        .map(|g| complexes.iter().zip(&order).map(|(cx, o)| cx.generators[o[g]].location().clone()).collect())
        .collect();
    let mut pair_counts = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let counts: Vec<usize> = complexes.iter().zip(&order).map(|(cx, o)| cx.counts[o[x]][o[y]]).collect();
            if counts.iter().any(|&k| k > 0) {
                pair_counts.push(PairCounts { from: labels[x].clone(), to: labels[y].clone(), counts });
            }
        }
    }
    Ok(ContinuationTrack { epsilon_samples: samples, labels, tracks, births_deaths, pair_counts })
}

fn window_reason(e: &PushoffError) -> String {
    match e {
        PushoffError::NotAdmissible { reason, .. } => reason.clone(),
        other => other.to_string(),
    }
}

/// Pearly names carried over at the first sample when the identification succeeds.
fn first_labels(
    c: &Curve,
    f: &MorseFunction,
    eps: &Rational,
    names: &Names,
    opts: BuildOptions,
    first: &ChainComplex,
) -> Vec<String> {
    match compare_at(c, f, &PushoffConfig::new(eps.clone()), names, opts) {
        Ok(cmp) if cmp.identify_error.is_none() && cmp.hamiltonian.len() == first.len() => {
            cmp.hamiltonian.generators.iter().map(|g| g.label.clone()).collect()
        }
        _ => first.generators.iter().map(|g| g.label.clone()).collect(),
    }
}
