//! The pearly and Hamiltonian chain complexes over GF(2).

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::curve::{validate_immersion, Curve, CurveFile};
use crate::disc::{bigons_one_curve, bigons_two_curves, Bigon, CornerSpec, DiscEngine, DiscError};
use crate::geometry::{curve_intersections, self_intersections, CrossPoint, GeometryError, SelfIntersection};
use crate::morse::{
    critical_points, rigid_trajectories, validate_morse, CriticalPoint, GradientArc, MorseError, MorseFunction,
};
use crate::point::Point;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("curve is not a generic immersion: {0}")]
    Genericity(String),
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Disc(#[from] DiscError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Pearly,
    Hamiltonian,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GeneratorKind {
    Critical {
        point: CriticalPoint,
    },
    /// Ordered pair at double point `si`; `reversed` selects `(q, p)` over `(p, q)`.
    Pair {
        si: usize,
        reversed: bool,
        location: Point,
    },
    Crossing {
        point: CrossPoint,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub label: String,
    #[serde(flatten)]
    pub kind: GeneratorKind,
}

impl Generator {
    pub fn location(&self) -> &Point {
        match &self.kind {
            GeneratorKind::Critical { point } => &point.location,
            GeneratorKind::Pair { location, .. } => location,
            GeneratorKind::Crossing { point } => &point.location,
        }
    }

    pub fn critical_index(&self) -> Option<u8> {
        match &self.kind {
            GeneratorKind::Critical { point } => Some(point.index),
            _ => None,
        }
    }

    pub fn is_pair(&self) -> bool {
        matches!(self.kind, GeneratorKind::Pair { .. })
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Certificate {
    Trajectory(GradientArc),
    Bigon(Bigon),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainComplex {
    pub flavor: Flavor,
    pub generators: Vec<Generator>,
    /// `counts[x][y]` is the number of rigid objects from `x` to `y`.
    pub counts: Vec<Vec<usize>>,
    /// Certificates behind each nonzero count, keyed by `(x, y)`.
    #[serde(serialize_with = "serialize_disc_log")]
    pub disc_log: BTreeMap<(usize, usize), Vec<Certificate>>,
}

/// JSON maps need string keys, so the log goes out as a list of entries.
fn serialize_disc_log<S: serde::Serializer>(
    log: &BTreeMap<(usize, usize), Vec<Certificate>>,
    s: S,
) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry<'a> {
        from: usize,
        to: usize,
        certificates: &'a [Certificate],
    }
    s.collect_seq(log.iter().map(|(&(from, to), certificates)| Entry { from, to, certificates }))
}

impl ChainComplex {
    fn empty(flavor: Flavor, generators: Vec<Generator>) -> Self {
        let n = generators.len();
        Self { flavor, generators, counts: vec![vec![0; n]; n], disc_log: BTreeMap::new() }
    }

    fn record(&mut self, x: usize, y: usize, cert: Certificate) {
        self.counts[x][y] += 1;
        self.disc_log.entry((x, y)).or_default().push(cert);
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Coefficient of `y` in the boundary of `x`, mod 2.
    pub fn entry(&self, x: usize, y: usize) -> u8 {
        (self.counts[x][y] % 2) as u8
    }

    /// Nonzero boundary entries as `(x, y)` index pairs, sorted.
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| self.entry(x, y) == 1).collect()
    }

    /// Nonzero boundary entries by label.
    pub fn labeled_arrows(&self) -> Vec<(String, String)> {
        self.arrows()
            .into_iter()
            .map(|(x, y)| (self.generators[x].label.clone(), self.generators[y].label.clone()))
            .collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.label == label)
    }

    /// Rows of the GF(2) boundary matrix: `matrix[x][y]`.
    pub fn matrix(&self) -> Vec<Vec<u8>> {
        (0..self.len()).map(|x| (0..self.len()).map(|y| self.entry(x, y)).collect()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareReport {
    pub matrix: Vec<Vec<u8>>,
    pub nonzero: Vec<(usize, usize)>,
}

impl SquareReport {
    pub fn is_zero(&self) -> bool {
        self.nonzero.is_empty()
    }
}

pub fn boundary_squared(cx: &ChainComplex) -> SquareReport {
    let n = cx.len();
    let m = cx.matrix();
    let mut sq = vec![vec![0u8; n]; n];
    let mut nonzero = Vec::new();
    for x in 0..n {
        for z in 0..n {
            let v = (0..n).fold(0u8, |acc, y| acc ^ (m[x][y] & m[y][z]));
            sq[x][z] = v;
            if v == 1 {
                nonzero.push((x, z));
            }
        }
    }
    SquareReport { matrix: sq, nonzero }
}

/// Names of critical points and double points, read from `label` lines by exact location.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Names {
    pub critical: BTreeMap<Point, String>,
    /// Names of the `p` and `q` branches of each double point.
    pub pairs: BTreeMap<Point, (String, String)>,
}

impl Names {
    pub fn from_file(file: &CurveFile) -> Self {
        let mut names = Names::default();
        for l in &file.labels {
            match l.name.split_once(',') {
                Some((a, b)) => {
                    names.pairs.insert(l.at.clone(), (a.to_string(), b.to_string()));
                }
                None => {
                    names.critical.insert(l.at.clone(), l.name.clone());
                }
            }
        }
        names
    }

    pub fn critical_name(&self, cp: &CriticalPoint) -> String {
        self.critical.get(&cp.location).cloned().unwrap_or_else(|| format!("v{}", cp.vertex))
    }

    /// Branch names `(p, q)` of double point number `k`.
    pub fn branch_names(&self, k: usize, si: &SelfIntersection) -> (String, String) {
        self.pairs.get(&si.location).cloned().unwrap_or_else(|| (format!("p{k}"), format!("q{k}")))
    }
}

/// Data the pearly complex is built from.
pub struct PearlyData {
    pub sis: Vec<SelfIntersection>,
    pub crit: Vec<CriticalPoint>,
}

pub fn pearly_data(c: &Curve, f: &MorseFunction) -> Result<PearlyData, ComplexError> {
    let report = validate_immersion(c);
    if let Some(v) = report.violations.first() {
        return Err(ComplexError::Genericity(v.to_string()));
    }
    let sis = self_intersections(c)?;
    let crit = critical_points(c, f)?;
    let morse = validate_morse(c, f, &sis);
    if let Some(v) = morse.violations.first() {
        return Err(ComplexError::Genericity(v.clone()));
    }
    Ok(PearlyData { sis, crit })
}

pub fn pearly_generators(data: &PearlyData, names: &Names) -> Vec<Generator> {
    let mut gens: Vec<Generator> = data
        .crit
        .iter()
        .map(|cp| {
            let mut point = cp.clone();
            point.label = Some(names.critical_name(cp));
            Generator { label: names.critical_name(cp), kind: GeneratorKind::Critical { point } }
        })
        .collect();
    for (k, si) in data.sis.iter().enumerate() {
        let (a, b) = names.branch_names(k, si);
        for reversed in [false, true] {
            let label = if reversed { format!("({b},{a})") } else { format!("({a},{b})") };
            gens.push(Generator {
                label,
                kind: GeneratorKind::Pair { si: k, reversed, location: si.location.clone() },
            });
        }
    }
    gens
}

pub fn corner_spec(g: &Generator, sis: &[SelfIntersection]) -> Option<CornerSpec> {
    match &g.kind {
        GeneratorKind::Critical { point } => Some(CornerSpec::Critical(point.clone())),
        GeneratorKind::Pair { si, reversed, .. } => Some(CornerSpec::pair(&sis[*si], *reversed)),
        GeneratorKind::Crossing { .. } => None,
    }
}

/// Runs `f` over all ordered generator pairs, splitting rows across `jobs` threads.
fn pairwise<T: Send>(n: usize, jobs: usize, f: impl Fn(usize, usize) -> T + Sync) -> Vec<Vec<T>> {
    let jobs = jobs.clamp(1, n.max(1));
    let rows: Vec<usize> = (0..n).collect();
    let chunk = n.div_ceil(jobs).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = rows
            .chunks(chunk)
            .map(|xs| {
                let f = &f;
                s.spawn(move || xs.iter().map(|&x| (0..n).map(|y| f(x, y)).collect::<Vec<T>>()).collect::<Vec<_>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub jobs: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self { jobs: 1 }
    }
}

pub fn build_pearly(c: &Curve, f: &MorseFunction) -> Result<ChainComplex, ComplexError> {
    build_pearly_with(c, f, &Names::default(), BuildOptions::default())
}

pub fn build_pearly_with(
    c: &Curve,
    f: &MorseFunction,
    names: &Names,
    opts: BuildOptions,
) -> Result<ChainComplex, ComplexError> {
    let data = pearly_data(c, f)?;
    let gens = pearly_generators(&data, names);
    let mut cx = ChainComplex::empty(Flavor::Pearly, gens);
    let index_of_vertex = |v: usize| {
        cx.generators
            .iter()
            .position(|g| matches!(&g.kind, GeneratorKind::Critical { point } if point.vertex == v))
            .expect("critical generator")
    };
    let arcs: Vec<(usize, usize, GradientArc)> = rigid_trajectories(c, f)?
        .into_iter()
        .map(|a| (index_of_vertex(a.from.vertex), index_of_vertex(a.to.vertex), a))
        .collect();
    for (x, y, a) in arcs {
        cx.record(x, y, Certificate::Trajectory(a));
    }
    let engine = DiscEngine::new(&[c])?;
    let specs: Vec<CornerSpec> = cx.generators.iter().map(|g| corner_spec(g, &data.sis).expect("pearly")).collect();
    let found = pairwise(cx.len(), opts.jobs, |x, y| -> Vec<Bigon> {
        let (gx, gy) = (&cx.generators[x], &cx.generators[y]);
        if x == y || (!gx.is_pair() && !gy.is_pair()) {
            return Vec::new();
        }
        // index-1 points never start a disc, index-0 points never end one
        if gx.critical_index() == Some(1) || gy.critical_index() == Some(0) {
            return Vec::new();
        }
        bigons_one_curve(&engine, &specs[x], &specs[y]).expect("pruned pairs are skipped")
    });
    for (x, row) in found.into_iter().enumerate() {
        for (y, bigons) in row.into_iter().enumerate() {
            for b in bigons {
                cx.record(x, y, Certificate::Bigon(b));
            }
        }
    }
    Ok(cx)
}

pub fn build_hamiltonian(c: &Curve, push: &Curve) -> Result<ChainComplex, ComplexError> {
    build_hamiltonian_with(c, push, BuildOptions::default())
}

/// Generators are labeled `x0, x1, ...` in crossing order; see `identify` for the
/// labels carried over from the pearly side.
pub fn build_hamiltonian_with(c: &Curve, push: &Curve, opts: BuildOptions) -> Result<ChainComplex, ComplexError> {
    let xs = curve_intersections(c, push)?;
    let gens: Vec<Generator> = xs
        .iter()
        .enumerate()
        .map(|(k, x)| Generator { label: format!("x{k}"), kind: GeneratorKind::Crossing { point: x.clone() } })
        .collect();
    let mut cx = ChainComplex::empty(Flavor::Hamiltonian, gens);
    let engine = DiscEngine::new(&[c, push])?;
    let found =
        pairwise(
            xs.len(),
            opts.jobs,
            |x, y| {
                if x == y {
                    Vec::new()
                } else {
                    bigons_two_curves(&engine, &xs[x], &xs[y])
                }
            },
        );
    for (x, row) in found.into_iter().enumerate() {
        for (y, bigons) in row.into_iter().enumerate() {
            for b in bigons {
                cx.record(x, y, Certificate::Bigon(b));
            }
        }
    }
    Ok(cx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::rat;
    use crate::pushoff::{construct_pushoff, PushoffConfig};

    fn diamond() -> Curve {
        Curve::from_ints(&[(0, -1), (1, 0), (0, 1), (-1, 0)]).unwrap()
    }

    #[test]
    fn diamond_complexes_have_zero_boundary() {
        let c = diamond();
        let f = MorseFunction::NegHeight;
        let p = build_pearly(&c, &f).unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.arrows().is_empty());
        assert_eq!(p.counts[0][1], 2);
        let push = construct_pushoff(&c, &f, &PushoffConfig::new(rat(1, 8))).unwrap();
        let h = build_hamiltonian(&c, &push.curve).unwrap();
        assert_eq!(h.len(), 2);
        assert!(h.arrows().is_empty());
        assert_eq!(h.counts[0][1], 2);
        assert!(boundary_squared(&p).is_zero());
        let json = serde_json::to_value(&h).unwrap();
        assert_eq!(json["disc_log"][0]["certificates"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn squares_of_a_chain() {
        let gens = (0..3)
            .map(|k| Generator {
                label: format!("g{k}"),
                kind: GeneratorKind::Pair { si: 0, reversed: false, location: Point::zero() },
            })
            .collect();
        let mut cx = ChainComplex::empty(Flavor::Pearly, gens);
        cx.counts[0][1] = 1;
        cx.counts[1][2] = 3;
        let sq = boundary_squared(&cx);
        assert_eq!(sq.nonzero, vec![(0, 2)]);
        cx.counts[0][1] = 2;
        assert!(boundary_squared(&cx).is_zero());
    }
}
