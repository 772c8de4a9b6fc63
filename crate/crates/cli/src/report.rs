//! Reports in text, JSON and DOT form.

use std::fmt::Write;

use floer_core::complex::{boundary_squared, Certificate, ChainComplex, Flavor, GeneratorKind};
use floer_core::continuation::ContinuationTrack;
use floer_core::identify::IdentificationReport;
use floer_core::pipeline::OracleDiff;
use floer_core::point::fmt_rational;
use floer_core::Point;
use serde::Serialize;

/// Bumped whenever a field of the JSON report changes meaning or shape.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorEntry {
    pub label: String,
    pub kind: &'static str,
    pub location: Point,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<u8>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CountEntry {
    pub from: String,
    pub to: String,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscEntry {
    pub from: String,
    pub to: String,
    pub certificates: Vec<Certificate>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexReport {
    pub flavor: Flavor,
    pub generators: Vec<GeneratorEntry>,
    /// Nonzero entries of the mod 2 boundary.
    pub arrows: Vec<(String, String)>,
    /// Every nonzero integer count, including the even ones.
    pub counts: Vec<CountEntry>,
    pub dsq_zero: bool,
    pub dsq_nonzero: Vec<(String, String)>,
    pub discs: Vec<DiscEntry>,
}

impl ComplexReport {
    pub fn new(cx: &ChainComplex) -> Self {
        let label = |i: usize| cx.generators[i].label.clone();
        let generators = cx
            .generators
            .iter()
            .map(|g| GeneratorEntry {
                label: g.label.clone(),
                kind: match g.kind {
                    GeneratorKind::Critical { .. } => "critical",
                    GeneratorKind::Pair { .. } => "pair",
                    GeneratorKind::Crossing { .. } => "crossing",
                },
                location: g.location().clone(),
                index: g.critical_index(),
            })
            .collect();
        let counts = cx
            .disc_log
            .keys()
            .map(|&(x, y)| CountEntry { from: label(x), to: label(y), count: cx.counts[x][y] })
            .collect();
        let sq = boundary_squared(cx);
        let discs = cx
            .disc_log
            .iter()
            .map(|(&(x, y), certs)| DiscEntry { from: label(x), to: label(y), certificates: certs.clone() })
            .collect();
        Self {
            flavor: cx.flavor,
            generators,
            arrows: cx.labeled_arrows(),
            counts,
            dsq_zero: sq.is_zero(),
            dsq_nonzero: sq.nonzero.iter().map(|&(x, y)| (label(x), label(y))).collect(),
            discs,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WindowReport {
    pub delta: String,
    pub reach: String,
    pub expected_generators: usize,
    pub c2_eps1: String,
    pub c2_scale: String,
}

/// The single JSON document every command emits; absent sections are omitted.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub curve: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pearly: Option<ComplexReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<ComplexReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identification: Option<IdentificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identify_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub continuation: Option<ContinuationTrack>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleDiff>,
}

impl Report {
    pub fn new(command: &str, curve: &str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            curve: curve.to_string(),
            epsilon: None,
            pearly: None,
            hamiltonian: None,
            identification: None,
            identify_error: None,
            window: None,
            continuation: None,
            oracle: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.command, self.curve);
        if let Some(eps) = &self.epsilon {
            let _ = writeln!(out, "epsilon = {eps}");
        }
        for cx in [&self.pearly, &self.hamiltonian].into_iter().flatten() {
            complex_text(&mut out, cx);
        }
        if let Some(id) = &self.identification {
            identification_text(&mut out, id);
        }
        if let Some(e) = &self.identify_error {
            let _ = writeln!(out, "identification failed: {e}");
        }
        if let Some(w) = &self.window {
            let _ = writeln!(out, "transversality window: (0, {}]", w.delta);
            let _ = writeln!(out, "reach estimate: {}", w.reach);
            let _ = writeln!(out, "expected generators: {}", w.expected_generators);
            let _ = writeln!(out, "C2 scale for eps1 = {}: {}", w.c2_eps1, w.c2_scale);
        }
        if let Some(t) = &self.continuation {
            continuation_text(&mut out, t);
        }
        if let Some(o) = &self.oracle {
            oracle_text(&mut out, o);
        }
        out
    }
}

fn flavor_name(f: Flavor) -> &'static str {
    match f {
        Flavor::Pearly => "pearly",
        Flavor::Hamiltonian => "hamiltonian",
    }
}

fn point_text(p: &Point) -> String {
    format!("({}, {})", fmt_rational(&p.x), fmt_rational(&p.y))
}

fn complex_text(out: &mut String, cx: &ComplexReport) {
    let _ = writeln!(
        out,
        "\n{} complex: {} generators, {} arrows",
        flavor_name(cx.flavor),
        cx.generators.len(),
        cx.arrows.len()
    );
    for g in &cx.generators {
        let index = g.index.map(|i| format!(" index {i}")).unwrap_or_default();
        let _ = writeln!(out, "  {} {}{} at {}", g.label, g.kind, index, point_text(&g.location));
    }
    let _ = writeln!(out, "boundary (mod 2):");
    for (a, b) in &cx.arrows {
        let _ = writeln!(out, "  {a} -> {b}");
    }
    let even: Vec<_> = cx.counts.iter().filter(|c| c.count % 2 == 0).collect();
    if !even.is_empty() {
        let _ = writeln!(out, "cancelling counts:");
        for c in even {
            let _ = writeln!(out, "  {} -> {}: {}", c.from, c.to, c.count);
        }
    }
    if cx.dsq_zero {
        let _ = writeln!(out, "d^2 = 0");
    } else {
        let pairs: Vec<String> = cx.dsq_nonzero.iter().map(|(a, b)| format!("{a}->{b}")).collect();
        let _ = writeln!(out, "d^2 != 0 at {}", pairs.join(" "));
    }
}

fn identification_text(out: &mut String, id: &IdentificationReport) {
    let _ = writeln!(out, "\nidentification:");
    for (p, h) in &id.bijection {
        let _ = writeln!(out, "  {p} = {h}");
    }
    let _ = writeln!(out, "matched = {}", id.matched);
    let _ = writeln!(out, "boundary_equal = {}", id.boundary_equal);
    let _ = writeln!(out, "dsq_equal = {}", id.dsq_equal);
    for m in &id.mismatches {
        let _ = writeln!(
            out,
            "  mismatch {} -> {}: pearly {} hamiltonian {}",
            m.from, m.to, m.pearly_count, m.hamiltonian_count
        );
    }
}

fn continuation_text(out: &mut String, t: &ContinuationTrack) {
    let eps: Vec<String> = t.epsilon_samples.iter().map(fmt_rational).collect();
    let _ = writeln!(out, "samples: {}", eps.join(" "));
    let _ = writeln!(out, "tracks: {}", t.tracks.len());
    for (label, track) in t.labels.iter().zip(&t.tracks) {
        let moved = track.windows(2).any(|w| w[0] != w[1]);
        let _ = writeln!(
            out,
            "  {label}: {} -> {}{}",
            point_text(&track[0]),
            point_text(track.last().expect("nonempty track")),
            if moved { "" } else { " (fixed)" }
        );
    }
    let _ = writeln!(out, "births/deaths: {}", t.births_deaths.len());
    let _ = writeln!(out, "disc counts per sample:");
    for p in &t.pair_counts {
        let counts: Vec<String> = p.counts.iter().map(|c| c.to_string()).collect();
        let flag = if p.is_constant() { "" } else { " CHANGED" };
        let _ = writeln!(out, "  {} -> {}: {}{flag}", p.from, p.to, counts.join(" "));
    }
    let _ = writeln!(out, "stable = {}", t.is_stable());
}

fn oracle_text(out: &mut String, o: &OracleDiff) {
    let _ = writeln!(out, "\noracle check: {} generator pairs", o.pairs_checked);
    let _ = writeln!(out, "trajectories match = {}", o.trajectories_match);
    let _ = writeln!(out, "diffs: {}", o.diffs.len());
    for d in &o.diffs {
        let _ = writeln!(
            out,
            "  {} {} -> {}: engine {} oracle {}",
            flavor_name(d.flavor),
            d.from,
            d.to,
            d.engine,
            d.oracle
        );
    }
    let _ = writeln!(out, "inconclusive: {}", o.inconclusive.len());
    for (a, b) in &o.inconclusive {
        let _ = writeln!(out, "  {a} -> {b}");
    }
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// A digraph of the mod 2 boundary.
pub fn complex_dot(cx: &ComplexReport) -> String {
    let mut out = format!("digraph {} {{\n  rankdir=LR;\n", flavor_name(cx.flavor));
    for g in &cx.generators {
        let _ = writeln!(out, "  {};", dot_id(&g.label));
    }
    for (a, b) in &cx.arrows {
        let _ = writeln!(out, "  {} -> {};", dot_id(a), dot_id(b));
    }
    out.push_str("}\n");
    out
}

/// Both boundaries side by side; Hamiltonian nodes carry the label of their pearly partner.
pub fn comparison_dot(pearly: &ComplexReport, ham: &ComplexReport, id: &IdentificationReport) -> String {
    let shared =
        |h: &str| id.bijection.iter().find(|(_, x)| x == h).map(|(p, _)| p.clone()).unwrap_or_else(|| h.to_string());
    let mut out = String::from("digraph comparison {\n  rankdir=LR;\n");
    for (tag, cx) in [("P", pearly), ("H", ham)] {
        let _ = writeln!(out, "  subgraph cluster_{} {{", flavor_name(cx.flavor));
        let _ = writeln!(out, "    label={};", dot_id(flavor_name(cx.flavor)));
        for g in &cx.generators {
            let name = if tag == "H" { shared(&g.label) } else { g.label.clone() };
            let _ = writeln!(out, "    {} [label={}];", dot_id(&format!("{tag}:{}", g.label)), dot_id(&name));
        }
        for (a, b) in &cx.arrows {
            let _ = writeln!(out, "    {} -> {};", dot_id(&format!("{tag}:{a}")), dot_id(&format!("{tag}:{b}")));
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}
