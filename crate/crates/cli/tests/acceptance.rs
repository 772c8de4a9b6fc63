//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use floer_core::complex::{BuildOptions, Names};
use floer_core::continuation::continuation_track;
use floer_core::corpus::{generate, CorpusConfig};
use floer_core::pipeline::{compare_at, oracle_check, Comparison};
use floer_core::point::{int, rat};
use floer_core::pushoff::{construct_pushoff, transversality_window, PushoffConfig};
use floer_core::{Curve, MorseFunction, Rational};
use serde_json::Value;

type Arrows = BTreeSet<(String, String)>;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).to_str().unwrap().to_string()
}

fn floer(args: &[&str]) -> Result<Vec<u8>, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_floer"))
        .args(args)
        .env_remove("FLOER_OUT_DIR")
        .output()
        .map_err(|e| e.to_string())?;
    if !o.status.success() {
        return Err(format!("floer {args:?} exited {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr)));
    }
    Ok(o.stdout)
}

fn floer_json(args: &[&str]) -> Result<Value, String> {
    let mut all: Vec<&str> = args.to_vec();
    all.extend(["--format", "json"]);
    serde_json::from_slice(&floer(&all)?).map_err(|e| e.to_string())
}

fn arrows_of(v: &Value) -> Arrows {
    v["arrows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| (a[0].as_str().unwrap().to_string(), a[1].as_str().unwrap().to_string()))
        .collect()
}

fn set(list: &[(&str, &str)]) -> Arrows {
    list.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn generator_count(v: &Value) -> usize {
    v["generators"].as_array().map_or(0, Vec::len)
}

/// Runs `pearly`, `hamiltonian` and `compare` on a fixture and checks the expected arrow sets.
fn reproduce(file: &str, pearly: &Arrows, ham: &Arrows, shown: usize) -> Result<String, String> {
    let path = fixture(file);
    let p = floer_json(&["pearly", &path])?;
    let h = floer_json(&["hamiltonian", "--auto-epsilon", &path])?;
    let c = floer_json(&["compare", "--auto-epsilon", &path])?;
    let (pa, ha) = (arrows_of(&p["pearly"]), arrows_of(&h["hamiltonian"]));
    if &pa != pearly {
        return Err(format!("pearly arrows differ: got {pa:?}"));
    }
    if &ha != ham {
        return Err(format!("hamiltonian arrows differ: got {ha:?}"));
    }
    let (np, nh) = (generator_count(&p["pearly"]), generator_count(&h["hamiltonian"]));
    if np != 10 || nh != 10 {
        return Err(format!("expected 10 generators on each side, got {np} and {nh}"));
    }
    let named: BTreeSet<&String> = pearly.iter().flat_map(|(a, b)| [a, b]).collect();
    if named.len() != shown {
        return Err(format!("diagram names {} generators, expected {shown}", named.len()));
    }
    let id = &c["identification"];
    if id["matched"] != true || id["boundary_equal"] != true {
        return Err(format!("compare: matched {} boundary_equal {}", id["matched"], id["boundary_equal"]));
    }
    Ok(format!("{} arrows each side, {np} generators, matched, boundary_equal", pa.len()))
}

struct Corpus {
    curves: Vec<Curve>,
    windows: Vec<Rational>,
    f: MorseFunction,
}

fn run_corpus<T>(
    corpus: &Corpus,
    mut check: impl FnMut(&Curve, &Rational) -> Result<T, String>,
) -> Result<Vec<T>, String> {
    corpus
        .curves
        .iter()
        .zip(&corpus.windows)
        .map(|(c, d)| check(c, d).map_err(|e| format!("{}: {e}", c.name.clone().unwrap_or_default())))
        .collect()
}

fn main() {
    let mut failed = 0;
    let mut criterion = |n: u32, name: &str, limit: Option<Duration>, f: &mut dyn FnMut() -> Result<String, String>| {
        let start = Instant::now();
        let mut result = f();
        let took = start.elapsed();
        if let (Ok(_), Some(limit)) = (&result, limit) {
            if took > limit {
                result = Err(format!("took {took:.2?}, limit {limit:?}"));
            }
        }
        match result {
            Ok(detail) => println!("PASS criterion {n} {name}: {detail} [{:.2}s]", took.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {n} {name}: {detail} [{:.2}s]", took.as_secs_f64());
            }
        }
    };

    criterion(1, "example1 fixture arrows", Some(Duration::from_secs(5)), &mut || {
        let pearly = set(&[
            ("d", "(j,h)"),
            ("(j,h)", "(f,g)"),
            ("(j,h)", "(b,c)"),
            ("(f,g)", "k"),
            ("k", "a"),
            ("k", "d"),
            ("(c,b)", "(f,g)"),
            ("(c,b)", "(h,j)"),
            ("(b,c)", "k"),
            ("e", "a"),
            ("e", "d"),
            ("a", "(g,f)"),
            ("(g,f)", "(h,j)"),
            ("(g,f)", "(b,c)"),
            ("(h,j)", "e"),
        ]);
        let ham = set(&[
            ("d", "j"),
            ("j", "f"),
            ("j", "b"),
            ("f", "k"),
            ("k", "a"),
            ("k", "d"),
            ("c", "f"),
            ("c", "h"),
            ("b", "k"),
            ("e", "a"),
            ("e", "d"),
            ("a", "g"),
            ("g", "h"),
            ("g", "b"),
            ("h", "e"),
        ]);
        reproduce("example1.curve", &pearly, &ham, 10)
    });

    // 8 generators carry arrows; (d,e) and (c,b) are isolated.
    criterion(2, "example2 fixture arrows", Some(Duration::from_secs(5)), &mut || {
        let pearly = set(&[
            ("(e,d)", "f"),
            ("f", "i"),
            ("f", "a"),
            ("i", "(h,g)"),
            ("(g,h)", "j"),
            ("j", "a"),
            ("j", "i"),
            ("a", "(b,c)"),
        ]);
        let ham =
            set(&[("e", "f"), ("f", "i"), ("f", "a"), ("i", "h"), ("g", "j"), ("j", "a"), ("j", "i"), ("a", "b")]);
        reproduce("example2.curve", &pearly, &ham, 8)
    });

    criterion(3, "embedded circle", Some(Duration::from_secs(1)), &mut || {
        let path = fixture("diamond.curve");
        let c = floer_json(&["compare", "--auto-epsilon", &path])?;
        for side in ["pearly", "hamiltonian"] {
            let n = generator_count(&c[side]);
            let arrows = arrows_of(&c[side]);
            if n != 2 || !arrows.is_empty() {
                return Err(format!("{side}: {n} generators, {} arrows", arrows.len()));
            }
            let counts = c[side]["counts"].as_array().unwrap();
            if counts.len() != 1 || counts[0]["count"] != 2 {
                return Err(format!("{side}: expected one cancelling pair of discs, got {counts:?}"));
            }
        }
        Ok("|CF^P| = |CF^H| = 2, both boundaries zero, two discs cancel on each side".into())
    });

    let start = Instant::now();
    let cfg = CorpusConfig::default();
    let f = MorseFunction::NegHeight;
    let curves = generate(&cfg);
    let windows: Vec<Rational> = curves.iter().map(|c| transversality_window(c, &f).unwrap()).collect();
    let corpus = Corpus { curves, windows, f };
    println!(
        "corpus: {} curves, seed {}, at most {} double points each [{:.2}s]",
        corpus.curves.len(),
        cfg.seed,
        cfg.max_self_intersections,
        start.elapsed().as_secs_f64()
    );
    let opts = BuildOptions { jobs: 4 };

    criterion(4, "oracle equivalence", Some(Duration::from_secs(300)), &mut || {
        let diffs = run_corpus(&corpus, |c, d| {
            let diff =
                oracle_check(c, &corpus.f, &PushoffConfig::new(d / int(2)), floer_core::oracle::DEFAULT_MAX_W, opts)
                    .map_err(|e| e.to_string())?;
            if !diff.is_clean() {
                return Err(format!("{:?}", diff.diffs));
            }
            Ok((diff.pairs_checked, diff.inconclusive.len()))
        })?;
        let pairs: usize = diffs.iter().map(|d| d.0).sum();
        let inconclusive: usize = diffs.iter().map(|d| d.1).sum();
        Ok(format!("{pairs} generator pairs, 0 diffs, trajectories equal, {inconclusive} inconclusive"))
    });

    let mut comparisons: Vec<Comparison> = Vec::new();
    criterion(5, "pearly and hamiltonian agree on the corpus", Some(Duration::from_secs(300)), &mut || {
        let mut runs = 0;
        comparisons.clear();
        run_corpus(&corpus, |c, d| {
            for j in [1, 2, 4] {
                let eps = d * rat(j, 4);
                let cmp = compare_at(c, &corpus.f, &PushoffConfig::new(eps.clone()), &Names::default(), opts)
                    .map_err(|e| e.to_string())?;
                runs += 1;
                if !cmp.report.is_identical() {
                    return Err(format!("epsilon {eps}: {:?} {:?}", cmp.identify_error, cmp.report.mismatches));
                }
                if j == 2 {
                    comparisons.push(cmp);
                }
            }
            Ok(())
        })?;
        Ok(format!("{runs} comparisons at 3 epsilons per curve, all matched, boundary_equal, dsq_equal"))
    });

    criterion(6, "continuation stability", Some(Duration::from_secs(120)), &mut || {
        let mut tracks = 0;
        run_corpus(&corpus, |c, d| {
            let t = continuation_track(c, &corpus.f, d, &(d / int(8)), 8).map_err(|e| e.to_string())?;
            if !t.births_deaths.is_empty() || !t.is_stable() {
                return Err(format!(
                    "unstable: {:?}",
                    t.pair_counts.iter().filter(|p| !p.is_constant()).collect::<Vec<_>>()
                ));
            }
            tracks += t.tracks.len();
            Ok(())
        })?;
        Ok(format!("{tracks} tracks over 8 samples, 0 births/deaths, all disc counts constant"))
    });

    criterion(7, "pruning zero blocks", None, &mut || {
        if comparisons.len() != corpus.curves.len() {
            return Err("needs the comparisons of criterion 5".into());
        }
        let mut checked = 0;
        for cmp in &comparisons {
            let p = &cmp.pearly;
            let ham_index = |label: &str| {
                let (_, h) = cmp.report.bijection.iter().find(|(pl, _)| pl == label).expect("bijection is total");
                cmp.hamiltonian.index_of(h).expect("hamiltonian label")
            };
            for x in 0..p.len() {
                for y in 0..p.len() {
                    let (gx, gy) = (&p.generators[x], &p.generators[y]);
                    let blocked = (gx.critical_index() == Some(1) && gy.is_pair())
                        || (gx.is_pair() && gy.critical_index() == Some(0));
                    if !blocked {
                        continue;
                    }
                    checked += 1;
                    let (hx, hy) = (ham_index(&gx.label), ham_index(&gy.label));
                    if p.entry(x, y) != 0 || cmp.hamiltonian.entry(hx, hy) != 0 {
                        return Err(format!("nonzero entry {} -> {}", gx.label, gy.label));
                    }
                }
            }
        }
        Ok(format!("{checked} blocked entries, all zero in both boundary matrices"))
    });

    criterion(8, "linearity of the pushoff", None, &mut || {
        let mut checked = 0;
        run_corpus(&corpus, |c, d| {
            for a in [rat(1, 2), rat(1, 4)] {
                let scaled = construct_pushoff(c, &corpus.f.scaled(c, &a), &PushoffConfig::new(d.clone()));
                let direct = construct_pushoff(c, &corpus.f, &PushoffConfig::new(d * &a));
                match (scaled, direct) {
                    (Ok(s), Ok(t)) if s.curve == t.curve => checked += 1,
                    (s, t) => return Err(format!("a = {a}: {:?} vs {:?}", s.map(|p| p.curve), t.map(|p| p.curve))),
                }
            }
            Ok(())
        })?;
        Ok(format!("{checked} exact curve equalities for a in {{1/2, 1/4}}"))
    });

    criterion(9, "determinism", None, &mut || {
        let path = fixture("example1.curve");
        let mut outputs = 0;
        for args in [
            vec!["compare", "--auto-epsilon", &path, "--format", "json"],
            vec!["compare", "--auto-epsilon", &path, "--format", "text"],
            vec!["compare", "--auto-epsilon", &path, "--format", "dot"],
            vec!["compare", "--auto-epsilon", &path, "--format", "svg"],
            vec!["render", &path],
        ] {
            let (a, b) = (floer(&args)?, floer(&args)?);
            if a != b {
                return Err(format!("{args:?} differs between runs"));
            }
            outputs += 1;
        }
        Ok(format!("{outputs} outputs byte-identical across two runs"))
    });

    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
