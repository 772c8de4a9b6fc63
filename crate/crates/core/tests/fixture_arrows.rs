use std::collections::BTreeSet;

use floer_core::complex::{BuildOptions, ChainComplex, Names};
use floer_core::parse_curve_file;
use floer_core::pipeline::compare_at;
use floer_core::point::int;
use floer_core::pushoff::{transversality_window, PushoffConfig};

fn arrows(cx: &ChainComplex) -> BTreeSet<(String, String)> {
    cx.labeled_arrows().into_iter().collect()
}

fn set(list: &[(&str, &str)]) -> BTreeSet<(String, String)> {
    list.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn run(path: &str) -> floer_core::pipeline::Comparison {
    let text = std::fs::read_to_string(format!("{}/../../fixtures/{path}", env!("CARGO_MANIFEST_DIR"))).unwrap();
    let file = parse_curve_file(&text).unwrap();
    let f = file.morse_or_default();
    let delta = transversality_window(&file.curve, &f).unwrap();
    compare_at(&file.curve, &f, &PushoffConfig::new(delta / int(2)), &Names::from_file(&file), BuildOptions::default())
        .unwrap()
}

#[test]
fn example1_arrows() {
    let cmp = run("example1.curve");
    assert_eq!(cmp.pearly.len(), 10);
    assert_eq!(
        arrows(&cmp.pearly),
        set(&[
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
        ])
    );
    assert_eq!(
        arrows(&cmp.hamiltonian),
        set(&[
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
        ])
    );
    assert!(cmp.report.is_identical());
}

#[test]
fn example2_arrows() {
    let cmp = run("example2.curve");
    assert_eq!(cmp.pearly.len(), 10);
    assert_eq!(
        arrows(&cmp.pearly),
        set(&[
            ("(e,d)", "f"),
            ("f", "i"),
            ("f", "a"),
            ("i", "(h,g)"),
            ("(g,h)", "j"),
            ("j", "a"),
            ("j", "i"),
            ("a", "(b,c)"),
        ])
    );
    assert_eq!(
        arrows(&cmp.hamiltonian),
        set(&[("e", "f"), ("f", "i"), ("f", "a"), ("i", "h"), ("g", "j"), ("j", "a"), ("j", "i"), ("a", "b")])
    );
    assert!(cmp.report.is_identical());
}
