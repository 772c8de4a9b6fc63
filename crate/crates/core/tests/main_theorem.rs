use floer_core::complex::{BuildOptions, ChainComplex, GeneratorKind, Names};
use floer_core::corpus::{generate, CorpusConfig};
use floer_core::geometry::self_intersections;
use floer_core::identify::{compare_complexes, identify_generators};
use floer_core::morse::MorseFunction;
use floer_core::pipeline::compare_at;
use floer_core::point::rat;
use floer_core::pushoff::{transversality_window, PushoffConfig};
use floer_core::Curve;

#[test]
fn pearly_and_hamiltonian_agree_on_random_curves() {
    let curves = generate(&CorpusConfig { count: 12, ..CorpusConfig::default() });
    let f = MorseFunction::NegHeight;
    let mut failures = Vec::new();
    for c in &curves {
        let delta = transversality_window(c, &f).unwrap();
        for j in [1, 2, 4] {
            let eps = &delta * rat(j, 4);
            let cmp = compare_at(c, &f, &PushoffConfig::new(eps), &Names::default(), BuildOptions { jobs: 4 }).unwrap();
            if !cmp.report.is_identical() {
                failures.push(format!(
                    "{} eps={} {:?} {:?}\n{}",
                    c.name.clone().unwrap_or_default(),
                    j,
                    cmp.identify_error,
                    cmp.report.mismatches,
                    c.render()
                ));
            }
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

fn permuted(cx: &ChainComplex, perm: &[usize]) -> ChainComplex {
    let mut out = cx.clone();
    out.generators = perm.iter().map(|&i| cx.generators[i].clone()).collect();
    out.counts = perm.iter().map(|&i| perm.iter().map(|&j| cx.counts[i][j]).collect()).collect();
    out.disc_log.clear();
    out
}

#[test]
fn storage_order_does_not_change_the_comparison() {
    let c = Curve::from_ints(&[(-2, 0), (-1, 1), (1, -1), (2, 0), (1, 1), (-1, -1)]).unwrap();
    let f = MorseFunction::NegHeight;
    let delta = transversality_window(&c, &f).unwrap();
    let cmp =
        compare_at(&c, &f, &PushoffConfig::new(delta * rat(1, 2)), &Names::default(), BuildOptions::default()).unwrap();
    let sis = self_intersections(&c).unwrap();
    let n = cmp.hamiltonian.len();
    for shift in 1..n {
        let perm: Vec<usize> = (0..n).map(|i| (i * 5 + shift) % n).collect();
        let ham = permuted(&cmp.hamiltonian, &perm);
        let bij = identify_generators(&cmp.pearly, &ham, &sis, &cmp.pushoff).unwrap();
        let report = compare_complexes(&cmp.pearly, &ham, &bij);
        assert!(report.is_identical());
        assert_eq!(report.bijection, cmp.report.bijection);
    }
}

#[test]
fn bijection_does_not_depend_on_epsilon() {
    for c in generate(&CorpusConfig { count: 4, seed: 11, ..CorpusConfig::default() }) {
        let f = MorseFunction::NegHeight;
        let delta = transversality_window(&c, &f).unwrap();
        // for each pearly generator: the black segment and pushoff source segment of its crossing
        let at = |j| {
            let cfg = PushoffConfig::new(&delta * rat(j, 8));
            let cmp = compare_at(&c, &f, &cfg, &Names::default(), BuildOptions::default()).unwrap();
            let sis = self_intersections(&c).unwrap();
            let bij = identify_generators(&cmp.pearly, &cmp.hamiltonian, &sis, &cmp.pushoff).unwrap();
            bij.map
                .iter()
                .map(|&h| match &cmp.hamiltonian.generators[h].kind {
                    GeneratorKind::Crossing { point } => {
                        (point.param_a.segment, cmp.pushoff.source_segment(point.param_b.segment))
                    }
                    _ => unreachable!(),
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(at(1), at(8));
    }
}
