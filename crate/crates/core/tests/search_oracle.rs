//! The pruned searches against plain enumeration of every collection.

use rturan_core::collection::Collection;
use rturan_core::detect::is_rainbow_free;
use rturan_core::family::PatternFamily;
use rturan_core::graph::Graph;
use rturan_core::search::{extremal, turan_exact, ExtremalQuery, Mode, Sequential};

struct Brute {
    min: u64,
    sum: u64,
    prod: u64,
}

fn brute(n: usize, t: usize, fam: &PatternFamily) -> Brute {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let p = pairs.len();
    let mut out = Brute { min: 0, sum: 0, prod: 0 };
    let mut any = false;
    for code in 0u64..1 << (p * t) {
        let graphs: Vec<Graph> = (0..t)
            .map(|i| {
                let mut g = Graph::empty(n);
                for (j, &(u, v)) in pairs.iter().enumerate() {
                    if code >> (i * p + j) & 1 == 1 {
                        g.add_edge(u, v);
                    }
                }
                g
            })
            .collect();
        let c = Collection::from_graphs(graphs).unwrap();
        if !is_rainbow_free(&c, fam) {
            continue;
        }
        any = true;
        let counts = c.edge_counts();
        out.min = out.min.max(*counts.iter().min().unwrap() as u64);
        out.sum = out.sum.max(counts.iter().sum::<usize>() as u64);
        out.prod = out.prod.max(counts.iter().map(|&k| k as u64).product());
    }
    assert!(any || fam.iter().any(|f| f.edge_count() == 0));
    out
}

#[test]
fn pruned_searches_match_enumeration() {
    for f in ["{M2}", "{K3}", "{K3,M2}", "{P3}"] {
        let fam = PatternFamily::parse(f).unwrap();
        for n in 1..=4 {
            for t in 1..=3 {
                let want = brute(n, t, &fam);
                for (mode, value) in [(Mode::Min, want.min), (Mode::Sum, want.sum), (Mode::Prod, want.prod)] {
                    let q = ExtremalQuery::new(mode, n, t, fam.clone());
                    let r = extremal(&q, &Sequential).unwrap();
                    assert_eq!(r.value, value, "{} n={n} t={t} {f}", mode.name());
                    assert!(r.exact);
                    let w = r.witness.unwrap();
                    assert!(is_rainbow_free(&w, &fam));
                }
            }
        }
    }
}

#[test]
fn min_is_nonincreasing_in_colours() {
    for f in ["{M2}", "{K3,M2}", "{P3}"] {
        let fam = PatternFamily::parse(f).unwrap();
        for n in 3..=5 {
            let values: Vec<u64> = (1..=4)
                .map(|t| extremal(&ExtremalQuery::new(Mode::Min, n, t, fam.clone()), &Sequential).unwrap().value)
                .collect();
            assert!(values.windows(2).all(|w| w[0] >= w[1]), "{f} n={n}: {values:?}");
        }
    }
}

#[test]
fn results_are_reproducible() {
    let fam = PatternFamily::parse("{K3,M2}").unwrap();
    for mode in [Mode::Min, Mode::Sum, Mode::Prod] {
        let q = ExtremalQuery::new(mode, 5, 3, fam.clone());
        let a = extremal(&q, &Sequential).unwrap();
        let b = extremal(&q, &Sequential).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn turan_small_anchors() {
    let k3 = rturan_core::pattern::parse_pattern("K3").unwrap();
    let m2 = rturan_core::pattern::parse_pattern("M2").unwrap();
    assert_eq!(turan_exact(5, &k3).unwrap(), 6);
    assert_eq!(turan_exact(4, &m2).unwrap(), 3);
    assert_eq!(turan_exact(10, &k3).unwrap(), 25);
}
