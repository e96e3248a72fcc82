//! Randomized checks of canonical forms, rainbow detection and the lemma
//! procedures against independent oracles.

use proptest::prelude::*;
use proptest::test_runner::Config;

use rturan_core::canon::canonical_form;
use rturan_core::collection::{nest_transform, Collection, RainbowMatching};
use rturan_core::detect::{find_rainbow_copy, has_rainbow_copy, is_rainbow_free, max_rainbow_matching};
use rturan_core::family::PatternFamily;
use rturan_core::graph::Graph;
use rturan_core::lemmas::{
    greedy_extend, greedy_from_degrees, m2_structure, star_cover, strong_color_exact, strong_color_sufficient,
    M2Structure, StarCover, StrongColorEvidence,
};
use rturan_core::pattern::{matching, star};

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

/// Graph on `n` vertices keeping pair `k` when bit `k` of `mask` is set.
fn graph_from(n: usize, mask: u64) -> Graph {
    let mut g = Graph::empty(n);
    for (k, (u, v)) in pairs(n).into_iter().enumerate() {
        if mask >> k & 1 == 1 {
            g.add_edge(u, v);
        }
    }
    g
}

/// Graph whose pairs are kept independently with probability `dens / 8`.
fn dense_graph(n: usize, words: &[u64], dens: u32) -> Graph {
    let mut g = Graph::empty(n);
    for (k, (u, v)) in pairs(n).into_iter().enumerate() {
        let w = words[k / 21] >> (3 * (k % 21)) & 7;
        if (w as u32) < dens {
            g.add_edge(u, v);
        }
    }
    g
}

fn collection(n: usize, masks: &[u64]) -> Collection {
    Collection::from_graphs(masks.iter().map(|&m| graph_from(n, m)).collect()).unwrap()
}

fn arb_collection(max_n: usize, max_t: usize) -> impl Strategy<Value = Collection> {
    (1..=max_n, 1..=max_t)
        .prop_flat_map(|(n, t)| (Just(n), prop::collection::vec(any::<u64>(), t)))
        .prop_map(|(n, masks)| collection(n, &masks))
}

/// Collection whose colours have density `dens / 8`.
fn arb_dense(ns: std::ops::RangeInclusive<usize>, ts: std::ops::RangeInclusive<usize>, dens: u32) -> impl Strategy<Value = Collection> {
    (ns, ts)
        .prop_flat_map(|(n, t)| (Just(n), prop::collection::vec(prop::collection::vec(any::<u64>(), 5), t)))
        .prop_map(move |(n, words)| {
            Collection::from_graphs(words.iter().map(|w| dense_graph(n, w, dens)).collect()).unwrap()
        })
}

/// Pattern with at most four edges on at most five vertices, isolated
/// vertices allowed.
fn arb_pattern() -> impl Strategy<Value = Graph> {
    (1..=5usize, any::<u64>()).prop_map(|(k, mask)| {
        let mut g = Graph::empty(k);
        for (i, (u, v)) in pairs(k).into_iter().enumerate() {
            if mask >> i & 1 == 1 && g.edge_count() < 4 {
                g.add_edge(u, v);
            }
        }
        g
    })
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for i in 0..k {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out
}

fn isomorphic(g: &Graph, h: &Graph) -> bool {
    g.n() == h.n()
        && g.edge_count() == h.edge_count()
        && permutations(g.n()).iter().any(|p| g.edges().all(|(u, v)| h.has_edge(p[u], p[v])))
}

/// Lexicographically first rainbow copy by plain enumeration of injective
/// vertex maps, then of colour assignments.
fn oracle(c: &Collection, f: &Graph) -> Option<(Vec<usize>, Vec<usize>)> {
    let edges = f.edge_vec();
    fn colours(c: &Collection, img: &[(usize, usize)], k: usize, used: u64, out: &mut Vec<usize>) -> bool {
        if k == img.len() {
            return true;
        }
        for col in 0..c.t() {
            if used >> col & 1 == 0 && c.graph(col).has_edge(img[k].0, img[k].1) {
                out.push(col);
                if colours(c, img, k + 1, used | 1 << col, out) {
                    return true;
                }
                out.pop();
            }
        }
        false
    }
    fn maps(
        c: &Collection,
        f: &Graph,
        edges: &[(usize, usize)],
        map: &mut Vec<usize>,
    ) -> Option<(Vec<usize>, Vec<usize>)> {
        if map.len() == f.n() {
            let img: Vec<(usize, usize)> = edges.iter().map(|&(x, y)| (map[x], map[y])).collect();
            let mut cmap = Vec::new();
            return colours(c, &img, 0, 0, &mut cmap).then(|| (map.clone(), cmap));
        }
        for v in 0..c.n() {
            if !map.contains(&v) {
                map.push(v);
                if let Some(w) = maps(c, f, edges, map) {
                    return Some(w);
                }
                map.pop();
            }
        }
        None
    }
    maps(c, f, &edges, &mut Vec::new())
}

/// Rainbow matching of colours `0..p` picked greedily, if one exists that way.
fn greedy_prefix(c: &Collection, p: usize) -> Option<RainbowMatching> {
    let mut m = RainbowMatching::default();
    let mut used = 0u32;
    for i in 0..p {
        let (u, v) = c.graph(i).edges().find(|&(u, v)| used & (1 << u | 1 << v) == 0)?;
        used |= 1 << u | 1 << v;
        m.edges.push((u, v));
        m.colors.push(i);
    }
    Some(m)
}

proptest! {
    #![proptest_config(Config::with_cases(500))]

    #[test]
    fn canonical_form_is_relabeling_invariant(n in 1..=8usize, mask in any::<u64>(), seed in any::<u64>()) {
        let g = graph_from(n, mask);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(canonical_form(&g), canonical_form(&g.permuted(&perm)));
    }

    #[test]
    fn canonical_form_separates_classes(n in 1..=6usize, a in any::<u64>(), b in any::<u64>(), sparse in any::<bool>()) {
        // sparse masks make equal edge counts, the interesting case, common
        let (a, b) = if sparse { (a & b & 0x7fff, (a ^ b) & a & 0x7fff) } else { (a, b) };
        let g = graph_from(n, a);
        let h = graph_from(n, b);
        prop_assert_eq!(canonical_form(&g) == canonical_form(&h), isomorphic(&g, &h));
    }

    #[test]
    fn detection_matches_enumeration(c in arb_collection(6, 4), f in arb_pattern()) {
        let want = oracle(&c, &f);
        let got = find_rainbow_copy(&c, &f);
        prop_assert_eq!(has_rainbow_copy(&c, &f), want.is_some());
        match (got, want) {
            (None, None) => {}
            (Some(w), Some((vmap, cmap))) => {
                prop_assert!(w.verify(&c));
                prop_assert_eq!(w.vmap, vmap);
                prop_assert_eq!(w.cmap, cmap);
            }
            (got, want) => prop_assert!(false, "detector {:?} vs oracle {:?}", got, want),
        }
    }
}

proptest! {
    #![proptest_config(Config::with_cases(300))]

    /// The edge-count and big-matching conditions certify strong colours
    /// whenever the edge bound is meaningful (`2s <= n`).
    #[test]
    fn sound_sufficient_conditions_imply_strong(
        c in arb_dense(4..=9, 2..=4, 6),
        s in 1..=2usize,
        i in 0..4usize,
    ) {
        prop_assume!(2 * s <= c.n() && i < c.t());
        let ev = strong_color_sufficient(&c, i, s).unwrap();
        if matches!(ev, StrongColorEvidence::ByEdgeCount | StrongColorEvidence::ByBigMatching) {
            prop_assert!(strong_color_exact(&c, i, s).unwrap(), "{:?}", ev);
        }
    }

    #[test]
    fn greedy_from_degrees_succeeds_under_precondition(c in arb_dense(6..=14, 3..=4, 6), q in 1..=3usize) {
        let holds = (0..q).all(|i| {
            let g = c.graph(i);
            (0..c.n()).filter(|&v| g.degree(v) + 1 >= 2 * q).count() > i
        });
        match greedy_from_degrees(&c, q) {
            Ok(m) => {
                prop_assert!(holds);
                prop_assert!(m.verify(&c));
                prop_assert_eq!(m.size(), q);
            }
            Err(_) => prop_assert!(!holds),
        }
    }

    #[test]
    fn greedy_extend_succeeds_under_precondition(
        c in arb_dense(8..=14, 3..=4, 5),
        q in 1..=3usize,
        p in 0..=3usize,
        shift in 0..14usize,
    ) {
        let p = p.min(q);
        let Some(m0) = greedy_prefix(&c, p) else { return Ok(()) };
        let mut taken = m0.vertex_set();
        let mut centers = Vec::new();
        for i in p..q {
            let g = c.graph(i);
            let pick = (0..c.n())
                .map(|k| (k + shift) % c.n())
                .find(|&v| taken >> v & 1 == 0 && g.degree(v) + 1 >= 2 * q);
            let Some(v) = pick else { return Ok(()) };
            taken |= 1 << v;
            centers.push((i, v));
        }
        let m = greedy_extend(&c, &m0, &centers, q).unwrap();
        prop_assert!(m.verify(&c));
        prop_assert_eq!(m.size(), q);
        prop_assert_eq!(&m.edges[..p], &m0.edges[..]);
    }

    #[test]
    fn star_cover_output_is_valid(c in arb_collection(8, 5), v in 0..8usize, p in 1..=4usize) {
        prop_assume!(v < c.n());
        let out = star_cover(&c, v, p).unwrap();
        prop_assert!(out.verify(&c, v, p));
        // keep only the edges at v: every rainbow S_p left is centred there
        let at_v: Vec<Graph> = c
            .graphs()
            .iter()
            .map(|g| {
                let mut h = Graph::empty(c.n());
                for (a, b) in g.edges().filter(|&(a, b)| a == v || b == v) {
                    h.add_edge(a, b);
                }
                h
            })
            .collect();
        let exists = has_rainbow_copy(&Collection::from_graphs(at_v).unwrap(), &star(p).unwrap());
        prop_assert_eq!(matches!(out, StarCover::Witness(_)), exists);
    }

    #[test]
    fn m2_trichotomy_is_exhaustive(c in arb_collection(7, 4)) {
        prop_assume!(c.n() >= 4);
        let rainbow = has_rainbow_copy(&c, &matching(2).unwrap());
        let common = (0..c.n()).find(|&v| c.graphs().iter().all(|g| g.edges().all(|(a, b)| a == v || b == v)));
        let big: Vec<usize> = (0..c.t()).filter(|&i| c.graph(i).edge_count() > 4).collect();
        match m2_structure(&c).unwrap() {
            M2Structure::HasRainbowM2(w) => prop_assert!(rainbow && w.verify(&c)),
            M2Structure::CommonVertex(v) => {
                prop_assert!(!rainbow);
                prop_assert_eq!(common, Some(v));
            }
            M2Structure::AllButOneSmall(exempt) => {
                prop_assert!(!rainbow && common.is_none());
                prop_assert!(big.iter().all(|&i| Some(i) == exempt));
            }
        }
    }

    #[test]
    fn strong_colour_extends_maximum_matching(c in arb_collection(7, 4), s in 1..=2usize, i in 0..4usize) {
        prop_assume!(i < c.t());
        let others: Vec<Graph> = (0..c.t()).filter(|&j| j != i).map(|j| *c.graph(j)).collect();
        if others.is_empty() || !strong_color_exact(&c, i, s).unwrap() {
            return Ok(());
        }
        let rest = Collection::from_graphs(others).unwrap();
        if max_rainbow_matching(&rest).0 >= s {
            prop_assert!(max_rainbow_matching(&c).0 > s);
        }
    }
}

fn multiplicities(c: &Collection) -> Vec<usize> {
    pairs(c.n()).into_iter().map(|(u, v)| c.multiplicity(u, v)).collect()
}

proptest! {
    #![proptest_config(Config::with_cases(200))]

    #[test]
    fn nesting_preserves_multiplicities_and_freeness(c in arb_collection(6, 4), f in arb_pattern()) {
        let nested = nest_transform(&c);
        prop_assert!(nested.is_nested());
        prop_assert_eq!(multiplicities(&nested), multiplicities(&c));
        let fam = PatternFamily::single(f);
        if is_rainbow_free(&c, &fam) {
            prop_assert!(is_rainbow_free(&nested, &fam));
        }
    }
}
