//! The acceptance criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p rturan --test acceptance -- --nocapture` to see
//! the lines. The test fails if any criterion fails other than those listed
//! in `KNOWN_FAILURES`, each of which is a refuted claim rather than a
//! defect of the implementation.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rturan_core::collection::{nest_transform, Collection, RainbowMatching};
use rturan_core::constructions::{construct, ConstructionError, ConstructionId, Params};
use rturan_core::detect::{find_rainbow_copy, is_rainbow_free};
use rturan_core::family::PatternFamily;
use rturan_core::graph::Graph;
use rturan_core::lemmas::{
    greedy_extend, greedy_from_degrees, star_cover, strong_color_exact, strong_color_sufficient, StrongColorEvidence,
};
use rturan_core::pattern::parse_pattern;
use rturan_core::search::{extremal_min, extremal_prod, extremal_sum, turan_exact};

/// Criteria expected to fail, with the reason.
const KNOWN_FAILURES: &[(usize, &str)] = &[
    (1, "M3 has 6 vertices, so on 5 vertices every collection is free and the value is 10, not 7"),
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn fam(spec: &str) -> PatternFamily {
    PatternFamily::parse(spec).unwrap()
}

fn criterion_1() -> Outcome {
    let grid = [((4, 1, 2), 3), ((4, 1, 3), 3), ((5, 1, 2), 4), ((5, 2, 3), 7)];
    let mut pass = true;
    let mut parts = Vec::new();
    for ((n, s, t), want) in grid {
        let got = extremal_min(n, t, &fam(&format!("{{M{}}}", s + 1))).unwrap().value;
        let formula = (s * (n - s) + s * (s - 1) / 2) as u64;
        assert_eq!(formula, want, "formula arithmetic");
        pass &= got == want;
        parts.push(format!("({n},{s},{t})={got}/{want}"));
    }
    let boundary = extremal_min(3, 2, &fam("{M2}")).unwrap().value;
    parts.push(format!("boundary (3,1,2)={boundary} vs formula 2"));
    Outcome {
        pass,
        detail: parts.join(" "),
    }
}

fn criterion_2() -> Outcome {
    let got: Vec<u64> = [4u64, 5].iter().map(|&n| extremal_sum(n as usize, 3, &fam("{K3}")).unwrap().value).collect();
    Outcome {
        pass: got == [12, 20],
        detail: format!("n=4: {} n=5: {} (want 12, 20)", got[0], got[1]),
    }
}

fn criterion_3() -> Outcome {
    let got = extremal_min(4, 3, &fam("{K3,M2}")).unwrap().value;
    Outcome {
        pass: got == 3,
        detail: format!("ex_3(4,{{K3,M2}}) = {got} (want 3)"),
    }
}

fn criterion_4() -> Outcome {
    let a = extremal_prod(4, 2, &fam("{M2}")).unwrap().value;
    let b = extremal_prod(4, 3, &fam("{M2}")).unwrap().value;
    Outcome {
        pass: (a, b) == (9, 27),
        detail: format!("t=2: {a} t=3: {b} (want 9, 27)"),
    }
}

fn criterion_5() -> Outcome {
    let got = extremal_sum(5, 2, &fam("{P3}")).unwrap().value;
    Outcome {
        pass: got == 10,
        detail: format!("{got} (want 10)"),
    }
}

fn certify(id: ConstructionId, p: &Params, bad: &mut Vec<String>) -> bool {
    match construct(id, p) {
        Ok(b) => {
            let ok = is_rainbow_free(&b.collection, &b.forbidden) && b.collection.edge_counts() == b.expected_edges;
            if !ok {
                bad.push(format!("{id} {p:?}"));
            }
            true
        }
        Err(ConstructionError::GuardViolated(_)) => false,
        Err(e) => {
            bad.push(format!("{id}: {e}"));
            false
        }
    }
}

fn criterion_6() -> Outcome {
    use ConstructionId::*;
    let mut bad = Vec::new();
    let mut built = std::collections::BTreeMap::<ConstructionId, usize>::new();
    let mut note = |id: ConstructionId, ok: bool| {
        if ok {
            *built.entry(id).or_default() += 1;
        }
    };
    let patterns: Vec<Graph> = ["K3", "K4", "P3", "P4", "K2,2", "K3,3", "S3", "M2", "S2+1M"]
        .iter()
        .map(|f| parse_pattern(f).unwrap())
        .collect();
    for n in 2..=12 {
        for t in 1..=5 {
            for s in 1..=3 {
                for r in 2..=4 {
                    for m in 1..=2 {
                        let p = Params::new().n(n).t(t).s(s).r(r).m(m);
                        for id in [ProdStarGt, ProdStarEq, ProdStarLt, ProdSmStarClique, ProdSmMixed, ProdSmBigstar] {
                            note(id, certify(id, &p, &mut bad));
                        }
                        if r == 2 {
                            note(ProdStar2, certify(ProdStar2, &p, &mut bad));
                        }
                    }
                }
                note(ProdMatching, certify(ProdMatching, &Params::new().n(n).t(t).s(s), &mut bad));
                for p in 1..=s {
                    let q = Params::new().n(n).t(t).s(s).p(p);
                    note(MinIII, certify(MinIII, &q, &mut bad));
                    note(MinKppRemark, certify(MinKppRemark, &q, &mut bad));
                }
                for f in &patterns {
                    let q = Params::new().n(n).t(t).s(s).f(*f);
                    // the inner searches are exact, keep them small
                    if n <= 9 {
                        for id in [MinI, MinII, MinIV] {
                            note(id, certify(id, &q, &mut bad));
                        }
                    }
                    note(ProdCliqueStar, certify(ProdCliqueStar, &q, &mut bad));
                }
            }
            for f in &patterns {
                let q = Params::new().n(n).t(t).f(*f);
                note(SumCliques, certify(SumCliques, &q, &mut bad));
                if n <= 7 {
                    note(SumMonochromeExtremal, certify(SumMonochromeExtremal, &q, &mut bad));
                }
            }
        }
    }
    // no point of the grid satisfies the mixed case's guards (they need
    // t >= 5 and so n >= 15); certify it just outside
    for n in 15..=18 {
        for t in 5..=8 {
            note(ProdSmMixed, certify(ProdSmMixed, &Params::new().n(n).t(t).s(3).r(3).m(1), &mut bad));
        }
    }
    let counts: Vec<String> = ConstructionId::ALL
        .iter()
        .map(|id| format!("{id}:{}", built.get(id).copied().unwrap_or(0)))
        .collect();
    Outcome {
        pass: bad.is_empty(),
        detail: format!("{} bad; built {}", bad.len(), counts.join(" ")),
    }
}

fn random_collection(rng: &mut ChaCha8Rng, n: usize, t: usize, density: f64) -> Collection {
    let graphs = (0..t)
        .map(|_| {
            let mut g = Graph::empty(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(density) {
                        g.add_edge(u, v);
                    }
                }
            }
            g
        })
        .collect();
    Collection::from_graphs(graphs).unwrap()
}

fn random_pattern(rng: &mut ChaCha8Rng) -> Graph {
    let k = rng.gen_range(1..=5);
    let mut g = Graph::empty(k);
    let budget = rng.gen_range(0..=4);
    for _ in 0..8 {
        let (u, v) = (rng.gen_range(0..k), rng.gen_range(0..k));
        if u != v && g.edge_count() < budget {
            g.add_edge(u, v);
        }
    }
    g
}

/// First rainbow copy in lexicographic (vertex map, colour map) order by
/// plain enumeration.
fn enumerate_copy(c: &Collection, f: &Graph) -> Option<(Vec<usize>, Vec<usize>)> {
    let edges = f.edge_vec();
    let k = f.n();
    let mut map = vec![0usize; k];
    fn next_map(map: &mut [usize], n: usize, at: usize) -> bool {
        // odometer over all maps, injectivity filtered by the caller
        for i in (0..at).rev() {
            if map[i] + 1 < n {
                map[i] += 1;
                for x in map.iter_mut().skip(i + 1) {
                    *x = 0;
                }
                return true;
            }
        }
        false
    }
    if k > c.n() {
        return None;
    }
    loop {
        let injective = (0..k).all(|i| (0..i).all(|j| map[i] != map[j]));
        if injective {
            // colour maps in lexicographic order
            let e = edges.len();
            let mut cmap = vec![0usize; e];
            loop {
                let distinct = (0..e).all(|i| (0..i).all(|j| cmap[i] != cmap[j]));
                if distinct && edges.iter().zip(&cmap).all(|(&(x, y), &col)| c.graph(col).has_edge(map[x], map[y])) {
                    return Some((map.clone(), cmap));
                }
                if !next_map(&mut cmap, c.t(), e) {
                    break;
                }
            }
        }
        if !next_map(&mut map, c.n(), k) {
            return None;
        }
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut disagreements = 0;
    let mut found = 0;
    for _ in 0..500 {
        let n = rng.gen_range(1..=6);
        let t = rng.gen_range(1..=4);
        let density = rng.gen_range(0.1..0.9);
        let c = random_collection(&mut rng, n, t, density);
        let f = random_pattern(&mut rng);
        let want = enumerate_copy(&c, &f);
        let got = find_rainbow_copy(&c, &f).map(|w| (w.vmap, w.cmap));
        found += usize::from(want.is_some());
        disagreements += usize::from(got != want);
    }
    Outcome {
        pass: disagreements == 0,
        detail: format!("{disagreements} disagreements over 500 instances ({found} with a copy)"),
    }
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    // (a) sufficient condition implies exact strong colour
    let mut a_bad = std::collections::BTreeMap::<String, usize>::new();
    let mut a_certified = std::collections::BTreeMap::<String, usize>::new();
    for _ in 0..300 {
        let s = rng.gen_range(1..=2);
        let n = rng.gen_range(2 * s..=9);
        let t = rng.gen_range(2..=4);
        let density = rng.gen_range(0.2..0.9);
        let c = random_collection(&mut rng, n, t, density);
        let i = rng.gen_range(0..t);
        let ev = strong_color_sufficient(&c, i, s).unwrap();
        if ev != StrongColorEvidence::Unknown {
            *a_certified.entry(format!("{ev:?}")).or_default() += 1;
            if !strong_color_exact(&c, i, s).unwrap() {
                *a_bad.entry(format!("{ev:?}")).or_default() += 1;
            }
        }
    }
    // (b) greedy lemmas succeed whenever their preconditions hold
    let mut b_bad = 0;
    let mut b_checked = 0;
    while b_checked < 300 {
        let n = rng.gen_range(6..=14);
        let q = rng.gen_range(1..=3);
        let t = rng.gen_range(q..=4);
        let density = rng.gen_range(0.4..0.95);
        let c = random_collection(&mut rng, n, t, density);
        if rng.gen_bool(0.5) {
            let holds =
                (0..q).all(|i| (0..n).filter(|&v| c.graph(i).degree(v) + 1 >= 2 * q).count() > i);
            if holds {
                b_checked += 1;
                match greedy_from_degrees(&c, q) {
                    Ok(m) if m.verify(&c) && m.size() == q => {}
                    _ => b_bad += 1,
                }
            }
        } else {
            let p = rng.gen_range(0..=q);
            let mut m0 = RainbowMatching::default();
            let mut used = 0u32;
            let mut ok = true;
            for i in 0..p {
                match c.graph(i).edges().find(|&(u, v)| used & (1 << u | 1 << v) == 0) {
                    Some((u, v)) => {
                        used |= 1 << u | 1 << v;
                        m0.edges.push((u, v));
                        m0.colors.push(i);
                    }
                    None => ok = false,
                }
            }
            let mut centers = Vec::new();
            for i in p..q {
                let pick = (0..n).find(|&v| used >> v & 1 == 0 && c.graph(i).degree(v) + 1 >= 2 * q);
                match pick {
                    Some(v) => {
                        used |= 1 << v;
                        centers.push((i, v));
                    }
                    None => ok = false,
                }
            }
            if ok {
                b_checked += 1;
                match greedy_extend(&c, &m0, &centers, q) {
                    Ok(m) if m.verify(&c) && m.size() == q => {}
                    _ => b_bad += 1,
                }
            }
        }
    }
    // (c) star cover invariant
    let mut c_bad = 0;
    for _ in 0..300 {
        let n = rng.gen_range(2..=8);
        let t = rng.gen_range(1..=5);
        let density = rng.gen_range(0.1..0.8);
        let c = random_collection(&mut rng, n, t, density);
        let v = rng.gen_range(0..n);
        let p = rng.gen_range(1..=4);
        if !star_cover(&c, v, p).unwrap().verify(&c, v, p) {
            c_bad += 1;
        }
    }
    // (d) nesting
    let mut d_bad = 0;
    for _ in 0..200 {
        let n = rng.gen_range(2..=6);
        let t = rng.gen_range(1..=4);
        let density = rng.gen_range(0.1..0.8);
        let c = random_collection(&mut rng, n, t, density);
        let f = PatternFamily::single(random_pattern(&mut rng));
        let nested = nest_transform(&c);
        let same = (0..n).all(|u| (u + 1..n).all(|v| nested.multiplicity(u, v) == c.multiplicity(u, v)));
        let free_kept = !is_rainbow_free(&c, &f) || is_rainbow_free(&nested, &f);
        if !(same && nested.is_nested() && free_kept) {
            d_bad += 1;
        }
    }
    let a_total: usize = a_bad.values().sum();
    Outcome {
        pass: a_total == 0 && b_bad == 0 && c_bad == 0 && d_bad == 0,
        detail: format!(
            "(a) {a_total} violations {a_bad:?} among certified {a_certified:?} (b) {b_bad} (c) {c_bad} (d) {d_bad}"
        ),
    }
}

fn criterion_9() -> Outcome {
    let lhs = extremal_sum(4, 3, &fam("{K3,M2}")).unwrap().value;
    let head = extremal_sum(4, 2, &fam("{M2}")).unwrap().value;
    let ex = turan_exact(4, &parse_pattern("K3").unwrap()).unwrap();
    Outcome {
        pass: lhs <= head + ex,
        detail: format!("{lhs} <= {head} + {ex}"),
    }
}

#[test]
fn acceptance() {
    let criteria: [(usize, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut unexpected = Vec::new();
    for (k, run) in criteria {
        let started = Instant::now();
        let o = run();
        let ms = started.elapsed().as_millis();
        println!("criterion {k}: {} ({ms} ms) {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        let known = KNOWN_FAILURES.iter().find(|(id, _)| *id == k);
        match (o.pass, known) {
            (false, Some((_, why))) => println!("  known failure: {why}"),
            (false, None) => unexpected.push(k),
            (true, Some(_)) => println!("  listed as a known failure but passed"),
            (true, None) => {}
        }
    }
    assert!(unexpected.is_empty(), "criteria failed unexpectedly: {unexpected:?}");
}
