//! Exact Turán numbers by generating `F`-free graph classes.

use alloc::vec::Vec;

use super::{binom2, generate::graph_classes, SearchError, Shared, DEFAULT_BUDGET};
use crate::embed::PreparedPattern;
use crate::family::PatternFamily;
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TuranResult {
    pub value: u64,
    /// An extremal graph; `None` when every graph on `n` vertices contains a
    /// member (an edgeless member fits).
    pub witness: Option<Graph>,
    pub nodes: u64,
}

/// `ex(n, F)`.
pub fn turan_exact(n: usize, f: &Graph) -> Result<u64, SearchError> {
    turan_exact_with(n, &PatternFamily::single(*f), DEFAULT_BUDGET).map(|r| r.value)
}

/// `ex(n, fam)` with an explicit node budget.
pub fn turan_exact_with(n: usize, fam: &PatternFamily, budget: u64) -> Result<TuranResult, SearchError> {
    let shared = Shared::new(budget);
    let result = turan_shared(n, fam, &shared)?;
    Ok(result)
}

pub(crate) fn turan_shared(n: usize, fam: &PatternFamily, shared: &Shared) -> Result<TuranResult, SearchError> {
    if n > super::MAX_SEARCH_VERTICES {
        return Err(SearchError::TooManyVertices {
            n,
            limit: super::MAX_SEARCH_VERTICES,
        });
    }
    // With at least |V(F)| vertices available, containing F is the same as
    // containing F without its isolated vertices.
    let mut cores: Vec<PreparedPattern> = Vec::new();
    for f in fam.iter().filter(|f| f.n() <= n) {
        if f.edge_count() == 0 {
            return Ok(TuranResult {
                value: 0,
                witness: None,
                nodes: shared.nodes(),
            });
        }
        cores.push(PreparedPattern::new(f.induced(f.touched())));
    }
    let free = |g: &Graph| !cores.iter().any(|p| p.contained_in(g));
    let lower = lower_bound(n, &free);
    let hereditary = |g: &Graph, v: usize| !cores.iter().any(|p| p.contained_through_vertex(g, v));
    let classes = graph_classes(n, lower.edge_count(), &hereditary, shared)?;
    let mut best = lower;
    for g in classes {
        if g.edge_count() > best.edge_count() {
            best = g;
        }
    }
    Ok(TuranResult {
        value: best.edge_count() as u64,
        witness: Some(best),
        nodes: shared.nodes(),
    })
}

/// Densest free graph among complete multipartite balanced graphs and the
/// lexicographic greedy graph.
fn lower_bound(n: usize, free: &dyn Fn(&Graph) -> bool) -> Graph {
    let mut best = Graph::empty(n);
    for parts in 1..=n.max(1) {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if u % parts != v % parts {
                    g.add_edge(u, v);
                }
            }
        }
        if g.edge_count() > best.edge_count() && free(&g) {
            best = g;
        }
    }
    let mut greedy = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            greedy.add_edge(u, v);
            if !free(&greedy) {
                greedy.remove_edge(u, v);
            }
        }
    }
    if greedy.edge_count() > best.edge_count() {
        best = greedy;
    }
    debug_assert!(best.edge_count() <= binom2(n));
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::parse_pattern;

    fn ex(n: usize, f: &str) -> u64 {
        turan_exact(n, &parse_pattern(f).unwrap()).unwrap()
    }

    /// Max edges over all labelled graphs on `n` vertices avoiding `f`.
    fn brute(n: usize, f: &Graph) -> u64 {
        let pairs = super::super::pair_list(n);
        let p = PreparedPattern::new(*f);
        let mut best = 0;
        for mask in 0u32..(1 << pairs.len()) {
            if mask.count_ones() as u64 <= best {
                continue;
            }
            let mut g = Graph::empty(n);
            for (i, &(u, v)) in pairs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    g.add_edge(u as usize, v as usize);
                }
            }
            if !p.contained_in(&g) {
                best = mask.count_ones() as u64;
            }
        }
        best
    }

    #[test]
    fn small_values() {
        assert_eq!(ex(5, "K3"), 6);
        assert_eq!(ex(4, "M2"), 3);
        for n in 0..7 {
            assert_eq!(ex(n, "K2"), 0);
        }
        assert_eq!(ex(8, "K3"), 16);
        assert_eq!(ex(7, "K4"), 16);
        assert_eq!(ex(9, "K2,2"), 13);
    }

    #[test]
    fn agrees_with_brute_force() {
        for f in ["K3", "M2", "P3", "S3", "K2,2", "P4", "K1,3"] {
            let g = parse_pattern(f).unwrap();
            for n in 1..=6 {
                assert_eq!(ex(n, f), brute(n, &g), "ex({n}, {f})");
            }
        }
    }

    #[test]
    fn isolated_vertices_only_matter_for_room() {
        let k2_k1 = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(turan_exact(2, &k2_k1).unwrap(), 1);
        assert_eq!(turan_exact(3, &k2_k1).unwrap(), 0);
        let r = turan_exact_with(3, &PatternFamily::parse("{E3}").unwrap(), 1000).unwrap();
        assert_eq!((r.value, r.witness), (0, None));
    }

    #[test]
    fn witness_is_free_and_extremal() {
        let k3 = parse_pattern("K3").unwrap();
        let r = turan_exact_with(7, &PatternFamily::single(k3), u64::MAX).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(w.edge_count() as u64, r.value);
        assert!(!PreparedPattern::new(k3).contained_in(&w));
    }
}
