//! Isomorphism classes of graphs by vertex extension.
//!
//! Every graph on `k + 1` vertices arises from one on `k` vertices by adding
//! a vertex, so extending each class by every neighbourhood and keeping one
//! representative per canonical label visits every class. Hereditary
//! properties can be enforced at each level; so can edge-density floors,
//! because deleting a minimum-degree vertex keeps at least a
//! `C(k-1,2)/C(k,2)` fraction of the edges.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{binom2, Counter, SearchError, Shared, MAX_SEARCH_VERTICES};
use crate::canon::{canonical_labeling, label_of, CanonicalLabel};
use crate::graph::{bit, Bits, Graph};

/// Canonical representatives of all graphs on `n` vertices with at least
/// `min_edges` edges whose every induced chain (in some vertex order) passes
/// `hereditary(g, new_vertex)`. Sorted by canonical label.
pub fn graph_classes(
    n: usize,
    min_edges: usize,
    hereditary: &dyn Fn(&Graph, usize) -> bool,
    shared: &Shared,
) -> Result<Vec<Graph>, SearchError> {
    if n > MAX_SEARCH_VERTICES {
        return Err(SearchError::TooManyVertices {
            n,
            limit: MAX_SEARCH_VERTICES,
        });
    }
    if n == 0 {
        return Ok(alloc::vec![Graph::empty(0)]);
    }
    let floor = |g: &Graph, k: usize| g.edge_count() * binom2(n) >= min_edges * binom2(k);
    let mut counter = Counter::new(shared);
    let mut level: Vec<Graph> = alloc::vec![Graph::empty(1)];
    for k in 1..n {
        let mut next: BTreeMap<CanonicalLabel, Graph> = BTreeMap::new();
        for g in &level {
            for nbrs in 0..(1u32 << k) {
                if counter.tick() {
                    return Err(SearchError::BudgetExceeded {
                        nodes: shared.nodes(),
                    });
                }
                let mut rows = [0u32; MAX_SEARCH_VERTICES];
                rows[..k].copy_from_slice(g.rows());
                for w in Bits(nbrs) {
                    rows[w] |= bit(k);
                }
                rows[k] = nbrs;
                let h = Graph::from_rows(&rows[..=k]).expect("extension is simple");
                if !floor(&h, k + 1) || !hereditary(&h, k) {
                    continue;
                }
                let (canon, _) = canonical_labeling(&h);
                next.entry(label_of(&canon)).or_insert(canon);
            }
        }
        level = next.into_values().collect();
    }
    Ok(level)
}

/// Number of graphs on `n` labelled vertices isomorphic to `g`, i.e.
/// `n! / |Aut(g)|`. Test support for class-count checks.
#[cfg(test)]
pub(crate) fn orbit_size(g: &Graph) -> u64 {
    let n = g.n();
    let mut autos = 0u64;
    let mut perm: Vec<usize> = (0..n).collect();
    fn go(g: &Graph, k: usize, perm: &mut Vec<usize>, used: u32, autos: &mut u64) {
        let n = g.n();
        if k == n {
            *autos += 1;
            return;
        }
        for x in 0..n {
            if used & bit(x) != 0 {
                continue;
            }
            perm[k] = x;
            if (0..k).all(|j| g.has_edge(j, k) == g.has_edge(perm[j], x)) {
                go(g, k + 1, perm, used | bit(x), autos);
            }
        }
    }
    go(g, 0, &mut perm, 0, &mut autos);
    (1..=n as u64).product::<u64>() / autos
}
