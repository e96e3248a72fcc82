//! Canonical labeling by individualization and refinement.
//!
//! The search tree is built from an isomorphism-invariant refinement, so the
//! minimum relabeled adjacency over its leaves is a complete invariant.
//! Automorphisms found at leaves prune sibling branches (orbit pruning) and,
//! when they map onto the first leaf, cut the current subtree entirely.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{bit, Bits, Graph, MAX_VERTICES};

/// Byte string that is equal for two graphs iff they are isomorphic.
///
/// Layout: the vertex count, then the upper triangle of the canonical
/// adjacency matrix packed row-major, least significant bit first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalLabel(Vec<u8>);

impl CanonicalLabel {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

/// Canonical label of `g`.
pub fn canonical_form(g: &Graph) -> CanonicalLabel {
    label_of(&canonical_labeling(g).0)
}

/// Returns the canonical relabeling of `g` together with the permutation
/// `perm` (vertex `v` of `g` becomes `perm[v]`).
pub fn canonical_labeling(g: &Graph) -> (Graph, Vec<usize>) {
    let n = g.n();
    if n <= 1 {
        return (*g, (0..n).collect());
    }
    let mut s = Search {
        g,
        n,
        first: None,
        best: None,
        autos: Vec::new(),
    };
    let mut path = Vec::new();
    s.descend(vec![g.vertices()], &mut path);
    let best = s.best.expect("search visits at least one leaf");
    let canon = Graph::from_rows(&best.rows[..n]).expect("permuted graph is simple");
    (canon, best.perm)
}

pub(crate) fn label_of(g: &Graph) -> CanonicalLabel {
    let n = g.n();
    let mut bytes = vec![n as u8];
    let mut acc = 0u8;
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            if g.has_edge(u, v) {
                acc |= 1 << k;
            }
            k += 1;
            if k == 8 {
                bytes.push(acc);
                acc = 0;
                k = 0;
            }
        }
    }
    if k > 0 {
        bytes.push(acc);
    }
    CanonicalLabel(bytes)
}

/// Splits cells by neighbour counts into each other cell until equitable.
/// New cells are ordered by count, which keeps the result label-invariant.
pub(crate) fn refine(g: &Graph, cells: &mut Vec<u32>) {
    'restart: loop {
        for wi in 0..cells.len() {
            let w = cells[wi];
            for xi in 0..cells.len() {
                let x = cells[xi];
                if x.count_ones() < 2 {
                    continue;
                }
                let mut counts = [0u32; MAX_VERTICES + 1];
                let mut lo = u32::MAX;
                let mut hi = 0;
                for v in Bits(x) {
                    let c = (g.row(v) & w).count_ones();
                    counts[c as usize] |= bit(v);
                    lo = lo.min(c);
                    hi = hi.max(c);
                }
                if lo == hi {
                    continue;
                }
                let parts: Vec<u32> = counts[lo as usize..=hi as usize]
                    .iter()
                    .copied()
                    .filter(|&m| m != 0)
                    .collect();
                cells.splice(xi..=xi, parts);
                continue 'restart;
            }
        }
        return;
    }
}

#[derive(Clone)]
struct Leaf {
    rows: [u32; MAX_VERTICES],
    perm: Vec<usize>,
    inv: Vec<usize>,
    path: Vec<usize>,
}

struct Search<'a> {
    g: &'a Graph,
    n: usize,
    first: Option<Leaf>,
    best: Option<Leaf>,
    autos: Vec<Vec<u8>>,
}

impl Search<'_> {
    /// Returns `Some(level)` to abandon every node deeper than `level`.
    fn descend(&mut self, mut cells: Vec<u32>, path: &mut Vec<usize>) -> Option<usize> {
        refine(self.g, &mut cells);
        let Some(ti) = cells.iter().position(|c| c.count_ones() > 1) else {
            return self.leaf(&cells, path);
        };
        let target = cells[ti];
        let depth = path.len();
        let mut explored: Vec<usize> = Vec::new();
        for v in Bits(target) {
            if !explored.is_empty() && self.equivalent_to_explored(path, &explored, v) {
                continue;
            }
            explored.push(v);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..ti]);
            child.push(bit(v));
            child.push(target & !bit(v));
            child.extend_from_slice(&cells[ti + 1..]);
            path.push(v);
            let jump = self.descend(child, path);
            path.pop();
            if let Some(level) = jump {
                if level < depth {
                    return Some(level);
                }
            }
        }
        None
    }

    fn equivalent_to_explored(&self, path: &[usize], explored: &[usize], v: usize) -> bool {
        let mut parent: [u8; MAX_VERTICES] = core::array::from_fn(|i| i as u8);
        fn find(p: &mut [u8; MAX_VERTICES], mut x: usize) -> usize {
            while p[x] as usize != x {
                p[x] = p[p[x] as usize];
                x = p[x] as usize;
            }
            x
        }
        let mut any = false;
        for a in &self.autos {
            if path.iter().any(|&p| a[p] as usize != p) {
                continue;
            }
            any = true;
            for (x, &ax) in a.iter().enumerate().take(self.n) {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, ax as usize));
                if rx != ry {
                    parent[rx] = ry as u8;
                }
            }
        }
        if !any {
            return false;
        }
        let rv = find(&mut parent, v);
        explored.iter().any(|&u| find(&mut parent, u) == rv)
    }

    fn leaf(&mut self, cells: &[u32], path: &[usize]) -> Option<usize> {
        let n = self.n;
        let mut perm = vec![0usize; n];
        let mut inv = vec![0usize; n];
        for (pos, c) in cells.iter().enumerate() {
            let v = c.trailing_zeros() as usize;
            perm[v] = pos;
            inv[pos] = v;
        }
        let mut rows = [0u32; MAX_VERTICES];
        for u in 0..n {
            let mut r = 0;
            for w in Bits(self.g.row(u)) {
                r |= bit(perm[w]);
            }
            rows[perm[u]] = r;
        }
        let Some(first) = &self.first else {
            let leaf = Leaf {
                rows,
                perm,
                inv,
                path: path.to_vec(),
            };
            self.best = Some(leaf.clone());
            self.first = Some(leaf);
            return None;
        };
        if rows[..n] == first.rows[..n] {
            let auto: Vec<u8> = (0..n).map(|v| first.inv[perm[v]] as u8).collect();
            let common = path
                .iter()
                .zip(&first.path)
                .take_while(|(a, b)| a == b)
                .count();
            self.autos.push(auto);
            return Some(common);
        }
        let best = self.best.as_ref().expect("best set with first");
        match rows[..n].cmp(&best.rows[..n]) {
            core::cmp::Ordering::Equal => {
                let auto: Vec<u8> = (0..n).map(|v| best.inv[perm[v]] as u8).collect();
                self.autos.push(auto);
            }
            core::cmp::Ordering::Less => {
                self.best = Some(Leaf {
                    rows,
                    perm,
                    inv,
                    path: path.to_vec(),
                });
            }
            core::cmp::Ordering::Greater => {}
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::parse_pattern;

    #[test]
    fn triangle_labelings_agree() {
        let a = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let b = Graph::from_edges(3, &[(2, 1), (0, 2), (1, 0)]).unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&b));
    }

    #[test]
    fn relabeled_paths_agree() {
        let a = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let b = Graph::from_edges(3, &[(1, 0), (0, 2)]).unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&b));
    }

    #[test]
    fn triangle_differs_from_path() {
        let k3 = parse_pattern("K3").unwrap();
        let p3 = parse_pattern("P3").unwrap();
        assert_ne!(canonical_form(&k3), canonical_form(&p3));
    }

    #[test]
    fn symmetric_graphs_finish() {
        // would be 30! leaves without automorphism pruning
        for g in [Graph::empty(30), Graph::complete(30).unwrap(), parse_pattern("M15").unwrap()] {
            let (c, perm) = canonical_labeling(&g);
            assert_eq!(g.permuted(&perm), c);
        }
    }

    #[test]
    fn petersen_vs_relabel() {
        let outer: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        let inner: Vec<(usize, usize)> = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5)).collect();
        let spokes: Vec<(usize, usize)> = (0..5).map(|i| (i, i + 5)).collect();
        let edges: Vec<_> = outer.into_iter().chain(inner).chain(spokes).collect();
        let g = Graph::from_edges(10, &edges).unwrap();
        let perm = [3, 7, 1, 9, 0, 4, 8, 2, 6, 5];
        assert_eq!(canonical_form(&g), canonical_form(&g.permuted(&perm)));
    }

    #[test]
    fn label_layout() {
        assert_eq!(canonical_form(&Graph::empty(0)).as_bytes(), [0]);
        assert_eq!(canonical_form(&Graph::complete(2).unwrap()).as_bytes(), [2, 1]);
    }
}
