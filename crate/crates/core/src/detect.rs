//! Rainbow-copy detection and maximum rainbow matchings.

use alloc::vec::Vec;

use crate::collection::{colors_of, Collection, RainbowMatching, RainbowWitness};
use crate::embed::{Host, PreparedPattern};
use crate::family::PatternFamily;
use crate::graph::{bit, low_mask, Bits, Graph};

/// A rainbow copy of `f` in `c`, if any.
///
/// The witness is deterministic: the lexicographically smallest vertex map,
/// and for it the lexicographically smallest colour map.
pub fn find_rainbow_copy(c: &Collection, f: &Graph) -> Option<RainbowWitness> {
    let host = Host::from_collection(c);
    find_in_host(&host, &PreparedPattern::new(*f))
}

pub(crate) fn find_in_host(host: &Host, p: &PreparedPattern) -> Option<RainbowWitness> {
    p.first_witness(host).map(|(vmap, cmap)| RainbowWitness {
        pattern: *p.graph(),
        vmap,
        cmap,
    })
}

/// True if `c` has a rainbow copy of `f`.
pub fn has_rainbow_copy(c: &Collection, f: &Graph) -> bool {
    PreparedPattern::new(*f).rainbow_in(&Host::from_collection(c))
}

/// True if no member of `fam` has a rainbow copy in `c`.
pub fn is_rainbow_free(c: &Collection, fam: &PatternFamily) -> bool {
    FamilyMatcher::new(fam).is_free(&Host::from_collection(c))
}

/// The first member (in family order) with a rainbow copy, with its witness.
pub fn find_family_copy(c: &Collection, fam: &PatternFamily) -> Option<RainbowWitness> {
    let host = Host::from_collection(c);
    fam.iter()
        .find_map(|f| find_in_host(&host, &PreparedPattern::new(*f)))
}

/// A family with its patterns prepared once, for repeated queries.
#[derive(Clone, Debug)]
pub struct FamilyMatcher {
    patterns: Vec<PreparedPattern>,
}

impl FamilyMatcher {
    pub fn new(fam: &PatternFamily) -> Self {
        let mut patterns: Vec<PreparedPattern> =
            fam.iter().map(|f| PreparedPattern::new(*f)).collect();
        // cheap patterns first: fewer edges fail faster
        patterns.sort_by_key(|p| (p.edge_count(), p.graph().n()));
        FamilyMatcher { patterns }
    }

    pub fn patterns(&self) -> &[PreparedPattern] {
        &self.patterns
    }

    pub fn is_free(&self, host: &Host) -> bool {
        !self.patterns.iter().any(|p| p.rainbow_in(host))
    }

    /// True if some member has a rainbow copy through the pair `uv`, using
    /// `color` on that pair when given. Assumes the host without `uv` in
    /// that colour was free, so only copies through the pair can be new.
    pub fn has_copy_through(&self, host: &Host, u: usize, v: usize, color: Option<usize>) -> bool {
        self.patterns
            .iter()
            .any(|p| p.rainbow_through(host, u, v, color))
    }

    /// Smallest vertex count of an edgeless member, which rules out every
    /// collection with at least that many vertices.
    pub fn smallest_edgeless(&self) -> Option<usize> {
        self.patterns
            .iter()
            .filter(|p| p.edge_count() == 0)
            .map(|p| p.graph().n())
            .min()
    }
}

/// A maximum rainbow matching of `c`.
pub fn max_rainbow_matching(c: &Collection) -> (usize, RainbowMatching) {
    let graphs = c.graphs();
    let mut s = MatchSearch {
        graphs,
        best: Vec::new(),
        current: Vec::new(),
        limit: (c.n() / 2).min(c.t()),
    };
    let all_colors = if c.t() == 64 { u64::MAX } else { (1u64 << c.t()) - 1 };
    s.go(0, all_colors);
    let mut best = s.best;
    best.sort_unstable_by_key(|&(_, _, col)| col);
    let m = RainbowMatching {
        edges: best.iter().map(|&(u, v, _)| (u, v)).collect(),
        colors: best.iter().map(|&(_, _, col)| col).collect(),
    };
    (m.size(), m)
}

struct MatchSearch<'a> {
    graphs: &'a [Graph],
    best: Vec<(usize, usize, usize)>,
    current: Vec<(usize, usize, usize)>,
    limit: usize,
}

impl MatchSearch<'_> {
    fn go(&mut self, used: u32, colors: u64) {
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        if self.best.len() == self.limit {
            return;
        }
        // colours that still have an edge avoiding the used vertices
        let mut live = 0u64;
        let mut pick = None;
        let mut fewest = usize::MAX;
        let mut union_free = Graph::empty(0);
        let mut first = true;
        for col in colors_of(colors) {
            let g = &self.graphs[col];
            let count: usize = Bits(g.vertices() & !used)
                .map(|v| (g.row(v) & !used & !low_mask(v + 1)).count_ones() as usize)
                .sum();
            if count == 0 {
                continue;
            }
            live |= 1 << col;
            if count < fewest {
                fewest = count;
                pick = Some(col);
            }
            if first {
                union_free = Graph::empty(g.n());
                first = false;
            }
            for v in Bits(g.vertices() & !used) {
                for w in Bits(g.row(v) & !used & !low_mask(v + 1)) {
                    union_free.add_edge(v, w);
                }
            }
        }
        let Some(col) = pick else {
            return;
        };
        let bound = (live.count_ones() as usize).min(union_free.matching_number());
        if self.current.len() + bound <= self.best.len() {
            return;
        }
        let g = &self.graphs[col];
        for u in Bits(g.vertices() & !used) {
            for v in Bits(g.row(u) & !used & !low_mask(u + 1)) {
                self.current.push((u, v, col));
                self.go(used | bit(u) | bit(v), live & !(1 << col));
                self.current.pop();
                if self.best.len() == self.limit {
                    return;
                }
            }
        }
        self.go(used, live & !(1 << col));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::parse_pattern;

    #[test]
    fn empty_collection_has_no_edge() {
        let c = Collection::new(4, 3).unwrap();
        assert!(find_rainbow_copy(&c, &Graph::complete(2).unwrap()).is_none());
        assert_eq!(max_rainbow_matching(&c).0, 0);
    }

    #[test]
    fn triangle_cases() {
        let k3 = Graph::complete(3).unwrap();
        assert!(find_rainbow_copy(&Collection::repeated(k3, 1).unwrap(), &k3).is_none());
        let three = Collection::repeated(k3, 3).unwrap();
        let w = find_rainbow_copy(&three, &k3).unwrap();
        assert!(w.verify(&three));
        assert_eq!((w.vmap.as_slice(), w.cmap.as_slice()), (&[0, 1, 2][..], &[0, 1, 2][..]));
        let mut lopsided = Collection::new(3, 3).unwrap();
        for (u, v) in k3.edges() {
            lopsided.add_edge(0, u, v).unwrap();
        }
        assert!(find_rainbow_copy(&lopsided, &k3).is_none());
    }

    #[test]
    fn edgeless_patterns() {
        let c = Collection::new(3, 1).unwrap();
        assert!(find_rainbow_copy(&c, &Graph::empty(3)).is_some());
        assert!(find_rainbow_copy(&c, &Graph::empty(4)).is_none());
        assert!(!is_rainbow_free(&c, &PatternFamily::parse("{K3,E1}").unwrap()));
    }

    #[test]
    fn isolated_vertices_need_room() {
        // K2 plus an isolated vertex does not fit on two vertices
        let c = Collection::repeated(Graph::complete(2).unwrap(), 1).unwrap();
        let k2_plus = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(find_rainbow_copy(&c, &k2_plus).is_none());
        assert!(find_rainbow_copy(&c, &Graph::complete(2).unwrap()).is_some());
    }

    #[test]
    fn two_disjoint_colours() {
        let c = Collection::from_graphs(alloc::vec![
            Graph::from_edges(4, &[(0, 1)]).unwrap(),
            Graph::from_edges(4, &[(2, 3)]).unwrap(),
        ])
        .unwrap();
        let (size, m) = max_rainbow_matching(&c);
        assert_eq!(size, 2);
        assert!(m.verify(&c));
        assert!(has_rainbow_copy(&c, &parse_pattern("M2").unwrap()));
    }
}
