//! Forbidden families and the derived families built from a single pattern.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::canon::{canonical_form, CanonicalLabel};
use crate::graph::{bit, Bits, Graph, VertexSet};
use crate::pattern::{parse_pattern_list, PatternError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyError {
    Empty,
    /// The operation needs a pattern with at least one edge.
    NoEdges,
    /// The covering bound `p` must be positive.
    ZeroCoverBound,
    /// An odd cycle, listed in cyclic order.
    NotBipartite { odd_cycle: Vec<usize> },
    Pattern(PatternError),
}

impl fmt::Display for FamilyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyError::Empty => write!(f, "a pattern family needs at least one member"),
            FamilyError::NoEdges => write!(f, "pattern has no edges"),
            FamilyError::ZeroCoverBound => write!(f, "covering size bound must be at least 1"),
            FamilyError::NotBipartite { odd_cycle } => {
                write!(f, "pattern is not bipartite (odd cycle {odd_cycle:?})")
            }
            FamilyError::Pattern(e) => e.fmt(f),
        }
    }
}

impl From<PatternError> for FamilyError {
    fn from(e: PatternError) -> Self {
        FamilyError::Pattern(e)
    }
}

/// A nonempty set of patterns, pairwise non-isomorphic.
///
/// Members are kept exactly as given, isolated vertices included, so an
/// edgeless member on `k` vertices is simply `E_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternFamily {
    members: Vec<Graph>,
}

impl PatternFamily {
    /// Builds a family, dropping later members isomorphic to earlier ones.
    pub fn new(graphs: impl IntoIterator<Item = Graph>) -> Result<Self, FamilyError> {
        let mut seen: BTreeSet<CanonicalLabel> = BTreeSet::new();
        let members: Vec<Graph> = graphs
            .into_iter()
            .filter(|g| seen.insert(canonical_form(g)))
            .collect();
        if members.is_empty() {
            return Err(FamilyError::Empty);
        }
        Ok(PatternFamily { members })
    }

    pub fn single(g: Graph) -> Self {
        PatternFamily { members: alloc::vec![g] }
    }

    /// Parses `"{K3,M2}"` or a bare pattern.
    pub fn parse(spec: &str) -> Result<Self, FamilyError> {
        Self::new(parse_pattern_list(spec)?)
    }

    pub fn members(&self) -> &[Graph] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Graph> {
        self.members.iter()
    }

    /// True if some member is isomorphic to `g`.
    pub fn contains_isomorphic(&self, g: &Graph) -> bool {
        let label = canonical_form(g);
        self.members.iter().any(|m| canonical_form(m) == label)
    }

    /// Union with another family, deduplicated.
    pub fn union(&self, other: &PatternFamily) -> PatternFamily {
        Self::new(self.members.iter().chain(other.members.iter()).copied())
            .expect("union of nonempty families is nonempty")
    }

    /// Smallest vertex count among edgeless members, if any.
    pub fn smallest_edgeless(&self) -> Option<usize> {
        self.members
            .iter()
            .filter(|m| m.edge_count() == 0)
            .map(|m| m.n())
            .min()
    }
}

impl<'a> IntoIterator for &'a PatternFamily {
    type Item = &'a Graph;
    type IntoIter = core::slice::Iter<'a, Graph>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// All graphs `F - I` for independent sets `I` of `F`, including `I = {}`.
pub fn family_deleted_independent(f: &Graph) -> Result<PatternFamily, FamilyError> {
    if f.edge_count() == 0 {
        return Err(FamilyError::NoEdges);
    }
    let mut out = Vec::new();
    // enumerate independent sets by branching on each vertex in order
    fn walk(f: &Graph, v: usize, chosen: VertexSet, forbidden: VertexSet, out: &mut Vec<Graph>) {
        if v == f.n() {
            out.push(f.induced(f.vertices() & !chosen));
            return;
        }
        walk(f, v + 1, chosen, forbidden, out);
        if forbidden & bit(v) == 0 {
            walk(f, v + 1, chosen | bit(v), forbidden | f.row(v), out);
        }
    }
    walk(f, 0, 0, 0, &mut out);
    PatternFamily::new(out)
}

/// The covering family: induced subgraphs `F[S]` over vertex covers `S`
/// with `|S| <= p`, or `{K_{p+1}}` when `F` has no such cover.
pub fn family_covering(f: &Graph, p: usize) -> Result<PatternFamily, FamilyError> {
    if p == 0 {
        return Err(FamilyError::ZeroCoverBound);
    }
    let mut out = Vec::new();
    fn walk(f: &Graph, start: usize, size_left: usize, set: VertexSet, out: &mut Vec<Graph>) {
        if f.is_cover(set) {
            out.push(f.induced(set));
        }
        if size_left == 0 {
            return;
        }
        for v in start..f.n() {
            walk(f, v + 1, size_left - 1, set | bit(v), out);
        }
    }
    walk(f, 0, p, 0, &mut out);
    if out.is_empty() {
        let clique = Graph::complete(p + 1).map_err(|e| FamilyError::Pattern(e.into()))?;
        return Ok(PatternFamily::single(clique));
    }
    PatternFamily::new(out)
}

/// Proper 2-colouring of `g` as the mask of colour-0 vertices, where each
/// component's smallest vertex receives colour 0.
pub fn two_coloring(g: &Graph) -> Result<VertexSet, FamilyError> {
    let n = g.n();
    let mut color = [u8::MAX; crate::graph::MAX_VERTICES];
    let mut parent = [usize::MAX; crate::graph::MAX_VERTICES];
    let mut depth = [0usize; crate::graph::MAX_VERTICES];
    for s in 0..n {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut queue = alloc::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for w in Bits(g.row(u)) {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[u];
                    parent[w] = u;
                    depth[w] = depth[u] + 1;
                    queue.push_back(w);
                } else if color[w] == color[u] {
                    return Err(FamilyError::NotBipartite {
                        odd_cycle: odd_cycle(u, w, &parent, &depth),
                    });
                }
            }
        }
    }
    Ok((0..n).filter(|&v| color[v] == 0).fold(0, |m, v| m | bit(v)))
}

fn odd_cycle(mut a: usize, mut b: usize, parent: &[usize], depth: &[usize]) -> Vec<usize> {
    let mut left = Vec::new();
    let mut right = Vec::new();
    while depth[a] > depth[b] {
        left.push(a);
        a = parent[a];
    }
    while depth[b] > depth[a] {
        right.push(b);
        b = parent[b];
    }
    while a != b {
        left.push(a);
        right.push(b);
        a = parent[a];
        b = parent[b];
    }
    left.push(a);
    left.extend(right.into_iter().rev());
    left
}

/// Smallest possible order of a colour class over all proper 2-colourings.
///
/// Each component may be flipped independently; the best combination is a
/// subset-sum over component side sizes.
pub fn bipartition_min_class(f: &Graph) -> Result<usize, FamilyError> {
    let side0 = two_coloring(f)?;
    let mut reachable: u64 = 1;
    for comp in f.components() {
        let a = (comp & side0).count_ones();
        let b = (comp & !side0).count_ones();
        reachable = (reachable << a) | (reachable << b);
    }
    let n = f.n();
    Ok((0..=n)
        .filter(|&x| reachable & (1u64 << x) != 0)
        .map(|x| x.min(n - x))
        .min()
        .expect("some split is reachable"))
}
