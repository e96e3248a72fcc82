//! Small simple graphs stored as bit-mask adjacency rows.

use alloc::vec::Vec;
use core::fmt;

/// Largest supported vertex count; one adjacency row fits in a `u32`.
pub const MAX_VERTICES: usize = 30;

/// A set of vertices as a bit mask over indices `0..MAX_VERTICES`.
pub type VertexSet = u32;

#[inline]
pub(crate) const fn bit(v: usize) -> u32 {
    1u32 << v
}

/// Mask with the lowest `n` bits set.
#[inline]
pub const fn low_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Iterates the set bits of a mask in increasing order.
#[derive(Clone, Copy, Debug)]
pub struct Bits(pub u32);

impl Iterator for Bits {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let v = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(v)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphError {
    TooManyVertices(usize),
    VertexOutOfRange { vertex: usize, n: usize },
    Loop(usize),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::TooManyVertices(n) => {
                write!(f, "{n} vertices exceeds the limit of {MAX_VERTICES}")
            }
            GraphError::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {vertex} out of range for {n} vertices")
            }
            GraphError::Loop(v) => write!(f, "loop at vertex {v}"),
        }
    }
}

/// A simple undirected graph on vertices `0..n`, `n <= 30`.
///
/// Rows at index `n` and above are always zero, as are bits at index `n`
/// and above, so the derived comparisons are structural.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: u8,
    adj: [u32; MAX_VERTICES],
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(Graph {
            n: n as u8,
            adj: [0; MAX_VERTICES],
        })
    }

    /// Edgeless graph; panics if `n > MAX_VERTICES`.
    pub fn empty(n: usize) -> Self {
        Self::new(n).expect("vertex count within limit")
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::new(n)?;
        for &(u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds a graph from raw rows, validating symmetry and range.
    pub fn from_rows(rows: &[u32]) -> Result<Self, GraphError> {
        let n = rows.len();
        let mut g = Self::new(n)?;
        for (u, &row) in rows.iter().enumerate() {
            for v in Bits(row) {
                g.try_add_edge(u, v)?;
            }
        }
        Ok(g)
    }

    pub fn complete(k: usize) -> Result<Self, GraphError> {
        let mut g = Self::new(k)?;
        for u in 0..k {
            g.adj[u] = low_mask(k) & !bit(u);
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        low_mask(self.n())
    }

    #[inline]
    pub fn row(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    #[inline]
    pub fn rows(&self) -> &[u32] {
        &self.adj[..self.n()]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.adj[u] & bit(v) != 0
    }

    pub fn try_add_edge(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        let n = self.n();
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n });
            }
        }
        if u == v {
            return Err(GraphError::Loop(u));
        }
        let fresh = self.adj[u] & bit(v) == 0;
        self.adj[u] |= bit(v);
        self.adj[v] |= bit(u);
        Ok(fresh)
    }

    /// Adds `uv`; panics on loops or out-of-range vertices.
    #[inline]
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n() && v < self.n(), "invalid edge {u}-{v}");
        self.adj[u] |= bit(v);
        self.adj[v] |= bit(u);
    }

    #[inline]
    pub fn remove_edge(&mut self, u: usize, v: usize) {
        if u < self.n() && v < self.n() {
            self.adj[u] &= !bit(v);
            self.adj[v] &= !bit(u);
        }
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.rows().iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| Bits(self.adj[u] & !low_mask(u + 1)).map(move |v| (u, v)))
    }

    pub fn edge_vec(&self) -> Vec<(usize, usize)> {
        self.edges().collect()
    }

    /// Vertices of degree zero.
    pub fn isolated(&self) -> VertexSet {
        (0..self.n())
            .filter(|&v| self.adj[v] == 0)
            .fold(0, |m, v| m | bit(v))
    }

    /// Vertices touched by at least one edge.
    pub fn touched(&self) -> VertexSet {
        self.vertices() & !self.isolated()
    }

    /// Relabels by `perm`, mapping vertex `v` to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        debug_assert_eq!(perm.len(), self.n());
        let mut g = Graph::empty(self.n());
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    /// The subgraph induced on `keep`, compacted to vertices `0..|keep|` in
    /// increasing original order.
    pub fn induced(&self, keep: VertexSet) -> Graph {
        let keep = keep & self.vertices();
        let mut index = [usize::MAX; MAX_VERTICES];
        for (i, v) in Bits(keep).enumerate() {
            index[v] = i;
        }
        let mut g = Graph::empty(keep.count_ones() as usize);
        for (u, v) in self.edges() {
            if keep & bit(u) != 0 && keep & bit(v) != 0 {
                g.add_edge(index[u], index[v]);
            }
        }
        g
    }

    /// Disjoint union, `other` relabeled after `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let off = self.n();
        let mut g = Graph::new(off + other.n())?;
        for (u, v) in self.edges() {
            g.add_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.add_edge(u + off, v + off);
        }
        Ok(g)
    }

    /// Connected components as vertex masks, ordered by smallest vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = 0u32;
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen & bit(s) != 0 {
                continue;
            }
            let mut comp = bit(s);
            let mut frontier = bit(s);
            while frontier != 0 {
                let mut next = 0;
                for v in Bits(frontier) {
                    next |= self.adj[v];
                }
                frontier = next & !comp;
                comp |= next;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    /// True if `set` contains no edge.
    pub fn is_independent(&self, set: VertexSet) -> bool {
        Bits(set).all(|v| self.adj[v] & set == 0)
    }

    /// True if `set` meets every edge.
    pub fn is_cover(&self, set: VertexSet) -> bool {
        self.is_independent(self.vertices() & !set)
    }

    /// Size of a maximum matching, by exhaustive branching (n <= 30).
    pub fn matching_number(&self) -> usize {
        fn go(g: &Graph, avail: u32) -> usize {
            // lowest available vertex with an available neighbour
            let mut rest = avail;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let nb = g.adj[v] & avail;
                if nb == 0 {
                    continue;
                }
                let without_v = avail & !bit(v);
                let mut best = go(g, without_v);
                for u in Bits(nb) {
                    best = best.max(1 + go(g, without_v & !bit(u)));
                }
                return best;
            }
            0
        }
        go(self, self.vertices())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}; ", self.n)?;
        let mut first = true;
        for (u, v) in self.edges() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{u}-{v}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
