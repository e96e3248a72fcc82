//! Collections of graphs on a shared vertex set, and the certificates that
//! live on them.
//!
//! Colours are zero-based indices into the collection throughout the
//! library; the `.rcol` format and the CLI print them one-based.

use alloc::vec::Vec;
use core::fmt;

use crate::graph::{Graph, GraphError, MAX_VERTICES};

/// Largest supported colour count; a pair's colour set fits in a `u64`.
pub const MAX_COLORS: usize = 64;

pub type Color = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CollectionError {
    NoColors,
    TooManyColors(usize),
    NoVertices,
    VertexCountMismatch { color: Color, expected: usize, found: usize },
    ColorOutOfRange { color: Color, t: usize },
    Graph(GraphError),
}

impl fmt::Display for CollectionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CollectionError::NoColors => write!(f, "a collection needs at least one colour"),
            CollectionError::TooManyColors(t) => {
                write!(f, "{t} colours exceeds the limit of {MAX_COLORS}")
            }
            CollectionError::NoVertices => write!(f, "a collection needs at least one vertex"),
            CollectionError::VertexCountMismatch { color, expected, found } => write!(
                f,
                "colour {} has {found} vertices, expected {expected}",
                color + 1
            ),
            CollectionError::ColorOutOfRange { color, t } => {
                write!(f, "colour {} out of range 1..={t}", color + 1)
            }
            CollectionError::Graph(e) => e.fmt(f),
        }
    }
}

impl From<GraphError> for CollectionError {
    fn from(e: GraphError) -> Self {
        CollectionError::Graph(e)
    }
}

/// An ordered list of `t` graphs on the same `n` vertices; index `i` is
/// colour `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Collection {
    n: usize,
    graphs: Vec<Graph>,
}

impl Collection {
    /// `t` empty graphs on `n` vertices.
    pub fn new(n: usize, t: usize) -> Result<Self, CollectionError> {
        check_shape(n, t)?;
        Ok(Collection {
            n,
            graphs: alloc::vec![Graph::new(n)?; t],
        })
    }

    pub fn from_graphs(graphs: Vec<Graph>) -> Result<Self, CollectionError> {
        let n = graphs.first().map(Graph::n).ok_or(CollectionError::NoColors)?;
        check_shape(n, graphs.len())?;
        for (color, g) in graphs.iter().enumerate() {
            if g.n() != n {
                return Err(CollectionError::VertexCountMismatch {
                    color,
                    expected: n,
                    found: g.n(),
                });
            }
        }
        Ok(Collection { n, graphs })
    }

    /// `t` copies of `g`.
    pub fn repeated(g: Graph, t: usize) -> Result<Self, CollectionError> {
        check_shape(g.n(), t)?;
        Ok(Collection {
            n: g.n(),
            graphs: alloc::vec![g; t],
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn t(&self) -> usize {
        self.graphs.len()
    }

    #[inline]
    pub fn graph(&self, color: Color) -> &Graph {
        &self.graphs[color]
    }

    pub fn graphs(&self) -> &[Graph] {
        &self.graphs
    }

    pub fn into_graphs(self) -> Vec<Graph> {
        self.graphs
    }

    /// Adds `uv` to colour `color`; returns whether the edge was new.
    pub fn add_edge(&mut self, color: Color, u: usize, v: usize) -> Result<bool, CollectionError> {
        let t = self.t();
        self.graphs
            .get_mut(color)
            .ok_or(CollectionError::ColorOutOfRange { color, t })?
            .try_add_edge(u, v)
            .map_err(Into::into)
    }

    pub(crate) fn graph_mut(&mut self, color: Color) -> &mut Graph {
        &mut self.graphs[color]
    }

    pub fn edge_counts(&self) -> Vec<usize> {
        self.graphs.iter().map(Graph::edge_count).collect()
    }

    pub fn total_edges(&self) -> usize {
        self.graphs.iter().map(Graph::edge_count).sum()
    }

    /// Union of all colours.
    pub fn union(&self) -> Graph {
        let mut rows = [0u32; MAX_VERTICES];
        for g in &self.graphs {
            for (r, &x) in rows.iter_mut().zip(g.rows()) {
                *r |= x;
            }
        }
        Graph::from_rows(&rows[..self.n]).expect("union of simple graphs is simple")
    }

    /// Colours containing `uv`, as a bit mask.
    pub fn pair_colors(&self, u: usize, v: usize) -> u64 {
        self.graphs
            .iter()
            .enumerate()
            .filter(|(_, g)| g.has_edge(u, v))
            .fold(0, |m, (i, _)| m | (1u64 << i))
    }

    /// Number of colours containing `uv`.
    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        self.pair_colors(u, v).count_ones() as usize
    }

    /// True if `G_1 ⊇ G_2 ⊇ ... ⊇ G_t`.
    pub fn is_nested(&self) -> bool {
        self.graphs.windows(2).all(|w| {
            w[0].rows()
                .iter()
                .zip(w[1].rows())
                .all(|(a, b)| b & !a == 0)
        })
    }
}

fn check_shape(n: usize, t: usize) -> Result<(), CollectionError> {
    if t == 0 {
        return Err(CollectionError::NoColors);
    }
    if t > MAX_COLORS {
        return Err(CollectionError::TooManyColors(t));
    }
    if n == 0 {
        return Err(CollectionError::NoVertices);
    }
    if n > MAX_VERTICES {
        return Err(CollectionError::Graph(GraphError::TooManyVertices(n)));
    }
    Ok(())
}

impl fmt::Debug for Collection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Collection")
            .field("n", &self.n)
            .field("graphs", &self.graphs)
            .finish()
    }
}

/// Certificate of a rainbow copy: `vmap[x]` is the image of pattern vertex
/// `x`, and `cmap[k]` the colour of the `k`-th edge of `pattern.edges()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RainbowWitness {
    pub pattern: Graph,
    pub vmap: Vec<usize>,
    pub cmap: Vec<Color>,
}

impl RainbowWitness {
    /// Checks injectivity of both maps and that every edge is present in
    /// its assigned colour.
    pub fn verify(&self, c: &Collection) -> bool {
        if self.vmap.len() != self.pattern.n() || self.cmap.len() != self.pattern.edge_count() {
            return false;
        }
        let mut seen_v = 0u32;
        for &v in &self.vmap {
            if v >= c.n() || seen_v & (1 << v) != 0 {
                return false;
            }
            seen_v |= 1 << v;
        }
        let mut seen_c = 0u64;
        for (&col, (x, y)) in self.cmap.iter().zip(self.pattern.edges()) {
            if col >= c.t() || seen_c & (1 << col) != 0 {
                return false;
            }
            seen_c |= 1 << col;
            if !c.graph(col).has_edge(self.vmap[x], self.vmap[y]) {
                return false;
            }
        }
        true
    }
}

/// A matching whose `k`-th edge is taken from colour `colors[k]`, all
/// colours distinct.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RainbowMatching {
    pub edges: Vec<(usize, usize)>,
    pub colors: Vec<Color>,
}

impl RainbowMatching {
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_set(&self) -> u32 {
        self.edges.iter().fold(0, |m, &(u, v)| m | (1 << u) | (1 << v))
    }

    pub fn color_set(&self) -> u64 {
        self.colors.iter().fold(0, |m, &c| m | (1 << c))
    }

    pub fn verify(&self, c: &Collection) -> bool {
        if self.edges.len() != self.colors.len() {
            return false;
        }
        let mut vs = 0u32;
        let mut cs = 0u64;
        for (&(u, v), &col) in self.edges.iter().zip(&self.colors) {
            if u == v || u >= c.n() || v >= c.n() || col >= c.t() {
                return false;
            }
            if vs & ((1 << u) | (1 << v)) != 0 || cs & (1 << col) != 0 {
                return false;
            }
            vs |= (1 << u) | (1 << v);
            cs |= 1 << col;
            if !c.graph(col).has_edge(u, v) {
                return false;
            }
        }
        true
    }
}

/// The nested collection with the same per-pair multiplicities:
/// `uv ∈ G'_i` iff `uv` lies in at least `i + 1` of the original colours.
pub fn nest_transform(c: &Collection) -> Collection {
    let mut out = Collection::new(c.n(), c.t()).expect("shape already validated");
    let union = c.union();
    for (u, v) in union.edges() {
        let m = c.multiplicity(u, v);
        for i in 0..m {
            out.graph_mut(i).add_edge(u, v);
        }
    }
    out
}

/// Iterates the colours in a mask.
pub(crate) fn colors_of(mask: u64) -> impl Iterator<Item = Color> {
    let mut m = mask;
    core::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let c = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(c)
        }
    })
}
