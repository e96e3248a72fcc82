//! Greedy rainbow matchings, strong colours, the rainbow-`M_2` trichotomy
//! and the rainbow-star cover.

use alloc::vec::Vec;
use core::fmt;

use crate::collection::{colors_of, Collection, Color, RainbowMatching, RainbowWitness};
use crate::detect::find_rainbow_copy;
use crate::embed::max_color_matching;
use crate::graph::{bit, low_mask, Bits, Graph, VertexSet};
use crate::pattern::{matching, star};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LemmaError {
    /// A stated precondition fails; `color` names the offending colour when
    /// there is one.
    PreconditionViolated { clause: &'static str, color: Option<Color> },
    ColorOutOfRange { color: Color, t: usize },
    TooSmall { n: usize },
    InvalidParameter(&'static str),
}

impl fmt::Display for LemmaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LemmaError::PreconditionViolated { clause, color: Some(c) } => {
                write!(f, "precondition violated for colour {}: {clause}", c + 1)
            }
            LemmaError::PreconditionViolated { clause, color: None } => {
                write!(f, "precondition violated: {clause}")
            }
            LemmaError::ColorOutOfRange { color, t } => {
                write!(f, "colour {} out of range 1..={t}", color + 1)
            }
            LemmaError::TooSmall { n } => write!(f, "needs at least 4 vertices, got {n}"),
            LemmaError::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
        }
    }
}

fn violated(clause: &'static str, color: Option<Color>) -> LemmaError {
    LemmaError::PreconditionViolated { clause, color }
}

fn check_color(c: &Collection, color: Color) -> Result<(), LemmaError> {
    if color >= c.t() {
        return Err(LemmaError::ColorOutOfRange { color, t: c.t() });
    }
    Ok(())
}

/// Extends `m0` (colours `0..p`) to a rainbow matching of size `q` by
/// matching each centre `v_i` of colour `i` to a fresh neighbour.
///
/// `centers` lists `(colour, vertex)` for exactly the colours `p..q`.
pub fn greedy_extend(
    c: &Collection,
    m0: &RainbowMatching,
    centers: &[(Color, usize)],
    q: usize,
) -> Result<RainbowMatching, LemmaError> {
    let p = m0.size();
    if !m0.verify(c) {
        return Err(violated("initial matching is not a rainbow matching", None));
    }
    let mut sorted_colors = m0.colors.clone();
    sorted_colors.sort_unstable();
    if sorted_colors.iter().copied().ne(0..p) {
        return Err(violated("initial matching must use the first p colours", None));
    }
    if q < p || q > c.t() {
        return Err(violated("need p <= q <= t", None));
    }
    let mut centers = centers.to_vec();
    centers.sort_unstable();
    if centers.len() != q - p || centers.iter().map(|&(i, _)| i).ne(p..q) {
        return Err(violated("centres must be given for exactly the colours p+1..q", None));
    }
    let base = m0.vertex_set();
    let mut center_set: VertexSet = 0;
    for &(i, v) in &centers {
        if v >= c.n() {
            return Err(violated("centre is not a vertex", Some(i)));
        }
        if base & bit(v) != 0 {
            return Err(violated("centre lies on the initial matching", Some(i)));
        }
        if center_set & bit(v) != 0 {
            return Err(violated("centres must be distinct", Some(i)));
        }
        if c.graph(i).degree(v) + 1 < 2 * q {
            return Err(violated("centre degree below 2q-1", Some(i)));
        }
        center_set |= bit(v);
    }

    let mut out = m0.clone();
    let mut blocked = base | center_set;
    for &(i, v) in &centers {
        let w = Bits(c.graph(i).row(v) & !blocked)
            .next()
            .expect("degree bound leaves a free neighbour");
        blocked |= bit(w);
        out.edges.push((v.min(w), v.max(w)));
        out.colors.push(i);
    }
    Ok(out)
}

/// Picks distinct centres of degree at least `2q-1` in colours `0..q`, in
/// order, and extends the empty matching from them.
pub fn greedy_from_degrees(c: &Collection, q: usize) -> Result<RainbowMatching, LemmaError> {
    if q > c.t() {
        return Err(violated("need q <= t", None));
    }
    let mut chosen: VertexSet = 0;
    let mut centers = Vec::with_capacity(q);
    for i in 0..q {
        let g = c.graph(i);
        let high = (0..c.n()).filter(|&v| g.degree(v) + 1 >= 2 * q).fold(0, |m, v| m | bit(v));
        if (high.count_ones() as usize) < i + 1 {
            return Err(violated("too few vertices of degree at least 2q-1", Some(i)));
        }
        let v = Bits(high & !chosen).next().expect("i+1 candidates, i taken");
        chosen |= bit(v);
        centers.push((i, v));
    }
    greedy_extend(c, &RainbowMatching::default(), &centers, q)
}

/// Does `g` have an edge avoiding `used`?
fn has_edge_avoiding(g: &Graph, used: VertexSet) -> bool {
    Bits(g.vertices() & !used).any(|v| g.row(v) & !used != 0)
}

/// Exact test: every rainbow matching of size at most `s` avoiding colour
/// `i`, the empty one included, is disjoint from some edge of `G_i`.
pub fn strong_color_exact(c: &Collection, i: Color, s: usize) -> Result<bool, LemmaError> {
    check_color(c, i)?;
    let gi = c.graph(i);
    // every colour whose index exceeds the last one used may still be picked
    fn all_extend(c: &Collection, gi: &Graph, i: Color, left: usize, from: Color, used: VertexSet) -> bool {
        if !has_edge_avoiding(gi, used) {
            return false;
        }
        if left == 0 {
            return true;
        }
        for col in from..c.t() {
            if col == i {
                continue;
            }
            let g = c.graph(col);
            for u in Bits(g.vertices() & !used) {
                for w in Bits(g.row(u) & !used & !low_mask(u + 1)) {
                    if !all_extend(c, gi, i, left - 1, col + 1, used | bit(u) | bit(w)) {
                        return false;
                    }
                }
            }
        }
        true
    }
    Ok(all_extend(c, gi, i, s, 0, 0))
}

/// Which sufficient condition certified a strong colour.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrongColorEvidence {
    /// more than `2s(n-2s) + C(2s,2)` edges
    ByEdgeCount,
    /// at least `s(n-s)` edges and fewer than `s` vertices of degree at
    /// least `n/2s`
    ByLowDegree,
    /// contains `M_{2s+1}`
    ByBigMatching,
    Unknown,
}

/// The first of the three sufficient conditions that applies, tried in the
/// order edge count, big matching, low degree.
pub fn strong_color_sufficient(
    c: &Collection,
    i: Color,
    s: usize,
) -> Result<StrongColorEvidence, LemmaError> {
    check_color(c, i)?;
    let g = c.graph(i);
    let n = c.n() as i64;
    let si = s as i64;
    let e = g.edge_count() as i64;
    let two_s = 2 * si;
    if e > two_s * (n - two_s) + two_s * (two_s - 1) / 2 {
        return Ok(StrongColorEvidence::ByEdgeCount);
    }
    if g.matching_number() > 2 * s {
        return Ok(StrongColorEvidence::ByBigMatching);
    }
    let high = (0..c.n())
        .filter(|&v| two_s * g.degree(v) as i64 >= n)
        .count() as i64;
    if e >= si * (n - si) && high < si {
        return Ok(StrongColorEvidence::ByLowDegree);
    }
    Ok(StrongColorEvidence::Unknown)
}

/// Exact test: for every rainbow `S_r` avoiding colour `i`, together with at
/// most `m-1` further rainbow isolated edges, some edge of `G_i` misses all
/// of its vertices. Configurations without an `S_r` are not quantified.
pub fn very_strong_color(c: &Collection, i: Color, r: usize, m: usize) -> Result<bool, LemmaError> {
    check_color(c, i)?;
    if r < 2 {
        return Err(LemmaError::InvalidParameter("r must be at least 2"));
    }
    if m < 1 {
        return Err(LemmaError::InvalidParameter("m must be at least 1"));
    }
    let gi = c.graph(i);
    if gi.edge_count() == 0 {
        return Ok(false);
    }
    let others = !(1u64 << i) & if c.t() == 64 { u64::MAX } else { (1u64 << c.t()) - 1 };

    struct Ctx<'a> {
        c: &'a Collection,
        gi: &'a Graph,
        center: usize,
        r: usize,
        extra: usize,
    }

    fn isolated(ctx: &Ctx, left: usize, from: Color, colors: u64, used: VertexSet) -> bool {
        if !has_edge_avoiding(ctx.gi, used) {
            return false;
        }
        if left == 0 {
            return true;
        }
        for col in colors_of(colors & !low_mask64(from)) {
            let g = ctx.c.graph(col);
            for u in Bits(g.vertices() & !used) {
                for w in Bits(g.row(u) & !used & !low_mask(u + 1)) {
                    let rest = colors & !(1 << col);
                    if !isolated(ctx, left - 1, col + 1, rest, used | bit(u) | bit(w)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn leaves(ctx: &Ctx, placed: usize, from: usize, colors: u64, used: VertexSet) -> bool {
        if placed == ctx.r {
            return isolated(ctx, ctx.extra, 0, colors, used);
        }
        for leaf in from..ctx.c.n() {
            if used & bit(leaf) != 0 {
                continue;
            }
            let avail = ctx.c.pair_colors(ctx.center, leaf) & colors;
            for col in colors_of(avail) {
                if !leaves(ctx, placed + 1, leaf + 1, colors & !(1 << col), used | bit(leaf)) {
                    return false;
                }
            }
        }
        true
    }

    for center in 0..c.n() {
        let ctx = Ctx {
            c,
            gi,
            center,
            r,
            extra: m - 1,
        };
        if !leaves(&ctx, 0, 0, others, bit(center)) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn low_mask64(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// Outcome of the rainbow-`M_2` trichotomy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum M2Structure {
    /// every edge of every colour contains this vertex
    CommonVertex(usize),
    /// every colour except possibly the named one has at most 4 edges
    AllButOneSmall(Option<Color>),
    HasRainbowM2(RainbowWitness),
}

pub fn m2_structure(c: &Collection) -> Result<M2Structure, LemmaError> {
    if c.n() < 4 {
        return Err(LemmaError::TooSmall { n: c.n() });
    }
    let m2 = matching(2).expect("M2 fits");
    if let Some(w) = find_rainbow_copy(c, &m2) {
        return Ok(M2Structure::HasRainbowM2(w));
    }
    let union = c.union();
    if let Some(v) = (0..c.n()).find(|&v| union.is_cover(bit(v))) {
        return Ok(M2Structure::CommonVertex(v));
    }
    // Two disjoint edges of the union must share a single colour, and every
    // other colour then lies on the four pairs between them. Without two
    // disjoint edges the union is a triangle and no colour is singled out.
    let edges = union.edge_vec();
    let exempt = edges.iter().enumerate().find_map(|(k, &(a, b))| {
        let (x, y) = edges[k + 1..]
            .iter()
            .find(|&&(x, y)| x != a && x != b && y != a && y != b)?;
        let shared = c.pair_colors(a, b) & c.pair_colors(*x, *y);
        debug_assert_eq!(shared.count_ones(), 1, "otherwise a rainbow M2 exists");
        Some(shared.trailing_zeros() as usize)
    });
    Ok(M2Structure::AllButOneSmall(exempt))
}

/// Either a rainbow star centred at the vertex, or a small set of incident
/// edges that carry every non-exempt colour seen at the vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StarCover {
    Witness(RainbowWitness),
    Cover {
        edges: Vec<(usize, usize)>,
        exempt: Vec<Color>,
    },
}

impl StarCover {
    /// Checks the output against the collection: a valid rainbow `S_p`
    /// centred at `v`, or a cover of at most `p-1` edges at `v` with at most
    /// `p-1` exempt colours such that every other colour on an edge at `v`
    /// appears only on cover edges.
    pub fn verify(&self, c: &Collection, v: usize, p: usize) -> bool {
        match self {
            StarCover::Witness(w) => {
                w.verify(c) && w.pattern.n() == p + 1 && w.pattern.degree(0) == p && w.vmap[0] == v
            }
            StarCover::Cover { edges, exempt } => {
                if edges.len() + 1 > p || exempt.len() + 1 > p {
                    return false;
                }
                let exempt_mask = exempt.iter().fold(0u64, |m, &i| m | (1 << i));
                let mut cover = 0u32;
                for &(a, b) in edges {
                    let w = if a == v { b } else if b == v { a } else { return false };
                    if c.pair_colors(v, w) == 0 {
                        return false;
                    }
                    cover |= bit(w);
                }
                (0..c.n())
                    .filter(|&w| w != v && cover & bit(w) == 0)
                    .all(|w| c.pair_colors(v, w) & !exempt_mask == 0)
            }
        }
    }
}

/// Rainbow star at `v`, or the Hall-deficiency cover.
///
/// Deficient sets are removed repeatedly: for the first colour set `B'` in
/// (size, lexicographic) order whose preimage `A' = {a : N(a) ⊆ B'}` has
/// more than `|B'|` edges, `A'` and `B'` are deleted; `B'` joins the exempt
/// colours and a matching of `A'` onto `B'` joins the cover. Edges left
/// when no deficient set remains complete the cover.
pub fn star_cover(c: &Collection, v: usize, p: usize) -> Result<StarCover, LemmaError> {
    if p == 0 {
        return Err(LemmaError::InvalidParameter("p must be at least 1"));
    }
    if v >= c.n() {
        return Err(LemmaError::InvalidParameter("centre is not a vertex"));
    }
    let nbrs: Vec<usize> = (0..c.n()).filter(|&w| w != v && c.pair_colors(v, w) != 0).collect();
    let masks: Vec<u64> = nbrs.iter().map(|&w| c.pair_colors(v, w)).collect();
    let assign = max_color_matching(&masks);
    let matched: Vec<(usize, Color)> = nbrs
        .iter()
        .zip(&assign)
        .filter_map(|(&w, a)| a.map(|col| (w, col)))
        .collect();
    if matched.len() >= p {
        let leaves = &matched[..p];
        let mut vmap = Vec::with_capacity(p + 1);
        vmap.push(v);
        vmap.extend(leaves.iter().map(|&(w, _)| w));
        return Ok(StarCover::Witness(RainbowWitness {
            pattern: star(p).expect("star fits when a matching of size p exists"),
            vmap,
            cmap: leaves.iter().map(|&(_, col)| col).collect(),
        }));
    }

    let mut alive: Vec<bool> = alloc::vec![true; nbrs.len()];
    let mut colors_left: u64 = masks.iter().fold(0, |m, &x| m | x);
    let mut cover: Vec<(usize, usize)> = Vec::new();
    let mut exempt: Vec<Color> = Vec::new();
    'rounds: loop {
        let palette: Vec<Color> = colors_of(colors_left).collect();
        for k in 0..=palette.len().min(p - 1) {
            let mut subset: Vec<usize> = (0..k).collect();
            loop {
                let b: u64 = subset.iter().fold(0, |m, &j| m | (1 << palette[j]));
                let preimage: Vec<usize> = (0..nbrs.len())
                    .filter(|&a| alive[a] && masks[a] & colors_left & !b == 0)
                    .collect();
                if preimage.len() > k {
                    let sub: Vec<u64> = preimage.iter().map(|&a| masks[a] & b).collect();
                    for (&a, col) in preimage.iter().zip(max_color_matching(&sub)) {
                        if col.is_some() {
                            cover.push(ordered(v, nbrs[a]));
                        }
                    }
                    for &a in &preimage {
                        alive[a] = false;
                    }
                    exempt.extend(colors_of(b));
                    colors_left &= !b;
                    continue 'rounds;
                }
                if !next_combination(&mut subset, palette.len()) {
                    break;
                }
            }
        }
        break;
    }
    for (a, &w) in nbrs.iter().enumerate() {
        if alive[a] {
            cover.push(ordered(v, w));
        }
    }
    cover.sort_unstable();
    exempt.sort_unstable();
    Ok(StarCover::Cover { edges: cover, exempt })
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Advances a sorted `k`-subset of `0..n` to the next in lexicographic order.
fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    for j in (0..k).rev() {
        if subset[j] < n - k + j {
            subset[j] += 1;
            for l in j + 1..k {
                subset[l] = subset[l - 1] + 1;
            }
            return true;
        }
    }
    false
}
