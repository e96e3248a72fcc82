//! Lower-bound constructions and closed-form values.
//!
//! Each construction returns the collection together with the family it
//! avoids and the per-colour edge counts its closed form predicts, so a
//! caller can certify both independently. Blocks of stars and cliques are
//! placed on consecutive vertices from 0 upward, stars with the centre
//! first; colour groups are handed out in increasing order.

// Guards are written as the case conditions read, `t >= s + 1` and all.
#![allow(clippy::int_plus_one)]

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::collection::{Collection, CollectionError};
use crate::family::{
    bipartition_min_class, family_covering, family_deleted_independent, FamilyError, PatternFamily,
};
use crate::graph::Graph;
use crate::pattern::{complete_bipartite, matching, star, star_with_matching};
use crate::search::{
    extremal, turan::turan_exact_with, ExtremalQuery, Mode, SearchError, Sequential, DEFAULT_BUDGET,
};

macro_rules! ids {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal,)* }) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $($variant,)*
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $($name::$variant => $text,)*
                }
            }
        }

        impl FromStr for $name {
            type Err = ConstructionError;

            fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)*
                    _ => Err(ConstructionError::UnknownId),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
    };
}

ids! {
    /// A lower-bound construction.
    ConstructionId {
        MinI => "min.i",
        MinII => "min.ii",
        MinIII => "min.iii",
        MinIV => "min.iv",
        MinKppRemark => "min.kpp-remark",
        SumCliques => "sum.cliques",
        SumMonochromeExtremal => "sum.monochrome-extremal",
        ProdMatching => "prod.matching",
        ProdCliqueStar => "prod.clique-star",
        ProdStarGt => "prod.star.gt",
        ProdStarEq => "prod.star.eq",
        ProdStarLt => "prod.star.lt",
        ProdStar2 => "prod.star2",
        ProdSmStarClique => "prod.sm.star-clique",
        ProdSmMixed => "prod.sm.mixed",
        ProdSmBigstar => "prod.sm.bigstar",
    }
}

ids! {
    /// A closed-form extremal value.
    FormulaId {
        Meshulam => "meshulam",
        MinI => "min.i",
        MinII => "min.ii",
        MinIV => "min.iv",
        ProdMatching => "prod.matching",
        SumK3 => "sum.k3",
        SumBipartite => "sum.bipartite",
        SumGeneralUpper => "sum.general-upper",
    }
}

impl ConstructionId {
    /// Parameter names the construction reads; `inner` is optional.
    pub fn parameters(self) -> &'static [&'static str] {
        use ConstructionId::*;
        match self {
            MinI | MinII => &["n", "t", "s", "F", "inner"],
            MinIII => &["n", "t", "s", "p", "F"],
            MinIV => &["n", "t", "s", "F", "inner"],
            MinKppRemark => &["n", "t", "s", "p"],
            SumCliques | SumMonochromeExtremal => &["n", "t", "F"],
            ProdMatching => &["n", "t", "s"],
            ProdCliqueStar => &["n", "t", "s", "F"],
            ProdStarGt | ProdStarEq | ProdStarLt | ProdStar2 => &["n", "t", "s", "r"],
            ProdSmStarClique | ProdSmMixed | ProdSmBigstar => &["n", "t", "s", "r", "m"],
        }
    }
}

impl FormulaId {
    pub fn parameters(self) -> &'static [&'static str] {
        use FormulaId::*;
        match self {
            Meshulam => &["n", "s"],
            MinI | MinII => &["n", "t", "s", "F"],
            MinIV => &["n", "t", "F"],
            ProdMatching => &["n", "t", "s"],
            SumK3 => &["n", "s"],
            SumBipartite => &["n", "F"],
            SumGeneralUpper => &["n", "t", "family"],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstructionError {
    UnknownId,
    MissingParameter(&'static str),
    /// a case condition of the construction fails
    GuardViolated(&'static str),
    /// the supplied inner collection has the wrong vertex count
    InnerTooLarge { expected: usize, found: usize },
    /// an inner extremal value could not be computed
    InnerInfeasible(SearchError),
    Overflow,
    Shape(CollectionError),
    Family(FamilyError),
}

impl fmt::Display for ConstructionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionError::UnknownId => write!(f, "unknown construction or formula id"),
            ConstructionError::MissingParameter(p) => write!(f, "missing parameter {p}"),
            ConstructionError::GuardViolated(why) => write!(f, "guard violated: {why}"),
            ConstructionError::InnerTooLarge { expected, found } => {
                write!(f, "inner collection has {found} vertices, expected {expected}")
            }
            ConstructionError::InnerInfeasible(e) => write!(f, "inner search failed: {e}"),
            ConstructionError::Overflow => write!(f, "value overflows 64 bits"),
            ConstructionError::Shape(e) => write!(f, "{e}"),
            ConstructionError::Family(e) => write!(f, "{e}"),
        }
    }
}

impl From<CollectionError> for ConstructionError {
    fn from(e: CollectionError) -> Self {
        ConstructionError::Shape(e)
    }
}

impl From<FamilyError> for ConstructionError {
    fn from(e: FamilyError) -> Self {
        ConstructionError::Family(e)
    }
}

impl From<crate::graph::GraphError> for ConstructionError {
    fn from(e: crate::graph::GraphError) -> Self {
        ConstructionError::Shape(CollectionError::Graph(e))
    }
}

type Result<T> = core::result::Result<T, ConstructionError>;

/// Named parameters; each construction reads the subset it needs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params {
    pub n: Option<usize>,
    pub t: Option<usize>,
    pub s: Option<usize>,
    pub p: Option<usize>,
    pub r: Option<usize>,
    pub m: Option<usize>,
    /// the graph `F`
    pub f: Option<Graph>,
    /// a full forbidden family, for formulas over several graphs
    pub family: Option<PatternFamily>,
    /// an explicit inner collection for the constructions that take one
    pub inner: Option<Collection>,
    /// node budget for inner searches
    pub budget: Option<u64>,
}

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn n(mut self, v: usize) -> Self {
        self.n = Some(v);
        self
    }

    pub fn t(mut self, v: usize) -> Self {
        self.t = Some(v);
        self
    }

    pub fn s(mut self, v: usize) -> Self {
        self.s = Some(v);
        self
    }

    pub fn p(mut self, v: usize) -> Self {
        self.p = Some(v);
        self
    }

    pub fn r(mut self, v: usize) -> Self {
        self.r = Some(v);
        self
    }

    pub fn m(mut self, v: usize) -> Self {
        self.m = Some(v);
        self
    }

    pub fn f(mut self, g: Graph) -> Self {
        self.f = Some(g);
        self
    }

    pub fn family(mut self, fam: PatternFamily) -> Self {
        self.family = Some(fam);
        self
    }

    pub fn inner(mut self, c: Collection) -> Self {
        self.inner = Some(c);
        self
    }

    fn get(v: Option<usize>, name: &'static str) -> Result<usize> {
        v.ok_or(ConstructionError::MissingParameter(name))
    }

    fn graph(&self) -> Result<Graph> {
        self.f.ok_or(ConstructionError::MissingParameter("F"))
    }

    fn budget(&self) -> u64 {
        self.budget.unwrap_or(DEFAULT_BUDGET)
    }
}

/// A construction with what it should satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Built {
    pub collection: Collection,
    /// the family the collection avoids rainbow copies of
    pub forbidden: PatternFamily,
    /// per-colour edge counts predicted by the closed form
    pub expected_edges: Vec<usize>,
}

/// Builds construction `id`.
pub fn build(id: ConstructionId, params: &Params) -> Result<Collection> {
    construct(id, params).map(|b| b.collection)
}

/// Builds construction `id` with its forbidden family and predicted counts.
pub fn construct(id: ConstructionId, params: &Params) -> Result<Built> {
    use ConstructionId::*;
    match id {
        MinI => min_split(params, Split::NonBipartite),
        MinII => min_split(params, Split::Bipartite),
        MinIII => min_iii(params),
        MinIV => min_iv(params),
        MinKppRemark => kpp_remark(params),
        SumCliques => sum_cliques(params),
        SumMonochromeExtremal => sum_monochrome(params),
        ProdMatching => prod_matching(params),
        ProdCliqueStar => prod_clique_star(params),
        ProdStarGt | ProdStarEq | ProdStarLt => prod_star(id, params),
        ProdStar2 => prod_star2(params),
        ProdSmStarClique => prod_sm_star_clique(params),
        ProdSmMixed => prod_sm_mixed(params),
        ProdSmBigstar => prod_sm_bigstar(params),
    }
}

fn guard(ok: bool, why: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(ConstructionError::GuardViolated(why))
    }
}

fn binom2(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

fn with_matching(f: Graph, s: usize) -> Result<PatternFamily> {
    Ok(PatternFamily::new([f, matching(s + 1)?])?)
}

/// Adds every pair inside `block` in each colour of `colors`.
fn clique(c: &mut Collection, colors: &[usize], block: core::ops::Range<usize>) {
    for &i in colors {
        for u in block.clone() {
            for v in u + 1..block.end {
                c.graph_mut(i).add_edge(u, v);
            }
        }
    }
}

/// Adds the star `center`-`leaves` in each colour of `colors`.
fn star_on(c: &mut Collection, colors: &[usize], center: usize, leaves: core::ops::Range<usize>) {
    for &i in colors {
        for v in leaves.clone() {
            c.graph_mut(i).add_edge(center, v);
        }
    }
}

/// All pairs between `a` and `b` in every colour.
fn bipartite_all(c: &mut Collection, a: core::ops::Range<usize>, b: core::ops::Range<usize>) {
    for i in 0..c.t() {
        for u in a.clone() {
            for v in b.clone() {
                c.graph_mut(i).add_edge(u, v);
            }
        }
    }
}

fn range(from: usize, len: usize) -> Vec<usize> {
    (from..from + len).collect()
}

/// An optimal collection for `ex_t(k, fam)`: the caller's if given, else
/// the search witness.
fn inner_collection(params: &Params, k: usize, t: usize, fam: &PatternFamily) -> Result<Collection> {
    if let Some(inner) = &params.inner {
        if inner.n() != k {
            return Err(ConstructionError::InnerTooLarge {
                expected: k,
                found: inner.n(),
            });
        }
        guard(inner.t() == t, "inner collection must have t colours")?;
        return Ok(inner.clone());
    }
    let r = inner_search(Mode::Min, k, t, fam, params.budget())?;
    r.witness.ok_or(ConstructionError::GuardViolated("inner family rules out every collection"))
}

fn inner_search(
    mode: Mode,
    n: usize,
    t: usize,
    fam: &PatternFamily,
    budget: u64,
) -> Result<crate::search::ExtremalResult> {
    let q = ExtremalQuery::new(mode, n, t, fam.clone()).with_budget(budget);
    let r = extremal(&q, &Sequential).map_err(ConstructionError::InnerInfeasible)?;
    if !r.exact {
        return Err(ConstructionError::InnerInfeasible(SearchError::BudgetExceeded { nodes: r.nodes }));
    }
    Ok(r)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Split {
    NonBipartite,
    Bipartite,
}

/// The family the inner collection of a split construction must avoid.
fn split_family(f: &Graph, s: usize, kind: Split) -> Result<PatternFamily> {
    match kind {
        Split::NonBipartite => {
            guard(bipartition_min_class(f).is_err(), "F must not be bipartite")?;
            Ok(family_deleted_independent(f)?)
        }
        Split::Bipartite => {
            let p = bipartition_min_class(f).map_err(|_| ConstructionError::GuardViolated("F must be bipartite"))?;
            guard(p > s, "need p(F) > s")?;
            Ok(family_covering(f, s)?)
        }
    }
}

/// `K_{s,n-s}` in every colour plus an inner collection on the `s` side.
fn min_split(params: &Params, kind: Split) -> Result<Built> {
    let n = Params::get(params.n, "n")?;
    let t = Params::get(params.t, "t")?;
    let s = Params::get(params.s, "s")?;
    let f = params.graph()?;
    guard(s >= 1 && n > s, "need 1 <= s < n")?;
    guard(t >= s + 1, "need t >= s + 1")?;
    let inner_fam = split_family(&f, s, kind)?;
    let inner = inner_collection(params, s, t, &inner_fam)?;
    let mut c = Collection::new(n, t)?;
    bipartite_all(&mut c, 0..s, s..n);
    for (i, g) in inner.graphs().iter().enumerate() {
        for (u, v) in g.edges() {
            c.graph_mut(i).add_edge(u, v);
        }
    }
    let expected = inner.edge_counts().iter().map(|k| s * (n - s) + k).collect();
    Ok(Built {
        collection: c,
        forbidden: with_matching(f, s)?,
        expected_edges: expected,
    })
}

/// `K_{p-1,n-p+1}` in every colour.
fn min_iii(params: &Params) -> Result<Built> {
    let n = Params::get(params.n, "n")?;
    let t = Params::get(params.t, "t")?;
    let p = Params::get(params.p, "p")?;
    let s = Params::get(params.s, "s")?;
    guard(p >= 1 && p <= s, "need 1 <= p <= s")?;
    guard(n >= p, "need n >= p")?;
    guard(t >= s + 1, "need t >= s + 1")?;
    let f = match params.f {
        Some(f) => {
            let q = bipartition_min_class(&f).map_err(|_| ConstructionError::GuardViolated("F must be bipartite"))?;
            guard(q == p, "need p(F) = p")?;
            f
        }
        None => complete_bipartite(p, p)?,
    };
    let mut c = Collection::new(n, t)?;
    bipartite_all(&mut c, 0..p - 1, p - 1..n);
    Ok(Built {
        collection: c,
        forbidden: with_matching(f, s)?,
        expected_edges: vec![(p - 1) * (n - p + 1); t],
    })
}

fn is_tree(f: &Graph) -> bool {
    f.n() >= 1 && f.edge_count() + 1 == f.n() && f.components().len() == 1
}

/// `K_{p-1,n-p+1}` in every colour plus an inner collection on the small side.
fn min_iv(params: &Params) -> Result<Built> {
    let n = Params::get(params.n, "n")?;
    let t = Params::get(params.t, "t")?;
    let s = Params::get(params.s, "s")?;
    let f = params.graph()?;
    guard(is_tree(&f), "F must be a tree")?;
    let p = bipartition_min_class(&f)?;
    guard(f.n() == 2 * p, "F must be balanced")?;
    guard(p >= 2 && p <= s, "need 2 <= p(F) <= s")?;
    guard(t >= s + 1, "need t >= s + 1")?;
    guard(n >= p, "need n >= p(F)")?;
    let inner_fam = family_covering(&f, p - 1)?;
    let inner = inner_collection(params, p - 1, t, &inner_fam)?;
    let mut c = Collection::new(n, t)?;
    bipartite_all(&mut c, 0..p - 1, p - 1..n);
    for (i, g) in inner.graphs().iter().enumerate() {
        for (u, v) in g.edges() {
            c.graph_mut(i).add_edge(u, v);
        }
    }
    let expected = inner.edge_counts().iter().map(|k| (p - 1) * (n - p + 1) + k).collect();
    Ok(Built {
        collection: c,
        forbidden: with_matching(f, s)?,
        expected_edges: expected,
    })
}

/// `A = 0..p-1` joined to `C = s..n` in every colour; each vertex of
/// `B = p-1..s` joined to `C` in `p-1` colours, assigned round-robin.
fn kpp_remark(params: &Params) -> Result<Built> {
    let n = Params::get(params.n, "n")?;
    let t = Params::get(params.t, "t")?;
    let s = Params::get(params.s, "s")?;
    let p = Params::get(params.p, "p")?;
    guard(p >= 1 && p <= s, "need 1 <= p <= s")?;
    guard(n > s, "need n > s")?;
    guard(t >= s + 1, "need t >= s + 1")?;
    guard(p - 1 <= t, "need p - 1 <= t")?;
    let mut c = Collection::new(n, t)?;
    bipartite_all(&mut c, 0..p - 1, s..n);
    let mut next = 0;
    for b in p - 1..s {
        for _ in 0..p - 1 {
            for v in s..n {
                c.graph_mut(next % t).add_edge(b, v);
            }
            next += 1;
        }
    }
    // `next` assignments spread over consecutive colours
    let total = (s - p + 1) * (p - 1);
    let expected = (0..t)
        .map(|i| (p - 1 + total / t + usize::from(i < total % t)) * (n - s))
        .collect();
    Ok(Built {
        collection: c,
        forbidden: with_matching(complete_bipartite(p, p)?, s)?,
        expected_edges: expected,
    })
}

/// `K_n` in the first `|E(F)| - 1` colours.
fn sum_cliques(params: &Params) -> Result<Built> {
    let n = Params::get(params.n, "n")?;
    let t = Params::get(params.t, "t")?;
    let f = params.graph()?;
    let e = f.edge_count();
    guard(e >= 1, "F must have an edge")?;
    guard(t + 1 >= e, "need t >= |E(F)| - 1")?;
    let mut c = Collection::new(n, t)?;
    clique(&mut c, &range(0, e - 1), 0..n);
    let expected = (0..t).map(|i| if i + 1 < e { binom2(n) } else { 0 }).collect();
    Ok(Built {
        collection: c,
        forbidden: PatternFamily::single(f),
        expected_edges: expected,
    })
}

/// One extremal `F`-free graph repeated in every colour.
fn sum_monochrome(params: &Params) -> Result<Built> {
    let n = Params::get(params.n, "n")?;
    let t = Params::get(params.t, "t")?;
    let f = params.graph()?;
    guard(f.edge_count() >= 1, "F must have an edge")?;
    let r = turan_exact_with(n, &PatternFamily::single(f), params.budget())
        .map_err(ConstructionError::InnerInfeasible)?;
    let g = r.witness.expect("F has an edge");
    Ok(Built {
        collection: Collection::repeated(g, t)?,
        forbidden: PatternFamily::single(f),
        expected_edges: vec![r.value as usize; t],
    })
}

/// `K_n` in `s - 1` colours and the star at vertex 0 in the rest.
fn prod_matching(params: &Params) -> Result<Built> {
    let n = Params::get(params.n, "n")?;
    let t = Params::get(params.t, "t")?;
    let s = Params::get(params.s, "s")?;
    guard(s >= 1, "need s >= 1")?;
    guard(t >= s + 1, "need t >= s + 1")?;
    guard(n >= 2, "need n >= 2")?;
    let mut c = Collection::new(n, t)?;
    clique(&mut c, &range(0, s - 1), 0..n);
    star_on(&mut c, &range(s - 1, t - s + 1), 0, 1..n);
    let expected = (0..t).map(|i| if i + 1 < s { binom2(n) } else { n - 1 }).collect();
    Ok(Built {
        collection: c,
        forbidden: PatternFamily::single(matching(s + 1)?),
        expected_edges: expected,
    })
}

/// True if the non-isolated part of `f` is one star (possibly an edge)
/// plus isolated edges.
pub fn is_star_with_isolated_edges(f: &Graph) -> bool {
    let core = f.induced(f.touched());
    let mut non_edges = 0;
    for comp in core.components() {
        let k = comp.count_ones() as usize;
        let edges: usize = crate::graph::Bits(comp).map(|v| core.degree(v)).sum::<usize>() / 2;
        if k == 2 {
            continue;
        }
        let is_star = edges + 1 == k && crate::graph::Bits(comp).any(|v| core.degree(v) + 1 == k);
        if !is_star {
            return false;
        }
        non_edges += 1;
    }
    non_edges <= 1
}

/// `s - 1` disjoint monochromatic cliques of order `n / 2s`, each in its own
/// colour, and a star on the remaining vertices in every colour.
fn prod_clique_star(params: &Params) -> Result<Built> {
    let n = Params::get(params.n, "n")?;
    let t = Params::get(params.t, "t")?;
    let s = Params::get(params.s, "s")?;
    let f = params.graph()?;
    guard(s >= 1 && t >= s + 1, "need s >= 1 and t >= s + 1")?;
    guard(f.edge_count() >= 1, "F must have an edge")?;
    guard(!is_star_with_isolated_edges(&f), "F must not be a star with isolated edges")?;
    let q = n / (2 * s);
    guard(q >= 1, "need n >= 2s")?;
    let mut c = Collection::new(n, t)?;
    for j in 0..s - 1 {
        clique(&mut c, &[j], j * q..(j + 1) * q);
    }
    let center = (s - 1) * q;
    star_on(&mut c, &range(0, t), center, center + 1..n);
    let leaves = n - center - 1;
    let expected = (0..t).map(|i| if i + 1 < s { binom2(q) + leaves } else { leaves }).collect();
    Ok(Built {
        collection: c,
        forbidden: with_matching(f, s)?,
        expected_edges: expected,
    })
}

/// Places `star_colors.len()` stars with `l` leaves followed by nothing
/// else; each star gets its own colour list. Returns the next free vertex.
fn stars(c: &mut Collection, expected: &mut [usize], at: usize, l: usize, star_colors: &[Vec<usize>]) -> usize {
    let mut v = at;
    for colors in star_colors {
        star_on(c, colors, v, v + 1..v + 1 + l);
        for &i in colors {
            expected[i] += l;
        }
        v += l + 1;
    }
    v
}

/// The single edge `uv` in each colour of `colors`.
fn edge_in(c: &mut Collection, expected: &mut [usize], colors: &[usize], u: usize, v: usize) {
    for &i in colors {
        c.graph_mut(i).add_edge(u, v);
        expected[i] += 1;
    }
}

/// Disjoint monochromatic cliques of order `k` in the given colours.
fn cliques(c: &mut Collection, expected: &mut [usize], at: usize, k: usize, colors: &[usize]) -> usize {
    let mut v = at;
    for &i in colors {
        clique(c, &[i], v..v + k);
        expected[i] += binom2(k);
        v += k;
    }
    v
}

/// Shared guards of the star constructions: `ℓ = ⌊n / st⌋ >= 1`.
fn star_basics(params: &Params) -> Result<(usize, usize, usize, usize, usize)> {
    let n = Params::get(params.n, "n")?;
    let t = Params::get(params.t, "t")?;
    let s = Params::get(params.s, "s")?;
    let r = Params::get(params.r, "r")?;
    guard(s >= 1 && t >= s + 1, "need s >= 1 and t >= s + 1")?;
    guard(r >= 2, "need r >= 2")?;
    let l = n / (s * t);
    guard(l >= 1, "need n >= st")?;
    Ok((n, t, s, r, l))
}

/// The star constructions against `{S_r, M_{s+1}}` with `r > 2`, placed
/// from vertex `at` in colours `c0..c0+t`.
fn place_star_case(
    c: &mut Collection,
    expected: &mut [usize],
    at: usize,
    c0: usize,
    (t, s, r, l): (usize, usize, usize, usize),
) -> Result<usize> {
    let group = |j: usize| range(c0 + j * (r - 1), r - 1);
    if t > s * (r - 1) {
        let groups: Vec<Vec<usize>> = (0..s - 1).map(group).collect();
        let v = stars(c, expected, at, l, &groups);
        // the last star: r - 2 shared colours on every edge, the rest of
        // the colours on its first edge only
        let base = c0 + (s - 1) * (r - 1);
        let v = stars(c, expected, v, l, &[range(base, r - 2)]);
        let center = v - l - 1;
        let rest = base + r - 2;
        edge_in(c, expected, &range(rest, c0 + t - rest), center, center + 1);
        Ok(v)
    } else if t == s * (r - 1) {
        let groups: Vec<Vec<usize>> = (0..s).map(group).collect();
        Ok(stars(c, expected, at, l, &groups))
    } else {
        let k = (t - s).div_ceil(r - 2);
        let v = cliques(c, expected, at, l + 1, &range(c0, s - k));
        let first = c0 + s - k;
        let mut groups: Vec<Vec<usize>> = (0..k - 1).map(|j| range(first + j * (r - 1), r - 1)).collect();
        let used = (s - k) + (k - 1) * (r - 1);
        groups.push(range(c0 + used, t - used));
        Ok(stars(c, expected, v, l, &groups))
    }
}

fn prod_star(id: ConstructionId, params: &Params) -> Result<Built> {
    let (n, t, s, r, l) = star_basics(params)?;
    match id {
        ConstructionId::ProdStarGt => {
            guard(r > 2, "need r > 2")?;
            guard(t > s * (r - 1), "need t > s(r-1)")?;
        }
        ConstructionId::ProdStarEq => guard(t == s * (r - 1), "need t = s(r-1)")?,
        _ => {
            guard(r > 2, "need r > 2")?;
            guard(t < s * (r - 1), "need t < s(r-1)")?;
        }
    }
    let mut c = Collection::new(n, t)?;
    let mut expected = vec![0; t];
    place_star_case(&mut c, &mut expected, 0, 0, (t, s, r, l))?;
    Ok(Built {
        collection: c,
        forbidden: with_matching(star(r)?, s)?,
        expected_edges: expected,
    })
}

/// `s - 1` monochromatic `K_ℓ` in their own colours and one isolated edge
/// carrying every remaining colour.
fn prod_star2(params: &Params) -> Result<Built> {
    let params = Params { r: Some(params.r.unwrap_or(2)), ..params.clone() };
    let (n, t, s, r, l) = star_basics(&params)?;
    guard(r == 2, "need r = 2")?;
    guard((s - 1) * l + 2 <= n, "no room for the shared edge")?;
    let mut c = Collection::new(n, t)?;
    let mut expected = vec![0; t];
    let v = cliques(&mut c, &mut expected, 0, l, &range(0, s - 1));
    edge_in(&mut c, &mut expected, &range(s - 1, t - s + 1), v, v + 1);
    Ok(Built {
        collection: c,
        forbidden: with_matching(star(2)?, s)?,
        expected_edges: expected,
    })
}

fn sm_basics(params: &Params) -> Result<(usize, usize, usize, usize, usize)> {
    let n = Params::get(params.n, "n")?;
    let t = Params::get(params.t, "t")?;
    let s = Params::get(params.s, "s")?;
    let r = Params::get(params.r, "r")?;
    let m = Params::get(params.m, "m")?;
    guard(m >= 1 && m < s, "need 1 <= m <= s - 1")?;
    guard(t >= s + 1, "need t >= s + 1")?;
    guard(r >= 2, "need r >= 2")?;
    Ok((n, t, s, r, m))
}

fn sm_family(r: usize, m: usize, s: usize) -> Result<PatternFamily> {
    with_matching(star_with_matching(r, m)?, s)
}

/// A spanning star at 0 in `t - s + 1` colours and `s - 1` disjoint
/// monochromatic cliques on the other vertices.
fn prod_sm_bigstar(params: &Params) -> Result<Built> {
    let (n, t, s, r, m) = sm_basics(params)?;
    guard(r - 1 >= t - s + 1, "need r - 1 >= t - s + 1")?;
    guard(n >= s, "need n >= s")?;
    let q = (n - 1) / (s - 1);
    let mut c = Collection::new(n, t)?;
    let mut expected = vec![0; t];
    stars(&mut c, &mut expected, 0, n - 1, &[range(0, t - s + 1)]);
    cliques(&mut c, &mut expected, 1, q, &range(t - s + 1, s - 1));
    Ok(Built {
        collection: c,
        forbidden: sm_family(r, m, s)?,
        expected_edges: expected,
    })
}

/// A star with `ℓ` leaves in `t - m + 1` colours and `m - 1` disjoint
/// monochromatic `K_ℓ`.
fn prod_sm_star_clique(params: &Params) -> Result<Built> {
    let (n, t, s, r, m) = sm_basics(params)?;
    guard(r >= 3, "need r >= 3")?;
    guard(t > r + s - 2, "need t > r + s - 2")?;
    guard(
        t >= s * (r - 1) || m * (r - 2) > s * (r - 1) - t,
        "need t >= s(r-1) or m > (s(r-1) - t)/(r-2)",
    )?;
    let l = n / (s * t);
    guard(l >= 1, "need n >= st")?;
    let mut c = Collection::new(n, t)?;
    let mut expected = vec![0; t];
    let v = stars(&mut c, &mut expected, 0, l, &[range(0, t - m + 1)]);
    cliques(&mut c, &mut expected, v, l, &range(t - m + 1, m - 1));
    Ok(Built {
        collection: c,
        forbidden: sm_family(r, m, s)?,
        expected_edges: expected,
    })
}

/// `j = ⌊(s(r-1) - t)/(r-2)⌋` monochromatic `K_ℓ`, then the star
/// construction for `s - j` and `t - j` in the remaining colours.
fn prod_sm_mixed(params: &Params) -> Result<Built> {
    let (n, t, s, r, m) = sm_basics(params)?;
    guard(r >= 3, "need r >= 3")?;
    guard(r + s - 2 < t && t < s * (r - 1), "need r + s - 2 < t < s(r-1)")?;
    let slack = s * (r - 1) - t;
    guard(m * (r - 2) <= slack, "need m <= (s(r-1) - t)/(r-2)")?;
    let l = n / (s * t);
    guard(l >= 1, "need n >= st")?;
    let j = slack / (r - 2);
    let mut c = Collection::new(n, t)?;
    let mut expected = vec![0; t];
    let v = cliques(&mut c, &mut expected, 0, l, &range(0, j));
    place_star_case(&mut c, &mut expected, v, j, (t - j, s - j, r, l))?;
    Ok(Built {
        collection: c,
        forbidden: sm_family(r, m, s)?,
        expected_edges: expected,
    })
}

/// The closed-form value `id` claims at `params`.
pub fn claimed_value(id: FormulaId, params: &Params) -> Result<u64> {
    use FormulaId::*;
    let n = Params::get(params.n, "n")? as u64;
    let c2 = n * n.saturating_sub(1) / 2;
    let ov = ConstructionError::Overflow;
    match id {
        Meshulam => {
            let s = Params::get(params.s, "s")? as u64;
            guard(s <= n, "need s <= n")?;
            Ok(s * (n - s) + s * s.saturating_sub(1) / 2)
        }
        MinI | MinII => {
            let t = Params::get(params.t, "t")?;
            let s = Params::get(params.s, "s")?;
            guard(s >= 1 && s as u64 <= n, "need 1 <= s <= n")?;
            let kind = if id == MinI { Split::NonBipartite } else { Split::Bipartite };
            let fam = split_family(&params.graph()?, s, kind)?;
            let inner = inner_search(Mode::Min, s, t, &fam, params.budget())?.value;
            let s = s as u64;
            Ok(s * (n - s) + inner)
        }
        MinIV => {
            let t = Params::get(params.t, "t")?;
            let f = params.graph()?;
            guard(is_tree(&f), "F must be a tree")?;
            let p = bipartition_min_class(&f)?;
            guard(f.n() == 2 * p && p >= 2, "F must be a balanced tree with p(F) >= 2")?;
            guard(p as u64 <= n, "need p(F) <= n")?;
            let inner = inner_search(Mode::Min, p - 1, t, &family_covering(&f, p - 1)?, params.budget())?.value;
            let p = p as u64;
            Ok((p - 1) * (n - p + 1) + inner)
        }
        ProdMatching => {
            let t = Params::get(params.t, "t")? as u32;
            let s = Params::get(params.s, "s")? as u32;
            guard(s >= 1 && t >= s + 1, "need s >= 1 and t >= s + 1")?;
            guard(n >= 1, "need n >= 1")?;
            let a = (n - 1).checked_pow(t - s + 1).ok_or(ov.clone())?;
            let b = c2.checked_pow(s - 1).ok_or(ov.clone())?;
            a.checked_mul(b).ok_or(ov)
        }
        SumK3 => {
            let s = Params::get(params.s, "s")? as u64;
            Ok(match s {
                0..=2 => s * c2,
                3 => n * n.saturating_sub(1),
                _ => s * (n * n / 4),
            })
        }
        SumBipartite => {
            let f = params.graph()?;
            guard(bipartition_min_class(&f).is_ok(), "F must be bipartite")?;
            guard(f.edge_count() >= 1, "F must have an edge")?;
            Ok((f.edge_count() as u64 - 1) * c2)
        }
        SumGeneralUpper => {
            let t = Params::get(params.t, "t")?;
            let fam = params.family.as_ref().ok_or(ConstructionError::MissingParameter("family"))?;
            let f1 = fam.members()[0];
            guard(f1.edge_count() >= 1, "F1 must have an edge")?;
            let m = f1.edge_count() - 1;
            guard(t >= m, "need t >= |E(F1)| - 1")?;
            let rest = &fam.members()[1..];
            let head = if m == 0 {
                0
            } else if rest.is_empty() {
                m as u64 * c2
            } else {
                let others = PatternFamily::new(rest.iter().copied())?;
                inner_search(Mode::Sum, n as usize, m, &others, params.budget())?.value
            };
            let ex = turan_exact_with(n as usize, &PatternFamily::single(f1), params.budget())
                .map_err(ConstructionError::InnerInfeasible)?
                .value;
            Ok(head + (t - m) as u64 * ex)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::is_rainbow_free;
    use crate::pattern::parse_pattern;

    fn certify(id: ConstructionId, p: &Params) -> Built {
        let b = construct(id, p).unwrap();
        assert!(is_rainbow_free(&b.collection, &b.forbidden), "{id} not free");
        assert_eq!(b.collection.edge_counts(), b.expected_edges, "{id} counts");
        b
    }

    #[test]
    fn min_iii_example() {
        let b = certify(ConstructionId::MinIII, &Params::new().n(8).t(3).p(2).s(2));
        assert_eq!(b.expected_edges, vec![7; 3]);
        for g in b.collection.graphs() {
            assert_eq!(g.degree(0), 7);
        }
    }

    #[test]
    fn prod_matching_example() {
        let b = certify(ConstructionId::ProdMatching, &Params::new().n(5).t(3).s(2));
        assert_eq!(b.expected_edges, vec![10, 4, 4]);
        assert_eq!(b.expected_edges.iter().product::<usize>(), 160);
    }

    #[test]
    fn kpp_remark_example() {
        let b = certify(ConstructionId::MinKppRemark, &Params::new().n(10).t(4).s(3).p(2));
        assert_eq!(b.expected_edges, vec![14, 14, 7, 7]);
        assert!(b.expected_edges.iter().all(|&e| e >= 7));
    }

    #[test]
    fn split_constructions() {
        let k3 = parse_pattern("K3").unwrap();
        let b = certify(ConstructionId::MinI, &Params::new().n(7).t(3).s(2).f(k3));
        assert_eq!(b.expected_edges, vec![10; 3]);
        let k33 = parse_pattern("K3,3").unwrap();
        certify(ConstructionId::MinII, &Params::new().n(8).t(3).s(2).f(k33));
        let p4 = parse_pattern("P4").unwrap();
        certify(ConstructionId::MinIV, &Params::new().n(8).t(4).s(3).f(p4));
    }

    #[test]
    fn star_cases() {
        certify(ConstructionId::ProdStarGt, &Params::new().n(12).t(4).s(1).r(3));
        certify(ConstructionId::ProdStarEq, &Params::new().n(12).t(4).s(2).r(3));
        let b = certify(ConstructionId::ProdStarLt, &Params::new().n(12).t(3).s(2).r(3));
        assert_eq!(b.expected_edges.len(), 3);
        certify(ConstructionId::ProdStar2, &Params::new().n(12).t(3).s(2));
    }

    #[test]
    fn guards_reject() {
        let e = construct(ConstructionId::ProdStarGt, &Params::new().n(12).t(3).s(2).r(3));
        assert!(matches!(e, Err(ConstructionError::GuardViolated(_))));
        let e = construct(ConstructionId::MinI, &Params::new().n(7).t(3).s(2).f(parse_pattern("P3").unwrap()));
        assert!(matches!(e, Err(ConstructionError::GuardViolated(_))));
        let e = construct(ConstructionId::MinIII, &Params::new().n(8).t(3).p(2));
        assert_eq!(e, Err(ConstructionError::MissingParameter("s")));
        let bad = Collection::new(3, 3).unwrap();
        let e = construct(
            ConstructionId::MinI,
            &Params::new().n(7).t(3).s(2).f(parse_pattern("K3").unwrap()).inner(bad),
        );
        assert_eq!(e, Err(ConstructionError::InnerTooLarge { expected: 2, found: 3 }));
    }

    #[test]
    fn formula_examples() {
        assert_eq!(claimed_value(FormulaId::Meshulam, &Params::new().n(5).s(2)), Ok(7));
        assert_eq!(claimed_value(FormulaId::ProdMatching, &Params::new().n(6).t(4).s(2)), Ok(1875));
        assert_eq!(claimed_value(FormulaId::SumK3, &Params::new().n(5).s(3)), Ok(20));
        assert_eq!(claimed_value(FormulaId::SumK3, &Params::new().n(5).s(5)), Ok(30));
        let p3 = parse_pattern("P3").unwrap();
        assert_eq!(claimed_value(FormulaId::SumBipartite, &Params::new().n(5).f(p3)), Ok(10));
        let k3 = parse_pattern("K3").unwrap();
        assert_eq!(claimed_value(FormulaId::MinI, &Params::new().n(4).t(3).s(1).f(k3)), Ok(3));
        let fam = PatternFamily::parse("{K3,M2}").unwrap();
        // ex_2^sum(4, M2) = 6 plus ex(4, K3) = 4
        assert_eq!(claimed_value(FormulaId::SumGeneralUpper, &Params::new().n(4).t(3).family(fam)), Ok(10));
    }

    #[test]
    fn star_shape_test() {
        for (f, want) in [("S3", true), ("M3", true), ("S2+2M", true), ("K3", false), ("P4", false), ("E3", true)] {
            assert_eq!(is_star_with_isolated_edges(&parse_pattern(f).unwrap()), want, "{f}");
        }
    }
}
