//! Exact extremal values by exhaustive search.
//!
//! Every search splits into independent branches, one per isomorphism class
//! of the first colour (or of the host graph, for Turán numbers). Branches
//! share a monotone best-value bound and a node counter through [`Shared`];
//! an [`Executor`] decides how branches are scheduled. The reported witness
//! is the first optimum in branch order, and within its branch the first in
//! depth-first order, so results do not depend on the executor unless the
//! node budget runs out.

use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};

use crate::collection::Collection;
use crate::family::PatternFamily;

pub mod generate;
mod rainbow;
pub mod turan;

pub use generate::graph_classes;
pub use rainbow::{extremal, extremal_min, extremal_prod, extremal_sum};
pub use turan::{turan_exact, turan_exact_with, TuranResult};

/// Largest vertex count the searches accept; pair sets must fit a `u128`.
pub const MAX_SEARCH_VERTICES: usize = 16;

/// Default node budget.
pub const DEFAULT_BUDGET: u64 = 2_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// largest `e` with every colour having at least `e` edges
    Min,
    /// largest total edge count
    Sum,
    /// largest product of edge counts
    Prod,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Min => "min",
            Mode::Sum => "sum",
            Mode::Prod => "prod",
        }
    }
}

impl core::str::FromStr for Mode {
    type Err = SearchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min" => Ok(Mode::Min),
            "sum" => Ok(Mode::Sum),
            "prod" => Ok(Mode::Prod),
            _ => Err(SearchError::UnknownMode),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalQuery {
    pub mode: Mode,
    pub n: usize,
    pub t: usize,
    pub family: PatternFamily,
    pub budget: u64,
}

impl ExtremalQuery {
    pub fn new(mode: Mode, n: usize, t: usize, family: PatternFamily) -> Self {
        ExtremalQuery {
            mode,
            n,
            t,
            family,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalResult {
    pub value: u64,
    /// `None` only when no collection at all is free, which happens exactly
    /// when the family has an edgeless member on at most `n` vertices.
    pub witness: Option<Collection>,
    pub nodes: u64,
    /// false if the node budget ran out; `value` is then a lower bound
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchError {
    TooManyVertices { n: usize, limit: usize },
    NoColors,
    TooManyColors(usize),
    /// the largest possible product does not fit in 64 bits
    Overflow,
    BudgetExceeded { nodes: u64 },
    UnknownMode,
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::TooManyVertices { n, limit } => {
                write!(f, "search supports at most {limit} vertices, got {n}")
            }
            SearchError::NoColors => write!(f, "need at least one colour"),
            SearchError::TooManyColors(t) => write!(f, "{t} colours exceeds the limit"),
            SearchError::Overflow => write!(f, "objective values overflow 64 bits"),
            SearchError::BudgetExceeded { nodes } => {
                write!(f, "node budget exhausted after {nodes} nodes")
            }
            SearchError::UnknownMode => write!(f, "mode must be one of min, sum, prod"),
        }
    }
}

/// State shared by all branches of one search.
#[derive(Debug)]
pub struct Shared {
    best: AtomicU64,
    nodes: AtomicU64,
    budget: u64,
    exhausted: AtomicBool,
    first_hit: AtomicUsize,
}

impl Shared {
    pub fn new(budget: u64) -> Self {
        Shared {
            best: AtomicU64::new(0),
            nodes: AtomicU64::new(0),
            budget,
            exhausted: AtomicBool::new(false),
            first_hit: AtomicUsize::new(usize::MAX),
        }
    }

    pub fn best(&self) -> u64 {
        self.best.load(Ordering::Relaxed)
    }

    pub fn offer(&self, value: u64) {
        self.best.fetch_max(value, Ordering::Relaxed);
    }

    pub fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    pub fn exhausted(&self) -> bool {
        self.exhausted.load(Ordering::Relaxed)
    }

    /// Records that branch `index` reached the target of a feasibility
    /// search; later branches may stop.
    pub fn hit(&self, index: usize) {
        self.first_hit.fetch_min(index, Ordering::Relaxed);
    }

    pub fn superseded(&self, index: usize) -> bool {
        self.first_hit.load(Ordering::Relaxed) < index
    }

    fn reset_hits(&self) {
        self.first_hit.store(usize::MAX, Ordering::Relaxed);
    }

    fn add_nodes(&self, k: u64) -> bool {
        let total = self.nodes.fetch_add(k, Ordering::Relaxed) + k;
        if total > self.budget {
            self.exhausted.store(true, Ordering::Relaxed);
        }
        self.exhausted()
    }
}

/// Per-branch node counter, flushed into [`Shared`] in batches.
pub(crate) struct Counter<'a> {
    shared: &'a Shared,
    local: u64,
}

impl<'a> Counter<'a> {
    pub(crate) fn new(shared: &'a Shared) -> Self {
        Counter { shared, local: 0 }
    }

    /// Counts a node; returns true once the budget is gone.
    #[inline]
    pub(crate) fn tick(&mut self) -> bool {
        self.local += 1;
        if self.local == 1024 {
            self.local = 0;
            return self.shared.add_nodes(1024);
        }
        false
    }

    pub(crate) fn shared(&self) -> &'a Shared {
        self.shared
    }
}

impl Drop for Counter<'_> {
    fn drop(&mut self) {
        self.shared.add_nodes(self.local);
    }
}

/// Result of one branch: its best value and the first witness attaining it.
#[derive(Clone, Debug, Default)]
pub struct BranchOutcome {
    pub best: Option<(u64, Collection)>,
}

/// Runs the branches of a search. Implementations may run them in any order
/// or concurrently but must return outcomes indexed by branch.
pub trait Executor {
    fn run(&self, count: usize, task: &(dyn Fn(usize) -> BranchOutcome + Sync)) -> Vec<BranchOutcome>;
}

/// Runs branches one after another.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn run(&self, count: usize, task: &(dyn Fn(usize) -> BranchOutcome + Sync)) -> Vec<BranchOutcome> {
        (0..count).map(task).collect()
    }
}

/// Best value over branches, the earliest branch winning ties.
pub(crate) fn combine(outcomes: Vec<BranchOutcome>) -> Option<(u64, Collection)> {
    let mut best: Option<(u64, Collection)> = None;
    for (value, witness) in outcomes.into_iter().filter_map(|o| o.best) {
        if best.as_ref().map_or(true, |(b, _)| value > *b) {
            best = Some((value, witness));
        }
    }
    best
}

pub(crate) fn binom2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Pairs `u < v` in lexicographic order.
pub(crate) fn pair_list(n: usize) -> Vec<(u8, u8)> {
    let mut out = Vec::with_capacity(binom2(n));
    for u in 0..n {
        for v in u + 1..n {
            out.push((u as u8, v as u8));
        }
    }
    out
}
