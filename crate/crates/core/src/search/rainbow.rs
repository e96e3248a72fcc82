//! The three rainbow extremal objectives.
//!
//! Colour symmetry: rainbow-freeness is invariant under permuting colours,
//! so colours may be sorted. The first colour is one of maximum size and is
//! enumerated up to isomorphism, which fixes the vertex labelling; the
//! remaining colours are then sorted by `(edge count, pair mask)`
//! nonincreasing. Every collection is equivalent to one in this form.
//!
//! Freeness is maintained incrementally: a new edge can only complete
//! copies that pass through it.

use alloc::vec;
use alloc::vec::Vec;

use super::{
    binom2, combine, generate::graph_classes, pair_list, turan::turan_shared, BranchOutcome,
    Counter, Executor, ExtremalQuery, ExtremalResult, Mode, SearchError, Sequential, Shared,
    MAX_SEARCH_VERTICES,
};
use crate::collection::{Collection, MAX_COLORS};
use crate::detect::FamilyMatcher;
use crate::embed::Host;
use crate::family::PatternFamily;
use crate::graph::Graph;

/// Largest `e` such that some rainbow-free collection has `e` edges in every
/// colour.
pub fn extremal_min(n: usize, t: usize, fam: &PatternFamily) -> Result<ExtremalResult, SearchError> {
    extremal(&ExtremalQuery::new(Mode::Min, n, t, fam.clone()), &Sequential)
}

/// Largest total edge count of a rainbow-free collection.
pub fn extremal_sum(n: usize, t: usize, fam: &PatternFamily) -> Result<ExtremalResult, SearchError> {
    extremal(&ExtremalQuery::new(Mode::Sum, n, t, fam.clone()), &Sequential)
}

/// Largest product of colour sizes of a rainbow-free collection.
pub fn extremal_prod(n: usize, t: usize, fam: &PatternFamily) -> Result<ExtremalResult, SearchError> {
    extremal(&ExtremalQuery::new(Mode::Prod, n, t, fam.clone()), &Sequential)
}

/// Runs `q` with branches scheduled by `exec`.
pub fn extremal(q: &ExtremalQuery, exec: &dyn Executor) -> Result<ExtremalResult, SearchError> {
    let (n, t) = (q.n, q.t);
    if t == 0 {
        return Err(SearchError::NoColors);
    }
    if t > MAX_COLORS {
        return Err(SearchError::TooManyColors(t));
    }
    if n == 0 || n > MAX_SEARCH_VERTICES {
        return Err(SearchError::TooManyVertices {
            n,
            limit: MAX_SEARCH_VERTICES,
        });
    }
    let full = binom2(n) as u64;
    if q.mode == Mode::Prod && full.checked_pow(t as u32).is_none() {
        return Err(SearchError::Overflow);
    }
    let objective = |per_color: u64| match q.mode {
        Mode::Min => per_color,
        Mode::Sum => per_color * t as u64,
        Mode::Prod => per_color.pow(t as u32),
    };
    let shared = Shared::new(q.budget);
    let done = |value: u64, witness: Option<Collection>, exact: bool| ExtremalResult {
        value,
        witness,
        nodes: shared.nodes(),
        exact,
    };

    // Members that cannot fit, or have more edges than there are colours,
    // never occur rainbow.
    let relevant: Vec<Graph> = q
        .family
        .iter()
        .filter(|f| f.n() <= n && f.edge_count() <= t)
        .copied()
        .collect();
    if relevant.iter().any(|f| f.edge_count() == 0) {
        return Ok(done(0, None, true));
    }
    if relevant.is_empty() {
        let complete = Graph::complete(n).expect("n within limits");
        return Ok(done(objective(full), Some(repeated(complete, t)), true));
    }
    let fam = PatternFamily::new(relevant).expect("nonempty family of graphs with edges");

    // t copies of an extremal graph for the family is always free.
    let turan = turan_shared(n, &fam, &shared)?;
    let base = turan.witness.expect("family has no edgeless member");
    let lower = turan.value;
    let fallback = repeated(base, t);
    if lower == 0 {
        return Ok(done(0, Some(Collection::new(n, t).expect("valid shape")), true));
    }

    let ctx = Context {
        n,
        t,
        matcher: FamilyMatcher::new(&fam),
        pairs: pair_list(n),
    };
    let outcome = match q.mode {
        Mode::Min => ctx.min_scan(lower, fallback, exec, &shared),
        Mode::Sum | Mode::Prod => {
            shared.offer(objective(lower));
            ctx.optimize(q.mode, lower as usize, exec, &shared)
                .map(|best| best.unwrap_or((objective(lower), fallback)))
        }
    };
    Ok(match outcome {
        Some((value, witness)) => done(value, Some(witness), !shared.exhausted()),
        // generation ran out of budget before any branch ran
        None => done(objective(lower), Some(repeated(base, t)), false),
    })
}

fn repeated(g: Graph, t: usize) -> Collection {
    Collection::repeated(g, t).expect("valid shape")
}

struct Context {
    n: usize,
    t: usize,
    matcher: FamilyMatcher,
    pairs: Vec<(u8, u8)>,
}

impl Context {
    /// Raises `e` from the known lower bound until it becomes infeasible.
    fn min_scan(
        &self,
        lower: u64,
        fallback: Collection,
        exec: &dyn Executor,
        shared: &Shared,
    ) -> Option<(u64, Collection)> {
        let mut best = (lower, fallback);
        for e in lower as usize + 1..=self.pairs.len() {
            shared.reset_hits();
            // Deleting edges keeps a collection free, so every colour may be
            // assumed to have exactly e edges.
            let Ok(classes) = graph_classes(self.n, e, &|_, _| true, shared) else {
                break;
            };
            let classes: Vec<Graph> = classes.into_iter().filter(|g| g.edge_count() == e).collect();
            let task = |i: usize| {
                if shared.superseded(i) {
                    return BranchOutcome::default();
                }
                let mut s = ColorSearch::new(self, &classes[i], Goal::Feasible(e), i, shared);
                s.start_color(1);
                BranchOutcome { best: s.found }
            };
            let found = combine(exec.run(classes.len(), &task));
            match found {
                Some((_, w)) => best = (e as u64, w),
                None => break,
            }
            if shared.exhausted() {
                break;
            }
        }
        Some(best)
    }

    /// Branch and bound over first-colour classes for the sum and product
    /// objectives. `None` if the budget ran out while generating classes.
    fn optimize(
        &self,
        mode: Mode,
        lower: usize,
        exec: &dyn Executor,
        shared: &Shared,
    ) -> Option<Option<(u64, Collection)>> {
        // the first colour is the largest, so it needs at least `lower` edges
        let mut classes = graph_classes(self.n, lower, &|_, _| true, shared).ok()?;
        classes.retain(|g| g.edge_count() >= lower);
        classes.sort_by_key(|g| core::cmp::Reverse(g.edge_count()));
        let t = self.t as u32;
        let task = |i: usize| {
            let g1 = &classes[i];
            let e1 = g1.edge_count() as u64;
            let ub = match mode {
                Mode::Sum => e1 * t as u64,
                _ => e1.pow(t),
            };
            if ub < shared.best() {
                return BranchOutcome::default();
            }
            if mode == Mode::Sum {
                let mut s = SumSearch::new(self, g1, shared);
                s.go(0, e1);
                BranchOutcome { best: s.found }
            } else {
                let mut s = ColorSearch::new(self, g1, Goal::Product, i, shared);
                s.start_color(1);
                BranchOutcome { best: s.found }
            }
        };
        Some(combine(exec.run(classes.len(), &task)))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Goal {
    /// every colour gets exactly this many edges; stop at the first success
    Feasible(usize),
    /// maximize the product of colour sizes
    Product,
}

/// Depth-first search over colours `1..t`, each chosen as a set of pairs
/// decided from the highest pair index down so the mask order can be
/// enforced while it is built.
struct ColorSearch<'a> {
    ctx: &'a Context,
    host: Host,
    goal: Goal,
    branch: usize,
    counter: Counter<'a>,
    counts: Vec<usize>,
    masks: Vec<u128>,
    found: Option<(u64, Collection)>,
}

impl<'a> ColorSearch<'a> {
    fn new(ctx: &'a Context, g1: &Graph, goal: Goal, branch: usize, shared: &'a Shared) -> Self {
        let mut host = Host::new(ctx.n, ctx.t);
        let mut mask = 0u128;
        for (i, &(u, v)) in ctx.pairs.iter().enumerate() {
            if g1.has_edge(u as usize, v as usize) {
                host.add(0, u as usize, v as usize);
                mask |= 1 << i;
            }
        }
        let mut counts = vec![0; ctx.t];
        let mut masks = vec![0; ctx.t];
        counts[0] = g1.edge_count();
        masks[0] = mask;
        ColorSearch {
            ctx,
            host,
            goal,
            branch,
            counter: Counter::new(shared),
            counts,
            masks,
            found: None,
        }
    }

    fn record(&mut self, value: u64) {
        let shared = self.counter.shared();
        let better = self.found.as_ref().map_or(true, |(v, _)| value > *v);
        if better && value >= shared.best() {
            self.found = Some((value, self.host.to_collection()));
            shared.offer(value);
        }
    }

    /// Chooses colour `c` and everything after it. Returns true to stop.
    fn start_color(&mut self, c: usize) -> bool {
        let top = self.ctx.pairs.len();
        match self.goal {
            Goal::Feasible(e) => {
                if c == self.ctx.t {
                    self.record(e as u64);
                    self.counter.shared().hit(self.branch);
                    return true;
                }
                // colour 1 is unconstrained relative to the first colour
                let (tight, prev) = if c >= 2 { (true, self.masks[c - 1]) } else { (false, u128::MAX) };
                self.counts[c] = e;
                self.fill(c, top, e, tight, prev, 0)
            }
            Goal::Product => {
                let before: u64 = self.counts[..c].iter().map(|&k| k as u64).product();
                if c == self.ctx.t {
                    self.record(before);
                    return false;
                }
                let prev_count = self.counts[c - 1];
                let rest = (self.ctx.t - c) as u32;
                for count in (1..=prev_count).rev() {
                    if before * (count as u64).pow(rest) < self.counter.shared().best() {
                        break;
                    }
                    self.counts[c] = count;
                    let tight = c >= 2 && count == prev_count;
                    let prev = if tight { self.masks[c - 1] } else { u128::MAX };
                    if self.fill(c, top, count, tight, prev, 0) {
                        return true;
                    }
                }
                false
            }
        }
    }

    /// Decides pairs `idx-1, ..., 0` for colour `c`, needing `need` more.
    /// `tight` means the mask so far equals `prev` on the decided pairs.
    fn fill(&mut self, c: usize, idx: usize, need: usize, tight: bool, prev: u128, cur: u128) -> bool {
        if need == 0 {
            self.masks[c] = cur;
            return self.start_color(c + 1);
        }
        if idx < need {
            return false;
        }
        if self.counter.tick() || self.counter.shared().superseded(self.branch) {
            return true;
        }
        let i = idx - 1;
        let bit = 1u128 << i;
        if !tight || prev & bit != 0 {
            let (u, v) = self.ctx.pairs[i];
            let (u, v) = (u as usize, v as usize);
            self.host.add(c, u, v);
            let ok = !self.ctx.matcher.has_copy_through(&self.host, u, v, Some(c));
            if ok && self.fill(c, i, need - 1, tight, prev, cur | bit) {
                self.host.remove(c, u, v);
                return true;
            }
            self.host.remove(c, u, v);
        }
        self.fill(c, i, need, tight && prev & bit == 0, prev, cur)
    }
}

/// Nested collections are determined by pair multiplicities, colour `i`
/// holding the pairs of multiplicity above `i`. Relabelling to nested form
/// keeps multiplicities and freeness, so the sum search may assume it. The
/// support is the first colour; undecided support pairs sit at multiplicity
/// one, the least they can have.
struct SumSearch<'a> {
    ctx: &'a Context,
    host: Host,
    support: Vec<(usize, usize)>,
    counter: Counter<'a>,
    found: Option<(u64, Collection)>,
}

impl<'a> SumSearch<'a> {
    fn new(ctx: &'a Context, g1: &Graph, shared: &'a Shared) -> Self {
        let mut host = Host::new(ctx.n, ctx.t);
        let support = g1.edge_vec();
        for &(u, v) in &support {
            host.set_pair(u, v, 1);
        }
        SumSearch {
            ctx,
            host,
            support,
            counter: Counter::new(shared),
            found: None,
        }
    }

    /// `sum` counts decided pairs at their value and the rest at one.
    fn go(&mut self, k: usize, sum: u64) -> bool {
        let shared = self.counter.shared();
        if k == self.support.len() {
            let better = self.found.as_ref().map_or(true, |(v, _)| sum > *v);
            if better && sum >= shared.best() {
                self.found = Some((sum, self.host.to_collection()));
                shared.offer(sum);
            }
            return false;
        }
        let t = self.ctx.t as u64;
        let undecided = (self.support.len() - k) as u64;
        if sum + (t - 1) * undecided < shared.best() {
            return false;
        }
        if self.counter.tick() {
            return true;
        }
        let (u, v) = self.support[k];
        for m in (1..=t).rev() {
            let mask = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
            self.host.set_pair(u, v, mask);
            if m == 1 || !self.ctx.matcher.has_copy_through(&self.host, u, v, None) {
                let stop = self.go(k + 1, sum + m - 1);
                if stop {
                    self.host.set_pair(u, v, 1);
                    return true;
                }
            }
        }
        self.host.set_pair(u, v, 1);
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::is_rainbow_free;

    fn fam(s: &str) -> PatternFamily {
        PatternFamily::parse(s).unwrap()
    }

    fn check(r: &ExtremalResult, mode: Mode, f: &PatternFamily) {
        let w = r.witness.as_ref().unwrap();
        assert!(is_rainbow_free(w, f));
        let counts = w.edge_counts();
        let value = match mode {
            Mode::Min => *counts.iter().min().unwrap() as u64,
            Mode::Sum => counts.iter().sum::<usize>() as u64,
            Mode::Prod => counts.iter().map(|&k| k as u64).product(),
        };
        assert_eq!(value, r.value);
        assert!(r.exact);
    }

    #[test]
    fn min_examples() {
        for (n, t, f, want) in [(4, 2, "{M2}", 3), (4, 3, "{K3,M2}", 3), (3, 2, "{M2}", 3), (5, 2, "{M2}", 4)] {
            let r = extremal_min(n, t, &fam(f)).unwrap();
            assert_eq!(r.value, want, "min n={n} t={t} {f}");
            check(&r, Mode::Min, &fam(f));
        }
    }

    #[test]
    fn sum_examples() {
        for (n, t, f, want) in [(4, 3, "{K3}", 12), (5, 3, "{K3}", 20), (5, 2, "{P3}", 10)] {
            let r = extremal_sum(n, t, &fam(f)).unwrap();
            assert_eq!(r.value, want, "sum n={n} t={t} {f}");
            check(&r, Mode::Sum, &fam(f));
        }
    }

    #[test]
    fn prod_examples() {
        for (n, t, f, want) in [(4, 2, "{M2}", 9), (4, 3, "{M2}", 27)] {
            let r = extremal_prod(n, t, &fam(f)).unwrap();
            assert_eq!(r.value, want, "prod n={n} t={t} {f}");
            check(&r, Mode::Prod, &fam(f));
        }
    }

    #[test]
    fn degenerate_families() {
        let r = extremal_prod(3, 2, &fam("{E1}")).unwrap();
        assert_eq!((r.value, r.witness), (0, None));
        let r = extremal_sum(3, 2, &fam("{E4}")).unwrap();
        assert_eq!(r.value, 6);
        let r = extremal_min(4, 2, &fam("{K2}")).unwrap();
        assert_eq!(r.value, 0);
        assert_eq!(r.witness.unwrap().total_edges(), 0);
        // a triangle needs three colours to be rainbow
        assert_eq!(extremal_min(4, 2, &fam("{K3}")).unwrap().value, 6);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(extremal_min(4, 0, &fam("{K3}")), Err(SearchError::NoColors));
        assert!(matches!(extremal_min(17, 2, &fam("{K3}")), Err(SearchError::TooManyVertices { .. })));
        assert_eq!(extremal_prod(16, 12, &fam("{K3}")), Err(SearchError::Overflow));
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let q = ExtremalQuery::new(Mode::Sum, 6, 3, fam("{K3}")).with_budget(50);
        let r = extremal(&q, &Sequential);
        match r {
            Ok(r) => {
                assert!(!r.exact);
                assert!(is_rainbow_free(r.witness.as_ref().unwrap(), &fam("{K3}")));
            }
            Err(e) => assert!(matches!(e, SearchError::BudgetExceeded { .. })),
        }
    }
}
