//! Backtracking embedding of small patterns into a host, with the rainbow
//! colour assignment decided incrementally as a bipartite matching between
//! pattern edges and colours.
//!
//! Full enumerations break pattern symmetry with ordering constraints
//! `map(v) < map(w)` taken from a pointwise-stabilizer chain of the pattern's
//! automorphism group, so each image subgraph is visited once.

use alloc::vec::Vec;

use crate::collection::{Collection, Color, MAX_COLORS};
use crate::graph::{bit, low_mask, Bits, Graph, MAX_VERTICES};

const NONE: u8 = u8::MAX;

/// Per-pair colour sets of a collection plus its union graph, kept in a
/// form that is cheap to update edge by edge.
#[derive(Clone)]
pub struct Host {
    n: usize,
    t: usize,
    union: [u32; MAX_VERTICES],
    colors: [[u64; MAX_VERTICES]; MAX_VERTICES],
}

impl Host {
    pub fn new(n: usize, t: usize) -> Self {
        assert!(n <= MAX_VERTICES && t <= MAX_COLORS);
        Host {
            n,
            t,
            union: [0; MAX_VERTICES],
            colors: [[0; MAX_VERTICES]; MAX_VERTICES],
        }
    }

    pub fn from_collection(c: &Collection) -> Self {
        let mut h = Host::new(c.n(), c.t());
        for (i, g) in c.graphs().iter().enumerate() {
            for (u, v) in g.edges() {
                h.add(i, u, v);
            }
        }
        h
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn t(&self) -> usize {
        self.t
    }

    #[inline]
    pub fn add(&mut self, color: Color, u: usize, v: usize) {
        self.colors[u][v] |= 1 << color;
        self.colors[v][u] |= 1 << color;
        self.union[u] |= bit(v);
        self.union[v] |= bit(u);
    }

    #[inline]
    pub fn remove(&mut self, color: Color, u: usize, v: usize) {
        self.colors[u][v] &= !(1 << color);
        self.colors[v][u] &= !(1 << color);
        if self.colors[u][v] == 0 {
            self.union[u] &= !bit(v);
            self.union[v] &= !bit(u);
        }
    }

    /// Replaces the colour set of `uv`.
    #[inline]
    pub fn set_pair(&mut self, u: usize, v: usize, mask: u64) {
        self.colors[u][v] = mask;
        self.colors[v][u] = mask;
        if mask == 0 {
            self.union[u] &= !bit(v);
            self.union[v] &= !bit(u);
        } else {
            self.union[u] |= bit(v);
            self.union[v] |= bit(u);
        }
    }

    #[inline]
    pub fn pair(&self, u: usize, v: usize) -> u64 {
        self.colors[u][v]
    }

    pub fn union_rows(&self) -> &[u32] {
        &self.union[..self.n]
    }

    pub fn to_collection(&self) -> Collection {
        let mut c = Collection::new(self.n, self.t).expect("host shape is valid");
        for u in 0..self.n {
            for v in Bits(self.union[u] & !low_mask(u + 1)) {
                let mut m = self.colors[u][v];
                while m != 0 {
                    let i = m.trailing_zeros() as usize;
                    m &= m - 1;
                    c.graph_mut(i).add_edge(u, v);
                }
            }
        }
        c
    }
}

/// Visiting order and constraints for one enumeration.
#[derive(Clone, Debug)]
struct Plan {
    order: Vec<u8>,
    /// earlier neighbours of `order[k]`
    back: Vec<u32>,
    /// edges completed when `order[k]` is placed
    new_edges: Vec<Vec<u8>>,
    /// earlier `w` with `map(order[k]) < map(w)`
    less: Vec<u32>,
    /// earlier `w` with `map(w) < map(order[k])`
    greater: Vec<u32>,
}

/// A pattern with its enumeration plans precomputed.
#[derive(Clone, Debug)]
pub struct PreparedPattern {
    graph: Graph,
    edges: Vec<(u8, u8)>,
    edge_index: [[u8; MAX_VERTICES]; MAX_VERTICES],
    full: Plan,
    /// representatives of arc orbits, each with a plan starting at the arc
    arcs: Vec<(u8, u8, Plan)>,
    /// representatives of core vertex orbits, each with a plan starting there
    anchors: Vec<(u8, Plan)>,
    lexicographic: Plan,
}

impl PreparedPattern {
    pub fn new(graph: Graph) -> Self {
        let core = graph.touched();
        let edges: Vec<(u8, u8)> = graph.edges().map(|(u, v)| (u as u8, v as u8)).collect();
        let mut edge_index = [[NONE; MAX_VERTICES]; MAX_VERTICES];
        for (k, &(u, v)) in edges.iter().enumerate() {
            let k = k.min(NONE as usize - 1) as u8;
            edge_index[u as usize][v as usize] = k;
            edge_index[v as usize][u as usize] = k;
        }
        let full = build_plan(&graph, core, &[], true, &edge_index);

        let mut arcs = Vec::new();
        let mut covered: Vec<(usize, usize)> = Vec::new();
        for (a, b) in graph.edges() {
            for (x, y) in [(a, b), (b, a)] {
                if covered.contains(&(x, y)) {
                    continue;
                }
                for (c, d) in graph.edges().flat_map(|(c, d)| [(c, d), (d, c)]) {
                    if !covered.contains(&(c, d))
                        && exists_automorphism(&graph, core, &[(x, c), (y, d)])
                    {
                        covered.push((c, d));
                    }
                }
                arcs.push((x as u8, y as u8, build_plan(&graph, core, &[x, y], true, &edge_index)));
            }
        }

        let mut anchors = Vec::new();
        let mut seen = 0u32;
        for x in Bits(core) {
            if seen & bit(x) != 0 {
                continue;
            }
            for y in Bits(core & !seen) {
                if exists_automorphism(&graph, core, &[(x, y)]) {
                    seen |= bit(y);
                }
            }
            anchors.push((x as u8, build_plan(&graph, core, &[x], true, &edge_index)));
        }

        let lexicographic = build_plan(
            &graph,
            graph.vertices(),
            &(0..graph.n()).collect::<Vec<_>>(),
            false,
            &edge_index,
        );
        PreparedPattern {
            graph,
            edges,
            edge_index,
            full,
            arcs,
            anchors,
            lexicographic,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of arc-orbit representatives (used by tests).
    pub fn arc_representatives(&self) -> usize {
        self.arcs.len()
    }

    fn fits(&self, n: usize) -> bool {
        self.graph.n() <= n
    }

    /// True if the host contains a rainbow copy.
    pub fn rainbow_in(&self, host: &Host) -> bool {
        if !self.fits(host.n) || self.edges.len() > host.t {
            return false;
        }
        if self.edges.is_empty() {
            return true;
        }
        let mut run = Run::new(self, &self.full, host.union_rows(), Some(host), None);
        run.go(0, 0, &mut |_, _| true)
    }

    /// True if the host contains a rainbow copy using the pair `uv`, with
    /// that pair assigned `color` when one is given.
    pub fn rainbow_through(&self, host: &Host, u: usize, v: usize, color: Option<Color>) -> bool {
        if !self.fits(host.n) || self.edges.is_empty() || self.edges.len() > host.t {
            return false;
        }
        self.arcs.iter().any(|(a, b, plan)| {
            let forced = (self.edge_index[*a as usize][*b as usize], color);
            let mut run = Run::new(self, plan, host.union_rows(), Some(host), Some(forced));
            run.seed(&[(*a as usize, u), (*b as usize, v)])
                && run.go(2, bit(u) | bit(v), &mut |_, _| true)
        })
    }

    /// Plain (uncoloured) subgraph containment.
    pub fn contained_in(&self, g: &Graph) -> bool {
        if !self.fits(g.n()) {
            return false;
        }
        if self.edges.is_empty() {
            return true;
        }
        let mut run = Run::new(self, &self.full, g.rows(), None, None);
        run.go(0, 0, &mut |_, _| true)
    }

    /// Plain containment of a copy whose non-isolated part uses vertex `v`.
    pub fn contained_through_vertex(&self, g: &Graph, v: usize) -> bool {
        if !self.fits(g.n()) || self.edges.is_empty() {
            return false;
        }
        self.anchors.iter().any(|(a, plan)| {
            let mut run = Run::new(self, plan, g.rows(), None, None);
            run.seed(&[(*a as usize, v)]) && run.go(1, bit(v), &mut |_, _| true)
        })
    }

    /// The rainbow copy with lexicographically smallest vertex map, and for
    /// that map the lexicographically smallest colour map.
    pub fn first_witness(&self, host: &Host) -> Option<(Vec<usize>, Vec<Color>)> {
        if !self.fits(host.n) || self.edges.len() > host.t {
            return None;
        }
        // cheap existence test before the unpruned lexicographic scan
        if !self.edges.is_empty() && !self.rainbow_in(host) {
            return None;
        }
        let mut found: Option<Vec<usize>> = None;
        let mut run = Run::new(self, &self.lexicographic, host.union_rows(), Some(host), None);
        run.go(0, 0, &mut |map, _| {
            found = Some(map[..self.graph.n()].iter().map(|&x| x as usize).collect());
            true
        });
        let vmap = found?;
        let masks: Vec<u64> = self
            .edges
            .iter()
            .map(|&(x, y)| host.pair(vmap[x as usize], vmap[y as usize]))
            .collect();
        Some((vmap, smallest_assignment(&masks)))
    }
}

/// Lexicographically smallest system of distinct colours, assuming one
/// exists.
fn smallest_assignment(masks: &[u64]) -> Vec<Color> {
    let mut out = Vec::with_capacity(masks.len());
    let mut used = 0u64;
    for k in 0..masks.len() {
        let mut cand = masks[k] & !used;
        loop {
            let c = cand.trailing_zeros() as usize;
            let rest: Vec<u64> = masks[k + 1..].iter().map(|m| m & !used & !(1 << c)).collect();
            if has_perfect_sdr(&rest) {
                out.push(c);
                used |= 1 << c;
                break;
            }
            cand &= cand - 1;
            debug_assert!(cand != 0, "caller guarantees an assignment exists");
        }
    }
    out
}

/// Maximum matching of left items into colours, given each item's colour
/// mask. Returns the matched colour per item.
pub(crate) fn max_color_matching(masks: &[u64]) -> Vec<Option<Color>> {
    let mut owner = [NONE; MAX_COLORS];
    let mut assign = alloc::vec![NONE; masks.len()];
    for e in 0..masks.len() {
        let mut visited = 0u64;
        augment(e, masks, &mut assign, &mut owner, &mut visited);
    }
    assign
        .into_iter()
        .map(|c| (c != NONE).then_some(c as usize))
        .collect()
}

pub(crate) fn has_perfect_sdr(masks: &[u64]) -> bool {
    if masks.len() > MAX_COLORS {
        return false;
    }
    let mut owner = [NONE; MAX_COLORS];
    let mut assign = alloc::vec![NONE; masks.len()];
    (0..masks.len()).all(|e| {
        let mut visited = 0u64;
        augment(e, masks, &mut assign, &mut owner, &mut visited)
    })
}

fn augment(e: usize, masks: &[u64], assign: &mut [u8], owner: &mut [u8; MAX_COLORS], visited: &mut u64) -> bool {
    let mut cand = masks[e] & !*visited;
    while cand != 0 {
        let c = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        *visited |= 1 << c;
        let prev = owner[c];
        if prev == NONE || augment(prev as usize, masks, assign, owner, visited) {
            owner[c] = e as u8;
            assign[e] = c as u8;
            return true;
        }
    }
    false
}

struct Run<'a> {
    pat: &'a PreparedPattern,
    plan: &'a Plan,
    rows: &'a [u32],
    host: Option<&'a Host>,
    /// edge index forced into a colour, or merely required to be used
    forced: Option<(u8, Option<Color>)>,
    degree_at_least: [u32; MAX_VERTICES + 1],
    pattern_degree: [u8; MAX_VERTICES],
    map: [u8; MAX_VERTICES],
    masks: [u64; MAX_COLORS],
    assign: [u8; MAX_COLORS],
    owner: [u8; MAX_COLORS],
}

impl<'a> Run<'a> {
    fn new(
        pat: &'a PreparedPattern,
        plan: &'a Plan,
        rows: &'a [u32],
        host: Option<&'a Host>,
        forced: Option<(u8, Option<Color>)>,
    ) -> Self {
        let mut degree_at_least = [0u32; MAX_VERTICES + 1];
        for (v, r) in rows.iter().enumerate() {
            for d in degree_at_least.iter_mut().take(r.count_ones() as usize + 1) {
                *d |= bit(v);
            }
        }
        let mut pattern_degree = [0u8; MAX_VERTICES];
        for (x, d) in pattern_degree.iter_mut().enumerate().take(pat.graph.n()) {
            *d = pat.graph.degree(x) as u8;
        }
        Run {
            pat,
            plan,
            rows,
            host,
            forced,
            degree_at_least,
            pattern_degree,
            map: [NONE; MAX_VERTICES],
            masks: [0; MAX_COLORS],
            assign: [NONE; MAX_COLORS],
            owner: [NONE; MAX_COLORS],
        }
    }

    fn allowed(&self, e: u8) -> u64 {
        match self.forced {
            Some((f, Some(c))) if f == e => 1 << c,
            Some((_, Some(c))) => !(1u64 << c),
            _ => u64::MAX,
        }
    }

    /// Places the first `fixed.len()` plan vertices; they must match the
    /// plan's prefix. Returns false if the prefix is already infeasible.
    fn seed(&mut self, fixed: &[(usize, usize)]) -> bool {
        for (k, &(x, h)) in fixed.iter().enumerate() {
            debug_assert_eq!(self.plan.order[k] as usize, x);
            if self.rows.len() <= h {
                return false;
            }
            let d = self.pattern_degree[x] as usize;
            if self.degree_at_least[d] & bit(h) == 0 {
                return false;
            }
            for y in Bits(self.plan.back[k]) {
                if self.rows[self.map[y] as usize] & bit(h) == 0 {
                    return false;
                }
            }
            self.map[x] = h as u8;
            if !self.add_edges(k) {
                return false;
            }
        }
        true
    }

    /// Matches the edges completed at step `k`; false if some cannot be
    /// given a distinct colour.
    fn add_edges(&mut self, k: usize) -> bool {
        let Some(host) = self.host else {
            return true;
        };
        for &e in &self.plan.new_edges[k] {
            let (x, y) = self.pat.edges[e as usize];
            let m = host.pair(self.map[x as usize] as usize, self.map[y as usize] as usize)
                & self.allowed(e);
            self.masks[e as usize] = m;
            let mut visited = 0u64;
            if !augment(
                e as usize,
                &self.masks[..self.pat.edges.len()],
                &mut self.assign[..self.pat.edges.len()],
                &mut self.owner,
                &mut visited,
            ) {
                return false;
            }
        }
        true
    }

    fn go(&mut self, k: usize, used: u32, visit: &mut dyn FnMut(&[u8], &[u8]) -> bool) -> bool {
        let plan = self.plan;
        if k == plan.order.len() {
            return visit(&self.map, &self.assign);
        }
        let x = plan.order[k] as usize;
        let mut cand = low_mask(self.rows.len()) & !used;
        cand &= self.degree_at_least[self.pattern_degree[x] as usize];
        for y in Bits(plan.back[k]) {
            cand &= self.rows[self.map[y] as usize];
        }
        for w in Bits(plan.less[k]) {
            cand &= low_mask(self.map[w] as usize);
        }
        for w in Bits(plan.greater[k]) {
            cand &= !low_mask(self.map[w] as usize + 1);
        }
        if cand == 0 {
            return false;
        }
        let saved = if self.host.is_some() && !plan.new_edges[k].is_empty() {
            Some((self.assign, self.owner))
        } else {
            None
        };
        for h in Bits(cand) {
            self.map[x] = h as u8;
            if self.add_edges(k) && self.go(k + 1, used | bit(h), visit) {
                return true;
            }
            if let Some((a, o)) = saved {
                self.assign = a;
                self.owner = o;
            }
        }
        self.map[x] = NONE;
        false
    }
}

fn build_plan(
    g: &Graph,
    place: u32,
    prefix: &[usize],
    symmetry: bool,
    edge_index: &[[u8; MAX_VERTICES]; MAX_VERTICES],
) -> Plan {
    let mut order: Vec<u8> = prefix.iter().map(|&x| x as u8).collect();
    let mut placed = prefix.iter().fold(0u32, |m, &x| m | bit(x));
    while placed & place != place {
        let x = Bits(place & !placed)
            .max_by_key(|&x| {
                (
                    (g.row(x) & placed).count_ones(),
                    g.degree(x),
                    core::cmp::Reverse(x),
                )
            })
            .expect("unplaced vertex remains");
        order.push(x as u8);
        placed |= bit(x);
    }

    let mut before = 0u32;
    let mut back = Vec::with_capacity(order.len());
    let mut new_edges = Vec::with_capacity(order.len());
    for &x in &order {
        let x = x as usize;
        let b = g.row(x) & before;
        back.push(b);
        new_edges.push(Bits(b).map(|y| edge_index[x][y]).collect());
        before |= bit(x);
    }

    let mut less_rel = [0u32; MAX_VERTICES];
    if symmetry {
        let core = g.touched() & place;
        let mut fixed: Vec<usize> = prefix.to_vec();
        loop {
            let mut progressed = false;
            for &v in &order {
                let v = v as usize;
                if fixed.contains(&v) || core & bit(v) == 0 {
                    continue;
                }
                let mut orbit = 0u32;
                let base: Vec<(usize, usize)> = fixed.iter().map(|&s| (s, s)).collect();
                for w in Bits(core & !bit(v)) {
                    if fixed.contains(&w) || g.degree(w) != g.degree(v) {
                        continue;
                    }
                    let mut pairs = base.clone();
                    pairs.push((v, w));
                    if exists_automorphism(g, core, &pairs) {
                        orbit |= bit(w);
                    }
                }
                if orbit != 0 {
                    less_rel[v] |= orbit;
                    fixed.push(v);
                    progressed = true;
                    break;
                }
            }
            if !progressed {
                break;
            }
        }
    }

    let mut position = [usize::MAX; MAX_VERTICES];
    for (k, &x) in order.iter().enumerate() {
        position[x as usize] = k;
    }
    let mut less = alloc::vec![0u32; order.len()];
    let mut greater = alloc::vec![0u32; order.len()];
    for v in 0..g.n() {
        for w in Bits(less_rel[v]) {
            // map(v) < map(w), enforced at whichever is placed second
            if position[v] > position[w] {
                less[position[v]] |= bit(w);
            } else {
                greater[position[w]] |= bit(v);
            }
        }
    }
    Plan {
        order,
        back,
        new_edges,
        less,
        greater,
    }
}

/// Is there an automorphism of `g` (restricted to `core`) extending the
/// partial map `pairs`?
pub(crate) fn exists_automorphism(g: &Graph, core: u32, pairs: &[(usize, usize)]) -> bool {
    let mut sigma = [NONE; MAX_VERTICES];
    let mut used = 0u32;
    for &(x, y) in pairs {
        if core & bit(x) == 0 || core & bit(y) == 0 || g.degree(x) != g.degree(y) {
            return false;
        }
        if sigma[x] != NONE && sigma[x] as usize != y {
            return false;
        }
        if sigma[x] == NONE {
            if used & bit(y) != 0 {
                return false;
            }
            sigma[x] = y as u8;
            used |= bit(y);
        }
    }
    let assigned: Vec<usize> = (0..g.n()).filter(|&x| sigma[x] != NONE).collect();
    for (i, &a) in assigned.iter().enumerate() {
        for &b in &assigned[i + 1..] {
            if g.has_edge(a, b) != g.has_edge(sigma[a] as usize, sigma[b] as usize) {
                return false;
            }
        }
    }
    let rest: Vec<usize> = Bits(core).filter(|&x| sigma[x] == NONE).collect();
    fn go(g: &Graph, core: u32, rest: &[usize], sigma: &mut [u8; MAX_VERTICES], used: u32) -> bool {
        let Some((&x, tail)) = rest.split_first() else {
            return true;
        };
        let mut cand = core & !used;
        for y in Bits(core) {
            let s = sigma[y];
            if s == NONE {
                continue;
            }
            if g.has_edge(x, y) {
                cand &= g.row(s as usize);
            } else {
                cand &= !g.row(s as usize);
            }
        }
        for h in Bits(cand) {
            if g.degree(h) != g.degree(x) {
                continue;
            }
            sigma[x] = h as u8;
            if go(g, core, tail, sigma, used | bit(h)) {
                return true;
            }
        }
        sigma[x] = NONE;
        false
    }
    go(g, core, &rest, &mut sigma, used)
}

/// Calls `visit` on every vertex map of `pattern` into `host_rows` (plain
/// containment, no symmetry breaking). Test support for counting.
#[cfg(test)]
pub(crate) fn count_embeddings(pattern: &Graph, host: &Graph, symmetric: bool) -> usize {
    let p = PreparedPattern::new(*pattern);
    let plan = if symmetric { p.full.clone() } else {
        build_plan(pattern, pattern.touched(), &[], false, &p.edge_index)
    };
    let mut run = Run::new(&p, &plan, host.rows(), None, None);
    let mut count = 0;
    run.go(0, 0, &mut |_, _| {
        count += 1;
        false
    });
    count
}
