//! The pattern mini-language.
//!
//! ```text
//! K<k>        complete graph
//! K<a>,<b>    complete bipartite graph, parts 0..a and a..a+b
//! S<r>        star, centre 0 and leaves 1..=r
//! S<r>+<m>M   star plus m isolated edges (r+1+2i, r+2+2i)
//! M<k>        matching, edges (2i, 2i+1)
//! P<k>        path 0-1-...-(k-1)
//! E<k>        k isolated vertices
//! {A,B,...}   family of patterns
//! ```

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{Graph, GraphError, MAX_VERTICES};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternError {
    Parse { input: String, reason: &'static str },
    Size(usize),
}

impl fmt::Display for PatternError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternError::Parse { input, reason } => {
                write!(f, "cannot parse pattern {input:?}: {reason}")
            }
            PatternError::Size(n) => {
                write!(f, "pattern needs {n} vertices, limit is {MAX_VERTICES}")
            }
        }
    }
}

impl From<GraphError> for PatternError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::TooManyVertices(n) => PatternError::Size(n),
            // constructors below never produce bad edges
            _ => unreachable!("pattern constructor produced {e}"),
        }
    }
}

/// Complete bipartite graph `K_{a,b}`.
pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph, GraphError> {
    let mut g = Graph::new(a + b)?;
    for u in 0..a {
        for v in a..a + b {
            g.add_edge(u, v);
        }
    }
    Ok(g)
}

/// Star with `r` leaves and centre 0.
pub fn star(r: usize) -> Result<Graph, GraphError> {
    let mut g = Graph::new(r + 1)?;
    for v in 1..=r {
        g.add_edge(0, v);
    }
    Ok(g)
}

/// Matching with `k` edges.
pub fn matching(k: usize) -> Result<Graph, GraphError> {
    let mut g = Graph::new(2 * k)?;
    for i in 0..k {
        g.add_edge(2 * i, 2 * i + 1);
    }
    Ok(g)
}

/// Path on `k` vertices.
pub fn path(k: usize) -> Result<Graph, GraphError> {
    let mut g = Graph::new(k)?;
    for v in 1..k {
        g.add_edge(v - 1, v);
    }
    Ok(g)
}

/// Star `S_r` with `m` isolated edges added.
pub fn star_with_matching(r: usize, m: usize) -> Result<Graph, GraphError> {
    star(r)?.disjoint_union(&matching(m)?)
}

struct Cursor<'a> {
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(input: &'a str) -> Self {
        Cursor {
            input,
            bytes: input.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, reason: &'static str) -> PatternError {
        PatternError::Parse {
            input: self.input.to_string(),
            reason,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn peek_at(&self, off: usize) -> Option<u8> {
        self.bytes.get(self.pos + off).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<usize, PatternError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        // cap the length so absurd inputs report SizeError rather than overflow
        let digits = &self.input[start..self.pos];
        if digits.len() > 6 {
            return Err(PatternError::Size(usize::MAX));
        }
        Ok(digits.parse().expect("ascii digits"))
    }

    fn pattern(&mut self) -> Result<Graph, PatternError> {
        let kind = self.peek().ok_or_else(|| self.err("empty pattern"))?;
        self.pos += 1;
        let k = self.number()?;
        let g = match kind {
            b'K' => {
                // "K<a>,<b>" only when a digit follows the comma
                if self.peek() == Some(b',') && matches!(self.peek_at(1), Some(b'0'..=b'9')) {
                    self.pos += 1;
                    let b = self.number()?;
                    if k == 0 || b == 0 {
                        return Err(self.err("bipartite parts must be nonempty"));
                    }
                    complete_bipartite(k, b)?
                } else {
                    if k == 0 {
                        return Err(self.err("K0 is not a graph"));
                    }
                    Graph::complete(k)?
                }
            }
            b'S' => {
                if k == 0 {
                    return Err(self.err("a star needs at least one leaf"));
                }
                if self.eat(b'+') {
                    let m = self.number()?;
                    if !self.eat(b'M') {
                        return Err(self.err("expected 'M' after the isolated edge count"));
                    }
                    if m == 0 {
                        return Err(self.err("isolated edge count must be positive"));
                    }
                    star_with_matching(k, m)?
                } else {
                    star(k)?
                }
            }
            b'M' => {
                if k == 0 {
                    return Err(self.err("a matching needs at least one edge"));
                }
                matching(k)?
            }
            b'P' => {
                if k == 0 {
                    return Err(self.err("a path needs at least one vertex"));
                }
                path(k)?
            }
            b'E' => Graph::new(k)?,
            _ => return Err(self.err("unknown pattern letter")),
        };
        Ok(g)
    }
}

/// Parses a single pattern such as `"K3"`, `"K2,3"` or `"S3+2M"`.
pub fn parse_pattern(spec: &str) -> Result<Graph, PatternError> {
    let mut cur = Cursor::new(spec);
    let g = cur.pattern()?;
    if cur.pos != cur.bytes.len() {
        return Err(cur.err("trailing characters"));
    }
    Ok(g)
}

/// Parses `"{A,B,...}"` or a bare single pattern into its member graphs, in
/// the order written. Duplicates are kept; see
/// [`PatternFamily`](crate::family::PatternFamily) for deduplication.
pub fn parse_pattern_list(spec: &str) -> Result<Vec<Graph>, PatternError> {
    let mut cur = Cursor::new(spec);
    if !cur.eat(b'{') {
        return parse_pattern(spec).map(|g| alloc::vec![g]);
    }
    let mut out = Vec::new();
    loop {
        out.push(cur.pattern()?);
        if cur.eat(b',') {
            continue;
        }
        if cur.eat(b'}') {
            break;
        }
        return Err(cur.err("expected ',' or '}'"));
    }
    if cur.pos != cur.bytes.len() {
        return Err(cur.err("trailing characters after '}'"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_and_matching() {
        let k3 = parse_pattern("K3").unwrap();
        assert_eq!((k3.n(), k3.edge_count()), (3, 3));
        let m2 = parse_pattern("M2").unwrap();
        assert_eq!((m2.n(), m2.edge_vec()), (4, alloc::vec![(0, 1), (2, 3)]));
    }

    #[test]
    fn star_plus_matching_labeling() {
        let g = parse_pattern("S3+2M").unwrap();
        assert_eq!(g.n(), 8);
        assert_eq!(g.edge_count(), 5);
        assert_eq!(
            g.edge_vec(),
            [(0, 1), (0, 2), (0, 3), (4, 5), (6, 7)]
        );
    }

    #[test]
    fn bipartite_parts_contiguous() {
        let g = parse_pattern("K2,3").unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 6);
        assert!(g.has_edge(1, 2) && !g.has_edge(0, 1) && !g.has_edge(3, 4));
    }

    #[test]
    fn other_shapes() {
        assert_eq!(parse_pattern("P4").unwrap().edge_vec(), [(0, 1), (1, 2), (2, 3)]);
        assert_eq!(parse_pattern("E3").unwrap().edge_count(), 0);
        assert_eq!(parse_pattern("E3").unwrap().n(), 3);
        assert_eq!(parse_pattern("S1").unwrap().edge_vec(), [(0, 1)]);
    }

    #[test]
    fn errors() {
        for bad in ["", "K", "Q3", "K3x", "S3+2", "S3+M", "K0", "{K3", "{K3;M2}", "M0"] {
            assert!(
                matches!(parse_pattern_list(bad), Err(PatternError::Parse { .. })),
                "{bad:?} should be a parse error"
            );
        }
        assert_eq!(parse_pattern("K31"), Err(PatternError::Size(31)));
        assert_eq!(parse_pattern("M16"), Err(PatternError::Size(32)));
        assert!(matches!(parse_pattern("K99999999"), Err(PatternError::Size(_))));
    }

    #[test]
    fn family_lists() {
        let fam = parse_pattern_list("{K3,M2}").unwrap();
        assert_eq!(fam.len(), 2);
        let fam = parse_pattern_list("{K3,3,M2}").unwrap();
        assert_eq!(fam[0].edge_count(), 9);
        assert_eq!(fam[1].edge_count(), 2);
        assert_eq!(parse_pattern_list("K3").unwrap().len(), 1);
    }
}
