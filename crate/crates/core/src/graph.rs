//! Finite vertex-ordered graphs and small ordered patterns.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Simple vertex-ordered graph: vertices 0..n in the given order, symmetric
/// adjacency with zero diagonal. Stored as bitset rows for fast pair tests
/// and prefix/suffix edge counting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl OrderedGraph {
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadGraph("vertex count must be at least 1".into()));
        }
        let words = n.div_ceil(64);
        Ok(OrderedGraph { n, words, rows: vec![0; n * words] })
    }

    /// Build from 0-indexed undirected edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::BadGraph(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::BadGraph(format!("self-loop at vertex {u}")));
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for u in 0..n {
            for v in (u + 1)..n {
                g.set_edge(u, v);
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn set_edge(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.n && v < self.n);
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn edge_count(&self) -> u64 {
        let total: u64 = self.rows.iter().map(|w| w.count_ones() as u64).sum();
        total / 2
    }

    /// Edges from vertex u to vertices in 0..limit.
    pub fn degree_below(&self, u: usize, limit: usize) -> u64 {
        let row = &self.rows[u * self.words..(u + 1) * self.words];
        let full = limit / 64;
        let mut count: u64 = row[..full].iter().map(|w| w.count_ones() as u64).sum();
        if limit % 64 != 0 {
            count += (row[full] & ((1u64 << (limit % 64)) - 1)).count_ones() as u64;
        }
        count
    }

    /// Edge list, 0-indexed, u < v, lexicographic.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Induced subgraph on strictly increasing vertex indices.
    pub fn induced(&self, verts: &[usize]) -> Result<Self> {
        if verts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadGraph("induced subset must be strictly increasing".into()));
        }
        if let Some(&last) = verts.last() {
            if last >= self.n {
                return Err(Error::BadGraph("induced subset out of range".into()));
            }
        }
        let mut g = Self::empty(verts.len())?;
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.set_edge(i, j);
                }
            }
        }
        Ok(g)
    }

    /// t-blowup: vertex x of the result maps to vertex x/t of self.
    pub fn blowup(&self, t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::BadGraph("blowup factor must be positive".into()));
        }
        let n = self.n * t;
        let mut g = Self::empty(n)?;
        for u in 0..n {
            for v in (u + 1)..n {
                if self.has_edge(u / t, v / t) {
                    g.set_edge(u, v);
                }
            }
        }
        Ok(g)
    }

    /// Density of edges among unordered pairs.
    pub fn edge_density(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        self.edge_count() as f64 / (self.n as f64 * (self.n - 1) as f64 / 2.0)
    }
}

/// Odd-clique graph on 2n vertices: with 1-indexed labels, (i,j) is an edge
/// iff i != j and both i and j are odd.
pub fn odd_clique(n: usize) -> OrderedGraph {
    assert!(n >= 1, "odd_clique requires n >= 1");
    let mut g = OrderedGraph::empty(2 * n).expect("2n >= 2");
    for u in 0..2 * n {
        for v in (u + 1)..2 * n {
            if (u + 1) % 2 == 1 && (v + 1) % 2 == 1 {
                g.set_edge(u, v);
            }
        }
    }
    g
}

/// Symmetric edge-weighted ordered graph with weights in [0,1].
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedOrderedGraph {
    n: usize,
    w: Vec<f64>,
}

impl WeightedOrderedGraph {
    pub fn new(n: usize, w: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadGraph("vertex count must be at least 1".into()));
        }
        if w.len() != n * n {
            return Err(Error::BadGraph(format!("weight matrix must be {n}x{n}")));
        }
        for i in 0..n {
            for j in 0..n {
                let x = w[i * n + j];
                if !(0.0..=1.0).contains(&x) {
                    return Err(Error::OutOfRangeValue(format!("weight ({i},{j}) = {x}")));
                }
                if x != w[j * n + i] {
                    return Err(Error::AsymmetricValues(format!("weights at ({i},{j})")));
                }
            }
        }
        Ok(WeightedOrderedGraph { n, w })
    }

    pub fn constant(n: usize, p: f64) -> Result<Self> {
        Self::new(n, vec![p; n * n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.w[u * self.n + v]
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }
}

/// Default cap on pattern size for exact density enumeration.
pub const DEFAULT_K_MAX: usize = 6;

/// Small simple ordered graph whose density is counted. Labels 0..k carry the
/// order; ordered graphs have trivial automorphisms, so equality is equality
/// of edge sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternGraph {
    k: usize,
    mask: u32,
}

#[inline]
fn pair_index(k: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < k);
    // pairs (i,j), i<j, in lexicographic order
    i * (2 * k - i - 1) / 2 + (j - i - 1)
}

impl PatternGraph {
    pub fn new(k: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if k == 0 {
            return Err(Error::BadGraph("pattern must have at least 1 vertex".into()));
        }
        if k > DEFAULT_K_MAX {
            return Err(Error::PatternTooLarge { k, cap: DEFAULT_K_MAX });
        }
        let mut mask = 0u32;
        for &(u, v) in edges {
            if u >= k || v >= k || u == v {
                return Err(Error::BadGraph(format!("pattern edge ({u},{v}) invalid for k={k}")));
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            mask |= 1 << pair_index(k, a, b);
        }
        Ok(PatternGraph { k, mask })
    }

    pub fn from_mask(k: usize, mask: u32) -> Result<Self> {
        if k == 0 || k > DEFAULT_K_MAX {
            return Err(Error::PatternTooLarge { k, cap: DEFAULT_K_MAX });
        }
        let pairs = k * (k - 1) / 2;
        if pairs < 32 && mask >= 1 << pairs {
            return Err(Error::BadGraph("pattern mask has bits beyond C(k,2)".into()));
        }
        Ok(PatternGraph { k, mask })
    }

    pub fn empty(k: usize) -> Self {
        Self::from_mask(k, 0).expect("empty pattern")
    }

    pub fn clique(k: usize) -> Self {
        let pairs = k * (k - 1) / 2;
        Self::from_mask(k, ((1u64 << pairs) - 1) as u32).expect("clique pattern")
    }

    /// Clique on the vertex subset given by `subset_mask`, all other vertices isolated.
    pub fn clique_plus_isolated(k: usize, subset_mask: u32) -> Result<Self> {
        let mut edges = Vec::new();
        for i in 0..k {
            for j in (i + 1)..k {
                if subset_mask >> i & 1 == 1 && subset_mask >> j & 1 == 1 {
                    edges.push((i, j));
                }
            }
        }
        Self::new(k, &edges)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.mask >> pair_index(self.k, a, b) & 1 == 1
    }

    pub fn edge_count(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.k {
            for j in (i + 1)..self.k {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Does this graph on k vertices equal the pattern?
    pub fn matches(&self, g: &OrderedGraph) -> bool {
        if g.n() != self.k {
            return false;
        }
        for i in 0..self.k {
            for j in (i + 1)..self.k {
                if g.has_edge(i, j) != self.has_edge(i, j) {
                    return false;
                }
            }
        }
        true
    }

    /// All 2^C(k,2) patterns on k vertices, in mask order.
    pub fn all(k: usize) -> Vec<PatternGraph> {
        let pairs = k * (k - 1) / 2;
        (0u64..1 << pairs)
            .map(|m| PatternGraph::from_mask(k, m as u32).expect("valid mask"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_clique_small() {
        // n=1: two vertices, only one odd vertex, no edges
        let g = odd_clique(1);
        assert_eq!(g.n(), 2);
        assert_eq!(g.edge_count(), 0);

        // n=2: single edge between 1-indexed vertices 1 and 3
        let g = odd_clique(2);
        assert_eq!(g.n(), 4);
        assert_eq!(g.edges(), vec![(0, 2)]);

        // n=3: edges among 1-indexed {1,3,5}
        let g = odd_clique(3);
        assert_eq!(g.edges(), vec![(0, 2), (0, 4), (2, 4)]);
    }

    #[test]
    fn adjacency_is_symmetric_zero_diagonal() {
        let g = OrderedGraph::from_edges(5, &[(0, 3), (2, 4)]).unwrap();
        for u in 0..5 {
            assert!(!g.has_edge(u, u));
            for v in 0..5 {
                assert_eq!(g.has_edge(u, v), g.has_edge(v, u));
            }
        }
    }

    #[test]
    fn rejects_self_loop_and_range() {
        assert!(OrderedGraph::from_edges(3, &[(1, 1)]).is_err());
        assert!(OrderedGraph::from_edges(3, &[(0, 3)]).is_err());
        assert!(OrderedGraph::empty(0).is_err());
    }

    #[test]
    fn induced_subgraph() {
        let g = OrderedGraph::from_edges(5, &[(0, 1), (1, 3), (3, 4)]).unwrap();
        let h = g.induced(&[1, 3, 4]).unwrap();
        assert_eq!(h.edges(), vec![(0, 1), (1, 2)]);
        assert!(g.induced(&[3, 1]).is_err());
    }

    #[test]
    fn blowup_structure() {
        let g = OrderedGraph::from_edges(2, &[(0, 1)]).unwrap();
        let b = g.blowup(2).unwrap();
        assert_eq!(b.n(), 4);
        assert!(b.has_edge(0, 2) && b.has_edge(1, 3) && b.has_edge(0, 3));
        assert!(!b.has_edge(0, 1) && !b.has_edge(2, 3));
    }

    #[test]
    fn degree_below_counts() {
        let g = OrderedGraph::from_edges(6, &[(0, 5), (2, 5), (4, 5)]).unwrap();
        assert_eq!(g.degree_below(5, 5), 3);
        assert_eq!(g.degree_below(5, 3), 2);
        assert_eq!(g.degree_below(5, 0), 0);
    }

    #[test]
    fn weighted_validation() {
        assert!(WeightedOrderedGraph::new(2, vec![0.0, 0.5, 0.5, 0.0]).is_ok());
        assert!(matches!(
            WeightedOrderedGraph::new(2, vec![0.0, 0.5, 0.4, 0.0]),
            Err(Error::AsymmetricValues(_))
        ));
        assert!(matches!(
            WeightedOrderedGraph::new(2, vec![0.0, 1.5, 1.5, 0.0]),
            Err(Error::OutOfRangeValue(_))
        ));
    }

    #[test]
    fn pattern_basics() {
        let p = PatternGraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(p.has_edge(1, 0) && p.has_edge(1, 2) && !p.has_edge(0, 2));
        assert_eq!(PatternGraph::all(3).len(), 8);
        assert_eq!(PatternGraph::clique(3).edge_count(), 3);
        assert!(PatternGraph::new(7, &[]).is_err());
    }

    #[test]
    fn pattern_matches_graph() {
        let p = PatternGraph::new(3, &[(0, 2)]).unwrap();
        let g = OrderedGraph::from_edges(3, &[(0, 2)]).unwrap();
        let h = OrderedGraph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(p.matches(&g));
        assert!(!p.matches(&h));
    }
}
