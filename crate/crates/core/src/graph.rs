//! Small simple graphs with one machine word of adjacency per vertex.
//!
//! Vertices are `0..n`. A vertex set is a `u64` mask; bit `v` stands for
//! vertex `v`.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

/// Iterates the set bits of a mask in increasing order.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

/// Mask with the low `n` bits set.
#[inline]
pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// An ordered simple graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Result<Self> {
        check_capacity(n)?;
        Ok(Graph { n, adj: vec![0; n] })
    }

    pub(crate) fn empty_unchecked(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        Graph { n, adj: vec![0; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n)?;
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u},{v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from adjacency rows. Rows must be symmetric and loop-free.
    pub fn from_rows(rows: Vec<u64>) -> Result<Self> {
        let n = rows.len();
        check_capacity(n)?;
        let g = Graph { n, adj: rows };
        for u in 0..n {
            if g.adj[u] & !full_mask(n) != 0 {
                return Err(Error::InvalidArgument(format!("row {u} has bits beyond n")));
            }
            if g.has_edge(u, u) {
                return Err(Error::InvalidArgument(format!("self-loop at {u}")));
            }
            for v in bits(g.adj[u]) {
                if !g.has_edge(v, u) {
                    return Err(Error::InvalidArgument(format!(
                        "asymmetric adjacency between {u} and {v}"
                    )));
                }
            }
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::new(n)?;
        for u in 0..n {
            g.adj[u] = full_mask(n) & !(1 << u);
        }
        Ok(g)
    }

    pub fn edgeless(n: usize) -> Result<Self> {
        Graph::new(n)
    }

    /// Cycle `0-1-...-(n-1)-0`; needs `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!("cycle needs at least 3 vertices, got {n}")));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }

    /// Path `0-1-...-(n-1)`.
    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges)
    }

    /// Complete bipartite graph with sides `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Result<Self> {
        let mut g = Graph::new(a + b)?;
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v);
            }
        }
        Ok(g)
    }

    /// `copies` disjoint copies of `K_k`, laid out in consecutive blocks.
    pub fn disjoint_cliques(copies: usize, k: usize) -> Result<Self> {
        let mut g = Graph::new(copies * k)?;
        for c in 0..copies {
            for u in c * k..(c + 1) * k {
                for v in u + 1..(c + 1) * k {
                    g.add_edge(u, v);
                }
            }
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn vertex_mask(&self) -> u64 {
        full_mask(self.n)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    /// Neighbourhood of `v` as a mask.
    #[inline]
    pub fn nbrs(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn rows(&self) -> &[u64] {
        &self.adj
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u] &= !(1 << v);
        self.adj[v] &= !(1 << u);
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| bits(self.adj[u] & !full_mask(u + 1)).map(move |v| (u, v)))
    }

    /// Whether the vertices of `mask` are pairwise adjacent.
    #[inline]
    pub fn is_clique(&self, mask: u64) -> bool {
        bits(mask).all(|v| self.adj[v] & mask == mask & !(1 << v))
    }

    /// Whether the vertices of `mask` are pairwise non-adjacent.
    #[inline]
    pub fn is_independent(&self, mask: u64) -> bool {
        bits(mask).all(|v| self.adj[v] & mask == 0)
    }

    /// Graph induced by `vs`, relabelled `0..vs.len()` in the given order.
    pub fn induced_subgraph(&self, vs: &[usize]) -> Result<Graph> {
        let mut seen = 0u64;
        for &v in vs {
            if v >= self.n {
                return Err(Error::InvalidArgument(format!(
                    "vertex {v} out of range for {} vertices",
                    self.n
                )));
            }
            if seen >> v & 1 == 1 {
                return Err(Error::InvalidArgument(format!("duplicate vertex {v}")));
            }
            seen |= 1 << v;
        }
        Ok(self.induced_unchecked(vs))
    }

    pub(crate) fn induced_unchecked(&self, vs: &[usize]) -> Graph {
        let mut g = Graph::empty_unchecked(vs.len());
        for (i, &u) in vs.iter().enumerate() {
            for (j, &v) in vs.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Graph induced by a vertex mask, in increasing vertex order.
    pub fn induced_by_mask(&self, mask: u64) -> Graph {
        let vs: Vec<usize> = bits(mask & self.vertex_mask()).collect();
        self.induced_unchecked(&vs)
    }

    /// `G \ v`.
    pub fn delete_vertex(&self, v: usize) -> Graph {
        self.induced_by_mask(self.vertex_mask() & !(1 << v))
    }

    /// Adds vertex `n` adjacent exactly to `nbrs`.
    pub fn with_new_vertex(&self, nbrs: u64) -> Result<Graph> {
        check_capacity(self.n + 1)?;
        let nbrs = nbrs & self.vertex_mask();
        let mut adj = self.adj.clone();
        for v in bits(nbrs) {
            adj[v] |= 1 << self.n;
        }
        adj.push(nbrs);
        Ok(Graph { n: self.n + 1, adj })
    }

    /// Relabels: vertex `v` of `self` becomes vertex `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        debug_assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty_unchecked(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    pub fn complement(&self) -> Graph {
        let full = self.vertex_mask();
        Graph {
            n: self.n,
            adj: (0..self.n).map(|v| !self.adj[v] & full & !(1 << v)).collect(),
        }
    }

    /// Vertices of `self` keep their labels; `other` is shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let n = self.n + other.n;
        check_capacity(n)?;
        let mut adj = self.adj.clone();
        adj.extend(other.adj.iter().map(|r| r << self.n));
        Ok(Graph { n, adj })
    }

    /// Disjoint union plus every edge between the two sides.
    pub fn join(&self, other: &Graph) -> Result<Graph> {
        let mut g = self.disjoint_union(other)?;
        let left = self.vertex_mask();
        let right = full_mask(g.n) & !left;
        for v in 0..self.n {
            g.adj[v] |= right;
        }
        for v in self.n..g.n {
            g.adj[v] |= left;
        }
        Ok(g)
    }

    /// Connected components of the subgraph induced by `within`, each as a
    /// mask, ordered by least vertex.
    pub fn components_within(&self, within: u64) -> Vec<u64> {
        let mut rest = within & self.vertex_mask();
        let mut out = Vec::new();
        while rest != 0 {
            let start = rest & rest.wrapping_neg();
            let mut comp = start;
            let mut frontier = start;
            while frontier != 0 {
                let mut next = 0;
                for v in bits(frontier) {
                    next |= self.adj[v];
                }
                next &= within & !comp;
                comp |= next;
                frontier = next;
            }
            rest &= !comp;
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<u64> {
        self.components_within(self.vertex_mask())
    }

    /// Components of the complement ("co-components").
    pub fn co_components(&self) -> Vec<u64> {
        self.complement().components()
    }
}

fn check_capacity(n: usize) -> Result<()> {
    if n > MAX_VERTICES {
        Err(Error::Capacity {
            what: "vertex count",
            limit: MAX_VERTICES,
            got: n,
        })
    } else {
        Ok(())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({}; ", self.n)?;
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

/// An ordered bigraph: two disjoint ordered vertex lists and a cross relation.
/// Only pairs with one end on each side carry information.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bigraph {
    left: usize,
    right: usize,
    /// `cross[i]` holds, as a mask over right-side indices, the neighbours of
    /// left vertex `i`.
    cross: Vec<u64>,
}

impl Bigraph {
    pub fn new(left: usize, right: usize, cross_edges: &[(usize, usize)]) -> Result<Self> {
        check_capacity(left + right)?;
        let mut cross = vec![0u64; left];
        for &(a, b) in cross_edges {
            if a >= left || b >= right {
                return Err(Error::InvalidArgument(format!(
                    "cross pair ({a},{b}) outside a {left}x{right} bigraph"
                )));
            }
            cross[a] |= 1 << b;
        }
        Ok(Bigraph { left, right, cross })
    }

    /// Takes `G[A, B]` with `A = 0..a` and `B = a..n` of `g`.
    pub fn from_graph(g: &Graph, a: usize) -> Result<Self> {
        if a > g.n() {
            return Err(Error::InvalidArgument(format!(
                "left side {a} larger than graph on {} vertices",
                g.n()
            )));
        }
        let cross = (0..a).map(|u| g.nbrs(u) >> a).collect();
        Ok(Bigraph {
            left: a,
            right: g.n() - a,
            cross,
        })
    }

    /// The bipartite graph `H` with sides `0..a` and `a..a+b`.
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::empty_unchecked(self.left + self.right);
        for a in 0..self.left {
            for b in bits(self.cross[a]) {
                g.add_edge(a, self.left + b);
            }
        }
        g
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    #[inline]
    pub fn has_cross_edge(&self, a: usize, b: usize) -> bool {
        self.cross[a] >> b & 1 == 1
    }
}
