//! Canonical labelling and automorphism group order.
//!
//! Individualisation-refinement search: equitable partition refinement,
//! branching on the first non-singleton cell, pruning children by the orbits
//! of automorphisms already found, and backjumping to the first path whenever
//! a leaf equivalent to the first leaf turns up. The group order is the
//! product of the orbit sizes of the first-path vertices in their prefix
//! stabilisers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bits, full_mask, Graph};

/// Largest vertex count accepted by [`canonical_form`]; the key packs the
/// upper triangle into 120 bits.
pub const CANON_MAX: usize = 16;

/// Isomorphism-class key. Two graphs get equal keys iff they are isomorphic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonKey {
    n: u8,
    bits: u128,
}

impl CanonKey {
    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// The canonical representative: vertex `i` is canonical position `i`.
    pub fn to_graph(&self) -> Graph {
        let n = self.n();
        let mut g = Graph::empty_unchecked(n);
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if self.bits >> k & 1 == 1 {
                    g.add_edge(i, j);
                }
                k += 1;
            }
        }
        g
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub canon: CanonKey,
    /// `|Aut(G)|`; at most `16!`.
    pub aut_order: u64,
    /// `labeling[i]` is the vertex of the input placed at canonical position `i`.
    pub labeling: Vec<usize>,
    /// Generators of `Aut(G)`, as vertex permutations.
    pub generators: Vec<Vec<usize>>,
}

impl CanonicalForm {
    /// For every vertex, the least vertex of its automorphism orbit.
    pub fn orbits(&self) -> Vec<usize> {
        let n = self.labeling.len();
        let mut uf = UnionFind::new(n);
        for g in &self.generators {
            for (v, &w) in g.iter().enumerate() {
                uf.union(v, w);
            }
        }
        (0..n).map(|v| uf.find(v)).collect()
    }

    pub fn canonical_graph(&self) -> Graph {
        self.canon.to_graph()
    }
}

pub fn canonical_form(g: &Graph) -> Result<CanonicalForm> {
    let n = g.n();
    if n > CANON_MAX {
        return Err(Error::Capacity {
            what: "canonical form vertex count",
            limit: CANON_MAX,
            got: n,
        });
    }
    let mut cells = vec![full_mask(n)];
    if n == 0 {
        cells.clear();
    }
    refine(g, &mut cells);
    let mut search = Search {
        g,
        first: None,
        best_lab: Vec::new(),
        best_key: 0,
        generators: Vec::new(),
        aut_order: 1,
    };
    let mut path = Vec::with_capacity(n);
    search.dfs(cells, &mut path);
    Ok(CanonicalForm {
        canon: CanonKey {
            n: n as u8,
            bits: search.best_key,
        },
        aut_order: search.aut_order,
        labeling: search.best_lab,
        generators: search.generators,
    })
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> Result<bool> {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    Ok(canonical_form(a)?.canon == canonical_form(b)?.canon)
}

/// Refines an ordered partition to the coarsest equitable refinement,
/// splitting cells by neighbour counts into each splitter cell. Depends only
/// on the cell order and adjacency, so it commutes with relabelling.
fn refine(g: &Graph, cells: &mut Vec<u64>) {
    let mut groups: Vec<(u32, u64)> = Vec::with_capacity(CANON_MAX);
    loop {
        let mut changed = false;
        let mut w = 0;
        while w < cells.len() {
            let splitter = cells[w];
            let mut next = Vec::with_capacity(cells.len() + 2);
            let mut split = false;
            for &c in cells.iter() {
                if c & (c - 1) == 0 {
                    next.push(c);
                    continue;
                }
                groups.clear();
                for v in bits(c) {
                    let k = (g.nbrs(v) & splitter).count_ones();
                    match groups.iter_mut().find(|(count, _)| *count == k) {
                        Some((_, m)) => *m |= 1 << v,
                        None => groups.push((k, 1 << v)),
                    }
                }
                if groups.len() > 1 {
                    split = true;
                    groups.sort_unstable_by_key(|&(k, _)| k);
                }
                next.extend(groups.iter().map(|&(_, m)| m));
            }
            if split {
                *cells = next;
                changed = true;
            }
            w += 1;
        }
        if !changed {
            break;
        }
    }
}

fn leaf_key(g: &Graph, lab: &[usize]) -> u128 {
    let mut key = 0u128;
    let mut k = 0;
    for j in 1..lab.len() {
        let row = g.nbrs(lab[j]);
        for &li in &lab[..j] {
            key |= ((row >> li & 1) as u128) << k;
            k += 1;
        }
    }
    key
}

struct FirstLeaf {
    path: Vec<usize>,
    lab: Vec<usize>,
    key: u128,
}

struct Search<'a> {
    g: &'a Graph,
    first: Option<FirstLeaf>,
    best_lab: Vec<usize>,
    best_key: u128,
    generators: Vec<Vec<usize>>,
    aut_order: u64,
}

impl Search<'_> {
    /// Returns `Some(d)` to unwind to the first-path node at depth `d`.
    fn dfs(&mut self, cells: Vec<u64>, path: &mut Vec<usize>) -> Option<usize> {
        let depth = path.len();
        let Some(ci) = cells.iter().position(|c| c & (c - 1) != 0) else {
            return self.leaf(&cells, path);
        };
        let mut explored: Vec<usize> = Vec::new();
        for v in bits(cells[ci]) {
            if !explored.is_empty() && self.generators.iter().any(|g| g[v] != v) {
                let uf = self.orbits_fixing(path);
                if explored.iter().any(|&w| uf.same(w, v)) {
                    continue;
                }
            }
            explored.push(v);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..ci]);
            child.push(1 << v);
            child.push(cells[ci] & !(1 << v));
            child.extend_from_slice(&cells[ci + 1..]);
            refine(self.g, &mut child);
            path.push(v);
            let r = self.dfs(child, path);
            path.pop();
            if let Some(d) = r {
                if d < depth {
                    return Some(d);
                }
            }
        }
        let first = self.first.as_ref().expect("a leaf was reached");
        if first.path.len() > depth && first.path[..depth] == path[..] {
            let v = first.path[depth];
            let mut uf = self.orbits_fixing(path);
            let root = uf.find(v);
            let size = (0..self.g.n()).filter(|&w| uf.find(w) == root).count() as u64;
            self.aut_order *= size;
        }
        None
    }

    fn leaf(&mut self, cells: &[u64], path: &[usize]) -> Option<usize> {
        let lab: Vec<usize> = cells.iter().map(|c| c.trailing_zeros() as usize).collect();
        let key = leaf_key(self.g, &lab);
        let Some(first) = &self.first else {
            self.best_lab = lab.clone();
            self.best_key = key;
            self.first = Some(FirstLeaf {
                path: path.to_vec(),
                lab,
                key,
            });
            return None;
        };
        if key == first.key {
            let gen = mapping(&first.lab, &lab);
            let common = first.path.iter().zip(path).take_while(|(a, b)| a == b).count();
            self.generators.push(gen);
            return Some(common);
        }
        if key == self.best_key {
            let gen = mapping(&self.best_lab, &lab);
            self.generators.push(gen);
        } else if key > self.best_key {
            self.best_key = key;
            self.best_lab = lab;
        }
        None
    }

    fn orbits_fixing(&self, prefix: &[usize]) -> UnionFind {
        let mut uf = UnionFind::new(self.g.n());
        for gen in &self.generators {
            if prefix.iter().all(|&p| gen[p] == p) {
                for (v, &w) in gen.iter().enumerate() {
                    uf.union(v, w);
                }
            }
        }
        uf
    }
}

/// The automorphism sending `from[i]` to `to[i]`.
fn mapping(from: &[usize], to: &[usize]) -> Vec<usize> {
    let mut perm = vec![0; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        perm[a] = b;
    }
    perm
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // keep the smaller label as root so roots are orbit minima
        if ra < rb {
            self.parent[rb] = ra;
        } else if rb < ra {
            self.parent[ra] = rb;
        }
    }

    fn same(&self, a: usize, b: usize) -> bool {
        let root = |mut v: usize| {
            while self.parent[v] != v {
                v = self.parent[v];
            }
            v
        };
        root(a) == root(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u64) -> u64 {
        (1..=n).product()
    }

    #[test]
    fn known_group_orders() {
        assert_eq!(canonical_form(&Graph::cycle(4).unwrap()).unwrap().aut_order, 8);
        assert_eq!(canonical_form(&Graph::cycle(5).unwrap()).unwrap().aut_order, 10);
        assert_eq!(canonical_form(&Graph::path(4).unwrap()).unwrap().aut_order, 2);
        for n in 0..=CANON_MAX {
            let c = canonical_form(&Graph::complete(n).unwrap()).unwrap();
            assert_eq!(c.aut_order, factorial(n as u64), "K{n}");
            let e = canonical_form(&Graph::edgeless(n).unwrap()).unwrap();
            assert_eq!(e.aut_order, factorial(n as u64), "E{n}");
        }
        // Petersen graph: |Aut| = 120
        let mut edges = vec![];
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
            edges.push((i, i + 5));
        }
        let petersen = Graph::from_edges(10, &edges).unwrap();
        assert_eq!(canonical_form(&petersen).unwrap().aut_order, 120);
        // 3-cube: 48; K_{4,4}: 2 * 4! * 4!
        let cube: Vec<_> = (0..8usize)
            .flat_map(|v| (0..3).map(move |b| (v, v ^ 1 << b)))
            .filter(|(a, b)| a < b)
            .collect();
        assert_eq!(canonical_form(&Graph::from_edges(8, &cube).unwrap()).unwrap().aut_order, 48);
        assert_eq!(
            canonical_form(&Graph::complete_bipartite(4, 4).unwrap()).unwrap().aut_order,
            1152
        );
        // 4x4 rook's graph (K4 x K4): 2 * 4!^2
        let rook: Vec<_> = (0..16usize)
            .flat_map(|a| (0..16usize).map(move |b| (a, b)))
            .filter(|&(a, b)| a < b && (a / 4 == b / 4 || a % 4 == b % 4))
            .collect();
        assert_eq!(canonical_form(&Graph::from_edges(16, &rook).unwrap()).unwrap().aut_order, 1152);
    }

    #[test]
    fn relabelling_invariance() {
        let p4 = Graph::path(4).unwrap();
        let other = Graph::from_edges(4, &[(1, 3), (3, 0), (0, 2)]).unwrap();
        assert_eq!(canonical_form(&p4).unwrap().canon, canonical_form(&other).unwrap().canon);
        assert!(are_isomorphic(&p4, &other).unwrap());
        assert!(!are_isomorphic(&p4, &Graph::cycle(4).unwrap()).unwrap());
    }

    #[test]
    fn canonical_graph_matches_labeling() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (4, 5)]).unwrap();
        let c = canonical_form(&g).unwrap();
        let mut perm = vec![0; 6];
        for (i, &v) in c.labeling.iter().enumerate() {
            perm[v] = i;
        }
        assert_eq!(g.permuted(&perm), c.canonical_graph());
        for gen in &c.generators {
            assert_eq!(g.permuted(gen), g);
        }
    }

    #[test]
    fn capacity() {
        assert!(matches!(
            canonical_form(&Graph::edgeless(17).unwrap()),
            Err(Error::Capacity { .. })
        ));
    }
}
