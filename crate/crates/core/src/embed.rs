//! Induced-subgraph and bigraph embedding search.
//!
//! Pattern vertices are placed in a fixed order and candidates are tried in
//! increasing vertex order, so the first witness is deterministic.

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::Result;
use crate::graph::{Bigraph, Graph};

/// An injection from pattern vertices to host vertices; `map[u]` is the image
/// of pattern vertex `u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Embedding {
    pub map: Vec<usize>,
}

impl Embedding {
    pub fn image_mask(&self) -> u64 {
        self.map.iter().fold(0, |m, &v| m | 1 << v)
    }

    fn is_injective_into(&self, n: usize) -> bool {
        self.map.iter().all(|&v| v < n) && self.image_mask().count_ones() as usize == self.map.len()
    }

    /// Checks that `self` is an isomorphism from `h` onto `g[image]`.
    pub fn verify_induced(&self, h: &Graph, g: &Graph) -> bool {
        self.map.len() == h.n()
            && self.is_injective_into(g.n())
            && (0..h.n()).all(|u| {
                (u + 1..h.n()).all(|w| h.has_edge(u, w) == g.has_edge(self.map[u], self.map[w]))
            })
    }

    /// Checks the cross-pair condition of a bigraph embedding; `map` lists
    /// the left side first.
    pub fn verify_bigraph(&self, j: &Bigraph, g: &Graph) -> bool {
        let a = j.left();
        self.map.len() == a + j.right()
            && self.is_injective_into(g.n())
            && (0..a).all(|x| {
                (0..j.right()).all(|y| j.has_cross_edge(x, y) == g.has_edge(self.map[x], self.map[a + y]))
            })
    }
}

/// First induced embedding of `h` into `g` in lexicographic backtracking
/// order, or `None` when `g` is `h`-free.
pub fn find_induced_embedding(h: &Graph, g: &Graph) -> Option<Embedding> {
    find_induced_embedding_budgeted(h, g, &mut Budget::unlimited()).expect("unlimited budget")
}

pub fn find_induced_embedding_budgeted(h: &Graph, g: &Graph, budget: &mut Budget) -> Result<Option<Embedding>> {
    let order: Vec<usize> = (0..h.n()).collect();
    induced_search(h, g, &order, None, budget)
}

/// Like [`find_induced_embedding_budgeted`] but only reports embeddings whose
/// image contains `through`. Used when `g` was obtained by adding `through`
/// to an `h`-free graph.
pub fn find_induced_embedding_through(
    h: &Graph,
    g: &Graph,
    through: usize,
    budget: &mut Budget,
) -> Result<Option<Embedding>> {
    if h.n() == 0 || h.n() > g.n() {
        return Ok(None);
    }
    for p in 0..h.n() {
        if !degree_compatible(h, p, g, through) {
            continue;
        }
        let mut order = vec![p];
        order.extend((0..h.n()).filter(|&u| u != p));
        if let Some(e) = induced_search(h, g, &order, Some(through), budget)? {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

#[inline]
fn degree_compatible(h: &Graph, u: usize, g: &Graph, x: usize) -> bool {
    let (dh, dg) = (h.degree(u), g.degree(x));
    dg >= dh && g.n() - 1 - dg >= h.n() - 1 - dh
}

/// Backtracking over `order`; if `pin` is set, `order[0]` must map to it and
/// nothing else may.
fn induced_search(
    h: &Graph,
    g: &Graph,
    order: &[usize],
    pin: Option<usize>,
    budget: &mut Budget,
) -> Result<Option<Embedding>> {
    let k = h.n();
    if k > g.n() {
        return Ok(None);
    }
    if k == 0 {
        return Ok(Some(Embedding { map: vec![] }));
    }
    let compat: Vec<u64> = (0..k)
        .map(|u| (0..g.n()).filter(|&x| degree_compatible(h, u, g, x)).fold(0u64, |m, x| m | 1 << x))
        .collect();
    let excluded = pin.map_or(0, |p| 1u64 << p);
    let mut map = vec![usize::MAX; k];
    let mut cands = vec![0u64; k];
    let mut used = 0u64;
    let candidates = |depth: usize, map: &[usize], used: u64| -> u64 {
        let u = order[depth];
        if depth == 0 {
            if let Some(p) = pin {
                return compat[u] & 1 << p;
            }
        }
        let mut c = compat[u] & !used & !excluded;
        for &w in &order[..depth] {
            let x = map[w];
            if h.has_edge(u, w) {
                c &= g.nbrs(x);
            } else {
                c &= !g.nbrs(x) & !(1 << x);
            }
        }
        c
    };
    let mut depth = 0;
    cands[0] = candidates(0, &map, used);
    loop {
        if cands[depth] == 0 {
            if depth == 0 {
                return Ok(None);
            }
            depth -= 1;
            used &= !(1 << map[order[depth]]);
            continue;
        }
        let x = cands[depth].trailing_zeros() as usize;
        cands[depth] &= cands[depth] - 1;
        budget.tick((depth as u64) << 8 | x as u64)?;
        map[order[depth]] = x;
        used |= 1 << x;
        if depth + 1 == k {
            return Ok(Some(Embedding { map }));
        }
        depth += 1;
        cands[depth] = candidates(depth, &map, used);
    }
}

/// First embedding of the bigraph `j` into `g`: an injection on `A ∪ B`
/// preserving adjacency and non-adjacency of cross pairs only.
pub fn find_bigraph_embedding(j: &Bigraph, g: &Graph) -> Option<Embedding> {
    find_bigraph_embedding_budgeted(j, g, &mut Budget::unlimited()).expect("unlimited budget")
}

pub fn find_bigraph_embedding_budgeted(j: &Bigraph, g: &Graph, budget: &mut Budget) -> Result<Option<Embedding>> {
    let (a, b) = (j.left(), j.right());
    let k = a + b;
    if k > g.n() {
        return Ok(None);
    }
    if k == 0 {
        return Ok(Some(Embedding { map: vec![] }));
    }
    let mut map = vec![usize::MAX; k];
    let mut cands = vec![0u64; k];
    let mut used = 0u64;
    let full = g.vertex_mask();
    let candidates = |depth: usize, map: &[usize], used: u64| -> u64 {
        let mut c = full & !used;
        if depth >= a {
            let y = depth - a;
            for (x, &img) in map.iter().enumerate().take(a) {
                if j.has_cross_edge(x, y) {
                    c &= g.nbrs(img);
                } else {
                    c &= !g.nbrs(img);
                }
            }
        }
        c
    };
    let mut depth = 0;
    cands[0] = candidates(0, &map, used);
    loop {
        if cands[depth] == 0 {
            if depth == 0 {
                return Ok(None);
            }
            depth -= 1;
            used &= !(1 << map[depth]);
            continue;
        }
        let x = cands[depth].trailing_zeros() as usize;
        cands[depth] &= cands[depth] - 1;
        budget.tick((depth as u64) << 8 | x as u64)?;
        map[depth] = x;
        used |= 1 << x;
        if depth + 1 == k {
            return Ok(Some(Embedding { map }));
        }
        depth += 1;
        cands[depth] = candidates(depth, &map, used);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> Graph {
        Graph::complete(n).unwrap()
    }

    #[test]
    fn basic_embeddings() {
        let e = find_induced_embedding(&k(2), &k(3)).unwrap();
        assert_eq!(e.map, vec![0, 1]);
        assert!(find_induced_embedding(&k(3), &Graph::cycle(5).unwrap()).is_none());
        let p3 = Graph::path(3).unwrap();
        let c4 = Graph::cycle(4).unwrap();
        let e = find_induced_embedding(&p3, &c4).unwrap();
        assert!(e.verify_induced(&p3, &c4));
        assert_eq!(e.map, vec![0, 1, 2]);
    }

    #[test]
    fn pinned_search_requires_the_vertex() {
        // triangle 0-1-2 plus pendant 3 on 2: every K3 avoids 3
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let mut b = Budget::unlimited();
        assert!(find_induced_embedding_through(&k(3), &g, 3, &mut b).unwrap().is_none());
        let e = find_induced_embedding_through(&k(3), &g, 1, &mut b).unwrap().unwrap();
        assert!(e.map.contains(&1));
    }

    #[test]
    fn bigraph_examples() {
        let edge = Bigraph::new(1, 1, &[(0, 0)]).unwrap();
        assert!(find_bigraph_embedding(&edge, &k(2)).is_some());
        let non_edge = Bigraph::new(1, 1, &[]).unwrap();
        for m in 0..8 {
            assert!(find_bigraph_embedding(&non_edge, &k(m)).is_none());
        }
        let k22 = Bigraph::new(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        let c4 = Graph::cycle(4).unwrap();
        let e = find_bigraph_embedding(&k22, &c4).unwrap();
        assert!(e.verify_bigraph(&k22, &c4));
        // the split puts opposite vertices on the same side
        assert_eq!(e.map, vec![0, 2, 1, 3]);
        // within-side adjacency is unconstrained: K22 also embeds into K4
        assert!(find_bigraph_embedding(&k22, &k(4)).is_some());
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let mut b = Budget::new(3);
        let r = find_induced_embedding_budgeted(&Graph::edgeless(5).unwrap(), &Graph::cycle(9).unwrap(), &mut b);
        assert!(matches!(r, Err(crate::Error::Budget { limit: 3 })));
    }
}
