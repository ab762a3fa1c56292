//! Greedy decomposition into homogeneous sets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bits, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Homogeneity {
    Clique,
    Independent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneousDecomposition {
    pub sets: Vec<(Vec<usize>, Homogeneity)>,
    pub leftover: Vec<usize>,
}

/// Greedily removes disjoint homogeneous `r`-sets, always taking the
/// lexicographically first one among the remaining vertices, until none is
/// left. By Ramsey's theorem the leftover then has fewer than `4^r` vertices.
pub fn homogeneous_decomposition(g: &Graph, r: usize) -> Result<HomogeneousDecomposition> {
    if r == 0 {
        return Err(Error::InvalidArgument("homogeneous set size must be positive".into()));
    }
    let mut rest = g.vertex_mask();
    let mut sets = Vec::new();
    loop {
        let clique = first_homogeneous(g, rest, r, Homogeneity::Clique);
        let indep = first_homogeneous(g, rest, r, Homogeneity::Independent);
        let pick = match (clique, indep) {
            (Some(c), Some(i)) => Some(if c <= i { (c, Homogeneity::Clique) } else { (i, Homogeneity::Independent) }),
            (Some(c), None) => Some((c, Homogeneity::Clique)),
            (None, Some(i)) => Some((i, Homogeneity::Independent)),
            (None, None) => None,
        };
        let Some((set, kind)) = pick else { break };
        for &v in &set {
            rest &= !(1 << v);
        }
        sets.push((set, kind));
    }
    let leftover: Vec<usize> = bits(rest).collect();
    if r < 32 && 4usize.pow(r as u32) < g.n() {
        debug_assert!(leftover.len() <= 4usize.pow(r as u32));
    }
    Ok(HomogeneousDecomposition { sets, leftover })
}

#[inline]
fn above(v: usize) -> u64 {
    if v >= 63 {
        0
    } else {
        u64::MAX << (v + 1)
    }
}

/// Lexicographically first homogeneous `r`-subset of `within`, as a sorted
/// vertex list.
fn first_homogeneous(g: &Graph, within: u64, r: usize, kind: Homogeneity) -> Option<Vec<usize>> {
    fn rec(g: &Graph, cand: u64, r: usize, kind: Homogeneity, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == r {
            return true;
        }
        if (cand.count_ones() as usize) < r - chosen.len() {
            return false;
        }
        for v in bits(cand) {
            let later = cand & above(v);
            let next = match kind {
                Homogeneity::Clique => later & g.nbrs(v),
                Homogeneity::Independent => later & !g.nbrs(v),
            };
            chosen.push(v);
            if rec(g, next, r, kind, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::with_capacity(r);
    rec(g, within, r, kind, &mut chosen).then_some(chosen)
}
