//! Exact membership decisions with re-checkable certificates.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::budget::{Budget, Transcript};
use crate::embed::{self, Embedding};
use crate::error::Result;
use crate::family::expr::FamilyExpr;
use crate::graph::{bits, Graph};

/// Outcome of a membership decision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    pub witness: Witness,
}

/// Evidence for a membership answer.
///
/// Positive answers carry constructive data (partitions, embeddings, the
/// deleted apex vertex). Negative answers of exhaustive searches carry the
/// search transcript fingerprint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Settled by a direct structural check.
    Direct,
    /// Exhaustive search that found nothing.
    Search(Transcript),
    /// `embedding` maps graph `index` of the relevant list into the host:
    /// a forbidden graph into `g`, or `g` into the `iota` host (index 0).
    Embedding { index: usize, embedding: Embedding },
    Partition(PartitionCertificate),
    /// `g` minus `vertex` is in the inner family; `vertex` is `None` only
    /// for the null graph.
    Apex { vertex: Option<usize>, rest: Box<Membership> },
    /// The complement of `g` against the inner family.
    Complement(Box<Membership>),
    /// Decided by one operand: the side a union member belongs to, or the
    /// side an intersection non-member fails.
    Side { side: usize, inner: Box<Membership> },
    /// Decided by both operands.
    Both { left: Box<Membership>, right: Box<Membership> },
}

/// Ordered parts covering the vertex set, with a certificate for each part's
/// induced subgraph (relabelled in increasing vertex order).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCertificate {
    pub parts: Vec<Vec<usize>>,
    pub members: Vec<Membership>,
}

impl PartitionCertificate {
    pub fn part_sizes(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }
}

impl Membership {
    fn direct(member: bool) -> Self {
        Membership { member, witness: Witness::Direct }
    }

    fn searched(member: bool, budget: &Budget) -> Self {
        Membership { member, witness: Witness::Search(budget.transcript()) }
    }

    /// The partition certificate, when the answer is a positive partition.
    pub fn partition(&self) -> Option<&PartitionCertificate> {
        match &self.witness {
            Witness::Partition(p) if self.member => Some(p),
            _ => None,
        }
    }
}

/// Decides `g ∈ f` with the default node budget.
pub fn is_member(g: &Graph, f: &FamilyExpr) -> Result<Membership> {
    is_member_with_budget(g, f, &mut Budget::default())
}

pub fn is_member_with_budget(g: &Graph, f: &FamilyExpr, budget: &mut Budget) -> Result<Membership> {
    decide(g, f, None, budget)
}

pub(crate) use is_member_with_budget as decide_with;

/// Decides membership of `g`, given that `g` minus `through` is already known
/// to be a member. Only forbidden-subgraph checks use the hint; it is
/// forwarded through complements and intersections, where it stays valid.
pub fn is_member_through(g: &Graph, f: &FamilyExpr, through: usize, budget: &mut Budget) -> Result<Membership> {
    decide(g, f, Some(through), budget)
}

fn decide(g: &Graph, f: &FamilyExpr, through: Option<usize>, budget: &mut Budget) -> Result<Membership> {
    use FamilyExpr::*;
    budget.tick(0x6d65_6d62)?;
    let n = g.n();
    Ok(match f {
        All => Membership::direct(true),
        Edgeless => Membership::direct(g.edge_count() == 0),
        Complete => Membership::direct(g.is_clique(g.vertex_mask())),
        Matchings => Membership::direct((0..n).all(|v| g.degree(v) <= 1)),
        Forb(list) => {
            for (index, k) in list.iter().enumerate() {
                let found = match through {
                    Some(v) => embed::find_induced_embedding_through(k, g, v, budget)?,
                    None => embed::find_induced_embedding_budgeted(k, g, budget)?,
                };
                if let Some(embedding) = found {
                    return Ok(Membership { member: false, witness: Witness::Embedding { index, embedding } });
                }
            }
            Membership::searched(true, budget)
        }
        ForbBigraph(j) => match embed::find_bigraph_embedding_budgeted(j, g, budget)? {
            Some(embedding) => Membership { member: false, witness: Witness::Embedding { index: 0, embedding } },
            None => Membership::searched(true, budget),
        },
        Iota(h) => match embed::find_induced_embedding_budgeted(g, h, budget)? {
            Some(embedding) => Membership { member: true, witness: Witness::Embedding { index: 0, embedding } },
            None => Membership::searched(false, budget),
        },
        Hst { independent, cliques } => {
            let mut factors = vec![Edgeless; *independent];
            factors.extend(std::iter::repeat_n(Complete, *cliques));
            partition_decision(g, &factors, budget)?
        }
        Partition(factors) => partition_decision(g, factors, budget)?,
        Apex(inner) => {
            if n == 0 {
                let rest = decide(g, inner, None, budget)?;
                return Ok(Membership { member: rest.member, witness: Witness::Apex { vertex: None, rest: Box::new(rest) } });
            }
            for v in 0..n {
                let rest = decide(&g.delete_vertex(v), inner, None, budget)?;
                if rest.member {
                    return Ok(Membership {
                        member: true,
                        witness: Witness::Apex { vertex: Some(v), rest: Box::new(rest) },
                    });
                }
            }
            Membership::searched(false, budget)
        }
        Complement(inner) => {
            let m = decide(&g.complement(), inner, through, budget)?;
            Membership { member: m.member, witness: Witness::Complement(Box::new(m)) }
        }
        DisjointUnion(a, b) => split_decision(g, &g.components(), a, b, budget)?,
        Join(a, b) => split_decision(g, &g.co_components(), a, b, budget)?,
        Intersection(a, b) => {
            let left = decide(g, a, through, budget)?;
            if !left.member {
                return Ok(Membership { member: false, witness: Witness::Side { side: 0, inner: Box::new(left) } });
            }
            let right = decide(g, b, through, budget)?;
            if !right.member {
                return Ok(Membership { member: false, witness: Witness::Side { side: 1, inner: Box::new(right) } });
            }
            Membership { member: true, witness: Witness::Both { left: Box::new(left), right: Box::new(right) } }
        }
        Union(a, b) => {
            let left = decide(g, a, None, budget)?;
            if left.member {
                return Ok(Membership { member: true, witness: Witness::Side { side: 0, inner: Box::new(left) } });
            }
            let right = decide(g, b, None, budget)?;
            if right.member {
                return Ok(Membership { member: true, witness: Witness::Side { side: 1, inner: Box::new(right) } });
            }
            Membership { member: false, witness: Witness::Both { left: Box::new(left), right: Box::new(right) } }
        }
    })
}

fn mask_to_vec(mask: u64) -> Vec<usize> {
    bits(mask).collect()
}

/// `∨` and `∧`: every side of the split is a union of (co-)components.
fn split_decision(g: &Graph, blocks: &[u64], a: &FamilyExpr, b: &FamilyExpr, budget: &mut Budget) -> Result<Membership> {
    let c = blocks.len();
    if c >= 63 {
        return Err(crate::Error::Capacity { what: "components in a split search", limit: 62, got: c });
    }
    let mut memo_a: HashMap<u64, bool> = HashMap::new();
    let mut memo_b: HashMap<u64, bool> = HashMap::new();
    for choice in 0..(1u64 << c) {
        budget.tick(choice)?;
        let left = bits(choice).fold(0u64, |m, i| m | blocks[i]);
        let right = g.vertex_mask() & !left;
        let in_a = match memo_a.get(&left) {
            Some(&x) => x,
            None => {
                let x = decide(&g.induced_by_mask(left), a, None, budget)?.member;
                memo_a.insert(left, x);
                x
            }
        };
        if !in_a {
            continue;
        }
        let in_b = match memo_b.get(&right) {
            Some(&x) => x,
            None => {
                let x = decide(&g.induced_by_mask(right), b, None, budget)?.member;
                memo_b.insert(right, x);
                x
            }
        };
        if in_b {
            let ma = decide(&g.induced_by_mask(left), a, None, budget)?;
            let mb = decide(&g.induced_by_mask(right), b, None, budget)?;
            return Ok(Membership {
                member: true,
                witness: Witness::Partition(PartitionCertificate {
                    parts: vec![mask_to_vec(left), mask_to_vec(right)],
                    members: vec![ma, mb],
                }),
            });
        }
    }
    Ok(Membership::searched(false, budget))
}

fn partition_decision(g: &Graph, factors: &[FamilyExpr], budget: &mut Budget) -> Result<Membership> {
    match partition_search(g, factors, budget)? {
        None => Ok(Membership::searched(false, budget)),
        Some(parts) => {
            let mut members = Vec::with_capacity(parts.len());
            for (mask, f) in parts.iter().zip(factors) {
                members.push(decide(&g.induced_by_mask(*mask), f, None, budget)?);
            }
            Ok(Membership {
                member: true,
                witness: Witness::Partition(PartitionCertificate {
                    parts: parts.into_iter().map(mask_to_vec).collect(),
                    members,
                }),
            })
        }
    }
}

/// Backtracking search for a partition `X_1, …, X_l` of `V(g)` with
/// `g[X_i] ∈ factors[i]`, assigning vertices in increasing order.
///
/// A vertex may join part `i` only if `g[X_i + v]` stays in the factor,
/// which is complete because factors are hereditary. Among equal factors
/// the non-empty parts always form a prefix, so a vertex only ever opens
/// the first empty part of its kind.
pub fn partition_search(g: &Graph, factors: &[FamilyExpr], budget: &mut Budget) -> Result<Option<Vec<u64>>> {
    let l = factors.len();
    let prev_same: Vec<Option<usize>> = (0..l).map(|i| (0..i).rev().find(|&j| factors[j] == factors[i])).collect();
    let mut null_ok = Vec::with_capacity(l);
    for f in factors {
        null_ok.push(decide(&Graph::empty_unchecked(0), f, None, budget)?.member);
    }
    let mut search = PartitionSearch {
        g,
        factors,
        prev_same,
        null_ok,
        parts: vec![0; l],
        memo: vec![HashMap::new(); l],
    };
    Ok(search.run(0, budget)?.then_some(search.parts))
}

struct PartitionSearch<'a> {
    g: &'a Graph,
    factors: &'a [FamilyExpr],
    prev_same: Vec<Option<usize>>,
    null_ok: Vec<bool>,
    parts: Vec<u64>,
    memo: Vec<HashMap<u64, bool>>,
}

impl PartitionSearch<'_> {
    fn run(&mut self, v: usize, budget: &mut Budget) -> Result<bool> {
        if v == self.g.n() {
            return Ok((0..self.parts.len()).all(|i| self.parts[i] != 0 || self.null_ok[i]));
        }
        for i in 0..self.parts.len() {
            if self.parts[i] == 0 {
                if let Some(j) = self.prev_same[i] {
                    if self.parts[j] == 0 {
                        continue;
                    }
                }
            }
            budget.tick((v as u64) << 16 | i as u64)?;
            if !self.admits(i, v, budget)? {
                continue;
            }
            self.parts[i] |= 1 << v;
            if self.run(v + 1, budget)? {
                return Ok(true);
            }
            self.parts[i] &= !(1 << v);
        }
        Ok(false)
    }

    fn admits(&mut self, i: usize, v: usize, budget: &mut Budget) -> Result<bool> {
        let g = self.g;
        let part = self.parts[i];
        let nb = g.nbrs(v) & part;
        Ok(match &self.factors[i] {
            FamilyExpr::All => true,
            FamilyExpr::Edgeless => nb == 0,
            FamilyExpr::Complete => nb == part,
            FamilyExpr::Matchings => match nb.count_ones() {
                0 => true,
                1 => g.nbrs(nb.trailing_zeros() as usize) & part == 0,
                _ => false,
            },
            f => {
                let mask = part | 1 << v;
                if let Some(&x) = self.memo[i].get(&mask) {
                    return Ok(x);
                }
                let sub = g.induced_by_mask(mask);
                let x = if matches!(f, FamilyExpr::Forb(_)) {
                    // `g[part]` is a member, so only copies through `v` matter.
                    let local = (part & ((1u64 << v) - 1)).count_ones() as usize;
                    decide(&sub, f, Some(local), budget)?.member
                } else {
                    decide(&sub, f, None, budget)?.member
                };
                self.memo[i].insert(mask, x);
                x
            }
        })
    }
}

/// Re-checks a membership certificate against `g` and `f`.
///
/// Constructive witnesses are verified directly. Negative search results are
/// re-decided from scratch without a budget.
pub fn verify_membership(g: &Graph, f: &FamilyExpr, m: &Membership) -> Result<bool> {
    use FamilyExpr::*;
    let redo = || -> Result<bool> { Ok(decide(g, f, None, &mut Budget::unlimited())?.member == m.member) };
    Ok(match (f, &m.witness) {
        (All | Edgeless | Complete | Matchings, Witness::Direct) => redo()?,
        (Forb(list), Witness::Embedding { index, embedding }) => {
            !m.member && list.get(*index).is_some_and(|k| embedding.verify_induced(k, g))
        }
        (ForbBigraph(j), Witness::Embedding { index: 0, embedding }) => !m.member && embedding.verify_bigraph(j, g),
        (Iota(h), Witness::Embedding { index: 0, embedding }) => m.member && embedding.verify_induced(g, h),
        (Forb(_) | ForbBigraph(_) | Iota(_) | Hst { .. } | Partition(_) | Apex(_) | DisjointUnion(..) | Join(..), Witness::Search(_)) => {
            redo()?
        }
        (Hst { independent, cliques }, Witness::Partition(p)) => {
            let mut factors = vec![Edgeless; *independent];
            factors.extend(std::iter::repeat_n(Complete, *cliques));
            m.member && verify_partition(g, &factors, p)?
        }
        (Partition(factors), Witness::Partition(p)) => m.member && verify_partition(g, factors, p)?,
        (DisjointUnion(a, b) | Join(a, b), Witness::Partition(p)) => {
            let join = matches!(f, Join(..));
            m.member
                && p.parts.len() == 2
                && verify_partition(g, &[(**a).clone(), (**b).clone()], p)?
                && p.parts[0].iter().all(|&x| p.parts[1].iter().all(|&y| g.has_edge(x, y) == join))
        }
        (Apex(inner), Witness::Apex { vertex, rest }) => {
            let sub = match vertex {
                None if g.n() == 0 => g.clone(),
                Some(v) if *v < g.n() => g.delete_vertex(*v),
                _ => return Ok(false),
            };
            m.member == rest.member && (m.member || g.n() == 0) && verify_membership(&sub, inner, rest)?
        }
        (Complement(inner), Witness::Complement(c)) => m.member == c.member && verify_membership(&g.complement(), inner, c)?,
        (Intersection(a, b), Witness::Side { side, inner }) | (Union(a, b), Witness::Side { side, inner }) => {
            let is_union = matches!(f, Union(..));
            let operand = if *side == 0 { a } else { b };
            *side < 2 && m.member == is_union && inner.member == is_union && verify_membership(g, operand, inner)?
        }
        (Intersection(a, b), Witness::Both { left, right }) | (Union(a, b), Witness::Both { left, right }) => {
            let is_union = matches!(f, Union(..));
            m.member != is_union
                && left.member == m.member
                && right.member == m.member
                && verify_membership(g, a, left)?
                && verify_membership(g, b, right)?
        }
        _ => false,
    })
}

fn verify_partition(g: &Graph, factors: &[FamilyExpr], p: &PartitionCertificate) -> Result<bool> {
    if p.parts.len() != factors.len() || p.members.len() != factors.len() {
        return Ok(false);
    }
    let mut seen = 0u64;
    for part in &p.parts {
        for &v in part {
            if v >= g.n() || seen >> v & 1 == 1 {
                return Ok(false);
            }
            seen |= 1 << v;
        }
        if part.windows(2).any(|w| w[0] >= w[1]) {
            return Ok(false);
        }
    }
    if seen != g.vertex_mask() {
        return Ok(false);
    }
    for ((part, f), m) in p.parts.iter().zip(factors).zip(&p.members) {
        let sub = g.induced_unchecked(part);
        if !m.member || !verify_membership(&sub, f, m)? {
            return Ok(false);
        }
    }
    Ok(true)
}
