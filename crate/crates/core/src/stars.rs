//! Crowns, cores, star systems and constellations.
//!
//! A crown is a vertex set `X` such that every vertex outside `X` sees all
//! of `X` or none of it, and every vertex inside sees all of `X − v` or
//! none of it (so `G[X]` is complete or edgeless). A core is the complement
//! of a crown, and an `s`-star is a graph with a core of at most `s`
//! vertices.

use std::fmt;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::budget::{Budget, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::graph::{bits, Graph};
use crate::graph6;

/// Whether `mask` is a crown of `g`.
pub fn is_crown(g: &Graph, mask: u64) -> bool {
    (0..g.n()).all(|v| {
        let rest = mask & !(1 << v);
        let seen = g.nbrs(v) & rest;
        seen == 0 || seen == rest
    })
}

/// A smallest core, lexicographically first among those of its size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Core {
    pub size: usize,
    pub core: Vec<usize>,
}

pub fn minimal_core(g: &Graph) -> Core {
    let n = g.n();
    let all = g.vertex_mask();
    for size in 0..=n {
        for core in (0..n).combinations(size) {
            let mask = core.iter().fold(0u64, |m, &v| m | 1 << v);
            if is_crown(g, all & !mask) {
                return Core { size, core };
            }
        }
    }
    unreachable!("the empty crown always works")
}

pub fn is_s_star(g: &Graph, s: usize) -> bool {
    minimal_core(g).size <= s
}

/// `(J, α, β)`: the core pattern `J`, which core vertices see the crown, and
/// whether the crown is a clique.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StarSystem {
    pub j: Graph,
    pub alpha: Vec<bool>,
    pub beta: bool,
}

impl StarSystem {
    pub fn new(j: Graph, alpha: Vec<bool>, beta: bool) -> Result<Self> {
        if alpha.len() != j.n() {
            return Err(Error::InvalidArgument(format!("alpha has {} entries for {} vertices", alpha.len(), j.n())));
        }
        Ok(StarSystem { j, alpha, beta })
    }

    /// Core vertices that could move into the crown: `v` with `α(v) = β`
    /// whose adjacency to each other core vertex `u` matches `α(u)`.
    pub fn removable_vertices(&self) -> Vec<usize> {
        let k = self.j.n();
        (0..k)
            .filter(|&v| {
                self.alpha[v] == self.beta && (0..k).filter(|&u| u != v).all(|u| self.j.has_edge(u, v) == self.alpha[u])
            })
            .collect()
    }

    /// The system describes minimal cores: no core vertex is removable.
    pub fn is_irreducible(&self) -> bool {
        self.removable_vertices().is_empty()
    }

    pub fn to_constellation(&self) -> Constellation {
        Constellation {
            j: self.j.clone(),
            phi: vec![0; self.j.n()],
            alpha: self.alpha.clone(),
            beta: vec![self.beta],
        }
    }
}

/// `(J, φ, α, β)` over parts `0..l`. A star system is the case `l = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ConstellationJson", into = "ConstellationJson")]
pub struct Constellation {
    pub j: Graph,
    pub phi: Vec<usize>,
    pub alpha: Vec<bool>,
    pub beta: Vec<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ConstellationJson {
    j: String,
    phi: Vec<usize>,
    alpha: Vec<u8>,
    beta: Vec<u8>,
}

impl From<Constellation> for ConstellationJson {
    fn from(c: Constellation) -> Self {
        ConstellationJson {
            j: graph6::encode(&c.j),
            phi: c.phi,
            alpha: c.alpha.iter().map(|&b| b as u8).collect(),
            beta: c.beta.iter().map(|&b| b as u8).collect(),
        }
    }
}

impl TryFrom<ConstellationJson> for Constellation {
    type Error = Error;

    fn try_from(c: ConstellationJson) -> Result<Self> {
        let bit = |x: u8| match x {
            0 => Ok(false),
            1 => Ok(true),
            _ => Err(Error::InvalidArgument(format!("expected 0 or 1, got {x}"))),
        };
        Constellation::new(
            graph6::decode(&c.j)?,
            c.phi,
            c.alpha.into_iter().map(bit).collect::<Result<_>>()?,
            c.beta.into_iter().map(bit).collect::<Result<_>>()?,
        )
    }
}

impl Constellation {
    pub fn new(j: Graph, phi: Vec<usize>, alpha: Vec<bool>, beta: Vec<bool>) -> Result<Self> {
        let k = j.n();
        if phi.len() != k || alpha.len() != k {
            return Err(Error::InvalidArgument(format!(
                "phi and alpha need {k} entries, got {} and {}",
                phi.len(),
                alpha.len()
            )));
        }
        if beta.is_empty() {
            return Err(Error::InvalidArgument("a constellation needs at least one part".into()));
        }
        if let Some(&p) = phi.iter().find(|&&p| p >= beta.len()) {
            return Err(Error::InvalidArgument(format!("part {p} out of range for l = {}", beta.len())));
        }
        Ok(Constellation { j, phi, alpha, beta })
    }

    /// The empty-`J` constellation with the given part types.
    pub fn empty(beta: Vec<bool>) -> Result<Self> {
        Constellation::new(Graph::new(0)?, Vec::new(), Vec::new(), beta)
    }

    pub fn l(&self) -> usize {
        self.beta.len()
    }

    pub fn fiber(&self, i: usize) -> Vec<usize> {
        (0..self.j.n()).filter(|&v| self.phi[v] == i).collect()
    }

    pub fn max_fiber(&self) -> usize {
        (0..self.l()).map(|i| self.fiber(i).len()).max().unwrap_or(0)
    }

    /// `𝓙_i`: the star system on part `i`.
    pub fn component(&self, i: usize) -> StarSystem {
        let f = self.fiber(i);
        StarSystem {
            j: self.j.induced_unchecked(&f),
            alpha: f.iter().map(|&v| self.alpha[v]).collect(),
            beta: self.beta[i],
        }
    }

    pub fn is_irreducible(&self) -> bool {
        (0..self.l()).all(|i| self.component(i).is_irreducible())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("constellations serialize")
    }

    /// First 16 hex digits of the SHA-256 of the JSON form.
    pub fn stable_hash(&self) -> String {
        Sha256::digest(self.to_json().as_bytes()).iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for Constellation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

/// A `𝓙`-template: `psi[v]` is the image of `J`-vertex `v`, and `parts`
/// partitions the host with `psi[v] ∈ parts[φ(v)]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Template {
    pub psi: Vec<usize>,
    pub parts: Vec<Vec<usize>>,
}

impl Template {
    /// Re-checks all template conditions.
    pub fn verify(&self, g: &Graph, c: &Constellation) -> bool {
        let partial = PartialTemplate {
            psi: self.psi.iter().map(|&x| Some(x)).collect(),
            crowns: self
                .parts
                .iter()
                .map(|p| p.iter().copied().filter(|x| !self.psi.contains(x)).collect())
                .collect(),
        };
        let in_part = self.parts.len() == c.l()
            && self.psi.len() == c.j.n()
            && (0..c.j.n()).all(|v| self.parts[c.phi[v]].contains(&self.psi[v]));
        in_part && partial.verify(g, c)
    }
}

/// Certificate for `g ∈ P(𝓙)`: a template on a host containing `g`,
/// restricted to `g`. `psi[v]` is `None` for `J`-vertices outside `g`;
/// `crowns[i]` lists the vertices of `g` in the crown of part `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialTemplate {
    pub psi: Vec<Option<usize>>,
    pub crowns: Vec<Vec<usize>>,
}

impl PartialTemplate {
    pub fn verify(&self, g: &Graph, c: &Constellation) -> bool {
        let k = c.j.n();
        if self.psi.len() != k || self.crowns.len() != c.l() {
            return false;
        }
        let mut seen = 0u64;
        let mut claim = |x: usize| {
            let ok = x < g.n() && seen >> x & 1 == 0;
            seen |= 1 << x;
            ok
        };
        if !self.psi.iter().flatten().all(|&x| claim(x)) || !self.crowns.iter().flatten().all(|&x| claim(x)) {
            return false;
        }
        if seen != g.vertex_mask() {
            return false;
        }
        for u in 0..k {
            for v in u + 1..k {
                if let (Some(a), Some(b)) = (self.psi[u], self.psi[v]) {
                    if g.has_edge(a, b) != c.j.has_edge(u, v) {
                        return false;
                    }
                }
            }
        }
        for (i, crown) in self.crowns.iter().enumerate() {
            for (a, &x) in crown.iter().enumerate() {
                if crown[a + 1..].iter().any(|&y| g.has_edge(x, y) != c.beta[i]) {
                    return false;
                }
            }
            for v in 0..k {
                if let (Some(p), true) = (self.psi[v], c.phi[v] == i) {
                    if crown.iter().any(|&x| g.has_edge(p, x) != c.alpha[v]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The host vertex sets of the parts, when every `J`-vertex is placed.
    pub fn into_template(self, c: &Constellation) -> Option<Template> {
        let psi: Vec<usize> = self.psi.iter().copied().collect::<Option<_>>()?;
        let mut parts = self.crowns;
        for (v, &x) in psi.iter().enumerate() {
            parts[c.phi[v]].push(x);
        }
        for p in &mut parts {
            p.sort_unstable();
        }
        Some(Template { psi, parts })
    }
}

struct TemplateSearch<'a> {
    g: &'a Graph,
    c: &'a Constellation,
    partial: bool,
    psi: Vec<Option<usize>>,
}

impl TemplateSearch<'_> {
    fn place(&mut self, v: usize, used: u64, budget: &mut Budget) -> Result<Option<Vec<u64>>> {
        let (g, c) = (self.g, self.c);
        if v == c.j.n() {
            return self.crowns(used, budget);
        }
        let mut cand = g.vertex_mask() & !used;
        for (w, img) in self.psi[..v].iter().enumerate() {
            if let Some(x) = *img {
                cand &= if c.j.has_edge(v, w) { g.nbrs(x) } else { !g.nbrs(x) };
            }
        }
        for x in bits(cand) {
            budget.tick((v as u64) << 8 | x as u64)?;
            self.psi[v] = Some(x);
            if let Some(r) = self.place(v + 1, used | 1 << x, budget)? {
                return Ok(Some(r));
            }
        }
        self.psi[v] = None;
        if self.partial {
            budget.tick(v as u64)?;
            return self.place(v + 1, used, budget);
        }
        Ok(None)
    }

    /// Splits the unplaced vertices into crowns.
    fn crowns(&self, used: u64, budget: &mut Budget) -> Result<Option<Vec<u64>>> {
        let (g, c) = (self.g, self.c);
        let l = c.l();
        let rest: Vec<usize> = bits(g.vertex_mask() & !used).collect();
        let allowed: Vec<u64> = rest
            .iter()
            .map(|&x| {
                (0..l).filter(|&i| {
                    self.psi.iter().enumerate().all(|(v, img)| match img {
                        Some(p) if c.phi[v] == i => g.has_edge(*p, x) == c.alpha[v],
                        _ => true,
                    })
                })
                .fold(0u64, |m, i| m | 1 << i)
            })
            .collect();
        // Parts without placed vertices and with equal β are interchangeable.
        let free: Vec<bool> =
            (0..l).map(|i| (0..c.j.n()).all(|v| c.phi[v] != i || self.psi[v].is_none())).collect();
        let twin: Vec<Option<usize>> =
            (0..l).map(|i| (0..i).rev().find(|&j| free[i] && free[j] && c.beta[i] == c.beta[j])).collect();
        let mut crowns = vec![0u64; l];
        let split = CrownSplit { g, beta: &c.beta, rest: &rest, allowed: &allowed, twin: &twin };
        let found = split.assign(0, &mut crowns, budget)?;
        Ok(found.then_some(crowns))
    }
}

/// Assigns `rest[at..]` to crowns, keeping each crown a clique or an
/// independent set as `beta` requires.
struct CrownSplit<'a> {
    g: &'a Graph,
    beta: &'a [bool],
    rest: &'a [usize],
    allowed: &'a [u64],
    twin: &'a [Option<usize>],
}

impl CrownSplit<'_> {
    fn assign(&self, at: usize, crowns: &mut [u64], budget: &mut Budget) -> Result<bool> {
        if at == self.rest.len() {
            return Ok(true);
        }
        let x = self.rest[at];
        let nx = self.g.nbrs(x);
        for i in bits(self.allowed[at]) {
            if crowns[i] == 0 && self.twin[i].is_some_and(|j| crowns[j] == 0) {
                continue;
            }
            let ok = if self.beta[i] { crowns[i] & !nx == 0 } else { crowns[i] & nx == 0 };
            if !ok {
                continue;
            }
            budget.tick(1 << 32 | (at as u64) << 8 | i as u64)?;
            crowns[i] |= 1 << x;
            if self.assign(at + 1, crowns, budget)? {
                return Ok(true);
            }
            crowns[i] &= !(1 << x);
        }
        Ok(false)
    }
}

fn search(g: &Graph, c: &Constellation, partial: bool, budget: &mut Budget) -> Result<Option<PartialTemplate>> {
    let mut s = TemplateSearch { g, c, partial, psi: vec![None; c.j.n()] };
    Ok(s.place(0, 0, budget)?.map(|crowns| PartialTemplate {
        psi: s.psi.clone(),
        crowns: crowns.into_iter().map(|m| bits(m).collect()).collect(),
    }))
}

/// A `𝓙`-template in `g`, if one exists.
pub fn find_template(g: &Graph, c: &Constellation) -> Result<Option<Template>> {
    find_template_with_budget(g, c, &mut Budget::new(DEFAULT_BUDGET))
}

pub fn find_template_with_budget(g: &Graph, c: &Constellation, budget: &mut Budget) -> Result<Option<Template>> {
    Ok(search(g, c, false, budget)?.and_then(|p| p.into_template(c)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PjMembership {
    pub member: bool,
    pub certificate: Option<PartialTemplate>,
}

/// Decides `g ∈ P(𝓙)`.
///
/// `g` lies in `P(𝓙)` exactly when some `J`-vertices can be placed in `g`
/// (an induced embedding of the placed part of `J`) and the remaining
/// vertices split into crowns obeying the `α` and `β` rules. Given such a
/// split, adding the missing `J`-vertices with the prescribed adjacencies
/// yields a host with a template; conversely a template on any host
/// restricts to such a split of `g`.
pub fn is_member_pj(g: &Graph, c: &Constellation) -> Result<PjMembership> {
    is_member_pj_with_budget(g, c, &mut Budget::new(DEFAULT_BUDGET))
}

pub fn is_member_pj_with_budget(g: &Graph, c: &Constellation, budget: &mut Budget) -> Result<PjMembership> {
    let certificate = search(g, c, true, budget)?;
    Ok(PjMembership { member: certificate.is_some(), certificate })
}

/// Guard on `l · s` for [`generate_constellations`].
pub const GENERATE_MAX: usize = 6;

/// All irreducible `(l, s)`-constellations up to equivalence: relabelling
/// `J` within fibers together with any permutation of the parts that carries
/// `φ`, `α`, `β` and the edges of `J` along.
///
/// The representative of each class is its least encoding with vertices
/// sorted by part; the output is ordered by `|V(J)|` and then by encoding.
pub fn generate_constellations(l: usize, s: usize) -> Result<Vec<Constellation>> {
    if l == 0 {
        return Err(Error::InvalidArgument("constellations need l ≥ 1".into()));
    }
    if l * s > GENERATE_MAX {
        return Err(Error::Capacity { what: "constellation generation l·s", limit: GENERATE_MAX, got: l * s });
    }
    let mut out = Vec::new();
    for sizes in (0..l).map(|_| 0..=s).multi_cartesian_product() {
        let k: usize = sizes.iter().sum();
        let phi: Vec<usize> = sizes.iter().enumerate().flat_map(|(i, &c)| std::iter::repeat_n(i, c)).collect();
        let pairs: Vec<(usize, usize)> = (0..k).flat_map(|b| (0..b).map(move |a| (a, b))).collect();
        for edges in 0..1u64 << pairs.len() {
            let mut j = Graph::new(k)?;
            for (bit, &(a, b)) in pairs.iter().enumerate() {
                if edges >> bit & 1 == 1 {
                    j.add_edge(a, b);
                }
            }
            for alpha_bits in 0..1u32 << k {
                let alpha: Vec<bool> = (0..k).map(|v| alpha_bits >> v & 1 == 1).collect();
                for beta_bits in 0..1u32 << l {
                    let beta: Vec<bool> = (0..l).map(|i| beta_bits >> i & 1 == 1).collect();
                    let c = Constellation { j: j.clone(), phi: phi.clone(), alpha: alpha.clone(), beta };
                    if c.is_irreducible() && is_least_encoding(&c) {
                        out.push(c);
                    }
                }
            }
        }
    }
    out.sort_by_cached_key(|c| (c.j.n(), encoding(c)));
    Ok(out)
}

type Encoding = (Vec<usize>, Vec<bool>, Vec<bool>, Vec<bool>);

fn encoding(c: &Constellation) -> Encoding {
    let k = c.j.n();
    let adj = (0..k).flat_map(|b| (0..b).map(move |a| (a, b))).map(|(a, b)| c.j.has_edge(a, b)).collect();
    (c.phi.clone(), c.beta.clone(), c.alpha.clone(), adj)
}

/// Whether no part permutation combined with within-fiber relabelling gives
/// a smaller encoding. Assumes vertices are sorted by part.
fn is_least_encoding(c: &Constellation) -> bool {
    let l = c.l();
    let own = encoding(c);
    let fibers: Vec<Vec<usize>> = (0..l).map(|i| c.fiber(i)).collect();
    for sigma in (0..l).permutations(l) {
        // sigma[p] is the old part placed at position p
        let per_fiber: Vec<Vec<Vec<usize>>> =
            sigma.iter().map(|&i| fibers[i].iter().copied().permutations(fibers[i].len()).collect()).collect();
        for choice in per_fiber.iter().map(|opts| opts.iter()).multi_cartesian_product() {
            let order: Vec<usize> = choice.into_iter().flatten().copied().collect();
            let phi: Vec<usize> = sigma
                .iter()
                .enumerate()
                .flat_map(|(p, &i)| std::iter::repeat_n(p, fibers[i].len()))
                .collect();
            let beta: Vec<bool> = sigma.iter().map(|&i| c.beta[i]).collect();
            let alpha: Vec<bool> = order.iter().map(|&v| c.alpha[v]).collect();
            let k = order.len();
            let adj: Vec<bool> =
                (0..k).flat_map(|b| (0..b).map(move |a| (a, b))).map(|(a, b)| c.j.has_edge(order[a], order[b])).collect();
            if (phi, beta, alpha, adj) < own {
                return false;
            }
        }
    }
    true
}

/// Summary of a search for vertex-minimal non-`s`-stars.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalNonStarScan {
    pub s: usize,
    /// `4s + 5`.
    pub bound: usize,
    pub graphs_checked: u64,
    pub minimal_found: u64,
    pub max_minimal_size: Option<usize>,
    /// Minimal non-`s`-stars above the bound, as graph6.
    pub violations: Vec<String>,
    pub seed: Option<u64>,
}

/// Whether `g` is not an `s`-star but every one-vertex deletion is.
pub fn is_minimal_non_star(g: &Graph, s: usize) -> bool {
    !is_s_star(g, s) && (0..g.n()).all(|v| is_s_star(&g.delete_vertex(v), s))
}

/// Checks every graph of an enumeration (one per isomorphism class).
pub fn scan_minimal_non_stars<'a, I>(graphs: I, s: usize) -> MinimalNonStarScan
where
    I: IntoIterator<Item = &'a Graph>,
{
    let mut scan = MinimalNonStarScan {
        s,
        bound: 4 * s + 5,
        graphs_checked: 0,
        minimal_found: 0,
        max_minimal_size: None,
        violations: Vec::new(),
        seed: None,
    };
    for g in graphs {
        scan.graphs_checked += 1;
        if is_minimal_non_star(g, s) {
            scan.record(g);
        }
    }
    scan
}

impl MinimalNonStarScan {
    fn shrink_and_record(&mut self, mut g: Graph, s: usize) {
        self.graphs_checked += 1;
        if is_s_star(&g, s) {
            return;
        }
        let mut v = g.n();
        while v > 0 {
            v -= 1;
            let h = g.delete_vertex(v);
            if !is_s_star(&h, s) {
                g = h;
            }
        }
        debug_assert!(is_minimal_non_star(&g, s));
        self.record(&g);
    }

    fn record(&mut self, g: &Graph) {
        self.minimal_found += 1;
        self.max_minimal_size = self.max_minimal_size.max(Some(g.n()));
        if g.n() > self.bound {
            self.violations.push(graph6::encode(g));
        }
    }
}

/// Seeded spot check: each sample is either a uniform random graph or an
/// `s`-star on up to `n_max` vertices with one or two adjacencies flipped. Non-stars are shrunk by
/// deleting vertices (highest first) while they stay non-stars, which ends
/// at a vertex-minimal non-`s`-star whose size is then recorded.
pub fn spot_check_minimal_non_stars(s: usize, samples: u64, n_max: usize, seed: u64) -> Result<MinimalNonStarScan> {
    if !(2..=16).contains(&n_max) {
        return Err(Error::InvalidArgument("spot check needs 2 ≤ n_max ≤ 16".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scan = MinimalNonStarScan {
        s,
        bound: 4 * s + 5,
        graphs_checked: 0,
        minimal_found: 0,
        max_minimal_size: None,
        violations: Vec::new(),
        seed: Some(seed),
    };
    for _ in 0..samples {
        let n = rng.random_range(2..=n_max);
        let mut g = Graph::new(n)?;
        if rng.random() {
            for v in 0..n {
                for u in 0..v {
                    if rng.random() {
                        g.add_edge(u, v);
                    }
                }
            }
            scan.shrink_and_record(g, s);
            continue;
        }
        let core = rng.random_range(0..=s.min(n));
        let beta: bool = rng.random();
        for v in 0..n {
            for u in 0..v {
                let edge = match (u < core, v < core) {
                    (true, true) => rng.random(),
                    (false, false) => beta,
                    _ => false,
                };
                if edge {
                    g.add_edge(u, v);
                }
            }
        }
        for u in 0..core {
            if rng.random() {
                for v in core..n {
                    g.add_edge(u, v);
                }
            }
        }
        for _ in 0..rng.random_range(1..=2) {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            if a != b {
                if g.has_edge(a, b) {
                    g.remove_edge(a, b);
                } else {
                    g.add_edge(a, b);
                }
            }
        }
        scan.shrink_and_record(g, s);
    }
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(j: Graph, alpha: &[u8], beta: u8) -> StarSystem {
        StarSystem::new(j, alpha.iter().map(|&a| a == 1).collect(), beta == 1).unwrap()
    }

    #[test]
    fn cores() {
        assert_eq!(minimal_core(&Graph::complete_bipartite(1, 3).unwrap()), Core { size: 1, core: vec![0] });
        assert_eq!(minimal_core(&Graph::path(4).unwrap()).size, 3);
        assert_eq!(minimal_core(&Graph::complete(5).unwrap()).size, 0);
        let c4 = Graph::cycle(4).unwrap();
        assert!(!is_s_star(&c4, 0) && !is_s_star(&c4, 1) && is_s_star(&c4, 2));
        assert!(is_s_star(&Graph::edgeless(6).unwrap(), 0));
        assert!(!is_s_star(&Graph::path(4).unwrap(), 2));
    }

    #[test]
    fn irreducibility() {
        let k1 = Graph::complete(1).unwrap();
        assert!(sys(k1.clone(), &[1], 0).is_irreducible());
        assert!(!sys(k1, &[0], 0).is_irreducible());
        // both core vertices see the clique crown but not each other
        assert!(sys(Graph::edgeless(2).unwrap(), &[1, 1], 1).is_irreducible());
        assert!(!sys(Graph::complete(2).unwrap(), &[1, 1], 1).is_irreducible());
    }

    #[test]
    fn templates() {
        let bip = Constellation::empty(vec![false, false]).unwrap();
        let t = find_template(&Graph::cycle(4).unwrap(), &bip).unwrap().unwrap();
        assert!(t.verify(&Graph::cycle(4).unwrap(), &bip));
        assert!(find_template(&Graph::cycle(5).unwrap(), &bip).unwrap().is_none());
        let apex = sys(Graph::complete(1).unwrap(), &[1], 0).to_constellation();
        let claw = Graph::complete_bipartite(1, 3).unwrap();
        let t = find_template(&claw, &apex).unwrap().unwrap();
        assert_eq!(t.psi, vec![0]);
        assert!(find_template(&Graph::path(4).unwrap(), &apex).unwrap().is_none());
    }

    #[test]
    fn pj_membership() {
        let apex = sys(Graph::complete(1).unwrap(), &[1], 0).to_constellation();
        for (g, expect) in [
            (Graph::complete_bipartite(1, 3).unwrap(), true),
            (Graph::complete(3).unwrap(), false),
            (Graph::edgeless(4).unwrap(), true),
            (Graph::complete_bipartite(1, 2).unwrap().disjoint_union(&Graph::edgeless(1).unwrap()).unwrap(), false),
        ] {
            let m = is_member_pj(&g, &apex).unwrap();
            assert_eq!(m.member, expect, "{g:?}");
            if let Some(cert) = m.certificate {
                assert!(cert.verify(&g, &apex));
            }
        }
        let bip = Constellation::empty(vec![false, false]).unwrap();
        assert!(is_member_pj(&Graph::cycle(4).unwrap(), &bip).unwrap().member);
        assert!(!is_member_pj(&Graph::cycle(5).unwrap(), &bip).unwrap().member);
    }

    #[test]
    fn generation_counts() {
        assert_eq!(generate_constellations(1, 0).unwrap().len(), 2);
        for l in 1..=5 {
            assert_eq!(generate_constellations(l, 0).unwrap().len(), l + 1);
        }
        let one = generate_constellations(1, 1).unwrap();
        assert_eq!(one.len(), 4);
        let apex = sys(Graph::complete(1).unwrap(), &[1], 0).to_constellation();
        let isolated_over_clique = sys(Graph::complete(1).unwrap(), &[0], 1).to_constellation();
        assert!(one.contains(&apex) && one.contains(&isolated_over_clique));
        assert!(generate_constellations(4, 2).is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = Constellation::new(Graph::path(3).unwrap(), vec![0, 1, 1], vec![true, false, true], vec![false, true]).unwrap();
        let json = c.to_json();
        assert_eq!(json, r#"{"j":"Bg","phi":[0,1,1],"alpha":[1,0,1],"beta":[0,1]}"#);
        assert_eq!(serde_json::from_str::<Constellation>(&json).unwrap(), c);
        assert_eq!(c.stable_hash().len(), 16);
        assert!(serde_json::from_str::<Constellation>(r#"{"j":"@","phi":[],"alpha":[],"beta":[2]}"#).is_err());
    }

    #[test]
    fn minimal_non_stars() {
        let p3 = Graph::path(3).unwrap();
        assert!(is_minimal_non_star(&p3, 0));
        assert!(!is_minimal_non_star(&Graph::path(4).unwrap(), 0));
        let scan = spot_check_minimal_non_stars(1, 200, 10, 7).unwrap();
        assert_eq!(scan.graphs_checked, 200);
        assert!(scan.violations.is_empty());
        assert_eq!(scan, spot_check_minimal_non_stars(1, 200, 10, 7).unwrap());
    }
}
