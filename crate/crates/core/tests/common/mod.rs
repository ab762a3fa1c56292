//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the search code under test; only `Graph` plumbing is reused.
#![allow(dead_code)]

use hfam_core::stars::Constellation;
use hfam_core::{FamilyExpr, Graph};
use itertools::Itertools;

/// All labeled graphs on `[n]`, in edge-bitmask order.
pub fn labeled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    (0u64..1 << pairs.len()).map(move |m| {
        let edges: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &p)| p).collect();
        Graph::from_edges(n, &edges).unwrap()
    })
}

/// `h` is an induced subgraph of `g`, by trying every injection.
pub fn brute_induced(h: &Graph, g: &Graph) -> bool {
    if h.n() > g.n() {
        return false;
    }
    (0..g.n()).permutations(h.n()).any(|img| {
        (0..h.n()).tuple_combinations().all(|(a, b)| h.has_edge(a, b) == g.has_edge(img[a], img[b]))
    })
}

fn sub(g: &Graph, vs: &[usize]) -> Graph {
    g.induced_subgraph(vs).unwrap()
}

/// All ways to colour `[n]` with `l` labelled colours.
fn colourings(n: usize, l: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n).map(|_| 0..l).multi_cartesian_product().chain((n == 0).then(Vec::new))
}

fn classes(colour: &[usize], l: usize) -> Vec<Vec<usize>> {
    (0..l).map(|i| (0..colour.len()).filter(|&v| colour[v] == i).collect()).collect()
}

/// Membership straight from the definitions.
pub fn brute_member(g: &Graph, f: &FamilyExpr) -> bool {
    let n = g.n();
    match f {
        FamilyExpr::All => true,
        FamilyExpr::Edgeless => g.edge_count() == 0,
        FamilyExpr::Complete => g.edge_count() == n * n.saturating_sub(1) / 2,
        FamilyExpr::Matchings => (0..n).all(|v| g.degree(v) <= 1),
        FamilyExpr::Forb(list) => list.iter().all(|k| !brute_induced(k, g)),
        FamilyExpr::Iota(h) => brute_induced(g, h),
        FamilyExpr::Hst { independent, cliques } => {
            let mut fs = vec![FamilyExpr::Edgeless; *independent];
            fs.extend(vec![FamilyExpr::Complete; *cliques]);
            brute_member(g, &FamilyExpr::Partition(fs))
        }
        FamilyExpr::Partition(fs) => colourings(n, fs.len())
            .any(|c| classes(&c, fs.len()).iter().zip(fs).all(|(part, fi)| brute_member(&sub(g, part), fi))),
        FamilyExpr::Apex(inner) => n == 0 && brute_member(g, inner) || (0..n).any(|v| brute_member(&g.delete_vertex(v), inner)),
        FamilyExpr::Complement(inner) => brute_member(&g.complement(), inner),
        FamilyExpr::DisjointUnion(a, b) | FamilyExpr::Join(a, b) => {
            let want_edges = matches!(f, FamilyExpr::Join(..));
            colourings(n, 2).any(|c| {
                let parts = classes(&c, 2);
                let across = parts[0].iter().all(|&x| parts[1].iter().all(|&y| g.has_edge(x, y) == want_edges));
                across && brute_member(&sub(g, &parts[0]), a) && brute_member(&sub(g, &parts[1]), b)
            })
        }
        FamilyExpr::Intersection(a, b) => brute_member(g, a) && brute_member(g, b),
        FamilyExpr::Union(a, b) => brute_member(g, a) || brute_member(g, b),
        FamilyExpr::ForbBigraph(_) => unimplemented!("not exercised by the oracles"),
    }
}

/// Whether `g` admits a `c`-template, by trying every injection of `J`
/// and every part assignment of the rest.
pub fn brute_template(g: &Graph, c: &Constellation) -> bool {
    let k = c.j.n();
    let l = c.l();
    (0..g.n()).permutations(k).any(|psi| {
        let induced = (0..k).tuple_combinations().all(|(a, b)| c.j.has_edge(a, b) == g.has_edge(psi[a], psi[b]));
        if !induced {
            return false;
        }
        let rest: Vec<usize> = (0..g.n()).filter(|x| !psi.contains(x)).collect();
        colourings(rest.len(), l).any(|col| {
            let crowns: Vec<Vec<usize>> = classes(&col, l).into_iter().map(|p| p.iter().map(|&i| rest[i]).collect()).collect();
            let attach = (0..k).all(|v| crowns[c.phi[v]].iter().all(|&x| g.has_edge(psi[v], x) == c.alpha[v]));
            let homogeneous = crowns
                .iter()
                .enumerate()
                .all(|(i, cr)| cr.iter().tuple_combinations().all(|(&x, &y)| g.has_edge(x, y) == c.beta[i]));
            attach && homogeneous
        })
    })
}

/// `g ∈ P(𝓙)` by searching hosts: `g` plus up to `|V(J)|` fresh vertices
/// with every possible adjacency.
pub fn brute_pj(g: &Graph, c: &Constellation) -> bool {
    let n = g.n();
    for extra in 0..=c.j.n() {
        let total = n + extra;
        let new_pairs: Vec<(usize, usize)> =
            (0..total).tuple_combinations().filter(|&(_, b)| b >= n).collect();
        for m in 0u64..1 << new_pairs.len() {
            let mut host = Graph::new(total).unwrap();
            for (a, b) in g.edges() {
                host.add_edge(a, b);
            }
            for (i, &(a, b)) in new_pairs.iter().enumerate() {
                if m >> i & 1 == 1 {
                    host.add_edge(a, b);
                }
            }
            if brute_template(&host, c) {
                return true;
            }
        }
    }
    false
}

/// Smallest core size straight from the crown definition.
pub fn brute_core_size(g: &Graph) -> usize {
    let n = g.n();
    (0u64..1 << n)
        .filter(|&crown| {
            (0..n).all(|v| {
                let others: Vec<usize> = (0..n).filter(|&x| x != v && crown >> x & 1 == 1).collect();
                others.iter().all(|&x| g.has_edge(v, x)) || others.iter().all(|&x| !g.has_edge(v, x))
            })
        })
        .map(|crown| n - crown.count_ones() as usize)
        .min()
        .unwrap_or(0)
}

/// Number of labeled graphs on `[n]` with no triangle, by
/// inclusion–exclusion over sets of triangles.
pub fn triangle_free_by_inclusion_exclusion(n: usize) -> i64 {
    let pairs = n * n.saturating_sub(1) / 2;
    let tris: Vec<[(usize, usize); 3]> =
        (0..n).tuple_combinations().map(|(a, b, c)| [(a, b), (a, c), (b, c)]).collect();
    let mut total = 0i64;
    for chosen in 0u64..1 << tris.len() {
        let mut edges: Vec<(usize, usize)> =
            tris.iter().enumerate().filter(|(i, _)| chosen >> i & 1 == 1).flat_map(|(_, t)| t.iter().copied()).collect();
        edges.sort_unstable();
        edges.dedup();
        let sign = if chosen.count_ones() % 2 == 0 { 1 } else { -1 };
        total += sign * (1i64 << (pairs - edges.len()));
    }
    total
}
