//! Coloring number, reduced and dangerous graphs, and the predicates built
//! on them.

use serde::{Deserialize, Serialize};

use crate::budget::{Budget, DEFAULT_BUDGET};
use crate::enumerate::{enumerate_family_members, enumerate_members, EnumOptions, Enumeration, SpeedTable};
use crate::error::{Error, Result};
use crate::family::{family_contains_with_budget, is_member_with_budget, FamilyExpr, Membership};
use crate::graph::Graph;
use crate::graph6;

fn forbidden_list(f: &FamilyExpr) -> Result<&[Graph]> {
    f.forbidden()
        .ok_or_else(|| Error::Unsupported(format!("expected a forb(...) family, got {f}")))
}

/// `H(s, t)` as a partition product, for use inside larger products.
fn hst_factors(s: usize, t: usize) -> Vec<FamilyExpr> {
    let mut v = vec![FamilyExpr::Edgeless; s];
    v.extend(std::iter::repeat_n(FamilyExpr::Complete, t));
    v
}

/// A forbidden graph shown to lie in some `H(s, t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub s: usize,
    pub t: usize,
    pub forbidden_index: usize,
    pub certificate: Membership,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringNumberResult {
    /// `χ_c`, or `None` for the family of all graphs.
    pub chi_c: Option<usize>,
    /// Least `s` with `H(s, χ_c − s) ⊆ F`.
    pub witness_s: Option<usize>,
    /// For each `s' ∈ [0, χ_c + 1]`, a forbidden graph in `H(s', χ_c + 1 − s')`.
    pub refutations: Vec<Refutation>,
}

/// `χ_c(Forb(𝓚))`: the largest `l` such that some `H(s, l − s)` contains no
/// graph of `𝓚`. `H(0, 0)` holds only the null graph, so the answer is at
/// least 0 whenever every `K` is non-null.
pub fn coloring_number(f: &FamilyExpr) -> Result<ColoringNumberResult> {
    let list = forbidden_list(f)?;
    if list.is_empty() {
        return Ok(ColoringNumberResult { chi_c: None, witness_s: None, refutations: Vec::new() });
    }
    if list.iter().any(|k| k.n() == 0) {
        return Err(Error::InvalidArgument("forbidden graphs must be non-null".into()));
    }
    let bound = list.iter().map(Graph::n).max().unwrap_or(0);
    let mut budget = Budget::new(DEFAULT_BUDGET);
    let mut witness_s = Some(0);
    let mut l = 0;
    loop {
        let next = l + 1;
        let mut refutations = Vec::new();
        let mut found = None;
        for s in 0..=next {
            match first_member(list, &FamilyExpr::hst(s, next - s), &mut budget)? {
                Some((forbidden_index, certificate)) => {
                    refutations.push(Refutation { s, t: next - s, forbidden_index, certificate })
                }
                None => {
                    found = Some(s);
                    break;
                }
            }
        }
        match found {
            Some(s) => {
                // H(s, t) with s + t ≥ |V(K)| contains K, so this cannot run past the bound.
                if next > bound {
                    return Err(Error::InvalidArgument(format!(
                        "no forbidden graph lies in H({s},{})",
                        next - s
                    )));
                }
                witness_s = Some(s);
                l = next;
            }
            None => return Ok(ColoringNumberResult { chi_c: Some(l), witness_s, refutations }),
        }
    }
}

/// First graph of `list` that is a member of `f`.
fn first_member(list: &[Graph], f: &FamilyExpr, budget: &mut Budget) -> Result<Option<(usize, Membership)>> {
    for (i, k) in list.iter().enumerate() {
        let m = is_member_with_budget(k, f, budget)?;
        if m.member {
            return Ok(Some((i, m)));
        }
    }
    Ok(None)
}

/// `P(ι(h), H(s, l − 1 − s))`.
pub fn reduced_test_family(h: &Graph, s: usize, l: usize) -> FamilyExpr {
    let mut factors = vec![FamilyExpr::Iota(h.clone())];
    factors.extend(hst_factors(s, l - 1 - s));
    FamilyExpr::Partition(factors)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedClassification {
    pub graph: String,
    pub reduced: bool,
    /// The `s` making `h` reduced.
    pub witness_s: Option<usize>,
    /// On a dangerous graph, for every `s`, a forbidden graph with its
    /// partition certificate in `P(ι(h), H(s, l − 1 − s))`.
    pub violations: Vec<Refutation>,
}

/// Decides whether `h` is `Forb(𝓚)`-reduced, where `l = χ_c`.
pub fn is_reduced(h: &Graph, f: &FamilyExpr, l: usize) -> Result<ReducedClassification> {
    is_reduced_with_budget(h, f, l, &mut Budget::new(DEFAULT_BUDGET))
}

fn is_reduced_with_budget(h: &Graph, f: &FamilyExpr, l: usize, budget: &mut Budget) -> Result<ReducedClassification> {
    forbidden_list(f)?;
    if l == 0 {
        return Err(Error::InvalidArgument("reducedness needs a coloring number of at least 1".into()));
    }
    let mut violations = Vec::new();
    for s in 0..l {
        let c = family_contains_with_budget(&reduced_test_family(h, s, l), f, budget)?;
        match c.counterexample {
            None => {
                return Ok(ReducedClassification {
                    graph: graph6::encode(h),
                    reduced: true,
                    witness_s: Some(s),
                    violations: Vec::new(),
                })
            }
            Some((forbidden_index, certificate)) => {
                violations.push(Refutation { s, t: l - 1 - s, forbidden_index, certificate })
            }
        }
    }
    Ok(ReducedClassification { graph: graph6::encode(h), reduced: false, witness_s: None, violations })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedEnumeration {
    pub table: SpeedTable,
    pub members: Enumeration,
    /// Every one-vertex-deleted subgraph of every member was re-checked.
    pub heredity_checked: bool,
}

/// Generates `red(F)` up to `n_max`. The family is hereditary, so
/// generation prunes on it; heredity is re-checked on the output.
pub fn enumerate_reduced(f: &FamilyExpr, l: usize, n_max: usize) -> Result<ReducedEnumeration> {
    forbidden_list(f)?;
    let pred = |g: &Graph, _: Option<usize>| -> Result<bool> { Ok(is_reduced(g, f, l)?.reduced) };
    let members = enumerate_members(&pred, &EnumOptions::new(n_max))?;
    let mut heredity_checked = true;
    for level in members.levels.iter().skip(1) {
        for m in level {
            let g = m.graph();
            for v in 0..g.n() {
                if !is_reduced(&g.delete_vertex(v), f, l)?.reduced {
                    heredity_checked = false;
                }
            }
        }
    }
    let table = members.table(&format!("red({f})"));
    Ok(ReducedEnumeration { table, members, heredity_checked })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApexWitness {
    pub s: usize,
    /// A forbidden graph `K` and vertex `u` with `K \ u ∈ H(s, l − s)`.
    pub witness: Option<(usize, usize, Membership)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApexFreeResult {
    pub apex_free: bool,
    pub per_s: Vec<ApexWitness>,
}

/// Apex-freeness of `Forb(𝓚)` with `l = χ_c`: for every `s ∈ [0, l]`, some
/// `H ∉ F` has `H \ u ∈ H(s, l − s)` for some `u`.
///
/// It suffices to try the forbidden graphs as `H`. Any `H ∉ F` contains an
/// induced `K ∈ 𝓚`; if `u` lies on that copy then `K \ u'` embeds in
/// `H \ u`, and otherwise `K` itself does, and `H(s, l − s)` is hereditary.
pub fn is_apex_free(f: &FamilyExpr, l: usize) -> Result<ApexFreeResult> {
    let list = forbidden_list(f)?;
    let mut budget = Budget::new(DEFAULT_BUDGET);
    let mut per_s = Vec::with_capacity(l + 1);
    for s in 0..=l {
        let target = FamilyExpr::hst(s, l - s);
        let mut witness = None;
        'search: for (i, k) in list.iter().enumerate() {
            for u in 0..k.n() {
                let m = is_member_with_budget(&k.delete_vertex(u), &target, &mut budget)?;
                if m.member {
                    witness = Some((i, u, m));
                    break 'search;
                }
            }
        }
        per_s.push(ApexWitness { s, witness });
    }
    Ok(ApexFreeResult { apex_free: per_s.iter().all(|w| w.witness.is_some()), per_s })
}

/// `K_{1,j}` plus `i` isolated vertices; the centre is vertex 0.
pub fn substar(j: usize, i: usize) -> Result<Graph> {
    let star = Graph::complete_bipartite(1, j)?;
    star.disjoint_union(&Graph::edgeless(i)?)
}

/// Default bound on `j + i` in the (anti)substar grid.
pub const MEAGER_CAP: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum MeagerVerdict {
    Meager,
    /// No excluded substar or no excluded antisubstar within the cap.
    Unknown { cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeagerResult {
    pub verdict: MeagerVerdict,
    /// `(j, i)` of the first substar `K_{1,j} ∪ iK_1` not in the family.
    pub substar: Option<(usize, usize)>,
    /// `(j, i)` of the first substar whose complement is not in the family.
    pub antisubstar: Option<(usize, usize)>,
}

/// Looks for an excluded substar and an excluded antisubstar with
/// `j + i ≤ cap`, scanning by size and then by `j`.
pub fn is_meager(f: &FamilyExpr, cap: usize) -> Result<MeagerResult> {
    let mut budget = Budget::new(DEFAULT_BUDGET);
    let mut sub = None;
    let mut anti = None;
    'grid: for total in 0..=cap {
        for j in 0..=total {
            let g = substar(j, total - j)?;
            if sub.is_none() && !is_member_with_budget(&g, f, &mut budget)?.member {
                sub = Some((j, total - j));
            }
            if anti.is_none() && !is_member_with_budget(&g.complement(), f, &mut budget)?.member {
                anti = Some((j, total - j));
            }
            if sub.is_some() && anti.is_some() {
                break 'grid;
            }
        }
    }
    let verdict = if sub.is_some() && anti.is_some() { MeagerVerdict::Meager } else { MeagerVerdict::Unknown { cap } };
    Ok(MeagerResult { verdict, substar: sub, antisubstar: anti })
}

/// Largest `n_check` accepted by [`is_extendable_upto`].
pub const EXTENDABLE_MAX: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtendableResult {
    pub extendable: bool,
    /// The first member (by size, then canonical order) without a
    /// one-vertex extension, as graph6.
    pub failure: Option<String>,
}

/// Checks that every member with fewer than `n_check` vertices has a
/// one-vertex extension inside `f`.
pub fn is_extendable_upto(f: &FamilyExpr, n_check: usize) -> Result<ExtendableResult> {
    if n_check > EXTENDABLE_MAX {
        return Err(Error::Capacity { what: "extendability horizon", limit: EXTENDABLE_MAX, got: n_check });
    }
    if n_check == 0 {
        return Ok(ExtendableResult { extendable: true, failure: None });
    }
    let members = enumerate_family_members(f, &EnumOptions::new(n_check - 1))?;
    for level in &members.levels {
        for m in level {
            let g = m.graph();
            let mut extends = false;
            for mask in 0..1u64 << g.n() {
                let h = g.with_new_vertex(mask)?;
                if is_member_with_budget(&h, f, &mut Budget::new(DEFAULT_BUDGET))?.member {
                    extends = true;
                    break;
                }
            }
            if !extends {
                return Ok(ExtendableResult { extendable: false, failure: Some(graph6::encode(&g)) });
            }
        }
    }
    Ok(ExtendableResult { extendable: true, failure: None })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessRow {
    pub n: usize,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub holds: bool,
}

/// Finite-range evidence for `h(F, n) ≥ h(F, n − 1) + ((l − 1)/l − δ) n`.
/// This is a report on the computed rows only; smoothness itself is an
/// asymptotic property and is never concluded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    pub l: usize,
    pub delta: f64,
    pub rows: Vec<SmoothnessRow>,
    /// Largest `n` at which the inequality fails, if any.
    pub last_violation: Option<usize>,
    /// The definition only covers `l ≥ 2`.
    pub outside_definition: bool,
}

pub fn smoothness_report(speed: &SpeedTable, l: usize, delta: f64) -> Result<SmoothnessReport> {
    if l == 0 || delta <= 0.0 {
        return Err(Error::InvalidArgument("smoothness needs l ≥ 1 and δ > 0".into()));
    }
    if speed.rows.windows(2).any(|w| w[1].n != w[0].n + 1) {
        return Err(Error::InvalidArgument("speed table rows must be contiguous".into()));
    }
    let coef = (l as f64 - 1.0) / l as f64 - delta;
    let rows: Vec<SmoothnessRow> = speed
        .rows
        .windows(2)
        .map(|w| {
            let n = w[1].n;
            let lhs = w[1].h();
            let rhs = w[0].h().map(|h| h + coef * n as f64);
            let holds = match (lhs, rhs) {
                (Some(a), Some(b)) => a >= b,
                (_, None) => true,
                (None, Some(_)) => false,
            };
            SmoothnessRow { n, lhs, rhs, holds }
        })
        .collect();
    let last_violation = rows.iter().filter(|r| !r.holds).map(|r| r.n).max();
    Ok(SmoothnessReport { l, delta, rows, last_violation, outside_definition: l < 2 })
}

/// Whether every part size is within `n^(1 − ε)` of `n / (number of parts)`.
pub fn is_balanced(part_sizes: &[usize], eps: f64) -> Result<bool> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument("ε must lie in (0, 1)".into()));
    }
    if part_sizes.is_empty() {
        return Ok(true);
    }
    let n: usize = part_sizes.iter().sum();
    let mean = n as f64 / part_sizes.len() as f64;
    let slack = (n as f64).powf(1.0 - eps);
    Ok(part_sizes.iter().all(|&x| (x as f64 - mean).abs() <= slack))
}

/// JSON-ready structural summary of a `forb(...)` family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub family: String,
    pub chi_c: Option<usize>,
    pub witness_s: Option<usize>,
    pub apex_free: Option<ApexFreeResult>,
    pub meager: MeagerResult,
    /// Reduced graphs up to the horizon, as graph6.
    pub reduced_members: Vec<String>,
    pub reduced_horizon: usize,
}

pub fn classify(f: &FamilyExpr, reduced_horizon: usize) -> Result<ClassificationReport> {
    let chi = coloring_number(f)?;
    let (apex_free, reduced_members) = match chi.chi_c {
        Some(l) if l >= 1 => {
            let red = enumerate_reduced(f, l, reduced_horizon)?;
            let mut list = Vec::new();
            for level in &red.members.levels {
                list.extend(level.iter().map(|m| graph6::encode(&m.graph())));
            }
            (Some(is_apex_free(f, l)?), list)
        }
        _ => (None, Vec::new()),
    };
    Ok(ClassificationReport {
        family: f.to_string(),
        chi_c: chi.chi_c,
        witness_s: chi.witness_s,
        apex_free,
        meager: is_meager(f, MEAGER_CAP)?,
        reduced_members,
        reduced_horizon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_family;
    use crate::family::parse_family;

    fn fam(s: &str) -> FamilyExpr {
        parse_family(s).unwrap()
    }

    #[test]
    fn coloring_numbers() {
        let r = coloring_number(&fam("forb(K3)")).unwrap();
        assert_eq!((r.chi_c, r.witness_s), (Some(2), Some(2)));
        assert_eq!(r.refutations.len(), 4);
        let r = coloring_number(&fam("forb(K2)")).unwrap();
        assert_eq!((r.chi_c, r.witness_s), (Some(1), Some(1)));
        let r = coloring_number(&fam("forb(2K2)")).unwrap();
        assert_eq!((r.chi_c, r.witness_s), (Some(2), Some(1)));
        let r = coloring_number(&fam("forb(K1)")).unwrap();
        assert_eq!(r.chi_c, Some(0));
        assert_eq!(coloring_number(&fam("forb()")).unwrap().chi_c, None);
        assert!(coloring_number(&fam("S")).is_err());
    }

    #[test]
    fn reduced_examples() {
        let f = fam("forb(K3)");
        for m in 1..6 {
            assert!(is_reduced(&Graph::edgeless(m).unwrap(), &f, 2).unwrap().reduced);
        }
        let r = is_reduced(&Graph::complete(2).unwrap(), &f, 2).unwrap();
        assert!(!r.reduced);
        assert_eq!(r.violations.len(), 2);
        let f = fam("forb(2K2)");
        assert!(!is_reduced(&Graph::path(3).unwrap(), &f, 2).unwrap().reduced);
        let r = is_reduced(&Graph::complete(4).unwrap(), &f, 2).unwrap();
        assert_eq!((r.reduced, r.witness_s), (true, Some(1)));
    }

    #[test]
    fn reduced_triangle_free_graphs_are_edgeless() {
        let r = enumerate_reduced(&fam("forb(K3)"), 2, 6).unwrap();
        assert!(r.heredity_checked);
        assert!(r.table.rows.iter().all(|row| row.unlabeled == 1u32.into()));
    }

    #[test]
    fn apex_freeness() {
        assert!(is_apex_free(&fam("forb(K3)"), 2).unwrap().apex_free);
        assert!(is_apex_free(&fam("forb(K2)"), 1).unwrap().apex_free);
        // P4 is split, bipartite and co-bipartite
        let r = is_apex_free(&fam("forb(C5)"), 2).unwrap();
        assert!(r.apex_free);
        assert!(r.per_s.iter().all(|w| matches!(w.witness, Some((0, _, _)))));
    }

    #[test]
    fn meagerness() {
        let r = is_meager(&FamilyExpr::Edgeless, MEAGER_CAP).unwrap();
        assert_eq!(r.verdict, MeagerVerdict::Meager);
        assert_eq!(r.substar, Some((1, 0)));
        let r = is_meager(&FamilyExpr::All, MEAGER_CAP).unwrap();
        assert_eq!(r.verdict, MeagerVerdict::Unknown { cap: MEAGER_CAP });
        assert_eq!(is_meager(&fam("H(1,1)"), MEAGER_CAP).unwrap().verdict, MeagerVerdict::Unknown { cap: MEAGER_CAP });
        assert_eq!(is_meager(&fam("M"), MEAGER_CAP).unwrap().verdict, MeagerVerdict::Meager);
    }

    #[test]
    fn extendability() {
        assert!(is_extendable_upto(&FamilyExpr::Complete, 8).unwrap().extendable);
        assert!(is_extendable_upto(&fam("forb(K2)"), 8).unwrap().extendable);
        let r = is_extendable_upto(&fam("iota(K3)"), 8).unwrap();
        assert_eq!(r.failure, Some(graph6::encode(&Graph::complete(3).unwrap())));
    }

    #[test]
    fn smoothness() {
        let t = enumerate_family(&FamilyExpr::colourable(2), 8).unwrap();
        let r = smoothness_report(&t, 2, 0.1).unwrap();
        assert!(r.rows.iter().filter(|row| row.n >= 4).all(|row| row.holds));
        let t = enumerate_family(&fam("forb(K2)"), 8).unwrap();
        let r = smoothness_report(&t, 1, 0.5).unwrap();
        assert!(r.outside_definition);
        assert_eq!(r.last_violation, None);
    }

    #[test]
    fn balance() {
        assert!(is_balanced(&[5, 5], 0.5).unwrap());
        assert!(!is_balanced(&[1, 9], 0.5).unwrap());
        assert!(is_balanced(&[4, 6], 0.5).unwrap());
        assert!(is_balanced(&[4, 6], 1.5).is_err());
    }
}
