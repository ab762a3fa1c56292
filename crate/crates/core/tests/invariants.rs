//! Exhaustive checks of module invariants at small sizes.

mod common;

use std::collections::BTreeSet;

use hfam_core::critical::is_critical;
use hfam_core::enumerate::{enumerate_family_members, factorial, labeled_count_direct, EnumOptions};
use hfam_core::family::{family_contains, is_member, parse_family, verify_membership};
use hfam_core::stars::{generate_constellations, is_member_pj, is_s_star, Constellation, StarSystem};
use hfam_core::structure::{enumerate_reduced, is_apex_free, is_reduced, reduced_test_family};
use hfam_core::{coloring_number, enumerate_family, FamilyExpr, Graph};
use num_bigint::BigUint;

fn fam(t: &str) -> FamilyExpr {
    parse_family(t).unwrap()
}

#[test]
fn enumerator_matches_brute_force_scan() {
    for t in ["H(2,0)", "H(1,1)", "forb(K3)", "forb(2K2)", "M", "P(M, C)", "P(S, S)"] {
        let f = fam(t);
        let table = enumerate_family(&f, 6).unwrap();
        for n in 0..=6 {
            let brute = common::labeled_graphs(n).filter(|g| common::brute_member(g, &f)).count();
            assert_eq!(table.labeled(n).unwrap(), &BigUint::from(brute), "{t} at n = {n}");
            assert_eq!(labeled_count_direct(&f, n).unwrap(), BigUint::from(brute));
        }
    }
}

#[test]
fn generation_has_no_duplicates_and_is_sound() {
    for t in ["ALL", "forb(P4)", "P(M, C)", "apex(M)"] {
        let f = fam(t);
        let e = enumerate_family_members(&f, &EnumOptions::new(8)).unwrap();
        for level in &e.levels {
            let keys: BTreeSet<_> = level.iter().map(|m| m.key).collect();
            assert_eq!(keys.len(), level.len(), "{t}");
            for m in level {
                assert!(is_member(&m.graph(), &f).unwrap().member, "{t}");
            }
        }
    }
}

#[test]
fn orbit_identity_on_all_graphs() {
    let e = enumerate_family_members(&FamilyExpr::All, &EnumOptions::new(8)).unwrap();
    for (n, level) in e.levels.iter().enumerate() {
        let sum: BigUint = level.iter().map(|m| factorial(n) / BigUint::from(m.aut_order)).sum();
        assert_eq!(sum, BigUint::from(2u8).pow((n * n.saturating_sub(1) / 2) as u32));
    }
}

#[test]
fn coloring_number_brackets() {
    for m in 2..=5 {
        let f = FamilyExpr::forb(vec![Graph::complete(m).unwrap()]);
        let r = coloring_number(&f).unwrap();
        let l = r.chi_c.unwrap();
        assert_eq!(l, m - 1);
        let s = r.witness_s.unwrap();
        assert!(family_contains(&FamilyExpr::hst(s, l - s), &f).unwrap().contained);
        for s2 in 0..=l + 1 {
            assert!(!family_contains(&FamilyExpr::hst(s2, l + 1 - s2), &f).unwrap().contained);
        }
        for refutation in &r.refutations {
            let k = &f.forbidden().unwrap()[refutation.forbidden_index];
            let target = FamilyExpr::hst(refutation.s, refutation.t);
            assert!(verify_membership(k, &target, &refutation.certificate).unwrap());
            assert!(common::brute_member(k, &target));
        }
    }
}

#[test]
fn reduced_witnesses_re_verify() {
    for (t, l) in [("forb(K3)", 2), ("forb(2K2)", 2), ("forb(C5)", 2)] {
        let f = fam(t);
        let e = enumerate_family_members(&FamilyExpr::All, &EnumOptions::new(5)).unwrap();
        for g in e.levels.iter().flatten().map(|m| m.graph()) {
            let r = is_reduced(&g, &f, l).unwrap();
            if let Some(s) = r.witness_s {
                assert!(family_contains(&reduced_test_family(&g, s, l), &f).unwrap().contained);
            }
            for v in &r.violations {
                let k = &f.forbidden().unwrap()[v.forbidden_index];
                assert!(common::brute_member(k, &reduced_test_family(&g, v.s, l)));
            }
        }
    }
}

#[test]
fn reduced_family_is_hereditary() {
    for t in ["forb(K3)", "forb(2K2)", "forb(C5)"] {
        let r = enumerate_reduced(&fam(t), 2, 6).unwrap();
        assert!(r.heredity_checked, "{t}");
    }
}

#[test]
fn apex_free_reduction_matches_bounded_search() {
    for t in ["forb(K3)", "forb(C5)", "forb(2K2)"] {
        let f = fam(t);
        let l = coloring_number(&f).unwrap().chi_c.unwrap();
        let reduced = is_apex_free(&f, l).unwrap();
        let bound = f.forbidden().unwrap().iter().map(Graph::n).max().unwrap() + 1;
        let graphs = enumerate_family_members(&FamilyExpr::All, &EnumOptions::new(bound)).unwrap();
        for s in 0..=l {
            let target = FamilyExpr::hst(s, l - s);
            let direct = graphs.levels.iter().flatten().map(|m| m.graph()).any(|h| {
                !common::brute_member(&h, &f) && (0..h.n()).any(|u| common::brute_member(&h.delete_vertex(u), &target))
            });
            assert_eq!(reduced.per_s[s].witness.is_some(), direct, "{t}, s = {s}");
        }
    }
}

#[test]
fn pj_membership_matches_host_search() {
    let mut systems = generate_constellations(1, 2).unwrap();
    systems.extend(generate_constellations(2, 1).unwrap().into_iter().filter(|c| c.j.n() <= 1));
    let graphs = enumerate_family_members(&FamilyExpr::All, &EnumOptions::new(4)).unwrap();
    for c in &systems {
        for g in graphs.levels.iter().flatten().map(|m| m.graph()) {
            assert_eq!(is_member_pj(&g, c).unwrap().member, common::brute_pj(&g, c), "{c} on {g:?}");
        }
    }
}

#[test]
fn irreducibility_matches_minimal_cores() {
    // for a host with a crown of at least two vertices, the template image
    // is a minimal core exactly when the system is irreducible
    for s in 0..=2 {
        for c in generate_constellations(1, s).unwrap() {
            let sys = c.component(0);
            for crown in 2..=4 {
                let host = host_of(&sys, crown);
                assert_eq!(hfam_core::stars::minimal_core(&host).size, sys.j.n(), "{c}");
            }
        }
    }
    let reducible = StarSystem::new(Graph::complete(2).unwrap(), vec![true, true], true).unwrap();
    assert!(hfam_core::stars::minimal_core(&host_of(&reducible, 3)).size < 2);
}

fn host_of(sys: &StarSystem, crown: usize) -> Graph {
    let k = sys.j.n();
    let mut g = Graph::new(k + crown).unwrap();
    for (a, b) in sys.j.edges() {
        g.add_edge(a, b);
    }
    for x in k..k + crown {
        for v in 0..k {
            if sys.alpha[v] {
                g.add_edge(v, x);
            }
        }
        for y in k..x {
            if sys.beta {
                g.add_edge(x, y);
            }
        }
    }
    g
}

#[test]
fn criticality_witnesses_re_verify() {
    for t in ["forb(K3)", "forb(2K2)", "forb(C5)", "forb(K4)"] {
        let f = fam(t);
        let v = is_critical(&f).unwrap();
        assert_eq!(v.checks.len(), 8 << (v.l - 1));
        for check in &v.checks {
            let tuple = FamilyExpr::Partition(check.tuple.iter().map(|x| fam(x)).collect());
            match &check.counterexample {
                Some((i, cert)) => {
                    let k = &f.forbidden().unwrap()[*i];
                    assert!(verify_membership(k, &tuple, cert).unwrap());
                    assert!(common::brute_member(k, &tuple));
                }
                None => {
                    assert!(check.contained);
                    assert!(f.forbidden().unwrap().iter().all(|k| !common::brute_member(k, &tuple)));
                }
            }
        }
    }
}

#[test]
fn star_likeness_agrees_with_first_factor_test_at_l1() {
    // a family is star-like at this horizon when all members on 6..=8
    // vertices have cores of size at most 2; the first-factor test asks
    // whether some candidate family lies inside it (checked up to n = 6)
    let candidates = hfam_core::critical::first_factors();
    for t in ["S", "C", "M", "co(M)", "iota(C5)", "apex(C)"] {
        let f = fam(t);
        let members = enumerate_family_members(&f, &EnumOptions::new(8)).unwrap();
        let star_like = members.levels[6..].iter().flatten().all(|m| is_s_star(&m.graph(), 2));
        let contains_candidate = candidates.iter().any(|c| {
            let e = enumerate_family_members(c, &EnumOptions::new(6)).unwrap();
            e.levels.iter().flatten().all(|m| common::brute_member(&m.graph(), &f))
        });
        assert_eq!(star_like, !contains_candidate, "{t}");
    }
}

#[test]
fn constellation_equivalence_classes() {
    // (l, 0): one class per number of clique parts
    for l in 1..=4 {
        let cs = generate_constellations(l, 0).unwrap();
        let cliques: BTreeSet<usize> = cs.iter().map(|c| c.beta.iter().filter(|&&b| b).count()).collect();
        assert_eq!(cliques.len(), l + 1);
        assert_eq!(cs.len(), l + 1);
    }
    for c in generate_constellations(2, 1).unwrap() {
        assert!(c.is_irreducible() && c.max_fiber() <= 1);
        let back: Constellation = serde_json::from_str(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }
}
