use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::family::expr::FamilyExpr;
use crate::family::member::{decide_with, Membership};
use crate::graph::Graph;

/// Answer to `f_sub ⊆ Forb(𝓚)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Containment {
    pub contained: bool,
    /// On a negative answer: index of the first `K ∈ 𝓚` lying in `f_sub`,
    /// with its membership certificate.
    pub counterexample: Option<(usize, Membership)>,
}

/// Decides `f_sub ⊆ f_super` for `f_super = forb(𝓚)` (or `ALL`).
///
/// For hereditary `f_sub`, containment in `Forb(𝓚)` fails exactly when some
/// `K ∈ 𝓚` is itself a member of `f_sub`: a member with an induced `K` has
/// `K` as a member by heredity, and conversely `K` is not `K`-free.
pub fn family_contains(f_sub: &FamilyExpr, f_super: &FamilyExpr) -> Result<Containment> {
    family_contains_with_budget(f_sub, f_super, &mut Budget::default())
}

pub fn family_contains_with_budget(f_sub: &FamilyExpr, f_super: &FamilyExpr, budget: &mut Budget) -> Result<Containment> {
    if !f_sub.is_hereditary() {
        return Err(Error::Unsupported(format!("containment needs a hereditary subfamily, got {f_sub}")));
    }
    let list = match f_super {
        FamilyExpr::All => &[][..],
        FamilyExpr::Forb(list) => list,
        other => return Err(Error::Unsupported(format!("containment target must be forb(...), got {other}"))),
    };
    for (i, k) in list.iter().enumerate() {
        let m = decide_with(k, f_sub, budget)?;
        if m.member {
            return Ok(Containment { contained: false, counterexample: Some((i, m)) });
        }
    }
    Ok(Containment { contained: true, counterexample: None })
}

/// All members `G'` of `f` on `n + 1` vertices whose restriction to the
/// first `n` vertices is `g`, ordered by the new vertex's neighbourhood mask.
pub fn one_vertex_extensions(g: &Graph, f: &FamilyExpr) -> Result<Vec<Graph>> {
    const LIMIT: usize = 24;
    if g.n() > LIMIT {
        return Err(Error::Capacity { what: "one-vertex extension scan", limit: LIMIT, got: g.n() });
    }
    let mut out = Vec::new();
    for mask in 0..1u64 << g.n() {
        let h = g.with_new_vertex(mask)?;
        if decide_with(&h, f, &mut Budget::default())?.member {
            out.push(h);
        }
    }
    Ok(out)
}
