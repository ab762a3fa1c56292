//! Family expressions, their text syntax, and exact membership.

mod contain;
mod expr;
mod member;
mod parse;

pub use contain::{family_contains, family_contains_with_budget, one_vertex_extensions, Containment};
pub use expr::{graph_literal, named_graph, FamilyExpr};
pub use member::{
    is_member, is_member_through, is_member_with_budget, partition_search, verify_membership, Membership,
    PartitionCertificate, Witness,
};
pub use parse::parse_family;
