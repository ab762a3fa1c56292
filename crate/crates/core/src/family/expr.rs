use std::fmt;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{Bigraph, Graph};
use crate::graph6;

/// A family of graphs built from the constructors below.
///
/// Every constructor preserves heredity: `Apex(F)` of a hereditary `F` is
/// hereditary because deleting a vertex other than the apex keeps the apex,
/// and deleting the apex lands in `F`. The null graph is taken to be in
/// `Apex(F)` exactly when it is in `F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FamilyExpr {
    /// Graphs with no induced copy of any listed graph.
    Forb(Vec<Graph>),
    /// Graphs into which the bigraph does not embed.
    ForbBigraph(Bigraph),
    /// Graphs partitionable into `independent` stable sets and `cliques` cliques.
    Hst { independent: usize, cliques: usize },
    Edgeless,
    Complete,
    /// Maximum component size two.
    Matchings,
    All,
    /// Induced subgraphs of the given graph.
    Iota(Graph),
    /// Graphs `G` with `G \ v` in the inner family for some `v`.
    Apex(Box<FamilyExpr>),
    /// Complements of members.
    Complement(Box<FamilyExpr>),
    /// Disjoint unions of a member of each side.
    DisjointUnion(Box<FamilyExpr>, Box<FamilyExpr>),
    /// Joins of a member of each side.
    Join(Box<FamilyExpr>, Box<FamilyExpr>),
    /// Graphs with a vertex partition whose `i`-th part induces a member of
    /// the `i`-th factor.
    Partition(Vec<FamilyExpr>),
    Intersection(Box<FamilyExpr>, Box<FamilyExpr>),
    Union(Box<FamilyExpr>, Box<FamilyExpr>),
}

impl FamilyExpr {
    pub fn forb(graphs: Vec<Graph>) -> Self {
        FamilyExpr::Forb(graphs)
    }

    pub fn hst(independent: usize, cliques: usize) -> Self {
        FamilyExpr::Hst { independent, cliques }
    }

    /// `H(l) = H(l, 0)`, the `l`-colourable graphs.
    pub fn colourable(l: usize) -> Self {
        FamilyExpr::hst(l, 0)
    }

    pub fn partition(factors: Vec<FamilyExpr>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument("partition product needs at least one factor".into()));
        }
        Ok(FamilyExpr::Partition(factors))
    }

    pub fn apex(inner: FamilyExpr) -> Result<Self> {
        if inner.contains_apex() {
            return Err(Error::Unsupported("nested apex families".into()));
        }
        Ok(FamilyExpr::Apex(Box::new(inner)))
    }

    pub fn complement(inner: FamilyExpr) -> Self {
        FamilyExpr::Complement(Box::new(inner))
    }

    pub fn disjoint_union(a: FamilyExpr, b: FamilyExpr) -> Self {
        FamilyExpr::DisjointUnion(Box::new(a), Box::new(b))
    }

    pub fn join(a: FamilyExpr, b: FamilyExpr) -> Self {
        FamilyExpr::Join(Box::new(a), Box::new(b))
    }

    pub fn and(a: FamilyExpr, b: FamilyExpr) -> Self {
        FamilyExpr::Intersection(Box::new(a), Box::new(b))
    }

    pub fn or(a: FamilyExpr, b: FamilyExpr) -> Self {
        FamilyExpr::Union(Box::new(a), Box::new(b))
    }

    fn contains_apex(&self) -> bool {
        use FamilyExpr::*;
        match self {
            Apex(_) => true,
            Forb(_) | ForbBigraph(_) | Hst { .. } | Edgeless | Complete | Matchings | All | Iota(_) => false,
            Complement(e) => e.contains_apex(),
            DisjointUnion(a, b) | Join(a, b) | Intersection(a, b) | Union(a, b) => a.contains_apex() || b.contains_apex(),
            Partition(fs) => fs.iter().any(|f| f.contains_apex()),
        }
    }

    /// Structural heredity flag. Every constructor preserves heredity; the
    /// only rejected shape is an apex nested inside another apex, whose
    /// meaning is not pinned down.
    pub fn is_hereditary(&self) -> bool {
        use FamilyExpr::*;
        match self {
            Apex(inner) => !inner.contains_apex() && inner.is_hereditary(),
            Forb(_) | ForbBigraph(_) | Hst { .. } | Edgeless | Complete | Matchings | All | Iota(_) => true,
            Complement(e) => e.is_hereditary(),
            DisjointUnion(a, b) | Join(a, b) | Intersection(a, b) | Union(a, b) => a.is_hereditary() && b.is_hereditary(),
            Partition(fs) => !fs.is_empty() && fs.iter().all(|f| f.is_hereditary()),
        }
    }

    /// The forbidden list, when the family is written as `forb(...)`.
    pub fn forbidden(&self) -> Option<&[Graph]> {
        match self {
            FamilyExpr::Forb(gs) => Some(gs),
            _ => None,
        }
    }

    /// Stable content hash of the printed expression (hex, 16 chars).
    pub fn stable_hash(&self) -> String {
        let digest = Sha256::digest(self.to_string().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

/// Name under which `g` prints, as a DSL graph literal.
///
/// Standard shapes print by name (`K3`, `K_12`, `E4`, `C5`, `P4`, `K13`,
/// `2K2`) only when `g` is labelled exactly as the parser builds that name;
/// everything else prints as `g6:<graph6>`.
pub fn graph_literal(g: &Graph) -> String {
    let n = g.n();
    let same = |h: Result<Graph>| h.map(|h| &h == g).unwrap_or(false);
    if same(Graph::complete(n)) {
        return if n <= 9 { format!("K{n}") } else { format!("K_{n}") };
    }
    if same(Graph::edgeless(n)) {
        return format!("E{n}");
    }
    if n >= 3 && same(Graph::cycle(n)) {
        return format!("C{n}");
    }
    if same(Graph::path(n)) {
        return format!("P{n}");
    }
    for a in 1..n.min(10) {
        let b = n - a;
        if b <= 9 && same(Graph::complete_bipartite(a, b)) {
            return format!("K{a}{b}");
        }
    }
    for k in 2..n {
        if n.is_multiple_of(k) && n / k >= 2 && same(Graph::disjoint_cliques(n / k, k)) {
            return format!("{}K{k}", n / k);
        }
    }
    format!("g6:{}", graph6::encode(g))
}

/// Builds the graph for a named literal; see [`graph_literal`].
pub fn named_graph(name: &str) -> Option<Graph> {
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let num = |s: &str| s.parse::<usize>().ok();
    if let Some(rest) = name.strip_prefix("K_") {
        return digits(rest).then(|| num(rest)).flatten().and_then(|n| Graph::complete(n).ok());
    }
    if let Some(rest) = name.strip_prefix('K') {
        if !digits(rest) {
            return None;
        }
        let b = rest.as_bytes();
        return match b.len() {
            1 => Graph::complete((b[0] - b'0') as usize).ok(),
            2 => Graph::complete_bipartite((b[0] - b'0') as usize, (b[1] - b'0') as usize).ok(),
            _ => None,
        };
    }
    let sized = |prefix: char, build: fn(usize) -> Result<Graph>| {
        name.strip_prefix(prefix)
            .filter(|r| digits(r))
            .and_then(num)
            .and_then(|n| build(n).ok())
    };
    if name.starts_with('E') {
        return sized('E', Graph::edgeless);
    }
    if name.starts_with('C') {
        return sized('C', Graph::cycle);
    }
    if name.starts_with('P') {
        return sized('P', Graph::path);
    }
    // mKk
    let pos = name.find('K')?;
    let (m, k) = (&name[..pos], &name[pos + 1..]);
    if digits(m) && digits(k) {
        return Graph::disjoint_cliques(num(m)?, num(k)?).ok();
    }
    None
}

const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_ATOM: u8 = 3;

impl FamilyExpr {
    fn precedence(&self) -> u8 {
        match self {
            FamilyExpr::Union(..) => PREC_OR,
            FamilyExpr::Intersection(..) => PREC_AND,
            _ => PREC_ATOM,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        use FamilyExpr::*;
        let paren = self.precedence() < min_prec;
        if paren {
            write!(f, "(")?;
        }
        match self {
            Forb(gs) => {
                write!(f, "forb(")?;
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", graph_literal(g))?;
                }
                write!(f, ")")?;
            }
            ForbBigraph(j) => write!(f, "bforb({}, {})", graph_literal(&j.to_graph()), j.left())?,
            Hst { independent, cliques } => write!(f, "H({independent},{cliques})")?,
            Edgeless => write!(f, "S")?,
            Complete => write!(f, "C")?,
            Matchings => write!(f, "M")?,
            All => write!(f, "ALL")?,
            Iota(g) => write!(f, "iota({})", graph_literal(g))?,
            Apex(e) => {
                write!(f, "apex(")?;
                e.write(f, PREC_OR)?;
                write!(f, ")")?;
            }
            Complement(e) => {
                write!(f, "co(")?;
                e.write(f, PREC_OR)?;
                write!(f, ")")?;
            }
            DisjointUnion(a, b) | Join(a, b) => {
                write!(f, "{}(", if matches!(self, DisjointUnion(..)) { "du" } else { "join" })?;
                a.write(f, PREC_OR)?;
                write!(f, ", ")?;
                b.write(f, PREC_OR)?;
                write!(f, ")")?;
            }
            Partition(fs) => {
                write!(f, "P(")?;
                for (i, e) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    e.write(f, PREC_OR)?;
                }
                write!(f, ")")?;
            }
            Intersection(a, b) => {
                a.write(f, PREC_AND)?;
                write!(f, " and ")?;
                b.write(f, PREC_ATOM)?;
            }
            Union(a, b) => {
                a.write(f, PREC_OR)?;
                write!(f, " or ")?;
                b.write(f, PREC_AND)?;
            }
        }
        if paren {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for FamilyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, PREC_OR)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for name in ["K1", "K3", "K_12", "E4", "C5", "P4", "K13", "K22", "2K2", "3K3"] {
            let g = named_graph(name).unwrap();
            assert_eq!(graph_literal(&g), name, "{name}");
        }
        assert_eq!(named_graph("K13").unwrap(), Graph::complete_bipartite(1, 3).unwrap());
        assert!(named_graph("C2").is_none());
        assert!(named_graph("Q5").is_none());
        let odd = Graph::from_edges(3, &[(0, 2)]).unwrap();
        assert_eq!(graph_literal(&odd), format!("g6:{}", graph6::encode(&odd)));
    }

    #[test]
    fn printing_uses_minimal_parentheses() {
        let e = FamilyExpr::or(FamilyExpr::Edgeless, FamilyExpr::and(FamilyExpr::Complete, FamilyExpr::Matchings));
        assert_eq!(e.to_string(), "S or C and M");
        let e = FamilyExpr::and(FamilyExpr::or(FamilyExpr::Edgeless, FamilyExpr::Complete), FamilyExpr::Matchings);
        assert_eq!(e.to_string(), "(S or C) and M");
        let e = FamilyExpr::partition(vec![FamilyExpr::Matchings, FamilyExpr::Complete]).unwrap();
        assert_eq!(e.to_string(), "P(M, C)");
    }

    #[test]
    fn nested_apex_is_rejected() {
        let once = FamilyExpr::apex(FamilyExpr::Complete).unwrap();
        assert!(once.is_hereditary());
        assert!(FamilyExpr::apex(once).is_err());
        assert!(FamilyExpr::partition(vec![]).is_err());
    }
}
