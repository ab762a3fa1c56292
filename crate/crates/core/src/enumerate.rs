//! Orderly generation of hereditary families and exact speed tables.
//!
//! Members are generated level by level with canonical augmentation: a child
//! `G' = G + v` is kept only when `v` lies in the automorphism orbit of the
//! vertex carrying the last canonical label of `G'`, so every isomorphism
//! class appears once, from its canonical parent. Children of non-members
//! are never formed; heredity makes this lossless.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::{Budget, DEFAULT_BUDGET};
use crate::canon::{canonical_form, CanonKey};
use crate::error::{Error, Result};
use crate::family::{is_member_through, is_member_with_budget, FamilyExpr};
use crate::graph::Graph;
use crate::graph6;

/// Default and hard caps on the enumeration size.
pub const N_MAX_DEFAULT: usize = 10;
pub const N_MAX_LARGE: usize = 12;

/// Largest `n` accepted by [`labeled_count_direct`].
pub const DIRECT_MAX: usize = 6;

/// A graph property decided on graphs whose one-vertex-deleted parent is
/// already known to pass.
pub trait GraphPredicate: Sync {
    /// Whether `g` passes, given that `g` minus `new_vertex` passes.
    /// `new_vertex` is `None` for the null graph.
    fn accepts(&self, g: &Graph, new_vertex: Option<usize>) -> Result<bool>;
}

impl<F> GraphPredicate for F
where
    F: Fn(&Graph, Option<usize>) -> Result<bool> + Sync,
{
    fn accepts(&self, g: &Graph, new_vertex: Option<usize>) -> Result<bool> {
        self(g, new_vertex)
    }
}

/// Membership in a family expression, with a fresh node budget per call.
pub struct FamilyPredicate<'a> {
    pub family: &'a FamilyExpr,
    pub budget: u64,
}

impl<'a> FamilyPredicate<'a> {
    pub fn new(family: &'a FamilyExpr) -> Self {
        FamilyPredicate { family, budget: DEFAULT_BUDGET }
    }
}

impl GraphPredicate for FamilyPredicate<'_> {
    fn accepts(&self, g: &Graph, new_vertex: Option<usize>) -> Result<bool> {
        let mut budget = Budget::new(self.budget);
        Ok(match new_vertex {
            Some(v) => is_member_through(g, self.family, v, &mut budget)?.member,
            None => is_member_with_budget(g, self.family, &mut budget)?.member,
        })
    }
}

/// One generated isomorphism class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Member {
    pub key: CanonKey,
    pub aut_order: u64,
}

impl Member {
    pub fn graph(&self) -> Graph {
        self.key.to_graph()
    }

    /// Number of labelled graphs on `[n]` in this class: `n! / |Aut|`.
    pub fn labeled_count(&self) -> BigUint {
        factorial(self.key.n()) / BigUint::from(self.aut_order)
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// All members of a predicate up to some `n`, level by level, each level
/// sorted by canonical key.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Enumeration {
    pub levels: Vec<Vec<Member>>,
}

impl Enumeration {
    pub fn n_max(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    pub fn table(&self, family: &str) -> SpeedTable {
        let rows = self
            .levels
            .iter()
            .enumerate()
            .map(|(n, level)| SpeedRow {
                n,
                unlabeled: BigUint::from(level.len()),
                labeled: level.iter().map(Member::labeled_count).sum(),
            })
            .collect();
        SpeedTable { family: family.to_string(), rows }
    }

    /// Writes every member as a graph6 line, by increasing `n`.
    pub fn write_graph6<W: Write>(&self, mut out: W) -> Result<()> {
        for level in &self.levels {
            for m in level {
                writeln!(out, "{}", graph6::encode(&m.graph()))?;
            }
        }
        Ok(())
    }
}

/// Options for [`enumerate_members`].
#[derive(Clone, Debug)]
pub struct EnumOptions {
    pub n_max: usize,
    /// Raises the size cap from 10 to 12.
    pub allow_large: bool,
    /// Directory for per-level checkpoints.
    pub checkpoint_dir: Option<PathBuf>,
    /// Checkpoint file prefix; levels are cached as `<key>-n<n>.g6`.
    pub checkpoint_key: String,
    /// Node budget for each membership decision made by
    /// [`enumerate_family_members`].
    pub budget: u64,
}

impl EnumOptions {
    pub fn new(n_max: usize) -> Self {
        EnumOptions {
            n_max,
            allow_large: false,
            checkpoint_dir: None,
            checkpoint_key: String::new(),
            budget: DEFAULT_BUDGET,
        }
    }

    fn check(&self) -> Result<()> {
        let limit = if self.allow_large { N_MAX_LARGE } else { N_MAX_DEFAULT };
        if self.n_max > limit {
            return Err(Error::Capacity { what: "enumeration n_max", limit, got: self.n_max });
        }
        Ok(())
    }

    fn checkpoint_path(&self, n: usize) -> Option<PathBuf> {
        self.checkpoint_dir.as_ref().map(|d| d.join(format!("{}-n{n}.g6", self.checkpoint_key)))
    }
}

/// Generates all members of `pred` with at most `opts.n_max` vertices.
///
/// `pred` must be hereditary; otherwise members whose canonical parent fails
/// are silently missed.
pub fn enumerate_members<P: GraphPredicate + ?Sized>(pred: &P, opts: &EnumOptions) -> Result<Enumeration> {
    opts.check()?;
    let mut levels: Vec<Vec<Member>> = Vec::with_capacity(opts.n_max + 1);
    for n in 0..=opts.n_max {
        if let Some(level) = opts.checkpoint_path(n).as_deref().map(load_level).transpose()?.flatten() {
            levels.push(level);
            continue;
        }
        let level = if n == 0 {
            let null = Graph::new(0)?;
            if pred.accepts(&null, None)? {
                vec![Member { key: canonical_form(&null)?.canon, aut_order: 1 }]
            } else {
                Vec::new()
            }
        } else {
            next_level(pred, &levels[n - 1])?
        };
        if let Some(path) = opts.checkpoint_path(n) {
            save_level(&path, &level)?;
        }
        levels.push(level);
    }
    Ok(Enumeration { levels })
}

fn next_level<P: GraphPredicate + ?Sized>(pred: &P, parents: &[Member]) -> Result<Vec<Member>> {
    let per_parent: Vec<Result<Vec<Member>>> = parents.par_iter().map(|p| children(pred, p)).collect();
    let mut level = Vec::new();
    for r in per_parent {
        level.extend(r?);
    }
    level.sort_unstable();
    debug_assert!(level.windows(2).all(|w| w[0].key != w[1].key));
    Ok(level)
}

fn children<P: GraphPredicate + ?Sized>(pred: &P, parent: &Member) -> Result<Vec<Member>> {
    let g = parent.graph();
    let n = g.n();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0..1u64 << n {
        let child = g.with_new_vertex(mask)?;
        if !pred.accepts(&child, Some(n))? {
            continue;
        }
        let cf = canonical_form(&child)?;
        let orbits = cf.orbits();
        if orbits[n] != orbits[cf.labeling[n]] {
            continue;
        }
        if seen.insert(cf.canon) {
            out.push(Member { key: cf.canon, aut_order: cf.aut_order });
        }
    }
    Ok(out)
}

fn save_level(path: &Path, level: &[Member]) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut text = String::new();
    for m in level {
        let _ = writeln!(text, "{}", graph6::encode(&m.graph()));
    }
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn load_level(path: &Path) -> Result<Option<Vec<Member>>> {
    let file = match std::fs::File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let mut level = Vec::new();
    for line in std::io::BufReader::new(file).lines() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let cf = canonical_form(&graph6::decode(&line)?)?;
        level.push(Member { key: cf.canon, aut_order: cf.aut_order });
    }
    level.sort_unstable();
    Ok(Some(level))
}

/// One row of a speed table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpeedRow {
    pub n: usize,
    #[serde(with = "big_decimal")]
    pub unlabeled: BigUint,
    #[serde(with = "big_decimal")]
    pub labeled: BigUint,
}

impl SpeedRow {
    /// `log2 |F^n|`, or `None` when the family has no member on `[n]`.
    pub fn h(&self) -> Option<f64> {
        log2(&self.labeled)
    }
}

/// `log2` of a positive big integer, from its top 64 bits.
pub fn log2(x: &BigUint) -> Option<f64> {
    if x.is_zero() {
        return None;
    }
    let bits = x.bits();
    if bits <= 64 {
        return Some((x.to_u64()? as f64).log2());
    }
    let top = (x >> (bits - 64)).to_u64().expect("fits");
    Some((top as f64).log2() + (bits - 64) as f64)
}

/// Exact speed `|F^n|` with unlabelled counts, for `n = 0..=n_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpeedTable {
    pub family: String,
    pub rows: Vec<SpeedRow>,
}

impl SpeedTable {
    pub fn row(&self, n: usize) -> Option<&SpeedRow> {
        self.rows.iter().find(|r| r.n == n)
    }

    pub fn labeled(&self, n: usize) -> Option<&BigUint> {
        self.row(n).map(|r| &r.labeled)
    }

    pub fn h(&self, n: usize) -> Option<f64> {
        self.row(n).and_then(SpeedRow::h)
    }

    /// CSV with columns `n,unlabeled,labeled,h_bits`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,unlabeled,labeled,h_bits\n");
        for r in &self.rows {
            let h = r.h().map(|h| format!("{h:.6}")).unwrap_or_default();
            let _ = writeln!(s, "{},{},{},{}", r.n, r.unlabeled, r.labeled, h);
        }
        s
    }

    pub fn from_csv(family: &str, text: &str) -> Result<Self> {
        let bad = |line: usize, what: &str| Error::InvalidArgument(format!("speed csv line {line}: {what}"));
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, "n,unlabeled,labeled,h_bits")) => {}
            _ => return Err(bad(1, "missing header")),
        }
        let mut rows = Vec::new();
        for (i, line) in lines {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 4 {
                return Err(bad(i + 1, "expected 4 columns"));
            }
            rows.push(SpeedRow {
                n: cols[0].parse().map_err(|_| bad(i + 1, "bad n"))?,
                unlabeled: cols[1].parse().map_err(|_| bad(i + 1, "bad unlabeled count"))?,
                labeled: cols[2].parse().map_err(|_| bad(i + 1, "bad labeled count"))?,
            });
        }
        Ok(SpeedTable { family: family.to_string(), rows })
    }
}

pub(crate) mod big_decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Enumerates `f` up to `n_max` and returns its speed table.
pub fn enumerate_family(f: &FamilyExpr, n_max: usize) -> Result<SpeedTable> {
    Ok(enumerate_family_members(f, &EnumOptions::new(n_max))?.table(&f.to_string()))
}

pub fn enumerate_family_members(f: &FamilyExpr, opts: &EnumOptions) -> Result<Enumeration> {
    if !f.is_hereditary() {
        return Err(Error::Unsupported(format!("enumeration needs a hereditary family, got {f}")));
    }
    let mut opts = opts.clone();
    if opts.checkpoint_key.is_empty() {
        opts.checkpoint_key = f.stable_hash();
    }
    enumerate_members(&FamilyPredicate { family: f, budget: opts.budget }, &opts)
}

/// `|F^n|` by testing all `2^(n choose 2)` labelled graphs; independent of
/// the generator, for use as an oracle.
pub fn labeled_count_direct(f: &FamilyExpr, n: usize) -> Result<BigUint> {
    if n > DIRECT_MAX {
        return Err(Error::Capacity { what: "direct labelled count", limit: DIRECT_MAX, got: n });
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let mut count = 0u64;
    for code in 0..1u64 << pairs.len() {
        let mut g = Graph::new(n)?;
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if code >> k & 1 == 1 {
                g.add_edge(i, j);
            }
        }
        if is_member_with_budget(&g, f, &mut Budget::default())?.member {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}

/// `h(F, n) − h(H(l), n)` per `n`, with a fitted `k` for
/// `delta(n) ≈ k log2 n + c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpeedDelta {
    pub family: String,
    pub l: usize,
    pub rows: Vec<DeltaRow>,
    /// Least-squares slope of delta against `log2 n` over the fit window.
    pub slope: f64,
    /// `slope` rounded to the nearest non-negative integer.
    pub k: u64,
    /// `max − min` of `delta(n) − k log2 n` over the fit window.
    pub drift: f64,
    pub window: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaRow {
    pub n: usize,
    #[serde(with = "big_decimal")]
    pub labeled: BigUint,
    #[serde(with = "big_decimal")]
    pub reference: BigUint,
    pub delta: f64,
}

impl SpeedDelta {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,labeled,reference,delta_bits\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{:.6}\n", r.n, r.labeled, r.reference, r.delta));
        }
        out
    }
}

/// Delta table between two speed tables, fitted over the top half of the
/// shared `n` range (rows with `n ≥ max(2, ⌈n_max / 2⌉)`).
pub fn speed_delta_tables(f: &SpeedTable, reference: &SpeedTable, l: usize) -> Result<SpeedDelta> {
    let mut rows = Vec::new();
    for r in &f.rows {
        let Some(q) = reference.row(r.n) else { continue };
        if let (Some(a), Some(b)) = (r.h(), q.h()) {
            rows.push(DeltaRow { n: r.n, labeled: r.labeled.clone(), reference: q.labeled.clone(), delta: a - b });
        }
    }
    let n_max = rows.iter().map(|r| r.n).max().unwrap_or(0);
    let lo = 2.max(n_max.div_ceil(2));
    let fit = fit_log_slope(&rows, lo)?;
    Ok(SpeedDelta { family: f.family.clone(), l, rows, slope: fit.0, k: fit.1, drift: fit.2, window: (lo..=n_max).collect() })
}

fn fit_log_slope(rows: &[DeltaRow], lo: usize) -> Result<(f64, u64, f64)> {
    let pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.n >= lo).map(|r| ((r.n as f64).log2(), r.delta)).collect();
    if pts.len() < 2 {
        return Err(Error::InvalidArgument("speed delta needs at least two rows in the fit window".into()));
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let k = slope.round().max(0.0) as u64;
    let resid: Vec<f64> = pts.iter().map(|(x, y)| y - k as f64 * x).collect();
    let drift = resid.iter().cloned().fold(f64::MIN, f64::max) - resid.iter().cloned().fold(f64::MAX, f64::min);
    Ok((slope, k, drift))
}

/// Enumerates `f` and `H(l)` up to `n_max` and compares their speeds.
pub fn speed_delta(f: &FamilyExpr, l: usize, n_max: usize) -> Result<SpeedDelta> {
    let a = enumerate_family(f, n_max)?;
    let b = enumerate_family(&FamilyExpr::colourable(l), n_max)?;
    speed_delta_tables(&a, &b, l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::parse_family;

    fn labeled(f: &str, n_max: usize) -> Vec<u64> {
        let t = enumerate_family(&parse_family(f).unwrap(), n_max).unwrap();
        t.rows.iter().map(|r| r.labeled.to_u64().unwrap()).collect()
    }

    #[test]
    fn small_speeds() {
        assert_eq!(labeled("ALL", 4), vec![1, 1, 2, 8, 64]);
        assert_eq!(labeled("H(2,0)", 5), vec![1, 1, 2, 7, 41, 376]);
        assert_eq!(labeled("M", 4), vec![1, 1, 2, 4, 10]);
        let t = enumerate_family(&parse_family("forb(K2)").unwrap(), 6).unwrap();
        assert!(t.rows.iter().all(|r| r.unlabeled == BigUint::one() && r.labeled == BigUint::one()));
    }

    #[test]
    fn unlabeled_graph_counts() {
        let t = enumerate_family(&FamilyExpr::All, 7).unwrap();
        let un: Vec<u64> = t.rows.iter().map(|r| r.unlabeled.to_u64().unwrap()).collect();
        assert_eq!(un, vec![1, 1, 2, 4, 11, 34, 156, 1044]);
        for r in &t.rows {
            assert_eq!(r.labeled, BigUint::one() << (r.n * r.n.saturating_sub(1) / 2));
        }
    }

    #[test]
    fn direct_counts() {
        let f = parse_family("H(2,0)").unwrap();
        assert_eq!(labeled_count_direct(&f, 3).unwrap(), BigUint::from(7u32));
        assert_eq!(labeled_count_direct(&FamilyExpr::Complete, 5).unwrap(), BigUint::one());
        assert!(labeled_count_direct(&f, 7).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let t = enumerate_family(&parse_family("forb(K3)").unwrap(), 5).unwrap();
        let csv = t.to_csv();
        assert!(csv.starts_with("n,unlabeled,labeled,h_bits\n0,1,1,0.000000\n"));
        assert_eq!(SpeedTable::from_csv(&t.family, &csv).unwrap(), t);
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<SpeedTable>(&json).unwrap(), t);
    }

    #[test]
    fn log2_of_big_values() {
        let x = BigUint::one() << 200u32;
        assert_eq!(log2(&x), Some(200.0));
        assert_eq!(log2(&BigUint::zero()), None);
        assert!((log2(&BigUint::from(41u32)).unwrap() - 41f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn delta_of_a_family_with_itself() {
        let d = speed_delta(&FamilyExpr::colourable(2), 2, 7).unwrap();
        assert!(d.rows.iter().all(|r| r.delta == 0.0));
        assert_eq!(d.k, 0);
        assert_eq!(d.drift, 0.0);
    }

    #[test]
    fn caps_and_checkpoints() {
        assert!(enumerate_family(&FamilyExpr::All, 11).is_err());
        let dir = tempfile::tempdir().unwrap();
        let f = parse_family("forb(K3)").unwrap();
        let mut opts = EnumOptions::new(6);
        opts.checkpoint_dir = Some(dir.path().to_path_buf());
        let first = enumerate_family_members(&f, &opts).unwrap();
        assert!(dir.path().join(format!("{}-n6.g6", f.stable_hash())).exists());
        let again = enumerate_family_members(&f, &opts).unwrap();
        assert_eq!(first, again);
    }
}
