//! Criticality decisions and the finite verification experiments.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::budget::{Budget, DEFAULT_BUDGET};
use crate::enumerate::{
    big_decimal, enumerate_family, enumerate_family_members, enumerate_members, log2, EnumOptions, Enumeration,
    SpeedTable,
};
use crate::error::{Error, Result};
use crate::family::{family_contains, is_member_with_budget, FamilyExpr, Membership};
use crate::graph::Graph;
use crate::graph6;
use crate::stars::{generate_constellations, is_member_pj, is_s_star, Constellation};
use crate::structure::{coloring_number, enumerate_reduced, is_balanced};

/// Default horizon for the `s` scan of [`is_critical`].
pub const S_HORIZON: usize = 8;

/// Drift tolerance in bits for [`verify_star_speed`].
pub const DRIFT_TOLERANCE: f64 = 2.0;

/// The eight candidates for the first factor, in scan order.
pub fn first_factors() -> Vec<FamilyExpr> {
    use FamilyExpr::{Complete as C, Edgeless as S, Matchings as M};
    let base = vec![
        M,
        FamilyExpr::disjoint_union(C, C),
        FamilyExpr::disjoint_union(C, S),
        FamilyExpr::apex(C).expect("C is apex-free"),
    ];
    let co: Vec<FamilyExpr> = base.iter().cloned().map(FamilyExpr::complement).collect();
    base.into_iter().chain(co).collect()
}

/// All `8 · 2^(l−1)` tuples `(F₁, …, F_l)` with `F₂, …, F_l ∈ {C, S}`.
pub fn candidate_tuples(l: usize) -> Vec<Vec<FamilyExpr>> {
    let mut out = Vec::new();
    for f1 in first_factors() {
        for mask in 0..1usize << (l - 1) {
            let mut t = vec![f1.clone()];
            // bit i set means S; C comes first
            t.extend((0..l - 1).map(|i| if mask >> (l - 2 - i) & 1 == 1 { FamilyExpr::Edgeless } else { FamilyExpr::Complete }));
            out.push(t);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleCheck {
    pub tuple: Vec<String>,
    pub contained: bool,
    /// When not contained: the forbidden graph lying in `P(tuple)` and its
    /// partition certificate.
    pub counterexample: Option<(usize, Membership)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalityVerdict {
    pub family: String,
    pub critical: bool,
    pub l: usize,
    /// Smallest `s` for which every reduced member with
    /// `4s + 6 ≤ n ≤ s_horizon` is an `s`-star. Only set when critical.
    pub s: Option<usize>,
    pub s_horizon: usize,
    /// First contained tuple, when not critical.
    pub witness: Option<Vec<String>>,
    pub checks: Vec<TupleCheck>,
}

/// Decides criticality of `forb(𝓚)` by scanning every candidate tuple for
/// `P(F₁, …, F_l) ⊆ F`. Critical means no tuple is contained.
pub fn is_critical(f: &FamilyExpr) -> Result<CriticalityVerdict> {
    is_critical_with_horizon(f, S_HORIZON)
}

pub fn is_critical_with_horizon(f: &FamilyExpr, s_horizon: usize) -> Result<CriticalityVerdict> {
    let l = match coloring_number(f)?.chi_c {
        None => return Err(Error::Unsupported("criticality of a family with unbounded colouring number".into())),
        Some(0) => return Err(Error::InvalidArgument("criticality needs a colouring number of at least 1".into())),
        Some(l) => l,
    };
    let mut checks = Vec::new();
    for tuple in candidate_tuples(l) {
        let names = tuple.iter().map(ToString::to_string).collect();
        let c = family_contains(&FamilyExpr::Partition(tuple), f)?;
        checks.push(TupleCheck { tuple: names, contained: c.contained, counterexample: c.counterexample });
    }
    let witness = checks.iter().find(|c| c.contained).map(|c| c.tuple.clone());
    let critical = witness.is_none();
    let s = if critical { Some(star_parameter(f, l, s_horizon)?) } else { None };
    Ok(CriticalityVerdict { family: f.to_string(), critical, l, s, s_horizon, witness, checks })
}

fn star_parameter(f: &FamilyExpr, l: usize, horizon: usize) -> Result<usize> {
    let red = enumerate_reduced(f, l, horizon)?.members;
    let mut s = 0;
    loop {
        let from = 4 * s + 6;
        let ok = (from..=horizon).all(|n| red.levels[n].iter().all(|m| is_s_star(&m.graph(), s)));
        if ok {
            return Ok(s);
        }
        s += 1;
    }
}

/// One exact fraction of a verification experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FractionRow {
    pub n: usize,
    #[serde(with = "big_decimal")]
    pub numerator: BigUint,
    #[serde(with = "big_decimal")]
    pub denominator: BigUint,
    /// Reduced `p/q`.
    pub fraction: String,
    pub approx: f64,
}

impl FractionRow {
    pub fn new(n: usize, numerator: BigUint, denominator: BigUint) -> Result<Self> {
        if denominator.is_zero() || numerator > denominator {
            return Err(Error::InvalidArgument(format!("fraction {numerator}/{denominator} at n = {n} is outside [0, 1]")));
        }
        let r = BigRational::new(BigInt::from(numerator.clone()), BigInt::from(denominator.clone()));
        let approx = r.to_f64().unwrap_or(f64::NAN);
        Ok(FractionRow { n, fraction: format!("{}/{}", r.numer(), r.denom()), numerator, denominator, approx })
    }

    pub fn ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.numerator.clone()), BigInt::from(self.denominator.clone()))
    }
}

/// Labeled weights of unique and of ε-balanced partitions per `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionStats {
    pub n: usize,
    #[serde(with = "big_decimal")]
    pub partitioned: BigUint,
    #[serde(with = "big_decimal")]
    pub unique: BigUint,
    #[serde(with = "big_decimal")]
    pub balanced: BigUint,
}

/// A member with its partition, kept for spot checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpotCheck {
    pub n: usize,
    pub graph: String,
    pub parts: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpeedDriftRow {
    pub n: usize,
    #[serde(with = "big_decimal")]
    pub labeled: BigUint,
    #[serde(with = "big_decimal")]
    pub reference: BigUint,
    /// `h(P, n) − h(H(l), n)` in bits.
    pub excess: f64,
    /// `excess − |V(J)| · log₂ n`.
    pub residual: f64,
    pub in_window: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    /// `None` when the range is too short to decide.
    pub holds: Option<bool>,
    pub detail: String,
}

/// Output of a verification experiment. Every number is reproducible from
/// the exact integers it carries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub parameters: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fractions: Vec<FractionRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub partitions: Vec<PartitionStats>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub speeds: Vec<SpeedDriftRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub selected: Vec<Constellation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spot_checks: Vec<SpotCheck>,
    pub verdicts: Vec<Verdict>,
}

impl ExperimentReport {
    fn new(experiment: &str, parameters: &[(&str, String)]) -> Self {
        ExperimentReport {
            experiment: experiment.into(),
            parameters: parameters.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            fractions: Vec::new(),
            partitions: Vec::new(),
            speeds: Vec::new(),
            selected: Vec::new(),
            spot_checks: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn fraction(&self, n: usize) -> Option<&FractionRow> {
        self.fractions.iter().find(|r| r.n == n)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The fraction table, or the speed table for speed experiments.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if !self.speeds.is_empty() {
            out.push_str("n,labeled,reference,excess_bits,residual_bits,in_window\n");
            for r in &self.speeds {
                out.push_str(&format!(
                    "{},{},{},{:.6},{:.6},{}\n",
                    r.n, r.labeled, r.reference, r.excess, r.residual, r.in_window
                ));
            }
            return out;
        }
        let stats: HashMap<usize, &PartitionStats> = self.partitions.iter().map(|p| (p.n, p)).collect();
        out.push_str("n,numerator,denominator,fraction");
        if !stats.is_empty() {
            out.push_str(",unique,balanced");
        }
        out.push('\n');
        for r in &self.fractions {
            out.push_str(&format!("{},{},{},{}", r.n, r.numerator, r.denominator, r.fraction));
            if let Some(p) = stats.get(&r.n) {
                out.push_str(&format!(",{},{}", p.unique, p.balanced));
            }
            out.push('\n');
        }
        out
    }

    /// `fraction(n_max) > fraction(n_max − 3)`.
    fn push_trend(&mut self, n_max: usize) {
        let (now, then) = match (n_max.checked_sub(3).and_then(|m| self.fraction(m)), self.fraction(n_max)) {
            (Some(then), Some(now)) => (now.ratio(), then.ratio()),
            _ => {
                self.verdicts.push(Verdict { name: "trend".into(), holds: None, detail: "range shorter than 4".into() });
                return;
            }
        };
        let detail = format!("fraction({n_max}) = {} vs fraction({}) = {}", now, n_max - 3, then);
        self.verdicts.push(Verdict { name: "trend".into(), holds: Some(now > then), detail });
    }
}

fn fractions_from_tables(num: &SpeedTable, den: &SpeedTable) -> Result<Vec<FractionRow>> {
    den.rows
        .iter()
        .filter(|r| !r.labeled.is_zero())
        .map(|r| {
            let p = num.labeled(r.n).cloned().unwrap_or_default();
            FractionRow::new(r.n, p, r.labeled.clone())
        })
        .collect()
}

/// Exact `|H(l)^n| / |Forb(K_{l+1})^n|` for `n ≤ n_max`.
pub fn verify_kpr(l: usize, n_max: usize) -> Result<ExperimentReport> {
    if !(2..=3).contains(&l) {
        return Err(Error::InvalidArgument(format!("verify_kpr supports l ∈ {{2, 3}}, got {l}")));
    }
    let h = enumerate_family(&FamilyExpr::hst(l, 0), n_max)?;
    let forb = enumerate_family(&FamilyExpr::forb(vec![Graph::complete(l + 1)?]), n_max)?;
    let mut report = ExperimentReport::new("kpr", &[("l", l.to_string()), ("n_max", n_max.to_string())]);
    report.fractions = fractions_from_tables(&h, &forb)?;
    if let Some(r) = report.fraction(3) {
        let one = r.numerator == r.denominator;
        report.verdicts.push(Verdict { name: "fraction(3) = 1".into(), holds: Some(one), detail: r.fraction.clone() });
    }
    report.push_trend(n_max);
    Ok(report)
}

/// Counts unordered partitions of `g` into at most `l` parts inducing
/// members of `t`, stopping at `stop`.
fn count_partitions(g: &Graph, t: &FamilyExpr, l: usize, stop: usize) -> Result<usize> {
    struct Ctx<'a> {
        g: &'a Graph,
        t: &'a FamilyExpr,
        l: usize,
        stop: usize,
        memo: HashMap<u64, bool>,
        found: usize,
    }
    impl Ctx<'_> {
        fn ok(&mut self, mask: u64) -> Result<bool> {
            if let Some(&b) = self.memo.get(&mask) {
                return Ok(b);
            }
            let b = is_member_with_budget(&self.g.induced_by_mask(mask), self.t, &mut Budget::new(DEFAULT_BUDGET))?.member;
            self.memo.insert(mask, b);
            Ok(b)
        }
        fn rec(&mut self, v: usize, parts: &mut Vec<u64>) -> Result<()> {
            if self.found >= self.stop {
                return Ok(());
            }
            if v == self.g.n() {
                self.found += 1;
                return Ok(());
            }
            for i in 0..parts.len() {
                let m = parts[i] | 1 << v;
                if self.ok(m)? {
                    parts[i] = m;
                    self.rec(v + 1, parts)?;
                    parts[i] &= !(1 << v);
                }
            }
            if parts.len() < self.l && self.ok(1 << v)? {
                parts.push(1 << v);
                self.rec(v + 1, parts)?;
                parts.pop();
            }
            Ok(())
        }
    }
    let mut ctx = Ctx { g, t, l, stop, memo: HashMap::new(), found: 0 };
    if g.n() == 0 {
        return Ok(1);
    }
    ctx.rec(0, &mut Vec::new())?;
    Ok(ctx.found)
}

/// Labeled-weighted fraction of `F^n` admitting a partition into `l` parts
/// from `t`, with counts of unique and of `ε`-balanced partitions.
pub fn verify_partition_fraction(
    f: &FamilyExpr,
    t: &FamilyExpr,
    l: usize,
    n_max: usize,
    eps: f64,
) -> Result<ExperimentReport> {
    if !t.is_hereditary() {
        return Err(Error::InvalidArgument(format!("partition family {t} is not hereditary")));
    }
    if l == 0 {
        return Err(Error::InvalidArgument("l must be at least 1".into()));
    }
    let members = enumerate_family_members(f, &EnumOptions::new(n_max))?;
    let product = FamilyExpr::Partition(vec![t.clone(); l]);
    let mut report = ExperimentReport::new(
        "partition-fraction",
        &[
            ("family", f.to_string()),
            ("parts", t.to_string()),
            ("l", l.to_string()),
            ("n_max", n_max.to_string()),
            ("eps", eps.to_string()),
        ],
    );
    for (n, level) in members.levels.iter().enumerate() {
        let mut stats = PartitionStats { n, partitioned: BigUint::zero(), unique: BigUint::zero(), balanced: BigUint::zero() };
        let mut total = BigUint::zero();
        let mut spot = None;
        for m in level {
            let w = m.labeled_count();
            total += &w;
            let g = m.graph();
            let mem = is_member_with_budget(&g, &product, &mut Budget::new(DEFAULT_BUDGET))?;
            let Some(cert) = mem.partition() else { continue };
            if is_balanced(&cert.part_sizes(), eps)? {
                stats.balanced += &w;
            }
            if count_partitions(&g, t, l, 2)? == 1 {
                stats.unique += &w;
            }
            stats.partitioned += w;
            spot.get_or_insert_with(|| SpotCheck { n, graph: graph6::encode(&g), parts: cert.parts.clone() });
        }
        if total.is_zero() {
            continue;
        }
        report.fractions.push(FractionRow::new(n, stats.partitioned.clone(), total)?);
        report.partitions.push(stats);
        report.spot_checks.extend(spot);
    }
    report.push_trend(n_max);
    Ok(report)
}

/// Irreducible `(l, s)`-constellations whose `P(𝓙)` avoids every forbidden
/// graph of `f`.
pub fn contained_constellations(f: &FamilyExpr, l: usize, s: usize) -> Result<Vec<Constellation>> {
    let list = f
        .forbidden()
        .ok_or_else(|| Error::Unsupported(format!("constellation selection needs forb(...), got {f}")))?;
    let mut out = Vec::new();
    for c in generate_constellations(l, s)? {
        let mut inside = true;
        for k in list {
            if is_member_pj(k, &c)?.member {
                inside = false;
                break;
            }
        }
        if inside {
            out.push(c);
        }
    }
    Ok(out)
}

/// Labeled-weighted fraction of `F^n` lying in some selected `P(𝓙)`.
pub fn verify_constellation_cover(f: &FamilyExpr, l: usize, s: usize, n_max: usize) -> Result<ExperimentReport> {
    let selected = contained_constellations(f, l, s)?;
    let members = enumerate_family_members(f, &EnumOptions::new(n_max))?;
    let mut report = ExperimentReport::new(
        "constellation-cover",
        &[("family", f.to_string()), ("l", l.to_string()), ("s", s.to_string()), ("n_max", n_max.to_string())],
    );
    for (n, level) in members.levels.iter().enumerate() {
        let mut covered = BigUint::zero();
        let mut total = BigUint::zero();
        for m in level {
            let w = m.labeled_count();
            total += &w;
            let g = m.graph();
            for c in &selected {
                if is_member_pj(&g, c)?.member {
                    covered += &w;
                    break;
                }
            }
        }
        if !total.is_zero() {
            report.fractions.push(FractionRow::new(n, covered, total)?);
        }
    }
    report.selected = selected;
    report.push_trend(n_max);
    Ok(report)
}

/// Enumerates `P(𝓙)` up to `n_max` (at most 12).
pub fn enumerate_pj(c: &Constellation, n_max: usize) -> Result<Enumeration> {
    let pred = |g: &Graph, _: Option<usize>| -> Result<bool> { Ok(is_member_pj(g, c)?.member) };
    let mut opts = EnumOptions::new(n_max);
    opts.allow_large = true;
    enumerate_members(&pred, &opts)
}

/// Compares `h(P(𝓙), n) − h(H(l), n)` with `|V(J)| · log₂ n`; the drift is
/// the spread of the residual over `n ∈ [window_start, n_max]`.
pub fn verify_star_speed(c: &Constellation, window_start: usize, n_max: usize) -> Result<ExperimentReport> {
    let limit = if c.l() == 1 { 12 } else { 10 };
    if n_max > limit {
        return Err(Error::Capacity { what: "star speed n_max", limit, got: n_max });
    }
    if !c.is_irreducible() {
        return Err(Error::InvalidArgument("star speed needs an irreducible system".into()));
    }
    let l = c.l();
    let k = c.j.n();
    let p = enumerate_pj(c, n_max)?.table(&c.to_json());
    let reference = if l == 1 {
        None
    } else {
        Some(enumerate_family(&FamilyExpr::hst(l, 0), n_max)?)
    };
    let mut report = ExperimentReport::new(
        "star-speed",
        &[
            ("constellation", c.to_json()),
            ("window_start", window_start.to_string()),
            ("n_max", n_max.to_string()),
        ],
    );
    for row in p.rows.iter().filter(|r| r.n >= 1) {
        // H(1) is S or C: one labeled graph per n
        let reference = reference.as_ref().and_then(|t| t.labeled(row.n).cloned()).unwrap_or_else(|| BigUint::from(1u8));
        let excess = log2(&row.labeled).unwrap_or(f64::NAN) - log2(&reference).unwrap_or(f64::NAN);
        let residual = excess - k as f64 * (row.n as f64).log2();
        report.speeds.push(SpeedDriftRow {
            n: row.n,
            labeled: row.labeled.clone(),
            reference,
            excess,
            residual,
            in_window: row.n >= window_start,
        });
    }
    let window: Vec<f64> = report.speeds.iter().filter(|r| r.in_window).map(|r| r.residual).collect();
    let verdict = if window.len() < 2 {
        Verdict { name: "drift".into(), holds: None, detail: "window has fewer than 2 points".into() }
    } else {
        let max = window.iter().copied().fold(f64::MIN, f64::max);
        let min = window.iter().copied().fold(f64::MAX, f64::min);
        let drift = max - min;
        Verdict {
            name: "drift".into(),
            holds: Some(drift < DRIFT_TOLERANCE),
            detail: format!("drift {drift:.6} bits over n ∈ [{window_start}, {n_max}], tolerance {DRIFT_TOLERANCE}"),
        }
    };
    report.verdicts.push(verdict);
    Ok(report)
}

/// The drift of a star speed report, when decided.
pub fn drift_of(report: &ExperimentReport) -> Option<f64> {
    let w: Vec<f64> = report.speeds.iter().filter(|r| r.in_window).map(|r| r.residual).collect();
    (w.len() >= 2).then(|| w.iter().copied().fold(f64::MIN, f64::max) - w.iter().copied().fold(f64::MAX, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::parse_family;
    use crate::stars::StarSystem;

    #[test]
    fn tuple_counts() {
        assert_eq!(candidate_tuples(1).len(), 8);
        assert_eq!(candidate_tuples(2).len(), 16);
        assert_eq!(candidate_tuples(3).len(), 32);
        let names: Vec<String> = candidate_tuples(2)[..2].iter().map(|t| format!("{}|{}", t[0], t[1])).collect();
        assert_eq!(names, ["M|C", "M|S"]);
    }

    #[test]
    fn criticality_examples() {
        let k3 = is_critical(&parse_family("forb(K3)").unwrap()).unwrap();
        assert!(k3.critical);
        assert_eq!((k3.l, k3.s), (2, Some(0)));
        assert!(k3.checks.iter().all(|c| c.counterexample.is_some()));
        let c5 = is_critical(&parse_family("forb(C5)").unwrap()).unwrap();
        assert!(!c5.critical);
        assert_eq!(c5.witness.as_deref(), Some(&["M".to_string(), "C".to_string()][..]));
        assert_eq!(c5.s, None);
    }

    #[test]
    fn kpr_small() {
        let r = verify_kpr(2, 6).unwrap();
        assert_eq!(r.fraction(3).unwrap().fraction, "1/1");
        assert!(r.fraction(5).unwrap().ratio() < BigRational::from_integer(1.into()));
        assert_eq!(r.verdict("fraction(3) = 1").unwrap().holds, Some(true));
        let p = verify_partition_fraction(&parse_family("forb(K3)").unwrap(), &FamilyExpr::Edgeless, 2, 6, 0.5).unwrap();
        assert_eq!(p.fractions, r.fractions);
        let all = verify_partition_fraction(&parse_family("forb(K3)").unwrap(), &FamilyExpr::All, 2, 5, 0.5).unwrap();
        assert!(all.fractions.iter().all(|f| f.numerator == f.denominator));
    }

    #[test]
    fn partition_counting() {
        // C4 has one 2-colouring; E2 has two (together or apart)
        assert_eq!(count_partitions(&Graph::cycle(4).unwrap(), &FamilyExpr::Edgeless, 2, 5).unwrap(), 1);
        assert_eq!(count_partitions(&Graph::edgeless(2).unwrap(), &FamilyExpr::Edgeless, 2, 5).unwrap(), 2);
        assert_eq!(count_partitions(&Graph::cycle(5).unwrap(), &FamilyExpr::Edgeless, 2, 5).unwrap(), 0);
    }

    #[test]
    fn cover_selects_bipartite_only() {
        let f = parse_family("forb(K3)").unwrap();
        let sel = contained_constellations(&f, 2, 0).unwrap();
        assert_eq!(sel, vec![Constellation::empty(vec![false, false]).unwrap()]);
        let cover = verify_constellation_cover(&f, 2, 0, 6).unwrap();
        assert_eq!(cover.fractions, verify_kpr(2, 6).unwrap().fractions);
    }

    #[test]
    fn star_speed_trivial_cases() {
        let s = Constellation::empty(vec![false]).unwrap();
        let r = verify_star_speed(&s, 3, 6).unwrap();
        assert_eq!(drift_of(&r), Some(0.0));
        let apex = StarSystem::new(Graph::complete(1).unwrap(), vec![true], false).unwrap().to_constellation();
        let r = verify_star_speed(&apex, 6, 9).unwrap();
        assert!(r.speeds.iter().filter(|x| x.n >= 3).all(|x| x.labeled == BigUint::from(x.n + 1)));
        assert_eq!(r.verdict("drift").unwrap().holds, Some(true));
    }
}
