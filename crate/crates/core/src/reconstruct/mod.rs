//! Blind reconstruction of the class number, the prime-ideal norms, the
//! truncated zeta function and the class group from an [`InvariantBundle`].

mod bundle;
mod greedy;

pub use bundle::{build_bundle, InvariantBundle};
pub use greedy::{assemble, greedy_from_generators, greedy_primary, TieBreak};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::abgroup::{is_prime_power, iso_equal, FinGenAbGroup};
use crate::fields::Field;
use crate::kdelta::Label;
use crate::{oracle, Error, Result};

/// `#Cl` as the free rank of the `∅` entry.
pub fn recover_class_number(b: &InvariantBundle) -> Result<usize> {
    let e = b.entry(&[])?;
    if !e.torsion_factors().is_empty() {
        return Err(Error::MalformedBundle(format!("∅ entry {e} has torsion")));
    }
    if e.free_rank() == 0 || e.free_rank() != b.rank() {
        return Err(Error::MalformedBundle(format!(
            "∅ entry {e} does not have the declared rank {}",
            b.rank()
        )));
    }
    Ok(e.free_rank())
}

/// Exact `k`-th root by binary search, `None` if `v` is not a perfect power.
pub fn exact_root(v: &BigInt, k: usize) -> Option<BigInt> {
    if k == 0 || v.sign() == num_bigint::Sign::Minus {
        return None;
    }
    if v.is_zero() || v.is_one() || k == 1 {
        return Some(v.clone());
    }
    let mut lo = BigInt::one();
    let mut hi = BigInt::one() << (v.bits() as usize / k + 1);
    // invariant: lo^k ≤ v < hi^k
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if num_traits::pow(mid.clone(), k) <= *v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (num_traits::pow(lo.clone(), k) == *v).then_some(lo)
}

/// `N(p)` from the singleton entry `⊕_{[Cl:⟨c⟩]} Z/(N^{#⟨c⟩} − 1)`.
pub fn recover_norm(b: &InvariantBundle, label: Label) -> Result<BigInt> {
    let h = recover_class_number(b)?;
    let labels = vec![label];
    let e = b.entry(&labels)?;
    if e.free_rank() > 0 {
        return Err(Error::FreeSummandInEntry { labels });
    }
    if e.is_trivial() {
        // N^ord − 1 = 1
        return Ok(BigInt::from(2));
    }
    let t = e.homogeneous_exponent().ok_or_else(|| Error::NonHomogeneousEntry {
        labels: labels.clone(),
        group: e.to_string(),
    })?;
    let s = e.num_factors();
    if h % s != 0 {
        return Err(Error::MalformedBundle(format!(
            "singleton {label} has {s} summands, which does not divide the class number {h}"
        )));
    }
    let ord = h / s;
    let value = t + 1;
    let n = exact_root(&value, ord).ok_or_else(|| Error::NotPerfectPower {
        labels: labels.clone(),
        value: value.clone(),
        exponent: ord,
    })?;
    if n < BigInt::from(2) || !is_prime_power(&n) {
        return Err(Error::RecoveredNormNotPrimePower { labels, norm: n });
    }
    Ok(n)
}

pub fn label_has_odd_norm(b: &InvariantBundle, label: Label) -> Result<bool> {
    Ok(recover_norm(b, label)?.is_odd())
}

/// `#Cl_F = #Cl / [Cl : Cl_F]`, the number of summands of the homogeneous
/// entry for an odd-norm `F`.
pub fn subgroup_order_from_bundle(b: &InvariantBundle, f: &[Label]) -> Result<usize> {
    if f.is_empty() {
        return Err(Error::InvalidArgument("subgroup order needs a non-empty label set".into()));
    }
    let h = recover_class_number(b)?;
    for &l in f {
        let norm = recover_norm(b, l)?;
        if norm.is_even() {
            return Err(Error::EvenNormPrime { label: l, norm });
        }
    }
    let labels = bundle::normalize(f);
    let e = b.entry(&labels)?;
    if e.free_rank() > 0 {
        return Err(Error::FreeSummandInEntry { labels });
    }
    if e.homogeneous_exponent().is_none() || e.is_trivial() {
        return Err(Error::NonHomogeneousEntry {
            labels,
            group: e.to_string(),
        });
    }
    let s = e.num_factors();
    if h % s != 0 {
        return Err(Error::MalformedBundle(format!(
            "entry for {labels:?} has {s} summands, which does not divide {h}"
        )));
    }
    Ok(h / s)
}

/// Class group via the greedy primary chain over odd-norm labels.
pub fn reconstruct_class_group(b: &InvariantBundle, tie: TieBreak) -> Result<FinGenAbGroup> {
    let h = recover_class_number(b)?;
    if h == 1 {
        return Ok(FinGenAbGroup::trivial());
    }
    let mut candidates = Vec::new();
    for &l in b.labels() {
        if label_has_odd_norm(b, l)? {
            candidates.push(l);
        }
    }
    let components = greedy_primary(h, &candidates, |set| subgroup_order_from_bundle(b, set), tie)?;
    assemble(&components)
}

/// `a_1..a_X` of `∏_p (1 − N(p)^{−s})^{−1}` over the given norms.
pub fn zeta_coefficients(norms: &[BigInt], bound: usize) -> Result<Vec<u64>> {
    if let Some(n) = norms.iter().find(|n| **n < BigInt::from(2)) {
        return Err(Error::NormBelowTwo(n.clone()));
    }
    let mut a = vec![0u64; bound + 1];
    if bound == 0 {
        return Ok(Vec::new());
    }
    a[1] = 1;
    for n in norms {
        let Some(n) = n.to_usize().filter(|&n| n <= bound) else {
            continue;
        };
        for m in (n..=bound).step_by(n) {
            a[m] += a[m / n];
        }
    }
    a.remove(0);
    Ok(a)
}

/// Norms up to a bound together with their Dirichlet coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaData {
    pub bound: usize,
    /// Sorted ascending, with multiplicity.
    pub norms: Vec<BigInt>,
    pub coefficients: Vec<u64>,
}

impl ZetaData {
    pub fn from_norms(norms: impl IntoIterator<Item = BigInt>, bound: usize) -> Result<Self> {
        let limit = BigInt::from(bound);
        let mut norms: Vec<BigInt> = norms.into_iter().filter(|n| *n <= limit).collect();
        norms.sort();
        let coefficients = zeta_coefficients(&norms, bound)?;
        Ok(ZetaData {
            bound,
            norms,
            coefficients,
        })
    }

    /// First `n` (1-based) where the coefficients differ.
    pub fn first_difference(&self, other: &ZetaData) -> Option<(usize, u64, u64)> {
        self.coefficients
            .iter()
            .zip(&other.coefficients)
            .enumerate()
            .find(|(_, (a, b))| a != b)
            .map(|(i, (a, b))| (i + 1, *a, *b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub message: String,
}

impl Verdict {
    pub fn new(name: &str, passed: bool, message: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            passed,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconstructionReport {
    pub class_number: usize,
    pub class_group: FinGenAbGroup,
    pub norms: BTreeMap<Label, BigInt>,
    pub zeta: ZetaData,
    pub verdicts: Vec<Verdict>,
}

impl ReconstructionReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }
}

/// Default zeta bound for a blind reconstruction: the largest recovered norm
/// that fits a machine integer, capped at `10^5`.
fn default_zeta_bound(norms: &BTreeMap<Label, BigInt>) -> usize {
    norms
        .values()
        .filter_map(ToPrimitive::to_usize)
        .filter(|&n| n <= 100_000)
        .max()
        .unwrap_or(1)
}

/// Everything recoverable from the bundle alone. The only verdict is the
/// internal consistency of class number and class group.
pub fn reconstruct(
    b: &InvariantBundle,
    zeta_bound: Option<usize>,
    tie: TieBreak,
) -> Result<ReconstructionReport> {
    let class_number = recover_class_number(b)?;
    let norms = b
        .labels()
        .iter()
        .map(|&l| recover_norm(b, l).map(|n| (l, n)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let class_group = reconstruct_class_group(b, tie)?;
    let bound = zeta_bound.unwrap_or_else(|| default_zeta_bound(&norms));
    let zeta = ZetaData::from_norms(norms.values().cloned(), bound)?;
    let order = class_group.order()?;
    let verdicts = vec![Verdict::new(
        "class_number_consistent",
        order == BigInt::from(class_number),
        format!("#Cl = {class_number}, group {class_group} of order {order}"),
    )];
    Ok(ReconstructionReport {
        class_number,
        class_group,
        norms,
        zeta,
        verdicts,
    })
}

/// Builds a lazy bundle from the primes of norm `≤ prime_bound`, reconstructs
/// blind, and compares every recovered quantity with the ground truth.
pub fn roundtrip(
    field: &Field,
    prime_bound: u64,
    zeta_bound: usize,
    tie: TieBreak,
) -> Result<ReconstructionReport> {
    if zeta_bound as u64 > prime_bound {
        return Err(Error::InvalidArgument(format!(
            "zeta bound {zeta_bound} exceeds the prime bound {prime_bound}; coefficients would be incomplete"
        )));
    }
    let cl = field.class_group();
    let primes = field.enumerate_prime_ideals(prime_bound)?;
    let bundle = build_bundle(cl, &primes, &[])?;
    let mut report = reconstruct(&bundle, Some(zeta_bound), tie)?;

    let h = field.class_number();
    report.verdicts.push(Verdict::new(
        "class_number",
        report.class_number == h,
        format!("recovered {}, expected {h}", report.class_number),
    ));
    report.verdicts.push(Verdict::new(
        "class_group",
        iso_equal(&report.class_group, cl.group()),
        format!("recovered {}, expected {}", report.class_group, cl.group()),
    ));
    let wrong: Vec<String> = primes
        .iter()
        .filter(|p| report.norms.get(&p.label) != Some(&p.norm))
        .map(|p| format!("{} ({}): expected {}", p.label, p.name, p.norm))
        .collect();
    report.verdicts.push(Verdict::new(
        "norms",
        wrong.is_empty() && report.norms.len() == primes.len(),
        if wrong.is_empty() {
            format!("{} labels match", primes.len())
        } else {
            wrong.join("; ")
        },
    ));
    let truth = ZetaData::from_norms(primes.iter().map(|p| p.norm.clone()), zeta_bound)?;
    report.verdicts.push(Verdict::new(
        "zeta",
        truth == report.zeta,
        match truth.first_difference(&report.zeta) {
            Some((n, a, b)) => format!("a_{n}: expected {a}, recovered {b}"),
            None => format!("a_1..a_{zeta_bound} match"),
        },
    ));
    if let Some(q) = field.quadratic() {
        let chars = oracle::dirichlet_ideal_counts(q.discriminant(), zeta_bound);
        let first = chars
            .iter()
            .zip(&report.zeta.coefficients)
            .position(|(c, a)| *c != *a as i64);
        report.verdicts.push(Verdict::new(
            "zeta_character_sum",
            first.is_none(),
            match first {
                Some(i) => format!("a_{}: character sum {}, recovered {}", i + 1, chars[i], report.zeta.coefficients[i]),
                None => format!("a_1..a_{zeta_bound} equal Σ_(d|n) χ(d)"),
            },
        ));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Discrepancy {
    Zeta { n: usize, left: u64, right: u64 },
    ClassGroup { left: FinGenAbGroup, right: FinGenAbGroup },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldComparison {
    pub bound: usize,
    pub left: ReconstructionReport,
    pub right: ReconstructionReport,
    /// `None` when the fields agree up to the bound.
    pub discrepancy: Option<Discrepancy>,
}

impl FieldComparison {
    pub fn equivalent(&self) -> bool {
        self.discrepancy.is_none()
    }
}

/// Reconstructs both fields blind from the primes of norm `≤ bound` and
/// compares zeta coefficients, then class groups.
pub fn compare_fields(a: &Field, b: &Field, bound: usize) -> Result<FieldComparison> {
    let left = roundtrip(a, bound as u64, bound, TieBreak::First)?;
    let right = roundtrip(b, bound as u64, bound, TieBreak::First)?;
    let discrepancy = match left.zeta.first_difference(&right.zeta) {
        Some((n, l, r)) => Some(Discrepancy::Zeta { n, left: l, right: r }),
        None if !iso_equal(&left.class_group, &right.class_group) => Some(Discrepancy::ClassGroup {
            left: left.class_group.clone(),
            right: right.class_group.clone(),
        }),
        None => None,
    };
    Ok(FieldComparison {
        bound,
        left,
        right,
        discrepancy,
    })
}
