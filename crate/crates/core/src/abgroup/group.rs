use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::normal_form::{cokernel_of_columns, hermite_normal_form};
use super::matrix::IntMatrix;
use crate::{Error, Result};

/// A finitely generated abelian group `Z/d_1 ⊕ … ⊕ Z/d_k` in canonical
/// invariant-factor form: `d_1 | d_2 | …` over the nonzero factors, no factor
/// equal to 1, zeros (free summands) last.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinGenAbGroup {
    factors: Vec<BigInt>,
}

/// Element of a [`FinGenAbGroup`]; coordinate `i` is reduced into
/// `[0, d_i)` (unconstrained when `d_i = 0`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    coords: Vec<BigInt>,
}

impl GroupElement {
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FinGenAbGroup {
    /// Accepts only factor lists already in canonical form.
    pub fn new(factors: Vec<BigInt>) -> Result<Self> {
        if let Some(x) = factors.iter().find(|x| x.is_negative()) {
            return Err(Error::InvalidFactors(format!("negative factor {x}")));
        }
        if factors.iter().any(One::is_one) {
            return Err(Error::InvalidFactors("factor 1 must be dropped".into()));
        }
        let nonzero = factors.iter().take_while(|x| !x.is_zero()).count();
        if factors[nonzero..].iter().any(|x| !x.is_zero()) {
            return Err(Error::InvalidFactors("zero factors must come last".into()));
        }
        if factors[..nonzero]
            .windows(2)
            .any(|w| !w[1].is_multiple_of(&w[0]))
        {
            return Err(Error::InvalidFactors(format!(
                "{:?} is not a divisibility chain",
                factors.iter().map(ToString::to_string).collect::<Vec<_>>()
            )));
        }
        Ok(FinGenAbGroup { factors })
    }

    /// Canonical form of `⊕ Z/orders[i]` for an arbitrary list of
    /// non-negative cyclic orders (`Z/6 ⊕ Z/4` becomes `Z/2 ⊕ Z/12`).
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Result<Self> {
        if let Some(x) = orders.iter().find(|x| x.is_negative()) {
            return Err(Error::InvalidFactors(format!("negative order {x}")));
        }
        let n = orders.len();
        let columns: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let mut c = vec![BigInt::zero(); n];
                c[i] = orders[i].clone();
                c
            })
            .collect();
        Ok(cokernel_of_columns(n, &columns)?.group)
    }

    pub fn trivial() -> Self {
        FinGenAbGroup { factors: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        FinGenAbGroup {
            factors: vec![BigInt::zero(); rank],
        }
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|x| x.is_zero()).count()
    }

    pub fn torsion_factors(&self) -> &[BigInt] {
        &self.factors[..self.factors.len() - self.free_rank()]
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// `Some(t)` when the group is `(Z/t)^k` for `k ≥ 1`.
    pub fn homogeneous_exponent(&self) -> Option<&BigInt> {
        let first = self.factors.first()?;
        self.factors.iter().all(|x| x == first).then_some(first)
    }

    fn require_finite(&self) -> Result<()> {
        match self.free_rank() {
            0 => Ok(()),
            free_rank => Err(Error::InfiniteGroup { free_rank }),
        }
    }

    pub fn order(&self) -> Result<BigInt> {
        self.require_finite()?;
        Ok(self.factors.iter().product())
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![BigInt::zero(); self.factors.len()],
        }
    }

    pub fn element(&self, coords: Vec<BigInt>) -> Result<GroupElement> {
        if coords.len() != self.factors.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a group with {} factors",
                coords.len(),
                self.factors.len()
            )));
        }
        Ok(self.reduce(coords))
    }

    pub fn element_from_i64(&self, coords: &[i64]) -> Result<GroupElement> {
        self.element(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn reduce(&self, coords: Vec<BigInt>) -> GroupElement {
        let coords = coords
            .into_iter()
            .zip(&self.factors)
            .map(|(c, d)| if d.is_zero() { c } else { c.mod_floor(d) })
            .collect();
        GroupElement { coords }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.coords.len() == self.factors.len()
            && g
                .coords
                .iter()
                .zip(&self.factors)
                .all(|(c, d)| d.is_zero() || (!c.is_negative() && c < d))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.reduce(a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect())
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        self.reduce(a.coords.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, a: &GroupElement, k: &BigInt) -> GroupElement {
        self.reduce(a.coords.iter().map(|x| x * k).collect())
    }

    /// Least `n ≥ 1` with `n·g = 0`.
    pub fn element_order(&self, g: &GroupElement) -> Result<BigInt> {
        self.require_finite()?;
        self.check_member(g)?;
        Ok(g
            .coords
            .iter()
            .zip(&self.factors)
            .fold(BigInt::one(), |acc, (c, d)| acc.lcm(&(d / c.gcd(d)))))
    }

    /// `[G : ⟨gens⟩]`, via the Hermite form of the generators augmented with
    /// the relation columns `d_i e_i`.
    pub fn subgroup_index(&self, gens: &[GroupElement]) -> Result<BigInt> {
        self.require_finite()?;
        for g in gens {
            self.check_member(g)?;
        }
        let k = self.factors.len();
        let mut columns: Vec<Vec<BigInt>> = gens.iter().map(|g| g.coords.clone()).collect();
        for (i, d) in self.factors.iter().enumerate() {
            let mut c = vec![BigInt::zero(); k];
            c[i] = d.clone();
            columns.push(c);
        }
        let h = hermite_normal_form(&IntMatrix::from_columns(k, &columns)?);
        debug_assert_eq!(h.cols(), k);
        Ok((0..h.cols()).map(|j| {
            let r = (0..k).find(|&i| !h[(i, j)].is_zero()).expect("nonzero HNF column");
            h[(r, j)].clone()
        }).product())
    }

    /// Order of the subgroup generated by `gens`.
    pub fn subgroup_order(&self, gens: &[GroupElement]) -> Result<BigInt> {
        Ok(self.order()? / self.subgroup_index(gens)?)
    }

    fn check_member(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!("{g} is not a reduced element of {self}")))
        }
    }

    /// Invariant factors of each primary component, ascending.
    pub fn primary_decomposition(&self) -> Result<BTreeMap<BigInt, Vec<BigInt>>> {
        self.require_finite()?;
        let mut out: BTreeMap<BigInt, Vec<BigInt>> = BTreeMap::new();
        for d in &self.factors {
            for (p, e) in factorize(d) {
                out.entry(p.clone()).or_default().push(num_traits::pow(p, e));
            }
        }
        for v in out.values_mut() {
            v.sort();
        }
        Ok(out)
    }

    /// Iterates over all elements in mixed-radix order, the identity first.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        self.require_finite()?;
        let total = self
            .order()?
            .to_usize()
            .ok_or_else(|| Error::QuotientTooLarge(format!("cannot enumerate {self}")))?;
        let radices: Vec<usize> = self
            .factors
            .iter()
            .map(|d| d.to_usize().expect("factor divides a usize order"))
            .collect();
        let mut out = Vec::with_capacity(total);
        let mut digits = vec![0usize; radices.len()];
        for _ in 0..total {
            out.push(GroupElement {
                coords: digits.iter().map(|&x| BigInt::from(x)).collect(),
            });
            for (dig, &r) in digits.iter_mut().zip(&radices).rev() {
                *dig += 1;
                if *dig < r {
                    break;
                }
                *dig = 0;
            }
        }
        Ok(out)
    }
}

/// Isomorphism test; both groups are canonical so this is list equality.
pub fn iso_equal(g: &FinGenAbGroup, h: &FinGenAbGroup) -> bool {
    g == h
}

/// `(n)_p`, the largest power of `p` dividing `n`.
pub fn p_part(n: &BigInt, p: &BigInt) -> Result<BigInt> {
    if !n.is_positive() {
        return Err(Error::InvalidArgument(format!("p-part of non-positive {n}")));
    }
    if *p < BigInt::from(2) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let mut n = n.clone();
    let mut out = BigInt::one();
    while n.is_multiple_of(p) {
        n /= p;
        out *= p;
    }
    Ok(out)
}

/// Prime factorization by trial division; adequate for the group orders
/// that occur here (class numbers, small torsion).
pub fn factorize(n: &BigInt) -> Vec<(BigInt, usize)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while n.is_multiple_of(&p) {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

pub fn is_prime_power(n: &BigInt) -> bool {
    factorize(n).len() == 1
}

impl fmt::Display for FinGenAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "trivial");
        }
        for (i, d) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊕ ")?;
            }
            if d.is_zero() {
                write!(f, "Z")?;
            } else {
                write!(f, "Z/{d}")?;
            }
        }
        Ok(())
    }
}
