//! Naive, bounded reference implementations. Each one avoids the machinery
//! it is meant to certify: cokernels are enumerated coset by coset, group
//! data by listing elements, represented primes by searching a box, and ideal
//! counts through a character sum.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::abgroup::{FinGenAbGroup, GroupElement, IntMatrix};
use crate::fields::{reduced_forms, QuadraticForm};
use crate::{Error, Result};

/// Largest quotient the naive cokernel will enumerate.
pub const MAX_QUOTIENT: u64 = 10_000;
/// Largest box `(Z/D)^r` the naive cokernel will walk.
pub const MAX_BOX: u64 = 2_000_000;
/// Largest number of maximal minors examined.
pub const MAX_MINORS: u64 = 20_000;
/// Largest group the element-listing oracles accept.
pub const MAX_GROUP: u64 = 10_000;

fn too_large(what: impl Into<String>) -> Error {
    Error::QuotientTooLarge(what.into())
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

fn for_each_subset(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f);
}

/// Structure of `Z^rank / ⟨columns⟩` by explicit coset enumeration inside the
/// box `(Z/D)^rank`, where `D` is the gcd of the maximal minors.
pub fn naive_cokernel(ambient_rank: usize, columns: &[Vec<BigInt>]) -> Result<FinGenAbGroup> {
    let r = ambient_rank;
    if columns.iter().any(|c| c.len() != r) {
        return Err(Error::DimensionMismatch("column length differs from ambient rank".into()));
    }
    if r == 0 {
        return Ok(FinGenAbGroup::trivial());
    }
    if columns.len() < r {
        return Err(too_large("columns cannot span a full-rank lattice; quotient is infinite"));
    }
    if binomial(columns.len() as u64, r as u64) > MAX_MINORS {
        return Err(too_large(format!("{} maximal minors", binomial(columns.len() as u64, r as u64))));
    }
    let mut index = BigInt::zero();
    let mut failure = None;
    for_each_subset(columns.len(), r, &mut |sel| {
        if failure.is_some() || index.is_one() {
            return;
        }
        let cols: Vec<Vec<BigInt>> = sel.iter().map(|&j| columns[j].clone()).collect();
        match IntMatrix::from_columns(r, &cols).and_then(|m| m.determinant()) {
            Ok(det) => index = index.gcd(&det),
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    if index.is_zero() {
        return Err(too_large("columns have deficient rank; quotient is infinite"));
    }
    let d = index
        .to_u64()
        .filter(|&d| d <= MAX_QUOTIENT)
        .ok_or_else(|| too_large(format!("quotient of order {index}")))?;
    let box_size = (d as u128).checked_pow(r as u32).filter(|&b| b <= MAX_BOX as u128);
    let box_size = box_size.ok_or_else(|| too_large(format!("box ({d})^{r}")))? as usize;
    if d == 1 {
        return Ok(FinGenAbGroup::trivial());
    }

    let modulus = BigInt::from(d);
    let gens: Vec<Vec<u64>> = columns
        .iter()
        .map(|c| c.iter().map(|x| x.mod_floor(&modulus).to_u64().unwrap()).collect())
        .collect();
    let encode = |v: &[u64]| v.iter().fold(0usize, |acc, &x| acc * d as usize + x as usize);
    let add = |a: &[u64], b: &[u64]| -> Vec<u64> { a.iter().zip(b).map(|(x, y)| (x + y) % d).collect() };

    // the image of the lattice in the box
    let zero = vec![0u64; r];
    let mut lattice: HashSet<usize> = HashSet::from([encode(&zero)]);
    let mut frontier = vec![zero.clone()];
    while let Some(v) = frontier.pop() {
        for g in &gens {
            let w = add(&v, g);
            if lattice.insert(encode(&w)) {
                frontier.push(w);
            }
        }
    }

    // cosets of the lattice image
    let mut coset_of = vec![usize::MAX; box_size];
    let mut reps: Vec<Vec<u64>> = Vec::new();
    let lattice_vecs: Vec<Vec<u64>> = lattice
        .iter()
        .map(|&code| {
            let mut v = vec![0u64; r];
            let mut c = code;
            for slot in v.iter_mut().rev() {
                *slot = (c % d as usize) as u64;
                c /= d as usize;
            }
            v
        })
        .collect();
    let mut v = vec![0u64; r];
    for code in 0..box_size {
        let mut c = code;
        for slot in v.iter_mut().rev() {
            *slot = (c % d as usize) as u64;
            c /= d as usize;
        }
        if coset_of[code] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(v.clone());
        for h in &lattice_vecs {
            coset_of[encode(&add(&v, h))] = id;
        }
    }
    if reps.len() as u64 != d {
        return Err(Error::InternalContradiction(format!(
            "enumerated {} cosets, minors predict {d}",
            reps.len()
        )));
    }

    let orders: Vec<u64> = reps
        .iter()
        .map(|rep| {
            let mut k = 1u64;
            let mut acc = rep.clone();
            while coset_of[encode(&acc)] != 0 {
                acc = add(&acc, rep);
                k += 1;
            }
            k
        })
        .collect();
    structure_from_orders(&orders)
}

/// Invariant factors of a finite abelian group from the multiset of its
/// element orders: the number of cyclic `ℓ`-primary factors of exponent
/// `≥ j` is `log_ℓ(#G[ℓ^j] / #G[ℓ^{j−1}])`.
pub fn structure_from_orders(orders: &[u64]) -> Result<FinGenAbGroup> {
    let n = orders.len() as u64;
    let mut cyclic = Vec::new();
    for (l, _) in crate::abgroup::factorize(&BigInt::from(n)) {
        let l = l.to_u64().unwrap();
        let killed_by = |m: u64| orders.iter().filter(|&&o| m.is_multiple_of(o)).count() as u64;
        let mut prev = 1u64;
        let mut pk = 1u64;
        let mut ranks = Vec::new();
        loop {
            pk *= l;
            let cur = killed_by(pk);
            if cur == prev {
                break;
            }
            let mut ratio = cur / prev;
            let mut rank = 0;
            while ratio > 1 {
                ratio /= l;
                rank += 1;
            }
            ranks.push(rank);
            prev = cur;
        }
        // ranks[j-1] = number of factors with exponent ≥ j
        for (j, &rj) in ranks.iter().enumerate() {
            let next = ranks.get(j + 1).copied().unwrap_or(0);
            for _ in 0..rj - next {
                cyclic.push(BigInt::from(l.pow(j as u32 + 1)));
            }
        }
    }
    FinGenAbGroup::from_cyclic_orders(&cyclic)
}

/// `(order of g, [G : ⟨gens⟩])` by listing the elements of `G`.
pub fn naive_order_index(
    g: &FinGenAbGroup,
    gens: &[GroupElement],
    x: &GroupElement,
) -> Result<(BigInt, BigInt)> {
    if !g.is_finite() {
        return Err(Error::InfiniteGroup { free_rank: g.free_rank() });
    }
    let order = g.order()?;
    if order > BigInt::from(MAX_GROUP) {
        return Err(too_large(format!("group of order {order}")));
    }
    for e in gens.iter().chain(std::iter::once(x)) {
        if !g.contains(e) {
            return Err(Error::ClassMismatch(format!("{e} is not an element of {g}")));
        }
    }
    let zero = g.zero();
    let mut k = 1u64;
    let mut acc = x.clone();
    while acc != zero {
        acc = g.add(&acc, x);
        k += 1;
    }
    let mut span: HashSet<GroupElement> = HashSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    while let Some(v) = frontier.pop() {
        for s in gens {
            let w = g.add(&v, s);
            if span.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    Ok((BigInt::from(k), order / BigInt::from(span.len())))
}

/// A primitive representation `q = f(x, y)` by a reduced form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Representation {
    pub form: QuadraticForm,
    pub x: i64,
    pub y: i64,
}

/// Searches `|x|, |y| ≤ q` over the reduced forms of discriminant `d` for a
/// primitive representation of `q`. `None` means no form represents `q`.
pub fn naive_represented_primes(d: i64, q: u64) -> Result<Option<Representation>> {
    let q = q as i64;
    let span = |m: i64| std::iter::once(0).chain((1..=m).flat_map(|k| [k, -k]));
    for form in reduced_forms(d)? {
        for x in 0..=q {
            for y in span(q) {
                if x.gcd(&y) == 1 && form.eval(x, y) == q as i128 {
                    return Ok(Some(Representation { form, x, y }));
                }
            }
        }
    }
    Ok(None)
}

/// Class number as the count of primitive reduced forms, found by scanning
/// every `(a, b)` with `a² ≤ |d|` rather than the sharp bound.
pub fn naive_class_number(d: i64) -> usize {
    let mut count = 0;
    let mut a = 1i64;
    while a * a <= d.abs() {
        for b in -a..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let boundary = b.abs() == a || a == c;
            if a <= c && (!boundary || b >= 0) && a.gcd(&b).gcd(&c) == 1 {
                count += 1;
            }
        }
        a += 1;
    }
    count
}

/// Kronecker symbol `(d | n)` for `n ≥ 1` through the Jacobi symbol and
/// quadratic reciprocity.
pub fn kronecker(d: i64, n: u64) -> i32 {
    let mut n = n;
    let mut out = 1;
    while n.is_multiple_of(2) {
        n /= 2;
        out *= match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    if n == 1 {
        return out;
    }
    let mut a = d.rem_euclid(n as i64) as u64;
    let mut m = n;
    let mut t = 1;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if m % 8 == 3 || m % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            t = -t;
        }
        a %= m;
    }
    if m == 1 {
        out * t
    } else {
        0
    }
}

/// Ideal counts `a_1..a_X` of the quadratic field of discriminant `d` via
/// `a_n = Σ_{k | n} (d | k)`.
pub fn dirichlet_ideal_counts(d: i64, bound: usize) -> Vec<i64> {
    let chi: Vec<i64> = (0..=bound)
        .map(|k| if k == 0 { 0 } else { kronecker(d, k as u64) as i64 })
        .collect();
    let mut a = vec![0i64; bound + 1];
    for (k, &c) in chi.iter().enumerate().skip(1) {
        for n in (k..=bound).step_by(k) {
            a[n] += c;
        }
    }
    a.split_off(1)
}

/// Order of every element of a finite group, keyed by element.
pub fn naive_element_orders(g: &FinGenAbGroup) -> Result<HashMap<GroupElement, BigInt>> {
    let elements = g.elements()?;
    if elements.len() as u64 > MAX_GROUP {
        return Err(too_large(format!("group of order {}", elements.len())));
    }
    elements
        .into_iter()
        .map(|e| naive_order_index(g, &[], &e).map(|(o, _)| (e, o)))
        .collect()
}
