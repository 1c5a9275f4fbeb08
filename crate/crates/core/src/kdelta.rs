//! The lattice `Δ ≅ Z[Cl]`, the operators `M_p`, the subgroups `Δ_F` and
//! their quotients.
//!
//! Basis vectors `[e_a]` are indexed by ideal classes: index `i` of the
//! lattice is element `i` of the [`ClassGroupModel`] enumeration. For a prime
//! ideal `p` the operator `M_p` sends `[e_a]` to `N(p)·[e_{pa}]`, and `Δ_F` is
//! the sum of the images of `id − M_p` over `p ∈ F`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::abgroup::{
    cokernel_of_columns, is_prime_power, lattice_membership, Cokernel, FinGenAbGroup,
    GroupElement, IntMatrix,
};
use crate::{Error, Result};

/// Opaque identifier of a prime ideal.
pub type Label = u32;

/// A finite abelian group with an explicit element enumeration (index 0 is
/// the identity) and a precomputed composition table.
#[derive(Debug, Clone)]
pub struct ClassGroupModel {
    group: FinGenAbGroup,
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
    table: Vec<usize>,
    inverse: Vec<usize>,
}

impl ClassGroupModel {
    pub fn new(group: FinGenAbGroup) -> Result<Self> {
        let elements = group.elements()?;
        let n = elements.len();
        let index: HashMap<GroupElement, usize> =
            elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let mut table = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                table.push(index[&group.add(a, b)]);
            }
        }
        let inverse = elements.iter().map(|a| index[&group.neg(a)]).collect();
        Ok(ClassGroupModel {
            group,
            elements,
            index,
            table,
            inverse,
        })
    }

    pub fn from_factors(factors: &[u64]) -> Result<Self> {
        let orders: Vec<BigInt> = factors.iter().map(|&d| BigInt::from(d)).collect();
        Self::new(FinGenAbGroup::new(orders)?)
    }

    pub fn group(&self) -> &FinGenAbGroup {
        &self.group
    }

    /// The class number.
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    pub fn index_of(&self, g: &GroupElement) -> Result<usize> {
        self.index
            .get(g)
            .copied()
            .ok_or_else(|| Error::ClassMismatch(format!("{g} is not an element of {}", self.group)))
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// Order of the cyclic subgroup generated by element `a`.
    pub fn cyclic_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.op(x, a);
            k += 1;
        }
        k
    }

    /// Membership mask of the subgroup generated by `gens`.
    pub fn subgroup_mask(&self, gens: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.order()];
        mask[0] = true;
        let mut members = vec![0usize];
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &g in gens {
                let y = self.op(x, g);
                if !mask[y] {
                    mask[y] = true;
                    members.push(y);
                }
            }
            i += 1;
        }
        mask
    }

    pub fn subgroup_order(&self, gens: &[usize]) -> usize {
        self.subgroup_mask(gens).iter().filter(|&&b| b).count()
    }
}

/// Arithmetic data of one prime ideal: its norm, its ideal class and the
/// rational prime below it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeIdealDatum {
    pub label: Label,
    pub name: String,
    pub norm: BigInt,
    pub class: GroupElement,
    pub residue_char: u64,
}

impl PrimeIdealDatum {
    /// Checks that `norm` is a power `≥ 1` of the prime `residue_char`.
    pub fn new(
        label: Label,
        name: impl Into<String>,
        norm: BigInt,
        class: GroupElement,
        residue_char: u64,
    ) -> Result<Self> {
        if norm < BigInt::from(2) {
            return Err(Error::NormBelowTwo(norm));
        }
        if !is_prime_power(&norm) {
            return Err(Error::NonPrimePowerNorm(norm));
        }
        let q = BigInt::from(residue_char);
        if residue_char < 2 || !norm.is_multiple_of(&q) || !is_prime_power(&q) {
            return Err(Error::InvalidArgument(format!(
                "norm {norm} is not a power of the prime {residue_char}"
            )));
        }
        Ok(PrimeIdealDatum {
            label,
            name: name.into(),
            norm,
            class,
            residue_char,
        })
    }

    pub fn has_odd_norm(&self) -> bool {
        self.norm.is_odd()
    }
}

impl fmt::Display for PrimeIdealDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (N = {}, class {})", self.name, self.norm, self.class)
    }
}

/// `Δ ≅ Z[Cl]`, with basis indexed by the class enumeration.
#[derive(Debug, Clone, Copy)]
pub struct DeltaLattice<'a> {
    cl: &'a ClassGroupModel,
}

impl<'a> DeltaLattice<'a> {
    pub fn new(cl: &'a ClassGroupModel) -> Self {
        DeltaLattice { cl }
    }

    pub fn rank(&self) -> usize {
        self.cl.order()
    }

    pub fn basis_vector(&self, a: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.rank()];
        v[a] = BigInt::one();
        v
    }

    pub fn class_group(&self) -> &'a ClassGroupModel {
        self.cl
    }
}

fn class_index(cl: &ClassGroupModel, p: &PrimeIdealDatum) -> Result<usize> {
    cl.index_of(&p.class)
        .map_err(|_| Error::ClassMismatch(format!("class of {p} is not in {}", cl.group())))
}

/// Matrix of `M_p`: `N(p)` times the permutation matrix of multiplication by `[p]`.
pub fn m_operator_matrix(cl: &ClassGroupModel, p: &PrimeIdealDatum) -> Result<IntMatrix> {
    let c = class_index(cl, p)?;
    let n = cl.order();
    let mut m = IntMatrix::zeros(n, n);
    for a in 0..n {
        m[(cl.op(c, a), a)] = p.norm.clone();
    }
    Ok(m)
}

/// Columns of `id − M_p` for each `p ∈ F`; they generate `Δ_F`.
pub fn delta_f_generators(cl: &ClassGroupModel, f: &[PrimeIdealDatum]) -> Result<Vec<Vec<BigInt>>> {
    let n = cl.order();
    let mut out = Vec::with_capacity(n * f.len());
    for p in f {
        let c = class_index(cl, p)?;
        for a in 0..n {
            let mut col = vec![BigInt::zero(); n];
            col[a] += 1;
            col[cl.op(c, a)] -= &p.norm;
            out.push(col);
        }
    }
    Ok(out)
}

/// `Δ/Δ_F` computed directly as an integer cokernel, with the image of each
/// basis class.
pub fn quotient_delta(cl: &ClassGroupModel, f: &[PrimeIdealDatum]) -> Result<Cokernel> {
    cokernel_of_columns(cl.order(), &delta_f_generators(cl, f)?)
}

/// Cokernel of the cyclic matrix `α(e_i) = e_i − N_i e_{i+1}` (indices mod n)
/// on `(Z/d)^n`.
///
/// Returns `d_α = gcd(N_1⋯N_n − 1, d)` together with coefficients `k_i` such
/// that `π(e_i) = k_i·π(e_n)`, namely `k_i = N_i N_{i+1} ⋯ N_{n−1}` (so
/// `k_n = 1`), reduced modulo `d_α` when `d_α > 0`.
pub fn coker_cycle_formula(ns: &[BigInt], d: &BigInt) -> Result<(BigInt, Vec<BigInt>)> {
    if ns.is_empty() {
        return Err(Error::InvalidArgument("empty cycle".into()));
    }
    if let Some(x) = ns.iter().find(|x| **x < BigInt::one()) {
        return Err(Error::InvalidArgument(format!("cycle factor {x} < 1")));
    }
    let product: BigInt = ns.iter().product();
    let d_alpha = (product - 1u32).gcd(d);
    let n = ns.len();
    let mut coeffs = vec![BigInt::one(); n];
    for i in (0..n - 1).rev() {
        coeffs[i] = &coeffs[i + 1] * &ns[i];
        if !d_alpha.is_zero() {
            coeffs[i] = coeffs[i].mod_floor(&d_alpha);
        }
    }
    if !d_alpha.is_zero() {
        coeffs[n - 1] = coeffs[n - 1].mod_floor(&d_alpha);
    }
    Ok((d_alpha, coeffs))
}

/// The predicted shape of `Δ/Δ_F` for a family of odd-norm primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictedQuotient {
    /// The common order `d_F` of every cyclic summand (0 for `F = ∅`).
    pub d_f: BigInt,
    /// `[Cl : Cl_F]`, the number of summands.
    pub coset_count: usize,
    /// Class index of the representative `a_{F,i}` of coset `i`.
    pub reps: Vec<usize>,
    /// For every class `a`: its coset `i` and an odd multiplier `l` with
    /// `π_F[e_a] = l·π_F[e_{a_{F,i}}]`.
    pub l_map: Vec<(usize, BigInt)>,
    /// Membership mask of `Cl_F`.
    pub subgroup: Vec<bool>,
}

impl PredictedQuotient {
    pub fn subgroup_order(&self) -> usize {
        self.subgroup.iter().filter(|&&b| b).count()
    }

    /// `⊕_{Cl/Cl_F} Z/d_F` in canonical form.
    pub fn group(&self) -> Result<FinGenAbGroup> {
        FinGenAbGroup::from_cyclic_orders(&vec![self.d_f.clone(); self.coset_count])
    }
}

fn odd_lift(x: &BigInt, d: &BigInt) -> BigInt {
    if d.is_zero() {
        return x.clone();
    }
    let r = x.mod_floor(d);
    if r.is_even() {
        r + d
    } else {
        r
    }
}

/// Computes `Δ/Δ_F` inductively over the primes of `F` in the given order.
///
/// Each step passes from `Δ/Δ_m` to the cokernel of `id − M_p` on it. That
/// map permutes the `Cl_m`-cosets along the orbits of multiplication by `[p]`;
/// each orbit is a cycle with factors `N(p)·l_m([p]·rep)`, handled by
/// [`coker_cycle_formula`]. Within an orbit the coset whose representative has
/// the smallest class index survives as the new representative.
pub fn predicted_quotient(cl: &ClassGroupModel, f: &[PrimeIdealDatum]) -> Result<PredictedQuotient> {
    let n = cl.order();
    let mut classes = Vec::with_capacity(f.len());
    for p in f {
        if !p.has_odd_norm() {
            return Err(Error::EvenNormPrime {
                label: p.label,
                norm: p.norm.clone(),
            });
        }
        classes.push(class_index(cl, p)?);
    }

    let mut d = BigInt::zero();
    let mut reps: Vec<usize> = (0..n).collect();
    let mut coset_of: Vec<usize> = (0..n).collect();
    let mut l: Vec<BigInt> = vec![BigInt::one(); n];
    let mut gens: Vec<usize> = Vec::new();

    for (p, &c) in f.iter().zip(&classes) {
        let next = |k: usize, reps: &[usize], coset_of: &[usize]| coset_of[cl.op(c, reps[k])];
        let mut order: Vec<usize> = (0..reps.len()).collect();
        order.sort_by_key(|&k| reps[k]);

        let mut visited = vec![false; reps.len()];
        let mut new_reps = Vec::new();
        // old coset -> (new coset, coefficient)
        let mut remap: Vec<(usize, BigInt)> = vec![(0, BigInt::zero()); reps.len()];
        let mut new_d: Option<BigInt> = None;

        for &start in &order {
            if visited[start] {
                continue;
            }
            // cycle = [e_1, …, e_n] with e_n = start and M(e_i) ∝ e_{i+1}
            let mut cycle = Vec::new();
            let mut k = next(start, &reps, &coset_of);
            while k != start {
                cycle.push(k);
                k = next(k, &reps, &coset_of);
            }
            cycle.push(start);
            let ns: Vec<BigInt> = cycle
                .iter()
                .map(|&k| &p.norm * &l[cl.op(c, reps[k])])
                .collect();
            let (d_alpha, coeffs) = coker_cycle_formula(&ns, &d)?;
            match &new_d {
                None => new_d = Some(d_alpha.clone()),
                Some(prev) if *prev != d_alpha => {
                    return Err(Error::InternalContradiction(format!(
                        "orbits of {} yield different cokernel orders {prev} and {d_alpha}",
                        p.name
                    )));
                }
                Some(_) => {}
            }
            let j = new_reps.len();
            new_reps.push(reps[start]);
            for (&k, coef) in cycle.iter().zip(coeffs) {
                visited[k] = true;
                remap[k] = (j, coef);
            }
        }

        let new_d = new_d.expect("at least one coset");
        for a in 0..n {
            let (j, coef) = &remap[coset_of[a]];
            l[a] = odd_lift(&(&l[a] * coef), &new_d);
            coset_of[a] = *j;
        }
        reps = new_reps;
        d = new_d;
        gens.push(c);
    }

    let subgroup = cl.subgroup_mask(&gens);
    let l_map = (0..n).map(|a| (coset_of[a], l[a].clone())).collect();
    Ok(PredictedQuotient {
        d_f: d,
        coset_count: reps.len(),
        reps,
        l_map,
        subgroup,
    })
}

/// `⊕_{Cl/⟨[p]⟩} Z/(N(p)^{#⟨[p]⟩} − 1)`, valid for every prime including
/// those of even norm.
pub fn singleton_structure(cl: &ClassGroupModel, p: &PrimeIdealDatum) -> Result<FinGenAbGroup> {
    let c = class_index(cl, p)?;
    let ord = cl.cyclic_order(c);
    let t = num_traits::pow(p.norm.clone(), ord) - 1u32;
    FinGenAbGroup::from_cyclic_orders(&vec![t; cl.order() / ord])
}

/// Checks `e_a − l·e_rep ∈ Δ_F` by lattice membership.
pub fn verify_relation(
    cl: &ClassGroupModel,
    f: &[PrimeIdealDatum],
    a: usize,
    l: &BigInt,
    rep: usize,
) -> Result<bool> {
    let n = cl.order();
    if a >= n || rep >= n {
        return Err(Error::ClassMismatch(format!("class index out of range 0..{n}")));
    }
    let mut v = vec![BigInt::zero(); n];
    v[a] += 1;
    v[rep] -= l;
    Ok(lattice_membership(&delta_f_generators(cl, f)?, &v)?.is_some())
}

/// Checks every relation `π_F[e_a] = l_F(a)·π_F[e_{a_{F,i}}]` of a
/// prediction at once against the cokernel images. Returns the classes
/// whose relation fails.
pub fn failing_relations(
    cl: &ClassGroupModel,
    f: &[PrimeIdealDatum],
    predicted: &PredictedQuotient,
) -> Result<Vec<usize>> {
    let coker = quotient_delta(cl, f)?;
    let g = &coker.group;
    Ok((0..cl.order())
        .filter(|&a| {
            let (i, l) = &predicted.l_map[a];
            let rep = predicted.reps[*i];
            coker.images[a] != g.scale(&coker.images[rep], l)
        })
        .collect())
}

/// Index `[Cl : ⟨classes⟩]` as a machine integer.
pub fn class_subgroup_index(cl: &ClassGroupModel, classes: &[usize]) -> usize {
    cl.order() / cl.subgroup_order(classes)
}
