//! Ground-truth arithmetic data: imaginary quadratic fields (through binary
//! quadratic forms) and synthetic field specifications with an arbitrary
//! finite class group.

mod forms;

pub use forms::{
    class_group_of_discriminant, is_fundamental_discriminant, kronecker_prime, kronecker_splitting,
    kronecker_symbol, reduced_forms, QuadraticClassGroup, QuadraticForm, Splitting,
};

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::abgroup::{is_prime_power, GroupElement};
use crate::kdelta::{ClassGroupModel, Label, PrimeIdealDatum};
use crate::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Rational primes `≤ bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}

/// One prime of a synthetic specification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntheticPrime {
    #[serde(with = "crate::cli::decimal")]
    pub norm: BigInt,
    /// Coordinates of the ideal class with respect to the invariant factors.
    pub class: Vec<i64>,
    pub residue_char: u64,
}

/// A class group given by invariant factors plus an explicit prime stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    #[serde(with = "crate::cli::decimal_vec")]
    pub invariant_factors: Vec<BigInt>,
    pub primes: Vec<SyntheticPrime>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldSpec {
    Quadratic { discriminant: i64 },
    Synthetic(SyntheticSpec),
}

impl FieldSpec {
    pub fn quadratic(discriminant: i64) -> Self {
        FieldSpec::Quadratic { discriminant }
    }

    pub fn realize(&self) -> Result<Field> {
        match self {
            FieldSpec::Quadratic { discriminant } => {
                let qcg = class_group_of_discriminant(*discriminant)?;
                Ok(Field {
                    spec: self.clone(),
                    class_group: qcg.model().clone(),
                    quadratic: Some(qcg),
                    synthetic_primes: Vec::new(),
                })
            }
            FieldSpec::Synthetic(s) => validate_synthetic(s),
        }
    }
}

/// A realised field specification: class group plus a prime-ideal provider.
#[derive(Debug, Clone)]
pub struct Field {
    spec: FieldSpec,
    class_group: ClassGroupModel,
    quadratic: Option<QuadraticClassGroup>,
    synthetic_primes: Vec<PrimeIdealDatum>,
}

impl Field {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn class_group(&self) -> &ClassGroupModel {
        &self.class_group
    }

    pub fn quadratic(&self) -> Option<&QuadraticClassGroup> {
        self.quadratic.as_ref()
    }

    pub fn class_number(&self) -> usize {
        self.class_group.order()
    }

    /// Every prime ideal of norm `≤ bound`, exactly once. Labels are assigned
    /// consecutively from 0.
    pub fn enumerate_prime_ideals(&self, bound: u64) -> Result<Vec<PrimeIdealDatum>> {
        match &self.quadratic {
            Some(qcg) => enumerate_quadratic(qcg, bound),
            None => {
                let bound = BigInt::from(bound);
                Ok(self
                    .synthetic_primes
                    .iter()
                    .filter(|p| p.norm <= bound)
                    .cloned()
                    .enumerate()
                    .map(|(i, mut p)| {
                        p.label = i as Label;
                        p
                    })
                    .collect())
            }
        }
    }

    /// The prime stream of a synthetic spec, unfiltered.
    pub fn synthetic_primes(&self) -> &[PrimeIdealDatum] {
        &self.synthetic_primes
    }

    /// Smallest norm bound `X₀` such that the classes of the odd-norm primes
    /// of norm `≤ X₀` generate the class group, searching up to `limit`.
    pub fn generation_bound(&self, limit: u64) -> Result<Option<BigInt>> {
        let mut primes = self.enumerate_prime_ideals(limit)?;
        primes.retain(PrimeIdealDatum::has_odd_norm);
        primes.sort_by(|a, b| a.norm.cmp(&b.norm));
        let cl = &self.class_group;
        if cl.order() == 1 {
            return Ok(Some(BigInt::from(1)));
        }
        let mut gens = Vec::new();
        for p in &primes {
            gens.push(cl.index_of(&p.class)?);
            if cl.subgroup_order(&gens) == cl.order() {
                return Ok(Some(p.norm.clone()));
            }
        }
        Ok(None)
    }

    /// A synthetic spec with the same class group and the same prime data
    /// up to `bound`.
    pub fn synthetic_clone(&self, bound: u64) -> Result<FieldSpec> {
        let primes = self
            .enumerate_prime_ideals(bound)?
            .into_iter()
            .map(|p| SyntheticPrime {
                norm: p.norm,
                class: p
                    .class
                    .coords()
                    .iter()
                    .map(|c| c.try_into().expect("class coordinate fits i64"))
                    .collect(),
                residue_char: p.residue_char,
            })
            .collect();
        Ok(FieldSpec::Synthetic(SyntheticSpec {
            invariant_factors: self.class_group.group().factors().to_vec(),
            primes,
        }))
    }

    pub fn describe(&self) -> String {
        match &self.spec {
            FieldSpec::Quadratic { discriminant } => format!("disc {discriminant}"),
            FieldSpec::Synthetic(_) => format!("synthetic Cl = {}", self.class_group.group()),
        }
    }
}

fn enumerate_quadratic(qcg: &QuadraticClassGroup, bound: u64) -> Result<Vec<PrimeIdealDatum>> {
    let d = qcg.discriminant();
    let cl = qcg.model();
    let mut out = Vec::new();
    let mut push = |name: String, norm: BigInt, class: usize, q: u64| -> Result<()> {
        let label = out.len() as Label;
        out.push(PrimeIdealDatum::new(label, name, norm, cl.element(class).clone(), q)?);
        Ok(())
    };
    for q in primes_up_to(bound) {
        let s = kronecker_splitting(d, q);
        match s {
            Splitting::Inert => {
                if q.checked_mul(q).is_some_and(|n| n <= bound) {
                    push(format!("p_{q}"), s.norm(q), cl.identity(), q)?;
                }
            }
            Splitting::Ramified => {
                push(format!("p_{q}"), s.norm(q), qcg.prime_class_index(q)?, q)?;
            }
            Splitting::Split => {
                let c = qcg.prime_class_index(q)?;
                push(format!("p_{q}"), s.norm(q), c, q)?;
                push(format!("p_{q}'"), s.norm(q), cl.inverse(c), q)?;
            }
        }
    }
    Ok(out)
}

/// Checks a synthetic spec: canonical invariant factors, prime-power norms
/// over the stated residue characteristic, and odd-norm classes that
/// generate the class group.
pub fn validate_synthetic(spec: &SyntheticSpec) -> Result<Field> {
    let group = crate::abgroup::FinGenAbGroup::new(spec.invariant_factors.clone())?;
    if !group.is_finite() {
        return Err(Error::InvalidFactors("synthetic class group must be finite".into()));
    }
    let cl = ClassGroupModel::new(group)?;
    let mut primes = Vec::with_capacity(spec.primes.len());
    for (i, p) in spec.primes.iter().enumerate() {
        if !is_prime_power(&p.norm) {
            return Err(Error::NonPrimePowerNorm(p.norm.clone()));
        }
        let class: GroupElement = cl.group().element_from_i64(&p.class)?;
        primes.push(PrimeIdealDatum::new(
            i as Label,
            format!("s_{i}"),
            p.norm.clone(),
            class,
            p.residue_char,
        )?);
    }
    let odd: Vec<usize> = primes
        .iter()
        .filter(|p| p.norm.is_odd())
        .map(|p| cl.index_of(&p.class))
        .collect::<Result<_>>()?;
    let index = cl.order() / cl.subgroup_order(&odd);
    if index != 1 {
        return Err(Error::OddNormClassesDoNotGenerate {
            index: BigInt::from(index),
        });
    }
    Ok(Field {
        spec: FieldSpec::Synthetic(spec.clone()),
        class_group: cl,
        quadratic: None,
        synthetic_primes: primes,
    })
}
