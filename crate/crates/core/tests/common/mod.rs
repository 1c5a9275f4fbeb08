#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use kclass::fields::{validate_synthetic, Field, SyntheticPrime, SyntheticSpec};
use kclass::kdelta::ClassGroupModel;

pub const TEST_DISCRIMINANTS: [i64; 5] = [-4, -20, -23, -47, -84];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn bigs(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

const ODD_PRIMES: [u64; 24] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// A random synthetic spec over the class group with the given invariant
/// factors: `odd` odd-norm primes and `even` even-norm ones, each with a
/// uniformly random class, retried until the odd-norm classes generate.
pub fn random_synthetic(factors: &[i64], odd: usize, even: usize, rng: &mut ChaCha8Rng) -> (SyntheticSpec, Field) {
    let cl = ClassGroupModel::new(kclass::abgroup::FinGenAbGroup::from_cyclic_orders(&bigs(factors)).unwrap()).unwrap();
    let invariant_factors = cl.group().factors().to_vec();
    loop {
        let mut primes = Vec::new();
        let class_of = |rng: &mut ChaCha8Rng| -> Vec<i64> {
            let e = cl.element(rng.gen_range(0..cl.order()));
            e.coords().iter().map(|c| i64::try_from(c).unwrap()).collect()
        };
        for _ in 0..odd {
            let q = ODD_PRIMES[rng.gen_range(0..ODD_PRIMES.len())];
            let norm = if rng.gen_bool(0.2) { q * q } else { q };
            primes.push(SyntheticPrime {
                norm: BigInt::from(norm),
                class: class_of(rng),
                residue_char: q,
            });
        }
        for _ in 0..even {
            let norm = if rng.gen_bool(0.5) { 2 } else { 4 };
            primes.push(SyntheticPrime {
                norm: BigInt::from(norm),
                class: class_of(rng),
                residue_char: 2,
            });
        }
        primes.sort_by(|a, b| a.norm.cmp(&b.norm));
        let spec = SyntheticSpec {
            invariant_factors: invariant_factors.clone(),
            primes,
        };
        if let Ok(field) = validate_synthetic(&spec) {
            return (spec, field);
        }
    }
}

/// A random finite abelian group of order at most `max_order` with at most
/// `max_factors` cyclic factors.
pub fn random_group(max_order: u64, max_factors: usize, rng: &mut ChaCha8Rng) -> kclass::abgroup::FinGenAbGroup {
    let mut orders = Vec::new();
    let mut order = 1u64;
    let k = rng.gen_range(1..=max_factors);
    for _ in 0..k {
        let room = max_order / order;
        if room < 2 {
            break;
        }
        let d = rng.gen_range(2..=room.min(64));
        orders.push(BigInt::from(d));
        order *= d;
    }
    kclass::abgroup::FinGenAbGroup::from_cyclic_orders(&orders).unwrap()
}
