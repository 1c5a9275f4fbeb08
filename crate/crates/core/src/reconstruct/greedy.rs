use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::abgroup::{factorize, p_part, FinGenAbGroup, GroupElement};
use crate::{Error, Result};

/// Choice among candidates attaining the maximal chain index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    First,
    Last,
    Seeded(u64),
}

/// Primary components `ℓ ↦ [d_ℓ^1, d_ℓ^2, …]` (ascending) of a finite group of
/// order `order`, recovered from subgroup orders alone.
///
/// `span_order(S)` must return `#⟨S⟩` for a non-empty candidate set `S`. For
/// each prime `ℓ | order` the chain picks, at each step, a candidate
/// maximising the `ℓ`-part of `[⟨chosen, c⟩ : ⟨chosen⟩]` and stops once that
/// maximum is 1. The product of all recovered `d` is audited against `order`.
pub fn greedy_primary<C: Clone>(
    order: usize,
    candidates: &[C],
    mut span_order: impl FnMut(&[C]) -> Result<usize>,
    tie: TieBreak,
) -> Result<BTreeMap<BigInt, Vec<BigInt>>> {
    let mut rng = match tie {
        TieBreak::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut out = BTreeMap::new();
    let mut product = BigInt::one();
    for (ell, _) in factorize(&BigInt::from(order)) {
        let mut chosen: Vec<C> = Vec::new();
        let mut base = 1usize;
        let mut ds = Vec::new();
        loop {
            let mut best = BigInt::one();
            let mut argmax: Vec<(usize, usize)> = Vec::new();
            for (i, c) in candidates.iter().enumerate() {
                let mut set = chosen.clone();
                set.push(c.clone());
                let span = span_order(&set)?;
                if span % base != 0 {
                    return Err(Error::InternalContradiction(format!(
                        "span order {span} is not a multiple of {base}"
                    )));
                }
                let contribution = p_part(&BigInt::from(span / base), &ell)?;
                if contribution > best {
                    best = contribution.clone();
                    argmax.clear();
                }
                if contribution == best && !best.is_one() {
                    argmax.push((i, span));
                }
            }
            if best.is_one() {
                break;
            }
            let (i, span) = match (&tie, rng.as_mut()) {
                (TieBreak::Last, _) => *argmax.last().unwrap(),
                (_, Some(r)) => *argmax.choose(r).unwrap(),
                _ => argmax[0],
            };
            chosen.push(candidates[i].clone());
            base = span;
            product *= &best;
            ds.push(best);
        }
        if !ds.is_empty() {
            ds.sort();
            out.insert(ell, ds);
        }
    }
    if product != BigInt::from(order) {
        return Err(Error::InsufficientGenerators {
            recovered: product,
            class_number: order,
        });
    }
    Ok(out)
}

/// Assembles `⊕_ℓ ⊕_i Z/d_ℓ^i` in invariant-factor form.
pub fn assemble(components: &BTreeMap<BigInt, Vec<BigInt>>) -> Result<FinGenAbGroup> {
    let cyclic: Vec<BigInt> = components.values().flatten().cloned().collect();
    FinGenAbGroup::from_cyclic_orders(&cyclic)
}

/// The greedy chain run directly on a known group and generating family.
pub fn greedy_from_generators(
    g: &FinGenAbGroup,
    gens: &[GroupElement],
    tie: TieBreak,
) -> Result<BTreeMap<BigInt, Vec<BigInt>>> {
    let order = g
        .order()?
        .to_usize()
        .ok_or_else(|| Error::InvalidArgument("group too large".into()))?;
    greedy_primary(
        order,
        gens,
        |set| {
            g.subgroup_order(set)?
                .to_usize()
                .ok_or_else(|| Error::InvalidArgument("subgroup too large".into()))
        },
        tie,
    )
}
