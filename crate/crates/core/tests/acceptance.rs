//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Built with `harness = false`.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use common::{big, bigs, rng, random_group, random_synthetic, TEST_DISCRIMINANTS};
use kclass::abgroup::{
    cokernel_of_columns, hermite_normal_form, iso_equal, lattice_membership, FinGenAbGroup, IntMatrix,
};
use kclass::cli::format::{bundle_from_json, bundle_to_json, BundleFile};
use kclass::fields::{Field, FieldSpec};
use kclass::kdelta::{
    coker_cycle_formula, delta_f_generators, failing_relations, predicted_quotient, quotient_delta,
    singleton_structure, verify_relation, ClassGroupModel, PrimeIdealDatum,
};
use kclass::reconstruct::{
    build_bundle, compare_fields, greedy_from_generators, reconstruct, recover_norm, roundtrip,
    zeta_coefficients, Discrepancy, TieBreak,
};
use kclass::Error;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: kclass::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn quadratic(d: i64) -> Result<Field, String> {
    lib(FieldSpec::quadratic(d).realize())
}

/// Every prime ideal above a rational prime `q ≤ bound`, inert ones included.
fn primes_above(field: &Field, bound: u64) -> Result<Vec<PrimeIdealDatum>, String> {
    Ok(lib(field.enumerate_prime_ideals(bound * bound))?
        .into_iter()
        .filter(|p| p.residue_char <= bound)
        .collect())
}

fn cycle_columns(ns: &[BigInt], d: &BigInt) -> Vec<Vec<BigInt>> {
    let n = ns.len();
    let mut cols = Vec::new();
    for i in 0..n {
        let mut c = vec![BigInt::zero(); n];
        c[i] += 1;
        c[(i + 1) % n] -= &ns[i];
        cols.push(c);
    }
    if !d.is_zero() {
        for i in 0..n {
            let mut c = vec![BigInt::zero(); n];
            c[i] = d.clone();
            cols.push(c);
        }
    }
    cols
}

fn is_member(cols: &[Vec<BigInt>], i: usize, k: &BigInt, n: usize) -> Result<bool, String> {
    let mut v = vec![BigInt::zero(); n];
    v[i] += 1;
    v[n - 1] -= k;
    Ok(lib(lattice_membership(cols, &v))?.is_some())
}

fn criterion_1() -> Outcome {
    let mut r = rng(1);
    let mut literal_refuted = 0;
    let mut literal_checked_short = 0;
    for _ in 0..500 {
        let n = r.gen_range(1..=6);
        let ns: Vec<BigInt> = (0..n).map(|_| big(r.gen_range(1..=50))).collect();
        let d = if r.gen_bool(0.2) { BigInt::zero() } else { big(r.gen_range(2..=1_000_000)) };
        let (d_alpha, coeffs) = lib(coker_cycle_formula(&ns, &d))?;
        let cols = cycle_columns(&ns, &d);
        let snf = lib(cokernel_of_columns(n, &cols))?;
        let formula = lib(FinGenAbGroup::from_cyclic_orders(std::slice::from_ref(&d_alpha)))?;
        ensure(iso_equal(&snf.group, &formula), || {
            format!("N={ns:?} d={d}: formula {formula}, SNF {}", snf.group)
        })?;
        let expected = (ns.iter().product::<BigInt>() - BigInt::one()).gcd(&d);
        ensure(d_alpha == expected, || format!("d_α {d_alpha} ≠ gcd(∏N − 1, d) = {expected}"))?;
        for (i, k) in coeffs.iter().enumerate() {
            ensure(is_member(&cols, i, k, n)?, || {
                format!("N={ns:?} d={d}: π(e_{}) = {k}·π(e_n) fails membership", i + 1)
            })?;
        }
        // the prefix-product form of the coefficients
        let mut prefix = BigInt::one();
        let mut literal_ok = true;
        for (i, ni) in ns.iter().enumerate().take(n - 1) {
            prefix *= ni;
            literal_ok &= is_member(&cols, i, &prefix, n)?;
        }
        if n <= 2 {
            ensure(literal_ok, || format!("prefix form fails for n ≤ 2: N={ns:?} d={d}"))?;
            literal_checked_short += 1;
        } else if !literal_ok {
            literal_refuted += 1;
        }
    }
    ensure(literal_refuted > 0, || "prefix-product form never refuted for n ≥ 3".into())?;
    Ok(format!(
        "500 cycles; suffix-product coefficients verified; prefix form holds on {literal_checked_short} short cycles, refuted on {literal_refuted} with n ≥ 3"
    ))
}

fn criterion_2() -> Outcome {
    let mut count = 0;
    for d in TEST_DISCRIMINANTS {
        let field = quadratic(d)?;
        let cl = field.class_group();
        for p in primes_above(&field, 50)? {
            let brute = lib(quotient_delta(cl, std::slice::from_ref(&p)))?.group;
            let closed = lib(singleton_structure(cl, &p))?;
            ensure(iso_equal(&brute, &closed), || {
                format!("D={d} {}: brute {brute}, closed form {closed}", p.name)
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} prime ideals above q ≤ 50 over {} discriminants", TEST_DISCRIMINANTS.len()))
}

fn check_prediction(cl: &ClassGroupModel, f: &[PrimeIdealDatum], what: &str) -> Result<(), String> {
    let brute = lib(quotient_delta(cl, f))?.group;
    let pred = lib(predicted_quotient(cl, f))?;
    let h = cl.order();
    let ctx = || {
        let names: Vec<String> = f.iter().map(|p| format!("{}(N={})", p.name, p.norm)).collect();
        format!("{what} F={names:?}")
    };
    ensure(pred.d_f > BigInt::zero() && pred.d_f.is_even(), || format!("{}: d_F = {}", ctx(), pred.d_f))?;
    ensure(pred.coset_count * pred.subgroup_order() == h, || format!("{}: coset count", ctx()))?;
    ensure(brute.free_rank() == 0, || format!("{}: free summand in {brute}", ctx()))?;
    ensure(brute.homogeneous_exponent() == Some(&pred.d_f), || {
        format!("{}: brute {brute} vs predicted d_F {}", ctx(), pred.d_f)
    })?;
    ensure(brute.num_factors() == pred.coset_count, || {
        format!("{}: brute {brute} has {} summands, expected {}", ctx(), brute.num_factors(), pred.coset_count)
    })?;
    ensure(pred.l_map.iter().all(|(_, l)| l.is_odd()), || format!("{}: even multiplier", ctx()))?;
    for a in 0..h {
        let (i, l) = &pred.l_map[a];
        ensure(lib(verify_relation(cl, f, a, l, pred.reps[*i]))?, || {
            format!("{}: relation for class {a} fails", ctx())
        })?;
    }
    ensure(lib(failing_relations(cl, f, &pred))?.is_empty(), || format!("{}: image check", ctx()))?;
    let mut perm = f.to_vec();
    perm.reverse();
    let other = lib(predicted_quotient(cl, &perm))?;
    ensure(iso_equal(&lib(other.group())?, &lib(pred.group())?), || format!("{}: order dependence", ctx()))?;
    Ok(())
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let mut cases: Vec<(String, Field)> = Vec::new();
    for d in TEST_DISCRIMINANTS {
        cases.push((format!("D={d}"), quadratic(d)?));
    }
    for factors in [&[4][..], &[2, 2], &[6], &[2, 4]] {
        let (_, field) = random_synthetic(factors, 8, 2, &mut r);
        cases.push((format!("Cl={}", field.class_group().group()), field));
    }
    let mut count = 0;
    for (what, field) in &cases {
        let odd: Vec<PrimeIdealDatum> = lib(field.enumerate_prime_ideals(100))?
            .into_iter()
            .filter(PrimeIdealDatum::has_odd_norm)
            .collect();
        for _ in 0..12 {
            let k = r.gen_range(1..=3.min(odd.len()));
            let f: Vec<PrimeIdealDatum> = odd.choose_multiple(&mut r, k).cloned().collect();
            check_prediction(field.class_group(), &f, what)?;
            count += 1;
        }
    }
    Ok(format!("{count} random odd-norm families over {} class groups", cases.len()))
}

fn criterion_4() -> Outcome {
    let cl = lib(ClassGroupModel::from_factors(&[2]))?;
    let c = cl.element(1).clone();
    let f = vec![
        lib(PrimeIdealDatum::new(0, "p", big(3), c.clone(), 3))?,
        lib(PrimeIdealDatum::new(1, "q", big(7), c, 7))?,
    ];
    let gens = lib(delta_f_generators(&cl, &f))?;
    let hnf = hermite_normal_form(&lib(IntMatrix::from_columns(2, &gens))?);
    let pinned = hermite_normal_form(&lib(IntMatrix::from_rows(&[vec![1, 0], vec![-3, 4]]))?);
    ensure(hnf == pinned, || format!("HNF {hnf} differs from span {{(1,−3),(0,4)}} = {pinned}"))?;
    let brute = lib(quotient_delta(&cl, &f))?.group;
    let z4 = lib(FinGenAbGroup::from_cyclic_orders(&bigs(&[4])))?;
    ensure(brute == z4, || format!("brute force gives {brute}"))?;
    ensure((big(21) - big(1)).gcd(&big(8)) == big(4), || "gcd(20, 8)".into())?;
    let pred = lib(predicted_quotient(&cl, &f))?;
    ensure(pred.d_f == big(4) && pred.coset_count == 1, || format!("recursion gives d_F = {}", pred.d_f))?;
    ensure(lib(pred.group())? == z4, || "predicted group".into())?;
    Ok("Z/4 by lattice and by recursion gcd(21 − 1, 8) = 4".into())
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    for case in 0..200 {
        let g = random_group(512, 4, &mut r);
        let h = lib(g.order())?.to_usize().unwrap();
        let elements = lib(g.elements())?;
        let gens = loop {
            let k = r.gen_range(g.num_factors().max(1)..=8);
            let gens: Vec<_> = (0..k).map(|_| elements[r.gen_range(0..h)].clone()).collect();
            if lib(g.subgroup_index(&gens))?.is_one() {
                break gens;
            }
        };
        let truth = lib(g.primary_decomposition())?;
        for tie in [TieBreak::First, TieBreak::Last, TieBreak::Seeded(case), TieBreak::Seeded(case + 1000)] {
            let got = lib(greedy_from_generators(&g, &gens, tie))?;
            ensure(got == truth, || format!("{g} with {} generators, {tie:?}: {got:?} vs {truth:?}", gens.len()))?;
        }
    }
    Ok("200 groups of order ≤ 512, four tie-break rules each".into())
}

fn roundtrip_field(what: &str, field: &Field, prime_bound: u64) -> Result<Duration, String> {
    let start = Instant::now();
    let zeta = prime_bound.min(200) as usize;
    let report = lib(roundtrip(field, prime_bound, zeta, TieBreak::First))?;
    for v in &report.verdicts {
        ensure(v.passed, || format!("{what}: {} failed: {}", v.name, v.message))?;
    }
    for name in ["class_number", "class_group", "norms"] {
        ensure(report.verdicts.iter().any(|v| v.name == name), || format!("{what}: no {name} verdict"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("{what}: {elapsed:?} exceeds 60 s"))?;
    Ok(elapsed)
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    let mut fields: Vec<(String, Field, u64)> = Vec::new();
    for d in TEST_DISCRIMINANTS.iter().copied().chain([-56, -260, -1155]) {
        fields.push((format!("D={d}"), quadratic(d)?, 60));
    }
    let z3 = lib(FieldSpec::Synthetic(kclass::fields::SyntheticSpec {
        invariant_factors: bigs(&[3]),
        primes: vec![kclass::fields::SyntheticPrime {
            norm: big(7),
            class: vec![1],
            residue_char: 7,
        }],
    })
    .realize())?;
    fields.push(("Cl=Z/3, one prime".into(), z3, 7));
    for factors in [&[4][..], &[2, 2], &[6], &[2, 4], &[3, 3], &[2, 2, 4]] {
        let h: i64 = factors.iter().product();
        let (_, field) = random_synthetic(factors, h as usize + 3, 2, &mut r);
        fields.push((format!("synthetic Cl={}", field.class_group().group()), field, 10_000));
    }
    let mut slowest = Duration::ZERO;
    for (what, field, bound) in &fields {
        slowest = slowest.max(roundtrip_field(what, field, *bound)?);
    }
    Ok(format!("{} fields recovered exactly; slowest {slowest:.2?}", fields.len()))
}

/// `a_n` as the number of representations of `n` by all reduced forms,
/// divided by the number of units.
fn form_counts(d: i64, bound: usize) -> Result<Vec<u64>, String> {
    let units = match d {
        -4 => 4,
        -3 => 6,
        _ => 2,
    };
    let mut reps = vec![0u64; bound + 1];
    let box_size = bound as i64;
    for f in lib(kclass::fields::reduced_forms(d))? {
        for x in -box_size..=box_size {
            for y in -box_size..=box_size {
                let v = f.eval(x, y);
                if v >= 1 && v <= bound as i128 {
                    reps[v as usize] += 1;
                }
            }
        }
    }
    Ok(reps[1..].iter().map(|r| r / units).collect())
}

fn criterion_7() -> Outcome {
    for d in [-4, -20] {
        let field = quadratic(d)?;
        let primes = lib(field.enumerate_prime_ideals(200))?;
        let bundle = lib(build_bundle(field.class_group(), &primes, &[]))?;
        let report = lib(reconstruct(&bundle, Some(200), TieBreak::First))?;
        let recovered: Vec<BigInt> = report.norms.values().cloned().collect();
        let coeffs = lib(zeta_coefficients(&recovered, 200))?;
        let direct = form_counts(d, 200)?;
        ensure(coeffs == direct, || format!("D={d}: zeta {coeffs:?} vs form counts {direct:?}"))?;
        let chars = kclass::oracle::dirichlet_ideal_counts(d, 200);
        ensure(coeffs.iter().zip(&chars).all(|(a, c)| *a as i64 == *c), || {
            format!("D={d}: character sum disagrees")
        })?;
        ensure(report.zeta.coefficients == coeffs, || format!("D={d}: report zeta"))?;
    }
    Ok("D = −4, −20 to X = 200 agree with form counts and Σ_(d|n) χ(d)".into())
}

fn criterion_8() -> Outcome {
    let a = quadratic(-4)?;
    let b = quadratic(-20)?;
    let c = lib(compare_fields(&a, &b, 10))?;
    ensure(c.discrepancy == Some(Discrepancy::Zeta { n: 3, left: 0, right: 2 }), || {
        format!("−4 vs −20: {:?}", c.discrepancy)
    })?;
    for (d, x) in [(-20, 60), (-23, 60), (-84, 100)] {
        let f = quadratic(d)?;
        let clone = lib(lib(f.synthetic_clone(x))?.realize())?;
        let c = lib(compare_fields(&f, &clone, x as usize))?;
        ensure(c.equivalent(), || format!("D={d} vs clone: {:?}", c.discrepancy))?;
        ensure(lib(compare_fields(&f, &f, x as usize))?.equivalent(), || format!("D={d} vs itself"))?;
    }
    Ok("−4 vs −20 differ at n = 3 (0 vs 2); fields match their synthetic clones".into())
}

fn criterion_9() -> Outcome {
    let field = quadratic(-20)?;
    let primes = lib(field.enumerate_prime_ideals(30))?;
    let built = lib(build_bundle(field.class_group(), &primes, &[]))?;
    lib(reconstruct(&built, None, TieBreak::First))?;
    let file: BundleFile = serde_json::from_str(&bundle_to_json(&built)).map_err(|e| e.to_string())?;
    let p3 = primes.iter().find(|p| p.name == "p_3").unwrap().label;

    let corrupt = |factors: &[i64]| -> Result<kclass::reconstruct::InvariantBundle, String> {
        let mut f = file.clone();
        let e = f.entries.iter_mut().find(|e| e.labels == vec![p3]).unwrap();
        e.factors = bigs(factors);
        lib(bundle_from_json(&serde_json::to_string(&f).unwrap()))
    };
    // Z/10: 11 is not a square
    let b = corrupt(&[10])?;
    ensure(matches!(recover_norm(&b, p3), Err(Error::NotPerfectPower { .. })), || "Z/10 accepted".into())?;
    ensure(matches!(reconstruct(&b, None, TieBreak::First), Err(Error::NotPerfectPower { .. })), || {
        "reconstruction of Z/10 bundle did not fail".into()
    })?;
    let b = corrupt(&[2, 4])?;
    ensure(matches!(recover_norm(&b, p3), Err(Error::NonHomogeneousEntry { .. })), || "Z/2 ⊕ Z/4 accepted".into())?;
    let b = corrupt(&[0])?;
    ensure(matches!(recover_norm(&b, p3), Err(Error::FreeSummandInEntry { .. })), || "Z accepted".into())?;

    // only p_2 (even) and p_29 (principal): the odd-norm classes cannot generate Z/2
    let starved: Vec<PrimeIdealDatum> = lib(field.enumerate_prime_ideals(30))?
        .into_iter()
        .filter(|p| p.name == "p_2" || p.name == "p_29" || p.name == "p_29'")
        .collect();
    let b = lib(build_bundle(field.class_group(), &starved, &[]))?;
    let err = reconstruct(&b, None, TieBreak::First);
    ensure(
        matches!(err, Err(Error::InsufficientGenerators { ref recovered, class_number: 2 }) if recovered.is_one()),
        || format!("starved bundle gave {err:?}"),
    )?;
    // a closed bundle missing the entries the chain needs
    let mut entries = BTreeMap::new();
    entries.insert(vec![], FinGenAbGroup::free(2));
    let b = lib(kclass::reconstruct::InvariantBundle::from_entries(2, vec![], entries))?;
    ensure(matches!(reconstruct(&b, None, TieBreak::First), Err(Error::InsufficientGenerators { .. })), || {
        "empty bundle reconstructed".into()
    })?;
    Ok("corrupt singletons rejected (NotPerfectPower, NonHomogeneousEntry, FreeSummandInEntry); starved bundles raise InsufficientGenerators".into())
}

type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 cycle cokernel formula", criterion_1, Some(Duration::from_secs(10))),
        ("2 singleton quotients", criterion_2, Some(Duration::from_secs(30))),
        ("3 inductive quotient prediction", criterion_3, Some(Duration::from_secs(60))),
        ("4 pinned Z/2 case", criterion_4, None),
        ("5 greedy primary decomposition", criterion_5, Some(Duration::from_secs(10))),
        ("6 blind round trip", criterion_6, None),
        ("7 zeta truncation", criterion_7, None),
        ("8 discrimination", criterion_8, None),
        ("9 negative paths", criterion_9, None),
    ];
    let mut failures = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {name} ({elapsed:.2?}): {msg}"),
            Err(msg) => {
                failures += 1;
                println!("FAIL criterion {name} ({elapsed:.2?}): {msg}");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 9 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
