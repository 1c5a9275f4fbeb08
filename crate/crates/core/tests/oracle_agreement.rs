mod common;

use num_bigint::BigInt;
use proptest::prelude::*;

use common::TEST_DISCRIMINANTS;
use kclass::abgroup::iso_equal;
use kclass::fields::{
    class_group_of_discriminant, is_fundamental_discriminant, kronecker_splitting, kronecker_symbol, primes_up_to,
    reduced_forms, FieldSpec, QuadraticForm, Splitting,
};
use kclass::oracle::{
    dirichlet_ideal_counts, kronecker, naive_class_number, naive_element_orders, naive_represented_primes,
    structure_from_orders,
};
use kclass::reconstruct::zeta_coefficients;

fn fundamentals(lo: i64) -> Vec<i64> {
    (lo..0).filter(|&d| is_fundamental_discriminant(d)).collect()
}

/// Order of `f` under composition, counted step by step.
fn form_order(f: QuadraticForm) -> u64 {
    let id = QuadraticForm::principal(f.discriminant());
    let mut acc = f.reduce();
    let mut k = 1;
    while acc != id {
        acc = acc.compose(&f).reduce();
        k += 1;
    }
    k
}

#[test]
fn class_numbers_match_form_count() {
    for d in fundamentals(-1500) {
        let cg = class_group_of_discriminant(d).unwrap();
        assert_eq!(cg.forms().len(), naive_class_number(d), "d = {d}");
        assert_eq!(cg.model().order(), cg.forms().len());
    }
}

#[test]
fn group_structure_matches_composition_orders() {
    for d in fundamentals(-800) {
        let cg = class_group_of_discriminant(d).unwrap();
        let orders: Vec<u64> = cg.forms().iter().map(|&f| form_order(f)).collect();
        let from_forms = structure_from_orders(&orders).unwrap();
        assert!(iso_equal(&from_forms, cg.model().group()), "d = {d}");
        // and the model's element orders agree form by form
        let model_orders = naive_element_orders(cg.model().group()).unwrap();
        for (i, &f) in cg.forms().iter().enumerate() {
            let class = cg.class_of(f).unwrap();
            let e = cg.model().element(class);
            assert_eq!(model_orders[e], BigInt::from(orders[i]), "d = {d}, f = {f}");
        }
    }
}

#[test]
fn composition_is_an_abelian_group_law() {
    for d in TEST_DISCRIMINANTS {
        let forms = reduced_forms(d).unwrap();
        let id = QuadraticForm::principal(d);
        for &f in &forms {
            assert_eq!(f.compose(&id).reduce(), f);
            assert_eq!(f.compose(&f.opposite()).reduce(), id);
            for &g in &forms {
                assert_eq!(f.compose(&g).reduce(), g.compose(&f).reduce());
                for &h in &forms {
                    let left = f.compose(&g).reduce().compose(&h).reduce();
                    let right = f.compose(&g.compose(&h).reduce()).reduce();
                    assert_eq!(left, right, "d = {d}: ({f} {g}) {h}");
                }
            }
        }
    }
}

#[test]
fn kronecker_matches_jacobi_oracle() {
    for d in fundamentals(-300) {
        for n in 1..=300u64 {
            assert_eq!(kronecker_symbol(d, n), kronecker(d, n), "({d} | {n})");
        }
    }
}

#[test]
fn prime_classes_match_represented_forms() {
    for d in fundamentals(-300) {
        let cg = class_group_of_discriminant(d).unwrap();
        for q in primes_up_to(60) {
            let split = kronecker_splitting(d, q);
            let rep = naive_represented_primes(d, q).unwrap();
            match split {
                Splitting::Inert => assert!(rep.is_none(), "d = {d}, q = {q}"),
                _ => {
                    let rep = rep.unwrap_or_else(|| panic!("d = {d}: {q} unrepresented"));
                    assert_eq!(rep.form.eval(rep.x, rep.y), q as i128);
                    let found = cg.class_of(rep.form).unwrap();
                    let class = cg.model().index_of(&cg.ideal_class_of_prime(q).unwrap()).unwrap();
                    assert!(
                        found == class || found == cg.model().inverse(class),
                        "d = {d}, q = {q}: form {} vs class {}",
                        rep.form,
                        class
                    );
                }
            }
        }
    }
}

#[test]
fn splitting_accounts_for_degree_two() {
    for d in fundamentals(-500) {
        for q in primes_up_to(200) {
            let s = kronecker_splitting(d, q);
            let f = if s == Splitting::Inert { 2 } else { 1 };
            let e = if s == Splitting::Ramified { 2 } else { 1 };
            // Σ e·f over the primes above q is the degree
            assert_eq!(s.prime_count() * e * f, 2);
            assert_eq!(s.norm(q), BigInt::from(q).pow(f as u32));
            let chi = kronecker(d, q);
            assert_eq!(chi == 0, s == Splitting::Ramified, "d = {d}, q = {q}");
            assert_eq!(chi == 1, s == Splitting::Split, "d = {d}, q = {q}");
            assert_eq!(chi == 0, (d % q as i64) == 0, "d = {d}, q = {q}");
        }
    }
}

#[test]
fn generation_bound_is_minimal() {
    for d in fundamentals(-600) {
        let field = FieldSpec::quadratic(d).realize().unwrap();
        let cl = field.class_group();
        let x0 = field.generation_bound(1000).unwrap().expect("bound found");
        let primes = field.enumerate_prime_ideals(1000).unwrap();
        let classes_upto = |x: &BigInt, strict: bool| -> Vec<usize> {
            primes
                .iter()
                .filter(|p| p.has_odd_norm() && if strict { &p.norm < x } else { &p.norm <= x })
                .map(|p| cl.index_of(&p.class).unwrap())
                .collect()
        };
        assert_eq!(cl.subgroup_order(&classes_upto(&x0, false)), cl.order(), "d = {d}");
        if cl.order() > 1 {
            assert!(cl.subgroup_order(&classes_upto(&x0, true)) < cl.order(), "d = {d}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ideal_counts_match_character_sums(idx in 0usize..200, bound in 1usize..=400) {
        let ds = fundamentals(-2000);
        let d = ds[idx % ds.len()];
        let field = FieldSpec::quadratic(d).realize().unwrap();
        let norms: Vec<BigInt> = field.enumerate_prime_ideals(bound as u64).unwrap().into_iter().map(|p| p.norm).collect();
        let ours = zeta_coefficients(&norms, bound).unwrap();
        let theirs = dirichlet_ideal_counts(d, bound);
        prop_assert_eq!(ours.len(), theirs.len());
        for (n, (a, b)) in ours.iter().zip(&theirs).enumerate() {
            prop_assert_eq!(*a as i64, *b, "d = {}, n = {}", d, n + 1);
        }
    }
}
