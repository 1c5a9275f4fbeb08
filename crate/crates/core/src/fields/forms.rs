//! Positive definite binary quadratic forms and the form class group of a
//! negative fundamental discriminant.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::abgroup::{cokernel_of_columns, GroupElement};
use crate::kdelta::ClassGroupModel;
use crate::{Error, Result};

/// `ax² + bxy + cy²` with discriminant `b² − 4ac < 0` and `a > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadraticForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (a, b, c, x, y) = (self.a as i128, self.b as i128, self.c as i128, x as i128, y as i128);
        a * x * x + b * x * y + c * y * y
    }

    /// The principal form of discriminant `d`.
    pub fn principal(d: i64) -> Self {
        let b = d.rem_euclid(2);
        QuadraticForm::new(1, b, (b * b - d) / 4)
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a > 0 && b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    /// The unique reduced form equivalent to `self`.
    pub fn reduce(self) -> Self {
        let d = self.discriminant() as i128;
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        debug_assert!(d < 0 && a > 0);
        loop {
            if !(-a < b && b <= a) {
                let k = Integer::div_floor(&(a - b), &(2 * a));
                b += 2 * a * k;
                c = (b * b - d) / (4 * a);
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            break;
        }
        QuadraticForm::new(a as i64, b as i64, c as i64)
    }

    /// Gauss composition of two forms of the same discriminant, reduced.
    pub fn compose(&self, other: &QuadraticForm) -> QuadraticForm {
        let d = self.discriminant() as i128;
        debug_assert_eq!(d, other.discriminant() as i128);
        let (f1, f2) = if self.a > other.a { (other, self) } else { (self, other) };
        let (a1, b1) = (f1.a as i128, f1.b as i128);
        let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (y1, g) = if a2 % a1 == 0 {
            (0, a1)
        } else {
            let e = a2.extended_gcd(&a1);
            (e.x, e.gcd)
        };
        let (x2, y2, d1) = if s % g == 0 {
            (0, -1, g)
        } else {
            let e = s.extended_gcd(&g);
            (e.x, -e.y, e.gcd)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
        let b3 = b2 + 2 * v2 * r;
        let a3 = v1 * v2;
        let num = b3 * b3 - d;
        debug_assert_eq!(num % (4 * a3), 0);
        let c3 = num / (4 * a3);
        QuadraticForm::new(a3 as i64, b3 as i64, c3 as i64).reduce()
    }

    /// The opposite form `(a, −b, c)`, reduced: the inverse class.
    pub fn opposite(&self) -> QuadraticForm {
        QuadraticForm::new(self.a, -self.b, self.c).reduce()
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

fn is_squarefree(mut n: u64) -> bool {
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        if n.is_multiple_of(p) {
            n /= p;
        }
        p += 1;
    }
    true
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

pub(crate) fn check_discriminant(d: i64) -> Result<()> {
    if d >= 0 {
        return Err(Error::InvalidDiscriminant(d, "must be negative".into()));
    }
    if d < -(1 << 40) {
        return Err(Error::InvalidDiscriminant(d, "too large for desk-scale enumeration".into()));
    }
    if !is_fundamental_discriminant(d) {
        return Err(Error::InvalidDiscriminant(d, "not fundamental".into()));
    }
    Ok(())
}

/// All reduced forms of discriminant `d`, ordered by `(a, |b|, −b)`.
pub fn reduced_forms(d: i64) -> Result<Vec<QuadraticForm>> {
    check_discriminant(d)?;
    let bound = ((d.unsigned_abs() as f64) / 3.0).sqrt() as i64 + 1;
    let mut out = Vec::new();
    for a in 1..=bound {
        for b in -a..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = QuadraticForm::new(a, b, num / (4 * a));
            if f.is_reduced() && a.gcd(&b).gcd(&f.c) == 1 {
                out.push(f);
            }
        }
    }
    out.sort_by_key(|f| (f.a, f.b.abs(), -f.b));
    Ok(out)
}

/// The form class group of a negative fundamental discriminant, realised as
/// a [`ClassGroupModel`] together with the reduced form of every class.
#[derive(Debug, Clone)]
pub struct QuadraticClassGroup {
    discriminant: i64,
    forms: Vec<QuadraticForm>,
    model: ClassGroupModel,
    /// form index -> class index in `model`
    class_of_form: Vec<usize>,
    form_index: HashMap<QuadraticForm, usize>,
}

impl QuadraticClassGroup {
    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    pub fn forms(&self) -> &[QuadraticForm] {
        &self.forms
    }

    pub fn model(&self) -> &ClassGroupModel {
        &self.model
    }

    /// Class of an arbitrary form of this discriminant.
    pub fn class_of(&self, f: QuadraticForm) -> Result<usize> {
        if f.discriminant() != self.discriminant {
            return Err(Error::ClassMismatch(format!(
                "{f} has discriminant {}, expected {}",
                f.discriminant(),
                self.discriminant
            )));
        }
        let r = f.reduce();
        let i = self
            .form_index
            .get(&r)
            .ok_or_else(|| Error::InternalContradiction(format!("reduced form {r} not enumerated")))?;
        Ok(self.class_of_form[*i])
    }

    pub fn form_of_class(&self, class: usize) -> QuadraticForm {
        let i = self
            .class_of_form
            .iter()
            .position(|&c| c == class)
            .expect("class_of_form is a bijection");
        self.forms[i]
    }

    /// Class of the prime ideal above a non-inert `q` corresponding to the
    /// form `(q, b, ·)` with the least `b ≥ 0` satisfying `b² ≡ D (mod 4q)`.
    pub fn ideal_class_of_prime(&self, q: u64) -> Result<GroupElement> {
        Ok(self.model.element(self.prime_class_index(q)?).clone())
    }

    pub(crate) fn prime_class_index(&self, q: u64) -> Result<usize> {
        let d = self.discriminant;
        if kronecker_splitting(d, q) == Splitting::Inert {
            return Err(Error::InertPrime(q));
        }
        let q = q as i64;
        let b = (0..2 * q)
            .find(|&b| (b - d).rem_euclid(2) == 0 && (b * b - d).rem_euclid(4 * q) == 0)
            .ok_or_else(|| {
                Error::InternalContradiction(format!("no square root of {d} mod {}", 4 * q))
            })?;
        self.class_of(QuadraticForm::new(q, b, (b * b - d) / (4 * q)))
    }
}

/// Builds the class group on reduced forms under Gauss composition. The
/// abstract structure is the cokernel of the relations
/// `e_f + e_g − e_{fg}` over all forms `f` and a generating set of `g`.
pub fn class_group_of_discriminant(d: i64) -> Result<QuadraticClassGroup> {
    let forms = reduced_forms(d)?;
    let h = forms.len();
    let form_index: HashMap<QuadraticForm, usize> =
        forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let lookup = |f: QuadraticForm| -> Result<usize> {
        form_index
            .get(&f)
            .copied()
            .ok_or_else(|| Error::InternalContradiction(format!("composite {f} is not reduced")))
    };
    let mut table = vec![0usize; h * h];
    for i in 0..h {
        for j in 0..h {
            table[i * h + j] = lookup(forms[i].compose(&forms[j]))?;
        }
    }

    let mut gens: Vec<usize> = Vec::new();
    let mut reached = vec![false; h];
    reached[0] = true;
    for i in 0..h {
        if reached[i] {
            continue;
        }
        gens.push(i);
        let mut members: Vec<usize> = (0..h).filter(|&x| reached[x]).collect();
        let mut k = 0;
        while k < members.len() {
            for &g in &gens {
                let y = table[members[k] * h + g];
                if !reached[y] {
                    reached[y] = true;
                    members.push(y);
                }
            }
            k += 1;
        }
    }

    let mut relations = Vec::new();
    let mut unit = vec![BigInt::from(0); h];
    unit[0] = BigInt::from(1);
    relations.push(unit);
    for i in 0..h {
        for &g in &gens {
            let mut col = vec![BigInt::from(0); h];
            col[i] += 1;
            col[g] += 1;
            col[table[i * h + g]] -= 1;
            relations.push(col);
        }
    }
    let coker = cokernel_of_columns(h, &relations)?;
    if coker.group.order().ok() != Some(BigInt::from(h)) {
        return Err(Error::InternalContradiction(format!(
            "composition table of {h} forms presents {}",
            coker.group
        )));
    }
    let model = ClassGroupModel::new(coker.group.clone())?;
    let class_of_form = coker
        .images
        .iter()
        .map(|g| model.index_of(g))
        .collect::<Result<Vec<_>>>()?;
    for i in 0..h {
        for j in 0..h {
            if class_of_form[table[i * h + j]] != model.op(class_of_form[i], class_of_form[j]) {
                return Err(Error::InternalContradiction(
                    "form composition disagrees with the derived group law".into(),
                ));
            }
        }
    }
    Ok(QuadraticClassGroup {
        discriminant: d,
        forms,
        model,
        class_of_form,
        form_index,
    })
}

/// Kronecker symbol `(d | q)` for a prime `q`.
pub fn kronecker_prime(d: i64, q: u64) -> i32 {
    if q == 2 {
        return match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    let qq = q as i128;
    let r = (d as i128).rem_euclid(qq);
    if r == 0 {
        return 0;
    }
    let mut result: i128 = 1;
    let mut base = r;
    let mut e = (qq - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % qq;
        }
        base = base * base % qq;
        e >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol `(d | n)` for `n ≥ 1`, multiplicative in `n`.
pub fn kronecker_symbol(d: i64, n: u64) -> i32 {
    let mut n = n;
    let mut out = 1;
    let mut p = 2u64;
    while p * p <= n {
        while n.is_multiple_of(p) {
            out *= kronecker_prime(d, p);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        out *= kronecker_prime(d, n);
    }
    out
}

/// How a rational prime decomposes in the quadratic field of discriminant `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Splitting {
    /// Two primes of norm `q`.
    Split,
    /// One prime of norm `q²`.
    Inert,
    /// One prime of norm `q`.
    Ramified,
}

impl Splitting {
    pub fn prime_count(&self) -> usize {
        match self {
            Splitting::Split => 2,
            _ => 1,
        }
    }

    pub fn norm(&self, q: u64) -> BigInt {
        match self {
            Splitting::Inert => BigInt::from(q) * BigInt::from(q),
            _ => BigInt::from(q),
        }
    }
}

pub fn kronecker_splitting(d: i64, q: u64) -> Splitting {
    match kronecker_prime(d, q) {
        0 => Splitting::Ramified,
        1 => Splitting::Split,
        _ => Splitting::Inert,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(a: i64, b: i64, c: i64) -> QuadraticForm {
        QuadraticForm::new(a, b, c)
    }

    #[test]
    fn reduced_form_examples() {
        assert_eq!(reduced_forms(-4).unwrap(), vec![f(1, 0, 1)]);
        assert_eq!(reduced_forms(-20).unwrap(), vec![f(1, 0, 5), f(2, 2, 3)]);
        assert_eq!(reduced_forms(-23).unwrap(), vec![f(1, 1, 6), f(2, 1, 3), f(2, -1, 3)]);
        assert!(reduced_forms(5).is_err());
        assert!(reduced_forms(-12).is_err());
        assert!(reduced_forms(-8).is_ok());
    }

    #[test]
    fn reduction() {
        assert_eq!(f(3, 2, 2).reduce(), f(2, -2, 3).reduce());
        assert_eq!(f(3, 2, 2).reduce(), f(2, 2, 3));
        assert_eq!(f(2, 2, 1).reduce(), f(1, 0, 1));
        assert!(f(2, 2, 3).is_reduced());
        assert!(!f(2, -2, 3).is_reduced());
    }

    #[test]
    fn composition_d20() {
        let g = f(2, 2, 3);
        assert_eq!(g.compose(&g), f(1, 0, 5));
        assert_eq!(g.compose(&f(1, 0, 5)), g);
    }

    #[test]
    fn class_groups() {
        let factors = |d| {
            class_group_of_discriminant(d)
                .unwrap()
                .model()
                .group()
                .factors()
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
        };
        assert!(factors(-4).is_empty());
        assert_eq!(factors(-20), vec!["2"]);
        assert_eq!(factors(-23), vec!["3"]);
        assert_eq!(factors(-47), vec!["5"]);
        assert_eq!(factors(-84), vec!["2", "2"]);
        assert_eq!(factors(-56), vec!["4"]);
        assert_eq!(factors(-1155), vec!["2", "2", "2"]);
    }

    #[test]
    fn splitting_examples() {
        assert_eq!(kronecker_splitting(-20, 3), Splitting::Split);
        assert_eq!(kronecker_splitting(-20, 11), Splitting::Inert);
        assert_eq!(kronecker_splitting(-20, 5), Splitting::Ramified);
        assert_eq!(kronecker_splitting(-20, 2), Splitting::Ramified);
        assert_eq!(kronecker_splitting(-23, 2), Splitting::Split);
        assert_eq!(kronecker_splitting(-3, 2), Splitting::Inert);
        assert_eq!(kronecker_splitting(-4, 3), Splitting::Inert);
        assert_eq!(Splitting::Inert.norm(11), BigInt::from(121));
    }

    #[test]
    fn prime_classes_d20() {
        let cg = class_group_of_discriminant(-20).unwrap();
        let nontrivial = |q| cg.prime_class_index(q).unwrap() != 0;
        assert!(nontrivial(3));
        assert!(nontrivial(7));
        assert!(!nontrivial(29));
        assert!(nontrivial(2));
        assert!(!nontrivial(5));
        assert!(matches!(cg.ideal_class_of_prime(11), Err(Error::InertPrime(11))));
    }

    #[test]
    fn ramified_classes_square_to_identity() {
        for d in [-20, -84, -56, -1155, -23] {
            let cg = class_group_of_discriminant(d).unwrap();
            for q in 2..60u64 {
                if crate::fields::is_prime(q) && kronecker_splitting(d, q) == Splitting::Ramified {
                    let c = cg.prime_class_index(q).unwrap();
                    assert_eq!(cg.model().op(c, c), 0, "D={d} q={q}");
                }
            }
        }
    }
}
