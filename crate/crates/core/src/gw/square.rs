//! Square classes of field elements.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith::{is_perfect_square, squarefree_class};
use crate::field::{BaseField, FieldDescriptor, FieldElement, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareTest {
    Yes,
    No,
    Undecided,
}

impl From<bool> for SquareTest {
    fn from(b: bool) -> Self {
        if b {
            SquareTest::Yes
        } else {
            SquareTest::No
        }
    }
}

fn rational_is_square(q: &BigRational) -> bool {
    !q.is_negative() && is_perfect_square(q.numer().magnitude()) && is_perfect_square(q.denom().magnitude())
}

/// Decides whether a nonzero `u` is a square in `k`.
///
/// Complete over finite fields and the rationals. Over extensions of the
/// rationals only quadratic fields and rational elements of odd-degree
/// fields are decided.
pub fn is_square(k: &FieldDescriptor, u: &FieldElement) -> SquareTest {
    assert!(!k.is_zero(u), "zero has no square class");
    if let Some(q) = k.order() {
        let e = (q - 1) / 2;
        return k.is_one(&k.pow(u, e)).into();
    }
    if !k.is_extension() {
        return rational_is_square(&rational(k, u)).into();
    }
    if let Some(s) = k.as_base(u) {
        if k.degree() % 2 == 1 {
            return rational_is_square(s.as_rational().unwrap()).into();
        }
    }
    if k.degree() == 2 {
        return quadratic_is_square(k, u).into();
    }
    SquareTest::Undecided
}

fn rational(k: &FieldDescriptor, u: &FieldElement) -> BigRational {
    k.as_base(u).and_then(|s| s.as_rational().cloned()).expect("a rational scalar")
}

/// `u = x + y*a` with `a^2 + b*a + c = 0`. Rewriting over `sqrt(D)`,
/// `D = b^2 - 4c`, gives `u = s + t*sqrt(D)`, and `u` is a square iff its
/// norm `n^2` is a rational square and one of `(s +- n)/2` is too.
fn quadratic_is_square(k: &FieldDescriptor, u: &FieldElement) -> bool {
    let ext = k.extension_data().unwrap();
    let coeff = |i: usize| ext.min_poly()[i].as_rational().unwrap().clone();
    let (c, b) = (coeff(0), coeff(1));
    let two = BigRational::from_integer(BigInt::from(2));
    let d = &b * &b - BigRational::from_integer(BigInt::from(4)) * &c;
    let x = u.coords()[0].as_rational().unwrap().clone();
    let y = u.coords()[1].as_rational().unwrap().clone();
    let s = &x - &y * &b / &two;
    let t = &y / &two;
    if t.is_zero() {
        return rational_is_square(&s) || rational_is_square(&(&s / &d));
    }
    let norm = &s * &s - &d * &t * &t;
    if !rational_is_square(&norm) {
        return false;
    }
    let n = BigRational::new(norm.numer().sqrt(), norm.denom().sqrt());
    [&s + &n, &s - &n].iter().any(|v| {
        let half = v / &two;
        !half.is_zero() && rational_is_square(&half)
    })
}

/// The first nonsquare of a finite field, counting through elements with
/// the constant coordinate varying fastest.
pub fn fixed_nonsquare(k: &FieldDescriptor) -> FieldElement {
    let p = k.characteristic();
    assert!(p != 0, "only finite fields have a fixed nonsquare");
    let d = k.degree();
    (1u64..)
        .map(|mut n| {
            let coords: Vec<Scalar> = (0..d)
                .map(|_| {
                    let c = n % p;
                    n /= p;
                    Scalar::Residue(c)
                })
                .collect();
            k.element(coords).expect("valid coordinates")
        })
        .find(|x| is_square(k, x) == SquareTest::No)
        .expect("finite fields of odd order have nonsquares")
}

/// Canonical representative of the square class of `u` where one is
/// available: a squarefree integer over the rationals and 1 or the fixed
/// nonsquare over a finite field. Other fields keep `u` as given.
pub fn reduce_square_class(k: &FieldDescriptor, u: &FieldElement) -> FieldElement {
    assert!(!k.is_zero(u), "zero has no square class");
    match (k.base(), k.is_extension()) {
        (BaseField::Rationals, false) => {
            let r = squarefree_class(&rational(k, u));
            k.from_scalar(Scalar::Rational(BigRational::from_integer(r)))
        }
        (BaseField::Prime(_), _) => match is_square(k, u) {
            SquareTest::Yes => k.one(),
            _ => fixed_nonsquare(k),
        },
        _ => u.clone(),
    }
}

/// Whether `a` and `b` lie in the same square class.
pub fn same_square_class(k: &FieldDescriptor, a: &FieldElement, b: &FieldElement) -> SquareTest {
    let q = k.div(a, b).expect("nonzero");
    if k.is_one(&q) {
        return SquareTest::Yes;
    }
    // a/b and a*b differ by the square b^2; either may be decidable
    match is_square(k, &q) {
        SquareTest::Undecided => is_square(k, &k.mul(a, b)),
        t => t,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> FieldElement {
        let k = FieldDescriptor::rationals();
        k.div(&k.from_i64(n), &k.from_i64(d)).unwrap()
    }

    #[test]
    fn rational_squares() {
        let k = FieldDescriptor::rationals();
        assert_eq!(is_square(&k, &q(4, 9)), SquareTest::Yes);
        assert_eq!(is_square(&k, &q(-4, 9)), SquareTest::No);
        assert_eq!(is_square(&k, &q(2, 1)), SquareTest::No);
        assert_eq!(reduce_square_class(&k, &q(18, 4)), k.from_i64(2));
        assert_eq!(reduce_square_class(&k, &q(-1, 12)), k.from_i64(-3));
    }

    #[test]
    fn finite_field_squares() {
        let f3 = FieldDescriptor::prime(3).unwrap();
        assert_eq!(is_square(&f3, &f3.from_i64(2)), SquareTest::No);
        assert_eq!(fixed_nonsquare(&f3), f3.from_i64(2));
        let f7 = FieldDescriptor::prime(7).unwrap();
        assert_eq!(fixed_nonsquare(&f7), f7.from_i64(3));
        // every element of F_3 is a square in F_9
        let f9 = FieldDescriptor::extension(BaseField::Prime(3), "a", vec![Scalar::Residue(1), Scalar::Residue(0), Scalar::Residue(1)]).unwrap();
        assert_eq!(is_square(&f9, &f9.from_i64(2)), SquareTest::Yes);
        // a has order 4, 1 + a has order 8
        let a = f9.generator().unwrap();
        assert_eq!(is_square(&f9, &a), SquareTest::Yes);
        assert_eq!(is_square(&f9, &f9.add(&a, &f9.one())), SquareTest::No);
        // squares are half of the units
        let count = f9.elements().unwrap().iter().filter(|x| !f9.is_zero(x) && is_square(&f9, x) == SquareTest::Yes).count();
        assert_eq!(count, 4);
    }

    #[test]
    fn quadratic_extension_squares() {
        let r = BaseField::Rationals;
        let qi = FieldDescriptor::extension(r, "i", vec![r.one(), r.zero(), r.one()]).unwrap();
        let i = qi.generator().unwrap();
        // 2i = (1 + i)^2, -1 = i^2, i is not a square
        assert_eq!(is_square(&qi, &qi.mul(&qi.from_i64(2), &i)), SquareTest::Yes);
        assert_eq!(is_square(&qi, &qi.from_i64(-1)), SquareTest::Yes);
        assert_eq!(is_square(&qi, &i), SquareTest::No);
        assert_eq!(is_square(&qi, &qi.from_i64(2)), SquareTest::No);
        // the golden ratio field, with a non-monic-looking generator: a^2 - a - 1
        let g = FieldDescriptor::extension(r, "a", vec![r.from_i64(-1), r.from_i64(-1), r.one()]).unwrap();
        let a = g.generator().unwrap();
        assert_eq!(is_square(&g, &g.mul(&a, &a)), SquareTest::Yes);
        assert_eq!(is_square(&g, &g.from_i64(5)), SquareTest::Yes);
        assert_eq!(is_square(&g, &a), SquareTest::No);
    }

    #[test]
    fn odd_degree_extensions() {
        let r = BaseField::Rationals;
        let k = FieldDescriptor::extension(r, "a", vec![r.from_i64(-2), r.zero(), r.zero(), r.one()]).unwrap();
        assert_eq!(is_square(&k, &k.generator().unwrap()), SquareTest::Undecided);
        assert_eq!(is_square(&k, &k.from_i64(2)), SquareTest::No);
        assert_eq!(is_square(&k, &k.from_i64(9)), SquareTest::Yes);
    }
}
