//! Integer helpers: factorization, divisors, square classes of rationals.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Prime factorization of a positive integer.
pub fn factorize(n: &BigUint) -> BTreeMap<BigUint, usize> {
    if n.is_one() || n.is_zero() {
        return BTreeMap::new();
    }
    num_prime::nt_funcs::factorize(n.clone())
}

/// All positive divisors, ascending.
pub fn divisors(n: &BigUint) -> Vec<BigUint> {
    let mut out = vec![BigUint::one()];
    for (p, e) in factorize(n) {
        let mut next = Vec::with_capacity(out.len() * (e + 1));
        for d in &out {
            let mut pk = BigUint::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// The squarefree integer in the square class of a nonzero rational.
pub fn squarefree_class(q: &BigRational) -> BigInt {
    assert!(!q.is_zero(), "zero has no square class");
    let n = q.numer() * q.denom();
    let mut core = BigUint::one();
    for (p, e) in factorize(&n.magnitude().clone()) {
        if e % 2 == 1 {
            core *= p;
        }
    }
    let sign = if n.is_negative() { Sign::Minus } else { Sign::Plus };
    BigInt::from_biguint(sign, core)
}

pub fn is_perfect_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}
