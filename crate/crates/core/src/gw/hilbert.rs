//! Local Hilbert symbols over the rationals.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{factorize, squarefree_class};

/// A place of the rationals. Finite places sort first, by prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Prime(BigUint),
    Infinity,
}

impl Place {
    pub fn prime(p: u64) -> Self {
        Place::Prime(BigUint::from(p))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

/// Primes dividing the numerator or denominator of `q`.
pub fn primes_of(q: &BigRational) -> Vec<BigUint> {
    let mut out: Vec<BigUint> = factorize(q.numer().magnitude())
        .into_keys()
        .chain(factorize(q.denom().magnitude()).into_keys())
        .collect();
    out.sort();
    out.dedup();
    out
}

fn legendre(u: &BigInt, p: &BigInt) -> i32 {
    let e = (p - 1u32) / 2u32;
    let r = u.mod_floor(p).modpow(&e, p);
    if r.is_one() {
        1
    } else {
        debug_assert_eq!(r, p - 1u32);
        -1
    }
}

fn split(n: &BigInt, p: &BigInt) -> (u32, BigInt) {
    let mut n = n.clone();
    let mut v = 0;
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    (v, n)
}

fn mod8(n: &BigInt) -> u32 {
    n.mod_floor(&BigInt::from(8)).to_u32().unwrap()
}

/// `(a, b)_v`: +1 if `z^2 = a x^2 + b y^2` has a nonzero solution over the
/// completion at `v`, else -1.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: &Place) -> i32 {
    assert!(!a.is_zero() && !b.is_zero(), "Hilbert symbol of zero");
    let (a, b) = (squarefree_class(a), squarefree_class(b));
    let p = match place {
        Place::Infinity => return if a.is_negative() && b.is_negative() { -1 } else { 1 },
        Place::Prime(p) => BigInt::from(p.clone()),
    };
    let (alpha, u) = split(&a, &p);
    let (beta, v) = split(&b, &p);
    if p == BigInt::from(2) {
        let eps = |x: &BigInt| u32::from(mod8(x) % 4 == 3);
        let omega = |x: &BigInt| u32::from(matches!(mod8(x), 3 | 5));
        let e = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
        return if e % 2 == 0 { 1 } else { -1 };
    }
    let mut s = 1;
    let eps_p = ((&p - 1u32) / 2u32).is_odd();
    if alpha % 2 == 1 && beta % 2 == 1 && eps_p {
        s = -s;
    }
    if beta % 2 == 1 {
        s *= legendre(&u, &p);
    }
    if alpha % 2 == 1 {
        s *= legendre(&v, &p);
    }
    s
}
