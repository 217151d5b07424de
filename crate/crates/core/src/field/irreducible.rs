//! Irreducibility certificates for minimal polynomials over Q and F_p.
//!
//! Over F_p this is a complete decision (Ben-Or: no factor of degree `i`
//! iff `gcd(t^(p^i) - t, m) = 1`). Over Q, degrees up to 3 are decided by the
//! rational root test; higher degrees are certified by irreducibility modulo
//! a prime of good reduction, with `CannotCertify` when none is found.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{BaseField, FieldDescriptor, FieldElement, UniPoly};
use crate::arith::divisors;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Yes,
    No,
    CannotCertify,
}

const PRIME_BUDGET: usize = 60;

/// Decides irreducibility of a polynomial of degree at least 1 over a base
/// field (the descriptor of `m` must not be an extension).
pub fn is_irreducible(m: &UniPoly) -> Irreducibility {
    let k = m.field();
    assert!(!k.is_extension(), "irreducibility is decided over base fields only");
    let d = m.degree().expect("nonzero polynomial");
    if d == 1 {
        return Irreducibility::Yes;
    }
    match k.base() {
        BaseField::Prime(_) => {
            if ben_or(m) {
                Irreducibility::Yes
            } else {
                Irreducibility::No
            }
        }
        BaseField::Rationals => over_rationals(m),
    }
}

fn ben_or(m: &UniPoly) -> bool {
    let k = m.field();
    let p = k.characteristic() as u128;
    let d = m.degree().unwrap();
    let t = UniPoly::new(k, vec![k.zero(), k.one()]);
    let mut frob = t.clone();
    for _ in 0..d / 2 {
        frob = frob.pow_mod(p, m);
        if m.gcd(&frob.sub(&t)).degree() != Some(0) {
            return false;
        }
    }
    true
}

/// Integer polynomial with the same roots: denominators cleared, content
/// removed.
fn primitive_integer_poly(m: &UniPoly) -> Vec<BigInt> {
    let k = m.field();
    let rats: Vec<BigRational> = m.coeffs().iter().map(|c| k.base().to_rational(&c.coords()[0])).collect();
    let lcm = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|r| (r * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter().map(|c| c / &content).collect()
}

fn has_rational_root(ints: &[BigInt]) -> bool {
    let (a0, ad) = (&ints[0], ints.last().unwrap());
    if a0.is_zero() {
        return true;
    }
    let nums = divisors(&a0.abs().to_biguint().unwrap());
    let dens = divisors(&ad.abs().to_biguint().unwrap());
    for r in &nums {
        for s in &dens {
            if r.gcd(s) != BigUint::one() {
                continue;
            }
            for sign in [1i32, -1] {
                let r = BigInt::from(r.clone()) * sign;
                let s = BigInt::from(s.clone());
                // homogenized evaluation: sum c_i r^i s^(d-i)
                let d = ints.len() - 1;
                let mut acc = BigInt::zero();
                for (i, c) in ints.iter().enumerate() {
                    acc += c * num_traits::pow(r.clone(), i) * num_traits::pow(s.clone(), d - i);
                }
                if acc.is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

fn over_rationals(m: &UniPoly) -> Irreducibility {
    let d = m.degree().unwrap();
    let ints = primitive_integer_poly(m);
    if has_rational_root(&ints) {
        return Irreducibility::No;
    }
    if d <= 3 {
        return Irreducibility::Yes;
    }
    let lead = ints.last().unwrap().clone();
    let mut tried = 0;
    let mut p = 3u64;
    while tried < PRIME_BUDGET {
        if super::scalar::is_prime_u64(p) && !(&lead % BigInt::from(p)).is_zero() {
            tried += 1;
            let fp = FieldDescriptor::prime(p).expect("odd prime");
            let coeffs: Vec<FieldElement> = ints.iter().map(|c| fp.from_scalar(fp.base().from_bigint(c))).collect();
            let reduced = UniPoly::new(&fp, coeffs);
            // squarefree modulo p, same degree
            if reduced.gcd(&reduced.derivative()).degree() == Some(0) && ben_or(&reduced) {
                return Irreducibility::Yes;
            }
        }
        p += 2;
    }
    Irreducibility::CannotCertify
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(k: &FieldDescriptor, c: &[i64]) -> UniPoly {
        UniPoly::new(k, c.iter().map(|&x| k.from_i64(x)).collect())
    }

    /// Exhaustive oracle: does any monic polynomial of degree 1..=d/2 divide m?
    fn exhaustive_reducible(m: &UniPoly) -> bool {
        let k = m.field();
        let p = k.characteristic();
        let d = m.degree().unwrap();
        for deg in 1..=d / 2 {
            let count = p.pow(deg as u32);
            for mut n in 0..count {
                let mut c: Vec<i64> = (0..deg)
                    .map(|_| {
                        let r = n % p;
                        n /= p;
                        r as i64
                    })
                    .collect();
                c.push(1);
                if m.rem(&poly(k, &c)).is_zero() {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn spot_values() {
        let q = FieldDescriptor::rationals();
        let f3 = FieldDescriptor::prime(3).unwrap();
        assert_eq!(is_irreducible(&poly(&q, &[1, 0, 1])), Irreducibility::Yes);
        assert_eq!(is_irreducible(&poly(&f3, &[-1, 0, 1])), Irreducibility::No);
        assert_eq!(is_irreducible(&poly(&f3, &[-2, 0, 1])), Irreducibility::Yes);
        assert_eq!(is_irreducible(&poly(&q, &[-2, 0, 0, 1])), Irreducibility::Yes);
        assert_eq!(is_irreducible(&poly(&q, &[-2, 0, 0, 0, 1])), Irreducibility::Yes);
        // (t^2 + 1)(t^2 + 2) has no rational root but factors
        assert_eq!(is_irreducible(&poly(&q, &[2, 0, 3, 0, 1])), Irreducibility::CannotCertify);
        assert_eq!(is_irreducible(&poly(&q, &[-6, 11, -6, 1])), Irreducibility::No);
    }

    #[test]
    fn ben_or_matches_exhaustive_search() {
        for p in [3u64, 5, 7] {
            let k = FieldDescriptor::prime(p).unwrap();
            for d in 2..=4u32 {
                for mut n in 0..p.pow(d) {
                    let mut c: Vec<i64> = (0..d)
                        .map(|_| {
                            let r = n % p;
                            n /= p;
                            r as i64
                        })
                        .collect();
                    c.push(1);
                    let m = poly(&k, &c);
                    let expected = if exhaustive_reducible(&m) { Irreducibility::No } else { Irreducibility::Yes };
                    assert_eq!(is_irreducible(&m), expected, "p={p} coeffs={c:?}");
                }
            }
        }
    }
}
