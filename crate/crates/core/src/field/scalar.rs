//! Base fields: the rationals and odd prime fields.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::FieldError;

/// A scalar of a base field. Rationals are kept in lowest terms,
/// residues as least nonnegative representatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rational(BigRational),
    Residue(u64),
}

/// The prime field of a [`super::FieldDescriptor`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseField {
    Rationals,
    Prime(u64),
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl BaseField {
    /// F_p for an odd prime `p`. Characteristic 2 is refused.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p == 2 {
            return Err(FieldError::CharacteristicTwo);
        }
        if !is_prime_u64(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p > u32::MAX as u64 {
            return Err(FieldError::PrimeTooLarge(p));
        }
        Ok(BaseField::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            BaseField::Rationals => 0,
            BaseField::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            BaseField::Rationals => Scalar::Rational(BigRational::from_integer(n.clone())),
            BaseField::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                Scalar::Residue(r.to_u64().expect("residue fits u64"))
            }
        }
    }

    /// Maps a rational into this field; fails over F_p when the
    /// denominator vanishes modulo p.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar, FieldError> {
        match self {
            BaseField::Rationals => Ok(Scalar::Rational(q.clone())),
            BaseField::Prime(_) => {
                let num = self.from_bigint(q.numer());
                let den = self.from_bigint(q.denom());
                let inv = self.inv(&den).ok_or(FieldError::DivisionByZero)?;
                Ok(self.mul(&num, &inv))
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue(r) => *r == 0,
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue(r) => *r == 1,
        }
    }

    fn modulus(&self) -> u64 {
        match self {
            BaseField::Prime(p) => *p,
            BaseField::Rationals => unreachable!("residue arithmetic over Q"),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            (Scalar::Residue(x), Scalar::Residue(y)) => Scalar::Residue((x + y) % self.modulus()),
            _ => panic!("mixed scalar kinds"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Rational(x) => Scalar::Rational(-x),
            Scalar::Residue(x) => Scalar::Residue((self.modulus() - x) % self.modulus()),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            (Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue(((*x as u128 * *y as u128) % self.modulus() as u128) as u64)
            }
            _ => panic!("mixed scalar kinds"),
        }
    }

    pub fn pow(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        Some(match a {
            Scalar::Rational(x) => Scalar::Rational(x.recip()),
            Scalar::Residue(x) => {
                let p = self.modulus() as i128;
                let (mut r0, mut r1) = (p, *x as i128);
                let (mut s0, mut s1) = (0i128, 1i128);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (s0, s1) = (s1, s0 - q * s1);
                }
                Scalar::Residue(s0.rem_euclid(p) as u64)
            }
        })
    }

    /// Lifts a scalar to a rational number: residues map to their least
    /// nonnegative representative.
    pub fn to_rational(&self, a: &Scalar) -> BigRational {
        match a {
            Scalar::Rational(q) => q.clone(),
            Scalar::Residue(r) => BigRational::from_integer(BigInt::from(*r)),
        }
    }

    /// Enumerates the elements of a prime field in order `0, 1, ..., p-1`.
    pub fn elements(&self) -> Option<impl Iterator<Item = Scalar>> {
        match self {
            BaseField::Rationals => None,
            BaseField::Prime(p) => Some((0..*p).map(Scalar::Residue)),
        }
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rationals => write!(f, "Q"),
            BaseField::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Residue(r) => write!(f, "{r}"),
        }
    }
}

impl Scalar {
    /// Sign of a rational scalar; residues have no sign.
    pub fn signum(&self) -> Option<i32> {
        match self {
            Scalar::Rational(q) if q.is_zero() => Some(0),
            Scalar::Rational(q) => Some(if q.is_positive() { 1 } else { -1 }),
            Scalar::Residue(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Residue(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_characteristics() {
        assert!(matches!(BaseField::prime(2), Err(FieldError::CharacteristicTwo)));
        assert!(matches!(BaseField::prime(9), Err(FieldError::NotPrime(9))));
        assert!(BaseField::prime(7).is_ok());
    }

    #[test]
    fn residue_inverse() {
        let f = BaseField::prime(7).unwrap();
        for a in 1..7 {
            let x = Scalar::Residue(a);
            let y = f.inv(&x).unwrap();
            assert!(f.is_one(&f.mul(&x, &y)));
        }
        assert!(f.inv(&Scalar::Residue(0)).is_none());
    }

    #[test]
    fn rational_into_prime_field() {
        let f = BaseField::prime(5).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f.from_rational(&half).unwrap(), Scalar::Residue(3));
        let fifth = BigRational::new(1.into(), 5.into());
        assert!(f.from_rational(&fifth).is_err());
        assert_eq!(f.from_i64(-1), Scalar::Residue(4));
    }
}
