//! Exact arithmetic in Q, F_p (p odd) and simple extensions of either.
//!
//! A [`FieldDescriptor`] is a base field optionally adjoined with one
//! generator `a` of degree `d` over it. Elements are coordinate vectors in the
//! power basis `1, a, ..., a^(d-1)`; all arithmetic goes through the
//! descriptor, which keeps elements free of back-pointers.

mod irreducible;
mod scalar;
mod upoly;

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

pub use irreducible::{is_irreducible, Irreducibility};
pub use scalar::{BaseField, Scalar};
pub use upoly::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements or polynomials live over different fields")]
    DescriptorMismatch,
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the supported range")]
    PrimeTooLarge(u64),
    #[error("minimal polynomial must be monic of degree at least 1")]
    NotMonic,
    #[error("minimal polynomial is reducible")]
    Reducible,
    #[error("could not certify irreducibility of the minimal polynomial")]
    CannotCertify,
    #[error("minimal polynomial is not separable")]
    Inseparable,
    #[error("extensions of extensions are not supported")]
    NestedExtension,
    #[error("{0} does not embed into {1}")]
    IncompatibleFields(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Extension {
    generator: String,
    /// Ascending coefficients, monic, length `d + 1`.
    min_poly: Vec<Scalar>,
}

impl Extension {
    pub fn generator(&self) -> &str {
        &self.generator
    }

    pub fn min_poly(&self) -> &[Scalar] {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct Inner {
    base: BaseField,
    extension: Option<Extension>,
}

/// A base field with at most one adjoined generator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldDescriptor(Arc<Inner>);

/// Coordinates of an element in the power basis of its field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(Vec<Scalar>);

impl FieldElement {
    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }
}

impl FieldDescriptor {
    pub fn new(base: BaseField) -> Self {
        FieldDescriptor(Arc::new(Inner { base, extension: None }))
    }

    pub fn rationals() -> Self {
        Self::new(BaseField::Rationals)
    }

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Ok(Self::new(BaseField::prime(p)?))
    }

    /// Adjoins a root of `min_poly` (ascending base coefficients) to the
    /// base field. The polynomial must be monic, certified irreducible and
    /// separable.
    pub fn extension(
        base: BaseField,
        generator: impl Into<String>,
        min_poly: Vec<Scalar>,
    ) -> Result<Self, FieldError> {
        let base_field = Self::new(base);
        let m = UniPoly::new(
            &base_field,
            min_poly.iter().map(|c| FieldElement(vec![c.clone()])).collect(),
        );
        match m.degree() {
            Some(d) if d >= 1 && base_field.is_one(m.leading()) => {}
            _ => return Err(FieldError::NotMonic),
        }
        match is_irreducible(&m) {
            Irreducibility::Yes => {}
            Irreducibility::No => return Err(FieldError::Reducible),
            Irreducibility::CannotCertify => return Err(FieldError::CannotCertify),
        }
        if m.gcd(&m.derivative()).degree() != Some(0) {
            return Err(FieldError::Inseparable);
        }
        let min_poly = m.coeffs().iter().map(|c| c.0[0].clone()).collect();
        Ok(FieldDescriptor(Arc::new(Inner {
            base,
            extension: Some(Extension { generator: generator.into(), min_poly }),
        })))
    }

    pub fn base(&self) -> BaseField {
        self.0.base
    }

    /// The base field as a descriptor of its own.
    pub fn base_descriptor(&self) -> FieldDescriptor {
        if self.0.extension.is_none() {
            self.clone()
        } else {
            Self::new(self.0.base)
        }
    }

    pub fn extension_data(&self) -> Option<&Extension> {
        self.0.extension.as_ref()
    }

    pub fn is_extension(&self) -> bool {
        self.0.extension.is_some()
    }

    /// Degree over the base field.
    pub fn degree(&self) -> usize {
        self.0.extension.as_ref().map_or(1, Extension::degree)
    }

    pub fn characteristic(&self) -> u64 {
        self.0.base.characteristic()
    }

    /// Number of elements, for finite fields of manageable size.
    pub fn order(&self) -> Option<u128> {
        let p = self.characteristic();
        if p == 0 {
            return None;
        }
        (p as u128).checked_pow(self.degree() as u32)
    }

    /// `true` when every element of `other` has a canonical image here.
    pub fn extends(&self, other: &FieldDescriptor) -> bool {
        self == other || (!other.is_extension() && other.base() == self.base())
    }

    fn scalar_vec(&self, s: Scalar) -> FieldElement {
        let mut v = vec![self.0.base.zero(); self.degree()];
        v[0] = s;
        FieldElement(v)
    }

    pub fn zero(&self) -> FieldElement {
        self.scalar_vec(self.0.base.zero())
    }

    pub fn one(&self) -> FieldElement {
        self.scalar_vec(self.0.base.one())
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        self.scalar_vec(self.0.base.from_i64(n))
    }

    pub fn from_scalar(&self, s: Scalar) -> FieldElement {
        self.scalar_vec(s)
    }

    /// Element with the given power-basis coordinates.
    pub fn element(&self, coords: Vec<Scalar>) -> Result<FieldElement, FieldError> {
        if coords.len() != self.degree() {
            return Err(FieldError::DescriptorMismatch);
        }
        Ok(FieldElement(coords))
    }

    /// The adjoined generator, if any.
    pub fn generator(&self) -> Option<FieldElement> {
        let d = self.degree();
        self.0.extension.as_ref().map(|_| {
            let mut v = vec![self.0.base.zero(); d];
            if d == 1 {
                // degree-one extension: the generator is minus the constant term
                v[0] = self.0.base.neg(&self.0.extension.as_ref().unwrap().min_poly[0]);
            } else {
                v[1] = self.0.base.one();
            }
            FieldElement(v)
        })
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        a.0.iter().all(|c| self.0.base.is_zero(c))
    }

    pub fn is_one(&self, a: &FieldElement) -> bool {
        self.0.base.is_one(&a.0[0]) && a.0[1..].iter().all(|c| self.0.base.is_zero(c))
    }

    /// The base-field scalar of an element lying in the base field.
    pub fn as_base(&self, a: &FieldElement) -> Option<Scalar> {
        if a.0[1..].iter().all(|c| self.0.base.is_zero(c)) {
            Some(a.0[0].clone())
        } else {
            None
        }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let f = &self.0.base;
        FieldElement(a.0.iter().zip(&b.0).map(|(x, y)| f.add(x, y)).collect())
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let f = &self.0.base;
        FieldElement(a.0.iter().zip(&b.0).map(|(x, y)| f.sub(x, y)).collect())
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let f = &self.0.base;
        FieldElement(a.0.iter().map(|x| f.neg(x)).collect())
    }

    pub fn scale(&self, s: &Scalar, a: &FieldElement) -> FieldElement {
        let f = &self.0.base;
        FieldElement(a.0.iter().map(|x| f.mul(s, x)).collect())
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let f = &self.0.base;
        let Some(ext) = &self.0.extension else {
            return FieldElement(vec![f.mul(&a.0[0], &b.0[0])]);
        };
        let d = ext.degree();
        let mut prod = vec![f.zero(); 2 * d - 1];
        for (i, x) in a.0.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                prod[i + j] = f.add(&prod[i + j], &f.mul(x, y));
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = std::mem::replace(&mut prod[k], f.zero());
            if f.is_zero(&c) {
                continue;
            }
            for i in 0..d {
                let t = f.mul(&c, &ext.min_poly[i]);
                prod[k - d + i] = f.sub(&prod[k - d + i], &t);
            }
        }
        prod.truncate(d);
        FieldElement(prod)
    }

    pub fn pow(&self, a: &FieldElement, mut e: u128) -> FieldElement {
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

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        let f = &self.0.base;
        let Some(ext) = &self.0.extension else {
            return Ok(FieldElement(vec![f.inv(&a.0[0]).expect("nonzero")]));
        };
        // s*a + t*m = 1 in base[t]
        let bf = self.base_descriptor();
        let lift = |v: &[Scalar]| UniPoly::new(&bf, v.iter().map(|c| bf.from_scalar(c.clone())).collect());
        let (g, s, _) = lift(&a.0).ext_gcd(&lift(&ext.min_poly));
        debug_assert_eq!(g.degree(), Some(0));
        let s = s.scale(&bf.inv(g.leading())?);
        let mut coords = vec![f.zero(); ext.degree()];
        for (i, c) in s.coeffs().iter().enumerate() {
            coords[i] = c.0[0].clone();
        }
        Ok(FieldElement(coords))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Matrix of multiplication by `a` on the power basis, over the base
    /// field: column `j` holds the coordinates of `a * gen^j`.
    pub fn base_mult_matrix(&self, a: &FieldElement) -> Vec<Vec<Scalar>> {
        let d = self.degree();
        let mut cols = Vec::with_capacity(d);
        let mut basis_elt = self.one();
        let gen = self.generator().unwrap_or_else(|| self.one());
        for _ in 0..d {
            cols.push(self.mul(a, &basis_elt).0);
            basis_elt = self.mul(&basis_elt, &gen);
        }
        (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// Field trace down to the base field.
    pub fn trace_to_base(&self, a: &FieldElement) -> Scalar {
        let f = &self.0.base;
        let m = self.base_mult_matrix(a);
        (0..self.degree()).fold(f.zero(), |acc, i| f.add(&acc, &m[i][i]))
    }

    /// Least-degree monic polynomial over the base field annihilating `a`.
    pub fn min_poly_of(&self, a: &FieldElement) -> UniPoly {
        let bf = self.base_descriptor();
        let d = self.degree();
        let mut echelon = crate::linalg::Echelon::new(&bf, d);
        let mut power = self.one();
        loop {
            let v: Vec<FieldElement> = power.0.iter().map(|c| bf.from_scalar(c.clone())).collect();
            if let Some(dep) = echelon.push(v) {
                return UniPoly::new(&bf, dep);
            }
            power = self.mul(&power, a);
        }
    }

    /// Image of an element of `from` in this field.
    pub fn embed(&self, from: &FieldDescriptor, a: &FieldElement) -> Result<FieldElement, FieldError> {
        if from == self {
            return Ok(a.clone());
        }
        if !self.extends(from) {
            return Err(FieldError::IncompatibleFields(from.to_string(), self.to_string()));
        }
        Ok(self.scalar_vec(a.0[0].clone()))
    }

    /// Uniform-ish random element with small coordinates.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> FieldElement {
        let f = &self.0.base;
        FieldElement((0..self.degree()).map(|_| f.from_i64(rng.gen_range(-bound..=bound))).collect())
    }

    /// Enumerates all elements of a finite field, coordinates counting
    /// up lexicographically from the constant term.
    pub fn elements(&self) -> Option<Vec<FieldElement>> {
        let p = self.characteristic();
        let order = self.order()?;
        if p == 0 || order > 1 << 20 {
            return None;
        }
        let d = self.degree();
        Some(
            (0..order as u64)
                .map(|mut n| {
                    FieldElement(
                        (0..d)
                            .map(|_| {
                                let c = n % p;
                                n /= p;
                                Scalar::Residue(c)
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    /// Renders an element as a polynomial in the generator.
    pub fn format_element(&self, a: &FieldElement) -> String {
        let Some(ext) = &self.0.extension else {
            return a.0[0].to_string();
        };
        let f = &self.0.base;
        let mut terms = Vec::new();
        for (i, c) in a.0.iter().enumerate().rev() {
            if f.is_zero(c) {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => ext.generator.clone(),
                _ => format!("{}^{}", ext.generator, i),
            };
            let (negative, mag) = match (c, f) {
                (Scalar::Rational(q), _) if q < &num_rational::BigRational::from_integer(0.into()) => {
                    (true, Scalar::Rational(-q))
                }
                _ => (false, c.clone()),
            };
            let body = if mono.is_empty() {
                mag.to_string()
            } else if f.is_one(&mag) {
                mono
            } else {
                format!("{mag}*{mono}")
            };
            terms.push((negative, body));
        }
        if terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (negative, body)) in terms.into_iter().enumerate() {
            match (k, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.extension {
            None => write!(f, "{}", self.0.base),
            Some(ext) => {
                let bf = self.base_descriptor();
                let m = UniPoly::new(&bf, ext.min_poly.iter().map(|c| bf.from_scalar(c.clone())).collect());
                write!(f, "{}({} : {})", self.0.base, ext.generator, m.format_in(&ext.generator))
            }
        }
    }
}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::Rational(BigRational::new(n.into(), d.into()))
    }

    pub(crate) fn gaussian() -> FieldDescriptor {
        FieldDescriptor::extension(BaseField::Rationals, "i", vec![q(1, 1), q(0, 1), q(1, 1)]).unwrap()
    }

    fn f9() -> FieldDescriptor {
        let f3 = BaseField::prime(3).unwrap();
        FieldDescriptor::extension(f3, "a", vec![f3.from_i64(-2), f3.zero(), f3.one()]).unwrap()
    }

    fn cube_root_two() -> FieldDescriptor {
        FieldDescriptor::extension(BaseField::Rationals, "a", vec![q(-2, 1), q(0, 1), q(0, 1), q(1, 1)]).unwrap()
    }

    #[test]
    fn defining_relations() {
        let k = gaussian();
        let i = k.generator().unwrap();
        assert_eq!(k.mul(&i, &i), k.from_i64(-1));

        let k = f9();
        let a = k.generator().unwrap();
        assert_eq!(k.mul(&a, &a), k.from_i64(2));
    }

    #[test]
    fn gaussian_inverse() {
        let k = gaussian();
        let x = k.element(vec![q(1, 1), q(1, 1)]).unwrap();
        let inv = k.inv(&x).unwrap();
        assert_eq!(inv, k.element(vec![q(1, 2), q(-1, 2)]).unwrap());
        assert!(k.is_one(&k.mul(&x, &inv)));
        assert_eq!(k.inv(&k.zero()), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn traces() {
        let k = gaussian();
        assert_eq!(k.trace_to_base(&k.one()), q(2, 1));
        assert_eq!(k.trace_to_base(&k.generator().unwrap()), q(0, 1));
        let k = f9();
        assert_eq!(k.trace_to_base(&k.generator().unwrap()), Scalar::Residue(0));
        let k = cube_root_two();
        let a = k.generator().unwrap();
        assert_eq!(k.trace_to_base(&k.pow(&a, 3)), q(6, 1));
        assert_eq!(k.trace_to_base(&k.pow(&a, 6)), q(12, 1));
    }

    #[test]
    fn minimal_polynomials() {
        let k = gaussian();
        let bf = k.base_descriptor();
        let coeffs = |p: UniPoly| p.coeffs().iter().map(|c| bf.as_base(c).unwrap()).collect::<Vec<_>>();
        assert_eq!(coeffs(k.min_poly_of(&k.generator().unwrap())), vec![q(1, 1), q(0, 1), q(1, 1)]);
        assert_eq!(coeffs(k.min_poly_of(&k.zero())), vec![q(0, 1), q(1, 1)]);
        let x = k.element(vec![q(1, 1), q(1, 1)]).unwrap();
        assert_eq!(coeffs(k.min_poly_of(&x)), vec![q(2, 1), q(-2, 1), q(1, 1)]);
    }

    #[test]
    fn rejects_invalid_extensions() {
        let f3 = BaseField::prime(3).unwrap();
        let r = FieldDescriptor::extension(f3, "a", vec![f3.from_i64(-1), f3.zero(), f3.one()]);
        assert_eq!(r.unwrap_err(), FieldError::Reducible);
        let r = FieldDescriptor::extension(f3, "a", vec![f3.one(), f3.from_i64(2)]);
        assert_eq!(r.unwrap_err(), FieldError::NotMonic);
        // x^4 + 1 is reducible modulo every prime
        let r = FieldDescriptor::extension(BaseField::Rationals, "a", vec![q(1, 1), q(0, 1), q(0, 1), q(0, 1), q(1, 1)]);
        assert_eq!(r.unwrap_err(), FieldError::CannotCertify);
    }

    #[test]
    fn format() {
        let k = cube_root_two();
        let x = k.element(vec![q(-1, 2), q(0, 1), q(3, 1)]).unwrap();
        assert_eq!(k.format_element(&x), "3*a^2 - 1/2");
        assert_eq!(k.to_string(), "Q(a : a^3 - 2)");
    }

    fn fields() -> Vec<FieldDescriptor> {
        vec![FieldDescriptor::rationals(), gaussian(), cube_root_two(), f9(), FieldDescriptor::prime(7).unwrap()]
    }

    proptest! {
        #[test]
        fn trace_is_linear(seed in any::<u64>(), which in 0usize..5) {
            let k = &fields()[which];
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let x = k.random_element(&mut rng, 9);
            let y = k.random_element(&mut rng, 9);
            let c = k.base().from_i64(rng.gen_range(-9..=9));
            let bf = k.base();
            prop_assert_eq!(k.trace_to_base(&k.add(&x, &y)), bf.add(&k.trace_to_base(&x), &k.trace_to_base(&y)));
            prop_assert_eq!(k.trace_to_base(&k.scale(&c, &x)), bf.mul(&c, &k.trace_to_base(&x)));
        }

        #[test]
        fn inverse_and_min_poly(seed in any::<u64>(), which in 0usize..5) {
            let k = &fields()[which];
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let x = k.random_element(&mut rng, 9);
            if !k.is_zero(&x) {
                prop_assert!(k.is_one(&k.mul(&x, &k.inv(&x).unwrap())));
            }
            let m = k.min_poly_of(&x);
            let deg = m.degree().unwrap();
            prop_assert_eq!(k.degree() % deg, 0);
            let value = m.coeffs().iter().rev().fold(k.zero(), |acc, c| {
                k.add(&k.mul(&acc, &x), &k.from_scalar(c.coords()[0].clone()))
            });
            prop_assert!(k.is_zero(&value));
        }
    }
}
