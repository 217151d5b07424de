//! Dense univariate polynomials over a [`FieldDescriptor`].

use super::{FieldDescriptor, FieldElement};

/// Coefficients in ascending degree order; empty for zero, otherwise the
/// last coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    field: FieldDescriptor,
    coeffs: Vec<FieldElement>,
}

impl UniPoly {
    pub fn new(field: &FieldDescriptor, coeffs: Vec<FieldElement>) -> Self {
        let mut p = UniPoly { field: field.clone(), coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| self.field.is_zero(c)) {
            self.coeffs.pop();
        }
    }

    pub fn zero(field: &FieldDescriptor) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn constant(field: &FieldDescriptor, c: FieldElement) -> Self {
        Self::new(field, vec![c])
    }

    /// `t - c`
    pub fn linear_root(field: &FieldDescriptor, c: &FieldElement) -> Self {
        Self::new(field, vec![field.neg(c), field.one()])
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Leading coefficient; panics on the zero polynomial.
    pub fn leading(&self) -> &FieldElement {
        self.coeffs.last().expect("zero polynomial has no leading coefficient")
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let k = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = k.zero();
        let coeffs = (0..n)
            .map(|i| k.add(self.coeffs.get(i).unwrap_or(&zero), other.coeffs.get(i).unwrap_or(&zero)))
            .collect();
        UniPoly::new(k, coeffs)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::new(&self.field, self.coeffs.iter().map(|c| self.field.neg(c)).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElement) -> UniPoly {
        UniPoly::new(&self.field, self.coeffs.iter().map(|x| self.field.mul(x, c)).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(&self.field);
        }
        let k = &self.field;
        let mut out = vec![k.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if k.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = k.add(&out[i + j], &k.mul(a, b));
            }
        }
        UniPoly::new(k, out)
    }

    pub fn pow(&self, e: usize) -> UniPoly {
        let mut acc = UniPoly::constant(&self.field, self.field.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let k = &self.field;
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = k.inv(divisor.leading()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(k), self.clone());
        }
        let mut quot = vec![k.zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = k.mul(&rem[i], &lead_inv);
            if k.is_zero(&c) {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] = k.sub(&rem[i - dd + j], &k.mul(&c, b));
            }
            quot[i - dd] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(k, quot), UniPoly::new(k, rem))
    }

    pub fn rem(&self, divisor: &UniPoly) -> UniPoly {
        self.divrem(divisor).1
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.field.inv(self.leading()).expect("nonzero"))
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` not normalized.
    pub fn ext_gcd(&self, other: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
        let k = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (UniPoly::constant(k, k.one()), UniPoly::zero(k));
        let (mut t0, mut t1) = (UniPoly::zero(k), UniPoly::constant(k, k.one()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
            (t0, t1) = (t1, t);
        }
        (r0, s0, t0)
    }

    /// Inverse modulo `modulus`, when `self` is a unit there.
    pub fn inv_mod(&self, modulus: &UniPoly) -> Option<UniPoly> {
        let (g, s, _) = self.rem(modulus).ext_gcd(modulus);
        if g.degree() != Some(0) {
            return None;
        }
        Some(s.scale(&self.field.inv(g.leading()).ok()?).rem(modulus))
    }

    pub fn derivative(&self) -> UniPoly {
        let k = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| k.mul(&k.from_i64(i as i64), c))
            .collect();
        UniPoly::new(k, coeffs)
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let k = &self.field;
        self.coeffs.iter().rev().fold(k.zero(), |acc, c| k.add(&k.mul(&acc, x), c))
    }

    /// `self^e mod modulus` by square-and-multiply.
    pub fn pow_mod(&self, mut e: u128, modulus: &UniPoly) -> UniPoly {
        let mut base = self.rem(modulus);
        let mut acc = UniPoly::constant(&self.field, self.field.one()).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    /// Human-readable form in the variable `var`.
    pub fn format_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let k = &self.field;
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if k.is_zero(c) {
                continue;
            }
            let mut cs = k.format_element(c);
            let negative = cs.starts_with('-') && !cs[1..].contains([' ']);
            if negative {
                cs.remove(0);
            }
            let compound = cs.contains(' ');
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let body = if mono.is_empty() {
                if compound { format!("({cs})") } else { cs }
            } else if cs == "1" {
                mono
            } else if compound {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}
