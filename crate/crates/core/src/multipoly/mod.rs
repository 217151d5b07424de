//! Sparse multivariate polynomials over a [`FieldDescriptor`].

mod order;
mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldDescriptor, FieldElement, FieldError};

pub use order::{MonomialOrder, OrderKind};
pub use parse::{parse, parse_with_limits, ParseLimits};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials live over different fields or variable sets")]
    DescriptorMismatch,
    #[error("{0} does not embed into {1}")]
    IncompatibleFields(String, String),
    #[error("division is not exact")]
    InexactDivision,
    #[error("syntax error at offset {position}: {message}")]
    SyntaxError { position: usize, message: String },
    #[error("unknown symbol `{name}` at offset {position}")]
    UnknownSymbol { position: usize, name: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Exponent vector, one entry per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn format(&self, vars: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(vars)
            .filter(|(e, _)| **e > 0)
            .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Sparse polynomial: a map from monomials to nonzero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: FieldDescriptor,
    vars: Arc<[String]>,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl MultiPoly {
    pub fn zero(field: &FieldDescriptor, vars: &[String]) -> Self {
        MultiPoly { field: field.clone(), vars: vars.into(), terms: BTreeMap::new() }
    }

    fn empty_like(&self) -> Self {
        MultiPoly { field: self.field.clone(), vars: self.vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(field: &FieldDescriptor, vars: &[String], c: FieldElement) -> Self {
        let mut p = Self::zero(field, vars);
        p.add_term(Monomial::one(vars.len()), c);
        p
    }

    pub fn one(field: &FieldDescriptor, vars: &[String]) -> Self {
        Self::constant(field, vars, field.one())
    }

    pub fn var(field: &FieldDescriptor, vars: &[String], i: usize) -> Self {
        let mut p = Self::zero(field, vars);
        p.add_term(Monomial::var(vars.len(), i), field.one());
        p
    }

    pub fn from_terms(
        field: &FieldDescriptor,
        vars: &[String],
        terms: impl IntoIterator<Item = (Monomial, FieldElement)>,
    ) -> Self {
        let mut p = Self::zero(field, vars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), vars.len(), "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c * m` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: FieldElement) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = self.field.add(e.get(), &c);
                if self.field.is_zero(&s) {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElement {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Constant term when the polynomial is constant.
    pub fn as_constant(&self) -> Option<FieldElement> {
        match self.terms.len() {
            0 => Some(self.field.zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn check_compatible(&self, other: &MultiPoly) -> Result<(), PolyError> {
        if self.field != other.field || self.vars != other.vars {
            return Err(PolyError::DescriptorMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> MultiPoly {
        let mut out = self.empty_like();
        out.terms = self.terms.iter().map(|(m, c)| (m.clone(), self.field.neg(c))).collect();
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElement) -> MultiPoly {
        let mut out = self.empty_like();
        if self.field.is_zero(c) {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, x)| (m.clone(), self.field.mul(x, c))).collect();
        out
    }

    pub fn mul_term(&self, m: &Monomial, c: &FieldElement) -> MultiPoly {
        let mut out = self.empty_like();
        if self.field.is_zero(c) {
            return out;
        }
        out.terms = self.terms.iter().map(|(n, x)| (n.mul(m), self.field.mul(x, c))).collect();
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.empty_like();
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                out.add_term(m.mul(n), self.field.mul(a, b));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = MultiPoly::one(&self.field, &self.vars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// Leading monomial and coefficient under `order`.
    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &FieldElement)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    /// Evaluates at a point whose coordinates live in a field extending the
    /// coefficient field.
    pub fn evaluate(&self, point_field: &FieldDescriptor, point: &[FieldElement]) -> Result<FieldElement, PolyError> {
        if point.len() != self.nvars() || point.iter().any(|c| c.coords().len() != point_field.degree()) {
            return Err(PolyError::DescriptorMismatch);
        }
        let k = point_field;
        let mut powers: Vec<Vec<FieldElement>> = point.iter().map(|x| vec![k.one(), x.clone()]).collect();
        let mut acc = k.zero();
        for (m, c) in &self.terms {
            let mut term = k.embed(&self.field, c).map_err(|_| self.incompatible(k))?;
            for (i, &e) in m.exponents().iter().enumerate() {
                let pw = &mut powers[i];
                while pw.len() <= e as usize {
                    let next = k.mul(pw.last().unwrap(), &point[i]);
                    pw.push(next);
                }
                term = k.mul(&term, &pw[e as usize]);
            }
            acc = k.add(&acc, &term);
        }
        Ok(acc)
    }

    fn incompatible(&self, target: &FieldDescriptor) -> PolyError {
        PolyError::IncompatibleFields(self.field.to_string(), target.to_string())
    }

    /// Same monomials with coefficients embedded into `target`.
    pub fn base_change(&self, target: &FieldDescriptor) -> Result<MultiPoly, PolyError> {
        if !target.extends(&self.field) {
            return Err(self.incompatible(target));
        }
        let mut out = MultiPoly::zero(target, &self.vars);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), target.embed(&self.field, c)?);
        }
        Ok(out)
    }

    /// Moves variable `i` to position `map[i]` of a new variable list.
    pub fn remap(&self, vars: &[String], map: &[usize]) -> MultiPoly {
        assert_eq!(map.len(), self.nvars());
        let mut out = MultiPoly::zero(&self.field, vars);
        for (m, c) in &self.terms {
            let mut e = vec![0; vars.len()];
            for (i, &x) in m.exponents().iter().enumerate() {
                e[map[i]] += x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Quotient of an exact division; fails with `InexactDivision` if `den`
    /// does not divide `self`.
    pub fn exact_divide(&self, den: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_compatible(den)?;
        let order = MonomialOrder::grevlex(self.nvars());
        let (lm, lc) = den.leading_term(&order).ok_or(PolyError::Field(FieldError::DivisionByZero))?;
        let (lm, lc_inv) = (lm.clone(), self.field.inv(lc)?);
        let mut rem = self.clone();
        let mut quot = self.empty_like();
        while let Some((m, c)) = rem.leading_term(&order) {
            if !lm.divides(m) {
                return Err(PolyError::InexactDivision);
            }
            let qm = m.div(&lm);
            let qc = self.field.mul(c, &lc_inv);
            rem = rem.sub(&den.mul_term(&qm, &qc))?;
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }

    /// Canonical text form, terms in descending `order`.
    pub fn format_with(&self, order: &MonomialOrder) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| order.cmp(b.0, a.0));
        let mut out = String::new();
        for (m, c) in terms {
            let mut cs = self.field.format_element(c);
            let negative = cs.starts_with('-') && !cs.contains(' ');
            if negative {
                cs.remove(0);
            }
            let compound = cs.contains(' ');
            let body = if m.is_one() {
                if compound { format!("({cs})") } else { cs }
            } else if cs == "1" {
                m.format(&self.vars)
            } else if compound {
                format!("({cs})*{}", m.format(&self.vars))
            } else {
                format!("{cs}*{}", m.format(&self.vars))
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

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> MultiPoly {
        let mut out = self.empty_like();
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[i] -= 1;
            out.add_term(Monomial(exps), self.field.mul(c, &self.field.from_i64(e as i64)));
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&MonomialOrder::grevlex(self.nvars())))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({self})", self.field)
    }
}

/// Determinant of a square matrix of polynomials by cofactor expansion.
pub fn poly_det(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n));
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = m[0][0].empty_like();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<MultiPoly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = m[0][j].mul(&poly_det(&minor)).expect("same ring");
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) }.expect("same ring");
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{BaseField, Scalar};
    use proptest::prelude::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn p(k: &FieldDescriptor, v: &[String], s: &str) -> MultiPoly {
        parse(s, v, k).unwrap()
    }

    #[test]
    fn ring_examples() {
        let k = FieldDescriptor::rationals();
        let v = vars(&["x", "y"]);
        let a = p(&k, &v, "x + y").mul(&p(&k, &v, "x - y")).unwrap();
        assert_eq!(a, p(&k, &v, "x^2 - y^2"));
        assert_eq!(a.add(&MultiPoly::zero(&k, &v)).unwrap(), a);

        let f3 = FieldDescriptor::prime(3).unwrap();
        let v1 = vars(&["x"]);
        assert_eq!(p(&f3, &v1, "x + 1").pow(3), p(&f3, &v1, "x^3 + 1"));
    }

    #[test]
    fn evaluation() {
        let q = FieldDescriptor::rationals();
        let one = q.one();
        let v = vars(&["x", "y"]);
        assert_eq!(p(&q, &v, "x^2 + y^2").evaluate(&q, &[one.clone(), one]).unwrap(), q.from_i64(2));

        let qi = FieldDescriptor::extension(BaseField::Rationals, "i", vec![q.base().one(), q.base().zero(), q.base().one()]).unwrap();
        let v1 = vars(&["x"]);
        let i = qi.generator().unwrap();
        assert!(qi.is_zero(&p(&q, &v1, "x^2 + 1").evaluate(&qi, &[i]).unwrap()));

        let r = q.base();
        let c = FieldDescriptor::extension(BaseField::Rationals, "a", vec![r.from_i64(-2), r.zero(), r.zero(), r.one()]).unwrap();
        assert!(c.is_zero(&p(&q, &v1, "x^3 - 2").evaluate(&c, &[c.generator().unwrap()]).unwrap()));
    }

    #[test]
    fn base_change_factorization() {
        let f3 = FieldDescriptor::prime(3).unwrap();
        let b = f3.base();
        let f9 = FieldDescriptor::extension(b, "a", vec![b.from_i64(-2), b.zero(), b.one()]).unwrap();
        let v = vars(&["x"]);
        let f = p(&f3, &v, "x^2 - 2").base_change(&f9).unwrap();
        let prod = p(&f9, &v, "x - a").mul(&p(&f9, &v, "x + a")).unwrap();
        assert_eq!(f, prod);
        assert_eq!(p(&f3, &v, "x^2 - 2").base_change(&f3).unwrap(), p(&f3, &v, "x^2 - 2"));
        assert!(matches!(f.base_change(&f3), Err(PolyError::IncompatibleFields(..))));
    }

    #[test]
    fn exact_division() {
        let k = FieldDescriptor::rationals();
        let v = vars(&["X", "Y"]);
        let d = p(&k, &v, "X - Y");
        assert_eq!(p(&k, &v, "X^2 - Y^2").exact_divide(&d).unwrap(), p(&k, &v, "X + Y"));
        assert_eq!(p(&k, &v, "X^3 - Y^3").exact_divide(&d).unwrap(), p(&k, &v, "X^2 + X*Y + Y^2"));
        let f = p(&k, &v, "X^2*Y + 3");
        assert_eq!(f.exact_divide(&MultiPoly::one(&k, &v)).unwrap(), f);
        assert_eq!(p(&k, &v, "X^2 + Y").exact_divide(&d), Err(PolyError::InexactDivision));
    }

    #[test]
    fn determinant_of_polys() {
        let k = FieldDescriptor::rationals();
        let v = vars(&["x", "y"]);
        let m = vec![vec![p(&k, &v, "x"), p(&k, &v, "y")], vec![p(&k, &v, "1"), p(&k, &v, "x")]];
        assert_eq!(poly_det(&m), p(&k, &v, "x^2 - y"));
    }

    fn arb_poly(k: FieldDescriptor, v: Vec<String>) -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec(((0u32..3, 0u32..3), -5i64..=5), 0..5).prop_map(move |ts| {
            MultiPoly::from_terms(&k, &v, ts.into_iter().map(|((a, b), c)| (Monomial::new(vec![a, b]), k.from_i64(c))))
        })
    }

    fn qpolys() -> impl Strategy<Value = MultiPoly> {
        arb_poly(FieldDescriptor::rationals(), vars(&["x", "y"]))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in qpolys(), b in qpolys(), c in qpolys()) {
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        }

        #[test]
        fn divide_product(a in qpolys(), b in qpolys()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!(a.mul(&b).unwrap().exact_divide(&b).unwrap(), a);
        }

        #[test]
        fn print_parse_round_trip(a in qpolys()) {
            let text = a.to_string();
            prop_assert_eq!(parse(&text, a.vars(), a.field()).unwrap(), a);
        }

        #[test]
        fn evaluation_commutes_with_base_change(a in qpolys(), x in -4i64..4, y in -4i64..4, s in -3i64..3) {
            let q = a.field().clone();
            let r = q.base();
            let qi = FieldDescriptor::extension(BaseField::Rationals, "i", vec![r.one(), r.zero(), r.one()]).unwrap();
            let pt = vec![
                qi.element(vec![r.from_i64(x), r.from_i64(s)]).unwrap(),
                qi.element(vec![r.from_i64(y), Scalar::Rational(num_rational::BigRational::new(1.into(), 2.into()))]).unwrap(),
            ];
            prop_assert_eq!(a.base_change(&qi).unwrap().evaluate(&qi, &pt).unwrap(), a.evaluate(&qi, &pt).unwrap());
        }
    }
}
