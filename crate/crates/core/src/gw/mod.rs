//! The Grothendieck–Witt ring: diagonal classes, their invariants, and
//! equality decisions.
//!
//! Over a finite field of odd order a nondegenerate form is determined by
//! rank and determinant. Over the rationals the Hasse–Minkowski theorem
//! makes rank, signature, determinant and the Hasse–Witt invariants at all
//! places a complete set (see Lam, *Introduction to Quadratic Forms over
//! Fields*, Ch. VI). Elsewhere we only decide what those invariants can.

mod hilbert;
mod square;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use thiserror::Error;

use crate::field::{BaseField, FieldDescriptor, FieldElement};
use crate::linalg::Matrix;
use crate::scheja_storch::GramMatrix;

pub use hilbert::{hilbert_symbol, primes_of, Place};
pub use square::{fixed_nonsquare, is_square, reduce_square_class, same_square_class, SquareTest};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GwError {
    #[error("the form is degenerate")]
    DegenerateForm,
    #[error("diagonal entries must be nonzero")]
    ZeroEntry,
    #[error("classes live over different fields: {0} and {1}")]
    DescriptorMismatch(String, String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Equal,
    NotEqual,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equal => "Equal",
            Verdict::NotEqual => "NotEqual",
            Verdict::Undecided => "Undecided",
        })
    }
}

/// A diagonal class `<u_1, ..., u_r>` with reduced square-class entries.
#[derive(Clone, PartialEq, Eq)]
pub struct GWClass {
    field: FieldDescriptor,
    diagonal: Vec<FieldElement>,
}

impl GWClass {
    pub fn new(field: &FieldDescriptor, entries: &[FieldElement]) -> Result<Self, GwError> {
        if entries.iter().any(|u| field.is_zero(u)) {
            return Err(GwError::ZeroEntry);
        }
        let diagonal = entries.iter().map(|u| reduce_square_class(field, u)).collect();
        Ok(GWClass { field: field.clone(), diagonal })
    }

    pub fn from_i64(field: &FieldDescriptor, entries: &[i64]) -> Result<Self, GwError> {
        let entries: Vec<FieldElement> = entries.iter().map(|&x| field.from_i64(x)).collect();
        GWClass::new(field, &entries)
    }

    pub fn zero(field: &FieldDescriptor) -> Self {
        GWClass { field: field.clone(), diagonal: Vec::new() }
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn diagonal(&self) -> &[FieldElement] {
        &self.diagonal
    }

    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    fn check_same(&self, other: &GWClass) -> Result<(), GwError> {
        if self.field != other.field {
            return Err(GwError::DescriptorMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, other: &GWClass) -> Result<GWClass, GwError> {
        self.check_same(other)?;
        let mut diagonal = self.diagonal.clone();
        diagonal.extend(other.diagonal.iter().cloned());
        Ok(GWClass { field: self.field.clone(), diagonal })
    }

    pub fn tensor(&self, other: &GWClass) -> Result<GWClass, GwError> {
        self.check_same(other)?;
        let k = &self.field;
        let products: Vec<FieldElement> =
            self.diagonal.iter().flat_map(|a| other.diagonal.iter().map(move |b| k.mul(a, b))).collect();
        GWClass::new(k, &products)
    }

    /// The diagonal Gram matrix of the class.
    pub fn gram(&self) -> Matrix {
        let k = &self.field;
        let mut m = Matrix::zeros(k, self.rank(), self.rank());
        for (i, u) in self.diagonal.iter().enumerate() {
            m.set(i, i, u.clone());
        }
        m
    }

    pub fn format_entries(&self) -> Vec<String> {
        self.diagonal.iter().map(|u| self.field.format_element(u)).collect()
    }
}

impl fmt::Display for GWClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.format_entries().join(", "))
    }
}

impl fmt::Debug for GWClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GWClass[{}]{self}", self.field)
    }
}

/// A diagonal form congruent to a Gram matrix, with the congruence.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    pub class: GWClass,
    /// Diagonal of `P^T G P` before square-class reduction.
    pub entries: Vec<FieldElement>,
    pub certificate: Matrix,
}

/// Symmetric Gaussian elimination. The certificate `P` is checked to
/// satisfy `P^T G P = diag(entries)` before returning.
pub fn diagonalize(g: &GramMatrix) -> Result<Diagonalization, GwError> {
    diagonalize_matrix(&g.entries)
}

pub fn diagonalize_matrix(g: &Matrix) -> Result<Diagonalization, GwError> {
    assert!(g.is_symmetric(), "only symmetric matrices are diagonalized");
    assert!(g.field().characteristic() != 2);
    let k = g.field().clone();
    let n = g.rows();
    let mut a = g.clone();
    let mut p = Matrix::identity(&k, n);

    // column op c_i += s*c_j together with the matching row op
    let add_to = |a: &mut Matrix, p: &mut Matrix, i: usize, j: usize, s: &FieldElement| {
        for r in 0..n {
            let v = k.add(a.get(r, i), &k.mul(s, a.get(r, j)));
            a.set(r, i, v);
            let v = k.add(p.get(r, i), &k.mul(s, p.get(r, j)));
            p.set(r, i, v);
        }
        for c in 0..n {
            let v = k.add(a.get(i, c), &k.mul(s, a.get(j, c)));
            a.set(i, c, v);
        }
    };

    let swap = |a: &mut Matrix, p: &mut Matrix, i: usize, j: usize| {
        for r in 0..n {
            let (x, y) = (a.get(r, i).clone(), a.get(r, j).clone());
            a.set(r, i, y);
            a.set(r, j, x);
            let (x, y) = (p.get(r, i).clone(), p.get(r, j).clone());
            p.set(r, i, y);
            p.set(r, j, x);
        }
        for c in 0..n {
            let (x, y) = (a.get(i, c).clone(), a.get(j, c).clone());
            a.set(i, c, y);
            a.set(j, c, x);
        }
    };

    for i in 0..n {
        if k.is_zero(a.get(i, i)) {
            if let Some(j) = (i + 1..n).find(|&j| !k.is_zero(a.get(j, j))) {
                swap(&mut a, &mut p, i, j);
            } else if let Some(j) = (i + 1..n).find(|&j| !k.is_zero(a.get(i, j))) {
                add_to(&mut a, &mut p, i, j, &k.one());
            } else {
                return Err(GwError::DegenerateForm);
            }
        }
        if k.is_zero(a.get(i, i)) {
            return Err(GwError::DegenerateForm);
        }
        let pivot = a.get(i, i).clone();
        for j in i + 1..n {
            if k.is_zero(a.get(i, j)) {
                continue;
            }
            let s = k.neg(&k.div(a.get(i, j), &pivot).unwrap());
            add_to(&mut a, &mut p, j, i, &s);
        }
    }
    let entries: Vec<FieldElement> = (0..n).map(|i| a.get(i, i).clone()).collect();
    let class = GWClass::new(&k, &entries)?;
    let check = p.transpose().mul(g).mul(&p);
    assert_eq!(check, class_matrix(&k, &entries), "congruence certificate failed");
    Ok(Diagonalization { class, entries, certificate: p })
}

fn class_matrix(k: &FieldDescriptor, entries: &[FieldElement]) -> Matrix {
    let mut m = Matrix::zeros(k, entries.len(), entries.len());
    for (i, u) in entries.iter().enumerate() {
        m.set(i, i, u.clone());
    }
    m
}

/// Numerical invariants of a class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GWInvariants {
    pub rank: usize,
    /// Square class of the (unsigned) determinant.
    pub det_square_class: FieldElement,
    /// Present over the rationals only.
    pub signature: Option<i64>,
    /// Present over the rationals only; places not listed have invariant +1.
    pub hasse_witt: Option<BTreeMap<Place, i32>>,
}

impl GWInvariants {
    /// `(-1)^(r(r-1)/2) * det`, reduced.
    pub fn signed_discriminant(&self, k: &FieldDescriptor) -> FieldElement {
        let r = self.rank as u64;
        let d = if (r * r.saturating_sub(1) / 2) % 2 == 1 {
            k.neg(&self.det_square_class)
        } else {
            self.det_square_class.clone()
        };
        reduce_square_class(k, &d)
    }
}

fn rationals_of(c: &GWClass) -> Option<Vec<BigRational>> {
    if c.field.base() != BaseField::Rationals || c.field.is_extension() {
        return None;
    }
    Some(c.diagonal.iter().map(|u| c.field.as_base(u).unwrap().as_rational().unwrap().clone()).collect())
}

/// Infinity, 2, and the primes dividing some entry.
pub fn relevant_places(entries: &[BigRational]) -> BTreeSet<Place> {
    let mut out: BTreeSet<Place> = entries.iter().flat_map(primes_of).map(Place::Prime).collect();
    out.insert(Place::Prime(BigUint::from(2u32)));
    out.insert(Place::Infinity);
    out
}

/// `prod_{i<j} (u_i, u_j)_v`.
pub fn hasse_witt(entries: &[BigRational], place: &Place) -> i32 {
    let mut s = 1;
    for i in 0..entries.len() {
        for j in i + 1..entries.len() {
            s *= hilbert_symbol(&entries[i], &entries[j], place);
        }
    }
    s
}

pub fn invariants(c: &GWClass) -> GWInvariants {
    let k = &c.field;
    let det = c.diagonal.iter().fold(k.one(), |acc, u| k.mul(&acc, u));
    let det_square_class = reduce_square_class(k, &det);
    let (signature, hasse_witt) = match rationals_of(c) {
        Some(qs) => {
            let sig = qs.iter().map(|q| if q > &BigRational::from_integer(BigInt::from(0)) { 1 } else { -1 }).sum();
            let hw = relevant_places(&qs).into_iter().map(|v| {
                let s = hasse_witt(&qs, &v);
                (v, s)
            });
            (Some(sig), Some(hw.collect()))
        }
        None => (None, None),
    };
    GWInvariants { rank: c.rank(), det_square_class, signature, hasse_witt }
}

/// Decides equality in GW(k) as far as the field allows.
pub fn gw_equal(c1: &GWClass, c2: &GWClass) -> Result<Verdict, GwError> {
    c1.check_same(c2)?;
    let k = &c1.field;
    if c1.rank() != c2.rank() {
        return Ok(Verdict::NotEqual);
    }
    if c1.rank() == 0 {
        return Ok(Verdict::Equal);
    }
    let det = |c: &GWClass| c.diagonal.iter().fold(k.one(), |acc, u| k.mul(&acc, u));
    let det_test = same_square_class(k, &det(c1), &det(c2));
    if det_test == SquareTest::No {
        return Ok(Verdict::NotEqual);
    }
    if k.order().is_some() {
        return Ok(Verdict::Equal);
    }
    if let (Some(q1), Some(q2)) = (rationals_of(c1), rationals_of(c2)) {
        let i1 = invariants(c1);
        let i2 = invariants(c2);
        if i1.signature != i2.signature {
            return Ok(Verdict::NotEqual);
        }
        let mut places = relevant_places(&q1);
        places.extend(relevant_places(&q2));
        let same = places.iter().all(|v| hasse_witt(&q1, v) == hasse_witt(&q2, v));
        return Ok(if same { Verdict::Equal } else { Verdict::NotEqual });
    }
    // extensions of the rationals: only literal agreement up to order and
    // entry-wise square classes is recognized
    if det_test == SquareTest::Yes && same_multiset(k, &c1.diagonal, &c2.diagonal) {
        return Ok(Verdict::Equal);
    }
    Ok(Verdict::Undecided)
}

fn same_multiset(k: &FieldDescriptor, a: &[FieldElement], b: &[FieldElement]) -> bool {
    let mut used = vec![false; b.len()];
    a.iter().all(|x| {
        let hit = b
            .iter()
            .enumerate()
            .find(|(j, y)| !used[*j] && same_square_class(k, x, y) == SquareTest::Yes)
            .map(|(j, _)| j);
        if let Some(j) = hit {
            used[j] = true;
        }
        hit.is_some()
    })
}
