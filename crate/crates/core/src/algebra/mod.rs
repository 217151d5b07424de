//! Zero-dimensional quotient algebras `k[x_1..x_n]/(f_1..f_n)`.
//!
//! An [`AlgebraPresentation`] carries a reduced Gröbner basis, the standard
//! monomials `e_1 = 1, e_2, ...` (sorted ascending by the order) and the
//! multiplication matrices of the variables. Elements are coordinate vectors
//! over the standard basis.

mod groebner;
mod localize;

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use thiserror::Error;

use crate::field::{FieldDescriptor, FieldElement, FieldError, UniPoly};
use crate::linalg::{Echelon, Matrix, Vector};
use crate::multipoly::{Monomial, MonomialOrder, MultiPoly, PolyError};

pub(crate) use groebner::SortedPoly;
pub use localize::{localize, separating_form, LocalFactor, SeparatingForm, MAX_SEPARATING_ATTEMPTS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("the ideal is the unit ideal: the map has no zeros")]
    IdealIsUnit,
    #[error("the zero set is not zero-dimensional: zeros are not isolated")]
    NotZeroDimensional,
    #[error("the point is not a zero of the system")]
    NotAZero,
    #[error("no separating linear form found after {attempts} attempts")]
    SeparatingFormNotFound { attempts: usize },
    #[error("the residue field of the point does not match the algebra")]
    ResidueFieldMismatch,
    #[error("linear form does not separate the point")]
    NotSeparating,
    #[error("system must have as many polynomials as variables")]
    NotSquare,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub struct AlgebraPresentation {
    field: FieldDescriptor,
    vars: Vec<String>,
    generators: Vec<MultiPoly>,
    order: MonomialOrder,
    groebner: Vec<SortedPoly>,
    std_basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    var_mats: Vec<Matrix>,
    structure: OnceLock<Vec<Matrix>>,
}

impl std::fmt::Debug for AlgebraPresentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AlgebraPresentation")
            .field("field", &self.field)
            .field("generators", &self.generators)
            .field("dim", &self.dim())
            .finish()
    }
}

/// Gröbner basis of `gens` under `order`, as ordinary polynomials sorted by
/// ascending leading monomial.
pub fn groebner(gens: &[MultiPoly], order: &MonomialOrder) -> Result<Vec<MultiPoly>, AlgebraError> {
    let first = gens.first().ok_or(AlgebraError::NotSquare)?;
    Ok(groebner::groebner(gens, order)?
        .iter()
        .map(|g| g.to_poly(first.field(), first.vars()))
        .collect())
}

/// Monomials outside the leading-term ideal of a Gröbner basis, ascending;
/// fails when there are infinitely many.
pub fn standard_basis(basis: &[MultiPoly], order: &MonomialOrder, nvars: usize) -> Result<Vec<Monomial>, AlgebraError> {
    let leads: Vec<Monomial> = basis
        .iter()
        .filter_map(|g| g.leading_term(order).map(|(m, _)| m.clone()))
        .collect();
    staircase(&leads, order, nvars)
}

fn staircase(leads: &[Monomial], order: &MonomialOrder, nvars: usize) -> Result<Vec<Monomial>, AlgebraError> {
    // every variable needs a pure power among the leading monomials
    for i in 0..nvars {
        let pure = leads.iter().any(|m| {
            m.exponents()[i] > 0 && m.exponents().iter().enumerate().all(|(j, &e)| j == i || e == 0)
        });
        if !pure {
            return Err(AlgebraError::NotZeroDimensional);
        }
    }
    let mut seen = BTreeSet::new();
    let mut frontier = vec![Monomial::one(nvars)];
    if leads.iter().any(|l| l.is_one()) {
        return Err(AlgebraError::IdealIsUnit);
    }
    while let Some(m) = frontier.pop() {
        if !seen.insert(m.clone()) {
            continue;
        }
        for i in 0..nvars {
            let next = m.mul(&Monomial::var(nvars, i));
            if !leads.iter().any(|l| l.divides(&next)) && !seen.contains(&next) {
                frontier.push(next);
            }
        }
    }
    let mut out: Vec<Monomial> = seen.into_iter().collect();
    out.sort_by(|a, b| order.cmp(a, b));
    Ok(out)
}

impl AlgebraPresentation {
    /// Builds the quotient by `generators` (n polynomials in n variables).
    pub fn new(generators: &[MultiPoly], order: MonomialOrder) -> Result<Self, AlgebraError> {
        let first = generators.first().ok_or(AlgebraError::NotSquare)?;
        let (field, vars) = (first.field().clone(), first.vars().to_vec());
        if generators.len() != vars.len() {
            return Err(AlgebraError::NotSquare);
        }
        if generators.iter().any(|g| g.field() != &field || g.vars() != vars.as_slice()) {
            return Err(PolyError::DescriptorMismatch.into());
        }
        let gb = groebner::groebner(generators, &order)?;
        if gb.is_empty() {
            return Err(AlgebraError::NotZeroDimensional);
        }
        let leads: Vec<Monomial> = gb.iter().map(|g| g.leading().unwrap().0.clone()).collect();
        let std_basis = staircase(&leads, &order, vars.len())?;
        let index = std_basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let mut alg = AlgebraPresentation {
            field,
            vars,
            generators: generators.to_vec(),
            order,
            groebner: gb,
            std_basis,
            index,
            var_mats: Vec::new(),
            structure: OnceLock::new(),
        };
        alg.var_mats = (0..alg.vars.len())
            .map(|i| alg.mult_matrix(&MultiPoly::var(&alg.field, &alg.vars, i)))
            .collect();
        Ok(alg)
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn groebner_basis(&self) -> Vec<MultiPoly> {
        self.groebner.iter().map(|g| g.to_poly(&self.field, &self.vars)).collect()
    }

    pub fn std_basis(&self) -> &[Monomial] {
        &self.std_basis
    }

    pub fn dim(&self) -> usize {
        self.std_basis.len()
    }

    /// Coordinates of the unit element.
    pub fn unit(&self) -> Vector {
        let mut v = vec![self.field.zero(); self.dim()];
        v[0] = self.field.one();
        v
    }

    /// Remainder of `p` under division by the Gröbner basis, in standard
    /// basis coordinates.
    pub fn normal_form(&self, p: &MultiPoly) -> Vector {
        let rem = groebner::reduce(&SortedPoly::from_poly(p, &self.order), &self.groebner, &self.field, &self.order);
        let mut v = vec![self.field.zero(); self.dim()];
        for (m, c) in rem.0 {
            v[self.index[&m]] = c;
        }
        v
    }

    /// The polynomial with the given standard-basis coordinates.
    pub fn to_poly(&self, v: &[FieldElement]) -> MultiPoly {
        MultiPoly::from_terms(&self.field, &self.vars, self.std_basis.iter().cloned().zip(v.iter().cloned()))
    }

    /// Matrix of multiplication by `g`: column `j` is `normal_form(g * e_j)`.
    pub fn mult_matrix(&self, g: &MultiPoly) -> Matrix {
        let cols: Vec<Vector> = self
            .std_basis
            .iter()
            .map(|e| self.normal_form(&g.mul_term(e, &self.field.one())))
            .collect();
        Matrix::from_columns(&self.field, self.dim(), &cols)
    }

    pub fn var_matrix(&self, i: usize) -> &Matrix {
        &self.var_mats[i]
    }

    /// Multiplication matrices of the standard monomials.
    pub fn structure(&self) -> &[Matrix] {
        self.structure.get_or_init(|| {
            let n = self.vars.len();
            let mut mats: Vec<Matrix> = Vec::with_capacity(self.dim());
            for (i, e) in self.std_basis.iter().enumerate() {
                if i == 0 {
                    mats.push(Matrix::identity(&self.field, self.dim()));
                    continue;
                }
                let j = (0..n).find(|&j| e.exponents()[j] > 0).unwrap();
                let prev = self.index[&e.div(&Monomial::var(n, j))];
                mats.push(self.var_mats[j].mul(&mats[prev]));
            }
            mats
        })
    }

    /// Multiplication matrix of the element with coordinates `a`.
    pub fn element_matrix(&self, a: &[FieldElement]) -> Matrix {
        let k = &self.field;
        let mut acc = Matrix::zeros(k, self.dim(), self.dim());
        for (c, m) in a.iter().zip(self.structure()) {
            if !k.is_zero(c) {
                acc = acc.add(&m.scale(c));
            }
        }
        acc
    }

    pub fn mul(&self, a: &[FieldElement], b: &[FieldElement]) -> Vector {
        let k = &self.field;
        let mut acc = vec![k.zero(); self.dim()];
        for (c, m) in a.iter().zip(self.structure()) {
            if k.is_zero(c) {
                continue;
            }
            for (x, y) in acc.iter_mut().zip(m.mul_vec(b)) {
                *x = k.add(x, &k.mul(c, &y));
            }
        }
        acc
    }

    /// Minimal polynomial of the element `a`, found as the first linear
    /// dependency among `1, a, a^2, ...`.
    pub fn element_min_poly(&self, a_matrix: &Matrix) -> UniPoly {
        let mut echelon = Echelon::new(&self.field, self.dim());
        let mut v = self.unit();
        loop {
            if let Some(dep) = echelon.push(v.clone()) {
                return UniPoly::new(&self.field, dep);
            }
            v = a_matrix.mul_vec(&v);
        }
    }

    /// `p(A) v` by Horner's rule.
    pub fn apply_poly(&self, p: &UniPoly, a_matrix: &Matrix, v: &[FieldElement]) -> Vector {
        let k = &self.field;
        let mut acc = vec![k.zero(); self.dim()];
        for c in p.coeffs().iter().rev() {
            acc = a_matrix.mul_vec(&acc);
            for (x, y) in acc.iter_mut().zip(v) {
                *x = k.add(x, &k.mul(c, y));
            }
        }
        acc
    }

    pub fn reducer(&self) -> MonomialReducer<'_> {
        MonomialReducer { alg: self, cache: HashMap::new() }
    }
}


/// Normal forms of monomials through the multiplication matrices, memoized.
pub struct MonomialReducer<'a> {
    alg: &'a AlgebraPresentation,
    cache: HashMap<Monomial, Vector>,
}

impl MonomialReducer<'_> {
    pub fn reduce(&mut self, m: &Monomial) -> Vector {
        if let Some(v) = self.cache.get(m) {
            return v.clone();
        }
        let alg = self.alg;
        let v = if let Some(&i) = alg.index.get(m) {
            let mut v = vec![alg.field.zero(); alg.dim()];
            v[i] = alg.field.one();
            v
        } else {
            let n = alg.vars.len();
            let j = (0..n).find(|&j| m.exponents()[j] > 0).expect("1 is always standard");
            let prev = self.reduce(&m.div(&Monomial::var(n, j)));
            alg.var_mats[j].mul_vec(&prev)
        };
        self.cache.insert(m.clone(), v.clone());
        v
    }
}
