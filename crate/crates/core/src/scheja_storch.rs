//! The Bézoutian of a square polynomial system and the bilinear form it
//! induces on the quotient algebra.
//!
//! With `B` the coefficient matrix of the reduced Bézoutian in the standard
//! basis, the functional `lambda = u * B^-1` (`u` the coordinates of 1)
//! generates the dual of the algebra, and the form `(a, b) -> lambda(a * b)`
//! is the one we diagonalize. Its Gram matrix in the standard basis is
//! `B^-1`, which is congruent to `B`; both are kept so that one can check
//! the other.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{AlgebraPresentation, LocalFactor};
use crate::field::FieldDescriptor;
use crate::linalg::{Matrix, Vector};
use crate::multipoly::{poly_det, Monomial, MultiPoly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchejaStorchError {
    #[error("expected {expected} polynomials in {expected} variables, got {got}")]
    NotSquare { expected: usize, got: usize },
    #[error("the Bézoutian coefficient matrix is singular")]
    SingularBezoutian,
    #[error("the form restricted to the local factor is degenerate")]
    DegenerateRestriction,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The Bézoutian `Delta(X, Y)` in the doubled variables `X1..Xn, Y1..Yn`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bezoutian {
    poly: MultiPoly,
    n: usize,
}

impl Bezoutian {
    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    /// `Delta(X, X)` as a polynomial in the original variables.
    pub fn diagonal(&self, vars: &[String]) -> MultiPoly {
        let map: Vec<usize> = (0..2 * self.n).map(|i| i % self.n).collect();
        self.poly.remap(vars, &map)
    }
}

fn doubled_vars(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("X{i}")).chain((1..=n).map(|i| format!("Y{i}"))).collect()
}

/// Determinant of the divided-difference matrix of `f`.
pub fn bezoutian(f: &[MultiPoly]) -> Result<Bezoutian, SchejaStorchError> {
    let first = f.first().ok_or(SchejaStorchError::NotSquare { expected: 0, got: 0 })?;
    let n = first.nvars();
    if f.len() != n {
        return Err(SchejaStorchError::NotSquare { expected: n, got: f.len() });
    }
    let k = first.field();
    let vars = doubled_vars(n);
    // substitution that sends x_l to Y_l for l < j and to X_l otherwise
    let subst = |fi: &MultiPoly, j: usize| -> MultiPoly {
        let map: Vec<usize> = (0..n).map(|l| if l < j { n + l } else { l }).collect();
        fi.remap(&vars, &map)
    };
    let mut rows = Vec::with_capacity(n);
    for fi in f {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let num = subst(fi, j).sub(&subst(fi, j + 1))?;
            let den = MultiPoly::var(k, &vars, j).sub(&MultiPoly::var(k, &vars, n + j))?;
            row.push(num.exact_divide(&den)?);
        }
        rows.push(row);
    }
    Ok(Bezoutian { poly: poly_det(&rows), n })
}

/// `B[i][j]` is the coefficient of `e_i(X) e_j(Y)` once both halves of the
/// Bézoutian are reduced modulo the ideal.
pub fn coefficient_matrix(delta: &Bezoutian, alg: &AlgebraPresentation) -> Matrix {
    let k = alg.field();
    let n = delta.n;
    let m = alg.dim();
    // group by the X-part, summing reduced Y-parts
    let mut by_x: BTreeMap<Monomial, Vector> = BTreeMap::new();
    let mut reducer = alg.reducer();
    for (mono, c) in delta.poly.terms() {
        let (xs, ys) = mono.exponents().split_at(n);
        let y_nf = reducer.reduce(&Monomial::new(ys.to_vec()));
        let acc = by_x.entry(Monomial::new(xs.to_vec())).or_insert_with(|| vec![k.zero(); m]);
        for (a, b) in acc.iter_mut().zip(&y_nf) {
            *a = k.add(a, &k.mul(c, b));
        }
    }
    let mut b = Matrix::zeros(k, m, m);
    for (xm, w) in by_x {
        let x_nf = reducer.reduce(&xm);
        for (i, xi) in x_nf.iter().enumerate() {
            if k.is_zero(xi) {
                continue;
            }
            for (j, wj) in w.iter().enumerate() {
                let v = k.add(b.get(i, j), &k.mul(xi, wj));
                b.set(i, j, v);
            }
        }
    }
    b
}

/// The functional `lambda` as a row over the standard basis.
pub fn duality_functional(b: &Matrix, alg: &AlgebraPresentation) -> Result<Vector, SchejaStorchError> {
    let inv = b.inverse().ok_or(SchejaStorchError::SingularBezoutian)?;
    Ok(inv.transpose().mul_vec(&alg.unit()))
}

/// A symmetric Gram matrix together with names for its basis vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    pub entries: Matrix,
    pub basis_labels: Vec<String>,
}

impl GramMatrix {
    pub fn new(entries: Matrix, basis_labels: Vec<String>) -> Self {
        assert!(entries.is_symmetric(), "Gram matrices are symmetric");
        assert_eq!(entries.rows(), basis_labels.len());
        GramMatrix { entries, basis_labels }
    }

    pub fn field(&self) -> &FieldDescriptor {
        self.entries.field()
    }

    pub fn size(&self) -> usize {
        self.entries.rows()
    }

    /// The same Gram matrix with basis vectors `e1..em`.
    pub fn unlabeled(entries: Matrix) -> Self {
        let labels = (1..=entries.rows()).map(|i| format!("e{i}")).collect();
        GramMatrix::new(entries, labels)
    }
}

/// The form `lambda(a * b)` on the whole algebra, in the standard basis.
pub fn gram_global(f: &[MultiPoly], alg: &AlgebraPresentation) -> Result<GramMatrix, SchejaStorchError> {
    let delta = bezoutian(f)?;
    let b = coefficient_matrix(&delta, alg);
    let lambda = duality_functional(&b, alg)?;
    Ok(gram_from_functional(&lambda, alg))
}

pub(crate) fn gram_from_functional(lambda: &[crate::field::FieldElement], alg: &AlgebraPresentation) -> GramMatrix {
    let k = alg.field();
    let basis = alg.std_basis();
    let m = basis.len();
    let mut reducer = alg.reducer();
    let mut g = Matrix::zeros(k, m, m);
    for i in 0..m {
        for j in i..m {
            let v = reducer.reduce(&basis[i].mul(&basis[j]));
            let x = v.iter().zip(lambda).fold(k.zero(), |acc, (a, l)| k.add(&acc, &k.mul(a, l)));
            g.set(i, j, x.clone());
            g.set(j, i, x);
        }
    }
    let labels = basis.iter().map(|e| e.format(alg.vars())).collect();
    GramMatrix::new(g, labels)
}

/// Restriction of `global` to the span of the local basis of `lf`.
pub fn restrict(global: &GramMatrix, alg: &AlgebraPresentation, lf: &LocalFactor) -> Result<GramMatrix, SchejaStorchError> {
    let k = alg.field();
    let u = Matrix::from_columns(k, alg.dim(), &lf.local_basis);
    let local = u.transpose().mul(&global.entries).mul(&u);
    if k.is_zero(&local.det()) {
        return Err(SchejaStorchError::DegenerateRestriction);
    }
    let labels = lf.local_basis.iter().map(|v| alg.to_poly(v).to_string()).collect();
    Ok(GramMatrix::new(local, labels))
}

/// The form on the local factor at the point cut out by `lf`.
pub fn gram_local(f: &[MultiPoly], alg: &AlgebraPresentation, lf: &LocalFactor) -> Result<GramMatrix, SchejaStorchError> {
    restrict(&gram_global(f, alg)?, alg, lf)
}
