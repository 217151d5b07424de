//! Idempotent localization of a zero-dimensional algebra at a closed point.
//!
//! A linear form `l = sum c_i x_i` is chosen so that `l(p)` generates the
//! residue field. With `m` the minimal polynomial of `l` in the algebra and
//! `m_p` that of `l(p)` over the ground field, write `m = m_p^e * g` with
//! `gcd(m_p, g) = 1`; the CRT idempotent `e_p = g * (g^-1 mod m_p^e)` evaluated
//! at `l` cuts out the factor of the algebra supported where `m_p(l)` vanishes.
//!
//! That factor can still contain other points on which `l` takes conjugate
//! values, so a form is only accepted once every coordinate is shown to be
//! pinned to the point on the factor: writing `p_j = phi_j(l(p))`, each
//! `x_j - phi_j(l)` must act nilpotently on `e_p * Q`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AlgebraError, AlgebraPresentation};
use crate::field::{FieldDescriptor, UniPoly};
use crate::linalg::{Matrix, Vector};
use crate::point::PointSpec;

pub const MAX_SEPARATING_ATTEMPTS: usize = 32;

/// A certified separating linear form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatingForm {
    pub coefficients: Vec<i64>,
    /// Candidates tried, including the accepted one.
    pub attempts: usize,
}

impl SeparatingForm {
    pub fn format(&self, vars: &[String]) -> String {
        let mut out = String::new();
        for (c, v) in self.coefficients.iter().zip(vars) {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 { "-" } else { "+" };
            let mag = c.unsigned_abs();
            let body = if mag == 1 { v.clone() } else { format!("{mag}*{v}") };
            if out.is_empty() {
                if *c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// The factor `e_p * Q` of a quotient algebra at a closed point.
#[derive(Clone, Debug)]
pub struct LocalFactor {
    pub idempotent: Vector,
    pub local_basis: Vec<Vector>,
    pub local_dim: usize,
    pub form: SeparatingForm,
    /// Minimal polynomial of `l(p)` over the algebra's field.
    pub point_min_poly: UniPoly,
    /// Minimal polynomial of `l` in the algebra.
    pub form_min_poly: UniPoly,
    /// Multiplicity of `point_min_poly` in `form_min_poly`.
    pub exponent: usize,
}

fn linear_matrix(alg: &AlgebraPresentation, coeffs: &[i64]) -> Matrix {
    let k = alg.field();
    let mut m = Matrix::zeros(k, alg.dim(), alg.dim());
    for (i, &c) in coeffs.iter().enumerate() {
        if c != 0 {
            m = m.add(&alg.var_matrix(i).scale(&k.from_i64(c)));
        }
    }
    m
}

/// Expresses each coordinate of `p` as a polynomial over `k` in `theta`,
/// where `theta` generates the residue field over `k`.
fn coordinate_polys(
    k: &FieldDescriptor,
    point: &PointSpec,
    theta: &crate::field::FieldElement,
) -> Result<Vec<UniPoly>, AlgebraError> {
    let r = point.residue_field();
    if r == k {
        return Ok(point.coords().iter().map(|c| UniPoly::constant(k, c.clone())).collect());
    }
    let d = r.degree();
    let mut cols = Vec::with_capacity(d);
    let mut pw = r.one();
    for _ in 0..d {
        cols.push(pw.coords().iter().map(|s| k.from_scalar(s.clone())).collect::<Vector>());
        pw = r.mul(&pw, theta);
    }
    let basis = Matrix::from_columns(k, d, &cols);
    let inv = basis.inverse().ok_or(AlgebraError::NotSeparating)?;
    Ok(point
        .coords()
        .iter()
        .map(|c| {
            let v: Vector = c.coords().iter().map(|s| k.from_scalar(s.clone())).collect();
            UniPoly::new(k, inv.mul_vec(&v))
        })
        .collect())
}

/// Builds the local factor for the linear form `coeffs`, or explains why the
/// form is not a certificate.
fn try_form(alg: &AlgebraPresentation, point: &PointSpec, coeffs: &[i64], attempts: usize) -> Result<LocalFactor, AlgebraError> {
    let k = alg.field();
    let d = point.degree_over(k).ok_or(AlgebraError::ResidueFieldMismatch)?;
    let theta = point.linear_value(coeffs);
    let r = point.residue_field();
    let m_p = if d == 1 && r == k {
        UniPoly::linear_root(k, &theta)
    } else {
        let mp = r.min_poly_of(&theta);
        UniPoly::new(k, mp.coeffs().to_vec())
    };
    if m_p.degree() != Some(d) {
        return Err(AlgebraError::NotSeparating);
    }
    let l_mat = linear_matrix(alg, coeffs);
    let m = alg.element_min_poly(&l_mat);

    let mut g = m.clone();
    let mut e = 0;
    loop {
        let (q, rem) = g.divrem(&m_p);
        if !rem.is_zero() {
            break;
        }
        g = q;
        e += 1;
    }
    if e == 0 {
        return Err(AlgebraError::NotAZero);
    }
    if m_p.gcd(&g).degree() != Some(0) {
        return Err(AlgebraError::NotSeparating);
    }
    let m_pe = m_p.pow(e);
    let h = g.inv_mod(&m_pe).ok_or(AlgebraError::NotSeparating)?;
    let idem_poly = g.mul(&h).rem(&m);
    let idempotent = alg.apply_poly(&idem_poly, &l_mat, &alg.unit());
    debug_assert_eq!(alg.mul(&idempotent, &idempotent), idempotent);

    let e_mat = alg.element_matrix(&idempotent);
    let cols = e_mat.column_basis();
    let local_basis: Vec<Vector> = cols.iter().map(|&j| e_mat.column(j)).collect();
    let local_dim = local_basis.len();

    // every coordinate must be pinned to the point on e_p * Q
    let phis = coordinate_polys(k, point, &theta)?;
    for (j, phi) in phis.iter().enumerate() {
        let mut w = idempotent.clone();
        for _ in 0..local_dim {
            let xw = alg.var_matrix(j).mul_vec(&w);
            let pw = alg.apply_poly(phi, &l_mat, &w);
            w = xw.iter().zip(&pw).map(|(a, b)| k.sub(a, b)).collect();
        }
        if w.iter().any(|x| !k.is_zero(x)) {
            return Err(AlgebraError::NotSeparating);
        }
    }

    Ok(LocalFactor {
        idempotent,
        local_basis,
        local_dim,
        form: SeparatingForm { coefficients: coeffs.to_vec(), attempts },
        point_min_poly: m_p,
        form_min_poly: m,
        exponent: e,
    })
}

fn candidates(n: usize, seed: u64) -> impl Iterator<Item = Vec<i64>> {
    let units = (0..n).map(move |i| {
        let mut c = vec![0; n];
        c[i] = 1;
        c
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random = (0..).map(move |round: usize| {
        let bound = 2 + (round / 4) as i64;
        loop {
            let c: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
            if c.iter().any(|&x| x != 0) {
                return c;
            }
        }
    });
    units.chain(random).take(MAX_SEPARATING_ATTEMPTS)
}

fn search(alg: &AlgebraPresentation, point: &PointSpec, seed: u64) -> Result<LocalFactor, AlgebraError> {
    if point.dim() != alg.vars().len() {
        return Err(AlgebraError::ResidueFieldMismatch);
    }
    point.degree_over(alg.field()).ok_or(AlgebraError::ResidueFieldMismatch)?;
    let mut attempts = 0;
    for coeffs in candidates(alg.vars().len(), seed) {
        attempts += 1;
        match try_form(alg, point, &coeffs, attempts) {
            Ok(lf) => return Ok(lf),
            Err(AlgebraError::NotSeparating) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(AlgebraError::SeparatingFormNotFound { attempts })
}

/// Finds a certified separating linear form for `point`: first the
/// coordinate functions in order, then seeded random small-integer
/// combinations, at most [`MAX_SEPARATING_ATTEMPTS`] candidates in total.
pub fn separating_form(alg: &AlgebraPresentation, point: &PointSpec, seed: u64) -> Result<SeparatingForm, AlgebraError> {
    search(alg, point, seed).map(|lf| lf.form)
}

/// The local factor at `point` cut out by the form `form`.
pub fn localize(alg: &AlgebraPresentation, point: &PointSpec, form: &SeparatingForm) -> Result<LocalFactor, AlgebraError> {
    if form.coefficients.len() != alg.vars().len() {
        return Err(AlgebraError::NotSeparating);
    }
    try_form(alg, point, &form.coefficients, form.attempts)
}

/// Search and localization in one pass.
#[cfg(test)]
pub(crate) fn localize_at(alg: &AlgebraPresentation, point: &PointSpec, seed: u64) -> Result<LocalFactor, AlgebraError> {
    search(alg, point, seed)
}
