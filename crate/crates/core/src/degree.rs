//! Local degrees at closed points, computed two ways.
//!
//! The direct pipeline localizes `k[x]/(f)` at `p` and diagonalizes the
//! Scheja–Storch form there. The trace pipeline base-changes `f` to the
//! residue field `L = k(p)`, computes the degree at the `L`-rational point
//! above `p` the same way, and pushes the result down with the trace form.
//! The two share nothing below the polynomial layer.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::algebra::{localize, separating_form, AlgebraError, AlgebraPresentation, SeparatingForm};
use crate::field::{FieldDescriptor, FieldElement, FieldError};
use crate::gw::{diagonalize, gw_equal, GWClass, GwError, Verdict};
use crate::linalg::{Echelon, Matrix};
use crate::multipoly::{poly_det, MonomialOrder, MultiPoly, PolyError};
use crate::point::PointSpec;
use crate::scheja_storch::{gram_global, restrict, GramMatrix, SchejaStorchError};
use crate::transfer::{trace_form, TransferContext, TransferError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegreeError {
    #[error("NotZeroDimensional: the zeros of the system are not isolated")]
    NotZeroDimensional,
    #[error("NoZeros: the system has no zeros at all")]
    IdealIsUnit,
    #[error("NotAZero: the point is not a zero of the system")]
    NotAZero,
    #[error("SeparatingFormNotFound: gave up after {attempts} linear forms")]
    SeparatingFormNotFound { attempts: usize },
    #[error("ResidueFieldMismatch: {0}")]
    ResidueFieldMismatch(String),
    #[error("NotSquare: expected as many polynomials as variables")]
    NotSquare,
    #[error("ZeroJacobian: the Jacobian determinant vanishes at the point")]
    ZeroJacobian,
    /// Conditions that valid input never produces.
    #[error("Internal: {0}")]
    Internal(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl DegreeError {
    /// Short machine-readable name.
    pub fn kind(&self) -> &'static str {
        match self {
            DegreeError::NotZeroDimensional => "NotZeroDimensional",
            DegreeError::IdealIsUnit => "NoZeros",
            DegreeError::NotAZero => "NotAZero",
            DegreeError::SeparatingFormNotFound { .. } => "SeparatingFormNotFound",
            DegreeError::ResidueFieldMismatch(_) => "ResidueFieldMismatch",
            DegreeError::NotSquare => "NotSquare",
            DegreeError::ZeroJacobian => "ZeroJacobian",
            DegreeError::Internal(_) => "Internal",
            DegreeError::Poly(_) => "Poly",
            DegreeError::Field(_) => "Field",
        }
    }
}

impl From<AlgebraError> for DegreeError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::IdealIsUnit => DegreeError::IdealIsUnit,
            AlgebraError::NotZeroDimensional => DegreeError::NotZeroDimensional,
            AlgebraError::NotAZero => DegreeError::NotAZero,
            AlgebraError::SeparatingFormNotFound { attempts } => DegreeError::SeparatingFormNotFound { attempts },
            AlgebraError::ResidueFieldMismatch => {
                DegreeError::ResidueFieldMismatch("the point does not live over the field of the system".into())
            }
            AlgebraError::NotSquare => DegreeError::NotSquare,
            AlgebraError::NotSeparating => DegreeError::Internal("linear form stopped separating".into()),
            AlgebraError::Poly(e) => DegreeError::Poly(e),
            AlgebraError::Field(e) => DegreeError::Field(e),
        }
    }
}

impl From<SchejaStorchError> for DegreeError {
    fn from(e: SchejaStorchError) -> Self {
        match e {
            SchejaStorchError::NotSquare { .. } => DegreeError::NotSquare,
            SchejaStorchError::Poly(e) => DegreeError::Poly(e),
            other => DegreeError::Internal(other.to_string()),
        }
    }
}

impl From<GwError> for DegreeError {
    fn from(e: GwError) -> Self {
        DegreeError::Internal(e.to_string())
    }
}

impl From<TransferError> for DegreeError {
    fn from(e: TransferError) -> Self {
        DegreeError::Internal(e.to_string())
    }
}

/// The degree at one point from the local Scheja–Storch form.
#[derive(Clone, Debug)]
pub struct LocalDegree {
    pub class: GWClass,
    pub gram: GramMatrix,
    pub local_dim: usize,
    pub algebra_dim: usize,
    pub form: SeparatingForm,
}

/// The degree at `p` assembled from the degree at the point above it.
#[derive(Clone, Debug)]
pub struct TraceDegree {
    pub class: GWClass,
    /// Degree over the residue field at the canonical point.
    pub lifted: LocalDegree,
    pub trace_gram: GramMatrix,
    pub residue_degree: usize,
}

fn field_of(f: &[MultiPoly]) -> Result<&FieldDescriptor, DegreeError> {
    let first = f.first().ok_or(DegreeError::NotSquare)?;
    if f.len() != first.nvars() {
        return Err(DegreeError::NotSquare);
    }
    Ok(first.field())
}

/// Dimension over `k` of the subring of `k(p)` generated by the coordinates.
fn generated_degree(k: &FieldDescriptor, p: &PointSpec) -> usize {
    let l = p.residue_field();
    let d = l.degree();
    if l == k {
        return 1;
    }
    let to_vec = |x: &FieldElement| x.coords().iter().map(|s| k.from_scalar(s.clone())).collect::<Vec<_>>();
    let mut echelon = Echelon::new(k, d);
    let mut basis = vec![l.one()];
    echelon.push(to_vec(&l.one()));
    let mut i = 0;
    while i < basis.len() && basis.len() < d {
        for c in p.coords() {
            let y = l.mul(&basis[i], c);
            if echelon.push(to_vec(&y)).is_none() {
                basis.push(y);
            }
        }
        i += 1;
    }
    basis.len()
}

/// Checks that `p` is a zero of `f` whose coordinates generate its
/// declared residue field over the field of `f`.
pub fn validate_point(f: &[MultiPoly], p: &PointSpec) -> Result<(), DegreeError> {
    let k = field_of(f)?;
    if p.dim() != f[0].nvars() {
        return Err(DegreeError::ResidueFieldMismatch(format!(
            "point has {} coordinates for {} variables",
            p.dim(),
            f[0].nvars()
        )));
    }
    let d = p.degree_over(k).ok_or_else(|| {
        DegreeError::ResidueFieldMismatch(format!("{} is not a simple extension of {}", p.residue_field(), k))
    })?;
    let g = generated_degree(k, p);
    if g != d {
        return Err(DegreeError::ResidueFieldMismatch(format!(
            "coordinates generate a subfield of degree {g}, not the declared degree {d}"
        )));
    }
    for fi in f {
        if !p.residue_field().is_zero(&fi.evaluate(p.residue_field(), p.coords())?) {
            return Err(DegreeError::NotAZero);
        }
    }
    Ok(())
}

/// The same coordinates, read as a rational point over the residue field.
pub fn canonical_point(p: &PointSpec) -> PointSpec {
    PointSpec::new(p.residue_field().clone(), p.coords().to_vec())
}

fn algebra(f: &[MultiPoly]) -> Result<AlgebraPresentation, DegreeError> {
    Ok(AlgebraPresentation::new(f, MonomialOrder::grevlex(f[0].nvars()))?)
}

/// The degree at `p` as the class of the Scheja–Storch form on the local
/// algebra at `p`.
pub fn local_degree_direct(f: &[MultiPoly], p: &PointSpec, seed: u64) -> Result<LocalDegree, DegreeError> {
    validate_point(f, p)?;
    let alg = algebra(f)?;
    let form = separating_form(&alg, p, seed)?;
    let lf = localize(&alg, p, &form)?;
    let global = gram_global(f, &alg)?;
    let gram = restrict(&global, &alg, &lf)?;
    let class = diagonalize(&gram)?.class;
    Ok(LocalDegree { class, gram, local_dim: lf.local_dim, algebra_dim: alg.dim(), form })
}

/// The degree at `p` as the trace of the degree at the point above `p`
/// after base change to `k(p)`.
pub fn local_degree_trace(f: &[MultiPoly], p: &PointSpec, seed: u64) -> Result<TraceDegree, DegreeError> {
    validate_point(f, p)?;
    let l = p.residue_field();
    let lifted_f: Vec<MultiPoly> = f.iter().map(|fi| fi.base_change(l)).collect::<Result<_, _>>()?;
    let lifted = local_degree_direct(&lifted_f, &canonical_point(p), seed)?;
    let ctx = if l == field_of(f)? { TransferContext::trivial(l) } else { TransferContext::new(l) };
    let upper = GramMatrix::unlabeled(lifted.class.gram());
    let trace_gram = trace_form(&upper, &ctx)?;
    let class = diagonalize(&trace_gram)?.class;
    Ok(TraceDegree { class, lifted, trace_gram, residue_degree: ctx.degree() })
}

/// Results of both pipelines at one point and their comparison.
#[derive(Clone, Debug)]
pub struct DegreeReport {
    pub field: FieldDescriptor,
    pub point: PointSpec,
    pub seed: u64,
    pub lhs: Result<LocalDegree, DegreeError>,
    pub rhs: Result<TraceDegree, DegreeError>,
    /// Present when both sides succeeded.
    pub verdict: Option<Verdict>,
    pub timings: [Duration; 2],
}

/// Deliberate corruption of one side, for exercising alarm paths.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fault {
    #[default]
    None,
    /// Adds a `<1>` summand to the trace side.
    PadTraceSide,
}

/// Runs both pipelines independently and compares them in GW(k). Failures
/// of either side are recorded in the report.
pub fn verify_trace_theorem(f: &[MultiPoly], p: &PointSpec, seed: u64) -> Result<DegreeReport, DegreeError> {
    verify_with_fault(f, p, seed, Fault::None)
}

#[doc(hidden)]
pub fn verify_with_fault(f: &[MultiPoly], p: &PointSpec, seed: u64, fault: Fault) -> Result<DegreeReport, DegreeError> {
    let k = field_of(f)?.clone();
    let ((lhs, t_lhs), (mut rhs, t_rhs)) = std::thread::scope(|s| {
        let lhs = s.spawn(|| timed(|| local_degree_direct(f, p, seed)));
        let rhs = timed(|| local_degree_trace(f, p, seed));
        (lhs.join().expect("direct pipeline panicked"), rhs)
    });
    if fault == Fault::PadTraceSide {
        if let Ok(t) = &mut rhs {
            t.class = t.class.add(&GWClass::from_i64(&k, &[1])?)?;
        }
    }
    let verdict = match (&lhs, &rhs) {
        (Ok(a), Ok(b)) => Some(gw_equal(&a.class, &b.class)?),
        _ => None,
    };
    Ok(DegreeReport { field: k, point: p.clone(), seed, lhs, rhs, verdict, timings: [t_lhs, t_rhs] })
}

fn timed<T>(run: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = run();
    (out, start.elapsed())
}

/// `<det Jf(p)>` over the residue field of `p`.
pub fn jacobian_class(f: &[MultiPoly], p: &PointSpec) -> Result<GWClass, DegreeError> {
    field_of(f)?;
    let n = f[0].nvars();
    let jac: Vec<Vec<MultiPoly>> = f.iter().map(|fi| (0..n).map(|j| fi.derivative(j)).collect()).collect();
    let l = p.residue_field();
    let det = poly_det(&jac).evaluate(l, p.coords())?;
    if l.is_zero(&det) {
        return Err(DegreeError::ZeroJacobian);
    }
    Ok(GWClass::new(l, &[det])?)
}

/// The class of the Scheja–Storch form on the whole algebra.
#[derive(Clone, Debug)]
pub struct GlobalDegree {
    pub class: GWClass,
    pub gram: GramMatrix,
    pub algebra_dim: usize,
}

pub fn global_degree(f: &[MultiPoly]) -> Result<GlobalDegree, DegreeError> {
    field_of(f)?;
    let alg = algebra(f)?;
    let gram = gram_global(f, &alg)?;
    let class = diagonalize(&gram)?.class;
    Ok(GlobalDegree { class, gram, algebra_dim: alg.dim() })
}

/// Gram matrix of a hand-entered diagonal.
pub fn diagonal_gram(k: &FieldDescriptor, entries: &[FieldElement]) -> Matrix {
    let mut m = Matrix::zeros(k, entries.len(), entries.len());
    for (i, u) in entries.iter().enumerate() {
        m.set(i, i, u.clone());
    }
    m
}
