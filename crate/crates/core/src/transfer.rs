//! Trace forms: pushing a bilinear form over `L = k(a)` down to `k`.

use thiserror::Error;

use crate::field::{FieldDescriptor, FieldElement};
use crate::gw::{diagonalize_matrix, GWClass, GwError};
use crate::linalg::Matrix;
use crate::scheja_storch::GramMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransferError {
    #[error("form lives over {found}, expected {expected}")]
    DescriptorMismatch { expected: String, found: String },
    #[error("basis of {0} vectors does not span the extension")]
    NotABasis(usize),
    #[error(transparent)]
    Gw(#[from] GwError),
}

/// The extension `upper / lower`, one step deep (or trivial).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferContext {
    lower: FieldDescriptor,
    upper: FieldDescriptor,
}

impl TransferContext {
    /// `upper` over its base field; the trivial extension when `upper` is a
    /// base field itself.
    pub fn new(upper: &FieldDescriptor) -> Self {
        TransferContext { lower: upper.base_descriptor(), upper: upper.clone() }
    }

    /// `k` over itself, for points already rational over an extension `k`.
    pub fn trivial(k: &FieldDescriptor) -> Self {
        TransferContext { lower: k.clone(), upper: k.clone() }
    }

    fn is_trivial(&self) -> bool {
        self.lower == self.upper
    }

    pub fn lower(&self) -> &FieldDescriptor {
        &self.lower
    }

    pub fn upper(&self) -> &FieldDescriptor {
        &self.upper
    }

    pub fn degree(&self) -> usize {
        if self.is_trivial() {
            1
        } else {
            self.upper.degree()
        }
    }

    /// `1, a, ..., a^(d-1)`.
    pub fn power_basis(&self) -> Vec<FieldElement> {
        let l = &self.upper;
        if self.is_trivial() {
            return vec![l.one()];
        }
        let a = l.generator().unwrap_or_else(|| l.one());
        let mut out = Vec::with_capacity(self.degree());
        let mut x = l.one();
        for _ in 0..self.degree() {
            out.push(x.clone());
            x = l.mul(&x, &a);
        }
        out
    }

    fn trace(&self, x: &FieldElement) -> FieldElement {
        if self.is_trivial() {
            return x.clone();
        }
        self.lower.from_scalar(self.upper.trace_to_base(x))
    }

    fn check(&self, found: &FieldDescriptor) -> Result<(), TransferError> {
        if found != &self.upper {
            return Err(TransferError::DescriptorMismatch { expected: self.upper.to_string(), found: found.to_string() });
        }
        Ok(())
    }
}

/// Gram matrix over `k` of `Tr(B(x, y))`, in the basis `a^i * v_j` ordered
/// with the power of `a` outermost.
pub fn trace_form(g: &GramMatrix, ctx: &TransferContext) -> Result<GramMatrix, TransferError> {
    ctx.check(g.field())?;
    let mut out = trace_form_in_basis(&g.entries, ctx, &ctx.power_basis())?;
    let gen = ctx.upper.extension_data().filter(|_| !ctx.is_trivial()).map(|e| e.generator().to_string());
    let labels = (0..ctx.degree())
        .flat_map(|a| {
            let gen = gen.clone();
            g.basis_labels.iter().map(move |v| match (a, &gen) {
                (0, _) | (_, None) => v.clone(),
                (1, Some(s)) => format!("{s}*({v})"),
                (_, Some(s)) => format!("{s}^{a}*({v})"),
            })
        })
        .collect();
    out.basis_labels = labels;
    Ok(out)
}

/// The trace form in the basis `w_a * v_i` for an arbitrary `k`-basis `w`
/// of the extension.
pub fn trace_form_in_basis(g: &Matrix, ctx: &TransferContext, basis: &[FieldElement]) -> Result<GramMatrix, TransferError> {
    ctx.check(g.field())?;
    let d = ctx.degree();
    let l = &ctx.upper;
    if basis.len() != d || !spans(ctx, basis) {
        return Err(TransferError::NotABasis(basis.len()));
    }
    let m = g.rows();
    let mut out = Matrix::zeros(&ctx.lower, d * m, d * m);
    for a in 0..d {
        for b in a..d {
            let w = l.mul(&basis[a], &basis[b]);
            for i in 0..m {
                for j in 0..m {
                    let x = ctx.trace(&l.mul(&w, g.get(i, j)));
                    out.set(a * m + i, b * m + j, x.clone());
                    out.set(b * m + j, a * m + i, x);
                }
            }
        }
    }
    Ok(GramMatrix::unlabeled(out))
}

fn spans(ctx: &TransferContext, basis: &[FieldElement]) -> bool {
    let k = &ctx.lower;
    if ctx.is_trivial() {
        return !k.is_zero(&basis[0]);
    }
    let cols: Vec<Vec<FieldElement>> = basis.iter().map(|w| w.coords().iter().map(|s| k.from_scalar(s.clone())).collect()).collect();
    Matrix::from_columns(k, ctx.degree(), &cols).rank() == ctx.degree()
}

/// Class of the trace form of a diagonal class.
pub fn transfer_class(c: &GWClass, ctx: &TransferContext) -> Result<GWClass, TransferError> {
    ctx.check(c.field())?;
    let g = GramMatrix::unlabeled(c.gram());
    let t = trace_form(&g, ctx)?;
    Ok(diagonalize_matrix(&t.entries)?.class)
}
