//! Buchberger's algorithm on term lists sorted by a monomial order.

use std::cmp::Ordering;

use super::AlgebraError;
use crate::field::{FieldDescriptor, FieldElement};
use crate::multipoly::{Monomial, MonomialOrder, MultiPoly};

/// Terms in strictly descending order; no zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct SortedPoly(pub(crate) Vec<(Monomial, FieldElement)>);

impl SortedPoly {
    pub(crate) fn from_poly(p: &MultiPoly, order: &MonomialOrder) -> Self {
        let mut terms: Vec<_> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        SortedPoly(terms)
    }

    pub(crate) fn to_poly(&self, field: &FieldDescriptor, vars: &[String]) -> MultiPoly {
        MultiPoly::from_terms(field, vars, self.0.iter().cloned())
    }

    pub(crate) fn leading(&self) -> Option<&(Monomial, FieldElement)> {
        self.0.first()
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn monic(mut self, k: &FieldDescriptor) -> Self {
        if let Some((_, lc)) = self.0.first() {
            let inv = k.inv(lc).expect("nonzero leading coefficient");
            for (_, c) in &mut self.0 {
                *c = k.mul(c, &inv);
            }
        }
        self
    }

    /// `self - c * m * other`, merged in order.
    fn sub_shifted(&self, other: &SortedPoly, m: &Monomial, c: &FieldElement, k: &FieldDescriptor, order: &MonomialOrder) -> SortedPoly {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let mut a = self.0.iter().peekable();
        let mut b = other.0.iter().map(|(n, x)| (n.mul(m), k.neg(&k.mul(x, c)))).peekable();
        loop {
            let ord = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (Some(x), Some(y)) => order.cmp(&x.0, &y.0),
            };
            match ord {
                Ordering::Greater => out.push(a.next().unwrap().clone()),
                Ordering::Less => out.push(b.next().unwrap()),
                Ordering::Equal => {
                    let (m, x) = a.next().unwrap();
                    let (_, y) = b.next().unwrap();
                    let s = k.add(x, &y);
                    if !k.is_zero(&s) {
                        out.push((m.clone(), s));
                    }
                }
            }
        }
        SortedPoly(out)
    }
}

/// Fully reduces `p` modulo `basis`; the result has no monomial divisible by
/// any leading monomial of the basis.
pub(crate) fn reduce(p: &SortedPoly, basis: &[SortedPoly], k: &FieldDescriptor, order: &MonomialOrder) -> SortedPoly {
    let mut p = p.clone();
    let mut rem: Vec<(Monomial, FieldElement)> = Vec::new();
    while let Some((m, c)) = p.leading().cloned() {
        let divisor = basis.iter().find(|g| g.leading().is_some_and(|(lm, _)| lm.divides(&m)));
        match divisor {
            Some(g) => {
                let (lm, lc) = g.leading().unwrap();
                let q = k.div(&c, lc).expect("nonzero leading coefficient");
                p = p.sub_shifted(g, &m.div(lm), &q, k, order);
            }
            None => {
                rem.push((m, c));
                p.0.remove(0);
            }
        }
    }
    SortedPoly(rem)
}

fn s_poly(f: &SortedPoly, g: &SortedPoly, k: &FieldDescriptor, order: &MonomialOrder) -> SortedPoly {
    let (fm, fc) = f.leading().unwrap();
    let (gm, gc) = g.leading().unwrap();
    let l = fm.lcm(gm);
    let left = SortedPoly(Vec::new()).sub_shifted(f, &l.div(fm), &k.neg(&k.inv(fc).unwrap()), k, order);
    left.sub_shifted(g, &l.div(gm), &k.inv(gc).unwrap(), k, order)
}

/// Reduced Gröbner basis of the ideal generated by `gens`, sorted by
/// ascending leading monomial.
pub(crate) fn groebner(gens: &[MultiPoly], order: &MonomialOrder) -> Result<Vec<SortedPoly>, AlgebraError> {
    let k = gens.first().expect("at least one generator").field().clone();
    let mut basis: Vec<SortedPoly> = gens
        .iter()
        .map(|g| SortedPoly::from_poly(g, order).monic(&k))
        .filter(|g| !g.is_zero())
        .collect();
    if basis.is_empty() {
        return Ok(basis);
    }
    if basis.iter().any(|g| g.leading().unwrap().0.is_one()) {
        return Err(AlgebraError::IdealIsUnit);
    }
    let mut pairs: Vec<(usize, usize)> = (0..basis.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    while let Some((i, j)) = pairs.pop() {
        let (mi, mj) = (&basis[i].leading().unwrap().0, &basis[j].leading().unwrap().0);
        if mi.is_coprime(mj) {
            continue;
        }
        let s = s_poly(&basis[i], &basis[j], &k, order);
        let r = reduce(&s, &basis, &k, order);
        if r.is_zero() {
            continue;
        }
        let r = r.monic(&k);
        if r.leading().unwrap().0.is_one() {
            return Err(AlgebraError::IdealIsUnit);
        }
        let n = basis.len();
        basis.push(r);
        pairs.extend((0..n).map(|i| (i, n)));
    }
    // minimal basis, then inter-reduce
    let mut minimal: Vec<SortedPoly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let lm = &g.leading().unwrap().0;
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let hm = &h.leading().unwrap().0;
            j != i && hm.divides(lm) && (hm != lm || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<SortedPoly> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let (lm, lc) = minimal[i].leading().unwrap().clone();
        let tail = SortedPoly(minimal[i].0[1..].to_vec());
        let mut r = reduce(&tail, &others, &k, order);
        r.0.insert(0, (lm, lc));
        reduced.push(r.monic(&k));
    }
    reduced.sort_by(|a, b| order.cmp(&a.leading().unwrap().0, &b.leading().unwrap().0));
    Ok(reduced)
}
