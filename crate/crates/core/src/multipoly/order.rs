use std::cmp::Ordering;

use super::Monomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderKind {
    GrevLex,
    Lex,
}

/// A monomial order together with a variable priority: `perm[0]` is the
/// largest variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    kind: OrderKind,
    perm: Vec<usize>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, perm: Vec<usize>) -> Self {
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        assert!(sorted.iter().enumerate().all(|(i, &v)| i == v), "not a permutation");
        MonomialOrder { kind, perm }
    }

    pub fn grevlex(nvars: usize) -> Self {
        Self::new(OrderKind::GrevLex, (0..nvars).collect())
    }

    pub fn lex(nvars: usize) -> Self {
        Self::new(OrderKind::Lex, (0..nvars).collect())
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (a, b) = (a.exponents(), b.exponents());
        match self.kind {
            OrderKind::Lex => {
                for &v in &self.perm {
                    match a[v].cmp(&b[v]) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            OrderKind::GrevLex => {
                let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
                if da != db {
                    return da.cmp(&db);
                }
                for &v in self.perm.iter().rev() {
                    match a[v].cmp(&b[v]) {
                        Ordering::Equal => continue,
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }
        }
    }
}
