//! Dense matrices over a [`FieldDescriptor`] with exact Gaussian elimination.

use std::fmt;

use crate::field::{FieldDescriptor, FieldElement};

pub type Vector = Vec<FieldElement>;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldDescriptor,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(field: &FieldDescriptor, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &FieldDescriptor, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &FieldDescriptor, rows: Vec<Vec<FieldElement>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { field: field.clone(), rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(field: &FieldDescriptor, rows: usize, cols: &[Vector]) -> Self {
        let mut m = Self::zeros(field, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_i64(field: &FieldDescriptor, rows: &[&[i64]]) -> Self {
        Self::from_rows(field, rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect())
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: FieldElement) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let k = &self.field;
        let mut out = Matrix::zeros(k, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if k.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = k.add(&out.data[idx], &k.mul(a, other.get(l, j)));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vector {
        assert_eq!(self.cols, v.len());
        let k = &self.field;
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(k.zero(), |acc, j| {
                    let a = self.get(i, j);
                    if k.is_zero(a) || k.is_zero(&v[j]) {
                        acc
                    } else {
                        k.add(&acc, &k.mul(a, &v[j]))
                    }
                })
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let k = &self.field;
        Matrix {
            field: k.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| k.add(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Matrix {
        let k = &self.field;
        Matrix { field: k.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| k.mul(a, c)).collect() }
    }

    pub fn map_field(&self, target: &FieldDescriptor, f: impl Fn(&FieldElement) -> FieldElement) -> Matrix {
        Matrix { field: target.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let k = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !k.is_zero(m.get(i, c))) else { continue };
            m.swap_rows(r, p);
            let inv = k.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let x = k.mul(m.get(r, j), &inv);
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                if i == r || k.is_zero(m.get(i, c)) {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let x = k.sub(m.get(i, j), &k.mul(&factor, m.get(r, j)));
                    m.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> FieldElement {
        assert!(self.is_square());
        let k = &self.field;
        let mut m = self.clone();
        let mut det = k.one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !k.is_zero(m.get(i, c))) else { return k.zero() };
            if p != c {
                m.swap_rows(p, c);
                det = k.neg(&det);
            }
            let pivot = m.get(c, c).clone();
            det = k.mul(&det, &pivot);
            let inv = k.inv(&pivot).expect("nonzero pivot");
            for i in c + 1..m.rows {
                if k.is_zero(m.get(i, c)) {
                    continue;
                }
                let factor = k.mul(m.get(i, c), &inv);
                for j in c..m.cols {
                    let x = k.sub(m.get(i, j), &k.mul(&factor, m.get(c, j)));
                    m.set(i, j, x);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Matrix::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Indices of a maximal linearly independent set of columns.
    pub fn column_basis(&self) -> Vec<usize> {
        self.rref().1
    }

    /// A basis of the right kernel.
    pub fn kernel(&self) -> Vec<Vector> {
        let k = &self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![k.zero(); self.cols];
                v[f] = k.one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = k.neg(r.get(row, f));
                }
                v
            })
            .collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let cells: Vec<String> = self.row(i).iter().map(|x| self.field.format_element(x)).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Incremental detection of the first linear dependency in a sequence of
/// vectors `v_0, v_1, ...`.
///
/// Each pushed vector is reduced against the echelon rows collected so far;
/// the combination that produced each row is tracked, so the first vector that
/// reduces to zero yields coefficients `c` with `sum c_i v_i = 0` and
/// `c_last = 1`.
pub struct Echelon {
    field: FieldDescriptor,
    dim: usize,
    rows: Vec<(usize, Vector, Vector)>,
    count: usize,
}

impl Echelon {
    pub fn new(field: &FieldDescriptor, dim: usize) -> Self {
        Echelon { field: field.clone(), dim, rows: Vec::new(), count: 0 }
    }

    /// Pushes `v`; returns the monic dependency once one exists.
    pub fn push(&mut self, v: Vector) -> Option<Vector> {
        assert_eq!(v.len(), self.dim);
        let k = &self.field;
        let idx = self.count;
        self.count += 1;
        let mut w = v;
        let mut combo = vec![k.zero(); idx + 1];
        combo[idx] = k.one();
        for (pivot, row, row_combo) in &self.rows {
            let c = w[*pivot].clone();
            if k.is_zero(&c) {
                continue;
            }
            for (x, y) in w.iter_mut().zip(row) {
                *x = k.sub(x, &k.mul(&c, y));
            }
            for (x, y) in combo.iter_mut().zip(row_combo) {
                *x = k.sub(x, &k.mul(&c, y));
            }
        }
        match w.iter().position(|x| !k.is_zero(x)) {
            None => Some(combo),
            Some(p) => {
                let inv = k.inv(&w[p]).expect("nonzero");
                let w = w.iter().map(|x| k.mul(x, &inv)).collect();
                let combo = combo.iter().map(|x| k.mul(x, &inv)).collect();
                self.rows.push((p, w, combo));
                None
            }
        }
    }
}
