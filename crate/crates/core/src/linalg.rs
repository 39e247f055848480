//! Dense matrices over GF(2^m) with Gaussian elimination.

use crate::gf2m::{Field, FieldElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = FieldElement::ONE;
        }
        m
    }

    /// Builds a matrix from rows; `None` if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Option<Self> {
        let n_rows = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(Self {
            rows: n_rows,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
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

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &Self, field: &Field) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = field.mul(a, other[(k, j)]);
                    out[(i, j)] = field.add(out[(i, j)], prod);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldElement], field: &Field) -> Vec<FieldElement> {
        assert_eq!(self.cols, v.len(), "matrix shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(FieldElement::ZERO, |acc, (&a, &b)| {
                        field.add(acc, field.mul(a, b))
                    })
            })
            .collect()
    }

    pub fn add(&self, other: &Self, field: &Field) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| field.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: FieldElement, field: &Field) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| field.mul(c, a)).collect(),
        }
    }

    pub fn pow(&self, mut k: u64, field: &Field) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, field);
            }
            base = base.mul(&base, field);
            k >>= 1;
        }
        acc
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn row_reduce(&mut self, field: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = field.inv(self[(r, c)]).expect("pivot is nonzero");
            for j in c..self.cols {
                self[(r, j)] = field.mul(inv, self[(r, j)]);
            }
            for i in 0..self.rows {
                let factor = self[(i, c)];
                if i == r || factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let d = field.mul(factor, self[(r, j)]);
                    self[(i, j)] = field.add(self[(i, j)], d);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.clone().row_reduce(field).len()
    }

    pub fn inverse(&self, field: &Field) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = FieldElement::ONE;
        }
        let pivots = aug.row_reduce(field);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)];
            }
        }
        Some(inv)
    }

    /// Columns of `self` spanning its image, as a matrix with `rank` columns.
    pub fn column_space(&self, field: &Field) -> Self {
        let pivots = self.clone().row_reduce(field);
        let mut out = Self::zeros(self.rows, pivots.len());
        for (k, &c) in pivots.iter().enumerate() {
            for i in 0..self.rows {
                out[(i, k)] = self[(i, c)];
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = FieldElement;

    fn index(&self, (i, j): (usize, usize)) -> &FieldElement {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElement {
        &mut self.data[i * self.cols + j]
    }
}
