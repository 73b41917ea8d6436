//! Dense matrices over a field and over polynomials.

use std::fmt;

use crate::poly::Poly;
use crate::scalar::Field;

/// Dense row-major matrix of field elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| F::from_i64(v)).collect()).collect(),
        )
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

    /// 0-based access.
    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::<F>::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).clone() + a.clone() * other.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Columns `[from, to)` as a new matrix.
    pub fn column_block(&self, from: usize, to: usize) -> Matrix<F> {
        Matrix::from_rows(
            (0..self.rows).map(|i| self.row(i)[from..to].to_vec()).collect(),
        )
    }

    /// Row-reduces a copy; returns the reduced matrix and its pivot columns.
    /// Pivots are taken as the first nonzero entry in row-index order.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in 0..m.cols {
                let v = m.get(r, j).clone() * inv.clone();
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r {
                    let f = m.get(i, c).clone();
                    if !f.is_zero() {
                        for j in 0..m.cols {
                            let v = m.get(i, j).clone() - f.clone() * m.get(r, j).clone();
                            m.set(i, j, v);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn det(&self) -> F {
        assert!(self.is_square(), "determinant of non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return F::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det = det * pivot.clone();
            let inv = pivot.inv().expect("nonzero pivot");
            for i in c + 1..n {
                let f = m.get(i, c).clone() * inv.clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j).clone() - f.clone() * m.get(c, j).clone();
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix<F>> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, F::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.column_block(n, 2 * n))
    }

    /// Entrywise embedding as constant polynomials.
    pub fn to_poly(&self) -> PolyMatrix<F> {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|c| Poly::constant(c.clone())).collect(),
        }
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Dense matrix of polynomials, used for substitutions with symbolic entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<Poly<F>>,
}

impl<F: Field> PolyMatrix<F> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly<F>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        PolyMatrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        PolyMatrix::from_fn(n, n, |i, j| if i == j { Poly::one() } else { Poly::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly<F> {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Poly<F>) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &PolyMatrix<F>) -> PolyMatrix<F> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        PolyMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Poly::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = other.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        })
    }

    pub fn transpose(&self) -> PolyMatrix<F> {
        PolyMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Determinant of the submatrix on the given 0-based rows and columns,
    /// by Laplace expansion along the first row.
    pub fn minor_det(&self, rows: &[usize], cols: &[usize]) -> Poly<F> {
        assert_eq!(rows.len(), cols.len());
        match rows.len() {
            0 => Poly::one(),
            1 => self.get(rows[0], cols[0]).clone(),
            _ => {
                let mut acc = Poly::zero();
                let rest_rows = &rows[1..];
                for (k, &c) in cols.iter().enumerate() {
                    let a = self.get(rows[0], c);
                    if a.is_zero() {
                        continue;
                    }
                    let rest_cols: Vec<usize> =
                        cols.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &c)| c).collect();
                    let sub = a * &self.minor_det(rest_rows, &rest_cols);
                    if k % 2 == 0 {
                        acc = &acc + &sub;
                    } else {
                        acc = &acc - &sub;
                    }
                }
                acc
            }
        }
    }

    pub fn det(&self) -> Poly<F> {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let idx: Vec<usize> = (0..self.rows).collect();
        self.minor_det(&idx, &idx)
    }
}
