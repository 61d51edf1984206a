//! Exact linear algebra over the rationals.
//!
//! Rank uses fraction-free (Bareiss) elimination on integer-scaled rows.
//! Kernels, images and basis completion go through the reduced row echelon
//! form, so every output is deterministic for a given input ordering.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Vector = Vec<BigRational>;

/// Dense rational matrix stored row by row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigRational>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![vec![BigRational::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigRational::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must share one length.
    pub fn from_rows(rows: Vec<Vec<BigRational>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        Matrix { rows: rows.len(), cols, data: rows }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vector], rows: usize) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, v) in c.iter().enumerate() {
                if !v.is_zero() {
                    m.data[i][j] = v.clone();
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i]
    }

    pub fn column(&self, j: usize) -> Vector {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix/vector shape mismatch");
        self.data
            .iter()
            .map(|r| {
                let mut acc = BigRational::zero();
                for (a, b) in r.iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    /// Keeps only the listed rows, in the given order.
    pub fn select_rows(&self, which: &[usize]) -> Matrix {
        Matrix { rows: which.len(), cols: self.cols, data: which.iter().map(|&i| self.data[i].clone()).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self.data[i][j].is_zero() {
                    t.data[j][i] = self.data[i][j].clone();
                }
            }
        }
        t
    }
}

fn integer_rows(m: &Matrix) -> Vec<Vec<BigInt>> {
    m.data
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            row.iter().map(|v| (v * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect()
}

/// Rank by fraction-free Gaussian elimination.
pub fn rank(m: &Matrix) -> usize {
    let mut a = integer_rows(m);
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in (r + 1)..rows {
            if a[i][c].is_zero() {
                for j in (c + 1)..cols {
                    if !a[i][j].is_zero() {
                        a[i][j] = &a[i][j] * &a[r][c] / &prev;
                    }
                }
                continue;
            }
            for j in (c + 1)..cols {
                let v = &a[i][j] * &a[r][c] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form together with the pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.data.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (j, pv) in pivot_row.iter().enumerate().skip(c) {
                if !pv.is_zero() {
                    row[j] -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (Matrix { rows, cols, data: a }, pivots)
}

/// Basis of the kernel {v : m v = 0}, one vector per free column.
pub fn nullspace(m: &Matrix) -> Vec<Vector> {
    let (e, pivots) = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![BigRational::zero(); m.cols];
        v[free] = BigRational::one();
        for (r, &p) in pivots.iter().enumerate() {
            let x = &e.data[r][free];
            if !x.is_zero() {
                v[p] = -x.clone();
            }
        }
        out.push(v);
    }
    out
}

/// Echelon basis of the span of the given vectors (all of length `dim`).
pub fn span_basis(vectors: &[Vector], dim: usize) -> Vec<Vector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(vectors.to_vec(), dim);
    let (e, pivots) = rref(&m);
    e.data.into_iter().take(pivots.len()).collect()
}

/// Exact determinant of a square matrix.
pub fn determinant(m: &Matrix) -> BigRational {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    let mut a = m.data.clone();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return BigRational::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        for i in (c + 1)..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let d = &f * &a[c][j];
                a[i][j] -= d;
            }
        }
    }
    det
}

/// Inverse of a square matrix, or `None` if singular.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    assert_eq!(m.rows, m.cols, "inverse of a non-square matrix");
    let n = m.rows;
    let mut aug = Matrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.data[i][j] = m.data[i][j].clone();
        }
        aug.data[i][n + i] = BigRational::one();
    }
    let (e, pivots) = rref(&aug);
    if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
        return None;
    }
    let data = e.data.into_iter().map(|r| r[n..].to_vec()).collect();
    Some(Matrix { rows: n, cols: n, data })
}

/// Some solution x of m x = b, if one exists (free variables set to zero).
pub fn solve(m: &Matrix, b: &[BigRational]) -> Option<Vector> {
    assert_eq!(m.rows, b.len(), "right-hand side length mismatch");
    let mut aug = Matrix::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug.data[i][j] = m.data[i][j].clone();
        }
        aug.data[i][m.cols] = b[i].clone();
    }
    let (e, pivots) = rref(&aug);
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); m.cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = e.data[r][m.cols].clone();
    }
    Some(x)
}

/// Incremental echelon basis used to test membership and extend bases.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    dim: usize,
    rows: Vec<(usize, Vector)>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis { dim, rows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Reduces `v` against the stored rows; the result is zero iff `v` is in the span.
    pub fn reduce(&self, v: &[BigRational]) -> Vector {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            if w[*p].is_zero() {
                continue;
            }
            let f = w[*p].clone();
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    w[j] -= &f * x;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v` if it is independent of the current span; returns whether it was added.
    pub fn insert(&mut self, v: &[BigRational]) -> bool {
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else { return false };
        let inv = w[p].recip();
        for x in w.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (j, x) in w.iter().enumerate() {
                if !x.is_zero() {
                    row[j] -= &f * x;
                }
            }
        }
        self.rows.push((p, w));
        true
    }
}

/// Picks vectors from `candidates` (in order) completing a basis of `base` to a
/// basis of `base + span(candidates)`.
pub fn extend_basis(base: &[Vector], candidates: &[Vector], dim: usize) -> Vec<Vector> {
    let mut e = EchelonBasis::new(dim);
    for b in base {
        e.insert(b);
    }
    candidates.iter().filter(|c| e.insert(c)).cloned().collect()
}
