//! Dense matrices over a finite field and the linear algebra built on them.

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Elem::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Result<Mat> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut g: impl FnMut(usize, usize) -> Elem) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(g(i, j));
            }
        }
        Mat { rows, cols, data }
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

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn map(&self, g: impl FnMut(&Elem) -> Elem) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(g).collect() }
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn add(&self, other: &Mat, f: &Field) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &Mat, f: &Field) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: Elem, f: &Field) -> Mat {
        self.map(|&a| f.mul(a, c))
    }

    pub fn mul(&self, other: &Mat, f: &Field) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                let orow = other.row(l);
                let base = i * other.cols;
                for (j, &b) in orow.iter().enumerate() {
                    if !b.is_zero() {
                        out.data[base + j] = f.add(out.data[base + j], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64, f: &Field) -> Mat {
        let mut base = self.clone();
        let mut acc = Mat::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            e >>= 1;
        }
        acc
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Mat {
        Mat::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn select_cols(&self, cols: &[usize]) -> Mat {
        Mat::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])])
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                other[(i, j - self.cols)]
            }
        })
    }

    /// Block diagonal sum.
    pub fn block_diag(&self, other: &Mat) -> Mat {
        Mat::from_fn(self.rows + other.rows, self.cols + other.cols, |i, j| {
            match (i < self.rows, j < self.cols) {
                (true, true) => self[(i, j)],
                (false, false) => other[(i - self.rows, j - self.cols)],
                _ => Elem::ZERO,
            }
        })
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self, f: &Field) -> Vec<usize> {
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
            let inv = f.inv(self[(r, c)]).expect("nonzero pivot");
            for j in c..self.cols {
                self[(r, j)] = f.mul(self[(r, j)], inv);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self[(i, c)];
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.mul(factor, self[(r, j)]);
                    self[(i, j)] = f.sub(self[(i, j)], v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.clone().rref(f).len()
    }

    /// Indices of a maximal set of linearly independent columns, chosen greedily left to
    /// right.
    pub fn independent_columns(&self, f: &Field) -> Vec<usize> {
        self.clone().rref(f)
    }

    pub fn det(&self, f: &Field) -> Elem {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Elem::ONE;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Elem::ZERO;
            };
            if pr != c {
                m.swap_rows(pr, c);
                det = f.neg(det);
            }
            let piv = m[(c, c)];
            det = f.mul(det, piv);
            let inv = f.inv(piv).expect("nonzero pivot");
            for i in c + 1..n {
                let factor = f.mul(m[(i, c)], inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = f.mul(factor, m[(c, j)]);
                    m[(i, j)] = f.sub(m[(i, j)], v);
                }
            }
        }
        det
    }

    pub fn inverse(&self, f: &Field) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = self.hstack(&Mat::identity(n));
        let piv = aug.rref(f);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(Mat::from_fn(n, n, |i, j| aug[(i, n + j)]))
    }

    /// Basis of `{x : self x = 0}` as columns.
    pub fn nullspace(&self, f: &Field) -> Vec<Vec<Elem>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Elem::ZERO; self.cols];
            v[free] = Elem::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m[(r, free)]);
            }
            out.push(v);
        }
        out
    }

    /// Solves `self * X = rhs` for a matrix `self` of full column rank.
    pub fn solve_left(&self, rhs: &Mat, f: &Field) -> Result<Mat> {
        assert_eq!(self.rows, rhs.rows);
        let n = self.cols;
        let mut aug = self.hstack(rhs);
        let piv = aug.rref(f);
        if piv.len() < n || (n > 0 && piv[n - 1] != n - 1) {
            return Err(Error::Singular);
        }
        if piv.len() > n {
            return Err(Error::Dimension("inconsistent linear system".into()));
        }
        Ok(Mat::from_fn(n, rhs.cols, |i, j| aug[(i, n + j)]))
    }

    /// Characteristic polynomial `det(x I - self)` via reduction to Hessenberg form.
    pub fn char_poly(&self, f: &Field) -> Poly {
        assert!(self.is_square());
        let n = self.rows;
        let mut h = self.clone();
        for c in 0..n.saturating_sub(2) {
            let Some(pr) = (c + 1..n).find(|&i| !h[(i, c)].is_zero()) else {
                continue;
            };
            if pr != c + 1 {
                h.swap_rows(pr, c + 1);
                for i in 0..n {
                    h.data.swap(i * n + pr, i * n + c + 1);
                }
            }
            let inv = f.inv(h[(c + 1, c)]).expect("nonzero pivot");
            for i in c + 2..n {
                let factor = f.mul(h[(i, c)], inv);
                if factor.is_zero() {
                    continue;
                }
                // row_i -= factor * row_{c+1}; col_{c+1} += factor * col_i
                for j in 0..n {
                    let v = f.mul(factor, h[(c + 1, j)]);
                    h[(i, j)] = f.sub(h[(i, j)], v);
                }
                for j in 0..n {
                    let v = f.mul(factor, h[(j, i)]);
                    h[(j, c + 1)] = f.add(h[(j, c + 1)], v);
                }
            }
        }
        // p_0 = 1; p_m = (x - h_mm) p_{m-1} - sum_{i<m} h_{i,m} prod_{j=i+1}^{m} h_{j,j-1} p_{i-1}
        let mut ps: Vec<Poly> = vec![Poly::one()];
        for m in 0..n {
            let mut next = Poly::linear(f, h[(m, m)]).mul(&ps[m], f);
            let mut prod = Elem::ONE;
            for i in (0..m).rev() {
                prod = f.mul(prod, h[(i + 1, i)]);
                if prod.is_zero() {
                    break;
                }
                let coeff = f.mul(prod, h[(i, m)]);
                next = next.sub(&ps[i].scale(coeff, f), f);
            }
            ps.push(next);
        }
        ps.pop().expect("nonempty")
    }

    /// `poly(self)` by Horner's rule.
    pub fn eval_poly(&self, poly: &Poly, f: &Field) -> Mat {
        let n = self.rows;
        let mut acc = Mat::zeros(n, n);
        for &c in poly.coeffs().iter().rev() {
            acc = acc.mul(self, f);
            for i in 0..n {
                acc[(i, i)] = f.add(acc[(i, i)], c);
            }
        }
        acc
    }

    pub fn is_nilpotent(&self, f: &Field) -> bool {
        let mut m = self.clone();
        let mut e = 1;
        while e < self.rows {
            m = m.mul(&m, f);
            e *= 2;
        }
        m.is_zero()
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Elem;
    fn index(&self, (i, j): (usize, usize)) -> &Elem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Elem {
        &mut self.data[i * self.cols + j]
    }
}

/// Sparse linear system accumulated row by row and kept in reduced echelon form.
pub struct SparseSystem<'a> {
    field: &'a Field,
    ncols: usize,
    /// pivot column -> reduced row (sorted by column, pivot coefficient 1)
    pivot_rows: Vec<Option<Vec<(usize, Elem)>>>,
}

impl<'a> SparseSystem<'a> {
    pub fn new(field: &'a Field, ncols: usize) -> Self {
        SparseSystem { field, ncols, pivot_rows: vec![None; ncols] }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Adds the equation `sum coeff * x_col = 0`. Repeated columns are summed.
    pub fn push(&mut self, terms: &[(usize, Elem)]) {
        let f = self.field;
        let mut row = dense_to_sorted(terms, f);
        loop {
            let Some(pos) = row.iter().position(|&(c, _)| self.pivot_rows[c].is_some()) else {
                break;
            };
            let (c, coeff) = row[pos];
            let pivot = self.pivot_rows[c].as_ref().expect("pivot row");
            row = axpy(&row, pivot, f.neg(coeff), f);
        }
        let Some(&(pc, lead)) = row.first() else {
            return;
        };
        let inv = f.inv(lead).expect("nonzero");
        for t in row.iter_mut() {
            t.1 = f.mul(t.1, inv);
        }
        for slot in self.pivot_rows.iter_mut().flatten() {
            if let Ok(idx) = slot.binary_search_by_key(&pc, |t| t.0) {
                let coeff = slot[idx].1;
                *slot = axpy(slot, &row, f.neg(coeff), f);
            }
        }
        self.pivot_rows[pc] = Some(row);
    }

    pub fn rank(&self) -> usize {
        self.pivot_rows.iter().flatten().count()
    }

    /// Basis of the solution space.
    pub fn nullspace(&self) -> Vec<Vec<Elem>> {
        let f = self.field;
        let mut out = Vec::new();
        for free in (0..self.ncols).filter(|&c| self.pivot_rows[c].is_none()) {
            let mut v = vec![Elem::ZERO; self.ncols];
            v[free] = Elem::ONE;
            for (pc, row) in self.pivot_rows.iter().enumerate() {
                if let Some(row) = row {
                    if let Ok(idx) = row.binary_search_by_key(&free, |t| t.0) {
                        v[pc] = f.neg(row[idx].1);
                    }
                }
            }
            out.push(v);
        }
        out
    }
}

fn dense_to_sorted(terms: &[(usize, Elem)], f: &Field) -> Vec<(usize, Elem)> {
    let mut t: Vec<(usize, Elem)> = terms.iter().copied().filter(|t| !t.1.is_zero()).collect();
    t.sort_by_key(|x| x.0);
    let mut out: Vec<(usize, Elem)> = Vec::with_capacity(t.len());
    for (c, v) in t {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 = f.add(last.1, v),
            _ => out.push((c, v)),
        }
    }
    out.retain(|t| !t.1.is_zero());
    out
}

/// `a + s * b` on sorted sparse rows.
fn axpy(a: &[(usize, Elem)], b: &[(usize, Elem)], s: Elem, f: &Field) -> Vec<(usize, Elem)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            let v = f.mul(s, b[j].1);
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = f.add(a[i].1, f.mul(s, b[j].1));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}
