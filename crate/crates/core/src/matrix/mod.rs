//! Dense exact matrices over any [`Scalar`] field, plus the valuation-aware
//! algorithms (Smith, Hermite, lattices) over `A`.

mod lattice;
mod minors;
mod smith;
pub mod subspace;

use std::fmt;

pub use lattice::{hnf_dvr, Lattice};
pub use minors::{compound, minor, subsets};
pub use smith::{smith_dvr, SmithData};

use crate::arith::{Local, RatFun, Rational, Scalar, Valuation};
use crate::error::{Error, Result};

pub type MatK = Mat<RatFun>;
pub type MatQ = Mat<Rational>;

/// Row-major dense matrix. Zero-sized shapes are allowed.
#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_text()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::SizeMismatch("ragged rows".into()));
        }
        Ok(Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Column vector.
    pub fn column(v: Vec<T>) -> Self {
        Mat { rows: v.len(), cols: 1, data: v }
    }

    pub fn diag(v: &[T]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |i, j| if i == j { v[i].clone() } else { T::zero() })
    }

    pub fn scalar(n: usize, c: &T) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { c.clone() } else { T::zero() })
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

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U: Scalar>(&self, f: impl Fn(&T) -> Result<U>) -> Result<Mat<U>> {
        let data = self.data.iter().map(f).collect::<Result<Vec<U>>>()?;
        Ok(Mat { rows: self.rows, cols: self.cols, data })
    }

    pub fn mul(&self, o: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, o.rows, "matrix product shape mismatch");
        let mut out: Mat<T> = Mat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        let cur: &T = &out[(i, j)];
                        out[(i, j)] = cur.plus(&a.times(b));
                    }
                }
            }
        }
        out
    }

    pub fn checked_mul(&self, o: &Mat<T>) -> Result<Mat<T>> {
        if self.cols != o.rows {
            return Err(Error::SizeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(self.mul(o))
    }

    /// Product of a sequence, left to right; `identity(n)` when empty.
    pub fn product<'a>(n: usize, ms: impl IntoIterator<Item = &'a Mat<T>>) -> Mat<T> {
        let mut acc = Mat::identity(n);
        for m in ms {
            acc = acc.mul(m);
        }
        acc
    }

    pub fn add(&self, o: &Mat<T>) -> Mat<T> {
        assert!(self.rows == o.rows && self.cols == o.cols);
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.plus(b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Mat<T>) -> Mat<T> {
        assert!(self.rows == o.rows && self.cols == o.cols);
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.minus(b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &T) -> Mat<T> {
        self.map(|x| x.times(c))
    }

    pub fn neg(&self) -> Mat<T> {
        self.map(|x| x.negate())
    }

    /// Rows and columns given by 0-based index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Mat<T> {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn select_cols(&self, cols: &[usize]) -> Mat<T> {
        let all: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&all, cols)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Mat<T> {
        let all: Vec<usize> = (0..self.cols).collect();
        self.submatrix(rows, &all)
    }

    pub fn hstack(&self, o: &Mat<T>) -> Mat<T> {
        assert_eq!(self.rows, o.rows);
        Self::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                o[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, o: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, o.cols);
        Self::from_fn(self.rows + o.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                o[(i - self.rows, j)].clone()
            }
        })
    }

    pub fn block_diag(&self, o: &Mat<T>) -> Mat<T> {
        let (r, c) = (self.rows, self.cols);
        Self::from_fn(r + o.rows, c + o.cols, |i, j| match (i < r, j < c) {
            (true, true) => self[(i, j)].clone(),
            (false, false) => o[(i - r, j - c)].clone(),
            _ => T::zero(),
        })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: &T) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self[(src, j)].times(c);
            if !v.is_zero() {
                self[(dst, j)] = self[(dst, j)].plus(&v);
            }
        }
    }

    /// col[dst] += c * col[src]
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: &T) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self[(i, src)].times(c);
            if !v.is_zero() {
                self[(i, dst)] = self[(i, dst)].plus(&v);
            }
        }
    }

    pub fn scale_row(&mut self, i: usize, c: &T) {
        for j in 0..self.cols {
            self[(i, j)] = self[(i, j)].times(c);
        }
    }

    pub fn scale_col(&mut self, j: usize, c: &T) {
        for i in 0..self.rows {
            self[(i, j)] = self[(i, j)].times(c);
        }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Mat<T>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inverse().unwrap();
            m.scale_row(r, &inv);
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].negate();
                    m.add_row_multiple(i, r, &f);
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

    /// Basis of the right kernel, as columns.
    pub fn kernel(&self) -> Mat<T> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Mat::zeros(self.cols, free.len());
        for (idx, &f) in free.iter().enumerate() {
            k[(f, idx)] = T::one();
            for (row, &p) in pivots.iter().enumerate() {
                k[(p, idx)] = r[(row, f)].negate();
            }
        }
        k
    }

    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut acc = T::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return T::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                acc = acc.negate();
            }
            let piv = m[(c, c)].clone();
            acc = acc.times(&piv);
            let inv = piv.inverse().unwrap();
            for i in c + 1..n {
                if !m[(i, c)].is_zero() {
                    let f = m[(i, c)].times(&inv).negate();
                    m.add_row_multiple(i, c, &f);
                }
            }
        }
        acc
    }

    pub fn inverse(&self) -> Option<Mat<T>> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return None;
        }
        let right: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(r.submatrix(&rows, &right))
    }

    pub fn try_inverse(&self) -> Result<Mat<T>> {
        self.inverse().ok_or(Error::Singular)
    }

    /// Solve `self * x = b` for a unique or particular `x`; `None` if inconsistent.
    pub fn solve(&self, b: &Mat<T>) -> Option<Mat<T>> {
        assert_eq!(self.rows, b.rows);
        let aug = self.hstack(b);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Mat::zeros(self.cols, b.cols);
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(p, j)] = r[(row, self.cols + j)].clone();
            }
        }
        Some(x)
    }
}

impl<T: Local> Mat<T> {
    /// Smallest order among the entries; `Inf` for the zero matrix.
    pub fn min_order(&self) -> Valuation {
        self.data.iter().map(|x| x.order()).min().unwrap_or(Valuation::Inf)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integral())
    }

    pub fn check_integral(&self) -> Result<()> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self[(i, j)].is_integral() {
                    return Err(Error::IntegralityViolation { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    /// Reduction at the closed point.
    pub fn residue(&self) -> Result<MatQ> {
        self.try_map(|x| x.residue())
    }

    pub fn lift(m: &MatQ) -> Mat<T> {
        m.map(|c| T::lift(c))
    }

    /// Entries in `A` and determinant a unit.
    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.is_integral() && self.det().is_unit()
    }
}

/// The permutation matrix `n_α` with `n_α e_j = e_{α(j)}` (0-based `α`).
pub fn perm_matrix<T: Scalar>(alpha: &[usize]) -> Mat<T> {
    let n = alpha.len();
    Mat::from_fn(n, n, |i, j| if alpha[j] == i { T::one() } else { T::zero() })
}

pub fn invert_perm(alpha: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; alpha.len()];
    for (j, &a) in alpha.iter().enumerate() {
        inv[a] = j;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_ratfun;

    fn mk(rows: &[&[&str]]) -> MatK {
        MatK::from_rows(rows.iter().map(|r| r.iter().map(|s| parse_ratfun(s).unwrap()).collect()).collect())
            .unwrap()
    }

    #[test]
    fn inverse_roundtrip() {
        let m = mk(&[&["1", "t"], &["t^-1", "2"]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert_eq!(m.det(), RatFun::from_int(1));
    }

    #[test]
    fn kernel_of_ones() {
        let m = MatQ::from_fn(2, 2, |_, _| Rational::from_i64(1));
        let k = m.kernel();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.col(0), vec![Rational::from_i64(-1), Rational::from_i64(1)]);
    }

    #[test]
    fn rank_identity() {
        for n in 0..5 {
            assert_eq!(MatQ::identity(n).rank(), n);
        }
    }

    #[test]
    fn permutation_convention() {
        // n_α^{-1} X n_β has (i, j) entry X[α(i), β(j)]
        let x = MatQ::from_fn(3, 3, |i, j| Rational::from_i64((3 * i + j) as i64));
        let a = [2, 0, 1];
        let b = [1, 2, 0];
        let y = perm_matrix::<Rational>(&a).inverse().unwrap().mul(&x).mul(&perm_matrix(&b));
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(y[(i, j)], x[(a[i], b[j])]);
            }
        }
    }

    #[test]
    fn zero_sized() {
        let z = MatK::identity(0);
        assert_eq!(z.det(), RatFun::one());
        assert_eq!(z.inverse().unwrap(), z);
        assert_eq!(z.mul(&z), z);
    }
}
