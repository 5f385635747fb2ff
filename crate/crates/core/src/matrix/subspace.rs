//! Subspaces of `T^n` over a field, held as column bases.

use super::Mat;
use crate::arith::Scalar;

/// Canonical basis of the column span: the transposed nonzero rows of the
/// RREF of the transpose. Two spans are equal iff their canonical bases are.
pub fn canonical<T: Scalar>(m: &Mat<T>) -> Mat<T> {
    let (r, piv) = m.transpose().rref();
    let rows: Vec<usize> = (0..piv.len()).collect();
    let cols: Vec<usize> = (0..m.rows()).collect();
    r.submatrix(&rows, &cols).transpose()
}

pub fn dim<T: Scalar>(m: &Mat<T>) -> usize {
    m.rank()
}

pub fn span_eq<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> bool {
    canonical(a) == canonical(b)
}

/// Whether `span(small) ⊆ span(big)`.
pub fn contains<T: Scalar>(big: &Mat<T>, small: &Mat<T>) -> bool {
    big.hstack(small).rank() == big.rank()
}

pub fn sum<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    canonical(&a.hstack(b))
}

pub fn intersect<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    let k = a.hstack(&b.neg()).kernel();
    let top: Vec<usize> = (0..a.cols()).collect();
    canonical(&a.mul(&k.select_rows(&top)))
}

/// Span of `f · basis`.
pub fn image<T: Scalar>(f: &Mat<T>, basis: &Mat<T>) -> Mat<T> {
    canonical(&f.mul(basis))
}

/// `{ x : f x ∈ span(basis) }`.
pub fn preimage<T: Scalar>(f: &Mat<T>, basis: &Mat<T>) -> Mat<T> {
    let k = f.hstack(&basis.neg()).kernel();
    let top: Vec<usize> = (0..f.cols()).collect();
    canonical(&k.select_rows(&top))
}

pub fn kernel<T: Scalar>(f: &Mat<T>) -> Mat<T> {
    canonical(&f.kernel())
}

/// Basis of a complement of `w` inside `x` (with `w ⊆ x`), chosen greedily
/// from the canonical basis of `x`.
pub fn quotient_basis<T: Scalar>(x: &Mat<T>, w: &Mat<T>) -> Mat<T> {
    let cx = canonical(x);
    let mut acc = canonical(w);
    let mut base = acc.rank();
    let mut chosen = Vec::new();
    for j in 0..cx.cols() {
        let cand = acc.hstack(&cx.select_cols(&[j]));
        let r = cand.rank();
        if r > base {
            acc = cand;
            base = r;
            chosen.push(j);
        }
    }
    cx.select_cols(&chosen)
}

/// Standard basis vectors completing `w` to the whole space, lowest index first.
pub fn standard_complement<T: Scalar>(w: &Mat<T>) -> Vec<usize> {
    let n = w.rows();
    let mut acc = w.clone();
    let mut base = acc.rank();
    let mut chosen = Vec::new();
    for j in 0..n {
        let mut e = Mat::zeros(n, 1);
        e[(j, 0)] = T::one();
        let cand = acc.hstack(&e);
        let r = cand.rank();
        if r > base {
            acc = cand;
            base = r;
            chosen.push(j);
        }
    }
    chosen
}

/// Coordinates of the columns of `v` in the independent columns of `basis`.
pub fn coords<T: Scalar>(basis: &Mat<T>, v: &Mat<T>) -> Option<Mat<T>> {
    basis.solve(v)
}

/// Indices of a maximal independent set of columns, greedy from the left.
pub fn independent_cols<T: Scalar>(m: &Mat<T>) -> Vec<usize> {
    m.rref().1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;

    fn q(rows: &[&[i64]]) -> Mat<Rational> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::from_i64(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn intersection_and_sum() {
        let a = q(&[&[1, 0], &[0, 1], &[0, 0]]);
        let b = q(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(intersect(&a, &b), q(&[&[0], &[1], &[0]]));
        assert_eq!(sum(&a, &b), Mat::identity(3));
    }

    #[test]
    fn preimage_of_line() {
        let f = q(&[&[1, 1], &[0, 0]]);
        let line = q(&[&[0], &[1]]);
        assert!(span_eq(&preimage(&f, &line), &q(&[&[1], &[-1]])));
    }

    #[test]
    fn quotient_is_complement() {
        let x = Mat::<Rational>::identity(3);
        let w = q(&[&[1], &[1], &[0]]);
        let c = quotient_basis(&x, &w);
        assert_eq!(c.cols(), 2);
        assert_eq!(w.hstack(&c).rank(), 3);
    }
}
