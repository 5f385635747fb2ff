use itertools::Itertools;

use super::Mat;
use crate::arith::Scalar;
use crate::error::{Error, Result};

/// All `r`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(r).collect()
}

/// Determinant of rows `a`, columns `b` (1-based, ascending).
pub fn minor<T: Scalar>(m: &Mat<T>, a: &[usize], b: &[usize]) -> Result<T> {
    if a.len() != b.len() || a.len() > m.rows().min(m.cols()) {
        return Err(Error::SizeMismatch(format!("minor of size {}x{}", a.len(), b.len())));
    }
    let check = |s: &[usize], bound: usize| {
        s.iter().all(|&x| x >= 1 && x <= bound) && s.windows(2).all(|w| w[0] < w[1])
    };
    if !check(a, m.rows()) || !check(b, m.cols()) {
        return Err(Error::SizeMismatch("index set out of range or not ascending".into()));
    }
    let a0: Vec<usize> = a.iter().map(|x| x - 1).collect();
    let b0: Vec<usize> = b.iter().map(|x| x - 1).collect();
    Ok(m.submatrix(&a0, &b0).det())
}

/// Matrix of `r x r` minors, index sets in lexicographic order. `r = 0` gives `[1]`.
pub fn compound<T: Scalar>(m: &Mat<T>, r: usize) -> Result<Mat<T>> {
    if r > m.rows().min(m.cols()) {
        return Err(Error::SizeMismatch(format!("compound of order {r} for a {}x{} matrix", m.rows(), m.cols())));
    }
    let rs = subsets(m.rows(), r);
    let cs = subsets(m.cols(), r);
    Ok(Mat::from_fn(rs.len(), cs.len(), |i, j| m.submatrix(&rs[i], &cs[j]).det()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_ratfun, RatFun, Rational};

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn worked_minors() {
        let m = Mat::from_rows(vec![
            vec![RatFun::one(), RatFun::one()],
            vec![RatFun::one(), parse_ratfun("1+t").unwrap()],
        ])
        .unwrap();
        assert_eq!(minor(&m, &[1, 2], &[1, 2]).unwrap(), RatFun::t());
        assert_eq!(minor(&m, &[1], &[1]).unwrap(), RatFun::one());
        let i3 = Mat::<Rational>::identity(3);
        assert_eq!(minor(&i3, &[1, 3], &[1, 2]).unwrap(), q(0));
        assert!(minor(&i3, &[1, 2], &[1]).is_err());
        assert!(minor(&i3, &[2, 1], &[1, 2]).is_err());
    }

    #[test]
    fn diagonal_compound() {
        let d = Mat::diag(&[q(2), q(3), q(5)]);
        assert_eq!(compound(&d, 2).unwrap(), Mat::diag(&[q(6), q(10), q(15)]));
        assert_eq!(compound(&d, 3).unwrap(), Mat::diag(&[q(30)]));
        assert!(compound(&d, 4).is_err());
    }
}
