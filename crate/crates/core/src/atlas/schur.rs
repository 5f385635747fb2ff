use crate::arith::RatFun;
use crate::error::{Error, Result};
use crate::matrix::{perm_matrix, MatK};

/// Output of the Schur recursion for `x` under `(α, β)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchurCoords {
    /// Lower unitriangular, entries `y_{ji}` below the diagonal.
    pub y: MatK,
    /// Upper unitriangular, entries `z_{ij}` above the diagonal.
    pub z: MatK,
    /// `t_i / t_0` for `i = 1..n`.
    pub t_over_t0: Vec<RatFun>,
    /// Diagonal entries `x^{(k-1)}_{kk}` of the normalized recursion.
    pub pivots: Vec<RatFun>,
}

/// Run the recursion on `x' = n_α^{-1} x n_β`, i.e. `x'_{ij} = x_{α(i), β(j)}`
/// (0-based permutations).
pub fn schur_coords(x: &MatK, alpha: &[usize], beta: &[usize]) -> Result<SchurCoords> {
    let n = x.rows();
    if !x.is_square() || alpha.len() != n || beta.len() != n {
        return Err(Error::SizeMismatch("schur_coords".into()));
    }
    // cur holds x^{(k)} on the trailing block
    let mut cur = MatK::from_fn(n, n, |i, j| x[(alpha[i], beta[j])].clone());
    let mut y = MatK::identity(n);
    let mut z = MatK::identity(n);
    let mut pivots = Vec::with_capacity(n);
    let mut t = Vec::with_capacity(n);
    let mut acc = RatFun::one();
    for k in 0..n {
        let p = cur[(k, k)].clone();
        if p.is_zero() {
            return Err(Error::ZeroPivot(k + 1));
        }
        for i in k + 1..n {
            y[(i, k)] = &cur[(i, k)] / &p;
            z[(k, i)] = &cur[(k, i)] / &p;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                cur[(i, j)] = &(&cur[(i, j)] / &p) - &(&y[(i, k)] * &z[(k, j)]);
            }
        }
        acc = &acc * &p;
        pivots.push(p);
        t.push(acc.clone());
    }
    Ok(SchurCoords { y, z, t_over_t0: t, pivots })
}

/// `(Y, D, Z)` with `x = n_α Y D Z n_β^{-1}`.
pub fn decompose_matrix(x: &MatK, alpha: &[usize], beta: &[usize]) -> Result<(MatK, MatK, MatK)> {
    let s = schur_coords(x, alpha, beta)?;
    Ok((s.y, MatK::diag(&s.t_over_t0), s.z))
}

/// Multiply the factors back together.
pub fn recompose_matrix(alpha: &[usize], beta: &[usize], y: &MatK, d: &MatK, z: &MatK) -> MatK {
    let na = perm_matrix::<RatFun>(alpha);
    let nb_inv = perm_matrix::<RatFun>(beta).transpose();
    na.mul(y).mul(d).mul(z).mul(&nb_inv)
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
    fn worked_two_by_two() {
        let x = mk(&[&["1", "1"], &["1", "1+t"]]);
        let s = schur_coords(&x, &[0, 1], &[0, 1]).unwrap();
        assert_eq!(s.y[(1, 0)], RatFun::one());
        assert_eq!(s.z[(0, 1)], RatFun::one());
        assert_eq!(s.t_over_t0, vec![RatFun::one(), RatFun::t()]);
        let (y, d, z) = decompose_matrix(&x, &[0, 1], &[0, 1]).unwrap();
        assert_eq!(y, mk(&[&["1", "0"], &["1", "1"]]));
        assert_eq!(d, mk(&[&["1", "0"], &["0", "t"]]));
        assert_eq!(z, mk(&[&["1", "1"], &["0", "1"]]));
        assert_eq!(recompose_matrix(&[0, 1], &[0, 1], &y, &d, &z), x);
    }

    #[test]
    fn diagonal_input() {
        let x = mk(&[&["t^-2", "0", "0"], &["0", "t", "0"], &["0", "0", "t^3"]]);
        let s = schur_coords(&x, &[0, 1, 2], &[0, 1, 2]).unwrap();
        assert!(s.y.is_identity() && s.z.is_identity());
        assert_eq!(s.t_over_t0, vec![RatFun::t_pow(-2), RatFun::t(), RatFun::t_pow(3)]);
    }

    #[test]
    fn zero_pivot() {
        let x = mk(&[&["0", "1"], &["1", "0"]]);
        assert_eq!(schur_coords(&x, &[0, 1], &[0, 1]), Err(Error::ZeroPivot(1)));
        assert!(schur_coords(&x, &[1, 0], &[0, 1]).is_ok());
    }
}
