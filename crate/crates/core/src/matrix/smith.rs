use super::MatK;
use crate::arith::{RatFun, Valuation};
use crate::error::{Error, Result};

/// `U · φ · V = diag(t^{m_1}, …, t^{m_n})` with `U, V ∈ GL_n(A)` and `m` ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct SmithData {
    pub u: MatK,
    pub v: MatK,
    pub m: Vec<i64>,
}

impl SmithData {
    pub fn diagonal(&self) -> MatK {
        let d: Vec<RatFun> = self.m.iter().map(|&k| RatFun::t_pow(k)).collect();
        MatK::diag(&d)
    }
}

/// Smith form over `A`. Pivot: minimal order, ties to the lowest (row, col).
pub fn smith_dvr(phi: &MatK) -> Result<SmithData> {
    if !phi.is_square() {
        return Err(Error::SizeMismatch(format!("{}x{} is not square", phi.rows(), phi.cols())));
    }
    let n = phi.rows();
    let mut w = phi.clone();
    let mut u = MatK::identity(n);
    let mut v = MatK::identity(n);
    let mut m = Vec::with_capacity(n);
    for k in 0..n {
        let mut best: Option<(Valuation, usize, usize)> = None;
        for i in k..n {
            for j in k..n {
                let val = w[(i, j)].tval();
                if best.map_or(true, |(b, _, _)| val < b) {
                    best = Some((val, i, j));
                }
            }
        }
        let (val, pi, pj) = best.unwrap();
        let e = val.finite().ok_or(Error::Singular)?;
        w.swap_rows(k, pi);
        u.swap_rows(k, pi);
        w.swap_cols(k, pj);
        v.swap_cols(k, pj);
        let tk = RatFun::t_pow(e);
        let unit = &tk / &w[(k, k)];
        w.scale_row(k, &unit);
        u.scale_row(k, &unit);
        for i in k + 1..n {
            if !w[(i, k)].is_zero() {
                let f = -&(&w[(i, k)] / &tk);
                w.add_row_multiple(i, k, &f);
                u.add_row_multiple(i, k, &f);
            }
        }
        for j in k + 1..n {
            if !w[(k, j)].is_zero() {
                let f = -&(&w[(k, j)] / &tk);
                w.add_col_multiple(j, k, &f);
                v.add_col_multiple(j, k, &f);
            }
        }
        m.push(e);
    }
    Ok(SmithData { u, v, m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_ratfun;

    fn mk(rows: &[&[&str]]) -> MatK {
        MatK::from_rows(rows.iter().map(|r| r.iter().map(|s| parse_ratfun(s).unwrap()).collect()).collect())
            .unwrap()
    }

    fn check(phi: &MatK, m: &[i64]) {
        let s = smith_dvr(phi).unwrap();
        assert_eq!(s.m, m);
        assert_eq!(s.u.mul(phi).mul(&s.v), s.diagonal());
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
    }

    #[test]
    fn examples() {
        check(&MatK::identity(3), &[0, 0, 0]);
        let s = smith_dvr(&MatK::identity(2)).unwrap();
        assert!(s.u.is_identity() && s.v.is_identity());
        check(&mk(&[&["t^2", "0"], &["0", "t^-1"]]), &[-1, 2]);
        check(&mk(&[&["1", "1"], &["1", "1+t"]]), &[0, 1]);
    }

    #[test]
    fn singular() {
        assert_eq!(smith_dvr(&mk(&[&["1", "t"], &["1", "t"]])), Err(Error::Singular));
    }
}
