use super::MatK;
use crate::arith::{RatFun, Valuation};
use crate::error::{Error, Result};

/// Column Hermite form over `A` of an `n x k` matrix of rank `n`.
///
/// The result is `n x n`, lower triangular, with pivots `t^{k_i}` and every
/// entry left of a pivot reduced to its Laurent terms below `k_i`.
pub fn hnf_dvr(m: &MatK) -> Result<MatK> {
    let n = m.rows();
    if m.cols() < n {
        return Err(Error::Singular);
    }
    let mut w = m.clone();
    let mut pivots = Vec::with_capacity(n);
    for i in 0..n {
        let mut best: Option<(Valuation, usize)> = None;
        for j in i..w.cols() {
            let val = w[(i, j)].tval();
            if best.map_or(true, |(b, _)| val < b) {
                best = Some((val, j));
            }
        }
        let (val, pj) = best.unwrap();
        let k = val.finite().ok_or(Error::Singular)?;
        w.swap_cols(i, pj);
        let tk = RatFun::t_pow(k);
        let unit = &tk / &w[(i, i)];
        w.scale_col(i, &unit);
        for j in i + 1..w.cols() {
            if !w[(i, j)].is_zero() {
                let f = -&(&w[(i, j)] / &tk);
                w.add_col_multiple(j, i, &f);
            }
        }
        pivots.push(k);
    }
    for i in 0..n {
        for j in 0..i {
            let e = &w[(i, j)];
            if e.tval() >= Valuation::Fin(pivots[i]) {
                if !e.is_zero() {
                    let f = -&(e / &RatFun::t_pow(pivots[i]));
                    w.add_col_multiple(j, i, &f);
                }
                continue;
            }
            let kept = e.truncate_below(pivots[i]);
            let f = -&(&(e - &kept) / &RatFun::t_pow(pivots[i]));
            w.add_col_multiple(j, i, &f);
        }
    }
    let rows: Vec<usize> = (0..n).collect();
    Ok(w.submatrix(&rows, &rows))
}

/// A full-rank `A`-submodule of `K^n`, stored by its canonical basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    basis: MatK,
}

impl Lattice {
    pub fn new(generators: &MatK) -> Result<Lattice> {
        Ok(Lattice { basis: hnf_dvr(generators)? })
    }

    /// `A^n`.
    pub fn standard(n: usize) -> Lattice {
        Lattice { basis: MatK::identity(n) }
    }

    /// `t^k A^n`.
    pub fn scaled(n: usize, k: i64) -> Lattice {
        Lattice { basis: MatK::scalar(n, &RatFun::t_pow(k)) }
    }

    pub fn basis(&self) -> &MatK {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn sum(&self, o: &Lattice) -> Result<Lattice> {
        Lattice::new(&self.basis.hstack(&o.basis))
    }

    pub fn dual(&self) -> Result<Lattice> {
        Lattice::new(&self.basis.try_inverse()?.transpose())
    }

    pub fn intersect(&self, o: &Lattice) -> Result<Lattice> {
        self.dual()?.sum(&o.dual()?)?.dual()
    }

    pub fn image(phi: &MatK, l: &Lattice) -> Result<Lattice> {
        Lattice::new(&phi.mul(&l.basis))
    }

    pub fn preimage(phi: &MatK, l: &Lattice) -> Result<Lattice> {
        Lattice::new(&phi.try_inverse()?.mul(&l.basis))
    }

    pub fn contains(&self, o: &Lattice) -> Result<bool> {
        Ok(self.sum(o)? == *self)
    }

    /// Whether the vector lies in the lattice.
    pub fn contains_vector(&self, v: &MatK) -> bool {
        match self.basis.solve(v) {
            Some(c) => c.is_integral(),
            None => false,
        }
    }
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
    fn diagonal_unchanged() {
        let d = mk(&[&["t^2", "0"], &["0", "t^-1"]]);
        assert_eq!(hnf_dvr(&d).unwrap(), d);
        assert_eq!(Lattice::new(&MatK::scalar(3, &RatFun::t())).unwrap(), Lattice::scaled(3, 1));
    }

    #[test]
    fn reduced_off_pivot() {
        let b = mk(&[&["t^2", "0"], &["t^-1 + 3 + t^3", "t"]]);
        let h = hnf_dvr(&b).unwrap();
        assert_eq!(h, mk(&[&["t^2", "0"], &["t^-1 + 3", "t"]]));
    }

    #[test]
    fn nested_intersection() {
        let a = Lattice::standard(2);
        let b = Lattice::scaled(2, 1);
        assert_eq!(a.intersect(&b).unwrap(), b);
        assert_eq!(a.sum(&b).unwrap(), a);
        assert_eq!(a.sum(&a).unwrap(), a);
    }

    #[test]
    fn preimage_example() {
        // generators v with diag(t^-1, t^2) v ∈ A^2, intersected with A^2
        let phi = mk(&[&["t^-1", "0"], &["0", "t^2"]]);
        let l = Lattice::preimage(&phi, &Lattice::standard(2)).unwrap().intersect(&Lattice::standard(2)).unwrap();
        assert_eq!(*l.basis(), mk(&[&["t", "0"], &["0", "1"]]));
        for gen in [mk(&[&["t"], &["0"]]), mk(&[&["0"], &["1"]])] {
            assert!(l.contains_vector(&gen));
            assert!(phi.mul(&gen).is_integral());
        }
        assert!(!l.contains_vector(&mk(&[&["1"], &["0"]])));
    }
}
