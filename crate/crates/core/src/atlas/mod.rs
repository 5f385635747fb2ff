//! Charts, admissible pairs, diagonalization and strata.

pub mod chart;
pub mod reduce;
pub mod schur;

use serde::Serialize;

use crate::arith::Local;
use crate::geniso::GenIso;

pub use chart::{chart_locate, same_point, toric_coordinates, ChartAddress, ChartCoords, ChartLocation, ToricPoint};
pub use reduce::{
    diagonalize, diagonalize_with, find_admissible, is_admissible, leading_minors, normal_form, reduce,
    verify_diagonalization, BasisChoice, Diagonalization, Reduction,
};
pub use schur::{decompose_matrix, recompose_matrix, schur_coords, SchurCoords};

/// `ι_l : [1, n+1] -> [0, n]`.
pub fn iota(l: usize, i: usize) -> usize {
    if i <= l {
        i
    } else if i == l + 1 {
        0
    } else {
        i - 1
    }
}

/// Closed-point stratum. Indices are 0-based section indices, as in the
/// chains `μ_0..μ_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumIndex {
    #[serde(rename = "I")]
    pub i: Vec<usize>,
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    /// Sections that vanish identically, not just at the closed point.
    pub zero_mu: Vec<usize>,
    pub zero_lambda: Vec<usize>,
}

impl StratumIndex {
    /// `min I + min J >= n` (vacuous when either side is empty).
    pub fn disjointness_holds(&self, n: usize) -> bool {
        match (self.i.first(), self.j.first()) {
            (Some(a), Some(b)) => a + b >= n,
            _ => true,
        }
    }
}

pub fn stratum<S: Local>(phi: &GenIso<S>) -> StratumIndex {
    let pick = |xs: Vec<S>, f: &dyn Fn(&S) -> bool| -> Vec<usize> {
        xs.iter().enumerate().filter(|(_, x)| f(x)).map(|(k, _)| k).collect()
    };
    StratumIndex {
        i: pick(phi.mus(), &|x| !x.is_unit()),
        j: pick(phi.lambdas(), &|x| !x.is_unit()),
        zero_mu: pick(phi.mus(), &|x| x.is_zero()),
        zero_lambda: pick(phi.lambdas(), &|x| x.is_zero()),
    }
}

/// Convenience: the stratum of a matrix-built point.
pub fn stratum_of_matrix(x: &crate::matrix::MatK) -> crate::Result<StratumIndex> {
    Ok(stratum(&crate::geniso::from_matrix(x)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_ratfun;
    use crate::matrix::MatK;

    fn mk(rows: &[&[&str]]) -> MatK {
        MatK::from_rows(rows.iter().map(|r| r.iter().map(|s| parse_ratfun(s).unwrap()).collect()).collect())
            .unwrap()
    }

    #[test]
    fn iota_is_a_bijection() {
        for n in 0..5 {
            for l in 0..=n {
                let mut img: Vec<usize> = (1..=n + 1).map(|i| iota(l, i)).collect();
                img.sort_unstable();
                assert_eq!(img, (0..=n).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn worked_strata() {
        let s = stratum_of_matrix(&MatK::identity(2)).unwrap();
        assert!(s.i.is_empty() && s.j.is_empty());
        let s = stratum_of_matrix(&mk(&[&["t^-1", "0"], &["0", "t^2"]])).unwrap();
        assert_eq!((s.i.clone(), s.j.clone()), (vec![1], vec![1]));
        assert!(s.disjointness_holds(2));
        let s = stratum_of_matrix(&mk(&[&["1", "1"], &["1", "1+t"]])).unwrap();
        assert_eq!((s.i, s.j), (vec![], vec![1]));
    }
}
