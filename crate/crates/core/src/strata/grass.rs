//! The subbundle `E_n ↪ E ⊕ F` and its Plücker coordinates.

use super::{decompose_stratum, equivalent_cc, StrataDecomposition};
use crate::arith::{Local, Rational};
use crate::atlas::{same_point, stratum};
use crate::error::{Error, Result};
use crate::geniso::GenIso;
use crate::matrix::{subsets, MatQ};
use crate::report::Report;

use super::collineation::normalize_projective;

#[derive(Clone, Debug, PartialEq)]
pub struct PlueckerVector {
    /// `C(2n, n)` maximal minors in lexicographic row-subset order, first
    /// nonzero entry 1.
    pub coords: Vec<Rational>,
    /// The `2n x n` closed-fibre matrix `[CE; CF · iso]`.
    pub fibre: MatQ,
}

/// Plücker coordinates of an `2n x n` matrix of rank `n`.
pub fn pluecker_of(m: &MatQ) -> Result<Vec<Rational>> {
    let n = m.cols();
    let all: Vec<usize> = (0..n).collect();
    let raw: Vec<Rational> = subsets(m.rows(), n).iter().map(|rows| m.submatrix(rows, &all).det()).collect();
    normalize_projective(&raw).ok_or(Error::NotASubbundle { rank: m.rank(), n })
}

pub fn grass_point<S: Local>(phi: &GenIso<S>) -> Result<PlueckerVector> {
    let n = phi.n;
    let stacked = phi.ce().vstack(&phi.cf().mul(&phi.iso));
    let fibre = stacked.residue()?;
    let rank = fibre.rank();
    if rank != n {
        return Err(Error::NotASubbundle { rank, n });
    }
    Ok(PlueckerVector { coords: pluecker_of(&fibre)?, fibre })
}

fn decompose_closed<S: Local>(phi: &GenIso<S>) -> Result<(GenIso<Rational>, StrataDecomposition)> {
    let bar = phi.closed_fibre()?;
    let st = stratum(&bar);
    let dec = decompose_stratum(&bar, &st.i, &st.j)?;
    Ok((bar, dec))
}

/// Two points over the same Plücker point share flags and core; the
/// collineation parts are reported but not required to agree.
pub fn grass_fibre_check<S: Local>(p1: &GenIso<S>, p2: &GenIso<S>) -> Result<Report> {
    let mut rep = Report::new();
    let g1 = grass_point(p1)?;
    let g2 = grass_point(p2)?;
    rep.check("same_pluecker", g1.coords == g2.coords);
    let (_, d1) = decompose_closed(p1)?;
    let (_, d2) = decompose_closed(p2)?;
    rep.check("same_stratum", d1.i_set == d2.i_set && d1.j_set == d2.j_set);
    if d1.i_set != d2.i_set || d1.j_set != d2.j_set {
        return Ok(rep);
    }
    rep.check("same_flag_e", d1.flag_e == d2.flag_e);
    rep.check("same_flag_f", d1.flag_f == d2.flag_f);
    rep.check("same_core", same_point(&d1.core, &d2.core)?);
    let mut differ = Vec::new();
    for (k, (a, b)) in d1.phis.iter().zip(&d2.phis).enumerate() {
        if !equivalent_cc(a, b)? {
            differ.push(format!("phi{}", k + 1));
        }
    }
    for (k, (a, b)) in d1.psis.iter().zip(&d2.psis).enumerate() {
        if !equivalent_cc(a, b)? {
            differ.push(format!("psi{}", k + 1));
        }
    }
    rep.check_detail("collineations_free", true, differ.join(","));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_ratfun, Scalar};
    use crate::geniso::from_matrix;
    use crate::matrix::{Mat, MatK};

    fn mk(rows: &[&[&str]]) -> MatK {
        MatK::from_rows(rows.iter().map(|r| r.iter().map(|s| parse_ratfun(s).unwrap()).collect()).collect())
            .unwrap()
    }

    #[test]
    fn identity_is_the_graph() {
        let g = grass_point(&from_matrix(&MatK::identity(2)).unwrap()).unwrap();
        let graph = MatQ::identity(2).vstack(&MatQ::identity(2));
        assert_eq!(g.coords, pluecker_of(&graph).unwrap());
        assert_eq!(g.coords.len(), 6);
    }

    #[test]
    fn worked_limit_subspace() {
        let g = grass_point(&from_matrix(&mk(&[&["t^-1", "0"], &["0", "t^2"]])).unwrap()).unwrap();
        // e_1 survives on the F side only, e_2 on the E side only
        let want: MatQ = Mat::from_fn(4, 2, |i, j| {
            if (i, j) == (1, 1) || (i, j) == (2, 0) {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        assert_eq!(g.coords, pluecker_of(&want).unwrap());
    }
}
