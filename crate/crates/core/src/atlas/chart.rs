use serde::Serialize;

use super::reduce::{diagonalize, find_admissible, Diagonalization};
use crate::arith::{Local, Scalar};
use crate::error::{Error, Result};
use crate::geniso::GenIso;
use crate::matrix::{perm_matrix, Mat};

/// `(α, β, l)`, permutations 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartAddress {
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    pub l: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChartCoords<S: Scalar> {
    /// `t_{ι_l(i+1)} / t_{ι_l(i)}` for `i = 1..n`.
    pub t_ratios: Vec<S>,
    /// Lower unitriangular.
    pub y: Mat<S>,
    /// Upper unitriangular.
    pub z: Mat<S>,
    /// Only defined when every section is nonzero.
    pub t_over_t0: Option<Vec<S>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ToricPoint<S: Scalar> {
    pub l: usize,
    pub a: Vec<S>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChartLocation<S: Scalar> {
    pub address: ChartAddress,
    pub coords: ChartCoords<S>,
    pub toric: ToricPoint<S>,
    pub diagonalization: Diagonalization<S>,
}

fn prod<S: Scalar>(xs: &[S]) -> S {
    xs.iter().fold(S::one(), |acc, x| acc.times(x))
}

/// The `n` toric generators on `T̃_l` in terms of the sections and the
/// diagonal entries `φ`. `None` if the chart formula divides by a zero section.
pub fn toric_coordinates<S: Local>(l: usize, phi: &[S], mus: &[S], lambdas: &[S]) -> Option<Vec<S>> {
    let n = phi.len();
    // phi, mus, lambdas are 0-based here; the formulas use φ_1..φ_n.
    let ph = |k: usize| &phi[k - 1];
    let mut a = Vec::with_capacity(n);
    for nu in 1..=n {
        let v = if nu + 1 <= l {
            ph(nu + 1).divide(ph(nu))?.times(&lambdas[nu]).times(&mus[n - nu])
        } else if nu == l {
            prod(&mus[..=n - l]).divide(&ph(l).times(&prod(&lambdas[..l])))?
        } else if nu == l + 1 {
            ph(l + 1).times(&prod(&lambdas[..=l])).divide(&prod(&mus[..n - l]))?
        } else {
            ph(nu).divide(ph(nu - 1))?.times(&lambdas[nu - 1]).times(&mus[n - nu + 1])
        };
        a.push(v);
    }
    Some(a)
}

/// `t_i / t_0` from the normal form, when all sections are nonzero.
fn t_over_t0<S: Local>(phi: &[S], mus: &[S], lambdas: &[S]) -> Option<Vec<S>> {
    let n = phi.len();
    (1..=n)
        .map(|i| phi[i - 1].times(&prod(&lambdas[..i])).divide(&prod(&mus[..=n - i])))
        .collect()
}

/// Locate `Φ` in the atlas: admissible pair, diagonalization, smallest
/// integral `l`, and the chart coordinates.
pub fn chart_locate<S: Local>(phi: &GenIso<S>) -> Result<ChartLocation<S>> {
    let n = phi.n;
    let (alpha, beta) = find_admissible(phi)?;
    let dg = diagonalize(phi, &alpha, &beta)?;
    let (mus, lambdas) = (phi.mus(), phi.lambdas());
    let (l, a) = (0..=n)
        .find_map(|l| {
            toric_coordinates(l, &dg.phi, &mus, &lambdas)
                .filter(|a| a.iter().all(|x| x.is_integral()))
                .map(|a| (l, a))
        })
        .ok_or_else(|| Error::Inconsistent("no chart contains the point".into()))?;
    let y = dg.v[0].mul(&perm_matrix(&alpha)).try_inverse()?;
    let z = dg.u[0].mul(&perm_matrix(&beta));
    let coords = ChartCoords { t_ratios: a.clone(), y, z, t_over_t0: t_over_t0(&dg.phi, &mus, &lambdas) };
    Ok(ChartLocation {
        address: ChartAddress { alpha, beta, l },
        coords,
        toric: ToricPoint { l, a },
        diagonalization: dg,
    })
}

/// Equality of points, decided by comparing chart data: the located chart is
/// a function of the point and the chart coordinates are injective.
pub fn same_point<S: Local>(p: &GenIso<S>, q: &GenIso<S>) -> Result<bool> {
    if p.n != q.n {
        return Ok(false);
    }
    let (a, b) = (chart_locate(p)?, chart_locate(q)?);
    Ok(a.address == b.address && a.coords.t_ratios == b.coords.t_ratios && a.coords.y == b.coords.y && a.coords.z == b.coords.z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_ratfun, RatFun};
    use crate::atlas::schur::schur_coords;
    use crate::geniso::from_matrix;
    use crate::matrix::MatK;

    fn mk(rows: &[&[&str]]) -> MatK {
        MatK::from_rows(rows.iter().map(|r| r.iter().map(|s| parse_ratfun(s).unwrap()).collect()).collect())
            .unwrap()
    }

    fn r(s: &str) -> RatFun {
        parse_ratfun(s).unwrap()
    }

    #[test]
    fn worked_charts() {
        let loc = chart_locate(&from_matrix(&mk(&[&["t^-2", "0"], &["0", "t^-1"]])).unwrap()).unwrap();
        assert_eq!(loc.address, ChartAddress { alpha: vec![0, 1], beta: vec![0, 1], l: 2 });
        assert_eq!(loc.coords.t_ratios, vec![r("t"), r("t")]);

        let loc = chart_locate(&from_matrix(&MatK::identity(2)).unwrap()).unwrap();
        assert_eq!(loc.address.l, 0);
        assert_eq!(loc.coords.t_ratios, vec![r("1"), r("1")]);

        let loc = chart_locate(&from_matrix(&mk(&[&["t^-1", "0"], &["0", "t^2"]])).unwrap()).unwrap();
        assert_eq!(loc.address.l, 1);
        assert_eq!(loc.coords.t_ratios, vec![r("t"), r("t^2")]);
    }

    #[test]
    fn schur_route_agrees() {
        let x = mk(&[&["1", "t^-1", "2"], &["t", "1+t", "0"], &["3", "t^2", "t^-2"]]);
        let loc = chart_locate(&from_matrix(&x).unwrap()).unwrap();
        let s = schur_coords(&x, &loc.address.alpha, &loc.address.beta).unwrap();
        assert_eq!(loc.coords.y, s.y);
        assert_eq!(loc.coords.z, s.z);
        assert_eq!(loc.coords.t_over_t0.unwrap(), s.t_over_t0);
    }

    #[test]
    fn same_point_detects_change() {
        let x = from_matrix(&mk(&[&["1", "1"], &["1", "1+t"]])).unwrap();
        let y = from_matrix(&mk(&[&["1", "1"], &["1", "1+2*t"]])).unwrap();
        assert!(same_point(&x, &x).unwrap());
        assert!(!same_point(&x, &y).unwrap());
    }
}
