//! Splitting off the rank-one piece along a unit 1x1 twisted minor, and the
//! resulting diagonalization and admissible-pair search.

use crate::arith::{Local, Scalar, Valuation};
use crate::bf::{wedge_bwd, wedge_fwd, BfMorphism};
use crate::error::{Error, Result};
use crate::geniso::{gl_action, wedge_phi, GenIso};
use crate::matrix::{perm_matrix, Mat};
use crate::report::Report;

/// Which unit coordinate to pivot on when writing down kernel bases.
/// The final diagonalization does not depend on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisChoice {
    First,
    Last,
}

/// A rank `n-1` submodule with an explicit basis and coordinate map.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame<S: Scalar> {
    /// `n x (n-1)`.
    pub basis: Mat<S>,
    /// `(n-1) x n`, a left inverse of `basis` on the submodule.
    pub coord: Mat<S>,
}

/// The reduced object `Φ'` together with the splitting data.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction<S: Scalar> {
    pub reduced: GenIso<S>,
    /// The 1x1 twisted minor at `(1, 1)`.
    pub d: S,
    /// `c_i ∈ E_i`, columns.
    pub c: Vec<Mat<S>>,
    /// `d_i ∈ F_i`, columns.
    pub dv: Vec<Mat<S>>,
    pub k: Vec<Frame<S>>,
    pub r: Vec<Frame<S>>,
    /// `g_{n-1}` restricted to `K_n -> K_{n-1}`.
    pub g_last: Mat<S>,
}

fn unit_pivot<S: Local>(w: &Mat<S>, choice: BasisChoice) -> Option<usize> {
    let mut idx = (0..w.cols()).filter(|&j| w[(0, j)].is_unit());
    match choice {
        BasisChoice::First => idx.next(),
        BasisChoice::Last => idx.last(),
    }
}

/// Kernel of the row `w` through a unit coordinate `p`.
fn kernel_frame<S: Local>(w: &Mat<S>, p: usize) -> Frame<S> {
    let n = w.cols();
    let others: Vec<usize> = (0..n).filter(|&j| j != p).collect();
    let wp = w[(0, p)].clone();
    let basis = Mat::from_fn(n, n - 1, |i, c| {
        let j = others[c];
        if i == j {
            S::one()
        } else if i == p {
            w[(0, j)].divide(&wp).unwrap().negate()
        } else {
            S::zero()
        }
    });
    let coord = Mat::identity(n).select_rows(&others);
    Frame { basis, coord }
}

fn restrict<S: Local>(f: &Mat<S>, from: &Frame<S>, to: &Frame<S>) -> Result<Mat<S>> {
    let fb = f.mul(&from.basis);
    let m = to.coord.mul(&fb);
    if to.basis.mul(&m) != fb {
        return Err(Error::Inconsistent("map does not preserve the complementary submodules".into()));
    }
    Ok(m)
}

fn e1<S: Scalar>(n: usize) -> Mat<S> {
    Mat::from_fn(n, 1, |i, _| if i == 0 { S::one() } else { S::zero() })
}

/// Reduce along the `(1, 1)` minor. `step` labels the error on failure.
pub fn reduce<S: Local>(phi: &GenIso<S>, choice: BasisChoice, step: usize) -> Result<Reduction<S>> {
    let n = phi.n;
    if n == 0 {
        return Err(Error::SizeMismatch("cannot reduce a rank 0 object".into()));
    }
    let wb: Vec<Mat<S>> = phi.gs.iter().map(|g| wedge_bwd(g, 1).map(|w| w.mat)).collect::<Result<_>>()?;
    let wf: Vec<Mat<S>> = phi.hs.iter().map(|h| wedge_fwd(h, 1).map(|w| w.mat)).collect::<Result<_>>()?;

    let mut c = vec![e1::<S>(n)];
    for i in 0..n {
        c.push(wb[i].mul(&c[i]));
    }
    let mut dv = vec![Mat::zeros(n, 1); n + 1];
    dv[n] = phi.iso.mul(&c[n]);
    for i in (0..n).rev() {
        dv[i] = wf[i].mul(&dv[i + 1]);
    }
    let d = dv[0][(0, 0)].clone();
    if !d.is_unit() {
        return Err(Error::NotAdmissible(step));
    }

    let mut rho = vec![e1::<S>(n).transpose()];
    for i in 0..n {
        rho.push(rho[i].mul(&wf[i]));
    }
    let mut w = vec![Mat::zeros(1, n); n + 1];
    w[n] = rho[n].mul(&phi.iso);
    for i in (0..n).rev() {
        w[i] = w[i + 1].mul(&wb[i]);
    }

    let pivot = |row: &Mat<S>| unit_pivot(row, choice).ok_or_else(|| Error::Inconsistent("no unit coordinate".into()));
    let mut k = vec![kernel_frame(&w[0], 0)];
    for wi in &w[1..] {
        k.push(kernel_frame(wi, pivot(wi)?));
    }
    let mut r = vec![kernel_frame(&rho[0], 0)];
    if n >= 1 {
        let others: Vec<usize> = (1..n).collect();
        let inv = wf[0].try_inverse()?;
        r.push(Frame { basis: inv.select_cols(&others), coord: wf[0].select_rows(&others) });
    }
    for ri in &rho[2..] {
        r.push(kernel_frame(ri, pivot(ri)?));
    }

    let mut gs = Vec::with_capacity(n - 1);
    for kk in 0..n - 1 {
        let g = &phi.gs[kk];
        gs.push(BfMorphism {
            n: n - 1,
            rank: kk,
            mu: g.mu.clone(),
            fwd: restrict(&g.fwd, &k[kk + 1], &k[kk])?,
            bwd: restrict(&g.bwd, &k[kk], &k[kk + 1])?,
        });
    }
    let mut hs = Vec::with_capacity(n - 1);
    for kk in 0..n - 1 {
        let h = &phi.hs[kk + 1];
        hs.push(BfMorphism {
            n: n - 1,
            rank: kk,
            mu: h.mu.clone(),
            fwd: restrict(&h.fwd, &r[kk + 2], &r[kk + 1])?,
            bwd: restrict(&h.bwd, &r[kk + 1], &r[kk + 2])?,
        });
    }
    let g_last = restrict(&phi.gs[n - 1].fwd, &k[n], &k[n - 1])?;
    let iso_r = restrict(&phi.iso, &k[n], &r[n])?;
    let g_inv = g_last.try_inverse().map_err(|_| Error::Inconsistent("last E-step not invertible".into()))?;
    let iso = iso_r.mul(&g_inv);
    if !iso.is_unimodular() {
        return Err(Error::Inconsistent("reduced isomorphism is not unimodular".into()));
    }
    Ok(Reduction { reduced: GenIso { n: n - 1, gs, hs, iso }, d, c, dv, k, r, g_last })
}

/// Conjugating data `u_i: E_i -> A^n`, `v_i: F_i -> A^n` onto the normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagonalization<S: Scalar> {
    pub u: Vec<Mat<S>>,
    pub v: Vec<Mat<S>>,
    pub phi: Vec<S>,
}

/// The diagonal object with the given sections and `iso = diag(φ)`.
pub fn normal_form<S: Local>(mus: &[S], lambdas: &[S], phi: &[S]) -> GenIso<S> {
    let n = phi.len();
    let gs = (0..n)
        .map(|i| {
            let mu = &mus[i];
            let f: Vec<S> = (0..n).map(|k| if k < n - i { mu.clone() } else { S::one() }).collect();
            let b: Vec<S> = (0..n).map(|k| if k < n - i { S::one() } else { mu.clone() }).collect();
            BfMorphism { n, rank: i, mu: mu.clone(), fwd: Mat::diag(&f), bwd: Mat::diag(&b) }
        })
        .collect();
    let hs = (0..n)
        .map(|i| {
            let la = &lambdas[i];
            let f: Vec<S> = (0..n).map(|k| if k < i { S::one() } else { la.clone() }).collect();
            let b: Vec<S> = (0..n).map(|k| if k < i { la.clone() } else { S::one() }).collect();
            BfMorphism { n, rank: i, mu: la.clone(), fwd: Mat::diag(&f), bwd: Mat::diag(&b) }
        })
        .collect();
    GenIso { n, gs, hs, iso: Mat::diag(phi) }
}

fn diagonalize_at_identity<S: Local>(phi: &GenIso<S>, choice: BasisChoice, step: usize) -> Result<Diagonalization<S>> {
    let n = phi.n;
    if n == 0 {
        return Ok(Diagonalization { u: vec![Mat::identity(0)], v: vec![Mat::identity(0)], phi: vec![] });
    }
    let red = reduce(phi, choice, step)?;
    let sub = diagonalize_at_identity(&red.reduced, choice, step + 1)?;
    let embed = |first: Mat<S>, rest: &Mat<S>| -> Mat<S> {
        Mat::from_fn(n, n, |i, j| match (i, j) {
            (_, 0) => first[(i, 0)].clone(),
            (0, _) => S::zero(),
            _ => rest[(i - 1, j - 1)].clone(),
        })
    };
    let mut u = Vec::with_capacity(n + 1);
    let mut v = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let ut = if i < n { sub.u[i].clone() } else { sub.u[n - 1].mul(&red.g_last) };
        let left = embed(e1(n), &ut);
        let frame = red.c[i].hstack(&red.k[i].basis);
        u.push(left.mul(&frame.try_inverse()?));

        let vt = if i >= 1 { &sub.v[i - 1] } else { &sub.v[0] };
        let left = embed(e1::<S>(n).scale(&red.d), vt);
        let frame = red.dv[i].hstack(&red.r[i].basis);
        v.push(left.mul(&frame.try_inverse()?));
    }
    let mut ph = vec![red.d.clone()];
    ph.extend(sub.phi);
    Ok(Diagonalization { u, v, phi: ph })
}

/// Diagonalize along the admissible pair `(α, β)` (0-based permutations).
pub fn diagonalize<S: Local>(phi: &GenIso<S>, alpha: &[usize], beta: &[usize]) -> Result<Diagonalization<S>> {
    diagonalize_with(phi, alpha, beta, BasisChoice::First)
}

pub fn diagonalize_with<S: Local>(
    phi: &GenIso<S>,
    alpha: &[usize],
    beta: &[usize],
    choice: BasisChoice,
) -> Result<Diagonalization<S>> {
    let n = phi.n;
    if alpha.len() != n || beta.len() != n {
        return Err(Error::SizeMismatch("permutation length".into()));
    }
    let na_inv = perm_matrix::<S>(alpha).transpose();
    let nb_inv = perm_matrix::<S>(beta).transpose();
    let moved = gl_action(&nb_inv, &na_inv, phi)?;
    let mut dg = diagonalize_at_identity(&moved, choice, 1)?;
    if n > 0 {
        dg.u[0] = dg.u[0].mul(&nb_inv);
        dg.v[0] = dg.v[0].mul(&na_inv);
    }
    Ok(dg)
}

/// Check every relation of a diagonalization against the normal form.
pub fn verify_diagonalization<S: Local>(
    phi: &GenIso<S>,
    alpha: &[usize],
    beta: &[usize],
    dg: &Diagonalization<S>,
) -> Report {
    let mut rep = Report::new();
    let n = phi.n;
    let shapes = dg.u.len() == n + 1 && dg.v.len() == n + 1 && dg.phi.len() == n;
    rep.check("shapes", shapes);
    if !shapes {
        return rep;
    }
    let nf = normal_form(&phi.mus(), &phi.lambdas(), &dg.phi);
    rep.check("phi_units", dg.phi.iter().all(|p| p.is_unit()));
    rep.check("u_unimodular", dg.u.iter().all(|m| m.is_unimodular()));
    rep.check("v_unimodular", dg.v.iter().all(|m| m.is_unimodular()));
    for i in 0..n {
        let (g, ng) = (&phi.gs[i], &nf.gs[i]);
        rep.check(format!("g{i}_fwd"), dg.u[i].mul(&g.fwd) == ng.fwd.mul(&dg.u[i + 1]));
        rep.check(format!("g{i}_bwd"), dg.u[i + 1].mul(&g.bwd) == ng.bwd.mul(&dg.u[i]));
        let (h, nh) = (&phi.hs[i], &nf.hs[i]);
        rep.check(format!("h{i}_fwd"), dg.v[i].mul(&h.fwd) == nh.fwd.mul(&dg.v[i + 1]));
        rep.check(format!("h{i}_bwd"), dg.v[i + 1].mul(&h.bwd) == nh.bwd.mul(&dg.v[i]));
    }
    rep.check("iso", dg.v[n].mul(&phi.iso) == nf.iso.mul(&dg.u[n]));
    let u0 = dg.u[0].mul(&perm_matrix(beta));
    let v0 = dg.v[0].mul(&perm_matrix(alpha));
    let unitri = |m: &Mat<S>, upper: bool| {
        (0..n).all(|i| {
            (0..n).all(|j| {
                let e = &m[(i, j)];
                if i == j {
                    e.is_one()
                } else if (j > i) == upper {
                    true
                } else {
                    e.is_zero()
                }
            })
        })
    };
    rep.check("u0_upper_unitriangular", unitri(&u0, true));
    rep.check("v0_lower_unitriangular", unitri(&v0, false));
    rep
}

/// Leading twisted minors `det_{α[1,r], β[1,r]}` (raw values), `r = 1..n`.
pub fn leading_minors<S: Local>(phi: &GenIso<S>, alpha: &[usize], beta: &[usize]) -> Result<Vec<S>> {
    let n = phi.n;
    let mut out = Vec::with_capacity(n);
    for r in 1..=n {
        let mut a: Vec<usize> = alpha[..r].iter().map(|x| x + 1).collect();
        let mut b: Vec<usize> = beta[..r].iter().map(|x| x + 1).collect();
        a.sort_unstable();
        b.sort_unstable();
        out.push(phi.det_minor(&a, &b)?.value);
    }
    Ok(out)
}

pub fn is_admissible<S: Local>(phi: &GenIso<S>, alpha: &[usize], beta: &[usize]) -> Result<bool> {
    Ok(leading_minors(phi, alpha, beta)?.iter().all(|m| m.is_unit()))
}

/// Greedy search: minimal-order 1x1 twisted minor, lexicographic tie-break,
/// then recurse on the reduced object.
pub fn find_admissible<S: Local>(phi: &GenIso<S>) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = phi.n;
    if n == 0 {
        return Ok((vec![], vec![]));
    }
    let w = wedge_phi(phi, 1)?.mat;
    let mut best: Option<(Valuation, usize, usize)> = None;
    for i in 0..n {
        for j in 0..n {
            let o = w[(i, j)].order();
            if best.map_or(true, |(b, _, _)| o < b) {
                best = Some((o, i, j));
            }
        }
    }
    let (_, i1, j1) = best.unwrap();
    let mut a0 = vec![i1];
    a0.extend((0..n).filter(|&x| x != i1));
    let mut b0 = vec![j1];
    b0.extend((0..n).filter(|&x| x != j1));
    let moved = gl_action(
        &perm_matrix::<S>(&b0).transpose(),
        &perm_matrix::<S>(&a0).transpose(),
        phi,
    )?;
    let red = reduce(&moved, BasisChoice::First, 1)?;
    let (a1, b1) = find_admissible(&red.reduced)?;
    let mut alpha = vec![i1];
    alpha.extend(a1.iter().map(|&k| a0[k + 1]));
    let mut beta = vec![j1];
    beta.extend(b1.iter().map(|&k| b0[k + 1]));
    Ok((alpha, beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_ratfun, RatFun};
    use crate::geniso::from_matrix;
    use crate::matrix::MatK;

    fn mk(rows: &[&[&str]]) -> MatK {
        MatK::from_rows(rows.iter().map(|r| r.iter().map(|s| parse_ratfun(s).unwrap()).collect()).collect())
            .unwrap()
    }

    #[test]
    fn normal_form_is_fixed() {
        let mus = vec![RatFun::one(), RatFun::t()];
        let las = vec![RatFun::one(), RatFun::t_pow(2)];
        let ph = vec![RatFun::from_int(3), parse_ratfun("1+t").unwrap()];
        let nf = normal_form(&mus, &las, &ph);
        assert!(nf.validate().passed());
        let dg = diagonalize(&nf, &[0, 1], &[0, 1]).unwrap();
        assert!(dg.u.iter().chain(&dg.v).all(|m| m.is_identity()));
        assert_eq!(dg.phi, ph);
    }

    #[test]
    fn worked_admissible_pairs() {
        let id = from_matrix(&MatK::identity(2)).unwrap();
        assert_eq!(find_admissible(&id).unwrap(), (vec![0, 1], vec![0, 1]));
        let anti = from_matrix(&mk(&[&["0", "1"], &["t", "0"]])).unwrap();
        assert_eq!(find_admissible(&anti).unwrap(), (vec![0, 1], vec![1, 0]));
        let x = from_matrix(&mk(&[&["1", "1"], &["1", "1+t"]])).unwrap();
        let (a, b) = find_admissible(&x).unwrap();
        assert_eq!((a.clone(), b.clone()), (vec![0, 1], vec![0, 1]));
        assert!(is_admissible(&x, &a, &b).unwrap());
    }

    #[test]
    fn diagonalization_relations() {
        let x = from_matrix(&mk(&[&["1", "t^-1", "2"], &["t", "1+t", "0"], &["3", "t^2", "t^-2"]])).unwrap();
        let (a, b) = find_admissible(&x).unwrap();
        let dg = diagonalize(&x, &a, &b).unwrap();
        let rep = verify_diagonalization(&x, &a, &b, &dg);
        assert!(rep.passed(), "{:?}", rep.failures());
        assert_eq!(diagonalize_with(&x, &a, &b, BasisChoice::Last).unwrap(), dg);
    }
}
