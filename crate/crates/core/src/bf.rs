//! bf-morphisms: a pair `fwd: E -> F`, `bwd: F -> M ⊗ E` whose composites are
//! both multiplication by the section `mu`, with a stored rank tag.

use crate::arith::{Local, Rational, Scalar};
use crate::error::{Error, Result};
use crate::matrix::{compound, subsets, subspace, Mat, MatQ};
use crate::report::Report;

#[derive(Clone, Debug, PartialEq)]
pub struct BfMorphism<S: Scalar> {
    pub n: usize,
    pub rank: usize,
    pub mu: S,
    pub fwd: Mat<S>,
    pub bwd: Mat<S>,
}

/// Matrix of an exterior power together with the power of `M` it is twisted by.
#[derive(Clone, Debug, PartialEq)]
pub struct Wedge<S: Scalar> {
    pub mat: Mat<S>,
    pub twist: usize,
}

impl<S: Local> BfMorphism<S> {
    /// `fwd = diag(I_i, mu I_{n-i})`, `bwd = diag(mu I_i, I_{n-i})`.
    pub fn model(n: usize, i: usize, mu: S) -> Self {
        let f: Vec<S> = (0..n).map(|k| if k < i { S::one() } else { mu.clone() }).collect();
        let b: Vec<S> = (0..n).map(|k| if k < i { mu.clone() } else { S::one() }).collect();
        BfMorphism { n, rank: i, mu, fwd: Mat::diag(&f), bwd: Mat::diag(&b) }
    }

    /// Isomorphism `fwd` with unit section; `bwd = fwd^{-1}`.
    pub fn iso(rank: usize, fwd: Mat<S>) -> Result<Self> {
        let bwd = fwd.try_inverse()?;
        Ok(BfMorphism { n: fwd.rows(), rank, mu: S::one(), fwd, bwd })
    }

    pub fn validate(&self) -> Report {
        validate_bf(self)
    }

    /// Reduction at the closed point.
    pub fn residue(&self) -> Result<BfMorphism<Rational>> {
        Ok(BfMorphism {
            n: self.n,
            rank: self.rank,
            mu: self.mu.residue()?,
            fwd: self.fwd.residue()?,
            bwd: self.bwd.residue()?,
        })
    }

    pub fn wedge_fwd(&self, r: usize) -> Result<Wedge<S>> {
        wedge_fwd(self, r)
    }

    pub fn wedge_bwd(&self, r: usize) -> Result<Wedge<S>> {
        wedge_bwd(self, r)
    }
}

impl BfMorphism<Rational> {
    pub fn lift<S: Local>(&self) -> BfMorphism<S> {
        BfMorphism {
            n: self.n,
            rank: self.rank,
            mu: S::lift(&self.mu),
            fwd: Mat::<S>::lift(&self.fwd),
            bwd: Mat::<S>::lift(&self.bwd),
        }
    }
}

fn exactness<T: Scalar>(rep: &mut Report, at: &str, f: &Mat<T>, b: &Mat<T>, rank: usize) {
    let rk = f.rank();
    rep.check_detail(format!("rank_{at}"), rk == rank, format!("rank {rk}, tag {rank}"));
    let ker_b = subspace::kernel(b);
    let ker_f = subspace::kernel(f);
    rep.check(format!("exact_ker_bwd_eq_im_fwd_{at}"), subspace::span_eq(&ker_b, f));
    rep.check(format!("exact_ker_fwd_eq_im_bwd_{at}"), subspace::span_eq(&ker_f, b));
}

pub fn validate_bf<S: Local>(g: &BfMorphism<S>) -> Report {
    let mut rep = Report::new();
    let n = g.n;
    let shape_ok = g.fwd.rows() == n && g.fwd.cols() == n && g.bwd.rows() == n && g.bwd.cols() == n;
    rep.check("shape", shape_ok);
    rep.check("rank_range", g.rank <= n);
    if !shape_ok {
        return rep;
    }
    let integral = g.fwd.is_integral() && g.bwd.is_integral() && g.mu.is_integral();
    rep.check("integral", integral);
    let mu_i = Mat::scalar(n, &g.mu);
    rep.check("bwd_fwd_eq_mu", g.bwd.mul(&g.fwd) == mu_i);
    rep.check("fwd_bwd_eq_mu", g.fwd.mul(&g.bwd) == mu_i);
    if !integral {
        return rep;
    }
    if !g.mu.is_unit() {
        let f = g.fwd.residue().unwrap();
        let b = g.bwd.residue().unwrap();
        exactness(&mut rep, "closed", &f, &b, g.rank);
    }
    if g.mu.is_zero() && S::HAS_GENERIC_POINT {
        exactness(&mut rep, "generic", &g.fwd, &g.bwd, g.rank);
    }
    rep
}

/// `mu^e` with `0^0 = 1`.
fn mu_pow<S: Scalar>(mu: &S, e: usize) -> S {
    let mut acc = S::one();
    for _ in 0..e {
        acc = acc.times(mu);
    }
    acc
}

fn mu_pow_signed<S: Scalar>(mu: &S, e: i64) -> Result<S> {
    let p = mu_pow(mu, e.unsigned_abs() as usize);
    if e >= 0 {
        Ok(p)
    } else {
        p.inverse().ok_or(Error::DivisionByZero)
    }
}

fn check_range<S: Scalar>(g: &BfMorphism<S>, r: usize) -> Result<()> {
    if r > g.n {
        return Err(Error::SizeMismatch(format!("exterior power {r} of rank {} module", g.n)));
    }
    Ok(())
}

/// Matrix of `∧^r g` with twist `max(0, r - rank)`.
pub fn wedge_fwd<S: Local>(g: &BfMorphism<S>, r: usize) -> Result<Wedge<S>> {
    check_range(g, r)?;
    let twist = r.saturating_sub(g.rank);
    let mat = if g.mu.is_zero() {
        wedge_fwd_frames(g, r)?.mat
    } else {
        compound(&g.fwd, r)?.scale(&mu_pow_signed(&g.mu, -(twist as i64))?)
    };
    mat.check_integral()?;
    Ok(Wedge { mat, twist })
}

/// Matrix of `∧^{-r} g` with twist `min(r, n - rank)`.
pub fn wedge_bwd<S: Local>(g: &BfMorphism<S>, r: usize) -> Result<Wedge<S>> {
    check_range(g, r)?;
    let twist = r.min(g.n - g.rank);
    let mat = if g.mu.is_zero() {
        wedge_bwd_frames(g, r)?.mat
    } else {
        compound(&g.bwd, r)?.scale(&mu_pow_signed(&g.mu, twist as i64 - r as i64)?)
    };
    mat.check_integral()?;
    Ok(Wedge { mat, twist })
}

/// Local frames `P, Q ∈ GL_n(A)` with `fwd = Q diag(I_i, mu) P^{-1}` and
/// `bwd = P diag(mu, I_{n-i}) Q^{-1}`.
///
/// `P = [e_S | bwd e_T]`, `Q = [fwd e_S | e_T]` for the first index sets
/// `S` (size `i`) and `T` (size `n - i`) in lex order making both unimodular.
pub fn local_frames<S: Local>(g: &BfMorphism<S>) -> Result<(Mat<S>, Mat<S>)> {
    let (n, i) = (g.n, g.rank);
    let e = |k: usize, row: usize| if row == k { S::one() } else { S::zero() };
    for s in subsets(n, i) {
        for t in subsets(n, n - i) {
            let p = Mat::from_fn(n, n, |a, c| if c < i { e(s[c], a) } else { g.bwd[(a, t[c - i])].clone() });
            if !p.det().is_unit() {
                continue;
            }
            let q = Mat::from_fn(n, n, |a, c| if c < i { g.fwd[(a, s[c])].clone() } else { e(t[c - i], a) });
            if q.det().is_unit() {
                return Ok((p, q));
            }
        }
    }
    Err(Error::Invalid(format!("no local frames for a rank {i} bf-morphism")))
}

fn frame_diag<S: Scalar>(n: usize, r: usize, mu: &S, exp: impl Fn(&[usize]) -> usize) -> Mat<S> {
    let d: Vec<S> = subsets(n, r).iter().map(|k| mu_pow(mu, exp(k))).collect();
    Mat::diag(&d)
}

/// `∧^r g` through local frames; valid for any section, including zero.
pub fn wedge_fwd_frames<S: Local>(g: &BfMorphism<S>, r: usize) -> Result<Wedge<S>> {
    check_range(g, r)?;
    let (p, q) = local_frames(g)?;
    let i = g.rank;
    let twist = r.saturating_sub(i);
    let delta = frame_diag(g.n, r, &g.mu, |k| k.iter().filter(|&&x| x >= i).count() - twist);
    let mat = compound(&q, r)?.mul(&delta).mul(&compound(&p.try_inverse()?, r)?);
    Ok(Wedge { mat, twist })
}

/// `∧^{-r} g` through local frames.
pub fn wedge_bwd_frames<S: Local>(g: &BfMorphism<S>, r: usize) -> Result<Wedge<S>> {
    check_range(g, r)?;
    let (p, q) = local_frames(g)?;
    let i = g.rank;
    let twist = r.min(g.n - i);
    let delta = frame_diag(g.n, r, &g.mu, |k| twist - k.iter().filter(|&&x| x >= i).count());
    let mat = compound(&p, r)?.mul(&delta).mul(&compound(&q.try_inverse()?, r)?);
    Ok(Wedge { mat, twist })
}

/// Block-diagonal sum; the sections must agree.
pub fn bf_direct_sum<S: Local>(g1: &BfMorphism<S>, g2: &BfMorphism<S>) -> Result<BfMorphism<S>> {
    if g1.mu != g2.mu {
        return Err(Error::SectionMismatch(g1.mu.to_text(), g2.mu.to_text()));
    }
    Ok(BfMorphism {
        n: g1.n + g2.n,
        rank: g1.rank + g2.rank,
        mu: g1.mu.clone(),
        fwd: g1.fwd.block_diag(&g2.fwd),
        bwd: g1.bwd.block_diag(&g2.bwd),
    })
}

/// Closed-fibre reduction of a list of matrices.
pub fn residues<S: Local>(ms: &[Mat<S>]) -> Result<Vec<MatQ>> {
    ms.iter().map(|m| m.residue()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_ratfun, RatFun};

    fn rf(s: &str) -> RatFun {
        parse_ratfun(s).unwrap()
    }

    #[test]
    fn validate_examples() {
        let g = BfMorphism::model(2, 1, RatFun::t());
        assert_eq!(g.fwd, Mat::diag(&[rf("1"), rf("t")]));
        assert!(validate_bf(&g).passed());

        let bad = BfMorphism { bwd: Mat::diag(&[rf("t"), rf("t")]), ..g.clone() };
        let rep = validate_bf(&bad);
        assert!(!rep.passed());
        assert!(rep.failures().iter().any(|c| c.name == "bwd_fwd_eq_mu"));

        let unit = BfMorphism::model(2, 2, RatFun::one());
        assert!(validate_bf(&unit).passed());
    }

    #[test]
    fn wedge_examples() {
        let g = BfMorphism::model(2, 1, RatFun::t());
        let w2 = wedge_fwd(&g, 2).unwrap();
        assert_eq!((w2.mat, w2.twist), (Mat::diag(&[rf("1")]), 1));
        let b1 = wedge_bwd(&g, 1).unwrap();
        assert_eq!((b1.mat, b1.twist), (Mat::diag(&[rf("t"), rf("1")]), 1));
        let b2 = wedge_bwd(&g, 2).unwrap();
        assert_eq!((b2.mat, b2.twist), (Mat::diag(&[rf("1")]), 1));
    }

    #[test]
    fn zero_section_frames() {
        let g = BfMorphism::model(3, 1, RatFun::zero());
        assert!(validate_bf(&g).passed());
        let w = wedge_fwd(&g, 2).unwrap();
        assert_eq!(w.twist, 1);
        // e1∧e2, e1∧e3 survive after untwisting, e2∧e3 dies
        assert_eq!(w.mat, Mat::diag(&[rf("1"), rf("1"), rf("0")]));
        let b = wedge_bwd(&g, 2).unwrap();
        assert_eq!(b.twist, 2);
        assert_eq!(b.mat, Mat::diag(&[rf("0"), rf("0"), rf("1")]));
    }

    #[test]
    fn frames_agree_with_division() {
        let g = BfMorphism::model(3, 1, rf("t^2"));
        for r in 0..=3 {
            assert_eq!(wedge_fwd_frames(&g, r).unwrap(), wedge_fwd(&g, r).unwrap());
            assert_eq!(wedge_bwd_frames(&g, r).unwrap(), wedge_bwd(&g, r).unwrap());
        }
    }

    #[test]
    fn section_mismatch() {
        let a = BfMorphism::model(1, 0, RatFun::t());
        let b = BfMorphism::model(1, 0, RatFun::one());
        assert!(matches!(bf_direct_sum(&a, &b), Err(Error::SectionMismatch(..))));
    }
}
