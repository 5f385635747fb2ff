//! Complete collineations over the residue field and the two classical
//! descriptions they convert to.

use crate::arith::{Rational, Scalar};
use crate::atlas::same_point;
use crate::bf::BfMorphism;
use crate::error::{Error, Result};
use crate::geniso::{wedge_phi, GenIso};
use crate::matrix::{compound, subspace, Mat, MatQ};
use crate::report::Report;

/// A chain `C_n -> C_{n-1} -> … -> C_0` of bf-morphisms, `chain[i]` of rank
/// `i` with section `λ_i`, and `λ_0 = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompleteCollineation {
    pub n: usize,
    pub chain: Vec<BfMorphism<Rational>>,
}

impl CompleteCollineation {
    /// The point of `PGl_n` given by an invertible matrix: `∧^1` of the
    /// result is proportional to `a`.
    pub fn from_matrix(a: &MatQ) -> Result<Self> {
        let n = a.rows();
        if n == 0 {
            return Ok(CompleteCollineation { n, chain: vec![] });
        }
        let inv = a.try_inverse()?;
        let mut chain = vec![BfMorphism { n, rank: 0, mu: Rational::zero(), fwd: Mat::zeros(n, n), bwd: inv }];
        for i in 1..n {
            chain.push(BfMorphism { n, rank: i, mu: Rational::one(), fwd: Mat::identity(n), bwd: Mat::identity(n) });
        }
        Ok(CompleteCollineation { n, chain })
    }

    pub fn lambdas(&self) -> Vec<Rational> {
        self.chain.iter().map(|h| h.mu.clone()).collect()
    }

    /// As a generalized isomorphism whose `E`-chain is the identity: the
    /// collineations are exactly the points with `λ_0 = 0`.
    pub fn embed(&self) -> GenIso<Rational> {
        let n = self.n;
        let gs = (0..n)
            .map(|i| BfMorphism { n, rank: i, mu: Rational::one(), fwd: Mat::identity(n), bwd: Mat::identity(n) })
            .collect();
        GenIso { n, gs, hs: self.chain.clone(), iso: Mat::identity(n) }
    }

    pub fn validate(&self) -> Report {
        validate_cc(self)
    }
}

pub fn validate_cc(psi: &CompleteCollineation) -> Report {
    let mut rep = Report::new();
    let shape = psi.chain.len() == psi.n && psi.chain.iter().all(|h| h.n == psi.n);
    rep.check("chain_length", shape);
    if !shape {
        return rep;
    }
    if psi.n > 0 {
        rep.check("lambda0_zero", psi.chain[0].mu.is_zero());
    }
    let inner = psi.embed().validate();
    for c in inner.checks {
        // the identity E-chain contributes nothing worth reporting
        if c.name.starts_with('g') || c.name.starts_with("image_e") {
            continue;
        }
        rep.checks.push(c);
    }
    rep
}

/// Equivalence with the end spaces fixed.
pub fn equivalent_cc(a: &CompleteCollineation, b: &CompleteCollineation) -> Result<bool> {
    if a.n != b.n {
        return Ok(false);
    }
    same_point(&a.embed(), &b.embed())
}

/// A complete homomorphism of type `R`: maps `v_i: E_i -> F_i` with
/// `E_0 = C_n`, `E_i = ker(v_{i-1})`, line twists trivialized.
#[derive(Clone, Debug, PartialEq)]
pub struct VainsencherData {
    /// `r_1 < … < r_k`.
    pub r: Vec<usize>,
    /// Basis of `E_i` inside `C_n`.
    pub e: Vec<MatQ>,
    /// Basis of `F_i` inside `C_{r_{i+1}}`.
    pub f: Vec<MatQ>,
    /// `v_i` in the bases `e[i]`, `f[i]`.
    pub maps: Vec<MatQ>,
    pub ranks: Vec<usize>,
}

fn break_points(r: &[usize], n: usize) -> Vec<usize> {
    let mut pts = vec![0];
    pts.extend_from_slice(r);
    pts.push(n);
    pts
}

pub fn cc_to_vainsencher(psi: &CompleteCollineation, r: &[usize]) -> Result<VainsencherData> {
    let n = psi.n;
    let zeros: Vec<usize> = (1..n).filter(|&i| psi.chain[i].mu.is_zero()).collect();
    if zeros != r {
        return Err(Error::TypeMismatch(format!("vanishing pattern {zeros:?}, declared {r:?}")));
    }
    let phi = psi.embed();
    let pts = break_points(r, n);
    let k = r.len();
    let mut e = Vec::with_capacity(k + 1);
    let mut f = Vec::with_capacity(k + 1);
    let mut maps = Vec::with_capacity(k + 1);
    let mut ranks = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let ei = subspace::kernel(&phi.fwd_f(pts[i], n));
        let fi = subspace::kernel(&phi.fwd_f(pts[i], pts[i + 1]));
        let img = phi.fwd_f(pts[i + 1], n).mul(&ei);
        let vi = subspace::coords(&fi, &img).ok_or_else(|| Error::Inconsistent("v_i leaves F_i".into()))?;
        ranks.push(vi.rank());
        e.push(ei);
        f.push(fi);
        maps.push(vi);
    }
    Ok(VainsencherData { r: r.to_vec(), e, f, maps, ranks })
}

/// Kernel and cokernel identities of a complete homomorphism produced from
/// `psi`.
pub fn check_vainsencher(psi: &CompleteCollineation, data: &VainsencherData) -> Report {
    let mut rep = Report::new();
    let n = psi.n;
    let pts = break_points(&data.r, n);
    let phi = psi.embed();
    rep.check("e0_is_source", data.e[0].rank() == n);
    for i in 0..data.maps.len() {
        rep.check(format!("rank_v{i}"), data.ranks[i] == pts[i + 1] - pts[i]);
    }
    for i in 1..data.maps.len() {
        let ker = data.e[i - 1].mul(&data.maps[i - 1].kernel());
        rep.check(format!("ker_v{}_eq_e{i}", i - 1), subspace::span_eq(&ker, &data.e[i]));
        // cokernel: the backward maps C_{r_i} -> C_{r_{i+1}} kill im(v_{i-1})
        // and carry F_{i-1} onto F_i
        let back = phi.bwd_f(pts[i], pts[i + 1]);
        let img = data.f[i - 1].mul(&data.maps[i - 1]);
        rep.check(format!("coker_v{}_kills_image", i - 1), back.mul(&img).is_zero());
        let onto = subspace::image(&back, &data.f[i - 1]);
        rep.check(format!("coker_v{}_onto_f{i}", i - 1), subspace::span_eq(&onto, &data.f[i]));
        let dim_coker = data.f[i - 1].cols() - data.ranks[i - 1];
        rep.check(format!("coker_v{}_dim", i - 1), dim_coker == data.f[i].cols());
    }
    rep
}

/// `u_r` for `r = 1..n`, each the flattened matrix of `∧^r Ψ` scaled so its
/// first nonzero entry is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct TkForm {
    pub u: Vec<Vec<Rational>>,
}

pub fn normalize_projective(v: &[Rational]) -> Option<Vec<Rational>> {
    let lead = v.iter().find(|x| !x.is_zero())?.clone();
    Some(v.iter().map(|x| x / &lead).collect())
}

pub fn cc_to_tk(psi: &CompleteCollineation) -> Result<TkForm> {
    let phi = psi.embed();
    let mut u = Vec::with_capacity(psi.n);
    for r in 1..=psi.n {
        let w = wedge_phi(&phi, r)?.mat;
        let row = normalize_projective(w.entries()).ok_or_else(|| Error::Inconsistent(format!("u_{r} vanishes")))?;
        u.push(row);
    }
    Ok(TkForm { u })
}

/// Each `u_r` is nonzero; where `u_1` is invertible, `u_r` is proportional to
/// its `r`-th compound.
pub fn check_tk(psi: &CompleteCollineation, tk: &TkForm) -> Result<Report> {
    let mut rep = Report::new();
    let n = psi.n;
    rep.check("count", tk.u.len() == n);
    for (r, u) in tk.u.iter().enumerate() {
        rep.check(format!("u{}_nonzero", r + 1), u.iter().any(|x| !x.is_zero()));
    }
    if n > 0 {
        let u1 = Mat::from_fn(n, n, |i, j| tk.u[0][i * n + j].clone());
        if u1.det() != Rational::zero() {
            for r in 2..=n {
                let c = compound(&u1, r)?;
                let want = normalize_projective(c.entries());
                rep.check(format!("u{r}_is_compound"), want.as_ref() == Some(&tk.u[r - 1]));
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> MatQ {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::from_i64(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn invertible_matrix_is_type_empty() {
        let psi = CompleteCollineation::from_matrix(&q(&[&[1, 2], &[3, 4]])).unwrap();
        assert!(psi.validate().passed(), "{:?}", psi.validate().failures());
        let v = cc_to_vainsencher(&psi, &[]).unwrap();
        assert_eq!(v.ranks, vec![2]);
        assert!(check_vainsencher(&psi, &v).passed());
        let tk = cc_to_tk(&psi).unwrap();
        assert_eq!(tk.u[0], normalize_projective(q(&[&[1, 2], &[3, 4]]).entries()).unwrap());
        assert!(check_tk(&psi, &tk).unwrap().passed());
        assert!(matches!(cc_to_vainsencher(&psi, &[1]), Err(Error::TypeMismatch(_))));
    }

    #[test]
    fn type_one_in_rank_two() {
        let mut psi = CompleteCollineation::from_matrix(&MatQ::identity(2)).unwrap();
        psi.chain[1] = BfMorphism::model(2, 1, Rational::zero());
        assert!(psi.validate().passed(), "{:?}", psi.validate().failures());
        let v = cc_to_vainsencher(&psi, &[1]).unwrap();
        assert_eq!(v.ranks, vec![1, 1]);
        assert_eq!(v.e[1].cols(), 1);
        let rep = check_vainsencher(&psi, &v);
        assert!(rep.passed(), "{:?}", rep.failures());
    }

    #[test]
    fn equivalence_of_scaled_matrices() {
        let a = CompleteCollineation::from_matrix(&q(&[&[1, 2], &[3, 4]])).unwrap();
        let b = CompleteCollineation::from_matrix(&q(&[&[2, 4], &[6, 8]])).unwrap();
        let c = CompleteCollineation::from_matrix(&q(&[&[1, 2], &[3, 5]])).unwrap();
        assert!(equivalent_cc(&a, &b).unwrap());
        assert!(!equivalent_cc(&a, &c).unwrap());
    }
}
