//! Generalized isomorphisms: two chains of bf-morphisms `E_n -> … -> E_0`,
//! `F_n -> … -> F_0` joined by an isomorphism `E_n ≅ F_n`.

use crate::arith::{Local, RatFun, Rational, Scalar, Valuation};
use crate::bf::{validate_bf, wedge_bwd, wedge_fwd, BfMorphism};
use crate::error::{Error, Result};
use crate::matrix::{compound, smith_dvr, subsets, Lattice, Mat, MatK, SmithData};
use crate::report::Report;

#[derive(Clone, Debug, PartialEq)]
pub struct GenIso<S: Scalar> {
    pub n: usize,
    /// `gs[i]`: rank `i`, `E_{i+1} -> E_i`, section `mu_i`.
    pub gs: Vec<BfMorphism<S>>,
    /// `hs[i]`: rank `i`, `F_{i+1} -> F_i`, section `lambda_i`.
    pub hs: Vec<BfMorphism<S>>,
    /// `E_n -> F_n`.
    pub iso: Mat<S>,
}

/// A scalar living in a tensor product of the section lines.
///
/// The stored value is the matrix entry under the trivializations; dividing
/// by `prod mu_i^{mu_exp[i]} * prod lambda_i^{lambda_exp[i]}` clears the twist.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedScalar<S: Scalar> {
    pub value: S,
    pub mu_exp: Vec<i64>,
    pub lambda_exp: Vec<i64>,
    /// Exterior power the scalar came from.
    pub line_power: usize,
    pub mus: Vec<S>,
    pub lambdas: Vec<S>,
}

impl<S: Scalar> TwistedScalar<S> {
    fn twist_factor(&self) -> Option<S> {
        let mut acc = S::one();
        for (s, &e) in self.mus.iter().zip(&self.mu_exp).chain(self.lambdas.iter().zip(&self.lambda_exp)) {
            for _ in 0..e.unsigned_abs() {
                acc = if e > 0 { acc.times(s) } else { acc.divide(s)? };
            }
        }
        Some(acc)
    }

    /// Value with all twists divided out; `None` if a needed section is zero.
    pub fn cleared(&self) -> Option<S> {
        self.value.divide(&self.twist_factor()?)
    }
}

/// Matrix of `∧^r Φ: ∧^r E_0 -> ∧^r F_0` with its twist record.
#[derive(Clone, Debug, PartialEq)]
pub struct WedgePhi<S: Scalar> {
    pub mat: Mat<S>,
    pub mu_exp: Vec<i64>,
    pub lambda_exp: Vec<i64>,
    pub line_power: usize,
}

impl<S: Local> GenIso<S> {
    pub fn mus(&self) -> Vec<S> {
        self.gs.iter().map(|g| g.mu.clone()).collect()
    }

    pub fn lambdas(&self) -> Vec<S> {
        self.hs.iter().map(|h| h.mu.clone()).collect()
    }

    /// `E_b -> E_a` for `a <= b`.
    pub fn fwd_e(&self, a: usize, b: usize) -> Mat<S> {
        Mat::product(self.n, self.gs[a..b].iter().map(|g| &g.fwd))
    }

    /// `E_a -> E_b` through the backward maps (twists trivialized).
    pub fn bwd_e(&self, a: usize, b: usize) -> Mat<S> {
        Mat::product(self.n, self.gs[a..b].iter().rev().map(|g| &g.bwd))
    }

    pub fn fwd_f(&self, a: usize, b: usize) -> Mat<S> {
        Mat::product(self.n, self.hs[a..b].iter().map(|h| &h.fwd))
    }

    pub fn bwd_f(&self, a: usize, b: usize) -> Mat<S> {
        Mat::product(self.n, self.hs[a..b].iter().rev().map(|h| &h.bwd))
    }

    /// `E_n -> E_0`.
    pub fn ce(&self) -> Mat<S> {
        self.fwd_e(0, self.n)
    }

    /// `F_n -> F_0`.
    pub fn cf(&self) -> Mat<S> {
        self.fwd_f(0, self.n)
    }

    /// The map `E_0 ⊗ K -> F_0 ⊗ K`, defined when every section is nonzero.
    pub fn generic_map(&self) -> Option<Mat<S>> {
        Some(self.cf().mul(&self.iso).mul(&self.ce().inverse()?))
    }

    pub fn all_sections_nonzero(&self) -> bool {
        self.gs.iter().chain(&self.hs).all(|g| !g.mu.is_zero())
    }

    pub fn validate(&self) -> Report {
        validate_gi(self)
    }

    pub fn closed_fibre(&self) -> Result<GenIso<Rational>> {
        Ok(GenIso {
            n: self.n,
            gs: self.gs.iter().map(|g| g.residue()).collect::<Result<_>>()?,
            hs: self.hs.iter().map(|h| h.residue()).collect::<Result<_>>()?,
            iso: self.iso.residue()?,
        })
    }

    /// The inverse generalized isomorphism `F -> E`.
    pub fn swap(&self) -> Result<GenIso<S>> {
        Ok(GenIso { n: self.n, gs: self.hs.clone(), hs: self.gs.clone(), iso: self.iso.try_inverse()? })
    }

    pub fn wedge_phi(&self, r: usize) -> Result<WedgePhi<S>> {
        wedge_phi(self, r)
    }

    pub fn det_minor(&self, a: &[usize], b: &[usize]) -> Result<TwistedScalar<S>> {
        det_minor(self, a, b)
    }
}

impl GenIso<Rational> {
    pub fn lift<S: Local>(&self) -> GenIso<S> {
        GenIso {
            n: self.n,
            gs: self.gs.iter().map(|g| g.lift()).collect(),
            hs: self.hs.iter().map(|h| h.lift()).collect(),
            iso: Mat::<S>::lift(&self.iso),
        }
    }
}

/// Which points of the base a section vanishes at.
fn vanishing_points<S: Local>(s: &S) -> (bool, bool) {
    (!s.is_unit(), s.is_zero() && S::HAS_GENERIC_POINT)
}

struct Fibre<'a, T: Scalar> {
    at: &'a str,
    gf: Vec<Mat<T>>,
    gb: Vec<Mat<T>>,
    hf: Vec<Mat<T>>,
    hb: Vec<Mat<T>>,
    iso: Mat<T>,
}

impl<T: Scalar> Fibre<'_, T> {
    fn prod(&self, ms: &[Mat<T>], rev: bool) -> Mat<T> {
        let n = self.iso.rows();
        if rev {
            Mat::product(n, ms.iter().rev())
        } else {
            Mat::product(n, ms.iter())
        }
    }

    fn image_condition(&self, rep: &mut Report, name: String, f: &Mat<T>, g: &Mat<T>) {
        let (a, b) = (g.mul(f).rank(), g.rank());
        rep.check_detail(name, a == b, format!("rank(g f) = {a}, rank(g) = {b}"));
    }

    fn check_e(&self, rep: &mut Report, i: usize) {
        let n = self.iso.rows();
        let f = self.prod(&self.gb[0..i], true);
        self.image_condition(rep, format!("image_e_bwd_{i}_{}", self.at), &f, &self.gb[i]);
        let f = self.prod(&self.gf[i + 1..n], false);
        self.image_condition(rep, format!("image_e_fwd_{i}_{}", self.at), &f, &self.gf[i]);
    }

    fn check_f(&self, rep: &mut Report, i: usize) {
        let n = self.iso.rows();
        let f = self.prod(&self.hf[i + 1..n], false);
        self.image_condition(rep, format!("image_f_fwd_{i}_{}", self.at), &f, &self.hf[i]);
        let f = self.prod(&self.hb[0..i], true);
        self.image_condition(rep, format!("image_f_bwd_{i}_{}", self.at), &f, &self.hb[i]);
    }

    fn check_oblique(&self, rep: &mut Report) {
        let ce = self.prod(&self.gf, false);
        let cf = self.prod(&self.hf, false);
        let n = self.iso.rows();
        let ok_e = ce.vstack(&cf.mul(&self.iso)).rank() == n;
        rep.check(format!("oblique_injective_e_{}", self.at), ok_e);
        let ok_f = match self.iso.inverse() {
            Some(inv) => cf.vstack(&ce.mul(&inv)).rank() == n,
            None => false,
        };
        rep.check(format!("oblique_injective_f_{}", self.at), ok_f);
    }
}

pub fn validate_gi<S: Local>(phi: &GenIso<S>) -> Report {
    let mut rep = Report::new();
    let n = phi.n;
    let shapes = phi.gs.len() == n && phi.hs.len() == n && phi.iso.rows() == n && phi.iso.cols() == n;
    rep.check("chain_lengths", shapes);
    if !shapes {
        return rep;
    }
    let mut bf_ok = true;
    for (side, chain) in [("g", &phi.gs), ("h", &phi.hs)] {
        for (i, g) in chain.iter().enumerate() {
            rep.check(format!("{side}{i}.rank_tag"), g.rank == i && g.n == n);
            let sub = validate_bf(g);
            bf_ok &= sub.passed() && g.rank == i && g.n == n;
            rep.absorb(&format!("{side}{i}"), sub);
        }
    }
    let iso_ok = phi.iso.is_unimodular();
    rep.check("iso_unimodular", iso_ok);
    if !bf_ok || !iso_ok {
        return rep;
    }

    let closed = Fibre {
        at: "closed",
        gf: phi.gs.iter().map(|g| g.fwd.residue().unwrap()).collect(),
        gb: phi.gs.iter().map(|g| g.bwd.residue().unwrap()).collect(),
        hf: phi.hs.iter().map(|h| h.fwd.residue().unwrap()).collect(),
        hb: phi.hs.iter().map(|h| h.bwd.residue().unwrap()).collect(),
        iso: phi.iso.residue().unwrap(),
    };
    let generic = Fibre {
        at: "generic",
        gf: phi.gs.iter().map(|g| g.fwd.clone()).collect(),
        gb: phi.gs.iter().map(|g| g.bwd.clone()).collect(),
        hf: phi.hs.iter().map(|h| h.fwd.clone()).collect(),
        hb: phi.hs.iter().map(|h| h.bwd.clone()).collect(),
        iso: phi.iso.clone(),
    };
    let mut any_generic = false;
    for i in 0..n {
        let (c, g) = vanishing_points(&phi.gs[i].mu);
        if c {
            closed.check_e(&mut rep, i);
        }
        if g {
            generic.check_e(&mut rep, i);
            any_generic = true;
        }
        let (c, g) = vanishing_points(&phi.hs[i].mu);
        if c {
            closed.check_f(&mut rep, i);
        }
        if g {
            generic.check_f(&mut rep, i);
            any_generic = true;
        }
    }
    closed.check_oblique(&mut rep);
    if any_generic {
        generic.check_oblique(&mut rep);
    }
    rep
}

/// Exponents `a_0..a_n`, `b_0..b_n` from Smith exponents `m` (ascending).
pub fn section_exponents(m: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let n = m.len();
    let mut a = vec![0];
    let mut b = vec![0];
    for i in 1..=n {
        a.push(-m[n - i].min(0));
        b.push(m[i - 1].max(0));
    }
    (a, b)
}

/// The generalized isomorphism attached to an invertible matrix over `K`,
/// together with its Smith data.
pub fn from_matrix_with_smith(phi_k: &MatK) -> Result<(GenIso<RatFun>, SmithData)> {
    let sm = smith_dvr(phi_k)?;
    let n = sm.m.len();
    let (a, b) = section_exponents(&sm.m);
    let mut gs = Vec::with_capacity(n);
    let mut hs = Vec::with_capacity(n);
    for i in 0..n {
        let mu = RatFun::t_pow(a[i + 1] - a[i]);
        let f: Vec<RatFun> = (0..n).map(|k| if k < n - i { mu.clone() } else { RatFun::one() }).collect();
        let bw: Vec<RatFun> = (0..n).map(|k| if k < n - i { RatFun::one() } else { mu.clone() }).collect();
        gs.push(BfMorphism { n, rank: i, mu, fwd: Mat::diag(&f), bwd: Mat::diag(&bw) });
        let la = RatFun::t_pow(b[i + 1] - b[i]);
        let f: Vec<RatFun> = (0..n).map(|k| if k < i { RatFun::one() } else { la.clone() }).collect();
        let bw: Vec<RatFun> = (0..n).map(|k| if k < i { la.clone() } else { RatFun::one() }).collect();
        hs.push(BfMorphism { n, rank: i, mu: la, fwd: Mat::diag(&f), bwd: Mat::diag(&bw) });
    }
    if n > 0 {
        let v_inv = sm.v.try_inverse()?;
        let u_inv = sm.u.try_inverse()?;
        gs[0].fwd = sm.v.mul(&gs[0].fwd);
        gs[0].bwd = gs[0].bwd.mul(&v_inv);
        hs[0].fwd = u_inv.mul(&hs[0].fwd);
        hs[0].bwd = hs[0].bwd.mul(&sm.u);
    }
    Ok((GenIso { n, gs, hs, iso: MatK::identity(n) }, sm))
}

pub fn from_matrix(phi_k: &MatK) -> Result<GenIso<RatFun>> {
    Ok(from_matrix_with_smith(phi_k)?.0)
}

/// `∧^r Φ` composed as `∧^r h_0 ⋯ ∧^r h_{n-1} · ∧^r iso · ∧^{-r} g_{n-1} ⋯ ∧^{-r} g_0`.
pub fn wedge_phi<S: Local>(phi: &GenIso<S>, r: usize) -> Result<WedgePhi<S>> {
    let n = phi.n;
    if r > n {
        return Err(Error::SizeMismatch(format!("exterior power {r} of rank {n}")));
    }
    let mut mat = compound(&phi.iso, r)?;
    let mut mu_exp = vec![0; n];
    let mut lambda_exp = vec![0; n];
    for i in (0..n).rev() {
        let w = wedge_fwd(&phi.hs[i], r)?;
        mat = w.mat.mul(&mat);
        lambda_exp[i] = -(w.twist as i64);
    }
    for i in (0..n).rev() {
        let w = wedge_bwd(&phi.gs[i], r)?;
        mat = mat.mul(&w.mat);
        mu_exp[i] = w.twist as i64;
    }
    Ok(WedgePhi { mat, mu_exp, lambda_exp, line_power: r })
}

/// Entry `(A, B)` of `∧^r Φ`; rows `A` index `∧^r F_0`, columns `B` index `∧^r E_0` (1-based).
pub fn det_minor<S: Local>(phi: &GenIso<S>, a: &[usize], b: &[usize]) -> Result<TwistedScalar<S>> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch(format!("index sets of sizes {} and {}", a.len(), b.len())));
    }
    let r = a.len();
    let w = wedge_phi(phi, r)?;
    let all = subsets(phi.n, r);
    let pos = |s: &[usize]| -> Result<usize> {
        let z: Vec<usize> = s.iter().map(|x| x.wrapping_sub(1)).collect();
        all.iter().position(|k| *k == z).ok_or_else(|| Error::SizeMismatch(format!("bad index set {s:?}")))
    };
    let (i, j) = (pos(a)?, pos(b)?);
    Ok(TwistedScalar {
        value: w.mat[(i, j)].clone(),
        mu_exp: w.mu_exp,
        lambda_exp: w.lambda_exp,
        line_power: r,
        mus: phi.mus(),
        lambdas: phi.lambdas(),
    })
}

/// `(u, v) · Φ`: the generic map becomes `v φ u^{-1}`.
pub fn gl_action<S: Local>(u: &Mat<S>, v: &Mat<S>, phi: &GenIso<S>) -> Result<GenIso<S>> {
    if !u.is_unimodular() || !v.is_unimodular() {
        return Err(Error::NotAUnit);
    }
    if u.rows() != phi.n || v.rows() != phi.n {
        return Err(Error::SizeMismatch("action matrices".into()));
    }
    let mut out = phi.clone();
    if phi.n == 0 {
        return Ok(out);
    }
    let u_inv = u.try_inverse()?;
    let v_inv = v.try_inverse()?;
    out.gs[0].fwd = u.mul(&phi.gs[0].fwd);
    out.gs[0].bwd = phi.gs[0].bwd.mul(&u_inv);
    out.hs[0].fwd = v.mul(&phi.hs[0].fwd);
    out.hs[0].bwd = phi.hs[0].bwd.mul(&v_inv);
    Ok(out)
}

impl GenIso<RatFun> {
    /// Canonical images of `E_0 ⊇ E_1 ⊇ … ⊇ E_n` inside `E_0 ⊗ K`.
    pub fn e_lattices(&self) -> Result<Vec<Lattice>> {
        (0..=self.n).map(|i| Lattice::new(&self.fwd_e(0, i))).collect()
    }

    pub fn f_lattices(&self) -> Result<Vec<Lattice>> {
        (0..=self.n).map(|i| Lattice::new(&self.fwd_f(0, i))).collect()
    }

    fn require_nonzero(&self) -> Result<()> {
        for (i, g) in self.gs.iter().enumerate() {
            if g.mu.is_zero() {
                return Err(Error::UnsupportedDegenerate(format!("mu_{i}")));
            }
        }
        for (i, h) in self.hs.iter().enumerate() {
            if h.mu.is_zero() {
                return Err(Error::UnsupportedDegenerate(format!("lambda_{i}")));
            }
        }
        Ok(())
    }
}

/// Equivalence over `Spec A` when every section is nonzero.
pub fn equivalent(p: &GenIso<RatFun>, q: &GenIso<RatFun>) -> Result<bool> {
    p.require_nonzero()?;
    q.require_nonzero()?;
    if p.n != q.n {
        return Ok(false);
    }
    let tv = |g: &GenIso<RatFun>| -> (Vec<Valuation>, Vec<Valuation>) {
        (g.mus().iter().map(|s| s.tval()).collect(), g.lambdas().iter().map(|s| s.tval()).collect())
    };
    if tv(p) != tv(q) || p.generic_map() != q.generic_map() {
        return Ok(false);
    }
    Ok(p.e_lattices()? == q.e_lattices()? && p.f_lattices()? == q.f_lattices()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_ratfun;

    fn mk(rows: &[&[&str]]) -> MatK {
        MatK::from_rows(rows.iter().map(|r| r.iter().map(|s| parse_ratfun(s).unwrap()).collect()).collect())
            .unwrap()
    }

    fn rf(s: &str) -> RatFun {
        parse_ratfun(s).unwrap()
    }

    #[test]
    fn worked_sections() {
        let (phi, sm) = from_matrix_with_smith(&mk(&[&["t^-1", "0"], &["0", "t^2"]])).unwrap();
        assert_eq!(sm.m, vec![-1, 2]);
        assert_eq!(section_exponents(&sm.m), (vec![0, 0, 1], vec![0, 0, 2]));
        assert_eq!(phi.mus(), vec![rf("1"), rf("t")]);
        assert_eq!(phi.lambdas(), vec![rf("1"), rf("t^2")]);
        assert!(validate_gi(&phi).passed());

        let (phi, sm) = from_matrix_with_smith(&mk(&[&["1", "1"], &["1", "1+t"]])).unwrap();
        assert_eq!(sm.m, vec![0, 1]);
        assert_eq!(section_exponents(&sm.m), (vec![0, 0, 0], vec![0, 0, 1]));
        assert_eq!(phi.mus(), vec![rf("1"), rf("1")]);
        assert_eq!(phi.lambdas(), vec![rf("1"), rf("t")]);
        assert!(validate_gi(&phi).passed());
    }

    #[test]
    fn identity_point() {
        let phi = from_matrix(&MatK::identity(3)).unwrap();
        assert!(phi.gs.iter().chain(&phi.hs).all(|g| g.mu.is_one() && g.fwd.is_identity()));
        assert!(phi.iso.is_identity());
        for r in 1..=3 {
            assert!(wedge_phi(&phi, r).unwrap().mat.is_identity());
        }
        let one = GenIso {
            n: 1,
            gs: vec![BfMorphism::model(1, 0, RatFun::one())],
            hs: vec![BfMorphism::model(1, 0, RatFun::one())],
            iso: MatK::identity(1),
        };
        assert!(validate_gi(&one).passed());
    }

    #[test]
    fn bad_iso_fails() {
        let mut phi = from_matrix(&mk(&[&["t^-1", "0"], &["0", "t^2"]])).unwrap();
        phi.iso = mk(&[&["1", "0"], &["0", "t"]]);
        let rep = validate_gi(&phi);
        assert!(rep.failures().iter().any(|c| c.name == "iso_unimodular"));
    }

    #[test]
    fn minors_of_diagonal() {
        let phi = from_matrix(&mk(&[&["t^-1", "0"], &["0", "t^2"]])).unwrap();
        assert_eq!(det_minor(&phi, &[1], &[1]).unwrap().cleared(), Some(rf("t^-1")));
        assert_eq!(det_minor(&phi, &[1, 2], &[1, 2]).unwrap().cleared(), Some(rf("t")));
        assert_eq!(det_minor(&phi, &[1], &[2]).unwrap().value, RatFun::zero());
    }

    #[test]
    fn equivalence_examples() {
        let a = from_matrix(&mk(&[&["t^-1", "0"], &["0", "t^2"]])).unwrap();
        let b = from_matrix(&mk(&[&["t^-2", "0"], &["0", "t^2"]])).unwrap();
        assert!(equivalent(&a, &a).unwrap());
        assert!(!equivalent(&a, &b).unwrap());
    }

    #[test]
    fn degenerate_refused() {
        let g = BfMorphism::model(1, 0, RatFun::zero());
        let phi = GenIso { n: 1, gs: vec![g.clone()], hs: vec![g], iso: MatK::identity(1) };
        assert!(matches!(equivalent(&phi, &phi), Err(Error::UnsupportedDegenerate(_))));
    }
}
