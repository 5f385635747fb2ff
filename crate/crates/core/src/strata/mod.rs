//! Field points of a stratum: flags, collineation pieces and a smaller core,
//! and the Grassmannian image.

pub mod collineation;
pub mod grass;

use std::ops::Range;

use crate::arith::{Rational, Scalar};
use crate::atlas::{diagonalize, find_admissible, normal_form, same_point, stratum};
use crate::bf::BfMorphism;
use crate::error::{Error, Result};
use crate::geniso::{gl_action, GenIso};
use crate::matrix::{subspace, Mat, MatQ};
use crate::report::Report;

pub use collineation::{
    cc_to_tk, cc_to_vainsencher, check_tk, check_vainsencher, equivalent_cc, validate_cc, CompleteCollineation,
    TkForm, VainsencherData,
};
pub use grass::{grass_fibre_check, grass_point, PlueckerVector};

/// Index bookkeeping for a stratum `(I, J)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumShape {
    pub n: usize,
    /// `i_1 < … < i_r`, followed by `i_{r+1} = n`.
    pub i: Vec<usize>,
    /// `j_1 < … < j_s`, followed by `j_{s+1} = n`.
    pub j: Vec<usize>,
    pub r: usize,
    pub s: usize,
    /// `d_0..d_{r+s+1}`.
    pub d: Vec<usize>,
    /// `δ_0..δ_{r+s+1}`.
    pub delta: Vec<usize>,
}

impl StratumShape {
    pub fn new(n: usize, i_set: &[usize], j_set: &[usize]) -> Result<Self> {
        let ok = |xs: &[usize]| xs.windows(2).all(|w| w[0] < w[1]) && xs.iter().all(|&x| x < n);
        if !ok(i_set) || !ok(j_set) {
            return Err(Error::InvalidStratumData("index sets must be ascending within [0, n-1]".into()));
        }
        if let (Some(a), Some(b)) = (i_set.first(), j_set.first()) {
            if a + b < n {
                return Err(Error::InvalidStratumData(format!("min I + min J = {} < {n}", a + b)));
            }
        }
        let (r, s) = (i_set.len(), j_set.len());
        let mut i = i_set.to_vec();
        i.push(n);
        let mut j = j_set.to_vec();
        j.push(n);
        let d: Vec<usize> = (0..=r + s + 1).map(|p| if p <= s { n - j[s - p] } else { i[p - s - 1] }).collect();
        let delta = (0..=r + s + 1).map(|q| n - d[r + s + 1 - q]).collect();
        Ok(StratumShape { n, i, j, r, s, d, delta })
    }

    /// `i_p`, 1-based as in the chain picture; `i_{r+1} = n`.
    pub fn ip(&self, p: usize) -> usize {
        self.i[p - 1]
    }

    pub fn jq(&self, q: usize) -> usize {
        self.j[q - 1]
    }

    pub fn core_size(&self) -> usize {
        self.ip(1) + self.jq(1) - self.n
    }

    pub fn m(&self, p: usize) -> usize {
        self.ip(p + 1) - self.ip(p)
    }

    pub fn nq(&self, q: usize) -> usize {
        self.jq(q + 1) - self.jq(q)
    }

    /// Normal-form coordinates spanning `F_k E / F_{k-1} E`.
    pub fn e_block(&self, k: usize) -> Range<usize> {
        self.n - self.d[k]..self.n - self.d[k - 1]
    }

    pub fn f_block(&self, k: usize) -> Range<usize> {
        self.delta[k - 1]..self.delta[k]
    }

    pub fn phi_block(&self, p: usize) -> Range<usize> {
        self.n - self.ip(p + 1)..self.n - self.ip(p)
    }

    pub fn psi_block(&self, q: usize) -> Range<usize> {
        self.jq(q)..self.jq(q + 1)
    }

    pub fn core_block(&self) -> Range<usize> {
        self.n - self.ip(1)..self.jq(1)
    }

    /// Flag index of the `E`-quotient holding each piece.
    pub fn e_index_phi(&self, p: usize) -> usize {
        self.s + p + 1
    }

    pub fn e_index_psi(&self, q: usize) -> usize {
        self.s - q + 1
    }

    pub fn f_index_phi(&self, p: usize) -> usize {
        self.r - p + 1
    }

    pub fn f_index_psi(&self, q: usize) -> usize {
        self.r + q + 1
    }
}

/// `0 = F_0 ⊆ … ⊆ F_{r+s+1} = Q^n`, each step a canonical column basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Flag {
    pub dims: Vec<usize>,
    pub steps: Vec<MatQ>,
}

impl Flag {
    fn from_steps(steps: Vec<MatQ>) -> Self {
        let steps: Vec<MatQ> = steps.iter().map(subspace::canonical).collect();
        Flag { dims: steps.iter().map(|s| s.cols()).collect(), steps }
    }

    pub fn is_nested(&self) -> bool {
        self.steps.windows(2).all(|w| subspace::contains(&w[1], &w[0]))
    }

    /// Lifts of a basis of `F_k / F_{k-1}`.
    pub fn quotient_basis(&self, k: usize) -> MatQ {
        subspace::quotient_basis(&self.steps[k], &self.steps[k - 1])
    }

    /// Coordinates of the columns of `v` (inside `F_k`) in the basis of
    /// `F_k / F_{k-1}`.
    fn quotient_coords(&self, k: usize, v: &MatQ) -> Result<MatQ> {
        let q = self.quotient_basis(k);
        let full = q.hstack(&self.steps[k - 1]);
        let sol = full.solve(v).ok_or_else(|| Error::Inconsistent("vector outside the flag step".into()))?;
        let top: Vec<usize> = (0..q.cols()).collect();
        Ok(sol.select_rows(&top))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StrataDecomposition {
    pub n: usize,
    pub i_set: Vec<usize>,
    pub j_set: Vec<usize>,
    pub flag_e: Flag,
    pub flag_f: Flag,
    /// `φ_1..φ_r`, `φ_p` from `F_{r-p+1}F / F_{r-p}F` to `F_{s+p+1}E / F_{s+p}E`.
    pub phis: Vec<CompleteCollineation>,
    /// `ψ_1..ψ_s`, `ψ_q` from `F_{s-q+1}E / F_{s-q}E` to `F_{r+q+1}F / F_{r+q}F`.
    pub psis: Vec<CompleteCollineation>,
    /// From `F_{s+1}E / F_sE` to `F_{r+1}F / F_rF`.
    pub core: GenIso<Rational>,
}

impl StrataDecomposition {
    pub fn shape(&self) -> Result<StratumShape> {
        StratumShape::new(self.n, &self.i_set, &self.j_set)
    }
}

/// Rescale every nonzero section to 1. Over a field this is an equivalence.
pub fn normalize_sections(phi: &GenIso<Rational>) -> GenIso<Rational> {
    let norm = |g: &BfMorphism<Rational>| {
        if g.mu.is_zero() {
            g.clone()
        } else {
            let c = g.mu.inverse().unwrap();
            BfMorphism { bwd: g.bwd.scale(&c), mu: Rational::one(), ..g.clone() }
        }
    };
    GenIso { n: phi.n, gs: phi.gs.iter().map(norm).collect(), hs: phi.hs.iter().map(norm).collect(), iso: phi.iso.clone() }
}

/// Check that exactly the sections in `I`, `J` vanish.
pub fn check_pattern(phi: &GenIso<Rational>, i_set: &[usize], j_set: &[usize]) -> Result<()> {
    let st = stratum(phi);
    if st.i != i_set || st.j != j_set {
        return Err(Error::InvalidStratumData(format!(
            "sections vanish at I = {:?}, J = {:?}; declared I = {i_set:?}, J = {j_set:?}",
            st.i, st.j
        )));
    }
    Ok(())
}

/// The flags as kernels and images of chain composites.
pub fn flags_from_formulas(phi: &GenIso<Rational>, sh: &StratumShape) -> Result<(Flag, Flag)> {
    let n = sh.n;
    let (r, s) = (sh.r, sh.s);
    let iso_inv = phi.iso.try_inverse()?;
    let ce = phi.ce();
    let cf = phi.cf();
    let mut fe = vec![Mat::zeros(n, 0)];
    for p in 1..=s {
        let to_f = phi.fwd_f(sh.jq(s - p + 1), n).mul(&phi.iso);
        fe.push(subspace::image(&ce, &subspace::kernel(&to_f)));
    }
    for p in 1..=r {
        fe.push(subspace::kernel(&phi.bwd_e(0, sh.ip(p) + 1)));
    }
    fe.push(Mat::identity(n));
    let mut ff = vec![Mat::zeros(n, 0)];
    for q in 1..=r {
        let to_e = phi.fwd_e(sh.ip(r - q + 1), n).mul(&iso_inv);
        ff.push(subspace::image(&cf, &subspace::kernel(&to_e)));
    }
    for q in 1..=s {
        ff.push(subspace::kernel(&phi.bwd_f(0, sh.jq(q) + 1)));
    }
    ff.push(Mat::identity(n));
    Ok((Flag::from_steps(fe), Flag::from_steps(ff)))
}

fn block(m: &MatQ, rg: &Range<usize>) -> MatQ {
    let idx: Vec<usize> = rg.clone().collect();
    m.submatrix(&idx, &idx)
}

fn block_bf(g: &BfMorphism<Rational>, rg: &Range<usize>, rank: usize) -> BfMorphism<Rational> {
    BfMorphism { n: rg.len(), rank, mu: g.mu.clone(), fwd: block(&g.fwd, rg), bwd: block(&g.bwd, rg) }
}

/// Change the basis of the target end `C_0` by `t` (new = t · old).
fn retarget(g: &mut BfMorphism<Rational>, t: &MatQ) -> Result<()> {
    g.fwd = t.mul(&g.fwd);
    g.bwd = g.bwd.mul(&t.try_inverse()?);
    Ok(())
}

/// Change the basis of the source end by `t` (old = t · new).
fn resource(g: &mut BfMorphism<Rational>, t: &MatQ) -> Result<()> {
    g.fwd = g.fwd.mul(t);
    g.bwd = t.try_inverse()?.mul(&g.bwd);
    Ok(())
}

/// Split a field point of the stratum `(I, J)` into flags, collineations and
/// core.
pub fn decompose_stratum(phi: &GenIso<Rational>, i_set: &[usize], j_set: &[usize]) -> Result<StrataDecomposition> {
    let sh = StratumShape::new(phi.n, i_set, j_set)?;
    check_pattern(phi, i_set, j_set)?;
    let n = sh.n;
    let phi = normalize_sections(phi);
    let (alpha, beta) = find_admissible(&phi)?;
    let dg = diagonalize(&phi, &alpha, &beta)?;
    let nf = normal_form(&phi.mus(), &phi.lambdas(), &dg.phi);
    let b = dg.u[0].try_inverse()?;
    let c = dg.v[0].try_inverse()?;
    let top = sh.r + sh.s + 1;

    let cols = |m: &MatQ, rg: Range<usize>| m.select_cols(&rg.collect::<Vec<_>>());
    let flag_e = Flag::from_steps((0..=top).map(|k| cols(&b, n - sh.d[k]..n)).collect());
    let flag_f = Flag::from_steps((0..=top).map(|k| cols(&c, 0..sh.delta[k])).collect());
    let (fe, ff) = flags_from_formulas(&phi, &sh)?;
    if fe != flag_e || ff != flag_f {
        return Err(Error::Inconsistent("flags from the diagonalization disagree with the chain formulas".into()));
    }
    let t_e = |k: usize| flag_e.quotient_coords(k, &cols(&b, sh.e_block(k)));
    let t_f = |k: usize| flag_f.quotient_coords(k, &cols(&c, sh.f_block(k)));
    let dphi = |rg: &Range<usize>| Mat::diag(&dg.phi[rg.clone()]);

    let mut phis = Vec::with_capacity(sh.r);
    for p in 1..=sh.r {
        let rg = sh.phi_block(p);
        let m = sh.m(p);
        let mut chain: Vec<_> = (0..m).map(|k| block_bf(&nf.gs[sh.ip(p) + k], &rg, k)).collect();
        retarget(&mut chain[0], &t_e(sh.e_index_phi(p))?)?;
        let src = dphi(&rg).try_inverse()?.mul(&t_f(sh.f_index_phi(p))?.try_inverse()?);
        resource(&mut chain[m - 1], &src)?;
        phis.push(CompleteCollineation { n: m, chain });
    }
    let mut psis = Vec::with_capacity(sh.s);
    for q in 1..=sh.s {
        let rg = sh.psi_block(q);
        let m = sh.nq(q);
        let mut chain: Vec<_> = (0..m).map(|k| block_bf(&nf.hs[sh.jq(q) + k], &rg, k)).collect();
        retarget(&mut chain[0], &t_f(sh.f_index_psi(q))?)?;
        let src = dphi(&rg).mul(&t_e(sh.e_index_psi(q))?.try_inverse()?);
        resource(&mut chain[m - 1], &src)?;
        psis.push(CompleteCollineation { n: m, chain });
    }
    let rg = sh.core_block();
    let nc = sh.core_size();
    let mut gs: Vec<_> = (0..nc).map(|k| block_bf(&nf.gs[n - sh.jq(1) + k], &rg, k)).collect();
    let mut hs: Vec<_> = (0..nc).map(|k| block_bf(&nf.hs[n - sh.ip(1) + k], &rg, k)).collect();
    if nc > 0 {
        retarget(&mut gs[0], &t_e(sh.s + 1)?)?;
        retarget(&mut hs[0], &t_f(sh.r + 1)?)?;
    }
    let core = GenIso { n: nc, gs, hs, iso: dphi(&rg) };
    Ok(StrataDecomposition {
        n,
        i_set: i_set.to_vec(),
        j_set: j_set.to_vec(),
        flag_e,
        flag_f,
        phis,
        psis,
        core,
    })
}

/// Internal consistency of a decomposition before recomposing.
pub fn validate_decomposition(dec: &StrataDecomposition) -> Result<Report> {
    let sh = dec.shape()?;
    let mut rep = Report::new();
    rep.check("flag_e_type", dec.flag_e.dims == sh.d);
    rep.check("flag_f_type", dec.flag_f.dims == sh.delta);
    rep.check("flag_e_nested", dec.flag_e.is_nested());
    rep.check("flag_f_nested", dec.flag_f.is_nested());
    rep.check("phi_count", dec.phis.len() == sh.r);
    rep.check("psi_count", dec.psis.len() == sh.s);
    rep.check("core_size", dec.core.n == sh.core_size());
    for (p, phi) in dec.phis.iter().enumerate() {
        rep.check(format!("phi{}_size", p + 1), phi.n == sh.m(p + 1));
        rep.absorb(&format!("phi{}", p + 1), phi.validate());
        let nz = phi.chain.iter().skip(1).all(|h| !h.mu.is_zero());
        rep.check(format!("phi{}_open", p + 1), nz);
    }
    for (q, psi) in dec.psis.iter().enumerate() {
        rep.check(format!("psi{}_size", q + 1), psi.n == sh.nq(q + 1));
        rep.absorb(&format!("psi{}", q + 1), psi.validate());
        let nz = psi.chain.iter().skip(1).all(|h| !h.mu.is_zero());
        rep.check(format!("psi{}_open", q + 1), nz);
    }
    rep.absorb("core", dec.core.validate());
    rep.check("core_open", dec.core.all_sections_nonzero());
    Ok(rep)
}

/// Diagonal entry of the normal-form rule at coordinate `k` for chain index
/// `i`: `(fwd, bwd)` factors on the E side.
fn e_rule(n: usize, i: usize, k: usize, mu: &Rational) -> (Rational, Rational) {
    if k < n - i {
        (mu.clone(), Rational::one())
    } else {
        (Rational::one(), mu.clone())
    }
}

fn f_rule(i: usize, k: usize, la: &Rational) -> (Rational, Rational) {
    if k < i {
        (Rational::one(), la.clone())
    } else {
        (la.clone(), Rational::one())
    }
}

struct Owned<'a> {
    range: Range<usize>,
    piece: &'a BfMorphism<Rational>,
}

fn assemble(
    n: usize,
    rank: usize,
    owned: Option<Owned<'_>>,
    rule: impl Fn(usize, &Rational) -> (Rational, Rational),
) -> BfMorphism<Rational> {
    let mu = owned.as_ref().map_or(Rational::one(), |o| o.piece.mu.clone());
    let mut fwd = Mat::zeros(n, n);
    let mut bwd = Mat::zeros(n, n);
    for k in 0..n {
        if owned.as_ref().is_some_and(|o| o.range.contains(&k)) {
            continue;
        }
        let (f, b) = rule(k, &mu);
        fwd[(k, k)] = f;
        bwd[(k, k)] = b;
    }
    if let Some(o) = owned {
        let a = o.range.start;
        for x in 0..o.range.len() {
            for y in 0..o.range.len() {
                fwd[(a + x, a + y)] = o.piece.fwd[(x, y)].clone();
                bwd[(a + x, a + y)] = o.piece.bwd[(x, y)].clone();
            }
        }
    }
    BfMorphism { n, rank, mu, fwd, bwd }
}

/// Inverse of [`decompose_stratum`]: place the pieces block-diagonally in
/// bases adapted to the flags.
pub fn recompose_stratum(dec: &StrataDecomposition) -> Result<GenIso<Rational>> {
    let rep = validate_decomposition(dec)?;
    if !rep.passed() {
        let names: Vec<&str> = rep.failures().iter().map(|c| c.name.as_str()).collect();
        return Err(Error::Inconsistent(format!("decomposition fails {names:?}")));
    }
    let sh = dec.shape()?;
    let n = sh.n;
    let nc = sh.core_size();
    let mut gs = Vec::with_capacity(n);
    for i in 0..n {
        let owned = if i >= sh.ip(1) {
            let p = (1..=sh.r).find(|&p| i < sh.ip(p + 1)).unwrap();
            Some(Owned { range: sh.phi_block(p), piece: &dec.phis[p - 1].chain[i - sh.ip(p)] })
        } else if i >= n - sh.jq(1) {
            Some(Owned { range: sh.core_block(), piece: &dec.core.gs[i + sh.jq(1) - n] })
        } else {
            None
        };
        gs.push(assemble(n, i, owned, |k, mu| e_rule(n, i, k, mu)));
    }
    let mut hs = Vec::with_capacity(n);
    for i in 0..n {
        let owned = if i >= sh.jq(1) {
            let q = (1..=sh.s).find(|&q| i < sh.jq(q + 1)).unwrap();
            Some(Owned { range: sh.psi_block(q), piece: &dec.psis[q - 1].chain[i - sh.jq(q)] })
        } else if i >= n - sh.ip(1) {
            Some(Owned { range: sh.core_block(), piece: &dec.core.hs[i + sh.ip(1) - n] })
        } else {
            None
        };
        hs.push(assemble(n, i, owned, |k, la| f_rule(i, k, la)));
    }
    let mut iso = MatQ::identity(n);
    let a = sh.core_block().start;
    for x in 0..nc {
        for y in 0..nc {
            iso[(a + x, a + y)] = dec.core.iso[(x, y)].clone();
        }
    }
    let adapted = GenIso { n, gs, hs, iso };
    let mut u = Mat::zeros(n, n);
    let mut v = Mat::zeros(n, n);
    for k in 1..=sh.r + sh.s + 1 {
        let (qe, rg) = (dec.flag_e.quotient_basis(k), sh.e_block(k));
        for (x, col) in rg.enumerate() {
            for row in 0..n {
                u[(row, col)] = qe[(row, x)].clone();
            }
        }
        let (qf, rg) = (dec.flag_f.quotient_basis(k), sh.f_block(k));
        for (x, col) in rg.enumerate() {
            for row in 0..n {
                v[(row, col)] = qf[(row, x)].clone();
            }
        }
    }
    let out = gl_action(&u, &v, &adapted)?;
    let check = out.validate();
    if !check.passed() {
        return Err(Error::Inconsistent(format!("recomposed point fails {:?}", check.failures())));
    }
    Ok(out)
}

/// Decompositions agree: same flags, equivalent pieces.
pub fn same_decomposition(a: &StrataDecomposition, b: &StrataDecomposition) -> Result<bool> {
    if a.n != b.n || a.i_set != b.i_set || a.j_set != b.j_set || a.flag_e != b.flag_e || a.flag_f != b.flag_f {
        return Ok(false);
    }
    for (x, y) in a.phis.iter().zip(&b.phis).chain(a.psis.iter().zip(&b.psis)) {
        if !equivalent_cc(x, y)? {
            return Ok(false);
        }
    }
    same_point(&a.core, &b.core)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_ratfun;
    use crate::geniso::from_matrix;
    use crate::matrix::MatK;

    fn mk(rows: &[&[&str]]) -> MatK {
        MatK::from_rows(rows.iter().map(|r| r.iter().map(|s| parse_ratfun(s).unwrap()).collect()).collect())
            .unwrap()
    }

    #[test]
    fn shapes() {
        let sh = StratumShape::new(3, &[2], &[1]).unwrap();
        assert_eq!((sh.r, sh.s, sh.core_size(), sh.m(1), sh.nq(1)), (1, 1, 0, 1, 2));
        assert_eq!(sh.d, vec![0, 2, 2, 3]);
        assert_eq!(sh.delta, vec![0, 1, 1, 3]);
        assert!(StratumShape::new(3, &[1], &[1]).is_err());
    }

    #[test]
    fn interior_point_is_its_own_core() {
        let phi = from_matrix(&mk(&[&["1", "2"], &["3", "4"]])).unwrap().closed_fibre().unwrap();
        let dec = decompose_stratum(&phi, &[], &[]).unwrap();
        assert!(dec.phis.is_empty() && dec.psis.is_empty());
        assert!(same_point(&dec.core, &phi).unwrap());
        assert!(same_point(&recompose_stratum(&dec).unwrap(), &phi).unwrap());
    }

    #[test]
    fn worked_example_round_trip() {
        let phi = from_matrix(&mk(&[&["t^-1", "0"], &["0", "t^2"]])).unwrap().closed_fibre().unwrap();
        let dec = decompose_stratum(&phi, &[1], &[1]).unwrap();
        assert_eq!((dec.phis.len(), dec.psis.len(), dec.core.n), (1, 1, 0));
        assert_eq!((dec.phis[0].n, dec.psis[0].n), (1, 1));
        assert!(validate_decomposition(&dec).unwrap().passed());
        let back = recompose_stratum(&dec).unwrap();
        assert!(same_point(&back, &phi).unwrap());
        let again = decompose_stratum(&back, &[1], &[1]).unwrap();
        assert!(same_decomposition(&dec, &again).unwrap());
    }

    #[test]
    fn wrong_pattern_is_rejected() {
        let phi = from_matrix(&MatK::identity(2)).unwrap().closed_fibre().unwrap();
        assert!(matches!(decompose_stratum(&phi, &[1], &[1]), Err(Error::InvalidStratumData(_))));
    }
}
