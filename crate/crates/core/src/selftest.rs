//! The property suite behind the acceptance criteria, runnable from tests and
//! from the command line.

use std::time::Instant;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{parse_ratfun, Local, RatFun, Rational, Scalar, Valuation};
use crate::atlas::{
    chart_locate, decompose_matrix, diagonalize, diagonalize_with, find_admissible, iota, is_admissible,
    recompose_matrix, reduce, same_point, schur_coords, stratum, verify_diagonalization, BasisChoice,
};
use crate::bf::{bf_direct_sum, wedge_bwd, wedge_fwd, BfMorphism};
use crate::error::{Error, Result};
use crate::geniso::{from_matrix, gl_action, section_exponents, GenIso};
use crate::matrix::{compound, perm_matrix, smith_dvr, subsets, Lattice, Mat, MatK};
use crate::random::{stratum_patterns, Gen};
use crate::strata::grass::{grass_point, pluecker_of};
use crate::strata::{decompose_stratum, recompose_stratum, same_decomposition, validate_decomposition};
use crate::strata::collineation::normalize_projective;

/// Instance counts; the defaults are the ones the acceptance criteria name.
#[derive(Clone, Debug)]
pub struct Counts {
    pub smith: usize,
    pub lattice: usize,
    pub schur: usize,
    pub det: usize,
    pub exhaustive: usize,
    pub direct_sum: usize,
    pub strata: usize,
    pub action_instances: usize,
    pub action_pairs: usize,
}

impl Default for Counts {
    fn default() -> Self {
        Counts {
            smith: 200,
            lattice: 50,
            schur: 100,
            det: 50,
            exhaustive: 20,
            direct_sum: 50,
            strata: 100,
            action_instances: 10,
            action_pairs: 20,
        }
    }
}

impl Counts {
    /// Every count capped at `k` (the per-instance pair count is kept).
    pub fn capped(k: usize) -> Self {
        let d = Counts::default();
        Counts {
            smith: d.smith.min(k),
            lattice: d.lattice.min(k),
            schur: d.schur.min(k),
            det: d.det.min(k),
            exhaustive: d.exhaustive.min(k),
            direct_sum: d.direct_sum.min(k),
            strata: d.strata.min(k),
            action_instances: d.action_instances.min(k),
            action_pairs: d.action_pairs.min(k),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub cases: usize,
    /// First failure, empty on success.
    pub detail: String,
    #[serde(skip)]
    pub millis: u128,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        let mut s = format!("criterion {:>2} {status} {} (cases={})", self.id, self.name, self.cases);
        if !self.detail.is_empty() {
            s.push_str(&format!(": {}", self.detail));
        }
        s
    }
}

/// A case outcome: `Ok(n)` counts `n` checks, `Err` carries a description.
type Case = std::result::Result<usize, String>;

fn fail(msg: impl Into<String>) -> Case {
    Err(msg.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: Result<T>, what: &str) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn finish(id: u32, name: &'static str, started: Instant, cases: Vec<Case>) -> CriterionResult {
    let mut checks = 0;
    let mut detail = String::new();
    for (k, c) in cases.iter().enumerate() {
        match c {
            Ok(n) => checks += n,
            Err(e) if detail.is_empty() => detail = format!("case {k}: {e}"),
            Err(_) => {}
        }
    }
    CriterionResult { id, name, pass: detail.is_empty(), cases: checks, detail, millis: started.elapsed().as_millis() }
}

/// One seeded invertible matrix over `K`, `1 <= n <= 4`.
pub fn pool_matrix(seed: u64, k: usize) -> MatK {
    let mut g = Gen::for_case(seed, 0, k as u32);
    let n = g.range(1, 4);
    g.invertible_k(n)
}

struct Instance {
    x: MatK,
    phi: GenIso<RatFun>,
}

fn pool(seed: u64, count: usize) -> Vec<std::result::Result<Instance, String>> {
    (0..count)
        .into_par_iter()
        .map(|k| {
            let x = pool_matrix(seed, k);
            let phi = lib(from_matrix(&x), "from_matrix")?;
            Ok(Instance { x, phi })
        })
        .collect()
}

fn over_pool(
    pool: &[std::result::Result<Instance, String>],
    count: usize,
    f: impl Fn(&Instance) -> Case + Sync,
) -> Vec<Case> {
    pool[..count.min(pool.len())]
        .par_iter()
        .map(|inst| match inst {
            Ok(i) => f(i),
            Err(e) => Err(e.clone()),
        })
        .collect()
}

/// Minimum `tval` over all `r x r` minors, by direct determinants.
fn min_minor_order(x: &MatK, r: usize) -> Valuation {
    let sets = subsets(x.rows(), r);
    let mut best = Valuation::Inf;
    for a in &sets {
        for b in &sets {
            best = best.min(x.submatrix(a, b).det().tval());
        }
    }
    best
}

fn c1_smith(inst: &Instance) -> Case {
    let x = &inst.x;
    let sm = lib(smith_dvr(x), "smith")?;
    ensure(sm.u.mul(x).mul(&sm.v) == sm.diagonal(), || "U x V differs from the diagonal".into())?;
    ensure(sm.u.is_unimodular() && sm.v.is_unimodular(), || "Smith transforms not unimodular".into())?;
    let mut partial = 0;
    for r in 1..=x.rows() {
        partial += sm.m[r - 1];
        let oracle = min_minor_order(x, r);
        ensure(oracle == Valuation::Fin(partial), || format!("r={r}: sum {partial} vs minors {oracle:?}"))?;
    }
    Ok(x.rows() + 2)
}

fn c2_validity(inst: &Instance) -> Case {
    let rep = inst.phi.validate();
    match rep.failures().first() {
        None => Ok(rep.checks.len()),
        Some(c) => fail(format!("axiom {} fails {}", c.name, c.detail)),
    }
}

fn c3_lattices(inst: &Instance) -> Case {
    let (x, phi) = (&inst.x, &inst.phi);
    let n = x.rows();
    let sm = lib(smith_dvr(x), "smith")?;
    let (a, b) = section_exponents(&sm.m);
    let std = Lattice::standard(n);
    let es = lib(phi.e_lattices(), "E lattices")?;
    let fs = lib(phi.f_lattices(), "F lattices")?;
    let en = lib(Lattice::preimage(x, &std).and_then(|l| l.intersect(&std)), "E_n oracle")?;
    ensure(es[n] == en, || "E_n differs from phi^-1(A^n) ∩ A^n".into())?;
    let fn_ = lib(Lattice::image(x, &en), "F_n oracle")?;
    ensure(fs[n] == fn_, || "F_n differs from phi(E_n)".into())?;
    for i in 0..=n {
        let ei = lib(en.sum(&Lattice::scaled(n, a[i])), "E_i oracle")?;
        ensure(es[i] == ei, || format!("E_{i} differs from E_n + t^{} A^n", a[i]))?;
        let fi = lib(fn_.sum(&Lattice::scaled(n, b[i])), "F_i oracle")?;
        ensure(fs[i] == fi, || format!("F_{i} differs from F_n + t^{} A^n", b[i]))?;
    }
    Ok(2 * n + 4)
}

fn mk(rows: &[&[&str]]) -> MatK {
    MatK::from_rows(rows.iter().map(|r| r.iter().map(|s| parse_ratfun(s).unwrap()).collect()).collect()).unwrap()
}

fn c4_worked() -> Case {
    let x = mk(&[&["1", "1"], &["1", "1+t"]]);
    let (y, d, z) = lib(decompose_matrix(&x, &[0, 1], &[0, 1]), "worked 2x2")?;
    ensure(
        y == mk(&[&["1", "0"], &["1", "1"]]) && d == mk(&[&["1", "0"], &["0", "t"]]) && z == mk(&[&["1", "1"], &["0", "1"]]),
        || "worked 2x2 factors".into(),
    )?;
    ensure(recompose_matrix(&[0, 1], &[0, 1], &y, &d, &z) == x, || "worked 2x2 product".into())?;
    let x = mk(&[&["t^-2", "0", "0"], &["0", "3", "0"], &["0", "0", "t^5"]]);
    let id = [0, 1, 2];
    let (y, d, z) = lib(decompose_matrix(&x, &id, &id), "diagonal")?;
    ensure(y.is_identity() && z.is_identity() && d == x, || "diagonal case factors".into())?;
    ensure(recompose_matrix(&id, &id, &y, &d, &z) == x, || "diagonal case product".into())?;
    let anti = mk(&[&["0", "1"], &["1", "0"]]);
    ensure(matches!(schur_coords(&anti, &[0, 1], &[0, 1]), Err(Error::ZeroPivot(1))), || {
        "antidiagonal input must hit a zero pivot".into()
    })?;
    Ok(5)
}

fn c4_random(seed: u64, k: usize) -> Case {
    let mut g = Gen::for_case(seed, 4, k as u32);
    let n = g.range(1, 4);
    let x = g.invertible_k(n);
    let id: Vec<usize> = (0..n).collect();
    let pairs = [(id.clone(), id), (g.permutation(n), g.permutation(n))];
    let mut checks = 0;
    for (alpha, beta) in &pairs {
        match decompose_matrix(&x, alpha, beta) {
            Ok((y, d, z)) => {
                ensure(recompose_matrix(alpha, beta, &y, &d, &z) == x, || format!("product differs at {alpha:?} {beta:?}"))?;
                checks += 1;
            }
            Err(Error::ZeroPivot(_)) => {}
            Err(e) => return fail(format!("schur: {e}")),
        }
    }
    Ok(checks)
}

fn c5_det(seed: u64, k: usize) -> Case {
    let mut g = Gen::for_case(seed, 5, k as u32);
    let n = g.range(2, 4);
    let phi = lib(from_matrix(&g.invertible_k(n)), "from_matrix")?;
    let (alpha, beta) = lib(find_admissible(&phi), "find_admissible")?;
    let moved = lib(
        gl_action(&perm_matrix::<RatFun>(&beta).transpose(), &perm_matrix::<RatFun>(&alpha).transpose(), &phi),
        "gl_action",
    )?;
    let red = lib(reduce(&moved, BasisChoice::First, 1), "reduce")?;
    let d1 = lib(moved.det_minor(&[1], &[1]), "det_{1}")?;
    let d1c = d1.cleared().ok_or("twist of det_{1} not clearable")?;
    for r in 2..=n {
        let idx: Vec<usize> = (1..=r).collect();
        let lhs = lib(moved.det_minor(&idx, &idx), "det_[1,r]")?;
        let rhs = lib(red.reduced.det_minor(&idx[..r - 1], &idx[..r - 1]), "det_[1,r-1] of the reduction")?;
        let l = lhs.cleared().ok_or("lhs twist not clearable")?;
        let rc = rhs.cleared().ok_or("rhs twist not clearable")?;
        ensure(l == d1c.times(&rc), || format!("r={r}: {} vs {}", l.to_text(), d1c.times(&rc).to_text()))?;
    }
    Ok(n - 1)
}

fn c6_found(inst: &Instance) -> Case {
    let phi = &inst.phi;
    let (alpha, beta) = lib(find_admissible(phi), "find_admissible")?;
    ensure(lib(is_admissible(phi, &alpha, &beta), "minors")?, || "found pair is not admissible".into())?;
    let first = lib(diagonalize_with(phi, &alpha, &beta, BasisChoice::First), "diagonalize")?;
    let rep = verify_diagonalization(phi, &alpha, &beta, &first);
    if let Some(c) = rep.failures().first() {
        return fail(format!("diagonalization relation {} fails", c.name));
    }
    let last = lib(diagonalize_with(phi, &alpha, &beta, BasisChoice::Last), "diagonalize (reversed choices)")?;
    ensure(first == last, || "diagonalization depends on the internal choice order".into())?;
    Ok(3)
}

fn c6_exhaustive(inst: &Instance) -> Case {
    let phi = &inst.phi;
    let n = phi.n;
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let mut checks = 0;
    for alpha in &perms {
        for beta in &perms {
            let adm = lib(is_admissible(phi, alpha, beta), "minors")?;
            let ok = match diagonalize(phi, alpha, beta) {
                Ok(dg) => verify_diagonalization(phi, alpha, beta, &dg).passed(),
                Err(Error::NotAdmissible(_)) => false,
                Err(e) => return fail(format!("diagonalize {alpha:?} {beta:?}: {e}")),
            };
            ensure(adm == ok, || format!("{alpha:?} {beta:?}: admissible={adm} diagonalizable={ok}"))?;
            checks += 1;
        }
    }
    Ok(checks)
}

fn c7_chart(inst: &Instance) -> Case {
    let (x, phi) = (&inst.x, &inst.phi);
    let n = phi.n;
    let loc = lib(chart_locate(phi), "chart_locate")?;
    let st = stratum(phi);
    ensure(st.disjointness_holds(n), || format!("stratum {:?} {:?} violates min I + min J >= n", st.i, st.j))?;
    ensure(loc.coords.t_ratios.iter().all(|a| a.is_integral()), || "a chart generator has negative order".into())?;
    // independent route: the Schur recursion on the matrix itself
    let (alpha, beta, l) = (&loc.address.alpha, &loc.address.beta, loc.address.l);
    let s = lib(schur_coords(x, alpha, beta), "schur on the admissible pair")?;
    let tt = |i: usize| if i == 0 { RatFun::one() } else { s.t_over_t0[i - 1].clone() };
    for nu in 1..=n {
        let want = tt(iota(l, nu + 1)).divide(&tt(iota(l, nu))).ok_or("zero t ratio")?;
        ensure(loc.toric.a[nu - 1] == want, || format!("toric coordinate a_{nu} differs from the Schur ratio"))?;
    }
    ensure(loc.coords.y == s.y && loc.coords.z == s.z, || "Y, Z differ from the Schur route".into())?;
    Ok(n + 3)
}

fn wedges_integral<S: Local>(g: &BfMorphism<S>) -> Case {
    for r in 1..=g.n {
        let f = lib(wedge_fwd(g, r), "wedge_fwd")?;
        let b = lib(wedge_bwd(g, r), "wedge_bwd")?;
        ensure(f.mat.is_integral() && b.mat.is_integral(), || format!("rank {} wedge {r} not integral", g.rank))?;
    }
    Ok(2 * g.n)
}

fn c8_integral(inst: &Instance) -> Case {
    let mut checks = 0;
    for g in inst.phi.gs.iter().chain(&inst.phi.hs) {
        checks += wedges_integral(g)?;
    }
    let bar = lib(inst.phi.closed_fibre(), "closed fibre")?;
    for g in bar.gs.iter().chain(&bar.hs) {
        checks += wedges_integral(g)?;
    }
    Ok(checks)
}

/// Entry `(I, J)` of `∧^r` of a block sum against the product of block
/// entries, with the `μ` power the twists differ by.
fn c8_direct_sum(seed: u64, k: usize) -> Case {
    let mut g = Gen::for_case(seed, 8, k as u32);
    let (n1, n2) = (g.range(1, 2), g.range(1, 2));
    let (i1, i2) = (g.range(0, n1 - 1), g.range(0, n2 - 1));
    let mu = g.section_k();
    let g1 = g.bf_k(n1, i1, mu.clone());
    let g2 = g.bf_k(n2, i2, mu.clone());
    let sum = lib(bf_direct_sum(&g1, &g2), "direct sum")?;
    ensure(sum.validate().passed(), || "direct sum is not a valid bf-morphism".into())?;
    let n = n1 + n2;
    let mut checks = 0;
    for fwd in [true, false] {
        let wedge = |h: &BfMorphism<RatFun>, r: usize| -> Result<(Mat<RatFun>, usize)> {
            if r == 0 {
                return Ok((Mat::identity(1), 0));
            }
            let w = if fwd { wedge_fwd(h, r)? } else { wedge_bwd(h, r)? };
            Ok((w.mat, w.twist))
        };
        for r in 1..=n {
            let (ws, ts) = lib(wedge(&sum, r), "wedge of the sum")?;
            let sets = subsets(n, r);
            for (a, sa) in sets.iter().enumerate() {
                for (b, sb) in sets.iter().enumerate() {
                    let split = |s: &[usize]| -> (Vec<usize>, Vec<usize>) {
                        let (x, y): (Vec<usize>, Vec<usize>) = s.iter().partition(|&&v| v < n1);
                        (x, y.iter().map(|v| v - n1).collect())
                    };
                    let ((a1, a2), (b1, b2)) = (split(sa), split(sb));
                    let entry = &ws[(a, b)];
                    if a1.len() != b1.len() {
                        ensure(entry.is_zero(), || format!("off-block entry r={r} nonzero"))?;
                        continue;
                    }
                    let (r1, r2) = (a1.len(), a2.len());
                    let (w1, t1) = lib(wedge(&g1, r1), "block wedge")?;
                    let (w2, t2) = lib(wedge(&g2, r2), "block wedge")?;
                    let pos = |m: usize, r: usize, s: &[usize]| subsets(m, r).iter().position(|x| x == s).unwrap();
                    let p1 = if r1 == 0 { w1[(0, 0)].clone() } else { w1[(pos(n1, r1, &a1), pos(n1, r1, &b1))].clone() };
                    let p2 = if r2 == 0 { w2[(0, 0)].clone() } else { w2[(pos(n2, r2, &a2), pos(n2, r2, &b2))].clone() };
                    let prod = p1.times(&p2);
                    let (te, tb) = (ts as i64, (t1 + t2) as i64);
                    // the wedge of the sum carries mu^(te - tb) relative to the block product
                    let shift = if fwd { tb - te } else { te - tb };
                    if shift == 0 {
                        ensure(*entry == prod, || format!("r={r} ({r1}+{r2}) block product differs"))?;
                        checks += 1;
                    } else if !mu.is_zero() {
                        let f = mu.pow(shift).ok_or("mu power")?;
                        ensure(*entry == prod.times(&f), || format!("r={r} ({r1}+{r2}) differs after mu^{shift}"))?;
                        checks += 1;
                    }
                }
            }
        }
    }
    Ok(checks)
}

fn c9_strata(seed: u64, k: usize) -> Case {
    let patterns: Vec<(usize, Vec<usize>, Vec<usize>)> =
        (1..=3).flat_map(|n| stratum_patterns(n).into_iter().map(move |(i, j)| (n, i, j))).collect();
    let (n, i_set, j_set) = &patterns[k % patterns.len()];
    let mut g = Gen::for_case(seed, 9, k as u32);
    let p = g.stratum_point(*n, i_set, j_set);
    let rep = p.validate();
    if let Some(c) = rep.failures().first() {
        return fail(format!("generated point fails {}", c.name));
    }
    let st = stratum(&p);
    ensure(&st.i == i_set && &st.j == j_set, || format!("stratum {:?} {:?} not as generated", st.i, st.j))?;
    let dec = lib(decompose_stratum(&p, i_set, j_set), "decompose")?;
    let vrep = lib(validate_decomposition(&dec), "validate decomposition")?;
    if let Some(c) = vrep.failures().first() {
        return fail(format!("decomposition check {} fails", c.name));
    }
    let back = lib(recompose_stratum(&dec), "recompose")?;
    ensure(lib(same_point(&back, &p), "compare")?, || format!("round trip moved the point on ({i_set:?}, {j_set:?})"))?;
    let again = lib(decompose_stratum(&back, i_set, j_set), "decompose again")?;
    ensure(lib(same_decomposition(&dec, &again), "compare decompositions")?, || "decompositions differ".into())?;
    Ok(4)
}

fn c10_grass(inst: &Instance, seed: u64, k: usize) -> Case {
    let phi = &inst.phi;
    let n = phi.n;
    let p1 = lib(grass_point(phi), "grass_point")?;
    ensure(p1.fibre.rank() == n, || "closed-fibre rank below n".into())?;
    let mut g = Gen::for_case(seed, 10, k as u32);
    let (u, v) = (g.unimodular_k(n), g.unimodular_k(n));
    let moved = lib(gl_action(&u, &v, phi), "gl_action")?;
    let p2 = lib(grass_point(&moved), "grass_point after the action")?;
    let block = lib(u.residue(), "u residue")?.block_diag(&lib(v.residue(), "v residue")?);
    let raw = lib(pluecker_of(&p1.fibre), "pluecker")?;
    let c = lib(compound(&block, n), "compound")?;
    let col = Mat::from_fn(raw.len(), 1, |i, _| raw[i].clone());
    let image: Vec<Rational> = c.mul(&col).col(0);
    let want = normalize_projective(&image).ok_or("induced action killed the Plücker vector")?;
    ensure(want == p2.coords, || "Plücker vector does not follow the block action".into())?;
    Ok(2)
}

fn c11_action(inst: &Instance, seed: u64, k: usize, pairs: usize) -> Case {
    let (x, phi) = (&inst.x, &inst.phi);
    let n = phi.n;
    let m0 = lib(smith_dvr(x), "smith")?.m;
    let s0 = stratum(phi);
    let mut g = Gen::for_case(seed, 11, k as u32);
    for p in 0..pairs {
        let (u, v) = (g.unimodular_k(n), g.unimodular_k(n));
        let moved_x = v.mul(x).mul(&lib(u.try_inverse(), "inverse")?);
        let m1 = lib(smith_dvr(&moved_x), "smith after the action")?.m;
        ensure(m1 == m0, || format!("pair {p}: Smith exponents {m1:?} vs {m0:?}"))?;
        let moved = lib(gl_action(&u, &v, phi), "gl_action")?;
        ensure(moved.generic_map().as_ref() == Some(&moved_x), || format!("pair {p}: generic map is not v x u^-1"))?;
        let s1 = stratum(&lib(from_matrix(&moved_x), "from_matrix")?);
        let s2 = stratum(&moved);
        ensure(s1 == s0 && s2 == s0, || format!("pair {p}: stratum changed"))?;
    }
    Ok(3 * pairs)
}

/// Run every criterion with the given seed.
pub fn run(seed: u64, counts: &Counts) -> Vec<CriterionResult> {
    let mut out = Vec::new();
    let pool = pool(seed, counts.smith);

    let t = Instant::now();
    out.push(finish(1, "Smith oracle", t, over_pool(&pool, counts.smith, c1_smith)));
    let t = Instant::now();
    out.push(finish(2, "construction validity", t, over_pool(&pool, counts.smith, c2_validity)));
    let t = Instant::now();
    out.push(finish(3, "lattice identities", t, over_pool(&pool, counts.lattice, c3_lattices)));

    let t = Instant::now();
    let mut cases = vec![c4_worked()];
    cases.extend((0..counts.schur).into_par_iter().map(|k| c4_random(seed, k)).collect::<Vec<_>>());
    out.push(finish(4, "decomposition identity", t, cases));

    let t = Instant::now();
    let cases = (0..counts.det).into_par_iter().map(|k| c5_det(seed, k)).collect();
    out.push(finish(5, "det factorization", t, cases));

    let t = Instant::now();
    let mut cases = over_pool(&pool, counts.smith, c6_found);
    let small: Vec<usize> =
        (0..pool.len()).filter(|&k| matches!(&pool[k], Ok(i) if i.phi.n <= 3)).take(counts.exhaustive).collect();
    cases.extend(small.par_iter().map(|&k| c6_exhaustive(pool[k].as_ref().unwrap())).collect::<Vec<_>>());
    out.push(finish(6, "admissible iff diagonalizable", t, cases));

    let t = Instant::now();
    out.push(finish(7, "chart covering", t, over_pool(&pool, counts.smith, c7_chart)));

    let t = Instant::now();
    let mut cases = over_pool(&pool, counts.smith, c8_integral);
    cases.extend((0..counts.direct_sum).into_par_iter().map(|k| c8_direct_sum(seed, k)).collect::<Vec<_>>());
    out.push(finish(8, "exterior integrality", t, cases));

    let t = Instant::now();
    let cases = (0..counts.strata).into_par_iter().map(|k| c9_strata(seed, k)).collect();
    out.push(finish(9, "strata round trip", t, cases));

    let t = Instant::now();
    let cases = (0..pool.len().min(counts.smith))
        .into_par_iter()
        .map(|k| match &pool[k] {
            Ok(i) => c10_grass(i, seed, k),
            Err(e) => Err(e.clone()),
        })
        .collect();
    out.push(finish(10, "Grassmannian equivariance", t, cases));

    let t = Instant::now();
    let cases = (0..pool.len().min(counts.action_instances))
        .into_par_iter()
        .map(|k| match &pool[k] {
            Ok(i) => c11_action(i, seed, k, counts.action_pairs),
            Err(e) => Err(e.clone()),
        })
        .collect();
    out.push(finish(11, "action invariance", t, cases));
    out
}
