//! Seeded instance generators for tests and the self-test.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{Local, Poly, RatFun, Rational, Scalar};
use crate::atlas::normal_form;
use crate::bf::BfMorphism;
use crate::geniso::{from_matrix, gl_action, GenIso};
use crate::matrix::{Mat, MatK, MatQ};

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Independent generator for case `index` of stream `stream`, so cases can
    /// be produced in any order.
    pub fn for_case(seed: u64, stream: u32, index: u32) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream((u64::from(stream) << 32) | u64::from(index));
        Gen { rng }
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    pub fn rational(&mut self) -> Rational {
        let num: i64 = self.rng.gen_range(-9..=9);
        let den: i64 = self.rng.gen_range(1..=3);
        Rational::new(num.into(), den.into())
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let c = self.rational();
            if !c.is_zero() {
                return c;
            }
        }
    }

    pub fn poly(&mut self, max_deg: usize) -> Poly {
        let deg = self.range(0, max_deg);
        Poly::from_coeffs((0..=deg).map(|_| self.rational()).collect())
    }

    fn int_poly(&mut self, max_deg: usize) -> Poly {
        let deg = self.range(0, max_deg);
        Poly::from_coeffs((0..=deg).map(|_| self.small_int(9)).collect())
    }

    /// `p(t)/q(t)` with integer coefficients in `[-9, 9]`, degrees at most 3.
    pub fn ratfun(&mut self) -> RatFun {
        // keep a good share of entries simple so that sizes stay small
        match self.range(0, 3) {
            0 => RatFun::from_rational(self.small_int(9)),
            1 => RatFun::from_poly(self.int_poly(3)),
            _ => loop {
                let q = self.int_poly(3);
                if !q.is_zero() {
                    break RatFun::new(self.int_poly(3), q).unwrap();
                }
            },
        }
    }

    /// Random matrix over `K`, rejection-sampled for invertibility.
    pub fn invertible_k(&mut self, n: usize) -> MatK {
        loop {
            let m = Mat::from_fn(n, n, |_, _| self.ratfun());
            if !m.det().is_zero() {
                return m;
            }
        }
    }

    pub fn invertible_q(&mut self, n: usize) -> MatQ {
        loop {
            let m = Mat::from_fn(n, n, |_, _| self.rational());
            if !m.det().is_zero() {
                return m;
            }
        }
    }

    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(&mut self.rng);
        p
    }

    fn small_int(&mut self, bound: i64) -> Rational {
        Rational::from_integer(self.rng.gen_range(-bound..=bound).into())
    }

    fn unit_k(&mut self) -> RatFun {
        let c = loop {
            let c = self.small_int(2);
            if !c.is_zero() {
                break c;
            }
        };
        if self.coin() {
            RatFun::from_rational(c)
        } else {
            RatFun::from_poly(Poly::from_coeffs(vec![c, self.small_int(2)]))
        }
    }

    /// A permutation times units times `n` elementary operations with entries
    /// in `Z[t]` of degree at most 1.
    pub fn unimodular_k(&mut self, n: usize) -> MatK {
        let d: Vec<RatFun> = (0..n).map(|_| self.unit_k()).collect();
        let mut m = crate::matrix::perm_matrix::<RatFun>(&self.permutation(n)).mul(&Mat::diag(&d));
        if n < 2 {
            return m;
        }
        for _ in 0..n {
            let (a, b) = (self.range(0, n - 1), self.range(0, n - 2));
            let b = if b >= a { b + 1 } else { b };
            let c = RatFun::from_poly(Poly::from_coeffs(vec![self.small_int(2), self.small_int(2)]));
            m.add_row_multiple(a, b, &c);
        }
        m
    }

    /// A random point of `KGl_n(A)` through the matrix construction, then
    /// disguised by a random equivalence.
    pub fn gen_iso(&mut self, n: usize) -> (MatK, GenIso<RatFun>) {
        let x = self.invertible_k(n);
        let phi = from_matrix(&x).expect("invertible");
        let ps: Vec<MatK> = (0..n).map(|_| self.unimodular_k(n)).collect();
        let qs: Vec<MatK> = (0..n).map(|_| self.unimodular_k(n)).collect();
        (x, conjugate(&phi, &ps, &qs))
    }

    /// A field point with exactly the sections in `I`, `J` vanishing.
    pub fn stratum_point(&mut self, n: usize, i_set: &[usize], j_set: &[usize]) -> GenIso<Rational> {
        let mus: Vec<Rational> =
            (0..n).map(|i| if i_set.contains(&i) { Rational::zero() } else { self.nonzero_rational() }).collect();
        let las: Vec<Rational> =
            (0..n).map(|i| if j_set.contains(&i) { Rational::zero() } else { self.nonzero_rational() }).collect();
        let phi: Vec<Rational> = (0..n).map(|_| self.nonzero_rational()).collect();
        let nf = normal_form(&mus, &las, &phi);
        let ps: Vec<MatQ> = (0..n).map(|_| self.invertible_q(n)).collect();
        let qs: Vec<MatQ> = (0..n).map(|_| self.invertible_q(n)).collect();
        let moved = conjugate(&nf, &ps, &qs);
        gl_action(&self.invertible_q(n), &self.invertible_q(n), &moved).expect("invertible")
    }
}

impl Gen {
    /// `P · model(n, i, mu) · Q` with `P`, `Q` unimodular; a valid bf-morphism.
    pub fn bf_k(&mut self, n: usize, i: usize, mu: RatFun) -> BfMorphism<RatFun> {
        let m = BfMorphism::model(n, i, mu);
        let (p, q) = (self.unimodular_k(n), self.unimodular_k(n));
        let (p_inv, q_inv) = (p.inverse().unwrap(), q.inverse().unwrap());
        BfMorphism { fwd: p.mul(&m.fwd).mul(&q), bwd: q_inv.mul(&m.bwd).mul(&p_inv), ..m }
    }

    /// `c · t^k` with `k <= 2`, or zero one time in five.
    pub fn section_k(&mut self) -> RatFun {
        if self.range(0, 4) == 0 {
            return RatFun::zero();
        }
        let c = RatFun::from_rational(self.small_int(3)).plus(&RatFun::t());
        let c = if c.is_zero() { RatFun::one() } else { c };
        c.times(&RatFun::t_pow(self.range(0, 2) as i64))
    }
}

/// Replace the bases of `E_1..E_n` by `ps[0..n]` and of `F_1..F_n` by
/// `qs[0..n]`; an equivalence.
pub fn conjugate<S: Local>(phi: &GenIso<S>, ps: &[Mat<S>], qs: &[Mat<S>]) -> GenIso<S> {
    let n = phi.n;
    let side = |chain: &[BfMorphism<S>], bases: &[Mat<S>]| -> Vec<BfMorphism<S>> {
        let at = |k: usize| if k == 0 { Mat::identity(n) } else { bases[k - 1].clone() };
        (0..n)
            .map(|i| {
                let (lo, hi) = (at(i), at(i + 1));
                let (lo_inv, hi_inv) = (lo.inverse().unwrap(), hi.inverse().unwrap());
                BfMorphism {
                    fwd: lo.mul(&chain[i].fwd).mul(&hi_inv),
                    bwd: hi.mul(&chain[i].bwd).mul(&lo_inv),
                    ..chain[i].clone()
                }
            })
            .collect()
    };
    let iso = if n == 0 { phi.iso.clone() } else { qs[n - 1].mul(&phi.iso).mul(&ps[n - 1].inverse().unwrap()) };
    GenIso { n, gs: side(&phi.gs, ps), hs: side(&phi.hs, qs), iso }
}

/// Every `(I, J)` with `min I + min J >= n`.
pub fn stratum_patterns(n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let subsets = |n: usize| -> Vec<Vec<usize>> {
        (0u32..1 << n).map(|mask| (0..n).filter(|k| mask >> k & 1 == 1).collect()).collect()
    };
    let mut out = Vec::new();
    for i in subsets(n) {
        for j in subsets(n) {
            let ok = match (i.first(), j.first()) {
                (Some(a), Some(b)) => a + b >= n,
                _ => true,
            };
            if ok {
                out.push((i.clone(), j));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::{same_point, stratum};

    #[test]
    fn deterministic() {
        let a = Gen::new(7).invertible_k(3);
        let b = Gen::new(7).invertible_k(3);
        assert_eq!(a, b);
    }

    #[test]
    fn generated_points_are_valid() {
        let mut g = Gen::new(1);
        for n in 1..=3 {
            let (_, phi) = g.gen_iso(n);
            assert!(phi.validate().passed(), "{:?}", phi.validate().failures());
            assert!(g.unimodular_k(n).is_unimodular());
        }
    }

    #[test]
    fn conjugation_keeps_the_point() {
        let mut g = Gen::new(3);
        let p = g.stratum_point(3, &[2], &[1]);
        assert!(p.validate().passed(), "{:?}", p.validate().failures());
        let st = stratum(&p);
        assert_eq!((st.i, st.j), (vec![2], vec![1]));
        let ps: Vec<MatQ> = (0..3).map(|_| g.invertible_q(3)).collect();
        let qs: Vec<MatQ> = (0..3).map(|_| g.invertible_q(3)).collect();
        assert!(same_point(&p, &conjugate(&p, &ps, &qs)).unwrap());
    }

    #[test]
    fn pattern_counts() {
        // n = 2: I, J ⊆ {0,1}; when both are nonempty only ({1}, {1}) qualifies
        assert_eq!(stratum_patterns(2).len(), 4 + 3 + 1);
        assert_eq!(stratum_patterns(1).len(), 3);
    }
}
