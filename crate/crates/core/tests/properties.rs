use proptest::prelude::*;

use kgl_core::arith::{parse_ratfun, Local, RatFun, Rational, Scalar, Valuation};
use kgl_core::atlas::{iota, toric_coordinates};
use kgl_core::matrix::{hnf_dvr, smith_dvr, subsets, Lattice};
use kgl_core::random::Gen;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg(200))]

    #[test]
    fn field_axioms(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let (a, b, c) = (g.ratfun(), g.ratfun(), g.ratfun());
        prop_assert_eq!(a.plus(&b), b.plus(&a));
        prop_assert_eq!(a.times(&b), b.times(&a));
        prop_assert_eq!(a.plus(&b).plus(&c), a.plus(&b.plus(&c)));
        prop_assert_eq!(a.times(&b).times(&c), a.times(&b.times(&c)));
        prop_assert_eq!(a.times(&b.plus(&c)), a.times(&b).plus(&a.times(&c)));
        prop_assert!(a.minus(&a).is_zero());
        prop_assert_eq!(a.plus(&RatFun::zero()), a.clone());
        prop_assert_eq!(a.times(&RatFun::one()), a.clone());
        if !a.is_zero() {
            prop_assert!(a.times(&Scalar::inverse(&a).unwrap()).is_one());
        }
    }

    #[test]
    fn valuation_is_a_valuation(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let (a, b) = (g.ratfun(), g.ratfun());
        prop_assert_eq!(a.times(&b).tval(), a.tval() + b.tval());
        prop_assert!(a.plus(&b).tval() >= a.tval().min(b.tval()));
        if a.tval() != b.tval() {
            prop_assert_eq!(a.plus(&b).tval(), a.tval().min(b.tval()));
        }
        // the residue of a unit is its value at zero
        if a.tval() == Valuation::Fin(0) {
            prop_assert!(!a.residue().unwrap().is_zero());
        }
    }
}

proptest! {
    #![proptest_config(cfg(1000))]

    #[test]
    fn parse_print_round_trip(seed in any::<u64>()) {
        let x = Gen::new(seed).ratfun();
        prop_assert_eq!(parse_ratfun(&x.to_text()).unwrap(), x);
    }
}

proptest! {
    #![proptest_config(cfg(40))]

    #[test]
    fn hnf_ignores_the_choice_of_basis(seed in any::<u64>(), n in 1usize..=3) {
        let mut g = Gen::new(seed);
        let m = g.invertible_k(n);
        let u = g.unimodular_k(n);
        prop_assert_eq!(hnf_dvr(&m.mul(&u)).unwrap(), hnf_dvr(&m).unwrap());
    }

    #[test]
    fn lattices_are_modular(seed in any::<u64>(), n in 1usize..=2) {
        let mut g = Gen::new(seed);
        let a = Lattice::new(&g.invertible_k(n)).unwrap();
        let b = Lattice::new(&g.invertible_k(n)).unwrap();
        let c = a.sum(&Lattice::new(&g.invertible_k(n)).unwrap()).unwrap();
        prop_assert!(c.contains(&a).unwrap());
        let lhs = a.sum(&b.intersect(&c).unwrap()).unwrap();
        let rhs = a.sum(&b).unwrap().intersect(&c).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn smith_exponents_match_minor_orders(seed in any::<u64>(), n in 1usize..=3) {
        let x = Gen::new(seed).invertible_k(n);
        let sm = smith_dvr(&x).unwrap();
        for r in 1..=n {
            let want = subsets(n, r)
                .iter()
                .flat_map(|rows| subsets(n, r).into_iter().map(move |cols| (rows.clone(), cols)))
                .map(|(rows, cols)| x.submatrix(&rows, &cols).det().order())
                .min()
                .unwrap();
            prop_assert_eq!(want, Valuation::Fin(sm.m[..r].iter().sum()));
        }
    }

    #[test]
    fn toric_generators_are_ratios_of_homogeneous_coordinates(seed in any::<u64>(), n in 1usize..=4) {
        let mut g = Gen::new(seed);
        let draw = |g: &mut Gen| -> Vec<Rational> { (0..n).map(|_| g.nonzero_rational()).collect() };
        let (phi, mus, las) = (draw(&mut g), draw(&mut g), draw(&mut g));
        let prod = |v: &[Rational]| v.iter().fold(Rational::one(), |a, x| a * x);
        // T_0 = 1, T_i = φ_i λ_0⋯λ_{i-1} / (μ_0⋯μ_{n-i})
        let t: Vec<Rational> = (0..=n)
            .map(|i| if i == 0 { Rational::one() } else { &phi[i - 1] * prod(&las[..i]) / prod(&mus[..=n - i]) })
            .collect();
        for l in 0..=n {
            let a = toric_coordinates(l, &phi, &mus, &las).unwrap();
            for nu in 1..=n {
                prop_assert_eq!(&a[nu - 1], &(&t[iota(l, nu + 1)] / &t[iota(l, nu)]));
            }
        }
    }
}
