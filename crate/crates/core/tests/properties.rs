//! Algebraic invariants under random inputs.

mod common;

use common::Alg;
use masa_core::affine::Field;
use masa_core::matrix::{self, Mat};
use masa_core::scalar::rat;
use masa_core::{CyclicSubgroup, Element, GaussRat, SubgroupGraph, Subgroup, Word};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn raw_letters(rank: i32, max: usize) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec((1..=rank, any::<bool>()).prop_map(|(i, s)| if s { i } else { -i }), 0..=max)
}

fn element(rank: i32) -> impl Strategy<Value = Element> {
    prop::collection::vec((raw_letters(rank, 4), -3i64..=3, -2i64..=2, 1i64..=3), 0..=4).prop_map(
        move |terms| {
            let mut x = Element::zero(rank as usize);
            for (raw, re, im, den) in terms {
                let w = Word::reduce(&raw, rank as usize).unwrap();
                let c = GaussRat::new(rat(re, den), rat(im, den));
                x = x.add(&Element::term(c, w)).unwrap();
            }
            x
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reduction_matches_stack(raw in raw_letters(3, 24)) {
        let w = Word::reduce(&raw, 3).unwrap();
        prop_assert_eq!(common::raw_of(&w), common::reduce(&raw));
        prop_assert!(w.multiply(&w.invert()).unwrap().is_identity());
        let back = Word::parse(&w.to_string(), 3).unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn multiplication_associates(x in raw_letters(2, 8), y in raw_letters(2, 8), z in raw_letters(2, 8)) {
        let (x, y, z) = (
            Word::reduce(&x, 2).unwrap(),
            Word::reduce(&y, 2).unwrap(),
            Word::reduce(&z, 2).unwrap(),
        );
        let left = x.multiply(&y).unwrap().multiply(&z).unwrap();
        let right = x.multiply(&y.multiply(&z).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left.invert(), z.invert().multiply(&y.invert()).unwrap().multiply(&x.invert()).unwrap());
    }

    #[test]
    fn root_power_recovers_word(raw in raw_letters(2, 5), k in 1i64..4) {
        let w = Word::reduce(&raw, 2).unwrap();
        prop_assume!(!w.is_identity());
        let (root, e) = w.pow(k).root_power().unwrap();
        prop_assert_eq!(root.pow(e as i64), w.pow(k));
        prop_assert!(root.is_prime().unwrap());
    }

    #[test]
    fn element_laws(x in element(2), y in element(2), z in element(2)) {
        let xy_z = x.multiply(&y).unwrap().multiply(&z).unwrap();
        let x_yz = x.multiply(&y.multiply(&z).unwrap()).unwrap();
        prop_assert_eq!(&xy_z, &x_yz);
        let dist = x.multiply(&y.add(&z).unwrap()).unwrap();
        prop_assert_eq!(dist, x.multiply(&y).unwrap().add(&x.multiply(&z).unwrap()).unwrap());
        prop_assert_eq!(x.multiply(&y).unwrap().adjoint(), y.adjoint().multiply(&x.adjoint()).unwrap());
        let oracle = Alg::from_element(&x).mul(&Alg::from_element(&y));
        prop_assert_eq!(Alg::from_element(&x.multiply(&y).unwrap()), oracle);
        // tr(x*x) = ‖x‖₂²
        let t = x.adjoint().multiply(&x).unwrap().trace();
        prop_assert_eq!(t, GaussRat::real(x.norm2_sq()));
    }

    #[test]
    fn expectation_is_a_bimodular_projection(x in element(2), p in -3i64..=3, q in -3i64..=3) {
        let a = Word::generator(2, 1).unwrap();
        let h = CyclicSubgroup::new(a.clone());
        let e = x.expect(&h).unwrap();
        prop_assert_eq!(e.expect(&h).unwrap(), e.clone());
        prop_assert_eq!(e.trace(), x.trace());
        prop_assert_eq!(Alg::from_element(&e), Alg::from_element(&x).expect_gen(1));
        let (ap, aq) = (Element::from_word(a.pow(p)), Element::from_word(a.pow(q)));
        let sandwich = ap.multiply(&x).unwrap().multiply(&aq).unwrap().expect(&h).unwrap();
        prop_assert_eq!(sandwich, ap.multiply(&e).unwrap().multiply(&aq).unwrap());
        let rest = x.expect_complement(&h).unwrap();
        prop_assert_eq!(e.norm2_sq() + rest.norm2_sq(), x.norm2_sq());
    }

    #[test]
    fn graph_expectation_matches_cyclic(x in element(2), k in 1i64..=3) {
        let w = Word::generator(2, 2).unwrap().pow(k);
        let graph = SubgroupGraph::build(2, std::slice::from_ref(&w)).unwrap();
        let cyc = CyclicSubgroup::new(w);
        prop_assert_eq!(x.expect(&graph).unwrap(), x.expect(&cyc).unwrap());
        for g in x.support() {
            prop_assert_eq!(graph.contains(g).unwrap(), cyc.contains(g).unwrap());
        }
    }

    #[test]
    fn field_axioms(stage in 0usize..6, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let (p, d) = [(2, 3), (3, 2), (5, 2), (2, 5), (7, 1), (3, 3)][stage];
        let f = Field::new(p, d).unwrap();
        let q = f.order();
        let (a, b, c) = (f.element(a % q), f.element(b % q), f.element(c % q));
        let ab = f.mul(a, b).unwrap();
        prop_assert_eq!(f.mul(ab, c).unwrap(), f.mul(a, f.mul(b, c).unwrap()).unwrap());
        prop_assert_eq!(ab, f.mul(b, a).unwrap());
        let lhs = f.mul(a, f.add(b, c).unwrap()).unwrap();
        let rhs = f.add(ab, f.mul(a, c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(f.add(a, f.neg(a).unwrap()).unwrap(), f.zero());
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()).unwrap(), f.one());
        }
        // Frobenius is additive and multiplicative
        prop_assert_eq!(f.frobenius(f.add(a, b).unwrap()).unwrap(), f.add(f.frobenius(a).unwrap(), f.frobenius(b).unwrap()).unwrap());
        prop_assert_eq!(f.frobenius(ab).unwrap(), f.mul(f.frobenius(a).unwrap(), f.frobenius(b).unwrap()).unwrap());
    }
}

fn max_abs(x: &Mat) -> f64 {
    x.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn matrix_expectation_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..500 {
        let n = 2 + k % 7;
        let x = matrix::ginibre(n, &mut rng);
        let y = matrix::ginibre(n, &mut rng);
        let u = matrix::haar_unitary(n, &mut rng);
        let d = DMatrix::from_diagonal(&matrix::ginibre(n, &mut rng).diagonal());
        let e = matrix::expect_diag(&x);
        assert!(max_abs(&(matrix::expect_diag(&e) - &e)) <= matrix::EXACT_TOL);
        assert!((matrix::trace(&e) - matrix::trace(&x)).norm() <= matrix::EXACT_TOL);
        // A-bimodular
        let lhs = matrix::expect_diag(&(&d * &x * &d));
        assert!(max_abs(&(lhs - &d * &e * &d)) <= matrix::EXACT_TOL);
        // self-adjoint for the trace inner product
        let l = matrix::inner(&e, &y);
        let r = matrix::inner(&x, &matrix::expect_diag(&y));
        assert!((l - r).norm() <= matrix::EXACT_TOL);
        // contractive in ‖·‖₂
        assert!(matrix::norm2(&e) <= matrix::norm2(&x) + matrix::EXACT_TOL);
        // conjugated expectation is again an idempotent fixing uAu*
        let f = matrix::expect_conjugated(&u, &x).unwrap();
        let ff = matrix::expect_conjugated(&u, &f).unwrap();
        assert!(max_abs(&(ff - &f)) <= 1e-11);
        let fixed = &u * &d * u.adjoint();
        let g = matrix::expect_conjugated(&u, &fixed).unwrap();
        assert!(max_abs(&(g - fixed)) <= 1e-11);
        let scaled = matrix::expect_diag(&(&x * Complex64::new(0.0, 2.0)));
        assert!(max_abs(&(scaled - &e * Complex64::new(0.0, 2.0))) <= matrix::EXACT_TOL);
    }
}
