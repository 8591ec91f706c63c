//! Property tests across modules, driven by seeded generators.

mod common;

use common::*;
use hermlat::bounds::BigBound;
use hermlat::hermitian::{bounded_basis, UnimodularMatrix};
use hermlat::homology::{card_ell, cokernel_torsion, ElementaryDivisors};
use hermlat::ideal_lattice::{close_integer, IdealLattice};
use hermlat::rational::{rat, Rat};
use num_bigint::BigInt;
use proptest::prelude::*;

const FIELDS: [&str; 3] = ["rational", "gaussian", "eisenstein"];

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn minimal_vectors_match_box_search(seed in any::<u64>(), which in 0usize..3, n in 1usize..3) {
        let f = field(FIELDS[which]);
        let mut r = rng(seed);
        let l = random_form(&mut r, &f, n);
        if let Some((m, brute)) = brute_force_minimum(l.q_gram().entries(), 200_000) {
            let mv = l.minimal_vectors().unwrap();
            prop_assert_eq!(&mv.minimum, &m);
            let got: std::collections::BTreeSet<Vec<BigInt>> = mv.vectors.iter().map(|v| l.flatten(v).unwrap()).collect();
            prop_assert_eq!(got, brute);
        }
    }

    #[test]
    fn gamma_action_is_an_isometry(seed in any::<u64>(), which in 0usize..3) {
        let f = field(FIELDS[which]);
        let mut r = rng(seed);
        let l = random_form(&mut r, &f, 2);
        let g = random_unimodular(&mut r, &f, 2, 5);
        let moved = l.gamma_action(&g).unwrap();
        let x = vec![random_integer(&mut r, &f, 3), random_integer(&mut r, &f, 3)];
        prop_assert_eq!(moved.qh_value(&g.apply(&f, &x)).unwrap(), l.qh_value(&x).unwrap());
        let back = UnimodularMatrix::new(&f, g.inverse().clone()).unwrap();
        prop_assert_eq!(back.apply(&f, &g.apply(&f, &x)), x);
    }

    #[test]
    fn closest_vector_beats_its_neighbours(seed in any::<u64>(), which in 0usize..3) {
        let f = field(FIELDS[which]);
        let mut r = rng(seed);
        let lat = IdealLattice::ring_of_integers(&f).unwrap();
        let t = random_element(&mut r, &f, 10, 50);
        let cv = lat.closest_to_element(&t).unwrap();
        prop_assert!(cv.certified);
        let dist = |x: &hermlat::FieldElement| f.q0(&t.sub(x)).unwrap();
        let best = dist(&cv.element);
        prop_assert_eq!(&cv.dist2.hi, &best);
        for i in 0..f.degree() {
            for s in [-1i64, 1] {
                let step = f.basis_element(i).scale(&rat(s));
                prop_assert!(dist(&cv.element.add(&step)) >= best);
            }
        }
        prop_assert!(lat.covering_bound().covers(&cv.dist2));
    }

    #[test]
    fn close_integer_is_close(seed in any::<u64>(), which in 0usize..3) {
        let f = field(FIELDS[which]);
        let mut r = rng(seed);
        let x = random_real_point(&mut r, &f, 50);
        let c = close_integer(&f, &x).unwrap();
        prop_assert!(c.element.is_integral());
        prop_assert!(c.l1_within && c.euclid_within);
    }

    #[test]
    fn principal_ideal_determinants(seed in any::<u64>(), which in 0usize..3) {
        let f = field(FIELDS[which]);
        let mut r = rng(seed);
        let g = random_element(&mut r, &f, 6, 4);
        prop_assume!(!g.is_zero());
        let ideal = f.principal_ideal(&g).unwrap();
        prop_assert_eq!(ideal.norm(), &f.norm_abs(&g));
        let lat = IdealLattice::of_ideal(&f, ideal.clone()).unwrap();
        let want = ideal.norm() * ideal.norm() * Rat::from_integer(f.abs_discriminant());
        prop_assert_eq!(lat.trace_gram().unwrap().determinant(), want);
    }

    #[test]
    fn homology_torsion_obeys_column_norm_bound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let cx = random_complex(&mut r);
        for k in 0..2 {
            let c = cx.torsion_bound_check(k).unwrap();
            prop_assert!(c.holds);
            prop_assert!(BigBound::from_biguint(&c.torsion).le(&c.bound).unwrap());
        }
        prop_assert_eq!(cx.homology_torsion(0), cokernel_torsion(&cx.boundaries()[0]));
    }

    #[test]
    fn card_ell_decreases_in_ell(orders in prop::collection::vec(1u64..30, 1..4)) {
        let a = ElementaryDivisors::from_cyclic_orders(&orders).unwrap();
        let mut prev = a.torsion_order();
        for ell in 1..=12 {
            let c = card_ell(&a, ell);
            prop_assert!(c <= prev);
            prop_assert!((a.torsion_order() % &c) == num_bigint::BigUint::from(0u32));
            prev = c;
        }
    }

    #[test]
    fn bigbound_order_is_consistent(a in 1u64..500, b in 1u64..500, c in 1u64..500, e in 1i64..6) {
        let (x, y, z) = (BigBound::from_int(a).powi(e), BigBound::from_int(b).powi(e), BigBound::from_int(c).powi(e));
        prop_assert_eq!(x.le(&y).unwrap(), a <= b);
        if x.le(&y).unwrap() && y.le(&z).unwrap() {
            prop_assert!(x.le(&z).unwrap());
        }
        prop_assert_eq!(x.le(&y).unwrap() && y.le(&x).unwrap(), a == b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn bounded_basis_of_moved_seeds(seed in any::<u64>(), which in 0usize..2) {
        let f = field(["gaussian", "eisenstein"][which]);
        let mut r = rng(seed);
        let seeds = well_rounded_seeds(&f);
        let l = &seeds[seed as usize % seeds.len()];
        let g = random_unimodular(&mut r, &f, l.rank(), 4);
        let moved = l.gamma_action(&g).unwrap();
        let bb = bounded_basis(&moved).unwrap();
        prop_assert!(UnimodularMatrix::from_columns(&f, &bb.basis).is_ok());
        prop_assert_eq!(bb.within_general, Some(true));
        // an isometric image has the same minimum
        prop_assert_eq!(moved.minimal_vectors().unwrap().minimum, rat(1));
    }
}
