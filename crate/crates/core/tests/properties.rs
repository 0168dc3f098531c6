mod common;

use std::sync::Arc;

use hopf_galois::etale_fields::{build_cyclotomic, build_kummer_cubic, Lattice};
use hopf_galois::hopf_structures::{gp_embed, HopfGaloisStructure};
use hopf_galois::integral_orders::{associated_order, generator_search, lambda_fixed_order, SearchOptions};
use hopf_galois::linalg::Matrix;
use hopf_galois::perm_groups::Permutation;
use hopf_galois::rational::q;
use hopf_galois::Q;
use proptest::prelude::*;

fn qs(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn permutation_group_laws(a in perm(6), b in perm(6), c in perm(6)) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert!(a.compose(&a.inverse()).is_identity());
        prop_assert_eq!(a.compose(&b).inverse(), b.inverse().compose(&a.inverse()));
        prop_assert_eq!(a.pow(a.order()), Permutation::identity(6));
    }

    #[test]
    fn hnf_ignores_the_choice_of_basis(
        rows in prop::collection::vec(prop::collection::vec(-9i64..10, 3), 3),
        u in prop::collection::vec(-3i64..4, 3),
    ) {
        let m = Matrix::from_rows(rows.iter().map(|r| qs(r)).collect());
        prop_assume!(m.det() != q(0));
        let l = Lattice::from_matrix(&m, 3).unwrap();
        // a unimodular change of basis: unit lower triangular times a swap
        let t = Matrix::from_rows(vec![qs(&[0, 1, 0]), qs(&[1, u[0], 0]), qs(&[u[1], u[2], 1])]);
        let moved = Lattice::from_matrix(&t.mul(&m), 3).unwrap();
        prop_assert_eq!(&l, &moved);
        // scaling by a unit prime to 3 changes nothing, by 3 changes the index
        prop_assert_eq!(&l.scale(&q(2)), &l);
        prop_assert_eq!(l.index_of(&l.scale(&q(3))), Some(3));
    }

    #[test]
    fn kummer_valuation_is_additive(
        x in prop::collection::vec(-4i64..5, 6),
        y in prop::collection::vec(-4i64..5, 6),
    ) {
        prop_assume!(x.iter().any(|&c| c != 0) && y.iter().any(|&c| c != 0));
        let ext = build_kummer_cubic(5).unwrap();
        let (x, y) = (qs(&x), qs(&y));
        let xy = ext.algebra().mul(&x, &y);
        let vx = ext.valuation(&x, 5).unwrap();
        let vy = ext.valuation(&y, 5).unwrap();
        prop_assert_eq!(ext.valuation(&xy, 5).unwrap(), vx + vy);
        prop_assert!(ext.ideal_power(5, vx).unwrap().contains(&x));
        prop_assert!(!ext.ideal_power(5, vx + 1).unwrap().contains(&x));
    }

    #[test]
    fn the_two_action_models_agree(x in prop::collection::vec(-5i64..6, 6), index in 0usize..5) {
        let ext = Arc::new(build_kummer_cubic(5).unwrap());
        let n = ext.group().hopf_galois_structures(false, 8).unwrap().remove(index);
        let h = HopfGaloisStructure::new(ext.clone(), n).unwrap();
        let x = qs(&x);
        for z in h.basis() {
            prop_assert_eq!(gp_embed(&ext, &h.hopf_action(z, &x)), gp_embed(&ext, &x).act(z, &ext));
        }
    }

    #[test]
    fn hopf_action_is_a_module_action(x in prop::collection::vec(-5i64..6, 6), i in 0usize..6, j in 0usize..6) {
        let ext = Arc::new(build_kummer_cubic(5).unwrap());
        let n = ext.group().left_regular();
        let h = HopfGaloisStructure::new(ext, n).unwrap();
        let x = qs(&x);
        let (hi, hj) = (&h.basis()[i], &h.basis()[j]);
        let prod = hi.mul(hj, h.ext().algebra());
        prop_assert_eq!(h.hopf_action(&prod, &x), h.hopf_action(hi, &h.hopf_action(hj, &x)));
    }
}

#[test]
fn free_means_the_order_is_the_associated_order() {
    for f in common::fields() {
        let p = f.ramified;
        for n in f.ext.group().hopf_galois_structures(false, 8).unwrap() {
            let h = HopfGaloisStructure::new(f.ext.clone(), n).unwrap();
            let lambda = lambda_fixed_order(&h, p).unwrap();
            for k in [0, 1] {
                let b = f.ext.ideal_power(p, k).unwrap();
                if generator_search(&h, &lambda, &b, &SearchOptions::default()).unwrap().is_free() {
                    assert_eq!(associated_order(&h, &b).unwrap(), lambda, "{} k = {k}", f.name);
                }
            }
        }
    }
}

#[test]
fn classical_structure_is_the_galois_action() {
    let ext = Arc::new(build_cyclotomic(7).unwrap());
    let g = ext.group();
    let h = HopfGaloisStructure::new(ext.clone(), g.right_regular()).unwrap();
    let x = qs(&[3, -1, 4, 1, -5, 9]);
    for s in g.elements() {
        let z = hopf_galois::hopf_structures::GroupAlgebraElement::group_element(g.rho(s), ext.algebra());
        assert_eq!(h.hopf_action(&z, &x), ext.apply(s, &x));
    }
}
