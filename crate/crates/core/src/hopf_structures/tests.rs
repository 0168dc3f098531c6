use std::sync::Arc;

use num_traits::{One, Zero};

use super::*;
use crate::etale_fields::{build_cyclotomic, build_kummer_cubic, GaloisAlgebra};
use crate::perm_groups::{Permutation, RegularSubgroup, Subgroup};
use crate::rational::{q, Q};

fn kummer() -> Arc<GaloisAlgebra> {
    Arc::new(build_kummer_cubic(5).unwrap())
}

fn el(ext: &GaloisAlgebra, name: &str) -> Vec<Q> {
    ext.algebra().element(name).unwrap()
}

#[test]
fn classical_structure_acts_like_the_group() {
    let ext = kummer();
    let rho = ext.group().right_regular();
    let h = HopfGaloisStructure::new(ext.clone(), rho).unwrap();
    assert!(h.is_classical());
    assert_eq!(h.dim(), 6);
    // ρ(g)^{-1}(1) = g
    for g in ext.group().elements() {
        let z = GroupAlgebraElement::group_element(ext.group().rho(g), ext.algebra());
        assert!(h.is_fixed(&z));
        let x = el(&ext, "za");
        assert_eq!(h.hopf_action(&z, &x), ext.apply(g, &x));
    }
    assert!(h.module_algebra_check());
    assert!(h.is_hopf_galois());
}

#[test]
fn every_structure_on_the_kummer_field_is_hopf_galois() {
    let ext = kummer();
    let all = ext.group().hopf_galois_structures(false, 8).unwrap();
    assert_eq!(all.len(), 5);
    for n in all {
        let h = HopfGaloisStructure::new(ext.clone(), n).unwrap();
        assert_eq!(h.dim(), 6);
        assert!(h.is_fixed(&h.theta(h.elements())));
        assert_eq!(h.counit(&h.one()), Q::one());
        assert!(h.module_algebra_check());
        assert!(h.is_hopf_galois());
    }
}

#[test]
fn counterexample_element() {
    let ext = kummer();
    let g = ext.group();
    let alg = ext.algebra();
    let h = HopfGaloisStructure::new(ext.clone(), g.left_regular()).unwrap();
    let a2 = el(&ext, "a2");
    let za2 = el(&ext, "za2");
    let z2a2 = alg.mul(&el(&ext, "z"), &za2);
    let z = GroupAlgebraElement::from_terms([
        (g.lambda(3), a2),
        (g.lambda(5), z2a2),
        (g.lambda(4), za2),
    ]);
    assert!(h.is_fixed(&z));
    assert!(h.coords_of(&z).is_some());
    let zeta = el(&ext, "z");
    let a = el(&ext, "a");
    for i in 1..3u64 {
        for j in 0..3u64 {
            let x = alg.mul(&alg.pow(&zeta, i), &alg.pow(&a, j));
            let expected: Vec<Q> = alg.mul(&alg.pow(&zeta, 3 - i), &a).iter().map(|c| c * q(15)).collect();
            let y = h.hopf_action(&z, &x);
            if j == 2 {
                assert_eq!(y, expected, "i = {i}");
            } else {
                assert!(y.iter().all(Zero::is_zero), "i = {i}, j = {j}");
            }
        }
    }
}

#[test]
fn non_normalized_subgroup_has_small_fixed_ring() {
    let ext = kummer();
    // a regular C_6 inside S_6 not normalized by λ(D_3)
    let c6 = Permutation::new(vec![1, 2, 3, 4, 5, 0]).unwrap();
    let elements = (0..6).map(|k| c6.pow(k)).collect();
    let n = RegularSubgroup::new(elements).unwrap();
    assert!(!n.is_normalized_by(&ext.group().lambda_image()));
    assert!(matches!(HopfGaloisStructure::new(ext, n), Err(HopfError::DimensionMismatch { expected: 6, .. })));
}

#[test]
fn sub_hopf_algebras_and_fixed_fields() {
    let ext = kummer();
    let g = ext.group();
    let h = HopfGaloisStructure::new(ext.clone(), g.left_regular()).unwrap();
    // λ(⟨s⟩) is normal, so stable
    let c3: Vec<Permutation> = [0, 1, 2].iter().map(|&k| g.lambda(k)).collect();
    assert_eq!(h.sub_hopf_algebra(&c3).unwrap().len(), 3);
    assert_eq!(h.fixed_field(&c3).unwrap().nrows(), 2);
    let c2: Vec<Permutation> = [0, 3].iter().map(|&k| g.lambda(k)).collect();
    assert!(matches!(h.sub_hopf_algebra(&c2), Err(HopfError::NotStable)));
    let trivial = vec![Permutation::identity(6)];
    assert_eq!(h.fixed_field(&trivial).unwrap().nrows(), 6);
    assert_eq!(h.fixed_field(h.elements()).unwrap().nrows(), 1);
}

#[test]
fn structure_on_a_non_galois_subfield() {
    let ext = kummer();
    let g = ext.group();
    let gl = g.generate(&[3]);
    let cosets = crate::perm_groups::CosetSpace::new(g, &gl).unwrap();
    let all = crate::perm_groups::enumerate_regular_subgroups(
        3,
        &crate::perm_groups::EnumerationOptions {
            normalizer: Some(cosets.lambda_image(g)),
            abelian_only: false,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(all.len(), 1);
    let h = HopfGaloisStructure::on_subfield(ext.clone(), &gl, all[0].clone()).unwrap();
    assert_eq!(h.dim(), 3);
    assert!(!h.is_galois());
    assert!(h.module_algebra_check());
    assert!(h.is_hopf_galois());
    // θ_N acts as the trace to Q
    let theta = h.theta(h.elements());
    let a = el(&ext, "a");
    assert!(h.to_subfield(&a).is_some());
    assert!(h.hopf_action(&theta, &a).iter().all(Zero::is_zero));
    assert_eq!(h.hopf_action(&theta, ext.algebra().one()), ext.algebra().one().iter().map(|c| c * q(3)).collect::<Vec<_>>());
}

#[test]
fn map_model_identities() {
    let ext = Arc::new(build_cyclotomic(7).unwrap());
    let x = el(&ext, "z3");
    let f = gp_embed(&ext, &x);
    assert!(f.is_fixed(&ext));
    assert_eq!(gp_project(&ext, &f).unwrap(), x);
    assert!(matches!(gp_project(&ext, &MapModelElement::idempotent(&ext, 1)), Err(HopfError::NotFixed)));
    // Σ_g u_g = 1
    let mut sum = MapModelElement::idempotent(&ext, 0);
    for g in 1..6 {
        for (s, v) in sum.values.iter_mut().zip(MapModelElement::idempotent(&ext, g).values) {
            for (a, b) in s.iter_mut().zip(v) {
                *a += b;
            }
        }
    }
    assert!(sum.is_one(&ext));
    let lattice = ext.integral_lattice(7);
    assert!(gamma_fixed_matches(&ext, &lattice).unwrap());
}

#[test]
fn f_element_commutes_with_invariant_part() {
    let ext = Arc::new(build_cyclotomic(7).unwrap());
    let g = ext.group();
    let whole = Subgroup::from_elements(g.elements().collect());
    let x = ext.trace_one_element(&whole, 7).unwrap();
    assert_eq!(ext.trace(&x), Q::one());
    let s = g.right_regular();
    let f = f_element(&ext, &x, s.elements()).unwrap();
    assert!(f.is_fixed(&ext));
    assert!(f.is_one(&ext));
    assert!(f_commutes_with_fixed_s(&ext, &f, s.elements(), &whole));
    assert!(matches!(f_element(&ext, ext.algebra().one(), s.elements()), Err(HopfError::TraceNotOne)));
}

#[test]
fn projections() {
    let ext = kummer();
    let g = ext.group();
    let gl = g.generate(&[3]);
    let cosets = crate::perm_groups::CosetSpace::new(g, &gl).unwrap();
    // ρ(t) fixes every coset, λ(s) rotates them
    let z = GroupAlgebraElement::from_terms([(g.rho(3), el(&ext, "a")), (g.lambda(1), el(&ext, "1"))]);
    let p = project_to_cosets(&z, &cosets).unwrap();
    assert_eq!(p.coefficient(&Permutation::identity(3)), Some(&el(&ext, "a")));
    assert_eq!(p.terms().count(), 2);
    // λ(⟨s⟩) × ρ(⟨t⟩) factorization
    let s: Vec<Permutation> = [0, 1, 2].iter().map(|&k| g.lambda(k)).collect();
    let t: Vec<Permutation> = [0, 3].iter().map(|&k| g.rho(k)).collect();
    let w = GroupAlgebraElement::from_terms([(g.lambda(1).compose(&g.rho(3)), el(&ext, "z"))]);
    let pw = projection_pi(&w, &s, &t).unwrap();
    assert_eq!(pw.coefficient(&g.lambda(1)), Some(&el(&ext, "z")));
    let bad = GroupAlgebraElement::from_terms([(g.lambda(3), el(&ext, "z"))]);
    assert!(matches!(projection_pi(&bad, &s, &t), Err(HopfError::NotDirectProduct)));
}
