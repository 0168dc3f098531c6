mod common;

use std::collections::BTreeSet;

use common::{box_search_generator, brute_force_regular_subgroups, fields};
use hopf_galois::etale_fields::{build_cyclotomic, build_kummer_cubic};
use hopf_galois::hopf_structures::HopfGaloisStructure;
use hopf_galois::integral_orders::{generator_search, lambda_fixed_order, FreenessStatus, SearchOptions};
use hopf_galois::perm_groups::{enumerate_regular_subgroups, EnumerationOptions, FiniteGroup};
use hopf_galois::rational::q;
use hopf_galois::Exec;

fn small_groups() -> Vec<(&'static str, FiniteGroup)> {
    let mut out: Vec<(&str, FiniteGroup)> = vec![
        ("C_1", FiniteGroup::cyclic(1).unwrap()),
        ("C_2", FiniteGroup::cyclic(2).unwrap()),
        ("C_3", FiniteGroup::cyclic(3).unwrap()),
        ("C_4", FiniteGroup::cyclic(4).unwrap()),
        ("C_5", FiniteGroup::cyclic(5).unwrap()),
        ("C_6", FiniteGroup::cyclic(6).unwrap()),
        ("D_3", FiniteGroup::dihedral3("r", "s")),
    ];
    let c2 = FiniteGroup::cyclic(2).unwrap();
    out.push(("C_2 x C_2", FiniteGroup::direct_product(&c2, &c2).unwrap()));
    out
}

#[test]
fn enumeration_matches_brute_force() {
    for (name, g) in small_groups() {
        let fast: BTreeSet<Vec<Vec<usize>>> = g
            .hopf_galois_structures(false, 8)
            .unwrap()
            .iter()
            .map(|n| n.elements().iter().map(|e| e.images().to_vec()).collect())
            .collect();
        assert_eq!(fast, brute_force_regular_subgroups(&g), "{name}");
    }
}

#[test]
fn frozen_structure_counts() {
    let count = |g: &FiniteGroup| g.hopf_galois_structures(false, 8).unwrap().len();
    assert_eq!(count(&FiniteGroup::dihedral3("r", "s")), 5);
    assert_eq!(count(&FiniteGroup::cyclic(4).unwrap()), 2);
    assert_eq!(count(&FiniteGroup::cyclic(6).unwrap()), 3);
    assert_eq!(count(&FiniteGroup::cyclic(7).unwrap()), 1);
    let c2 = FiniteGroup::cyclic(2).unwrap();
    assert_eq!(count(&FiniteGroup::direct_product(&c2, &c2).unwrap()), 4);
    // all regular subgroups of S_n
    let opts = EnumerationOptions { normalizer: None, abelian_only: false, bound: 8, ..Default::default() };
    let all: Vec<usize> = (1..=6).map(|n| enumerate_regular_subgroups(n, &opts).unwrap().len()).collect();
    assert_eq!(all, vec![1, 1, 1, 4, 6, 80]);
}

#[test]
fn generator_search_matches_box_search() {
    for f in fields().into_iter().filter(|f| f.ext.dim() <= 4) {
        let p = f.ramified;
        for n in f.ext.group().hopf_galois_structures(false, 8).unwrap() {
            let h = HopfGaloisStructure::new(f.ext.clone(), n).unwrap();
            let lambda = lambda_fixed_order(&h, p).unwrap();
            for k in -1..=1 {
                let b = f.ext.ideal_power(p, k).unwrap();
                let res = generator_search(&h, &lambda, &b, &SearchOptions::default()).unwrap();
                let boxed = box_search_generator(&h, &lambda, &b, 2, 1);
                assert_eq!(res.is_free(), boxed.is_some(), "{} k = {k}", f.name);
            }
        }
    }
}

#[test]
fn wild_quadratic_is_not_free() {
    // Z[i] over Z_(2)[C_2]: x = a + bi gives det -2ab
    let ext = std::sync::Arc::new(build_cyclotomic(4).unwrap());
    let h = HopfGaloisStructure::new(ext.clone(), ext.group().right_regular()).unwrap();
    let lambda = lambda_fixed_order(&h, 2).unwrap();
    let res = generator_search(&h, &lambda, &ext.integral_lattice(2), &SearchOptions::default()).unwrap();
    assert_eq!(res.status, FreenessStatus::NotFree);
    assert_eq!(res.search_size, 4);
}

#[test]
fn sequential_and_parallel_agree() {
    let ext = std::sync::Arc::new(build_kummer_cubic(5).unwrap());
    for n in ext.group().hopf_galois_structures(false, 8).unwrap() {
        let h = HopfGaloisStructure::new(ext.clone(), n).unwrap();
        let lambda = lambda_fixed_order(&h, 5).unwrap();
        let o = ext.integral_lattice(5);
        let seq = SearchOptions { exec: Exec::Sequential, ..Default::default() };
        let par = SearchOptions { exec: Exec::Parallel, ..Default::default() };
        assert_eq!(generator_search(&h, &lambda, &o, &seq).unwrap(), generator_search(&h, &lambda, &o, &par).unwrap());
    }
}

#[test]
fn frozen_field_values() {
    let c3 = build_cyclotomic(3).unwrap();
    let alg = c3.algebra();
    let z = alg.element("z").unwrap();
    assert_eq!(alg.mul(&z, &z), vec![q(-1), q(-1)]);
    assert_eq!(c3.discriminant(), q(-3));
    let k = build_kummer_cubic(5).unwrap();
    let a = k.algebra().element("a").unwrap();
    assert_eq!(k.algebra().pow(&a, 3), k.algebra().one().iter().map(|c| c * q(5)).collect::<Vec<_>>());
    assert_eq!(k.valuation(&k.algebra().one().iter().map(|c| c * q(5)).collect::<Vec<_>>(), 5).unwrap(), 3);
    assert_eq!(k.inertia_subgroup(5).unwrap().len(), 3);
}
