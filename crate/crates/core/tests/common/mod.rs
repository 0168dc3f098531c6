//! Independent reference implementations used to cross-check the library.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use hopf_galois::etale_fields::{build_cyclotomic, build_kummer_cubic, GaloisAlgebra, Lattice};
use hopf_galois::hopf_structures::HopfGaloisStructure;
use hopf_galois::integral_orders::Order;
use hopf_galois::perm_groups::FiniteGroup;
use hopf_galois::Q;

pub type Perm = Vec<usize>;

fn compose(a: &Perm, b: &Perm) -> Perm {
    b.iter().map(|&i| a[i]).collect()
}

fn all_perms(n: usize) -> Vec<Perm> {
    fn rec(prefix: &mut Perm, used: &mut [bool], out: &mut Vec<Perm>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Closure of `gens` under composition, or `None` once it exceeds `cap`.
fn closure(gens: &[Perm], n: usize, cap: usize) -> Option<BTreeSet<Perm>> {
    let mut set: BTreeSet<Perm> = BTreeSet::new();
    set.insert((0..n).collect());
    let mut frontier: Vec<Perm> = set.iter().cloned().collect();
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = compose(g, &x);
            if set.insert(y.clone()) {
                if set.len() > cap {
                    return None;
                }
                frontier.push(y);
            }
        }
    }
    Some(set)
}

/// Every subgroup of `S_n` of order `n` generated by at most two elements
/// (which covers all groups of order at most 7) that is regular and
/// normalized by left translations of `group`; as sorted image lists.
pub fn brute_force_regular_subgroups(group: &FiniteGroup) -> BTreeSet<Vec<Perm>> {
    let n = group.order();
    let perms = all_perms(n);
    let lambda: Vec<Perm> = (0..n).map(|g| (0..n).map(|h| group.mul(g, h)).collect()).collect();
    let inverse = |p: &Perm| {
        let mut inv = vec![0; p.len()];
        for (i, &j) in p.iter().enumerate() {
            inv[j] = i;
        }
        inv
    };
    let mut out = BTreeSet::new();
    for a in &perms {
        for b in &perms {
            let Some(set) = closure(&[a.clone(), b.clone()], n, n) else { continue };
            if set.len() != n {
                continue;
            }
            let transitive = (0..n).all(|g| set.iter().any(|p| p[0] == g));
            if !transitive {
                continue;
            }
            let normalized = lambda.iter().all(|l| {
                let li = inverse(l);
                set.iter().all(|p| set.contains(&compose(l, &compose(p, &li))))
            });
            if normalized {
                out.insert(set.into_iter().collect());
            }
        }
    }
    out
}

/// Searches `x = y / p^m` for integer vectors `y` in `[-r, r]^n` (algebra
/// coordinates) and `0 <= m <= max_m` with `A · x = B`, comparing lattices
/// directly. Returns the first generator found.
pub fn box_search_generator(
    h: &HopfGaloisStructure,
    a: &Order,
    b: &Lattice,
    r: i64,
    max_m: u32,
) -> Option<Vec<Q>> {
    let p = b.prime();
    let n = h.ext().dim();
    let basis = a.basis();
    let side = (2 * r + 1) as usize;
    let total = side.pow(n as u32);
    for m in 0..=max_m {
        let scale = Q::new(1.into(), num_bigint::BigInt::from(p).pow(m));
        for idx in 0..total {
            let mut k = idx;
            let y: Vec<Q> = (0..n)
                .map(|_| {
                    let d = (k % side) as i64 - r;
                    k /= side;
                    Q::from_integer(d.into()) * &scale
                })
                .collect();
            let Some(x) = h.to_subfield(&y) else { continue };
            let images: Vec<Vec<Q>> = basis.iter().map(|c| h.act(c, &x)).collect();
            if let Ok(l) = Lattice::new(images, p) {
                if l == *b {
                    return Some(y);
                }
            }
        }
    }
    None
}

pub struct NamedField {
    pub name: &'static str,
    pub ext: Arc<GaloisAlgebra>,
    pub ramified: u64,
}

pub fn fields() -> Vec<NamedField> {
    let mut out: Vec<NamedField> = [(3, 3), (4, 2), (5, 5), (7, 7), (9, 3)]
        .into_iter()
        .map(|(n, p)| NamedField {
            name: match n {
                3 => "cyclotomic-3",
                4 => "cyclotomic-4",
                5 => "cyclotomic-5",
                7 => "cyclotomic-7",
                _ => "cyclotomic-9",
            },
            ext: Arc::new(build_cyclotomic(n).unwrap()),
            ramified: p,
        })
        .collect();
    out.push(NamedField { name: "kummer-cubic-5", ext: Arc::new(build_kummer_cubic(5).unwrap()), ramified: 5 });
    out
}
