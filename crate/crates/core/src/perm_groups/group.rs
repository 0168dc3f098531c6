use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{GroupError, Permutation};
use crate::rational::split_p_part;

/// Largest group order accepted by table validation.
pub const MAX_GROUP_ORDER: usize = 12;

/// A finite group given by its multiplication table. Element `0` is the
/// identity; `mul(a, b)` is the product `ab`, and for Galois groups `ab` means
/// "apply `b`, then `a`".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    names: Vec<String>,
}

/// A subgroup as a sorted list of element indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn from_elements(mut elements: Vec<usize>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Subgroup { elements }
    }

    pub fn trivial() -> Self {
        Subgroup { elements: vec![0] }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements == [0]
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&g| other.contains(g))
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        Subgroup::from_elements(self.elements.iter().copied().filter(|&g| other.contains(g)).collect())
    }
}

/// JSON group fixture: `{order, mul (row-major), names}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub order: usize,
    pub mul: Vec<usize>,
    pub names: Vec<String>,
}

impl FiniteGroup {
    /// Validates the table: identity at index 0, inverses, associativity.
    pub fn from_table(mul: Vec<usize>, names: Vec<String>) -> Result<Self, GroupError> {
        let n = names.len();
        if n == 0 {
            return Err(GroupError::InvalidTable("empty group".into()));
        }
        if n > MAX_GROUP_ORDER {
            return Err(GroupError::TooLarge { order: n, max: MAX_GROUP_ORDER });
        }
        if mul.len() != n * n {
            return Err(GroupError::InvalidTable(format!("table has {} entries, expected {}", mul.len(), n * n)));
        }
        if mul.iter().any(|&x| x >= n) {
            return Err(GroupError::InvalidTable("entry out of range".into()));
        }
        let at = |a: usize, b: usize| mul[a * n + b];
        for x in 0..n {
            if at(0, x) != x || at(x, 0) != x {
                return Err(GroupError::InvalidTable("element 0 is not the identity".into()));
            }
        }
        let mut inv = vec![usize::MAX; n];
        for x in 0..n {
            match (0..n).find(|&y| at(x, y) == 0 && at(y, x) == 0) {
                Some(y) => inv[x] = y,
                None => return Err(GroupError::InvalidTable(format!("element {x} has no inverse"))),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(GroupError::InvalidTable(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(FiniteGroup { order: n, mul, inv, names })
    }

    pub fn from_file(file: GroupFile) -> Result<Self, GroupError> {
        if file.order != file.names.len() {
            return Err(GroupError::InvalidTable(format!(
                "order {} but {} names",
                file.order,
                file.names.len()
            )));
        }
        Self::from_table(file.mul, file.names)
    }

    pub fn to_file(&self) -> GroupFile {
        GroupFile { order: self.order, mul: self.mul.clone(), names: self.names.clone() }
    }

    pub fn from_json(s: &str) -> Result<Self, GroupError> {
        let file: GroupFile = serde_json::from_str(s).map_err(|e| GroupError::InvalidTable(e.to_string()))?;
        Self::from_file(file)
    }

    /// `C_n = <x>`, element `k` is `x^k`.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        let names = (0..n)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x{k}"),
            })
            .collect();
        let mul = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        Self::from_table(mul, names)
    }

    /// `D_3 = <r, f | r^3 = f^2 = 1, f r f = r^{-1}>`; element `u + 3v` is
    /// `r^u f^v`. Generator names are chosen by the caller.
    pub fn dihedral3(r: &str, f: &str) -> Self {
        let name = |u: usize, v: usize| {
            let rp = match u {
                0 => String::new(),
                1 => r.to_string(),
                _ => format!("{r}{u}"),
            };
            let fp = if v == 1 { f.to_string() } else { String::new() };
            let s = format!("{rp}{fp}");
            if s.is_empty() {
                "1".to_string()
            } else {
                s
            }
        };
        let names = (0..6).map(|i| name(i % 3, i / 3)).collect();
        let mut mul = vec![0; 36];
        for a in 0..6 {
            for b in 0..6 {
                let (u, v) = (a % 3, a / 3);
                let (u2, v2) = (b % 3, b / 3);
                let uu = if v == 0 { (u + u2) % 3 } else { (u + 3 - u2) % 3 };
                mul[a * 6 + b] = uu + 3 * ((v + v2) % 2);
            }
        }
        Self::from_table(mul, names).expect("D_3 table is valid")
    }

    /// `G × H`, element `(g, h)` at index `g * |H| + h`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self, GroupError> {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let mut mul = vec![0; n * n];
        let mut names = Vec::with_capacity(n);
        for x in 0..n {
            names.push(format!("({},{})", a.names[x / nb], b.names[x % nb]));
            for y in 0..n {
                let g = a.mul(x / nb, y / nb);
                let h = b.mul(x % nb, y % nb);
                mul[x * n + y] = g * nb + h;
            }
        }
        Self::from_table(mul, names)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn element(&self, name: &str) -> Result<usize, GroupError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| GroupError::UnknownElement(name.to_string()))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn pow(&self, g: usize, k: usize) -> usize {
        let mut out = 0;
        for _ in 0..k {
            out = self.mul(out, g);
        }
        out
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut set: BTreeSet<usize> = BTreeSet::from([0]);
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Subgroup { elements: set.into_iter().collect() }
    }

    /// Greedy small generating set, deterministic.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = Subgroup::trivial();
        while current.len() < self.order {
            // Pick the element enlarging the span most; ties to the smallest index.
            let best = (0..self.order)
                .filter(|&g| !current.contains(g))
                .max_by_key(|&g| {
                    let mut t = gens.clone();
                    t.push(g);
                    (self.generate(&t).len(), std::cmp::Reverse(g))
                })
                .expect("non-full subgroup has an outside element");
            gens.push(best);
            current = self.generate(&gens);
        }
        gens
    }

    /// Generators of a subgroup, picked greedily in index order.
    pub fn subgroup_generators(&self, h: &Subgroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut cur = Subgroup::trivial();
        for &g in h.elements() {
            if !cur.contains(g) {
                gens.push(g);
                cur = self.generate(&gens);
            }
        }
        gens
    }

    pub fn is_subgroup(&self, set: &Subgroup) -> bool {
        set.contains(0) && set.elements.iter().all(|&a| set.elements.iter().all(|&b| set.contains(self.mul(a, self.inv(b)))))
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        (0..self.order).all(|g| h.elements.iter().all(|&x| h.contains(self.conjugate(g, x))))
    }

    /// Every subgroup, ordered by size then lexicographically.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut found: BTreeSet<Subgroup> = BTreeSet::from([Subgroup::trivial()]);
        let mut frontier = vec![Subgroup::trivial()];
        while let Some(h) = frontier.pop() {
            for g in 0..self.order {
                if h.contains(g) {
                    continue;
                }
                let mut gens = h.elements.clone();
                gens.push(g);
                let k = self.generate(&gens);
                if found.insert(k.clone()) {
                    frontier.push(k);
                }
            }
        }
        let mut v: Vec<Subgroup> = found.into_iter().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        v
    }

    /// A normal subgroup `C` with `C ∩ H = 1` and `C·H = G`, by exhaustive
    /// search over normal subgroups of index `|H|`.
    pub fn normal_complement(&self, h: &Subgroup) -> Option<Subgroup> {
        if !self.order.is_multiple_of(h.len()) {
            return None;
        }
        let want = self.order / h.len();
        self.all_subgroups()
            .into_iter()
            .filter(|c| c.len() == want && self.is_normal(c))
            .find(|c| c.intersect(h).is_trivial())
    }

    /// Some Sylow `p`-subgroup (the first in subgroup order).
    pub fn sylow_subgroup(&self, p: u64) -> Subgroup {
        let (r, _) = split_p_part(self.order as u64, p);
        let size = (p as usize).pow(r);
        self.all_subgroups().into_iter().find(|s| s.len() == size).expect("Sylow subgroups exist")
    }

    /// Order of `gH` in `G/H` for normal `H`.
    fn quotient_order(&self, g: usize, h: &Subgroup) -> usize {
        let mut x = g;
        let mut k = 1;
        while !h.contains(x) {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Kernel of `g ↦ g^{f₀} G₀` where `|G/G₀| = p^r f₀` with `p ∤ f₀`: a normal
    /// subgroup containing `G₀` of index `p^r`, complementing every Sylow
    /// `p`-subgroup.
    pub fn inertia_complement(&self, g0: &Subgroup, p: u64) -> Result<Subgroup, GroupError> {
        if !self.is_subgroup(g0) || !self.is_normal(g0) {
            return Err(GroupError::NotNormal);
        }
        if (g0.len() as u64).is_multiple_of(p) {
            return Err(GroupError::NotTame { p, inertia_order: g0.len() });
        }
        let f = self.order / g0.len();
        if !(0..self.order).any(|g| self.quotient_order(g, g0) == f) {
            return Err(GroupError::QuotientNotCyclic);
        }
        let (_, f0) = split_p_part(f as u64, p);
        let c = Subgroup::from_elements(
            (0..self.order).filter(|&g| g0.contains(self.pow(g, f0 as usize))).collect(),
        );
        debug_assert!(self.is_subgroup(&c) && self.is_normal(&c));
        Ok(c)
    }

    /// `λ(g): h ↦ gh`.
    pub fn lambda(&self, g: usize) -> Permutation {
        Permutation::from_images_unchecked((0..self.order).map(|h| self.mul(g, h)).collect())
    }

    /// `ρ(g): h ↦ hg⁻¹`.
    pub fn rho(&self, g: usize) -> Permutation {
        let gi = self.inv(g);
        Permutation::from_images_unchecked((0..self.order).map(|h| self.mul(h, gi)).collect())
    }

    pub fn lambda_image(&self) -> Vec<Permutation> {
        (0..self.order).map(|g| self.lambda(g)).collect()
    }

    /// `λ(g) ∘ η ∘ λ(g)⁻¹`.
    pub fn conjugate_by_lambda(&self, g: usize, eta: &Permutation) -> Permutation {
        eta.conjugate_by(&self.lambda(g))
    }

    /// Isomorphism type name from the element-order profile.
    pub fn type_name(&self) -> String {
        let orders: Vec<usize> = (0..self.order).map(|g| self.element_order(g)).collect();
        type_name_from_profile(&orders, self.is_abelian())
    }
}

/// Names a group of order ≤ 12 from its multiset of element orders and
/// abelianness; this profile separates all such groups.
pub fn type_name_from_profile(orders: &[usize], abelian: bool) -> String {
    let n = orders.len();
    let count = |k: usize| orders.iter().filter(|&&o| o == k).count();
    if abelian {
        for factors in invariant_factor_lists(n) {
            if abelian_profile(&factors) == sorted(orders) {
                return if factors.is_empty() {
                    "C_1".to_string()
                } else {
                    factors.iter().map(|d| format!("C_{d}")).collect::<Vec<_>>().join(" x ")
                };
            }
        }
        return format!("abelian of order {n}");
    }
    match n {
        6 => "D_3".into(),
        8 if count(2) == 5 => "D_4".into(),
        8 if count(2) == 1 => "Q_8".into(),
        10 => "D_5".into(),
        12 if count(6) > 0 && count(2) == 7 => "D_6".into(),
        12 if count(6) > 0 && count(2) == 1 => "Dic_3".into(),
        12 if count(6) == 0 => "A_4".into(),
        _ => format!("nonabelian of order {n}"),
    }
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}

/// Lists `[d1, .., dk]` with `d1 | d2 | .. | dk`, `d1 > 1`, product `n`.
fn invariant_factor_lists(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, min_div: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 1 {
            out.push(acc.clone());
            return;
        }
        for d in 2..=rest {
            if rest.is_multiple_of(d) && d % min_div == 0 {
                acc.push(d);
                go(rest / d, d, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, 1, &mut Vec::new(), &mut out);
    out
}

fn abelian_profile(factors: &[usize]) -> Vec<usize> {
    let mut orders = vec![1usize];
    for &d in factors {
        let mut next = Vec::with_capacity(orders.len() * d);
        for &o in &orders {
            for k in 0..d {
                let ok = d / num_integer::gcd(k, d);
                next.push(num_integer::lcm(o, ok));
            }
        }
        orders = next;
    }
    orders.sort_unstable();
    orders
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_relations() {
        let g = FiniteGroup::dihedral3("a", "b");
        let a = g.element("a").unwrap();
        let b = g.element("b").unwrap();
        assert_eq!(g.element_order(a), 3);
        assert_eq!(g.element_order(b), 2);
        // bab = a^{-1}
        assert_eq!(g.mul(g.mul(b, a), b), g.inv(a));
        assert!(!g.is_abelian());
        assert_eq!(g.type_name(), "D_3");
        assert_eq!(g.name(5), "a2b");
    }

    #[test]
    fn type_names() {
        assert_eq!(FiniteGroup::cyclic(6).unwrap().type_name(), "C_6");
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let v4 = FiniteGroup::direct_product(&c2, &c2).unwrap();
        assert_eq!(v4.type_name(), "C_2 x C_2");
        let c3 = FiniteGroup::cyclic(3).unwrap();
        // C_2 x C_3 is cyclic
        assert_eq!(FiniteGroup::direct_product(&c2, &c3).unwrap().type_name(), "C_6");
        assert_eq!(FiniteGroup::cyclic(1).unwrap().type_name(), "C_1");
    }

    #[test]
    fn rejects_bad_tables() {
        // not associative / no identity
        assert!(FiniteGroup::from_table(vec![0, 1, 1, 1], vec!["1".into(), "x".into()]).is_err());
        assert!(matches!(
            FiniteGroup::cyclic(13),
            Err(GroupError::TooLarge { .. })
        ));
    }

    #[test]
    fn normal_complements() {
        let g = FiniteGroup::dihedral3("a", "b");
        let b = g.element("b").unwrap();
        let a = g.element("a").unwrap();
        let gf = g.generate(&[b]);
        assert_eq!(g.normal_complement(&gf), Some(g.generate(&[a])));
        // C_2 inside C_4 has no complement
        let c4 = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(c4.normal_complement(&c4.generate(&[2])), None);
        // abelian: C_2 x C_3, complement of the C_2 factor is the C_3 factor
        let c6 = FiniteGroup::cyclic(6).unwrap();
        assert_eq!(c6.normal_complement(&c6.generate(&[3])), Some(c6.generate(&[2])));
    }

    #[test]
    fn inertia_complement_kernel() {
        // C_6, G_0 = 1, p = 3: f = 6 = 3 * 2, kernel of g -> g^2 is <x^3>
        let c6 = FiniteGroup::cyclic(6).unwrap();
        let c = c6.inertia_complement(&Subgroup::trivial(), 3).unwrap();
        assert_eq!(c, c6.generate(&[3]));
        // p not dividing |G| gives G
        let c = c6.inertia_complement(&Subgroup::trivial(), 5).unwrap();
        assert_eq!(c.len(), 6);
        // D_3 with G_0 = <a>, p = 2: e = 3, f = 2 = 2^1 * 1, |C| = e f0 = 3
        let d3 = FiniteGroup::dihedral3("a", "b");
        let g0 = d3.generate(&[1]);
        let c = d3.inertia_complement(&g0, 2).unwrap();
        assert_eq!(c, g0);
        assert!(matches!(d3.inertia_complement(&g0, 3), Err(GroupError::NotTame { .. })));
        // D_3 / 1 is not cyclic
        assert!(matches!(
            d3.inertia_complement(&Subgroup::trivial(), 5),
            Err(GroupError::QuotientNotCyclic)
        ));
    }

    #[test]
    fn subgroup_lattice_of_d3() {
        let g = FiniteGroup::dihedral3("a", "b");
        // 1, three of order 2, one of order 3, G
        assert_eq!(g.all_subgroups().len(), 6);
        assert_eq!(g.generate(&g.generators()).len(), 6);
    }

    #[test]
    fn json_roundtrip() {
        let g = FiniteGroup::dihedral3("s", "t");
        let s = serde_json::to_string(&g.to_file()).unwrap();
        assert_eq!(FiniteGroup::from_json(&s).unwrap(), g);
    }
}
