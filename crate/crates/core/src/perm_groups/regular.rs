use std::collections::{BTreeSet, HashSet};

use crate::par::{self, Exec};

use super::{type_name_from_profile, FiniteGroup, GroupError, Permutation, Subgroup};

pub const DEFAULT_ENUMERATION_BOUND: usize = 8;

/// A regular subgroup `N` of `Perm({0..n-1})`. Elements are kept sorted, and
/// `by_image_of_base[g]` is the index of the unique `η` with `η(0) = g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegularSubgroup {
    degree: usize,
    elements: Vec<Permutation>,
    by_image_of_base: Vec<usize>,
}

impl RegularSubgroup {
    /// Validates closure, identity, and regularity.
    pub fn new(mut elements: Vec<Permutation>) -> Result<Self, GroupError> {
        elements.sort();
        elements.dedup();
        let degree = elements.first().map(Permutation::degree).unwrap_or(0);
        if degree == 0 || elements.iter().any(|e| e.degree() != degree) {
            return Err(GroupError::NotRegular("mixed or empty degrees".into()));
        }
        if elements.len() != degree {
            return Err(GroupError::NotRegular(format!("{} elements on {} points", elements.len(), degree)));
        }
        let mut by_base = vec![usize::MAX; degree];
        for (i, e) in elements.iter().enumerate() {
            let b = e.apply(0);
            if by_base[b] != usize::MAX {
                return Err(GroupError::NotRegular("not transitive".into()));
            }
            by_base[b] = i;
        }
        let set: HashSet<&Permutation> = elements.iter().collect();
        if !set.contains(&Permutation::identity(degree)) {
            return Err(GroupError::NotRegular("missing identity".into()));
        }
        for a in &elements {
            for b in &elements {
                if !set.contains(&a.compose(b)) {
                    return Err(GroupError::NotRegular("not closed under composition".into()));
                }
            }
        }
        Ok(RegularSubgroup { degree, elements, by_image_of_base: by_base })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements in sorted order.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    /// The unique `η` with `η(0) = g`.
    pub fn by_base(&self, g: usize) -> &Permutation {
        &self.elements[self.by_image_of_base[g]]
    }

    /// Elements ordered by their image of the base point.
    pub fn by_image_of_base(&self) -> Vec<&Permutation> {
        (0..self.degree).map(|g| self.by_base(g)).collect()
    }

    pub fn index_of(&self, eta: &Permutation) -> Option<usize> {
        self.elements.binary_search(eta).ok()
    }

    pub fn contains(&self, eta: &Permutation) -> bool {
        self.index_of(eta).is_some()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements
            .iter()
            .all(|a| self.elements.iter().all(|b| a.compose(b) == b.compose(a)))
    }

    pub fn is_normalized_by(&self, perms: &[Permutation]) -> bool {
        perms
            .iter()
            .all(|c| self.elements.iter().all(|e| self.contains(&e.conjugate_by(c))))
    }

    pub fn type_name(&self) -> String {
        let orders: Vec<usize> = self.elements.iter().map(Permutation::order).collect();
        type_name_from_profile(&orders, self.is_abelian())
    }

    pub fn same_set(&self, other: &RegularSubgroup) -> bool {
        self.elements == other.elements
    }
}

impl FiniteGroup {
    /// `λ(G)` acting on element indices.
    pub fn left_regular(&self) -> RegularSubgroup {
        RegularSubgroup::new(self.lambda_image()).expect("λ(G) is regular")
    }

    /// `ρ(G)` acting on element indices.
    pub fn right_regular(&self) -> RegularSubgroup {
        RegularSubgroup::new(self.elements().map(|g| self.rho(g)).collect()).expect("ρ(G) is regular")
    }
}

/// Left cosets `gH` of a subgroup, numbered by their smallest element, so
/// coset `0` is `H` itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetSpace {
    subgroup: Subgroup,
    representatives: Vec<usize>,
    coset_of: Vec<usize>,
}

impl CosetSpace {
    pub fn new(group: &FiniteGroup, subgroup: &Subgroup) -> Result<Self, GroupError> {
        if !group.is_subgroup(subgroup) {
            return Err(GroupError::InvalidTable("not a subgroup".into()));
        }
        let mut coset_of = vec![usize::MAX; group.order()];
        let mut representatives = Vec::new();
        for g in group.elements() {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let idx = representatives.len();
            representatives.push(g);
            for &h in subgroup.elements() {
                coset_of[group.mul(g, h)] = idx;
            }
        }
        Ok(CosetSpace { subgroup: subgroup.clone(), representatives, coset_of })
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn representative(&self, coset: usize) -> usize {
        self.representatives[coset]
    }

    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    pub fn members(&self, coset: usize) -> Vec<usize> {
        (0..self.coset_of.len()).filter(|&g| self.coset_of[g] == coset).collect()
    }

    /// `λ_X(g): hH ↦ ghH`.
    pub fn lambda(&self, group: &FiniteGroup, g: usize) -> Permutation {
        Permutation::from_images_unchecked(
            self.representatives.iter().map(|&r| self.coset_of[group.mul(g, r)]).collect(),
        )
    }

    pub fn lambda_image(&self, group: &FiniteGroup) -> Vec<Permutation> {
        group.elements().map(|g| self.lambda(group, g)).collect()
    }
}

/// Options for [`enumerate_regular_subgroups`].
#[derive(Clone, Debug)]
pub struct EnumerationOptions {
    /// Keep only subgroups normalized by these permutations.
    pub normalizer: Option<Vec<Permutation>>,
    pub abelian_only: bool,
    pub bound: usize,
    pub exec: Exec,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            normalizer: None,
            abelian_only: false,
            bound: DEFAULT_ENUMERATION_BOUND,
            exec: Exec::default(),
        }
    }
}

/// Semiregular permutations (all cycles of one length) bucketed by image of 0.
fn semiregular_by_base(n: usize) -> Vec<Vec<Permutation>> {
    let mut buckets = vec![Vec::new(); n];
    let mut images: Vec<usize> = (0..n).collect();
    loop {
        let p = Permutation::from_images_unchecked(images.clone());
        let k = p.order();
        // semiregular iff no nontrivial power has a fixed point
        if (1..k).all(|j| !p.pow(j).has_fixed_point()) {
            buckets[p.apply(0)].push(p);
        }
        if !next_permutation(&mut images) {
            break;
        }
    }
    buckets
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Closure of `gens` under composition, tracked by image of the base point.
/// `None` as soon as two distinct elements share a base image.
fn semiregular_closure(n: usize, gens: &[Permutation]) -> Option<Vec<Option<Permutation>>> {
    let mut table: Vec<Option<Permutation>> = vec![None; n];
    let id = Permutation::identity(n);
    table[0] = Some(id.clone());
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        for s in gens {
            let y = s.compose(&x);
            match &table[y.apply(0)] {
                Some(existing) if *existing == y => {}
                Some(_) => return None,
                None => {
                    table[y.apply(0)] = Some(y.clone());
                    queue.push(y);
                }
            }
        }
    }
    Some(table)
}

/// All regular subgroups of `Perm({0..n-1})` satisfying the options, by DFS
/// over assignments `g ↦ η_g` with `η_g(0) = g`, ordered lexicographically on
/// their elements listed by image of the base point.
pub fn enumerate_regular_subgroups(n: usize, opts: &EnumerationOptions) -> Result<Vec<RegularSubgroup>, GroupError> {
    if n > opts.bound {
        return Err(GroupError::BoundExceeded { degree: n, bound: opts.bound });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let candidates = semiregular_by_base(n);
    let normalizer = opts.normalizer.as_deref().unwrap_or(&[]);

    struct Ctx<'a> {
        n: usize,
        candidates: &'a [Vec<Permutation>],
        normalizer: &'a [Permutation],
        abelian_only: bool,
    }

    impl Ctx<'_> {
        /// Extends `gens` by `cand` and its conjugates under the normalizer,
        /// returning the new generators and their closure.
        fn extend(
            &self,
            gens: &[Permutation],
            table: &[Option<Permutation>],
            cand: &Permutation,
        ) -> Option<(Vec<Permutation>, Vec<Option<Permutation>>)> {
            if self.abelian_only && !table.iter().flatten().all(|e| e.compose(cand) == cand.compose(e)) {
                return None;
            }
            let mut next = gens.to_vec();
            next.push(cand.clone());
            for c in self.normalizer {
                next.push(cand.conjugate_by(c));
            }
            let t = semiregular_closure(self.n, &next)?;
            if self.abelian_only {
                let elems: Vec<&Permutation> = t.iter().flatten().collect();
                if !elems.iter().all(|a| elems.iter().all(|b| a.compose(b) == b.compose(a))) {
                    return None;
                }
            }
            Some((next, t))
        }
    }

    fn dfs(
        ctx: &Ctx<'_>,
        gens: &[Permutation],
        table: &[Option<Permutation>],
        found: &mut BTreeSet<Vec<Permutation>>,
        visited: &mut HashSet<Vec<Permutation>>,
    ) {
        let key: Vec<Permutation> = table.iter().flatten().cloned().collect();
        if !visited.insert(key) {
            return;
        }
        let Some(g) = table.iter().position(Option::is_none) else {
            found.insert(table.iter().map(|e| e.clone().expect("complete table")).collect());
            return;
        };
        for cand in &ctx.candidates[g] {
            if let Some((next, t)) = ctx.extend(gens, table, cand) {
                dfs(ctx, &next, &t, found, visited);
            }
        }
    }

    let ctx = Ctx { n, candidates: &candidates, normalizer, abelian_only: opts.abelian_only };
    let table = semiregular_closure(n, &[]).expect("trivial closure");
    let mut found: BTreeSet<Vec<Permutation>> = BTreeSet::new();
    if n == 1 {
        dfs(&ctx, &[], &table, &mut found, &mut HashSet::new());
    } else {
        // the branches below each choice of η_1 are searched independently
        let branches = par::map(opts.exec, &candidates[1], |cand| {
            let mut found = BTreeSet::new();
            if let Some((next, t)) = ctx.extend(&[], &table, cand) {
                dfs(&ctx, &next, &t, &mut found, &mut HashSet::new());
            }
            found
        });
        for b in branches {
            found.extend(b);
        }
    }

    // `found` is keyed by elements listed by base image, so iteration order is
    // already the required lexicographic order.
    found
        .into_iter()
        .map(RegularSubgroup::new)
        .filter(|r| match (r, &opts.normalizer) {
            (Ok(r), Some(nm)) => r.is_normalized_by(nm),
            _ => true,
        })
        .collect()
}

impl FiniteGroup {
    /// Regular subgroups of `Perm(G)` normalized by `λ(G)`: the Hopf-Galois
    /// structures on a Galois extension with group `G`. The classical
    /// structure `ρ(G)` comes first when present, the rest in enumeration order.
    pub fn hopf_galois_structures(&self, abelian_only: bool, bound: usize) -> Result<Vec<RegularSubgroup>, GroupError> {
        let mut all = enumerate_regular_subgroups(
            self.order(),
            &EnumerationOptions { normalizer: Some(self.lambda_image()), abelian_only, bound, ..Default::default() },
        )?;
        let rho = self.right_regular();
        if let Some(i) = all.iter().position(|n| n.same_set(&rho)) {
            let classical = all.remove(i);
            all.insert(0, classical);
        }
        Ok(all)
    }
}

/// The decomposition `N = S × T` of an abelian `N` into its prime-to-`p` and
/// `p`-power parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SylowSplit {
    pub p: u64,
    pub s: Vec<Permutation>,
    pub t: Vec<Permutation>,
}

impl SylowSplit {
    /// The unique `(s, t)` with `η = s ∘ t`.
    pub fn factor(&self, eta: &Permutation) -> (Permutation, Permutation) {
        for s in &self.s {
            for t in &self.t {
                if s.compose(t) == *eta {
                    return (s.clone(), t.clone());
                }
            }
        }
        panic!("element does not factor through S × T");
    }
}

/// Splits an abelian `N` into `S` (elements of order prime to `p`) and `T`
/// (elements of `p`-power order); checks `S`, `T` are stable under
/// conjugation by `normalizer` whenever `N` is.
pub fn sylow_split(n: &RegularSubgroup, p: u64, normalizer: &[Permutation]) -> Result<SylowSplit, GroupError> {
    if !n.is_abelian() {
        return Err(GroupError::NotAbelian);
    }
    let is_p_power = |mut k: usize| {
        while k.is_multiple_of(p as usize) {
            k /= p as usize;
        }
        k == 1
    };
    let mut s = Vec::new();
    let mut t = Vec::new();
    for e in n.elements() {
        let k = e.order();
        if k % p as usize != 0 {
            s.push(e.clone());
        }
        if is_p_power(k) {
            t.push(e.clone());
        }
    }
    debug_assert_eq!(s.len() * t.len(), n.order());
    if n.is_normalized_by(normalizer) {
        let stable = |part: &[Permutation]| {
            normalizer.iter().all(|c| part.iter().all(|e| part.contains(&e.conjugate_by(c))))
        };
        if !stable(&s) || !stable(&t) {
            return Err(GroupError::NotStable);
        }
    }
    Ok(SylowSplit { p, s, t })
}

/// Result of [`induce_regular_subgroup`]: `N = ι(S × T)` together with the
/// embedded factors `ι(S × 1)` and `ι(1 × T)`.
#[derive(Clone, Debug)]
pub struct Induced {
    pub n: RegularSubgroup,
    pub s_part: Vec<Permutation>,
    pub t_part: Vec<Permutation>,
}

/// Builds `ι(σ, τ)[x_i y_j] = x_{σ(i)} y_{τ(j)}` on `G`, where `complement`
/// lists `x_i` and `factor` lists `y_j`.
pub fn induce_regular_subgroup(
    group: &FiniteGroup,
    s: &RegularSubgroup,
    t: &RegularSubgroup,
    complement: &[usize],
    factor: &[usize],
) -> Result<Induced, GroupError> {
    let (a, b) = (complement.len(), factor.len());
    if s.degree() != a || t.degree() != b {
        return Err(GroupError::BadLabeling("degrees do not match the labeling".into()));
    }
    if a * b != group.order() {
        return Err(GroupError::BadLabeling("labeling does not cover G".into()));
    }
    // label[g] = (i, j) with g = x_i y_j
    let mut label = vec![None; group.order()];
    for (i, &x) in complement.iter().enumerate() {
        for (j, &y) in factor.iter().enumerate() {
            let g = group.mul(x, y);
            if label[g].is_some() {
                return Err(GroupError::BadLabeling(format!("{} is labeled twice", group.name(g))));
            }
            label[g] = Some((i, j));
        }
    }
    let label: Vec<(usize, usize)> = label.into_iter().map(|l| l.expect("every element labeled")).collect();
    let iota = |sig: &Permutation, tau: &Permutation| {
        Permutation::from_images_unchecked(
            label
                .iter()
                .map(|&(i, j)| group.mul(complement[sig.apply(i)], factor[tau.apply(j)]))
                .collect(),
        )
    };
    let id_s = Permutation::identity(a);
    let id_t = Permutation::identity(b);
    let mut elements = Vec::with_capacity(group.order());
    for sig in s.elements() {
        for tau in t.elements() {
            elements.push(iota(sig, tau));
        }
    }
    let n = RegularSubgroup::new(elements)?;
    if !n.is_normalized_by(&group.lambda_image()) {
        return Err(GroupError::NotNormalized);
    }
    let mut s_part: Vec<Permutation> = s.elements().iter().map(|sig| iota(sig, &id_t)).collect();
    let mut t_part: Vec<Permutation> = t.elements().iter().map(|tau| iota(&id_s, tau)).collect();
    s_part.sort();
    t_part.sort();
    Ok(Induced { n, s_part, t_part })
}
