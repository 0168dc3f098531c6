use std::sync::Arc;

use serde::Serialize;

use super::{
    associated_order, generator_search, lambda_fixed_order, restrict_to_subfield, ser_coords, FreenessResult,
    FreenessStatus, OrderError, SearchOptions,
};
use crate::etale_fields::{GaloisAlgebra, Lattice};
use crate::hopf_structures::{f_element, project_to_cosets, GroupAlgebraElement, HopfGaloisStructure};
use crate::linalg::Matrix;
use crate::perm_groups::{
    induce_regular_subgroup, sylow_split, CosetSpace, Permutation, RegularSubgroup, Subgroup,
    DEFAULT_ENUMERATION_BOUND,
};
use crate::rational::{q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PipelineOptions {
    pub enum_bound: usize,
    pub search: SearchOptions,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { enum_bound: DEFAULT_ENUMERATION_BOUND, search: SearchOptions::default() }
    }
}

fn check_tame(ext: &GaloisAlgebra, p: u64) -> Result<(), OrderError> {
    if ext.is_tame(p)? {
        Ok(())
    } else {
        Err(crate::etale_fields::FieldError::WildRamification { p }.into())
    }
}

/// Commutative structures in enumeration order, paired with their index.
fn commutative_structures(
    ext: &Arc<GaloisAlgebra>,
    bound: usize,
) -> Result<Vec<(usize, HopfGaloisStructure)>, OrderError> {
    let all = ext.group().hopf_galois_structures(false, bound)?;
    all.into_iter()
        .enumerate()
        .filter(|(_, n)| n.is_abelian())
        .map(|(i, n)| Ok((i, HopfGaloisStructure::new(ext.clone(), n)?)))
        .collect()
}

/// Every `g ∈ G_0` centralizes the `p`-part `T` of `N` under conjugation by `λ(g)`.
pub fn inertia_acts_trivially_on_t(h: &HopfGaloisStructure, p: u64) -> Result<bool, OrderError> {
    let split = sylow_split(h.regular_subgroup(), p, h.lambda_image())?;
    let g0 = h.ext().inertia_subgroup(p)?;
    Ok(g0.elements().iter().all(|&g| split.t.iter().all(|t| t.conjugate_by(h.lambda(g)) == *t)))
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TheoremEntry {
    pub structure_index: usize,
    pub structure_type: String,
    pub ideal_power: i64,
    pub g0_trivial_on_t: bool,
    pub order_equals_lambda_g: bool,
    pub status: FreenessStatus,
    #[serde(rename = "generatorCoords", serialize_with = "ser_coords")]
    pub generator: Option<Vec<Q>>,
    pub search_size: u64,
}

impl TheoremEntry {
    pub fn passed(&self) -> bool {
        self.g0_trivial_on_t && self.order_equals_lambda_g && self.status == FreenessStatus::Free
    }
}

/// For every commutative structure and every `k`: `G_0` acts trivially on
/// `T`, `A_H(P^k) = Λ^G`, and `P^k` is free over `Λ^G`.
pub fn verify_theorem_commutative_tame(
    ext: &Arc<GaloisAlgebra>,
    p: u64,
    ks: &[i64],
    opts: &PipelineOptions,
) -> Result<Vec<TheoremEntry>, OrderError> {
    check_tame(ext, p)?;
    let mut out = Vec::new();
    for (index, h) in commutative_structures(ext, opts.enum_bound)? {
        let g0_trivial = inertia_acts_trivially_on_t(&h, p)?;
        let lambda = lambda_fixed_order(&h, p)?;
        for &k in ks {
            let b = ext.ideal_power(p, k)?;
            let assoc = associated_order(&h, &b)?;
            let res = generator_search(&h, &lambda, &b, &opts.search)?;
            out.push(TheoremEntry {
                structure_index: index,
                structure_type: h.type_name(),
                ideal_power: k,
                g0_trivial_on_t: g0_trivial,
                order_equals_lambda_g: assoc == lambda,
                status: res.status,
                generator: res.generator,
                search_size: res.search_size,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ThetaCheck {
    pub theta_factors: bool,
    pub theta_t_f_is_one: bool,
    pub s_fixes_f: bool,
}

impl ThetaCheck {
    pub fn passed(&self) -> bool {
        self.theta_factors && self.theta_t_f_is_one && self.s_fixes_f
    }
}

/// `θ_N = θ_S θ_T`, and for `f = θ_S · f_x` with a `p`-integral trace-one
/// `x`: `θ_T · f = 1` and `σ · f = f` for `σ ∈ S`.
pub fn theta_identities(h: &HopfGaloisStructure, p: u64) -> Result<ThetaCheck, OrderError> {
    let ext = h.ext();
    let alg = ext.algebra();
    let split = sylow_split(h.regular_subgroup(), p, h.lambda_image())?;
    let theta_s = GroupAlgebraElement::theta(&split.s, alg);
    let theta_t = GroupAlgebraElement::theta(&split.t, alg);
    let theta_n = GroupAlgebraElement::theta(h.elements(), alg);
    let whole = Subgroup::from_elements(ext.group().elements().collect());
    let x = ext.trace_one_element(&whole, p)?;
    let f = f_element(ext, &x, &split.s)?;
    Ok(ThetaCheck {
        theta_factors: theta_s.mul(&theta_t, alg) == theta_n,
        theta_t_f_is_one: f.act(&theta_t, ext).is_one(ext),
        s_fixes_f: split.s.iter().all(|sigma| f.permute(sigma) == f),
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DescentReport {
    pub prime: u64,
    pub unramified_over_subfield: bool,
    pub induced_type: String,
    pub order_equals_lambda_g: bool,
    pub status: FreenessStatus,
    #[serde(rename = "generatorCoords", serialize_with = "ser_coords")]
    pub generator: Option<Vec<Q>>,
    #[serde(rename = "traceGeneratorCoords", serialize_with = "ser_coords")]
    pub trace_generator: Option<Vec<Q>>,
    pub search_size: u64,
    pub descended_span_matches: bool,
    pub identity_holds: bool,
}

impl DescentReport {
    pub fn passed(&self) -> bool {
        self.unramified_over_subfield
            && self.status == FreenessStatus::Free
            && self.descended_span_matches
            && self.identity_holds
    }
}

/// The structure `ι(N × ρ(G_L))` on `E` induced from `N` on `L = E^{G_L}`
/// through a normal complement of `G_L`, with its `ρ(G_L)` part.
pub fn induced_structure(
    ext: &Arc<GaloisAlgebra>,
    g_l: &Subgroup,
    n: &RegularSubgroup,
) -> Result<(HopfGaloisStructure, Vec<Permutation>), OrderError> {
    let group = ext.group();
    let c = group.normal_complement(g_l).ok_or(OrderError::NotAlmostClassical)?;
    let cosets = CosetSpace::new(group, g_l)?;
    let complement: Vec<usize> = (0..cosets.len())
        .map(|i| cosets.members(i).into_iter().find(|&g| c.contains(g)).expect("complement meets every coset"))
        .collect();
    let factor: Vec<usize> = g_l.elements().to_vec();
    let rho_l = factor
        .iter()
        .map(|&tau| {
            let ti = group.inv(tau);
            let images = factor
                .iter()
                .map(|&y| factor.iter().position(|&z| z == group.mul(y, ti)).expect("G_L is a subgroup"))
                .collect();
            Permutation::new(images).expect("right translation is a bijection")
        })
        .collect();
    let t = RegularSubgroup::new(rho_l)?;
    let induced = induce_regular_subgroup(group, n, &t, &complement, &factor)?;
    let h = HopfGaloisStructure::new(ext.clone(), induced.n)?;
    Ok((h, induced.t_part))
}

/// Descends freeness from `E` to `L = E^{G_L}`: searches a generator `x` of
/// `B'` over its associated order for the induced structure, then checks
/// `π(A) · Tr_{E/L}(x) = B' ∩ L` and `(z θ_T) · y = π(z) · Tr_{E/L}(y)` on
/// bases.
pub fn non_normal_descent(
    ext: &Arc<GaloisAlgebra>,
    g_l: &Subgroup,
    n: &RegularSubgroup,
    b_prime: &Lattice,
    opts: &SearchOptions,
) -> Result<DescentReport, OrderError> {
    let p = b_prime.prime();
    check_tame(ext, p)?;
    let g0 = ext.inertia_subgroup(p)?;
    if !g0.intersect(g_l).is_trivial() {
        return Err(OrderError::RamifiedOverSubfield { p });
    }
    let (h_e, t_part) = induced_structure(ext, g_l, n)?;
    let h_l = HopfGaloisStructure::on_subfield(ext.clone(), g_l, n.clone())?;
    let cosets = h_l.cosets();
    let b_e = restrict_to_subfield(&h_e, b_prime)?;
    let assoc = associated_order(&h_e, &b_e)?;
    let lambda = lambda_fixed_order(&h_e, p)?;
    let res = generator_search(&h_e, &assoc, &b_e, opts)?;

    let alg = ext.algebra();
    let theta_t = GroupAlgebraElement::theta(&t_part, alg);
    let mut identity_holds = true;
    for z in h_e.basis() {
        let zt = z.mul(&theta_t, alg);
        let pz = project_to_cosets(z, cosets)?;
        for y in ext.integral_basis().to_rows() {
            let lhs = h_e.hopf_action(&zt, &y);
            let rhs = h_l.hopf_action(&pz, &ext.trace_to_fixed(&y, g_l));
            identity_holds &= lhs == rhs;
        }
    }

    let mut trace_generator = None;
    let mut descended_span_matches = false;
    if let Some(x) = &res.generator {
        let tr = ext.trace_to_fixed(x, g_l);
        let b = restrict_to_subfield(&h_l, b_prime)?;
        let images = assoc
            .elements(&h_e)
            .iter()
            .map(|a| {
                let pa = project_to_cosets(a, cosets)?;
                h_l.to_subfield(&h_l.hopf_action(&pa, &tr)).ok_or(OrderError::NotContained)
            })
            .collect::<Result<Vec<_>, OrderError>>()?;
        descended_span_matches = Lattice::new(images, p).is_ok_and(|l| l == b);
        trace_generator = Some(tr);
    }
    Ok(DescentReport {
        prime: p,
        unramified_over_subfield: true,
        induced_type: h_e.type_name(),
        order_equals_lambda_g: assoc == lambda,
        status: res.status,
        generator: res.generator,
        trace_generator,
        search_size: res.search_size,
        descended_span_matches,
        identity_holds,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LocalEntry {
    pub prime: u64,
    pub structure_index: usize,
    pub structure_type: String,
    pub status: FreenessStatus,
    #[serde(rename = "generatorCoords", serialize_with = "ser_coords")]
    pub generator: Option<Vec<Q>>,
    pub search_size: u64,
}

/// Localizes a global ambiguous lattice `B` (rows over `Z`, algebra
/// coordinates) at each prime and decides freeness over `Λ^G` for every
/// commutative structure.
pub fn local_check_global(
    ext: &Arc<GaloisAlgebra>,
    basis: &Matrix,
    primes: &[u64],
    opts: &PipelineOptions,
) -> Result<Vec<LocalEntry>, OrderError> {
    if !ext.group().is_abelian() {
        return Err(crate::perm_groups::GroupError::NotAbelian.into());
    }
    if !ext.is_ambiguous_global(basis) {
        return Err(OrderError::NotAmbiguous);
    }
    for &p in primes {
        check_tame(ext, p)?;
    }
    let structures = commutative_structures(ext, opts.enum_bound)?;
    let mut out = Vec::new();
    for &p in primes {
        let b = Lattice::from_matrix(basis, p)?;
        for (index, h) in &structures {
            let lambda = lambda_fixed_order(h, p)?;
            let res = generator_search(h, &lambda, &b, &opts.search)?;
            out.push(LocalEntry {
                prime: p,
                structure_index: *index,
                structure_type: h.type_name(),
                status: res.status,
                generator: res.generator,
                search_size: res.search_size,
            });
        }
    }
    Ok(out)
}

/// Rows `x · b_k` for the integral basis `b_k`: the principal ideal `x O`.
pub fn principal_ideal(ext: &GaloisAlgebra, x: &[Q]) -> Matrix {
    let alg = ext.algebra();
    Matrix::from_rows(ext.integral_basis().to_rows().iter().map(|b| alg.mul(x, b)).collect())
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CounterexampleReport {
    pub prime: u64,
    pub structure_index: usize,
    pub structure_type: String,
    #[serde(rename = "zCoords", serialize_with = "ser_coords")]
    pub z: Option<Vec<Q>>,
    pub z_fixed: bool,
    pub action_table_matches: bool,
    pub z_maps_into_p_o: bool,
    pub witness_in_associated_order: bool,
    pub witness_in_lambda_g: bool,
    pub associated_equals_adjoined: bool,
    pub over_lambda_g: FreenessResult,
    pub over_associated_order: FreenessResult,
}

impl CounterexampleReport {
    pub fn passed(&self) -> bool {
        self.z_fixed
            && self.action_table_matches
            && self.z_maps_into_p_o
            && self.witness_in_associated_order
            && !self.witness_in_lambda_g
            && self.associated_equals_adjoined
            && self.over_lambda_g.status == FreenessStatus::NotFree
            && self.over_associated_order.status == FreenessStatus::Free
    }
}

/// The element `z = a² λ(t) + ζ² a² λ(s²t) + ζ a² λ(st)` of the pure cubic
/// Kummer algebra with group `⟨s, t⟩`, where `s(a) = ζa` and `t(ζ) = ζ²`.
pub fn counterexample_element(ext: &GaloisAlgebra) -> Result<GroupAlgebraElement, OrderError> {
    let alg = ext.algebra();
    let g = ext.group();
    let el = |name: &str| alg.element(name).map_err(OrderError::from);
    let gr = |name: &str| g.element(name).map_err(OrderError::from);
    let a2 = el("a2")?;
    let za2 = el("za2")?;
    let z2a2 = alg.mul(&el("z")?, &za2);
    Ok(GroupAlgebraElement::from_terms([
        (g.lambda(gr("t")?), a2),
        (g.lambda(gr("s2t")?), z2a2),
        (g.lambda(gr("st")?), za2),
    ]))
}

/// The non-free example for `N = λ(G)` on the pure cubic Kummer algebra
/// `Q(ζ_3, a)`, `a³ = p`: `Λ^G` fails, `A_λ = Λ^G[z/p]` succeeds.
pub fn counterexample(ext: &Arc<GaloisAlgebra>, p: u64, opts: &PipelineOptions) -> Result<CounterexampleReport, OrderError> {
    let group = ext.group();
    let alg = ext.algebra();
    let left = group.left_regular();
    let index = group
        .hopf_galois_structures(false, opts.enum_bound)?
        .iter()
        .position(|n| n.same_set(&left))
        .expect("λ(G) is always a structure");
    let h = HopfGaloisStructure::new(ext.clone(), left)?;
    let z = counterexample_element(ext)?;
    let z_fixed = h.is_fixed(&z);
    let zc = h.coords_of(&z).ok_or(OrderError::NotContained)?;

    let zeta = alg.element("z")?;
    let a = alg.element("a")?;
    let mut action_table_matches = true;
    for i in 1..3u64 {
        for j in 0..3u64 {
            let x = alg.mul(&alg.pow(&zeta, i), &alg.pow(&a, j));
            let y = h.hopf_action(&z, &x);
            let expected = if j == 2 {
                alg.mul(&alg.pow(&zeta, 3 - i), &a).iter().map(|c| c * q(3 * p as i64)).collect()
            } else {
                crate::rational::zeros(ext.dim())
            };
            action_table_matches &= y == expected;
        }
    }

    let o = ext.integral_lattice(p);
    let po = o.scale(&q(p as i64));
    let z_maps_into_p_o = ext.integral_basis().to_rows().iter().all(|x| po.contains(&h.hopf_action(&z, x)));

    let witness: Vec<Q> = zc.iter().map(|c| c / q(p as i64)).collect();
    let lambda = lambda_fixed_order(&h, p)?;
    let assoc = associated_order(&h, &o)?;
    let adjoined = lambda.adjoin(&h, &witness)?;
    Ok(CounterexampleReport {
        prime: p,
        structure_index: index,
        structure_type: h.type_name(),
        z: Some(zc),
        z_fixed,
        action_table_matches,
        z_maps_into_p_o,
        witness_in_associated_order: assoc.contains(&witness),
        witness_in_lambda_g: lambda.contains(&witness),
        associated_equals_adjoined: assoc == adjoined,
        over_lambda_g: generator_search(&h, &lambda, &o, &opts.search)?,
        over_associated_order: generator_search(&h, &assoc, &o, &opts.search)?,
    })
}
