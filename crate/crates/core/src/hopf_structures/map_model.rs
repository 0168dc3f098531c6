use num_traits::One;

use super::{fixed_subspace, GroupAlgebraElement, HopfError};
use crate::etale_fields::{GaloisAlgebra, Lattice};
use crate::linalg::Matrix;
use crate::perm_groups::{CosetSpace, Permutation, Subgroup};
use crate::rational::{zeros, Q};

/// An element of `Map(G, E)`: `values[g]` in algebra coordinates. The
/// idempotent `u_g` is the indicator of `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapModelElement {
    pub values: Vec<Vec<Q>>,
}

impl MapModelElement {
    pub fn constant(ext: &GaloisAlgebra, x: &[Q]) -> Self {
        MapModelElement { values: vec![x.to_vec(); ext.group().order()] }
    }

    pub fn idempotent(ext: &GaloisAlgebra, g: usize) -> Self {
        let n = ext.dim();
        let mut values = vec![zeros(n); ext.group().order()];
        values[g] = ext.algebra().one().to_vec();
        MapModelElement { values }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self, ext: &GaloisAlgebra) -> Self {
        let alg = ext.algebra();
        MapModelElement { values: self.values.iter().zip(&other.values).map(|(a, b)| alg.mul(a, b)).collect() }
    }

    /// `(η · f)(h) = f(η⁻¹(h))`, so `η · u_g = u_{η(g)}`.
    pub fn permute(&self, eta: &Permutation) -> Self {
        let inv = eta.inverse();
        MapModelElement { values: (0..self.values.len()).map(|h| self.values[inv.apply(h)].clone()).collect() }
    }

    /// `(Σ c_η η) · f = Σ c_η (η · f)`, with `c_η` acting as constants.
    pub fn act(&self, z: &GroupAlgebraElement, ext: &GaloisAlgebra) -> Self {
        let alg = ext.algebra();
        let mut values = vec![zeros(ext.dim()); self.values.len()];
        for (eta, c) in z.terms() {
            let moved = self.permute(eta);
            for (v, m) in values.iter_mut().zip(&moved.values) {
                for (a, b) in v.iter_mut().zip(alg.mul(c, m)) {
                    *a += b;
                }
            }
        }
        MapModelElement { values }
    }

    /// `(g · f)(k) = g(f(g⁻¹ k))`.
    pub fn galois_act(&self, ext: &GaloisAlgebra, g: usize) -> Self {
        let group = ext.group();
        let gi = group.inv(g);
        MapModelElement {
            values: group.elements().map(|k| ext.apply(g, &self.values[group.mul(gi, k)])).collect(),
        }
    }

    pub fn is_fixed(&self, ext: &GaloisAlgebra) -> bool {
        ext.group().generators().into_iter().all(|g| self.galois_act(ext, g) == *self)
    }

    pub fn is_one(&self, ext: &GaloisAlgebra) -> bool {
        self.values.iter().all(|v| v.as_slice() == ext.algebra().one())
    }
}

/// `x ↦ f_x = Σ g(x) u_g`.
pub fn gp_embed(ext: &GaloisAlgebra, x: &[Q]) -> MapModelElement {
    MapModelElement { values: ext.group().elements().map(|g| ext.apply(g, x)).collect() }
}

/// Inverse of [`gp_embed`] on `Map(G, E)^G`: the value at the identity.
pub fn gp_project(ext: &GaloisAlgebra, f: &MapModelElement) -> Result<Vec<Q>, HopfError> {
    if !f.is_fixed(ext) {
        return Err(HopfError::NotFixed);
    }
    Ok(f.values[0].clone())
}

/// `f = θ_S · f_x` for a trace-one `x`.
pub fn f_element(ext: &GaloisAlgebra, x: &[Q], s: &[Permutation]) -> Result<MapModelElement, HopfError> {
    if ext.trace(x) != Q::one() {
        return Err(HopfError::TraceNotOne);
    }
    let theta_s = GroupAlgebraElement::theta(s, ext.algebra());
    Ok(gp_embed(ext, x).act(&theta_s, ext))
}

/// `π`: the unique factorization `η = σ τ` with `σ ∈ S`, `τ ∈ T` collapses
/// `η` to `σ`.
pub fn projection_pi(
    z: &GroupAlgebraElement,
    s: &[Permutation],
    t: &[Permutation],
) -> Result<GroupAlgebraElement, HopfError> {
    let mut out = GroupAlgebraElement::zero();
    for (eta, c) in z.terms() {
        let mut found = None;
        for sig in s {
            for tau in t {
                if sig.compose(tau) == *eta {
                    if found.is_some() {
                        return Err(HopfError::NotDirectProduct);
                    }
                    found = Some(sig.clone());
                }
            }
        }
        out.add_term(found.ok_or(HopfError::NotDirectProduct)?, c);
    }
    Ok(out)
}

/// The permutation of `G/G_L` induced by a permutation of `G` that maps
/// cosets to cosets.
pub fn induced_on_cosets(eta: &Permutation, cosets: &CosetSpace) -> Result<Permutation, HopfError> {
    let images = (0..cosets.len())
        .map(|c| {
            let members = cosets.members(c);
            let img = cosets.coset_of(eta.apply(members[0]));
            if members.iter().all(|&g| cosets.coset_of(eta.apply(g)) == img) {
                Ok(img)
            } else {
                Err(HopfError::NotDirectProduct)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Permutation::new(images).ok_or(HopfError::NotDirectProduct)
}

/// `π` for an induced structure: each group element is replaced by its
/// action on `G/G_L`.
pub fn project_to_cosets(z: &GroupAlgebraElement, cosets: &CosetSpace) -> Result<GroupAlgebraElement, HopfError> {
    let mut out = GroupAlgebraElement::zero();
    for (eta, c) in z.terms() {
        out.add_term(induced_on_cosets(eta, cosets)?, c);
    }
    Ok(out)
}

/// Multiplication by `f` commutes with the action of `E[S]^{G_0}` on the
/// spanning set `b_k u_g` of `Map(G, O)`.
pub fn f_commutes_with_fixed_s(
    ext: &GaloisAlgebra,
    f: &MapModelElement,
    s: &[Permutation],
    g0: &Subgroup,
) -> bool {
    let group = ext.group();
    let n = ext.dim();
    let lambda: Vec<Permutation> = group.lambda_image();
    let mut s_sorted = s.to_vec();
    s_sorted.sort();
    let flat = fixed_subspace(ext, &lambda, &s_sorted, &group.subgroup_generators(g0));
    let basis: Vec<GroupAlgebraElement> =
        flat.to_rows().iter().map(|r| GroupAlgebraElement::from_flat(r, &s_sorted, n)).collect();
    let ib = ext.integral_basis();
    for z in &basis {
        for g in group.elements() {
            for k in 0..n {
                let b = MapModelElement::constant(ext, ib.row(k));
                let gamma = b.mul(&MapModelElement::idempotent(ext, g), ext);
                let lhs = gamma.mul(f, ext).act(z, ext);
                let rhs = gamma.act(z, ext).mul(f, ext);
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// `Map(G, B)^G`, pulled back to `E` through the value at the identity,
/// equals `B` (`B` ambiguous).
pub fn gamma_fixed_matches(ext: &GaloisAlgebra, b: &Lattice) -> Result<bool, HopfError> {
    let n = ext.dim();
    let order = ext.group().order();
    // fixed space is spanned by f_{e_i}; coordinates c ↦ Σ c_i f_{e_i}
    let mut fmat = Matrix::zero(n, n * order);
    for i in 0..n {
        let mut e = zeros(n);
        e[i] = Q::one();
        let f = gp_embed(ext, &e);
        for (g, v) in f.values.iter().enumerate() {
            for (k, x) in v.iter().enumerate() {
                fmat[(i, g * n + k)] = x.clone();
            }
        }
    }
    // Map(G, B) has basis rows of B in every slot; invert slot-wise
    let binv = b.hnf().inverse().expect("full-rank lattice");
    let mut cmat = Matrix::zero(n, n * order);
    for g in 0..order {
        let block = Matrix::from_rows((0..n).map(|i| fmat.row(i)[g * n..(g + 1) * n].to_vec()).collect());
        let prod = block.mul(&binv);
        for i in 0..n {
            for k in 0..n {
                cmat[(i, g * n + k)] = prod[(i, k)].clone();
            }
        }
    }
    let fixed = Lattice::preimage(&cmat, b.prime())?;
    // gp_project(f_{e_i}) = e_i, so the coordinates are already the projection
    Ok(fixed == *b)
}
