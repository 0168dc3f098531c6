use std::sync::Arc;

use num_traits::Zero;

use super::{GroupAlgebraElement, HopfError};
use crate::etale_fields::GaloisAlgebra;
use crate::linalg::{is_zero_vec, Matrix};
use crate::perm_groups::{CosetSpace, Permutation, RegularSubgroup, Subgroup};
use crate::rational::{unit_vector, zeros, Q};

/// A Hopf-Galois structure on `L = E^{G_L}` over `Q`: a regular subgroup `N`
/// of `Perm(G/G_L)` normalized by `λ(G)`, and `H = E[N]^G` given by a
/// rational basis. In the Galois case `G_L = 1` and `L = E`.
///
/// Elements of `L` are handled in two coordinate systems: algebra
/// coordinates in `E`, and subfield coordinates relative to the rows of
/// [`HopfGaloisStructure::subfield`]. Elements of `H` are coordinate rows
/// relative to [`HopfGaloisStructure::basis`].
#[derive(Clone, Debug)]
pub struct HopfGaloisStructure {
    ext: Arc<GaloisAlgebra>,
    cosets: CosetSpace,
    subfield: Matrix,
    n: RegularSubgroup,
    lambda: Vec<Permutation>,
    reps: Vec<usize>,
    basis: Vec<GroupAlgebraElement>,
    flat_basis: Matrix,
    action: Vec<Matrix>,
    mult: Vec<Vec<Vec<Q>>>,
    counit: Vec<Q>,
}

/// Basis rows (flat coordinates over `support`) of the elements of `E[N]`
/// supported on `support` and fixed by every `g`, where `g` acts on
/// coefficients and by conjugation with `lambda[g]` on group elements, for
/// `g` in the subgroup generated by `gens`.
pub(crate) fn fixed_subspace(
    ext: &GaloisAlgebra,
    lambda: &[Permutation],
    support: &[Permutation],
    gens: &[usize],
) -> Matrix {
    let n = ext.dim();
    // all conjugates of the support, so the action is defined on the key set
    let mut keys: Vec<Permutation> = support.to_vec();
    let mut i = 0;
    while i < keys.len() {
        for &g in gens {
            let c = keys[i].conjugate_by(&lambda[g]);
            if !keys.contains(&c) {
                keys.push(c);
            }
        }
        i += 1;
    }
    let f = keys.len() * n;
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for &g in gens {
        let a = ext.automorphism(g);
        // D = M_g - I with M_g: b_k η_i ↦ g(b_k) (λ(g) η_i λ(g)^{-1})
        let mut d = Matrix::zero(f, f);
        for (i, eta) in keys.iter().enumerate() {
            let j = keys.iter().position(|k| *k == eta.conjugate_by(&lambda[g])).expect("closed key set");
            for k in 0..n {
                for m in 0..n {
                    d[(i * n + k, j * n + m)] = a[(k, m)].clone();
                }
                d[(i * n + k, i * n + k)] -= Q::from_integer(1.into());
            }
        }
        rows.extend(d.transpose().to_rows());
    }
    for i in support.len()..keys.len() {
        for k in 0..n {
            rows.push(unit_vector(f, i * n + k));
        }
    }
    let kernel = Matrix::from_rows_with_cols(rows, f).kernel();
    let width = support.len() * n;
    Matrix::from_rows_with_cols(kernel.to_rows().into_iter().map(|r| r[..width].to_vec()).collect(), width)
}

impl HopfGaloisStructure {
    /// The Galois case `L = E`, `X = G`.
    pub fn new(ext: Arc<GaloisAlgebra>, n: RegularSubgroup) -> Result<Self, HopfError> {
        Self::on_subfield(ext, &Subgroup::trivial(), n)
    }

    /// `L = E^{G_L}` with `N` regular on the left cosets `G/G_L`.
    pub fn on_subfield(ext: Arc<GaloisAlgebra>, g_l: &Subgroup, n: RegularSubgroup) -> Result<Self, HopfError> {
        let group = ext.group();
        let cosets = CosetSpace::new(group, g_l)?;
        let d = cosets.len();
        if n.degree() != d {
            return Err(HopfError::DegreeMismatch { degree: n.degree(), cosets: d });
        }
        let subfield = ext.fixed_space(g_l);
        debug_assert_eq!(subfield.nrows(), d);
        // any representative of a coset acts the same way on L
        for c in 0..d {
            let members = cosets.members(c);
            for w in subfield.to_rows() {
                let first = ext.apply(members[0], &w);
                if members.iter().any(|&g| ext.apply(g, &w) != first) {
                    return Err(HopfError::NotWellDefined);
                }
            }
        }
        let lambda = cosets.lambda_image(group);
        let elements = n.elements().to_vec();
        let reps = elements.iter().map(|eta| cosets.representative(eta.inverse().apply(0))).collect();
        let dim = ext.dim();
        let flat_basis = fixed_subspace(&ext, &lambda, &elements, &group.generators());
        if flat_basis.nrows() != d {
            return Err(HopfError::DimensionMismatch { expected: d, found: flat_basis.nrows() });
        }
        let basis: Vec<GroupAlgebraElement> = flat_basis
            .to_rows()
            .iter()
            .map(|r| GroupAlgebraElement::from_flat(r, &elements, dim))
            .collect();
        let mut s = HopfGaloisStructure {
            ext,
            cosets,
            subfield,
            n,
            lambda,
            reps,
            basis,
            flat_basis,
            action: Vec::new(),
            mult: Vec::new(),
            counit: Vec::new(),
        };
        s.action = s
            .basis
            .iter()
            .map(|h| {
                let rows = (0..d)
                    .map(|j| {
                        let w = s.subfield.row_vec(j);
                        s.to_subfield(&s.hopf_action(h, &w)).ok_or(HopfError::NotInSubfield)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Matrix::from_rows(rows))
            })
            .collect::<Result<_, HopfError>>()?;
        let alg = s.ext.algebra();
        let mut mult = vec![vec![Vec::new(); d]; d];
        for i in 0..d {
            for j in 0..d {
                let prod = s.basis[i].mul(&s.basis[j], alg);
                mult[i][j] = s.coords_of(&prod).ok_or(HopfError::NotClosed)?;
            }
        }
        s.mult = mult;
        s.counit = s
            .basis
            .iter()
            .map(|h| scalar_of(&h.counit(dim), alg.one()).ok_or(HopfError::CounitNotRational))
            .collect::<Result<_, _>>()?;
        Ok(s)
    }

    pub fn ext(&self) -> &Arc<GaloisAlgebra> {
        &self.ext
    }

    pub fn cosets(&self) -> &CosetSpace {
        &self.cosets
    }

    /// Rows: a basis of `L` in algebra coordinates.
    pub fn subfield(&self) -> &Matrix {
        &self.subfield
    }

    pub fn is_galois(&self) -> bool {
        self.cosets.subgroup().is_trivial()
    }

    pub fn regular_subgroup(&self) -> &RegularSubgroup {
        &self.n
    }

    pub fn elements(&self) -> &[Permutation] {
        self.n.elements()
    }

    /// `λ(g)` on `G/G_L`.
    pub fn lambda(&self, g: usize) -> &Permutation {
        &self.lambda[g]
    }

    pub fn lambda_image(&self) -> &[Permutation] {
        &self.lambda
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[GroupAlgebraElement] {
        &self.basis
    }

    /// `d × |N|·[E:Q]` matrix of the basis in flat coordinates.
    pub fn flat_basis(&self) -> &Matrix {
        &self.flat_basis
    }

    pub fn action_matrix(&self, i: usize) -> &Matrix {
        &self.action[i]
    }

    /// `h_i h_j = Σ_k mult[i][j][k] h_k`.
    pub fn mult_constants(&self) -> &[Vec<Vec<Q>>] {
        &self.mult
    }

    pub fn counit_values(&self) -> &[Q] {
        &self.counit
    }

    pub fn type_name(&self) -> String {
        self.n.type_name()
    }

    pub fn is_abelian(&self) -> bool {
        self.n.is_abelian()
    }

    /// `N = ρ(G)`.
    pub fn is_classical(&self) -> bool {
        self.is_galois() && self.n.same_set(&self.ext.group().right_regular())
    }

    pub fn is_left_regular(&self) -> bool {
        self.is_galois() && self.n.same_set(&self.ext.group().left_regular())
    }

    /// Subfield coordinates of `x ∈ E`, if `x ∈ L`.
    pub fn to_subfield(&self, x: &[Q]) -> Option<Vec<Q>> {
        self.subfield.solve_left(x)
    }

    pub fn from_subfield(&self, c: &[Q]) -> Vec<Q> {
        self.subfield.left_apply(c)
    }

    /// `(Σ c_η η) · x = Σ c_η · g_η(x)` where `g_η` represents `η⁻¹(1̄)`.
    /// `x` and the result are in algebra coordinates.
    pub fn hopf_action(&self, z: &GroupAlgebraElement, x: &[Q]) -> Vec<Q> {
        let alg = self.ext.algebra();
        let mut out = zeros(self.ext.dim());
        for (eta, c) in z.terms() {
            let g = self.cosets.representative(eta.inverse().apply(0));
            let y = alg.mul(c, &self.ext.apply(g, x));
            for (o, v) in out.iter_mut().zip(y) {
                *o += v;
            }
        }
        out
    }

    /// Group element representing `η⁻¹(1̄)` for the `i`-th element of `N`.
    pub fn representative_for(&self, i: usize) -> usize {
        self.reps[i]
    }

    pub fn element(&self, c: &[Q]) -> GroupAlgebraElement {
        GroupAlgebraElement::from_flat(&self.flat_basis.left_apply(c), self.elements(), self.ext.dim())
    }

    /// Coordinates of `z` in the basis of `H`, if `z ∈ H`.
    pub fn coords_of(&self, z: &GroupAlgebraElement) -> Option<Vec<Q>> {
        self.flat_basis.solve_left(&z.to_flat(self.elements(), self.ext.dim()))
    }

    /// `z ↦ g · z` for all `g` leaves `z` unchanged.
    pub fn is_fixed(&self, z: &GroupAlgebraElement) -> bool {
        self.ext.group().elements().all(|g| z.act(&self.ext, g, &self.lambda[g]) == *z)
    }

    /// Action of `c ∈ H` (basis coordinates) on `x ∈ L` (subfield coordinates).
    pub fn act(&self, c: &[Q], x: &[Q]) -> Vec<Q> {
        let mut out = zeros(self.dim());
        for (ci, a) in c.iter().zip(&self.action) {
            if ci.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(a.left_apply(x)) {
                *o += ci * v;
            }
        }
        out
    }

    /// Product in `H`, basis coordinates.
    pub fn mul(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        let d = self.dim();
        let mut out = zeros(d);
        for i in 0..d {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if b[j].is_zero() {
                    continue;
                }
                let s = &a[i] * &b[j];
                for (o, m) in out.iter_mut().zip(&self.mult[i][j]) {
                    *o += &s * m;
                }
            }
        }
        out
    }

    pub fn counit(&self, c: &[Q]) -> Q {
        c.iter().zip(&self.counit).map(|(a, b)| a * b).sum()
    }

    /// Basis coordinates of `1 ∈ H`.
    pub fn one(&self) -> Vec<Q> {
        let id = Permutation::identity(self.n.degree());
        self.coords_of(&GroupAlgebraElement::group_element(id, self.ext.algebra()))
            .expect("1 lies in every fixed ring")
    }

    /// `Δ(h_k) = Σ_{i,j} d[k][i][j] h_i ⊗ h_j`, from `Δ(η) = η ⊗ η`.
    pub fn comultiplication(&self) -> Vec<Vec<Vec<Q>>> {
        let d = self.dim();
        let dim = self.ext.dim();
        let alg = self.ext.algebra();
        let m = self.elements().len();
        // E[N × N] over Q, index ((a * m + b) * dim + k)
        let width = m * m * dim;
        let mut products = Vec::with_capacity(d * d);
        for hi in &self.basis {
            for hj in &self.basis {
                let mut v = zeros(width);
                for (a, eta) in self.elements().iter().enumerate() {
                    let Some(ca) = hi.coefficient(eta) else { continue };
                    for (b, mu) in self.elements().iter().enumerate() {
                        let Some(cb) = hj.coefficient(mu) else { continue };
                        for (k, x) in alg.mul(ca, cb).into_iter().enumerate() {
                            v[(a * m + b) * dim + k] += x;
                        }
                    }
                }
                products.push(v);
            }
        }
        let system = Matrix::from_rows(products);
        self.basis
            .iter()
            .map(|h| {
                let mut target = zeros(width);
                for (a, eta) in self.elements().iter().enumerate() {
                    if let Some(c) = h.coefficient(eta) {
                        for (k, x) in c.iter().enumerate() {
                            target[(a * m + a) * dim + k] = x.clone();
                        }
                    }
                }
                let flat = system.solve_left(&target).expect("Δ(H) ⊆ H ⊗ H");
                (0..d).map(|i| flat[i * d..(i + 1) * d].to_vec()).collect()
            })
            .collect()
    }

    /// `h(st) = Σ (h_(1) s)(h_(2) t)` for every basis `h` and basis pair `(s, t)`.
    pub fn module_algebra_check(&self) -> bool {
        let d = self.dim();
        let delta = self.comultiplication();
        let alg = self.ext.algebra();
        let w = self.subfield.to_rows();
        let e = |c: &[Q]| self.from_subfield(c);
        for (k, dk) in delta.iter().enumerate() {
            for s in 0..d {
                for t in 0..d {
                    let st = self.to_subfield(&alg.mul(&w[s], &w[t])).expect("L is a subalgebra");
                    let lhs = self.act(&unit_vector(d, k), &st);
                    let mut rhs = zeros(self.ext.dim());
                    for i in 0..d {
                        let hs = e(&self.action[i].row_vec(s));
                        for j in 0..d {
                            if dk[i][j].is_zero() {
                                continue;
                            }
                            let ht = e(&self.action[j].row_vec(t));
                            for (r, v) in rhs.iter_mut().zip(alg.mul(&hs, &ht)) {
                                *r += &dk[i][j] * v;
                            }
                        }
                    }
                    if e(&lhs) != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Matrix of `j: L ⊗ H → End(L)`, `x ⊗ h ↦ (y ↦ x (h · y))`; row
    /// `(a, i)` for `w_a ⊗ h_i`, column `(j, k)` for the `k`-th coordinate of
    /// the image of `w_j`.
    pub fn j_matrix(&self) -> Matrix {
        let d = self.dim();
        let alg = self.ext.algebra();
        let w = self.subfield.to_rows();
        let mut m = Matrix::zero(d * d, d * d);
        for a in 0..d {
            for i in 0..d {
                for j in 0..d {
                    let hy = self.from_subfield(&self.action[i].row_vec(j));
                    let img = self.to_subfield(&alg.mul(&w[a], &hy)).expect("L is a subalgebra");
                    for (k, x) in img.into_iter().enumerate() {
                        m[(a * d + i, j * d + k)] = x;
                    }
                }
            }
        }
        m
    }

    pub fn is_hopf_galois(&self) -> bool {
        !self.j_matrix().det().is_zero()
    }

    /// Basis of `E[T]^G` for a `G`-stable subgroup `T ⊆ N`.
    pub fn sub_hopf_algebra(&self, t: &[Permutation]) -> Result<Vec<GroupAlgebraElement>, HopfError> {
        let mut t = t.to_vec();
        t.sort();
        let stable = self.lambda.iter().all(|l| t.iter().all(|e| t.contains(&e.conjugate_by(l))));
        if !stable {
            return Err(HopfError::NotStable);
        }
        let flat = fixed_subspace(&self.ext, &self.lambda, &t, &self.ext.group().generators());
        if flat.nrows() != t.len() {
            return Err(HopfError::DimensionMismatch { expected: t.len(), found: flat.nrows() });
        }
        Ok(flat.to_rows().iter().map(|r| GroupAlgebraElement::from_flat(r, &t, self.ext.dim())).collect())
    }

    /// `L^T = { x : z · x = ε(z) x for all z ∈ E[T]^G }`, rows in subfield
    /// coordinates.
    pub fn fixed_field(&self, t: &[Permutation]) -> Result<Matrix, HopfError> {
        let d = self.dim();
        let dim = self.ext.dim();
        let mut rows = Vec::new();
        for z in self.sub_hopf_algebra(t)? {
            let eps = scalar_of(&z.counit(dim), self.ext.algebra().one()).ok_or(HopfError::CounitNotRational)?;
            let mut m = Matrix::zero(d, d);
            for j in 0..d {
                let img = self
                    .to_subfield(&self.hopf_action(&z, self.subfield.row(j)))
                    .ok_or(HopfError::NotInSubfield)?;
                for (k, x) in img.into_iter().enumerate() {
                    m[(j, k)] = x;
                }
                m[(j, j)] -= &eps;
            }
            rows.extend(m.transpose().to_rows());
        }
        Ok(Matrix::from_rows_with_cols(rows, d).kernel())
    }

    pub fn theta(&self, elements: &[Permutation]) -> GroupAlgebraElement {
        GroupAlgebraElement::theta(elements, self.ext.algebra())
    }
}

/// `s` with `v = s · one`, if `v` is a rational multiple of `one`.
fn scalar_of(v: &[Q], one: &[Q]) -> Option<Q> {
    if is_zero_vec(v) {
        return Some(Q::zero());
    }
    let k = one.iter().position(|x| !x.is_zero())?;
    let s = &v[k] / &one[k];
    v.iter().zip(one).all(|(a, b)| *a == &s * b).then_some(s)
}
