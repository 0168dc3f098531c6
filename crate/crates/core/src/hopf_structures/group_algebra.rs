use std::collections::BTreeMap;

use num_traits::Zero;

use crate::etale_fields::{EtaleAlgebra, GaloisAlgebra};
use crate::linalg::{add_vec, is_zero_vec, scale_vec};
use crate::perm_groups::Permutation;
use crate::rational::{zeros, Q};

/// `Σ c_η η ∈ E[N]` with coefficients in `E` (coordinate rows). Zero
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GroupAlgebraElement {
    terms: BTreeMap<Permutation, Vec<Q>>,
}

impl GroupAlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Permutation, Vec<Q>)>) -> Self {
        let mut out = Self::zero();
        for (eta, c) in terms {
            out.add_term(eta, &c);
        }
        out
    }

    /// `1 · η`.
    pub fn group_element(eta: Permutation, alg: &EtaleAlgebra) -> Self {
        Self::from_terms([(eta, alg.one().to_vec())])
    }

    /// `θ = Σ_{η ∈ elements} η`.
    pub fn theta(elements: &[Permutation], alg: &EtaleAlgebra) -> Self {
        Self::from_terms(elements.iter().map(|e| (e.clone(), alg.one().to_vec())))
    }

    pub fn add_term(&mut self, eta: Permutation, c: &[Q]) {
        if is_zero_vec(c) {
            return;
        }
        let dim = c.len();
        let entry = self.terms.entry(eta.clone()).or_insert_with(|| zeros(dim));
        for (a, b) in entry.iter_mut().zip(c) {
            *a += b;
        }
        if is_zero_vec(entry) {
            self.terms.remove(&eta);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &Vec<Q>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, eta: &Permutation) -> Option<&Vec<Q>> {
        self.terms.get(eta)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (eta, c) in &other.terms {
            out.add_term(eta.clone(), c);
        }
        out
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        GroupAlgebraElement { terms: self.terms.iter().map(|(k, v)| (k.clone(), scale_vec(s, v))).collect() }
    }

    /// Left multiplication of every coefficient by `c ∈ E`.
    pub fn scale_by_element(&self, c: &[Q], alg: &EtaleAlgebra) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (k.clone(), alg.mul(c, v))))
    }

    /// `(c η)(c' μ) = c c' (η ∘ μ)`.
    pub fn mul(&self, other: &Self, alg: &EtaleAlgebra) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.compose(b), &alg.mul(ca, cb));
            }
        }
        out
    }

    /// `g · z`: `g` on coefficients and conjugation by `λ(g)` on group
    /// elements; `lambda_g` is `λ(g)` on the permuted set.
    pub fn act(&self, ext: &GaloisAlgebra, g: usize, lambda_g: &Permutation) -> Self {
        Self::from_terms(self.terms.iter().map(|(eta, c)| (eta.conjugate_by(lambda_g), ext.apply(g, c))))
    }

    /// `ε(z) = Σ c_η`, an element of `E`.
    pub fn counit(&self, dim: usize) -> Vec<Q> {
        self.terms.values().fold(zeros(dim), |acc, c| add_vec(&acc, c))
    }

    /// Replaces each group element by its image under `f`, adding
    /// coefficients that collide.
    pub fn map_keys(&self, f: impl Fn(&Permutation) -> Permutation) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (f(k), v.clone())))
    }

    /// Flat coordinates over `Q` relative to the basis `b_k η`, with `η`
    /// running through `elements` in order: index `pos(η) * dim + k`.
    pub fn to_flat(&self, elements: &[Permutation], dim: usize) -> Vec<Q> {
        let mut v = zeros(elements.len() * dim);
        for (eta, c) in &self.terms {
            let pos = elements.iter().position(|e| e == eta).expect("key lies in the group");
            for (k, x) in c.iter().enumerate() {
                v[pos * dim + k] = x.clone();
            }
        }
        v
    }

    pub fn from_flat(v: &[Q], elements: &[Permutation], dim: usize) -> Self {
        Self::from_terms(elements.iter().enumerate().map(|(i, e)| (e.clone(), v[i * dim..(i + 1) * dim].to_vec())))
    }
}
