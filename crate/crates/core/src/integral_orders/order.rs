use num_traits::Zero;

use super::OrderError;
use crate::etale_fields::Lattice;
use crate::hopf_structures::{GroupAlgebraElement, HopfGaloisStructure};
use crate::linalg::Matrix;
use crate::rational::Q;

/// A `Z_(p)`-order in `H`, as a lattice in the coordinates of the basis of
/// `H`. Constructors check that it contains 1 and is closed under products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Order {
    lattice: Lattice,
}

impl Order {
    pub fn new(h: &HopfGaloisStructure, lattice: Lattice) -> Result<Self, OrderError> {
        if !lattice.contains(&h.one()) {
            return Err(OrderError::MissingOne);
        }
        let basis = lattice.basis();
        for a in &basis {
            for b in &basis {
                if !lattice.contains(&h.mul(a, b)) {
                    return Err(OrderError::NotClosed);
                }
            }
        }
        Ok(Order { lattice })
    }

    /// The order generated by `gens` and 1; `gens` must span `H`.
    pub fn generated_by(h: &HopfGaloisStructure, gens: Vec<Vec<Q>>, p: u64) -> Result<Self, OrderError> {
        let mut all = gens;
        all.push(h.one());
        let mut lattice = Lattice::new(all, p)?;
        loop {
            let basis = lattice.basis();
            let mut next = basis.clone();
            for a in &basis {
                for b in &basis {
                    next.push(h.mul(a, b));
                }
            }
            let grown = Lattice::new(next, p)?;
            if grown == lattice {
                return Self::new(h, lattice);
            }
            lattice = grown;
        }
    }

    /// The smallest order containing `self` and `z`.
    pub fn adjoin(&self, h: &HopfGaloisStructure, z: &[Q]) -> Result<Self, OrderError> {
        let mut gens = self.lattice.basis();
        gens.push(z.to_vec());
        Self::generated_by(h, gens, self.prime())
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn prime(&self) -> u64 {
        self.lattice.prime()
    }

    pub fn rank(&self) -> usize {
        self.lattice.dim()
    }

    /// Basis rows in `H`-coordinates.
    pub fn basis(&self) -> Vec<Vec<Q>> {
        self.lattice.basis()
    }

    pub fn contains(&self, z: &[Q]) -> bool {
        self.lattice.contains(z)
    }

    pub fn contains_order(&self, other: &Order) -> bool {
        self.lattice.contains_lattice(&other.lattice)
    }

    /// Basis as elements of `E[N]`.
    pub fn elements(&self, h: &HopfGaloisStructure) -> Vec<GroupAlgebraElement> {
        self.basis().iter().map(|c| h.element(c)).collect()
    }
}

/// `Λ^G = O_E[N]^G` localized at `p`.
pub fn lambda_fixed_order(h: &HopfGaloisStructure, p: u64) -> Result<Order, OrderError> {
    let ext = h.ext();
    let n = ext.dim();
    let m = h.elements().len();
    let ib_inv = ext.integral_basis().inverse().expect("integral basis is invertible");
    // flat coordinates relative to b_k η: block-diagonal copies of IB^{-1}
    let mut block = Matrix::zero(m * n, m * n);
    for s in 0..m {
        for i in 0..n {
            for j in 0..n {
                block[(s * n + i, s * n + j)] = ib_inv[(i, j)].clone();
            }
        }
    }
    let lattice = Lattice::preimage(&h.flat_basis().mul(&block), p)?;
    Order::new(h, lattice)
}

/// `B ∩ L` in subfield coordinates, for `B` a lattice in `E`.
pub fn restrict_to_subfield(h: &HopfGaloisStructure, b: &Lattice) -> Result<Lattice, OrderError> {
    let binv = b.hnf().inverse().expect("full-rank lattice");
    Ok(Lattice::preimage(&h.subfield().mul(&binv), b.prime())?)
}

/// Rows `B`-coordinates of `h_i · b_j`: entry `[i][j]`.
pub(crate) fn action_in_lattice(h: &HopfGaloisStructure, elements: &[Vec<Q>], b: &Lattice) -> Vec<Vec<Vec<Q>>> {
    let binv = b.hnf().inverse().expect("full-rank lattice");
    elements
        .iter()
        .map(|a| b.basis().iter().map(|bj| binv.left_apply(&h.act(a, bj))).collect())
        .collect()
}

/// `A_H(B) = { z ∈ H : z · B ⊆ B }` for `B` a lattice in `L`, given in
/// subfield coordinates.
pub fn associated_order(h: &HopfGaloisStructure, b: &Lattice) -> Result<Order, OrderError> {
    let d = h.dim();
    if b.dim() != d {
        return Err(OrderError::DimensionMismatch { expected: d, found: b.dim() });
    }
    let unit: Vec<Vec<Q>> = (0..d).map(|i| crate::rational::unit_vector(d, i)).collect();
    let table = action_in_lattice(h, &unit, b);
    let mut m = Matrix::zero(d, d * d);
    for (i, rows) in table.iter().enumerate() {
        for (j, c) in rows.iter().enumerate() {
            for (k, x) in c.iter().enumerate() {
                if !x.is_zero() {
                    m[(i, j * d + k)] = x.clone();
                }
            }
        }
    }
    let lattice = Lattice::preimage(&m, b.prime())?;
    Order::new(h, lattice)
}
