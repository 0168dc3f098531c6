use serde::Serialize;

use super::order::action_in_lattice;
use super::{Order, OrderError};
use crate::etale_fields::Lattice;
use crate::hopf_structures::HopfGaloisStructure;
use crate::par::{find_first, Exec};
use crate::rational::{is_p_integral, q, rank_mod_p, residue, Q};

pub const DEFAULT_SEARCH_BOUND: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest number of residue classes `p^n` that will be searched.
    pub bound: u64,
    pub exec: Exec,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { bound: DEFAULT_SEARCH_BOUND, exec: Exec::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FreenessStatus {
    Free,
    NotFree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FreenessResult {
    pub status: FreenessStatus,
    /// Algebra coordinates in `E`.
    #[serde(rename = "generatorCoords", serialize_with = "super::ser_coords")]
    pub generator: Option<Vec<Q>>,
    /// Residue classes examined, including the successful one.
    pub search_size: u64,
}

impl FreenessResult {
    pub fn is_free(&self) -> bool {
        self.status == FreenessStatus::Free
    }
}

/// Decides whether `B` (subfield coordinates) is free of rank one over `A`.
///
/// `x` generates iff the images of the basis of `A` span `B/pB`; classes
/// `x = Σ r_j b_j` with `0 ≤ r_j < p` are tried in lexicographic order of
/// `(r_1, …, r_n)` and the first success is re-checked by comparing `A·x`
/// and `B` as lattices.
pub fn generator_search(
    h: &HopfGaloisStructure,
    a: &Order,
    b: &Lattice,
    opts: &SearchOptions,
) -> Result<FreenessResult, OrderError> {
    let p = b.prime();
    if a.prime() != p {
        return Err(crate::etale_fields::FieldError::PrimeMismatch(a.prime(), p).into());
    }
    let d = b.dim();
    let total = (p as u128).checked_pow(d as u32).filter(|&t| t <= opts.bound as u128);
    let Some(total) = total else {
        return Err(OrderError::SearchTooLarge { p, dim: d, bound: opts.bound });
    };
    let total = total as u64;
    let basis = a.basis();
    let table = action_in_lattice(h, &basis, b);
    let mut residues = vec![vec![vec![0u64; d]; d]; basis.len()];
    for (i, rows) in table.iter().enumerate() {
        for (j, c) in rows.iter().enumerate() {
            for (k, x) in c.iter().enumerate() {
                if !is_p_integral(x, p) {
                    return Err(OrderError::NotContained);
                }
                residues[i][j][k] = residue(x, p);
            }
        }
    }
    let digits = |mut idx: u64| {
        let mut r = vec![0u64; d];
        for slot in r.iter_mut().rev() {
            *slot = idx % p;
            idx /= p;
        }
        r
    };
    let spans = |idx: u64| {
        let r = digits(idx);
        let mut m: Vec<Vec<u64>> = residues
            .iter()
            .map(|rows| {
                let mut v = vec![0u64; d];
                for (rj, row) in r.iter().zip(rows) {
                    if *rj == 0 {
                        continue;
                    }
                    for (vk, x) in v.iter_mut().zip(row) {
                        *vk = (*vk + rj * x) % p;
                    }
                }
                v
            })
            .collect();
        rank_mod_p(&mut m, p) == d
    };
    match find_first(opts.exec, total, spans) {
        None => Ok(FreenessResult { status: FreenessStatus::NotFree, generator: None, search_size: total }),
        Some(idx) => {
            let r = digits(idx);
            let bb = b.basis();
            let mut x = vec![Q::from_integer(0.into()); d];
            for (rj, bj) in r.iter().zip(&bb) {
                for (xk, y) in x.iter_mut().zip(bj) {
                    *xk += q(*rj as i64) * y;
                }
            }
            let images: Vec<Vec<Q>> = basis.iter().map(|c| h.act(c, &x)).collect();
            if Lattice::new(images, p)? != *b {
                return Err(OrderError::VerificationFailed);
            }
            Ok(FreenessResult {
                status: FreenessStatus::Free,
                generator: Some(h.from_subfield(&x)),
                search_size: idx + 1,
            })
        }
    }
}
