//! Integral structures in Hopf-Galois structures: `Λ^G = O_E[N]^G`,
//! associated orders, and rank-one freeness decided by residue search.

mod order;
mod pipelines;
mod search;

pub use order::{associated_order, lambda_fixed_order, restrict_to_subfield, Order};
pub use pipelines::{
    counterexample, counterexample_element, induced_structure, inertia_acts_trivially_on_t, local_check_global,
    non_normal_descent, principal_ideal, theta_identities, verify_theorem_commutative_tame, CounterexampleReport,
    DescentReport, LocalEntry, PipelineOptions, TheoremEntry, ThetaCheck,
};
pub use search::{generator_search, FreenessResult, FreenessStatus, SearchOptions, DEFAULT_SEARCH_BOUND};

use crate::rational::{fmt_vec, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrderError {
    #[error("lattice does not contain 1")]
    MissingOne,
    #[error("lattice is not closed under multiplication")]
    NotClosed,
    #[error("order does not map the lattice into itself")]
    NotContained,
    #[error("lattice has rank {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("search space {p}^{dim} exceeds the bound {bound}")]
    SearchTooLarge { p: u64, dim: usize, bound: u64 },
    #[error("generator failed the lattice equality check")]
    VerificationFailed,
    #[error("Gal(E/L) has no normal complement")]
    NotAlmostClassical,
    #[error("E/L is ramified above {p}")]
    RamifiedOverSubfield { p: u64 },
    #[error("lattice is not stable under the Galois group")]
    NotAmbiguous,
    #[error(transparent)]
    Group(#[from] crate::perm_groups::GroupError),
    #[error(transparent)]
    Field(#[from] crate::etale_fields::FieldError),
    #[error(transparent)]
    Hopf(#[from] crate::hopf_structures::HopfError),
}

pub(crate) fn ser_coords<S: serde::Serializer>(v: &Option<Vec<Q>>, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&v.as_deref().map(fmt_vec), s)
}
