//! Finite groups by multiplication table, permutations, and regular
//! permutation subgroups.

mod group;
mod perm;
mod regular;

pub use group::{type_name_from_profile, FiniteGroup, GroupFile, Subgroup, MAX_GROUP_ORDER};
pub use perm::Permutation;
pub use regular::{
    enumerate_regular_subgroups, induce_regular_subgroup, sylow_split, CosetSpace, EnumerationOptions,
    Induced, RegularSubgroup, SylowSplit, DEFAULT_ENUMERATION_BOUND,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("group of order {order} exceeds the supported maximum {max}")]
    TooLarge { order: usize, max: usize },
    #[error("degree {degree} exceeds the enumeration bound {bound}")]
    BoundExceeded { degree: usize, bound: usize },
    #[error("group is not abelian")]
    NotAbelian,
    #[error("inertia subgroup of order {inertia_order} is not prime to p = {p}")]
    NotTame { p: u64, inertia_order: usize },
    #[error("quotient by the inertia subgroup is not cyclic")]
    QuotientNotCyclic,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("induced subgroup is not normalized by the left translations")]
    NotNormalized,
    #[error("not a regular subgroup: {0}")]
    NotRegular(String),
    #[error("Sylow factor is not stable under the normalizing group")]
    NotStable,
    #[error("unknown group element `{0}`")]
    UnknownElement(String),
    #[error("invalid coset labeling: {0}")]
    BadLabeling(String),
}
