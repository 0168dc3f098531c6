//! Hopf-Galois structures via Greither-Pareigis: `H = E[N]^G`, its action
//! on the field, and the map model `Map(G, E)`.

mod group_algebra;
mod map_model;
mod structure;

pub use group_algebra::GroupAlgebraElement;
pub use map_model::{
    f_commutes_with_fixed_s, f_element, gamma_fixed_matches, gp_embed, gp_project, induced_on_cosets,
    project_to_cosets, projection_pi, MapModelElement,
};
pub(crate) use structure::fixed_subspace;
pub use structure::HopfGaloisStructure;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HopfError {
    #[error("fixed ring has dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("regular subgroup has degree {degree} but there are {cosets} cosets")]
    DegreeMismatch { degree: usize, cosets: usize },
    #[error("coset action on the subfield is not well defined")]
    NotWellDefined,
    #[error("element does not lie in the subfield")]
    NotInSubfield,
    #[error("fixed ring is not closed under multiplication")]
    NotClosed,
    #[error("counit is not rational")]
    CounitNotRational,
    #[error("subgroup is not stable under the Galois action")]
    NotStable,
    #[error("element of Map(G, E) is not Galois-fixed")]
    NotFixed,
    #[error("element does not have trace one")]
    TraceNotOne,
    #[error("permutation does not factor through the given decomposition")]
    NotDirectProduct,
    #[error(transparent)]
    Group(#[from] crate::perm_groups::GroupError),
    #[error(transparent)]
    Field(#[from] crate::etale_fields::FieldError),
}

#[cfg(test)]
mod tests;
