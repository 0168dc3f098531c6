//! Exact computations with Hopf-Galois structures on tame extensions.
//!
//! Fields are rational structure-constant algebras with an explicit Galois
//! action; p-adic statements are modeled by localizing at `p`. On top of that
//! the crate builds the Hopf algebras `E[N]^G`, their integral orders, and a
//! complete decision procedure for rank-one freeness of fractional ideals.

pub mod etale_fields;
pub mod hopf_structures;
pub mod integral_orders;
pub mod linalg;
pub mod par;
pub mod perm_groups;
pub mod rational;
pub mod scenarios;

pub use par::Exec;
pub use rational::Q;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Group(#[from] perm_groups::GroupError),
    #[error(transparent)]
    Field(#[from] etale_fields::FieldError),
    #[error(transparent)]
    Hopf(#[from] hopf_structures::HopfError),
    #[error(transparent)]
    Order(#[from] integral_orders::OrderError),
}
