//! Number fields (and Galois algebras) as rational structure-constant
//! algebras with an explicit Galois action, plus p-local lattices.

mod algebra;
mod fixtures;
mod galois;
mod lattice;

pub use algebra::EtaleAlgebra;
pub use fixtures::{build_cyclotomic, build_kummer_cubic, load_algebra, AlgebraFile, PrimeFile};
pub use galois::{GaloisAlgebra, PrimeData, RamificationData};
pub use lattice::{p_integral_combination, Lattice};

/// Coordinates of an algebra element in the algebra basis.
pub type AlgebraElement = Vec<crate::Q>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid automorphisms: {0}")]
    InvalidAutomorphism(String),
    #[error("invalid integral basis: {0}")]
    InvalidIntegralBasis(String),
    #[error("invalid prime data at {p}: {reason}")]
    InvalidPrimeData { p: u64, reason: String },
    #[error("lattice generators have rank {rank}, expected {dim}")]
    RankDeficient { rank: usize, dim: usize },
    #[error("element is not invertible")]
    NotInvertible,
    #[error("unknown basis element `{0}`")]
    UnknownBasisElement(String),
    #[error("lattices are localized at different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),
    #[error("wild ramification at p = {p}")]
    WildRamification { p: u64 },
    #[error("no prime data supplied for the ramified prime {p}")]
    MissingPrimeData { p: u64 },
    #[error("valuation of zero")]
    ZeroElement,
    #[error("more than one prime above {p}")]
    MultiplePrimes { p: u64 },
    #[error("unsupported cyclotomic conductor {0}")]
    UnsupportedN(u64),
    #[error("m = {0} must be a prime congruent to 2 mod 3")]
    BadM(u64),
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Group(#[from] crate::perm_groups::GroupError),
}
