//! The quaternion engine: the maximal orders of `End(E0)` and `End(E1728)`,
//! their left ideals of norm ℓ, and the neighborhood those ideals predict.

pub mod algebra;
pub mod ideal;
pub mod lattice;
pub mod order;
pub mod predict;
pub mod theta;

use thiserror::Error;

pub use algebra::{QuatAlgebra, Quaternion};
pub use ideal::{IdealClass, IdealLabel, LeftIdeal, XEll};
pub use lattice::Lattice;
pub use order::{standard_order, Order, OrderKind};
pub use predict::{predicted_neighborhood, Prediction};
pub use theta::Theta;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuatError {
    #[error("q must be 1 or 3, got {0}")]
    UnsupportedQ(i64),
    #[error("{0} is not a prime greater than 3")]
    BadPrime(u64),
    #[error("{kind:?} is not supersingular for p = {p}")]
    Congruence { kind: OrderKind, p: u64 },
    #[error("generators do not span a full-rank lattice")]
    NotFullRank,
    #[error("lattice is not contained in the larger one")]
    NotContained,
    #[error("not an order: {0}")]
    NotAnOrder(&'static str),
    #[error("index {0} is not a perfect square")]
    NonSquareIndex(String),
    #[error("element has zero norm")]
    NotInvertible,
    #[error("element is not a unit modulo ℓ")]
    NotAUnit,
    #[error("image of the unit action is not in X_ℓ")]
    NotInXEll,
    #[error("ℓ = {ell} violates ℓ ∤ 2pq·[O : Z⟨i, j⟩] for p = {p}; the quaternion engine needs ℓ > 3 prime and ℓ ≠ p")]
    ThetaHypothesis { ell: u64, p: u64 },
}
