//! Exact multiple lattice packings, coverings and tilings of the plane by
//! triangles and half-open stair polygons.
//!
//! Every coordinate is an exact [`Rational`]. The crate answers questions of
//! the form "how many lattice translates of `K` contain the point `u`", finds
//! the global extrema of that count, and builds the j-fold packing, covering
//! and exact tiling predicates on top of it. Around that engine sit:
//!
//! * [`critical`]: the largest packing scale and smallest covering scale of
//!   the standard triangle for a fixed lattice, with flip certificates;
//! * [`stair_theory`]: the stair polygon `S_j(Λ)` selected by the "first j
//!   points" rule, the canonical stair `S(j)` and the lattices `Λ(m, j)`;
//! * [`arith`]: the generalized Euler function `φ^k`;
//! * [`density`]: closed-form j-fold densities and optimal lattices of a
//!   triangle, plus affine normalisation of arbitrary triangles;
//! * [`search`]: brute-force lattice search and numeric stair-area
//!   optimisation used as independent evidence.

pub mod arith;
pub mod critical;
pub mod density;
pub mod geometry;
pub mod lattice;
pub mod multiplicity;
pub mod rational;
pub mod search;
pub mod stair;
pub mod stair_theory;
mod sweep;

pub use crate::critical::{candidate_scales, lambda_lower, lambda_upper, ScaleCertificate};
pub use crate::density::{AffineMap, DensityKind, DensityResult};
pub use crate::geometry::{prec, Point, Rect, ScaledTriangle};
pub use crate::lattice::{enumerate_integer_sublattices, rational_dilates, FundamentalDomain, Lattice};
pub use crate::multiplicity::{
    count_at, multiplicity_extrema, random_sampling_oracle, Mode, MultiplicityReport, Predicate, Region, Shape,
};
pub use crate::rational::{rat, Rational};
pub use crate::stair::StairPolygon;
pub use crate::stair_theory::{CanonicalRegions, SjResult};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("rectangle has min greater than max")]
    InvalidRect,
    #[error("invalid stair polygon: {0}")]
    InvalidStair(String),
    #[error("scale must be positive, got {0}")]
    NonPositiveScale(Rational),
    #[error("basis vectors are linearly dependent")]
    SingularBasis,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("region mode {found:?} not accepted here (expected {expected:?})")]
    ModeMismatch { expected: Mode, found: Mode },
    #[error("half-open membership is only defined for stair polygons")]
    HalfOpenTriangle,
    #[error("{0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("triangle vertices are collinear")]
    Collinear,
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("not a {j}-fold {kind}: point {witness} has multiplicity {multiplicity}")]
    PredicateFailed {
        kind: &'static str,
        j: u32,
        witness: Box<Point>,
        multiplicity: i64,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
