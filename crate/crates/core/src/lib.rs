//! Exact-arithmetic laboratory for the rotation reduction of the planar
//! distinct-distances problem.
//!
//! Every equal-distance quadruple of a point set determines a rotation of the
//! plane. The census enumerates them, the lift carries rotations into a
//! three-dimensional chart where the rotations taking `a` to `b` form a
//! parabola, and the polynomial toolkit studies those parabolas. All
//! arithmetic is over arbitrary-precision rationals.

pub mod census;
pub mod error;
pub mod exact;
pub mod generators;
pub mod lift;
pub mod polymethod;
pub mod surfaces;

pub use error::{Error, Result};
pub use exact::{
    apply_anti_rotation, apply_rotation, collinear, format_rational, frac, int, parse_rational,
    rotation_from_two_pairs, squared_distance, AntiRotation, PlanarPoint, PointSet, Rational, Rotation,
};
