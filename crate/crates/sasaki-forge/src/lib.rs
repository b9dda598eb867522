//! Momentum-construction geometry on powers of the canonical bundle of a
//! toric Fano base: volume-minimizing Reeb vectors on the moment cone,
//! closed-form Einstein and soliton profiles, the associated coordinate
//! change and zero-section scaling constant, and numerical certification
//! of every defining equation.
//!
//! Numeric kernels are generic over the scalar type via [`real::Real`]
//! (`f32`/`f64`); the cone combinatorics run in exact rational arithmetic
//! and the D-homothetic bookkeeping accepts rational scalars so it stays
//! exact. The documented tolerances assume `f64`, which is what the CLI
//! binary, the type aliases below, and the acceptance suite instantiate.

pub mod cli;
pub mod cone;
pub mod coordinates;
pub mod curvature;
pub mod error;
pub mod profiles;
pub mod quadrature;
pub mod real;
pub mod reeb;
pub mod report;

pub use error::{Error, Result};

/// Default scalar for the CLI paths and the aliases below.
pub type Scalar = f64;

/// `f64` Reeb vector.
pub type ReebVector64 = cone::ReebVector<Scalar>;
/// `f64` slice polytope.
pub type SlicePolytope64 = cone::SlicePolytope<Scalar>;
/// `f64` Einstein profile.
pub type KeProfile64 = profiles::KeProfile<Scalar>;
/// `f64` soliton profile.
pub type SolitonProfile64 = profiles::SolitonProfile<Scalar>;
/// `f64` profile of either family.
pub type Profile64 = profiles::Profile<Scalar>;
/// `f64` coordinate map.
pub type CoordinateMap64<'a> = coordinates::CoordinateMap<'a, Scalar>;
/// `f64` split 2-form.
pub type SplitForm64 = curvature::SplitForm<Scalar>;
/// `f64` critical-Reeb output.
pub type CriticalReebResult64 = reeb::CriticalReebResult<Scalar>;
