//! Right transversals of subgroups, the right quasigroups with identity they
//! induce, group torsion, and the extension groups rebuilt from a quasigroup
//! table alone. Numerical companions realize the reflection transversal on
//! unit spheres and the Cayley–Dickson quasigroups on `S⁰`, `S¹`, `S³`, `S⁷`.
//!
//! The finite modules work on indices. The numerical modules are generic over
//! the float type through [`Scalar`]; the Cayley–Dickson product only needs a
//! ring and also runs exactly over integers.

pub mod catalog;
pub mod division;
pub mod error;
pub mod extension;
pub mod perm;
pub mod quasigroup;
pub mod report;
pub mod scalar;
pub mod sphere;
pub mod suite;
pub mod transversal;

pub use error::{Error, Result};
pub use extension::{ExtensionElement, ExtensionGroup};
pub use perm::{Perm, PermGroup};
pub use quasigroup::RightQuasigroup;
pub use scalar::{Ring, Scalar};
pub use transversal::{CosetSpace, FiniteGroup, Subgroup, Transversal};

pub type UnitVector = sphere::UnitVector<f64>;
pub type UnitVector32 = sphere::UnitVector<f32>;
pub type Isometry = sphere::Isometry<f64>;
pub type SphereTransversal = sphere::SphereTransversal<f64>;

pub type HyperNumber = division::HyperNumber<f64>;
pub type HyperNumber32 = division::HyperNumber<f32>;
/// Exact Cayley–Dickson numbers over the integers.
pub type IntHyperNumber = division::HyperNumber<i64>;
